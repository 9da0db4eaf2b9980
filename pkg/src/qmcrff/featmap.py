"""Fourier feature maps, exact and approximate Gram matrices, and the
relative-error metrics used to compare them."""

from dataclasses import dataclass

import numpy as np

from .densities import GAUSSIAN, FrequencySet

DEFAULT_GRAM_CAP = 20000


@dataclass
class WeightedFeatureMap:
    """Frequency set plus nonnegative per-feature weights (uniform 1/s by default).

    Uniform weights sum to 1; optimized weights need not.
    """

    freqs: FrequencySet
    weights: np.ndarray = None

    def __post_init__(self):
        if self.weights is None:
            self.weights = np.full(self.freqs.s, 1.0 / self.freqs.s)
        self.weights = np.asarray(self.weights, dtype=float)
        if self.weights.shape != (self.freqs.s,):
            raise ValueError(f"weights must have shape ({self.freqs.s},)")
        if np.any(self.weights < 0.0) or not np.all(np.isfinite(self.weights)):
            raise ValueError("weights must be finite and nonnegative")

    @property
    def s(self):
        return self.freqs.s

    @property
    def d(self):
        return self.freqs.d


def feature_vector(fmap, x):
    """Complex feature vector with component l equal to sqrt(xi_l) e^{-i x.w_l}."""
    phases = np.asarray(x, dtype=float) @ fmap.freqs.points.T
    return np.sqrt(fmap.weights) * np.exp(-1j * phases)


def real_feature_vector(fmap, x):
    """cos/sin realization: (sqrt(xi_l) cos(x.w_l), sqrt(xi_l) sin(x.w_l)).

    Its Euclidean inner product reproduces Re approx_kernel exactly.
    """
    phases = np.asarray(x, dtype=float) @ fmap.freqs.points.T
    root = np.sqrt(fmap.weights)
    return np.concatenate([root * np.cos(phases), root * np.sin(phases)])


def feature_matrix(fmap, X):
    """Row i is feature_vector(fmap, X[i])."""
    phases = np.asarray(X, dtype=float) @ fmap.freqs.points.T
    return np.sqrt(fmap.weights)[None, :] * np.exp(-1j * phases)


def real_feature_matrix(fmap, X):
    """Row i is real_feature_vector(fmap, X[i]); shape (n, 2s)."""
    phases = np.asarray(X, dtype=float) @ fmap.freqs.points.T
    root = np.sqrt(fmap.weights)[None, :]
    return np.concatenate([root * np.cos(phases), root * np.sin(phases)], axis=1)


def approx_kernel(fmap, x, z):
    """Feature-map kernel estimate sum_l xi_l e^{-i (x-z).w_l} (Hermitian in x, z)."""
    delta = np.asarray(x, dtype=float) - np.asarray(z, dtype=float)
    phases = fmap.freqs.points @ delta
    return complex(np.sum(fmap.weights * np.exp(-1j * phases)))


def gram_exact(density, X, max_n=DEFAULT_GRAM_CAP):
    """Exact kernel Gram matrix of the rows of X (PSD, unit diagonal)."""
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    if n < 1:
        raise ValueError("gram_exact requires at least one row")
    if n > max_n:
        raise ValueError(f"n={n} exceeds the Gram cap {max_n}")
    Xs = X / density.scale[None, :]
    if density.kind == GAUSSIAN:
        sq = np.sum(Xs * Xs, axis=1)
        d2 = sq[:, None] + sq[None, :] - 2.0 * (Xs @ Xs.T)
        np.maximum(d2, 0.0, out=d2)
        K = np.exp(-0.5 * d2)
    else:
        acc = np.zeros((n, n))
        for j in range(X.shape[1]):
            acc += np.abs(Xs[:, j][:, None] - Xs[:, j][None, :])
        K = np.exp(-acc)
    return 0.5 * (K + K.T)


def gram_approx(fmap, X, max_n=DEFAULT_GRAM_CAP):
    """Real part of the feature-map Gram estimate (symmetric by construction)."""
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    if n < 1:
        raise ValueError("gram_approx requires at least one row")
    if n > max_n:
        raise ValueError(f"n={n} exceeds the Gram cap {max_n}")
    phases = X @ fmap.freqs.points.T
    root = np.sqrt(fmap.weights)[None, :]
    C = root * np.cos(phases)
    S = root * np.sin(phases)
    K = C @ C.T + S @ S.T
    return 0.5 * (K + K.T)


def spectral_norm(A, tol=1e-6, max_iters=1000, seed=0):
    """Largest singular value of a symmetric matrix by power iteration.

    Deterministic seeded start vector; stops when the Rayleigh estimate
    changes by less than ``tol`` relatively.
    """
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    rng = np.random.Generator(np.random.PCG64(seed))
    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)
    estimate = 0.0
    for _ in range(max_iters):
        w = A @ v
        norm_w = np.linalg.norm(w)
        if norm_w == 0.0:
            return 0.0
        if abs(norm_w - estimate) <= tol * norm_w:
            return float(norm_w)
        estimate = norm_w
        v = w / norm_w
    return float(estimate)


def relative_errors(K, K_approx):
    """(spectral, frobenius) relative errors of K_approx against K."""
    K = np.asarray(K, dtype=float)
    K_approx = np.asarray(K_approx, dtype=float)
    if K.shape != K_approx.shape:
        raise ValueError(f"shape mismatch: {K.shape} vs {K_approx.shape}")
    E = K - K_approx
    denom_f = np.linalg.norm(K)
    denom_2 = spectral_norm(K)
    rel_f = float(np.linalg.norm(E) / denom_f) if denom_f > 0 else 0.0
    rel_2 = float(spectral_norm(E) / denom_2) if denom_2 > 0 else 0.0
    return rel_2, rel_f


@dataclass
class GramErrorReport:
    """Per-(sequence, s) Gram approximation errors aggregated over trials."""

    label: str
    s: int
    trials: int
    spectral_mean: float
    spectral_std: float
    frobenius_mean: float
    frobenius_std: float

    def to_json_dict(self):
        return {
            "label": self.label,
            "s": self.s,
            "trials": self.trials,
            "relative_spectral": {"mean": self.spectral_mean, "std": self.spectral_std},
            "relative_frobenius": {"mean": self.frobenius_mean, "std": self.frobenius_std},
        }


def summarize_gram_errors(label, s, pairs):
    """Aggregate (spectral, frobenius) pairs from repeated trials."""
    arr = np.asarray(pairs, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("pairs must be a sequence of (spectral, frobenius) tuples")
    std = arr.std(axis=0, ddof=1) if arr.shape[0] > 1 else np.zeros(2)
    mean = arr.mean(axis=0)
    return GramErrorReport(label=label, s=s, trials=arr.shape[0],
                           spectral_mean=float(mean[0]), spectral_std=float(std[0]),
                           frobenius_mean=float(mean[1]), frobenius_std=float(std[1]))
