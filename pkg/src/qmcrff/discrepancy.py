"""Box-discrepancy machinery for frequency sequences.

The squared box discrepancy of a frequency set S = {w_1..w_s} against a
product density p over the band-limited box [-b_1,b_1] x ... x [-b_d,b_d]
is the squared RKHS distance between the kernel mean of p and the empirical
mean over S in the sinc-kernel space.  It splits into three terms:

    term1: (1/s^2) sum_{l,m} sinc_b(w_l, w_m)          (pairwise)
    term2: -(2/s)  sum_l prod_j g_j(w_lj)              (cross)
    term3: prod_j (sigma_j / (2 sqrt(pi))) erf(b_j / sigma_j)   (constant)

with, for the Gaussian density, g_j(x) = c_j exp(-sigma_j^2 x^2 / 2) *
Re erf(b_j/(sigma_j sqrt(2)) - i sigma_j x / sqrt(2)) and
c_j = sigma_j / sqrt(2 pi).  For non-Gaussian product densities the same
three terms are evaluated by per-dimension numerical quadrature of the
characteristic function; that path doubles as the independent oracle for
the closed form.
"""

import math
from dataclasses import dataclass

import numpy as np

from .densities import GAUSSIAN, characteristic_profile
from .specfun import re_erf_damped_grid

_SQRT_2 = math.sqrt(2.0)
_SQRT_PI = math.sqrt(math.pi)
_SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass
class Box:
    """Per-dimension half-widths b_j > 0 of the frequency-domain box."""

    b: np.ndarray

    def __post_init__(self):
        self.b = np.atleast_1d(np.asarray(self.b, dtype=float))
        if self.b.ndim != 1 or self.b.size < 1:
            raise ValueError("b must be a 1-D vector")
        if not np.all(np.isfinite(self.b)) or np.any(self.b <= 0.0):
            raise ValueError("all half-widths must be strictly positive and finite")

    @property
    def d(self):
        return self.b.size

    def scaled(self, factor):
        if factor <= 0.0:
            raise ValueError(f"box scale must be positive, got {factor}")
        return Box(b=self.b * factor)


@dataclass
class DiscrepancyReport:
    """Squared discrepancy with its three summands kept for diagnostics."""

    d_squared: float
    term1: float
    term2: float
    term3: float
    s: int
    d: int

    def to_json_dict(self):
        return {
            "d_squared": self.d_squared,
            "term_pairwise": self.term1,
            "term_cross": self.term2,
            "term_constant": self.term3,
            "s": self.s,
            "d": self.d,
        }


def _sinc_factor(b, t):
    """sin(b*t) / (pi*t) with the diagonal convention sin(b*0)/0 = b.

    A short even series takes over for |b*t| < 1e-6; this keeps the later
    gradient free of cancellation near coincident coordinates.
    """
    t = np.asarray(t, dtype=float)
    bt = b * t
    small = np.abs(bt) < 1e-6
    safe_t = np.where(small, 1.0, t)
    series = (b / np.pi) * (1.0 - bt * bt / 6.0)
    return np.where(small, series, np.sin(bt) / (np.pi * safe_t))


def sinc_kernel(box, u, v):
    """Reproducing kernel of the band-limited box: pi^-d prod_j sin(b_j du_j)/du_j."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != (box.d,) or v.shape != (box.d,):
        raise ValueError(f"u and v must have shape ({box.d},)")
    out = 1.0
    for j in range(box.d):
        out *= float(_sinc_factor(box.b[j], u[j] - v[j]))
    return out


def sinc_gram(box, W, V=None):
    """Matrix of sinc-kernel values between the rows of W and V (default W)."""
    W = np.asarray(W, dtype=float)
    V = W if V is None else np.asarray(V, dtype=float)
    out = np.ones((W.shape[0], V.shape[0]))
    for j in range(box.d):
        out *= _sinc_factor(box.b[j], W[:, j][:, None] - V[:, j][None, :])
    return out


def gaussian_point_factors(density, box, W):
    """Per-point, per-dimension cross factors g_j(w_lj) for the Gaussian density."""
    sigma = density.scale
    c = sigma / _SQRT_2PI
    a = box.b / (sigma * _SQRT_2)
    out = np.empty_like(W)
    for j in range(W.shape[1]):
        out[:, j] = c[j] * re_erf_damped_grid(a[j], sigma[j] * W[:, j] / _SQRT_2)
    return out


def gaussian_mean_norm_sq(density, box):
    """Squared norm of the Gaussian kernel mean: prod_j sigma_j/(2 sqrt(pi)) erf(b_j/sigma_j)."""
    return float(np.prod(density.scale / (2.0 * _SQRT_PI)
                         * np.array([math.erf(v) for v in box.b / density.scale])))


def _require_gaussian(density, what):
    if density.kind != GAUSSIAN:
        raise ValueError(
            f"{what} has a closed form only for the gaussian density; "
            "use box_discrepancy_quadrature for other product densities"
        )


def _check_dims(freqs_d, density, box):
    if not (freqs_d == density.d == box.d):
        raise ValueError(
            f"dimension mismatch: frequencies d={freqs_d}, density d={density.d}, box d={box.d}"
        )


def gaussian_discrepancy_terms(W, density, box):
    """Closed-form (term1, term2, term3) for a raw s x d frequency array."""
    s = W.shape[0]
    term1 = float(sinc_gram(box, W).sum()) / (s * s)
    term2 = -2.0 / s * float(np.prod(gaussian_point_factors(density, box, W), axis=1).sum())
    term3 = gaussian_mean_norm_sq(density, box)
    return term1, term2, term3


def box_discrepancy_gaussian(freqs, density, box):
    """Closed-form squared box discrepancy for the Gaussian density."""
    _require_gaussian(density, "box_discrepancy_gaussian")
    _check_dims(freqs.d, density, box)
    if freqs.s < 1:
        raise ValueError("box_discrepancy_gaussian requires at least one frequency")
    term1, term2, term3 = gaussian_discrepancy_terms(freqs.points, density, box)
    return DiscrepancyReport(d_squared=term1 + term2 + term3,
                             term1=term1, term2=term2, term3=term3,
                             s=freqs.s, d=freqs.d)


def box_discrepancy_quadrature(freqs, density, box, nodes=200):
    """Squared box discrepancy via per-dimension Gauss-Legendre quadrature.

    Evaluates the characteristic-function integrals int |phi_j|^2 and
    int phi_j cos(w beta) over [0, b_j] (both integrands are even) with
    ``nodes`` Gauss-Legendre points per dimension.  Works for any product
    density; restricted to d <= 3 because it serves as the test oracle for
    the closed form.  With s = 0 only the squared kernel-mean norm remains.
    """
    _check_dims(freqs.d, density, box)
    d = freqs.d
    if d > 3:
        raise ValueError(f"box_discrepancy_quadrature supports d <= 3, got d={d}")
    if nodes < 32:
        raise ValueError(f"box_discrepancy_quadrature requires nodes >= 32, got {nodes}")
    gl_x, gl_w = np.polynomial.legendre.leggauss(nodes)
    W = freqs.points
    s = W.shape[0]

    term1 = 1.0
    cross = np.ones(s)
    for j in range(d):
        beta = 0.5 * box.b[j] * (gl_x + 1.0)
        wq = 0.5 * box.b[j] * gl_w
        phi = characteristic_profile(density, j, beta)
        i1 = 2.0 * float(np.sum(wq * phi * phi))
        term1 *= i1 / (2.0 * math.pi)
        if s:
            i2 = 2.0 * (np.cos(np.outer(W[:, j], beta)) @ (wq * phi))
            cross *= i2 / (2.0 * math.pi)
    if s == 0:
        return term1
    term2 = -2.0 / s * float(cross.sum())
    term3 = float(sinc_gram(box, W).sum()) / (s * s)
    return term1 + term2 + term3


def expected_mc_discrepancy(s, density, box):
    """Expected squared discrepancy of s i.i.d. frequencies drawn from the density.

    (1/s) * (pi^-d prod_j b_j - prod_j sigma_j/(2 sqrt(pi)) erf(b_j/sigma_j))
    for the Gaussian density.
    """
    _require_gaussian(density, "expected_mc_discrepancy")
    if density.d != box.d:
        raise ValueError(f"dimension mismatch: density d={density.d}, box d={box.d}")
    if s < 1:
        raise ValueError(f"expected_mc_discrepancy requires s >= 1, got {s}")
    diag = float(np.prod(box.b)) / math.pi ** box.d
    return (diag - gaussian_mean_norm_sq(density, box)) / s


def assemble_H_v(freqs, density, box):
    """Quadratic-form data for weight optimization.

    H is the (PSD) sinc-kernel Gram matrix of the frequencies and v_l the
    kernel-mean inner product at w_l, so that the weighted squared
    discrepancy is  const - 2 v.xi + xi.H.xi.
    """
    _require_gaussian(density, "assemble_H_v")
    _check_dims(freqs.d, density, box)
    H = sinc_gram(box, freqs.points)
    v = np.prod(gaussian_point_factors(density, box, freqs.points), axis=1)
    return H, v


def weighted_discrepancy(freqs, weights, density, box):
    """Squared box discrepancy of the weighted empirical mean sum_l xi_l h(w_l, .)."""
    _require_gaussian(density, "weighted_discrepancy")
    _check_dims(freqs.d, density, box)
    xi = np.asarray(weights, dtype=float)
    if xi.shape != (freqs.s,):
        raise ValueError(f"weights must have shape ({freqs.s},)")
    if np.any(xi < 0.0):
        raise ValueError("weights must be nonnegative")
    H, v = assemble_H_v(freqs, density, box)
    term1 = gaussian_mean_norm_sq(density, box)
    return float(term1 - 2.0 * (v @ xi) + xi @ H @ xi)


@dataclass
class AverageCaseReport:
    """Empirical vs predicted mean squared integration error over the box."""

    empirical: float
    predicted: float
    stderr: float
    n_samples: int

    def to_json_dict(self):
        return {
            "empirical": self.empirical,
            "predicted": self.predicted,
            "stderr": self.stderr,
            "n_samples": self.n_samples,
        }


def average_case_mc_check(freqs, density, box, n_samples, seed, chunk=65536):
    """Monte Carlo check that the mean squared error over the box matches
    pi^d / prod_j b_j times the squared discrepancy.

    Draws u uniform on the box and evaluates the exact integral of
    e^{-i u.x} against the density (a product of characteristic-function
    values) minus the plain empirical average over the frequencies.
    """
    _require_gaussian(density, "average_case_mc_check")
    _check_dims(freqs.d, density, box)
    if n_samples < 1000:
        raise ValueError(f"average_case_mc_check requires n_samples >= 1000, got {n_samples}")
    rng = np.random.Generator(np.random.PCG64(seed))
    W = freqs.points
    s = freqs.s
    total = 0.0
    total_sq = 0.0
    remaining = n_samples
    while remaining > 0:
        m = min(chunk, remaining)
        u = rng.uniform(-box.b, box.b, size=(m, box.d))
        exact = np.ones(m)
        for j in range(box.d):
            exact *= characteristic_profile(density, j, u[:, j])
        empirical_mean = np.exp(-1j * (u @ W.T)).sum(axis=1) / s
        err_sq = np.abs(exact - empirical_mean) ** 2
        total += float(err_sq.sum())
        total_sq += float((err_sq * err_sq).sum())
        remaining -= m
    mean = total / n_samples
    var = max(total_sq / n_samples - mean * mean, 0.0) * n_samples / (n_samples - 1)
    stderr = math.sqrt(var / n_samples)
    d2 = box_discrepancy_gaussian(freqs, density, box).d_squared
    predicted = math.pi ** box.d / float(np.prod(box.b)) * d2
    return AverageCaseReport(empirical=mean, predicted=predicted,
                             stderr=stderr, n_samples=n_samples)
