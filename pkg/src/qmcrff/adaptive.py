"""Adaptive frequency sequences by direct discrepancy minimization:
analytic gradient, Polak-Ribiere-plus conjugate gradient with Armijo
backtracking, global and greedy point optimization, and nonnegative
weight optimization."""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_triangular

from .densities import FrequencySet
from .discrepancy import (
    assemble_H_v,
    gaussian_discrepancy_terms,
    gaussian_point_factors,
    _sinc_factor,
)
from .ioutil import NumericalError

_SQRT_2PI = math.sqrt(2.0 * math.pi)
_SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)
_MIN_STEP = 1e-16


@dataclass
class OptimizerOptions:
    """Knobs for the nonlinear conjugate gradient loop.

    ``restart_period`` defaults to the number of variables when left None.
    ``seed`` is reserved for stochastic variants; the deterministic CG
    ignores it.
    """

    max_iters: int = 50
    grad_tol: float = 1e-10
    armijo_c: float = 1e-4
    backtrack_factor: float = 0.5
    restart_period: int = None
    seed: int = 0

    def __post_init__(self):
        if self.max_iters < 0:
            raise ValueError("max_iters must be >= 0")
        if not self.grad_tol > 0:
            raise ValueError("grad_tol must be positive")
        if not 0.0 < self.armijo_c < 1.0:
            raise ValueError("armijo_c must lie in (0, 1)")
        if not 0.0 < self.backtrack_factor < 1.0:
            raise ValueError("backtrack_factor must lie in (0, 1)")
        if self.restart_period is not None and self.restart_period < 1:
            raise ValueError("restart_period must be >= 1")


@dataclass
class OptTrace:
    """Per-iteration record of a descent run (or of greedy appends).

    For line-search-driven runs ``objective_values`` is non-increasing by
    construction.  ``x`` is the final flattened iterate; wrappers attach
    the corresponding FrequencySet (and weights, when applicable).
    """

    x: np.ndarray
    objective_values: list = field(default_factory=list)
    grad_norms: list = field(default_factory=list)
    step_sizes: list = field(default_factory=list)
    n_iters: int = 0
    converged: bool = False
    line_search_failed: bool = False
    freqs: FrequencySet = None
    weights: np.ndarray = None

    def to_json_dict(self):
        out = {
            "objective_values": [float(v) for v in self.objective_values],
            "grad_norms": [float(v) for v in self.grad_norms],
            "step_sizes": [float(v) for v in self.step_sizes],
            "n_iters": self.n_iters,
            "converged": self.converged,
            "line_search_failed": self.line_search_failed,
        }
        if self.freqs is not None:
            out["freqs"] = self.freqs.to_json_dict()
        if self.weights is not None:
            out["weights"] = [float(v) for v in self.weights]
        return out


def _sincp(z):
    """Derivative of sin(z)/z with sinc'(0) = 0; series below |z| = 1e-3."""
    z = np.asarray(z, dtype=float)
    small = np.abs(z) < 1e-3
    zs = np.where(small, z, 0.0)
    series = zs * (-1.0 / 3.0 + zs * zs * (1.0 / 30.0 - zs * zs / 840.0))
    safe = np.where(small, 1.0, z)
    exact = np.cos(safe) / safe - np.sin(safe) / (safe * safe)
    return np.where(small, series, exact)


def discrepancy_gradient(freqs, density, box):
    """Gradient of the squared box discrepancy with respect to every frequency.

    Entry (l, j) combines the pairwise sinc derivatives against all other
    points with the derivative of the cross term's per-dimension factor:

        (2/s^2) sum_{m != l} b_j^2/pi sinc'(b_j (w_lj - w_mj))
                             prod_{q != j} sinc-factor_q(w_lq - w_mq)
        - (2/s) g_j'(w_lj) prod_{q != j} g_q(w_lq)

    with g_j'(x) = -sigma_j^2 x g_j(x)
                   + sqrt(2/pi) c_j sigma_j exp(-b_j^2/(2 sigma_j^2)) sin(b_j x).
    """
    if density.kind != "gaussian":
        raise ValueError("discrepancy_gradient requires the gaussian density")
    W = freqs.points
    s, d = W.shape
    if not (d == density.d == box.d):
        raise ValueError("dimension mismatch between frequencies, density and box")
    sigma = density.scale
    b = box.b

    # Per-dimension pairwise factors and their derivatives.
    factors = []
    dfactors = []
    for j in range(d):
        delta = W[:, j][:, None] - W[:, j][None, :]
        factors.append(_sinc_factor(b[j], delta))
        dfactors.append((b[j] * b[j] / math.pi) * _sincp(b[j] * delta))

    grad = np.zeros((s, d))
    for j in range(d):
        rest = np.ones((s, s))
        for q in range(d):
            if q != j:
                rest *= factors[q]
        # sinc'(0) = 0 zeroes the diagonal, so the m != l restriction is free.
        grad[:, j] = (2.0 / (s * s)) * (dfactors[j] * rest).sum(axis=1)

    G = gaussian_point_factors(density, box, W)
    c = sigma / _SQRT_2PI
    edge = _SQRT_2_OVER_PI * c * sigma * np.exp(-b * b / (2.0 * sigma * sigma))
    Gprime = -(sigma * sigma)[None, :] * W * G + edge[None, :] * np.sin(b[None, :] * W)
    for j in range(d):
        rest = np.ones(s)
        for q in range(d):
            if q != j:
                rest *= G[:, q]
        grad[:, j] -= (2.0 / s) * Gprime[:, j] * rest
    return grad


def nonlinear_cg(objective, gradient, x0, opts):
    """Polak-Ribiere-plus conjugate gradient with Armijo backtracking.

    Restarts to steepest descent every ``restart_period`` iterations and
    whenever the conjugate direction fails to be a descent direction.
    Accepted steps never increase the objective.  A line search that
    collapses below 1e-16 is reported in the trace, not raised.
    """
    x = np.asarray(x0, dtype=float).copy()
    restart = opts.restart_period or max(1, x.size)
    f = float(objective(x))
    if not math.isfinite(f):
        raise ValueError(f"objective is not finite at the starting point: {f}")
    g = np.asarray(gradient(x), dtype=float).ravel().copy()
    gnorm = float(np.linalg.norm(g))
    trace = OptTrace(x=x, objective_values=[f], grad_norms=[gnorm])
    if gnorm <= opts.grad_tol:
        trace.converged = True
        return trace

    direction = -g
    alpha_prev = None
    for it in range(1, opts.max_iters + 1):
        gd = float(g @ direction)
        if gd >= 0.0:
            direction = -g
            gd = -float(g @ g)
        alpha = 1.0 / (1.0 + gnorm) if alpha_prev is None \
            else alpha_prev / opts.backtrack_factor
        accepted = False
        while alpha >= _MIN_STEP:
            x_new = x + alpha * direction
            f_new = float(objective(x_new))
            if math.isfinite(f_new) and f_new <= f + opts.armijo_c * alpha * gd:
                accepted = True
                break
            # Safeguarded quadratic-interpolation backtrack.
            denom = 2.0 * (f_new - f - gd * alpha)
            if math.isfinite(denom) and denom > 0.0:
                cand = -gd * alpha * alpha / denom
                alpha = min(max(cand, 0.1 * alpha), opts.backtrack_factor * alpha)
            else:
                alpha *= opts.backtrack_factor
        if not accepted:
            trace.line_search_failed = True
            break
        # One interpolation refinement toward the 1-D minimizer; exact for
        # quadratic objectives, which keeps the conjugate directions honest.
        denom = 2.0 * (f_new - f - gd * alpha)
        if denom > 0.0:
            cand = -gd * alpha * alpha / denom
            if math.isfinite(cand) and _MIN_STEP <= cand <= 10.0 * alpha:
                x_cand = x + cand * direction
                f_cand = float(objective(x_cand))
                if f_cand < f_new and f_cand <= f + opts.armijo_c * cand * gd:
                    alpha, x_new, f_new = cand, x_cand, f_cand
        g_new = np.asarray(gradient(x_new), dtype=float).ravel().copy()
        beta = max(0.0, float(g_new @ (g_new - g)) / float(g @ g))
        if it % restart == 0:
            beta = 0.0
        direction = -g_new + beta * direction
        x, f, g = x_new, f_new, g_new
        alpha_prev = alpha
        gnorm = float(np.linalg.norm(g))
        trace.objective_values.append(f)
        trace.grad_norms.append(gnorm)
        trace.step_sizes.append(alpha)
        trace.n_iters = it
        if gnorm <= opts.grad_tol:
            trace.converged = True
            break
    trace.x = x
    return trace


def optimize_global(freqs0, density, box, opts):
    """Jointly optimize all s*d frequency coordinates to shrink the discrepancy."""
    s, d = freqs0.points.shape

    def objective(flat):
        return sum(gaussian_discrepancy_terms(flat.reshape(s, d), density, box))

    def gradient(flat):
        fs = FrequencySet(points=flat.reshape(s, d), provenance={})
        return discrepancy_gradient(fs, density, box).ravel()

    trace = nonlinear_cg(objective, gradient, freqs0.points.ravel(), opts)
    trace.freqs = FrequencySet(
        points=trace.x.reshape(s, d),
        provenance={"source": "global-adaptive", "init": freqs0.provenance,
                    "iterations": trace.n_iters},
    )
    return trace


def optimize_greedy(t_points, density, box, init_freqs, opts):
    """Grow a sequence one frequency at a time.

    Point t+1 minimizes the discrepancy of the augmented set with the
    existing points held fixed, started from the t-th row of
    ``init_freqs`` (a transformed low-discrepancy stream).  The line
    search guarantees the optimized point is no worse than its start.
    ``objective_values`` records the discrepancy after each append.
    """
    if t_points < 1:
        raise ValueError(f"optimize_greedy requires t_points >= 1, got {t_points}")
    if init_freqs.s < t_points:
        raise ValueError(
            f"init_freqs provides {init_freqs.s} starting points, need {t_points}"
        )
    d = init_freqs.d
    current = np.empty((0, d))
    trace = OptTrace(x=np.empty(0))
    for t in range(t_points):
        fixed = current

        def objective(w):
            W = np.vstack([fixed, w.reshape(1, d)])
            return sum(gaussian_discrepancy_terms(W, density, box))

        def gradient(w):
            W = np.vstack([fixed, w.reshape(1, d)])
            fs = FrequencySet(points=W, provenance={})
            return discrepancy_gradient(fs, density, box)[-1]

        inner = nonlinear_cg(objective, gradient, init_freqs.points[t], opts)
        current = np.vstack([fixed, inner.x.reshape(1, d)])
        trace.objective_values.append(inner.objective_values[-1])
        trace.grad_norms.append(inner.grad_norms[-1])
        trace.n_iters += inner.n_iters
    trace.x = current.ravel()
    trace.freqs = FrequencySet(
        points=current,
        provenance={"source": "greedy-adaptive", "init": init_freqs.provenance},
    )
    return trace


def _nnls(A, rhs, max_outer=None):
    """Lawson-Hanson active-set nonnegative least squares."""
    n = A.shape[1]
    if max_outer is None:
        max_outer = 3 * n + 10
    x = np.zeros(n)
    passive = np.zeros(n, dtype=bool)
    w = A.T @ rhs
    tol = 1e-12 * max(1.0, float(np.abs(w).max(initial=0.0)))
    for _ in range(max_outer):
        free = ~passive
        if not free.any() or float(w[free].max(initial=-np.inf)) <= tol:
            break
        j = int(np.flatnonzero(free)[np.argmax(w[free])])
        passive[j] = True
        while True:
            cols = np.flatnonzero(passive)
            sol, *_ = np.linalg.lstsq(A[:, cols], rhs, rcond=None)
            z = np.zeros(n)
            z[cols] = sol
            if sol.min(initial=1.0) > 0.0:
                x = z
                break
            blocking = passive & (z <= 0.0)
            movers = blocking & (x - z > 0.0)
            if not movers.any():
                # Degenerate corner: drop the nonpositive columns and retry.
                passive &= z > 0.0
                x = np.where(passive, x, 0.0)
                if not passive.any():
                    x = np.zeros(n)
                    break
                continue
            alpha = float((x[movers] / (x[movers] - z[movers])).min())
            x = x + alpha * (z - x)
            drop = passive & (x <= 1e-14 * max(1.0, float(np.abs(x).max(initial=0.0))))
            passive &= ~drop
            x[drop] = 0.0
        w = A.T @ (rhs - A @ x)
    return x


def optimize_weights(freqs, density, box, kkt_tol=1e-8):
    """Nonnegative weights minimizing xi.H.xi - 2 v.xi.

    Solves the convex quadratic program through Lawson-Hanson NNLS on the
    Cholesky factor of H (jittered by 1e-12 trace(H)/s on the diagonal for
    clustered point sets).  Returns the weights and the max-norm KKT
    residual max(||min(xi,0)||, ||min(Hxi-v,0)|| on xi=0, ||Hxi-v|| on xi>0).
    """
    H, v = assemble_H_v(freqs, density, box)
    s = H.shape[0]
    jitter = 1e-12 * float(np.trace(H)) / s
    try:
        L = np.linalg.cholesky(H + jitter * np.eye(s))
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            "sinc Gram matrix could not be factorized even with jitter; "
            "the frequency set may contain many coincident points"
        ) from exc
    rhs = solve_triangular(L, v, lower=True)
    xi = _nnls(L.T, rhs)

    grad_half = H @ xi - v
    zero = xi <= 0.0
    r_neg = max(0.0, float(-xi.min(initial=0.0)))
    r_zero = float(np.maximum(-grad_half[zero], 0.0).max(initial=0.0))
    r_pos = float(np.abs(grad_half[~zero]).max(initial=0.0))
    kkt = max(r_neg, r_zero, r_pos)
    if kkt > kkt_tol:
        warnings.warn(
            f"weight optimization stopped with KKT residual {kkt:.3e} > {kkt_tol:.1e}",
            RuntimeWarning,
        )
    return xi, kkt
