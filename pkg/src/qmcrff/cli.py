"""Batch experiment harness: dataset ingestion, bounding-box estimation,
sequence generation, Gram-error curves, discrepancy reports, adaptive
optimization, and ridge regression on the feature-mapped data.

Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical failure.
"""

import argparse
import hashlib
import json
import sys
import warnings
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .adaptive import OptimizerOptions, optimize_global, optimize_greedy, optimize_weights
from .densities import FrequencySet, ProductDensity, transform
from .discrepancy import (
    Box,
    box_discrepancy_gaussian,
    average_case_mc_check,
    weighted_discrepancy,
)
from .featmap import (
    WeightedFeatureMap,
    gram_approx,
    gram_exact,
    real_feature_matrix,
    relative_errors,
    summarize_gram_errors,
)
from .ioutil import DataError, NumericalError, read_matrix_csv, write_matrix_csv
from .sequences import UnitPointSet, halton, lattice, mc_uniform

BASE_SEQUENCES = ("halton", "halton-scrambled", "lattice", "mc")
PIPELINE_SEQUENCES = BASE_SEQUENCES + ("adaptive-global", "adaptive-greedy", "weighted")

DEFAULT_KOROBOV_A = 1571


@dataclass
class Dataset:
    """Numeric design matrix with an optional target column."""

    X: np.ndarray
    y: np.ndarray = None
    column_stats: list = field(default_factory=list)

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=float)
        if self.X.ndim != 2:
            raise DataError("dataset must be a 2-D matrix")
        if not np.all(np.isfinite(self.X)):
            raise DataError("dataset contains non-finite entries")
        if self.y is not None:
            self.y = np.asarray(self.y, dtype=float)
            if self.y.shape != (self.X.shape[0],):
                raise DataError("target length must match the number of rows")
        if not self.column_stats:
            self.column_stats = [
                {"min": float(c.min()), "max": float(c.max()),
                 "mean": float(c.mean()), "std": float(c.std())}
                for c in self.X.T
            ]

    @property
    def n(self):
        return self.X.shape[0]

    @property
    def d(self):
        return self.X.shape[1]


def load_csv(path, has_target, skip_header=False):
    """Read a comma-separated numeric file; the last column becomes the
    target when ``has_target``. Malformed rows fail with their line number."""
    M = read_matrix_csv(path, skip_header=skip_header)
    if has_target:
        if M.shape[1] < 2:
            raise DataError(f"{path}: need at least two columns to split off a target")
        return Dataset(X=M[:, :-1], y=M[:, -1])
    return Dataset(X=M)


def estimate_box(ds, box_scale=1.0):
    """Per-feature half-widths from observed ranges: b_j = max_j - min_j.

    This is the exact supremum of |x_j - z_j| over data pairs.  Constant
    features get the degenerate width 1e-12 and a warning.
    """
    if ds.n < 2:
        raise DataError(f"estimate_box requires at least 2 rows, got {ds.n}")
    b = ds.X.max(axis=0) - ds.X.min(axis=0)
    flat = b <= 0.0
    if flat.any():
        warnings.warn(
            f"{int(flat.sum())} constant feature(s); using degenerate half-width 1e-12",
            RuntimeWarning,
        )
        b = np.where(flat, 1e-12, b)
    return Box(b=b * box_scale)


def korobov_vector(s, d, a=DEFAULT_KOROBOV_A):
    """Default rank-1 generating vector (1, a, a^2, ...) mod s."""
    z = np.empty(d, dtype=np.int64)
    z[0] = 1 % s if s > 1 else 0
    for j in range(1, d):
        z[j] = (z[j - 1] * a) % s
    return z


def make_pointset(seq, s, d, seed=0, start_index=1, generating_vector=None):
    """Unit-cube point set for one of the base sequence names."""
    if seq == "halton":
        return halton(s, d, scramble=False, start_index=start_index)
    if seq == "halton-scrambled":
        return halton(s, d, scramble=True, start_index=start_index)
    if seq == "lattice":
        z = korobov_vector(s, d) if generating_vector is None else generating_vector
        return lattice(s, d, z)
    if seq == "mc":
        return mc_uniform(s, d, seed)
    raise ValueError(f"unknown sequence {seq!r}; valid names: {', '.join(BASE_SEQUENCES)}")


def _cell_seed(*parts):
    return np.random.SeedSequence(tuple(int(p) for p in parts)).generate_state(1)[0]


@dataclass
class ExperimentConfig:
    """Settings for the Gram-error and pipeline experiments."""

    kernel: str = "gaussian"
    sigma: tuple = (1.0,)
    sequences: tuple = ("halton", "mc")
    s_grid: tuple = (64, 256)
    trials: int = 10
    box_scale: float = 1.0
    ridge_lambda: float = 1e-6
    split: float = 0.5
    seed: int = 0
    max_n: int = 2000
    adapt_iters: int = 50

    def __post_init__(self):
        if self.kernel not in ("gaussian", "laplacian"):
            raise ValueError(f"unknown kernel {self.kernel!r}; valid: gaussian, laplacian")
        bad = [q for q in self.sequences if q not in PIPELINE_SEQUENCES]
        if bad:
            raise ValueError(
                f"unknown sequence name(s) {bad}; valid names: {', '.join(PIPELINE_SEQUENCES)}"
            )
        if list(self.s_grid) != sorted(self.s_grid):
            raise ValueError("s grid must be ascending")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 0.0 < self.split < 1.0:
            raise ValueError("split fraction must lie in (0, 1)")
        if self.box_scale <= 0.0:
            raise ValueError("box_scale must be positive")
        if self.ridge_lambda <= 0.0:
            raise ValueError("ridge lambda must be positive")

    def to_json_dict(self):
        return {
            "kernel": self.kernel,
            "sigma": [float(v) for v in self.sigma],
            "sequences": list(self.sequences),
            "s_grid": [int(v) for v in self.s_grid],
            "trials": self.trials,
            "box_scale": self.box_scale,
            "ridge_lambda": self.ridge_lambda,
            "split": self.split,
            "seed": self.seed,
            "max_n": self.max_n,
            "adapt_iters": self.adapt_iters,
        }

    def hash(self):
        canon = json.dumps(self.to_json_dict(), sort_keys=True)
        return hashlib.sha256(canon.encode()).hexdigest()[:16]


def _subsample(ds, max_n, seed):
    if ds.n <= max_n:
        return ds
    rng = np.random.Generator(np.random.PCG64(_cell_seed(seed, 0x5AB5)))
    idx = rng.choice(ds.n, size=max_n, replace=False)
    idx.sort()
    y = ds.y[idx] if ds.y is not None else None
    return Dataset(X=ds.X[idx], y=y)


def _frequency_maps_for_cell(cfg, density, box, seq, s, d):
    """All (FrequencySet, weights) trials for one grid cell.

    Deterministic sequences produce a single trial; mc produces
    cfg.trials independently seeded ones.  Seeds depend only on the
    configuration and cell coordinates, never on execution order.
    """
    if seq == "mc":
        out = []
        for t in range(cfg.trials):
            seed = _cell_seed(cfg.seed, zlib.crc32(seq.encode()), s, t)
            pts = mc_uniform(s, d, seed)
            out.append((transform(pts, density), None))
        return out
    if seq in ("halton", "halton-scrambled", "lattice"):
        return [(transform(make_pointset(seq, s, d), density), None)]

    if density.kind != "gaussian":
        raise ValueError(f"adaptive sequence {seq!r} requires the gaussian kernel")
    base = transform(halton(s, d), density)
    if seq == "adaptive-global":
        opts = OptimizerOptions(max_iters=cfg.adapt_iters)
        return [(optimize_global(base, density, box, opts).freqs, None)]
    if seq == "adaptive-greedy":
        opts = OptimizerOptions(max_iters=200, grad_tol=1e-10)
        return [(optimize_greedy(s, density, box, base, opts).freqs, None)]
    if seq == "weighted":
        xi, _ = optimize_weights(base, density, box)
        return [(base, xi)]
    raise ValueError(f"unknown sequence {seq!r}")


def _gram_cell(cfg, density, box, X, K, seq, s, with_discrepancy=False):
    """Gram errors, optional discrepancies, for one (sequence, s) cell."""
    pairs = []
    discrepancies = []
    maps = _frequency_maps_for_cell(cfg, density, box, seq, s, X.shape[1])
    fmaps = []
    for freqs, weights in maps:
        fmap = WeightedFeatureMap(freqs=freqs, weights=weights)
        fmaps.append(fmap)
        pairs.append(relative_errors(K, gram_approx(fmap, X)))
        if with_discrepancy and density.kind == "gaussian":
            if weights is None:
                discrepancies.append(
                    box_discrepancy_gaussian(freqs, density, box).d_squared)
            else:
                discrepancies.append(
                    weighted_discrepancy(freqs, weights, density, box))
    report = summarize_gram_errors(seq, s, pairs)
    cell = report.to_json_dict()
    if discrepancies:
        cell["discrepancy"] = {
            "mean": float(np.mean(discrepancies)),
            "std": float(np.std(discrepancies, ddof=1)) if len(discrepancies) > 1 else 0.0,
            "box_scale": cfg.box_scale,
        }
    return cell, fmaps


def run_gram_experiment(cfg, ds):
    """Gram-error curves over the (sequence, s) grid; JSON-ready reports."""
    for q in cfg.sequences:
        if q not in BASE_SEQUENCES and q not in PIPELINE_SEQUENCES:
            raise ValueError(f"unknown sequence {q!r}")
    work = _subsample(ds, cfg.max_n, cfg.seed)
    density = ProductDensity.for_kernel(cfg.kernel, cfg.sigma, work.d)
    box = estimate_box(work, cfg.box_scale)
    K = gram_exact(density, work.X)
    cells = []
    for seq in cfg.sequences:
        for s in cfg.s_grid:
            cell, _ = _gram_cell(cfg, density, box, work.X, K, seq, s)
            cells.append(cell)
    return cells


def krr_train(Z, y, ridge_lambda):
    """Ridge solution of (Z'Z + lambda I) beta = Z'y by Cholesky."""
    if ridge_lambda <= 0.0:
        raise ValueError("ridge lambda must be positive")
    Z = np.asarray(Z, dtype=float)
    y = np.asarray(y, dtype=float)
    A = Z.T @ Z
    A[np.diag_indices_from(A)] += ridge_lambda
    try:
        factor = cho_factor(A, lower=True)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            "ridge system could not be factorized; try a larger --lambda"
        ) from exc
    return cho_solve(factor, Z.T @ y)


def krr_predict(beta, Z):
    return np.asarray(Z, dtype=float) @ beta


def regression_error(y_hat, y):
    """Relative l2 error, or absolute when the reference is all-zero."""
    norm = float(np.linalg.norm(y))
    err = float(np.linalg.norm(y_hat - y))
    return err / norm if norm > 0.0 else err


def _split_indices(n, split, seed):
    rng = np.random.Generator(np.random.PCG64(_cell_seed(seed, 0x5917)))
    perm = rng.permutation(n)
    n_train = max(1, min(n - 1, int(round(split * n))))
    return perm[:n_train], perm[n_train:]


def run_pipeline(cfg, ds, workers=1):
    """End-to-end experiment: sequences -> transforms -> features ->
    Gram errors, discrepancies, and (when a target is present) ridge
    regression.  Deterministic for a fixed config and seed regardless of
    the worker count."""
    work = _subsample(ds, cfg.max_n, cfg.seed)
    density = ProductDensity.for_kernel(cfg.kernel, cfg.sigma, work.d)
    box = estimate_box(work, cfg.box_scale)
    K = gram_exact(density, work.X)
    if work.y is not None:
        train_idx, test_idx = _split_indices(work.n, cfg.split, cfg.seed)

    def run_cell(args):
        seq, s = args
        cell, fmaps = _gram_cell(cfg, density, box, work.X, K, seq, s,
                                 with_discrepancy=True)
        if work.y is not None:
            errs = []
            for fmap in fmaps:
                Z = real_feature_matrix(fmap, work.X)
                beta = krr_train(Z[train_idx], work.y[train_idx], cfg.ridge_lambda)
                errs.append(regression_error(krr_predict(beta, Z[test_idx]),
                                             work.y[test_idx]))
            cell["regression_error"] = {
                "mean": float(np.mean(errs)),
                "std": float(np.std(errs, ddof=1)) if len(errs) > 1 else 0.0,
            }
        return cell

    grid = [(seq, s) for seq in cfg.sequences for s in cfg.s_grid]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            cells = list(pool.map(run_cell, grid))
    else:
        cells = [run_cell(g) for g in grid]

    return {
        "config": cfg.to_json_dict(),
        "config_hash": cfg.hash(),
        "n": work.n,
        "d": work.d,
        "box": [float(v) for v in box.b],
        "cells": cells,
        "generated_at": datetime.now(timezone.utc).isoformat(),
    }


# ---------------------------------------------------------------------------
# command-line interface


def _parse_floats(text):
    return tuple(float(v) for v in text.split(","))


def _parse_ints(text):
    return tuple(int(v) for v in text.split(","))


def _emit(payload, out):
    text = json.dumps(payload, indent=2, sort_keys=True)
    if out in (None, "-"):
        print(text)
    else:
        with open(out, "w") as fh:
            fh.write(text + "\n")


def _density_from_args(args, d):
    sigma = args.sigma if len(args.sigma) > 1 else (args.sigma[0],) * d
    if len(sigma) != d:
        raise DataError(f"--sigma needs 1 or {d} values, got {len(args.sigma)}")
    return ProductDensity.for_kernel(args.kernel, sigma, d)


def _box_from_args(args, d):
    b = args.b if len(args.b) > 1 else (args.b[0],) * d
    if len(b) != d:
        raise DataError(f"--b needs 1 or {d} values, got {len(args.b)}")
    return Box(b=np.asarray(b)).scaled(args.box_scale)


def _cmd_generate(args):
    pts = make_pointset(args.seq, args.s, args.d, seed=args.seed,
                        start_index=args.start,
                        generating_vector=np.asarray(args.z, dtype=np.int64)
                        if args.z else None)
    if args.json:
        _emit(pts.to_json_dict(), args.out)
    elif args.out in (None, "-"):
        for row in pts.points:
            print(",".join("%.17g" % v for v in row))
    else:
        pts.save_csv(args.out)
    return 0


def _cmd_transform(args):
    M = read_matrix_csv(args.infile, skip_header=args.header)
    if M.min() < 0.0 or M.max() > 1.0:
        raise DataError(f"{args.infile}: coordinates must lie in [0, 1]")
    pts = UnitPointSet(points=np.clip(M, 2.0 ** -52, 1 - 2.0 ** -52),
                       generator="file", seed_or_start=0)
    density = _density_from_args(args, pts.d)
    freqs = transform(pts, density)
    if args.out in (None, "-"):
        for row in freqs.points:
            print(",".join("%.17g" % v for v in row))
    else:
        freqs.save_csv(args.out)
    return 0


def _cmd_discrepancy(args):
    M = read_matrix_csv(args.freqs, skip_header=args.header)
    freqs = FrequencySet(points=M, provenance={"source": "file", "path": args.freqs})
    density = _density_from_args(args, freqs.d)
    box = _box_from_args(args, freqs.d)
    report = box_discrepancy_gaussian(freqs, density, box)
    payload = report.to_json_dict()
    payload["box_scale"] = args.box_scale
    _emit(payload, args.out)
    return 0


def _cmd_optimize(args):
    d = args.d
    density = _density_from_args(args, d)
    box = _box_from_args(args, d)
    if args.init == "file":
        if not args.infile:
            raise DataError("--init file requires --in with a frequency CSV")
        init = FrequencySet(points=read_matrix_csv(args.infile),
                            provenance={"source": "file", "path": args.infile})
        if init.d != d or init.s < args.s:
            raise DataError(f"--in must provide at least {args.s} rows of dimension {d}")
    else:
        init = transform(halton(args.s, d), density)

    if args.mode == "global":
        opts = OptimizerOptions(max_iters=args.max_iters)
        trace = optimize_global(
            FrequencySet(points=init.points[:args.s], provenance=init.provenance),
            density, box, opts)
    elif args.mode == "greedy":
        opts = OptimizerOptions(max_iters=args.max_iters, grad_tol=1e-10)
        trace = optimize_greedy(args.s, density, box, init, opts)
    else:
        base = FrequencySet(points=init.points[:args.s], provenance=init.provenance)
        xi, kkt = optimize_weights(base, density, box)
        payload = {
            "weights": [float(v) for v in xi],
            "kkt_residual": kkt,
            "objective": weighted_discrepancy(base, xi, density, box),
            "uniform_objective": box_discrepancy_gaussian(base, density, box).d_squared,
        }
        if args.out_points:
            base.save_csv(args.out_points)
        _emit(payload, args.out)
        return 0

    if args.out_points:
        trace.freqs.save_csv(args.out_points)
    _emit(trace.to_json_dict(), args.out)
    return 0


def _load_dataset(args, has_target=False):
    return load_csv(args.data, has_target=has_target, skip_header=args.header)


def _config_from_args(args, sequences, s_grid):
    return ExperimentConfig(
        kernel=args.kernel,
        sigma=args.sigma,
        sequences=sequences,
        s_grid=s_grid,
        trials=args.trials,
        box_scale=args.box_scale,
        ridge_lambda=getattr(args, "ridge_lambda", 1e-6),
        split=getattr(args, "split", 0.5),
        seed=args.seed,
        max_n=args.max_n,
        adapt_iters=getattr(args, "max_iters", 50),
    )


def _cmd_gram_error(args):
    ds = _load_dataset(args, has_target=False)
    cfg = _config_from_args(args, args.seq, args.s)
    _emit({"cells": run_gram_experiment(cfg, ds)}, args.out)
    return 0


def _cmd_krr(args):
    ds = _load_dataset(args, has_target=True)
    density = ProductDensity.for_kernel(
        args.kernel,
        args.sigma if len(args.sigma) > 1 else (args.sigma[0],) * ds.d,
        ds.d)
    train_idx, test_idx = _split_indices(ds.n, args.split, args.seed)
    pts = make_pointset(args.seq, args.s, ds.d, seed=args.seed)
    fmap = WeightedFeatureMap(freqs=transform(pts, density))
    Z = real_feature_matrix(fmap, ds.X)
    if args.features_out:
        write_matrix_csv(args.features_out, Z)
    beta = krr_train(Z[train_idx], ds.y[train_idx], args.ridge_lambda)
    payload = {
        "sequence": args.seq,
        "s": args.s,
        "lambda": args.ridge_lambda,
        "train_error": regression_error(krr_predict(beta, Z[train_idx]), ds.y[train_idx]),
        "test_error": regression_error(krr_predict(beta, Z[test_idx]), ds.y[test_idx]),
        "n_train": int(len(train_idx)),
        "n_test": int(len(test_idx)),
    }
    _emit(payload, args.out)
    return 0


def _cmd_avgcase_check(args):
    density = _density_from_args(args, args.d)
    box = _box_from_args(args, args.d)
    pts = make_pointset(args.seq, args.s, args.d, seed=args.seed)
    freqs = transform(pts, density)
    report = average_case_mc_check(freqs, density, box, args.samples, args.seed)
    payload = report.to_json_dict()
    payload["within_3se"] = abs(report.empirical - report.predicted) <= 3 * report.stderr
    _emit(payload, args.out)
    return 0


def _cmd_pipeline(args):
    ds = _load_dataset(args, has_target=args.target)
    cfg = _config_from_args(args, args.seq, args.s)
    _emit(run_pipeline(cfg, ds, workers=args.workers), args.out)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="qmcrff",
        description="QMC and adaptive sequences for Fourier feature maps "
                    "of shift-invariant kernels",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_kernel_flags(p):
        p.add_argument("--kernel", choices=("gaussian", "laplacian"), default="gaussian")
        p.add_argument("--sigma", type=_parse_floats, default=(1.0,),
                       help="bandwidth, single value or comma list")

    def add_box_flags(p):
        p.add_argument("--b", type=_parse_floats, default=(1.0,),
                       help="box half-widths, single value or comma list")
        p.add_argument("--box-scale", type=float, default=1.0,
                       help="shrink factor applied to the box (e.g. 0.5)")

    p = sub.add_parser("generate", help="emit a unit-cube point set as CSV")
    p.add_argument("--seq", choices=BASE_SEQUENCES, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--start", type=int, default=1, help="halton start index")
    p.add_argument("--z", type=_parse_ints, default=None, help="lattice generating vector")
    p.add_argument("--json", action="store_true", help="emit the JSON envelope instead")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("transform", help="map unit-cube points to frequencies")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--header", action="store_true", help="skip the first line")
    add_kernel_flags(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_transform)

    p = sub.add_parser("discrepancy", help="closed-form discrepancy of a frequency CSV")
    p.add_argument("--freqs", required=True)
    p.add_argument("--header", action="store_true")
    add_kernel_flags(p)
    add_box_flags(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_discrepancy)

    p = sub.add_parser("optimize", help="adaptive sequence or weight optimization")
    p.add_argument("--mode", choices=("global", "greedy", "weights"), required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    add_kernel_flags(p)
    add_box_flags(p)
    p.add_argument("--max-iters", type=int, default=50)
    p.add_argument("--init", choices=("halton", "file"), default="halton")
    p.add_argument("--in", dest="infile", default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="trace/report JSON")
    p.add_argument("--out-points", default=None, help="final point set CSV")
    p.set_defaults(func=_cmd_optimize)

    p = sub.add_parser("gram-error", help="Gram approximation error curves")
    p.add_argument("--data", required=True)
    p.add_argument("--header", action="store_true")
    add_kernel_flags(p)
    p.add_argument("--s", type=_parse_ints, required=True, help="comma list of feature counts")
    p.add_argument("--seq", type=lambda t: tuple(t.split(",")), required=True)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-n", type=int, default=2000)
    p.add_argument("--box-scale", type=float, default=1.0)
    p.add_argument("--max-iters", type=int, default=50)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_gram_error)

    p = sub.add_parser("krr", help="ridge regression on feature-mapped data")
    p.add_argument("--data", required=True, help="CSV whose last column is the target")
    p.add_argument("--header", action="store_true")
    add_kernel_flags(p)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--seq", choices=BASE_SEQUENCES, default="halton")
    p.add_argument("--lambda", dest="ridge_lambda", type=float, default=1e-6)
    p.add_argument("--split", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--features-out", default=None,
                   help="also export the cos/sin feature matrix as CSV")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_krr)

    p = sub.add_parser("avgcase-check", help="empirical vs predicted average-case error")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    add_kernel_flags(p)
    add_box_flags(p)
    p.add_argument("--seq", choices=BASE_SEQUENCES, default="halton")
    p.add_argument("--samples", type=int, default=200000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_avgcase_check)

    p = sub.add_parser("pipeline", help="full experiment report")
    p.add_argument("--data", required=True)
    p.add_argument("--header", action="store_true")
    p.add_argument("--target", action="store_true",
                   help="treat the last column as a regression target")
    add_kernel_flags(p)
    p.add_argument("--s", type=_parse_ints, required=True)
    p.add_argument("--seq", type=lambda t: tuple(t.split(",")), required=True)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--lambda", dest="ridge_lambda", type=float, default=1e-6)
    p.add_argument("--split", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-n", type=int, default=2000)
    p.add_argument("--box-scale", type=float, default=1.0)
    p.add_argument("--max-iters", type=int, default=50)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_pipeline)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 4
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
