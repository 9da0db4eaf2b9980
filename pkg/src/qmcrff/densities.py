"""Product densities paired with shift-invariant kernels, their
characteristic functions, and the cube-to-R^d inverse-CDF transform.

Scale convention: ``scale`` always stores the kernel bandwidth sigma.  For
the Gaussian kernel the matching frequency density per dimension is
N(0, sigma_j**-2) (sigma is the bandwidth, NOT the density's standard
deviation).  For the Laplacian kernel exp(-sum |delta_j|/sigma_j) the
frequency density per dimension is Cauchy with scale 1/sigma_j.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .specfun import probit_array

GAUSSIAN = "gaussian"
CAUCHY = "cauchy"
_KINDS = (GAUSSIAN, CAUCHY)


@dataclass
class ProductDensity:
    """Per-dimension frequency density: p(x) = prod_j p_j(x_j)."""

    kind: str
    scale: np.ndarray

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(
                f"unsupported density kind {self.kind!r}; valid kinds are {_KINDS}. "
                "The multivariate t density (Matern kernel) has no per-dimension "
                "product form and is rejected."
            )
        self.scale = np.atleast_1d(np.asarray(self.scale, dtype=float))
        if self.scale.ndim != 1 or self.scale.size < 1:
            raise ValueError("scale must be a 1-D vector")
        if not np.all(np.isfinite(self.scale)) or np.any(self.scale <= 0.0):
            raise ValueError("all scales must be strictly positive and finite")

    @property
    def d(self):
        return self.scale.size

    @classmethod
    def gaussian(cls, sigma, d=None):
        return cls(kind=GAUSSIAN, scale=_expand_scale(sigma, d))

    @classmethod
    def cauchy(cls, sigma, d=None):
        return cls(kind=CAUCHY, scale=_expand_scale(sigma, d))

    @classmethod
    def for_kernel(cls, kernel, sigma, d=None):
        """Density whose Fourier transform is the named kernel."""
        if kernel == "gaussian":
            return cls.gaussian(sigma, d)
        if kernel == "laplacian":
            return cls.cauchy(sigma, d)
        raise ValueError(f"unknown kernel {kernel!r}; valid kernels: gaussian, laplacian")

    def to_json_dict(self):
        return {"kind": self.kind, "scale": [float(v) for v in self.scale]}


def _expand_scale(sigma, d):
    arr = np.atleast_1d(np.asarray(sigma, dtype=float))
    if d is not None and arr.size == 1:
        arr = np.full(d, arr[0])
    return arr


@dataclass
class FrequencySet:
    """s frequency vectors in R^d plus a provenance descriptor."""

    points: np.ndarray
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        self.points = np.ascontiguousarray(np.asarray(self.points, dtype=float))
        if self.points.ndim != 2:
            raise ValueError("points must be an s x d matrix")
        if not np.all(np.isfinite(self.points)):
            raise ValueError("frequency entries must be finite")

    @property
    def s(self):
        return self.points.shape[0]

    @property
    def d(self):
        return self.points.shape[1]

    def save_csv(self, path):
        from .ioutil import write_matrix_csv

        write_matrix_csv(path, self.points)

    def to_json_dict(self):
        return {
            "s": self.s,
            "d": self.d,
            "provenance": self.provenance,
            "points": [[float(v) for v in row] for row in self.points],
        }

    def to_json(self):
        return json.dumps(self.to_json_dict())


def transform(pointset, density):
    """Map a unit-cube point set through the per-dimension inverse CDFs.

    Row i becomes w_i with w_ij = quantile_j(t_ij); monotone in every
    coordinate.
    """
    pts = pointset.points
    if density.d != pts.shape[1]:
        raise ValueError(f"density dimension {density.d} != point set dimension {pts.shape[1]}")
    if density.kind == GAUSSIAN:
        freqs = probit_array(pts) / density.scale[None, :]
    else:
        gamma = 1.0 / density.scale
        freqs = gamma[None, :] * np.tan(np.pi * (pts - 0.5))
    provenance = {
        "source": "transform",
        "generator": pointset.generator,
        "seed_or_start": pointset.seed_or_start,
        "density": density.to_json_dict(),
    }
    return FrequencySet(points=freqs, provenance=provenance)


def characteristic(density, j, beta):
    """Characteristic function of the j-th marginal at beta."""
    sigma = density.scale[j]
    if density.kind == GAUSSIAN:
        return float(np.exp(-(beta * beta) / (2.0 * sigma * sigma)))
    return float(np.exp(-abs(beta) / sigma))


def characteristic_profile(density, j, betas):
    """Vectorized `characteristic` over an array of arguments."""
    sigma = density.scale[j]
    betas = np.asarray(betas, dtype=float)
    if density.kind == GAUSSIAN:
        return np.exp(-(betas * betas) / (2.0 * sigma * sigma))
    return np.exp(-np.abs(betas) / sigma)


def exact_kernel(density, x, z):
    """Kernel value whose inverse Fourier transform is the density.

    Equals prod_j characteristic(density, j, x_j - z_j): the Gaussian
    kernel for the gaussian density and the Laplacian kernel for the
    cauchy density.
    """
    delta = np.asarray(x, dtype=float) - np.asarray(z, dtype=float)
    if delta.shape != (density.d,):
        raise ValueError(f"x - z must have shape ({density.d},), got {delta.shape}")
    if density.kind == GAUSSIAN:
        return float(np.exp(-np.sum((delta / density.scale) ** 2) / 2.0))
    return float(np.exp(-np.sum(np.abs(delta) / density.scale)))
