"""Unit-cube point sets: Halton (plain and deterministically scrambled),
rank-1 lattices, seeded Monte Carlo, and a brute-force star-discrepancy
checker used for validation in up to two dimensions.

Every generated coordinate is clamped into [eps, 1-eps] with eps = 2**-52 so
that downstream inverse-CDF transforms stay finite.  Each point is a pure
function of its index, so generation order (or parallel generation) cannot
change the output.
"""

import json
from dataclasses import dataclass

import numpy as np

UNIT_EPS = 2.0 ** -52

# "file" marks externally supplied points ingested through the CLI.
GENERATORS = ("halton", "halton_scrambled", "lattice", "mc", "file")

_PRIME_TABLE_SIZE = 1000


def _first_primes(count):
    # Sieve of Eratosthenes; 7919 is the 1000th prime.
    limit = 7920
    sieve = np.ones(limit, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(limit ** 0.5) + 1):
        if sieve[p]:
            sieve[p * p::p] = False
    primes = np.flatnonzero(sieve)[:count]
    if len(primes) < count:
        raise RuntimeError("prime sieve limit too small")
    return tuple(int(p) for p in primes)


PRIMES = _first_primes(_PRIME_TABLE_SIZE)

_PERM_CACHE = {}


def digit_reversal_permutation(base):
    """Deterministic reverse-radix digit permutation for the given base.

    Each digit value is bit-reversed within ceil(log2(base)) bits; values
    that reverse outside the base are dropped, and the survivors (in order
    of the reversed scan) form the permutation.  0 maps to 0 in every base,
    and base 2 yields the identity.
    """
    perm = _PERM_CACHE.get(base)
    if perm is None:
        nbits = max(1, (base - 1).bit_length())
        perm = []
        for k in range(1 << nbits):
            rev = 0
            v = k
            for _ in range(nbits):
                rev = (rev << 1) | (v & 1)
                v >>= 1
            if rev < base:
                perm.append(rev)
        perm = tuple(perm)
        _PERM_CACHE[base] = perm
    return perm


def radical_inverse(i, base, permutation=None):
    """Radical inverse of integer ``i`` in the given base.

    Writes i = sum_a i_a * base**(a-1) and returns sum_a i_a * base**-a,
    optionally permuting each digit i_a first.
    """
    if i < 0:
        raise ValueError(f"radical_inverse requires i >= 0, got {i}")
    if base < 2:
        raise ValueError(f"radical_inverse requires base >= 2, got {base}")
    x = 0.0
    scale = 1.0 / base
    while i > 0:
        digit = i % base
        if permutation is not None:
            digit = permutation[digit]
        x += digit * scale
        i //= base
        scale /= base
    return x


def _clamp_unit(points):
    return np.clip(points, UNIT_EPS, 1.0 - UNIT_EPS)


@dataclass
class UnitPointSet:
    """s points in the open unit cube (0,1)^d plus generator provenance.

    ``seed_or_start`` is the RNG seed for ``mc``, the start index for the
    Halton variants, and ignored for ``lattice``.
    """

    points: np.ndarray
    generator: str
    seed_or_start: int = 0

    def __post_init__(self):
        self.points = np.ascontiguousarray(np.asarray(self.points, dtype=float))
        if self.points.ndim != 2 or self.points.shape[0] < 1 or self.points.shape[1] < 1:
            raise ValueError("points must be an s x d matrix with s >= 1, d >= 1")
        if self.generator not in GENERATORS:
            raise ValueError(f"unknown generator {self.generator!r}; valid: {GENERATORS}")
        if np.any(self.points <= 0.0) or np.any(self.points >= 1.0):
            raise ValueError("all coordinates must lie in the open interval (0, 1)")

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
            "generator": self.generator,
            "s": self.s,
            "d": self.d,
            "seed_or_start": self.seed_or_start,
            "points": [[float(v) for v in row] for row in self.points],
        }

    def to_json(self):
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, payload):
        pts = np.asarray(payload["points"], dtype=float)
        if pts.shape != (payload["s"], payload["d"]):
            raise ValueError("point matrix shape disagrees with the declared s, d")
        return cls(points=pts, generator=payload["generator"],
                   seed_or_start=int(payload["seed_or_start"]))


def halton(s, d, scramble=False, start_index=1):
    """First ``s`` points of the d-dimensional Halton sequence.

    Row i is (phi_p1(start_index+i), ..., phi_pd(start_index+i)) with p_j
    the j-th prime.  With ``scramble`` each digit passes through the
    deterministic reverse-radix permutation of its base, so repeated calls
    are variance-free.  The default start index 1 skips the cube corner at
    index 0.
    """
    if s < 1:
        raise ValueError(f"halton requires s >= 1, got {s}")
    if not 1 <= d <= _PRIME_TABLE_SIZE:
        raise ValueError(f"halton supports 1 <= d <= {_PRIME_TABLE_SIZE}, got {d}")
    if start_index < 1:
        raise ValueError(f"halton requires start_index >= 1, got {start_index}")
    points = np.empty((s, d))
    for j in range(d):
        base = PRIMES[j]
        perm = digit_reversal_permutation(base) if scramble else None
        points[:, j] = [radical_inverse(start_index + i, base, perm) for i in range(s)]
    generator = "halton_scrambled" if scramble else "halton"
    return UnitPointSet(points=_clamp_unit(points), generator=generator,
                        seed_or_start=start_index)


def lattice(s, d, generating_vector):
    """Rank-1 lattice: point i is frac(i * z / s) componentwise, i = 0..s-1."""
    if s < 1:
        raise ValueError(f"lattice requires s >= 1, got {s}")
    if d < 1:
        raise ValueError(f"lattice requires d >= 1, got {d}")
    z = np.asarray(generating_vector, dtype=np.int64)
    if z.shape != (d,):
        raise ValueError(f"generating_vector must have length d={d}, got shape {z.shape}")
    z = np.mod(z, s)
    idx = np.arange(s, dtype=np.int64)
    # Integer modular arithmetic keeps the fractions exact before clamping.
    points = np.mod(idx[:, None] * z[None, :], s) / float(s)
    return UnitPointSet(points=_clamp_unit(points), generator="lattice", seed_or_start=0)


def mc_uniform(s, d, seed):
    """i.i.d. uniform points from a seeded PCG64 stream (bitwise reproducible)."""
    if s < 1:
        raise ValueError(f"mc_uniform requires s >= 1, got {s}")
    if d < 1:
        raise ValueError(f"mc_uniform requires d >= 1, got {d}")
    rng = np.random.Generator(np.random.PCG64(seed))
    points = rng.random((s, d))
    return UnitPointSet(points=_clamp_unit(points), generator="mc", seed_or_start=int(seed))


def star_discrepancy_bruteforce(pointset):
    """Exact star discrepancy for d <= 2 by enumerating the critical grid.

    On each axis-aligned cell delimited by point coordinates the anchored
    box count is constant while the volume grows, so the supremum of
    |Vol - count/s| is attained at a cell corner; both corners of every
    cell are inspected, which covers the open/closed counting limits.
    Intended as a test utility: cost is O(s^2) in d = 2.
    """
    pts = pointset.points
    s, d = pts.shape
    if d > 2:
        raise ValueError(f"star_discrepancy_bruteforce supports d <= 2, got d={d}")
    if s > 2000:
        raise ValueError(f"star_discrepancy_bruteforce supports s <= 2000, got s={s}")
    if d == 1:
        x = np.sort(pts[:, 0])
        lo = np.concatenate(([0.0], x))           # cell lower edges
        hi = np.concatenate((x, [1.0]))           # cell upper edges
        counts = np.arange(s + 1) / s             # points <= lower edge
        return float(np.max(np.maximum(np.abs(hi - counts), np.abs(lo - counts))))

    xs = np.unique(pts[:, 0])
    ys = np.unique(pts[:, 1])
    lo_x = np.concatenate(([0.0], xs))
    hi_x = np.concatenate((xs, [1.0]))
    lo_y = np.concatenate(([0.0], ys))
    hi_y = np.concatenate((ys, [1.0]))
    # counts[i, j] = #{points with x <= lo_x[i] and y <= lo_y[j]}
    ix = np.searchsorted(xs, pts[:, 0])
    iy = np.searchsorted(ys, pts[:, 1])
    hist = np.zeros((len(xs) + 1, len(ys) + 1))
    np.add.at(hist, (ix + 1, iy + 1), 1.0)
    counts = hist.cumsum(axis=0).cumsum(axis=1) / s
    vol_hi = np.outer(hi_x, hi_y)
    vol_lo = np.outer(lo_x, lo_y)
    dev = np.maximum(np.abs(vol_hi - counts), np.abs(vol_lo - counts))
    return float(dev.max())
