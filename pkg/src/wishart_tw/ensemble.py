"""Extreme eigenvalues of white Wishart matrices by bidiagonal sampling.

Each replication r draws from its own counter-based stream derived from
(seed, r), so results do not depend on batching or worker count.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .scaling import (
    Variant,
    johnstone_constants,
    log_constants,
    second_order_constants,
    smallest_log_constants,
)
from .twlimit import tw_quantile

# orthogonal law percentiles and their probabilities
TABLE1_POINTS = (-3.8954, -3.1804, -2.7824, -1.9104, -1.2686, -0.5923, 0.4501, 0.9793, 2.0234)
TABLE1_LEVELS = (0.01, 0.05, 0.10, 0.30, 0.50, 0.70, 0.90, 0.95, 0.99)
# reflected law: negated points, complementary levels
TABLE2_POINTS = tuple(-s for s in reversed(TABLE1_POINTS))
TABLE2_LEVELS = tuple(1.0 - q for q in reversed(TABLE1_LEVELS))

_SEED_MASK = (1 << 64) - 1
_CHUNK = 4096


class Which(enum.Enum):
    Largest = "largest"
    Smallest = "smallest"

    @classmethod
    def parse(cls, name) -> "Which":
        if isinstance(name, cls):
            return name
        for w in cls:
            if name in (w.value, w.name):
                return w
        raise DomainError(f"unknown eigenvalue selector {name!r}")


class Field(enum.IntEnum):
    Real = 1
    Complex = 2


@dataclass(frozen=True)
class SymTridiagonal:
    """Symmetric tridiagonal matrix with nonnegative off-diagonal."""

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.diag, dtype=float)
        e = np.asarray(self.offdiag, dtype=float)
        if d.ndim != 1 or e.ndim != 1 or d.size < 1 or e.size != d.size - 1:
            raise DomainError("tridiagonal needs len(offdiag) == len(diag) - 1")
        if np.any(e < 0):
            raise DomainError("off-diagonal entries must be nonnegative")
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", e)

    @property
    def size(self) -> int:
        return self.diag.size

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)


@dataclass
class McReport:
    """Empirical CDF of a rescaled extreme eigenvalue at fixed points."""

    n: int
    p: int
    reps: int
    seed: int
    variant: Variant
    which: Which
    rows: list[tuple[float, float, float]] = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "p", "reps", "seed", "variant", "which"])
        w.writerow([self.n, self.p, self.reps, self.seed, self.variant.value, self.which.value])
        w.writerow(["s", "empirical_cdf", "se"])
        for s, c, se in self.rows:
            w.writerow([f"{s:.4f}", f"{c:.6f}", f"{se:.6f}"])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "McReport":
        lines = list(csv.reader(io.StringIO(text)))
        if len(lines) < 3 or lines[0] != ["n", "p", "reps", "seed", "variant", "which"]:
            raise DomainError("not an McReport CSV")
        n, p, reps, seed, variant, which = lines[1]
        rows = [(float(a), float(b), float(c)) for a, b, c in lines[3:] if a]
        return cls(int(n), int(p), int(reps), int(seed), Variant.parse(variant), Which.parse(which), rows)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "reps": self.reps,
            "seed": self.seed,
            "variant": self.variant.value,
            "which": self.which.value,
            "rows": [{"s": s, "empirical_cdf": c, "se": se} for s, c, se in self.rows],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "McReport":
        d = json.loads(text)
        rows = [(float(r["s"]), float(r["empirical_cdf"]), float(r["se"])) for r in d["rows"]]
        return cls(
            int(d["n"]), int(d["p"]), int(d["reps"]), int(d["seed"]),
            Variant.parse(d["variant"]), Which.parse(d["which"]), rows,
        )


def _check_seed(seed) -> int:
    if int(seed) != seed or seed < 0 or seed > _SEED_MASK:
        raise DomainError(f"seed must be an integer in [0, 2^64), got {seed!r}")
    return int(seed)


def replication_stream(seed: int, r: int) -> np.random.Generator:
    """Independent generator for replication `r` under `seed`.

    Philox keyed by the seed; the replication index occupies the top
    word of the 256-bit counter.
    """
    seed = _check_seed(seed)
    if r < 0:
        raise DomainError("replication index must be >= 0")
    return np.random.Generator(np.random.Philox(key=seed, counter=int(r) << 192))


def chi_sample(df: float, stream: np.random.Generator) -> float:
    """One chi draw with `df` degrees of freedom, sqrt(2 Gamma(df/2))."""
    if not df > 0:
        raise DomainError(f"chi degrees of freedom must be > 0, got {df!r}")
    return math.sqrt(2.0 * stream.standard_gamma(df / 2.0))


def _dims(n: int, p: int) -> tuple[int, int]:
    if int(n) != n or int(p) != p or n < 1 or p < 1:
        raise DomainError(f"dimensions must be positive integers, got n={n}, p={p}")
    n, p = int(n), int(p)
    # the nonzero spectrum is unchanged by swapping the roles of n and p
    return (n, p) if n >= p else (p, n)


def _gamma_shapes(n: int, p: int, beta: int) -> np.ndarray:
    i = np.arange(1, p + 1)
    diag = beta * (n - i + 1) / 2.0
    sub = beta * (p - i[:-1]) / 2.0
    return np.concatenate([diag, sub])


def _tridiag_from_chi2(sq: np.ndarray, p: int, beta: int) -> tuple[np.ndarray, np.ndarray]:
    # sq holds squared chi draws: diag then subdiag of the bidiagonal factor
    bd2 = sq[..., :p]
    bs2 = sq[..., p:]
    d = bd2.copy()
    d[..., 1:] += bs2
    e = np.sqrt(bs2 * bd2[..., :-1])
    if beta == 2:
        # unit-variance complex entries
        d, e = d / 2.0, e / 2.0
    return d, e


def sample_tridiagonal(n: int, p: int, beta=Field.Real, stream: np.random.Generator | None = None) -> SymTridiagonal:
    """Tridiagonal matrix with the eigenvalue law of a white Wishart matrix.

    Parameters
    ----------
    n, p : int
        Degrees of freedom and dimension; swapped internally if n < p.
    beta : {1, 2}
        Real or complex entries. Complex entries have E|x|^2 = 1.
    stream : numpy.random.Generator
    """
    beta = int(Field(int(beta)))
    n, p = _dims(n, p)
    if stream is None:
        raise DomainError("a random stream is required")
    sq = 2.0 * stream.standard_gamma(_gamma_shapes(n, p, beta))
    d, e = _tridiag_from_chi2(sq, p, beta)
    return SymTridiagonal(d, e)


def _sturm_count(d: np.ndarray, e2: np.ndarray, x: np.ndarray, tiny: np.ndarray) -> np.ndarray:
    """Number of eigenvalues below x for each row of a batch."""
    # an exact zero pivot is perturbed to -tiny before it is counted
    q = d[:, 0] - x
    q = np.where(q == 0, -tiny, q)
    count = (q < 0).astype(np.int64)
    for i in range(1, d.shape[1]):
        q = d[:, i] - x - e2[:, i - 1] / q
        q = np.where(q == 0, -tiny, q)
        count += q < 0
    return count


def _bisect_batch(d: np.ndarray, e: np.ndarray, which: Which, rtol: float = 1e-13) -> np.ndarray:
    """Extreme eigenvalue of each tridiagonal in a batch by Sturm bisection."""
    d = np.atleast_2d(d)
    e = np.atleast_2d(e).reshape(d.shape[0], d.shape[1] - 1)
    p = d.shape[1]
    if p == 1:
        return d[:, 0].copy()
    radius = np.zeros_like(d)
    radius[:, :-1] += e
    radius[:, 1:] += e
    lo = np.min(d - radius, axis=1)
    hi = np.max(d + radius, axis=1)
    scale = np.maximum(np.abs(lo), np.abs(hi))
    tiny = np.maximum(scale, 1.0) * np.finfo(float).eps ** 2
    lo, hi = lo - tiny, hi + tiny
    e2 = e * e
    for _ in range(200):
        width = hi - lo
        done = width <= rtol * np.maximum(np.abs(lo), np.abs(hi)) + 1e-300
        if np.all(done):
            break
        mid = 0.5 * (lo + hi)
        cnt = _sturm_count(d, e2, mid, tiny)
        if which is Which.Largest:
            above = cnt >= p
        else:
            above = cnt >= 1
        hi = np.where(done, hi, np.where(above, mid, hi))
        lo = np.where(done, lo, np.where(above, lo, mid))
    return 0.5 * (lo + hi)


def extreme_eigenvalue(T: SymTridiagonal, which=Which.Largest) -> float:
    """Largest or smallest eigenvalue by Sturm-sequence bisection."""
    which = Which.parse(which)
    return float(_bisect_batch(T.diag[None, :], T.offdiag[None, :], which)[0])


def _extremes_range(n: int, p: int, beta: int, seed: int, start: int, stop: int, which: Which) -> np.ndarray:
    shapes = _gamma_shapes(n, p, beta)
    sq = np.empty((stop - start, shapes.size))
    for j, r in enumerate(range(start, stop)):
        sq[j] = replication_stream(seed, r).standard_gamma(shapes)
    d, e = _tridiag_from_chi2(2.0 * sq, p, beta)
    return _bisect_batch(d, e, which)


def sample_extremes(
    n: int,
    p: int,
    reps: int,
    seed: int,
    which=Which.Largest,
    beta=Field.Real,
    workers: int = 1,
) -> np.ndarray:
    """Extreme eigenvalue for replications 0, ..., reps-1.

    The result is identical for any `workers` value.
    """
    n, p = _dims(n, p)
    seed = _check_seed(seed)
    which = Which.parse(which)
    beta = int(Field(int(beta)))
    if int(reps) != reps or reps < 1:
        raise DomainError(f"reps must be a positive integer, got {reps!r}")
    bounds = [(a, min(a + _CHUNK, reps)) for a in range(0, reps, _CHUNK)]
    args = [(n, p, beta, seed, a, b, which) for a, b in bounds]
    if workers > 1 and len(bounds) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_extremes_range, *zip(*args)))
    else:
        parts = [_extremes_range(*a) for a in args]
    return np.concatenate(parts)


def rescale(values: np.ndarray, n: int, p: int, variant) -> np.ndarray:
    """Map raw extreme eigenvalues to the TW scale of `variant`."""
    variant = Variant.parse(variant)
    values = np.asarray(values, dtype=float)
    if variant is Variant.Original:
        pair = johnstone_constants(n, p)
        return (values - pair.center) / pair.scale
    if variant is Variant.SecondOrder:
        pair = second_order_constants(n, p)
        return (values - pair.center) / pair.scale
    pair = log_constants(n, p) if variant is Variant.LogLargest else smallest_log_constants(n, p)
    return (np.log(values) - pair.center) / pair.scale


def _compatible(variant: Variant, which: Which) -> None:
    if (variant is Variant.LogSmallest) != (which is Which.Smallest):
        raise DomainError(f"variant {variant.value} is incompatible with the {which.value} eigenvalue")


def mc_cdf_at(
    n: int,
    p: int,
    reps: int,
    seed: int,
    s_points,
    variant="second",
    which=None,
    workers: int = 1,
) -> McReport:
    """Monte Carlo CDF of the rescaled extreme eigenvalue at `s_points`.

    Parameters
    ----------
    variant : str or Variant
        Rescaling; the small-log variant requires ``which="smallest"``.
    which : str or Which, optional
        Defaults to the eigenvalue implied by `variant`.
    """
    variant = Variant.parse(variant)
    which = Which.parse(which) if which is not None else (
        Which.Smallest if variant is Variant.LogSmallest else Which.Largest
    )
    _compatible(variant, which)
    pts = np.asarray(s_points, dtype=float)
    if pts.ndim != 1 or np.any(np.diff(pts) < 0):
        raise DomainError("s_points must be an ascending sequence")
    # validate the constants before spending time on sampling
    rescale(np.ones(1), n, p, variant)
    raw = sample_extremes(n, p, reps, seed, which, Field.Real, workers)
    stat = np.sort(rescale(raw, n, p, variant))
    counts = np.searchsorted(stat, pts, side="right")
    rows = []
    for s, c in zip(pts, counts):
        phat = int(c) / reps
        se = math.sqrt(phat * (1.0 - phat) / reps)
        rows.append((round(float(s), 4), round(phat, 6), round(se, 6)))
    return McReport(int(n), int(p), int(reps), int(seed), variant, which, rows)


def table_row(n: int, p: int, reps: int, seed: int, variant="second", workers: int = 1) -> McReport:
    """Empirical CDF at the nine tabulated percentiles of F1 (or G1 for small-log)."""
    variant = Variant.parse(variant)
    pts = TABLE2_POINTS if variant is Variant.LogSmallest else TABLE1_POINTS
    return mc_cdf_at(n, p, reps, seed, pts, variant, workers=workers)


def mc_percentile_relative_error(n: int, p: int, reps: int, alpha: float, seed: int, workers: int = 1) -> float:
    """Relative error of the TW percentile against the Monte Carlo percentile.

    Returns (mu + sigma * F1^{-1}(alpha)) / q_hat(alpha) - 1 with the
    second-order constants and q_hat the empirical quantile of lambda_1.
    """
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    if reps < 10.0 / min(alpha, 1.0 - alpha):
        raise DomainError(f"reps={reps} too small for alpha={alpha}")
    pair = second_order_constants(n, p)
    approx = pair.center + pair.scale * tw_quantile(1, alpha)
    raw = sample_extremes(n, p, reps, seed, Which.Largest, Field.Real, workers)
    return float(approx / np.quantile(raw, alpha) - 1.0)
