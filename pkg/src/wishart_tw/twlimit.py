"""Tracy-Widom laws F1, F2 and the reflected law G1.

The laws are tabulated once per process from the Hastings-McLeod
solution of Painleve II. Lookups interpolate the table monotonically.
"""

from __future__ import annotations

import enum
import math
import os
import threading
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import integrate, special
from scipy.interpolate import PchipInterpolator

from .errors import DomainError, NumericError, TableRangeError
from .scaling import (
    Variant,
    johnstone_constants,
    log_constants,
    second_order_constants,
    smallest_log_constants,
)

CACHE_ENV = "RMT_EDGE_TABLE_CACHE"

DEFAULT_SMIN = -10.0
# F1 tail at s = 6 is still ~2e-6, so the default grid runs to 8
DEFAULT_SMAX = 8.0
DEFAULT_STEP = 0.005


class Beta(enum.IntEnum):
    """Symmetry class of the limiting law."""

    Orthogonal = 1
    Unitary = 2


def _beta(beta) -> Beta:
    try:
        return Beta(int(beta))
    except (ValueError, TypeError):
        raise DomainError(f"beta must be 1 or 2, got {beta!r}") from None


@dataclass(frozen=True, eq=False)
class TwTable:
    """CDF and PDF of a Tracy-Widom law on an ascending grid."""

    beta: Beta
    grid: np.ndarray
    cdf: np.ndarray
    pdf: np.ndarray
    s_min: float
    s_max: float
    step: float

    def __post_init__(self):
        for arr in (self.grid, self.cdf, self.pdf):
            arr.setflags(write=False)
        object.__setattr__(self, "_cdf_interp", PchipInterpolator(self.grid, self.cdf))
        object.__setattr__(self, "_pdf_interp", PchipInterpolator(self.grid, self.pdf))

    def validate(self) -> None:
        """Raise NumericError if the table violates its invariants."""
        g, c, f = self.grid, self.cdf, self.pdf
        problems = []
        if not (g.shape == c.shape == f.shape) or g.ndim != 1 or g.size < 2:
            problems.append("inconsistent shapes")
        elif np.any(np.diff(g) <= 0):
            problems.append("grid not ascending")
        else:
            if c[0] >= 1e-6:
                problems.append(f"cdf at left end {c[0]:.3g}")
            if c[-1] <= 1 - 1e-6:
                problems.append(f"cdf at right end {c[-1]:.3g}")
            if np.any(np.diff(c) < 0):
                problems.append("cdf decreasing")
            if np.any(f < 0):
                problems.append("negative pdf")
            mass = np.trapezoid(f, g)
            if abs(mass - 1.0) > 1e-4:
                problems.append(f"pdf mass {mass:.8f}")
        if problems:
            raise NumericError("invalid TW table: " + "; ".join(problems))

    def cdf_at(self, s):
        s = np.asarray(s, dtype=float)
        out = np.clip(self._cdf_interp(np.clip(s, self.s_min, self.s_max)), 0.0, 1.0)
        out = np.where(s < self.s_min, 0.0, np.where(s > self.s_max, 1.0, out))
        return float(out) if out.ndim == 0 else out

    def pdf_at(self, s):
        s = np.asarray(s, dtype=float)
        out = np.maximum(self._pdf_interp(np.clip(s, self.s_min, self.s_max)), 0.0)
        out = np.where((s < self.s_min) | (s > self.s_max), 0.0, out)
        return float(out) if out.ndim == 0 else out


def _painleve_rhs(s, y):
    q, qp, i_, _, _ = y
    return [qp, s * q + 2.0 * q**3, -q * q, -i_, -q]


def _solve_painleve(s_min: float, s_max: float, step: float):
    """Integrate Hastings-McLeod and its tail integrals on the grid.

    State: q, q', I = int_s^inf q^2, J = int_s^inf (x-s) q^2, Q = int_s^inf q.
    """
    count = int(round((s_max - s_min) / step))
    if count < 2 or not math.isclose(s_min + count * step, s_max, abs_tol=1e-9):
        raise DomainError("table range must be an integer number of steps")
    grid = s_min + step * np.arange(count + 1)
    s0 = max(8.0, s_max)
    ai, aip, _, _ = special.airy(s0)
    i0 = aip**2 - s0 * ai**2
    j0 = (2 * s0**2 * ai**2 - 2 * s0 * aip**2 - ai * aip) / 3.0
    q0, _ = integrate.quad(lambda t: special.airy(t)[0], s0, np.inf, epsabs=1e-20, epsrel=1e-13)
    t_eval = grid[::-1]
    if s0 > s_max:
        t_eval = t_eval[t_eval <= s0]
    sol = integrate.solve_ivp(
        _painleve_rhs,
        (s0, s_min),
        [ai, aip, i0, j0, q0],
        method="DOP853",
        rtol=1e-13,
        atol=1e-40,
        t_eval=t_eval,
    )
    if sol.status != 0 or sol.y.shape[1] != grid.size:
        raise NumericError(f"Painleve II integration failed: {sol.message}")
    q, _, i_, j_, qi = sol.y[:, ::-1]
    if not np.all(np.isfinite(sol.y)):
        raise NumericError("Painleve II integration produced non-finite values")
    return grid, q, i_, j_, qi


def build_table(
    beta=Beta.Orthogonal,
    s_min: float = DEFAULT_SMIN,
    s_max: float = DEFAULT_SMAX,
    step: float = DEFAULT_STEP,
) -> TwTable:
    """Tabulate F1 or F2 on ``[s_min, s_max]``.

    Parameters
    ----------
    beta : {1, 2}
    s_min, s_max : float
        Need s_min < -8 and s_max > 4.
    step : float
        Grid spacing, at most 0.02.
    """
    beta = _beta(beta)
    if not (s_min < -8 and s_max > 4 and 0 < step <= 0.02):
        raise DomainError("build_table needs s_min < -8, s_max > 4 and 0 < step <= 0.02")
    grid, q, i_, j_, qi = _solve_painleve(s_min, s_max, step)
    if beta is Beta.Unitary:
        cdf = np.exp(-j_)
        pdf = cdf * i_
    else:
        cdf = np.exp(-0.5 * (j_ + qi))
        pdf = 0.5 * cdf * (i_ + q)
    table = TwTable(beta, grid, cdf, pdf, float(grid[0]), float(grid[-1]), float(step))
    table.validate()
    return table


def write_table(table: TwTable, path) -> None:
    """Serialize a table as a text cache file."""
    lines = [
        f"# tw-table beta={int(table.beta)} smin={table.s_min!r} smax={table.s_max!r} step={table.step!r}"
    ]
    for s, c, f in zip(table.grid, table.cdf, table.pdf):
        lines.append(f"{s:.17g},{c:.17g},{f:.17g}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_table(path) -> TwTable:
    """Load and validate a cache file written by :func:`write_table`."""
    text = Path(path).read_text().splitlines()
    if not text or not text[0].startswith("# tw-table "):
        raise NumericError(f"{path}: missing tw-table header")
    fields = dict(tok.split("=", 1) for tok in text[0][len("# tw-table ") :].split())
    try:
        beta = _beta(fields["beta"])
        s_min, s_max, step = (float(fields[k]) for k in ("smin", "smax", "step"))
        data = np.array([[float(v) for v in row.split(",")] for row in text[1:] if row.strip()])
    except (KeyError, ValueError) as exc:
        raise NumericError(f"{path}: malformed cache ({exc})") from None
    if data.ndim != 2 or data.shape[1] != 3:
        raise NumericError(f"{path}: expected three columns")
    table = TwTable(beta, data[:, 0].copy(), data[:, 1].copy(), data[:, 2].copy(), s_min, s_max, step)
    if not (math.isclose(table.grid[0], s_min) and math.isclose(table.grid[-1], s_max)):
        raise NumericError(f"{path}: grid does not match header")
    table.validate()
    return table


_TABLES: dict[Beta, TwTable] = {}
_LOCK = threading.Lock()


def _cached_from_env(beta: Beta) -> TwTable | None:
    path = os.environ.get(CACHE_ENV)
    if not path:
        return None
    candidates = [Path(path)]
    if Path(path).is_dir():
        candidates = [Path(path) / f"tw{int(beta)}.csv"]
    for cand in candidates:
        if cand.is_file():
            try:
                table = read_table(cand)
            except NumericError:
                return None
            if table.beta is beta:
                return table
    return None


def get_table(beta=Beta.Orthogonal) -> TwTable:
    """Default table for `beta`, built (or loaded from cache) once per process."""
    beta = _beta(beta)
    with _LOCK:
        table = _TABLES.get(beta)
        if table is None:
            table = _cached_from_env(beta) or build_table(beta)
            _TABLES[beta] = table
        return table


def _finite(s):
    arr = np.asarray(s, dtype=float)
    if np.any(~np.isfinite(arr)):
        raise DomainError("argument must be finite")
    return arr


def tw_cdf(beta, s):
    """Tracy-Widom CDF F_beta(s); clamped to 0 and 1 outside the table."""
    _finite(s)
    return get_table(beta).cdf_at(s)


def tw_pdf(beta, s):
    """Tracy-Widom density f_beta(s); zero outside the table."""
    _finite(s)
    return get_table(beta).pdf_at(s)


def reflected_cdf(s):
    """Reflected orthogonal law G1(s) = 1 - F1(-s)."""
    arr = _finite(s)
    out = 1.0 - get_table(Beta.Orthogonal).cdf_at(-arr)
    return float(out) if np.ndim(out) == 0 else out


def tw_quantile(beta, q: float) -> float:
    """Inverse of :func:`tw_cdf` with Newton refinement.

    Raises
    ------
    DomainError
        If q is not in (0, 1).
    TableRangeError
        If q falls outside the tabulated CDF range.
    """
    q = float(q)
    if not 0.0 < q < 1.0:
        raise DomainError(f"quantile level must lie in (0, 1), got {q}")
    table = get_table(beta)
    c = table.cdf
    if q <= c[0] or q >= c[-1]:
        raise TableRangeError(f"level {q} outside tabulated range [{c[0]:.3g}, {c[-1]:.3g}]")
    j = int(np.searchsorted(c, q, side="left"))
    lo, hi = table.grid[j - 1], table.grid[j]
    clo, chi = c[j - 1], c[j]
    s = lo if chi == clo else lo + (q - clo) * (hi - lo) / (chi - clo)
    for _ in range(8):
        dens = table.pdf_at(s)
        if dens <= 0:
            break
        delta = (table.cdf_at(s) - q) / dens
        s = min(max(s - delta, lo), hi)
        if abs(delta) < 1e-13:
            break
    return float(s)


def largest_pvalue(n: int, p: int, lam: float, variant="second") -> float:
    """Approximate P(lambda_1 > lam) for a white Wishart matrix.

    Parameters
    ----------
    n, p : int
        Degrees of freedom and dimension.
    lam : float
        Observed largest eigenvalue, > 0.
    variant : {"orig", "second", "log"} or Variant
    """
    lam = float(lam)
    if not (lam > 0 and math.isfinite(lam)):
        raise DomainError(f"eigenvalue must be positive and finite, got {lam}")
    v = Variant.parse(variant)
    if v is Variant.Original:
        s = johnstone_constants(n, p).standardize(lam)
    elif v is Variant.SecondOrder:
        s = second_order_constants(n, p).standardize(lam)
    elif v is Variant.LogLargest:
        s = log_constants(n, p).standardize(math.log(lam))
    else:
        raise DomainError("largest_pvalue does not accept the smallest-eigenvalue variant")
    return float(1.0 - tw_cdf(1, s))


def smallest_pvalue(n: int, p: int, lam: float) -> float:
    """Approximate P(lambda_p <= lam) via G1 on the log scale."""
    lam = float(lam)
    if not (lam > 0 and math.isfinite(lam)):
        raise DomainError(f"eigenvalue must be positive and finite, got {lam}")
    pair = smallest_log_constants(n, p)
    return float(reflected_cdf(pair.standardize(math.log(lam))))


def fredholm_f2(s: float, m: int = 60, length: float = 14.0) -> float:
    """F2(s) as det(I - K_Airy) on [s, s + length] by Gauss-Legendre Nystrom."""
    s = float(_finite(s))
    nodes, weights = leggauss(m)
    x = s + (nodes + 1.0) * length / 2.0
    w = weights * length / 2.0
    ai, aip, _, _ = special.airy(x)
    dx = x[:, None] - x[None, :]
    np.fill_diagonal(dx, 1.0)
    kern = (ai[:, None] * aip[None, :] - aip[:, None] * ai[None, :]) / dx
    np.fill_diagonal(kern, aip**2 - x * ai**2)
    sw = np.sqrt(w)
    return float(np.linalg.det(np.eye(m) - sw[:, None] * kern * sw[None, :]))
