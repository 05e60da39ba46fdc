"""Special functions: Airy, log-gamma and the weighted Laguerre basis."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike
from scipy import special

from .errors import DomainError

# rescale the recurrence whenever magnitudes leave [2^-300, 2^300]
_BIG = 2.0**300
_LOG_BIG = 300.0 * math.log(2.0)


@dataclass(frozen=True)
class AiryValue:
    """Airy function value and derivative at a real point."""

    x: float
    ai: float
    ai_prime: float


def airy(x: float) -> AiryValue:
    """Evaluate Ai and Ai' at a real point.

    Parameters
    ----------
    x : float
        Finite real argument.

    Returns
    -------
    AiryValue

    Raises
    ------
    DomainError
        If `x` is not finite.
    """
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"airy: argument must be finite, got {x!r}")
    ai, aip, _, _ = special.airy(x)
    return AiryValue(x=x, ai=float(ai), ai_prime=float(aip))


def airy_arrays(x: ArrayLike) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized (Ai, Ai') on an array of finite arguments."""
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise DomainError("airy_arrays: arguments must be finite")
    ai, aip, _, _ = special.airy(x)
    return ai, aip


def log_gamma(x: ArrayLike):
    """Natural log of the gamma function for positive arguments.

    Parameters
    ----------
    x : float or array_like
        Strictly positive argument(s).

    Returns
    -------
    float or ndarray
    """
    arr = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr <= 0):
        raise DomainError("log_gamma: argument must be finite and > 0")
    out = special.gammaln(arr)
    return float(out) if out.ndim == 0 else out


def _check_laguerre_args(k: int, alpha: float, x: np.ndarray) -> None:
    if int(k) != k or k < 0:
        raise DomainError(f"laguerre: degree must be a nonnegative integer, got {k!r}")
    if not alpha > -1:
        raise DomainError(f"laguerre: alpha must exceed -1, got {alpha!r}")
    if np.any(~np.isfinite(x)) or np.any(x < 0):
        raise DomainError("laguerre: x must be finite and >= 0")


def _weighted_recurrence(kmax: int, alpha: float, x: np.ndarray, keep_all: bool):
    """Run the normalized recurrence up to degree `kmax`.

    Values are carried as mantissa times exp(logscale) with a common scale
    per abscissa, so neither the starting weight nor the growth overflows.
    """
    pos = x > 0
    xs = np.where(pos, x, 1.0)
    logscale = 0.5 * alpha * np.log(xs) - 0.5 * xs - 0.5 * special.gammaln(alpha + 1.0)
    prev = np.zeros_like(xs)
    cur = np.ones_like(xs)
    history = [cur.copy()] if keep_all else None
    scales = [logscale.copy()] if keep_all else None
    for j in range(kmax):
        nxt = ((2 * j + 1 + alpha - xs) * cur - math.sqrt(j * (j + alpha)) * prev) / math.sqrt(
            (j + 1) * (j + alpha + 1)
        )
        prev, cur = cur, nxt
        mag = np.maximum(np.abs(prev), np.abs(cur))
        big = mag > _BIG
        if np.any(big):
            prev = np.where(big, prev / _BIG, prev)
            cur = np.where(big, cur / _BIG, cur)
            logscale = np.where(big, logscale + _LOG_BIG, logscale)
        small = (mag < 1.0 / _BIG) & (mag > 0)
        if np.any(small):
            prev = np.where(small, prev * _BIG, prev)
            cur = np.where(small, cur * _BIG, cur)
            logscale = np.where(small, logscale - _LOG_BIG, logscale)
        if keep_all:
            history.append(cur.copy())
            scales.append(logscale.copy())
    if keep_all:
        vals = np.array(history)
        ls = np.array(scales)
    else:
        vals, ls = cur, logscale
    with np.errstate(divide="ignore", over="ignore"):
        out = np.sign(vals) * np.exp(np.log(np.abs(vals)) + ls)
    return out, pos


def _at_zero(k: np.ndarray, alpha: float) -> np.ndarray:
    # phi_k(0; alpha) is nonzero only for alpha == 0, where L_k^0(0) = 1
    if alpha > 0:
        return np.zeros_like(k, dtype=float)
    if alpha == 0:
        return np.ones_like(k, dtype=float)
    return np.full_like(k, np.inf, dtype=float)


def laguerre_weighted(k: int, alpha: float, x: ArrayLike):
    """Orthonormal weighted Laguerre function phi_k(x; alpha).

    phi_k(x; alpha) = sqrt(k! / Gamma(k+alpha+1)) x^(alpha/2) e^(-x/2) L_k^alpha(x).

    Parameters
    ----------
    k : int
        Degree, k >= 0.
    alpha : float
        Laguerre parameter, alpha > -1.
    x : float or array_like
        Nonnegative abscissae.

    Returns
    -------
    float or ndarray
        Same shape as `x`.

    Notes
    -----
    Evaluated by the forward three-term recurrence on the normalized
    functions, with power-of-two rescaling and a log-scale accumulator.
    """
    arr = np.asarray(x, dtype=float)
    _check_laguerre_args(k, alpha, arr)
    flat = np.atleast_1d(arr).ravel()
    vals, pos = _weighted_recurrence(int(k), float(alpha), flat, keep_all=False)
    vals = np.where(pos, vals, _at_zero(np.zeros(flat.shape), alpha))
    vals = vals.reshape(arr.shape)
    return float(vals) if arr.ndim == 0 else vals


def laguerre_weighted_all(kmax: int, alpha: float, x: ArrayLike) -> np.ndarray:
    """All of phi_0, ..., phi_kmax at the abscissae `x`.

    Returns
    -------
    ndarray
        Shape ``(kmax + 1,) + x.shape``.
    """
    arr = np.asarray(x, dtype=float)
    _check_laguerre_args(kmax, alpha, arr)
    flat = np.atleast_1d(arr).ravel()
    vals, pos = _weighted_recurrence(int(kmax), float(alpha), flat, keep_all=True)
    zero = _at_zero(np.zeros(kmax + 1), alpha)[:, None]
    vals = np.where(pos[None, :], vals, zero)
    return vals.reshape((kmax + 1,) + arr.shape)
