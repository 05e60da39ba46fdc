"""Centering and scaling constants for the Wishart soft edge.

Four rescalings of an extreme eigenvalue are provided, together with
the finite-N structural constants used by the Laguerre asymptotics.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

from .errors import DomainError
from .specfun import log_gamma


class Variant(enum.Enum):
    """Rescaling family of a :class:`ScalePair`."""

    Original = "orig"
    SecondOrder = "second"
    LogLargest = "log"
    LogSmallest = "small-log"

    @classmethod
    def parse(cls, name: "str | Variant") -> "Variant":
        if isinstance(name, cls):
            return name
        for v in cls:
            if name in (v.value, v.name):
                return v
        raise DomainError(f"unknown variant {name!r}")


@dataclass(frozen=True)
class ScalePair:
    """Center and scale for one rescaling variant at dimensions (n, p)."""

    center: float
    scale: float
    variant: Variant
    n: int
    p: int

    def standardize(self, value: float) -> float:
        """Map an eigenvalue (or its log, for log variants) to the TW scale."""
        return (value - self.center) / self.scale


@dataclass(frozen=True)
class LgFrame:
    """Turning-point parameters of the Laguerre differential equation."""

    n: int
    N: int
    kappa: float
    lambda_: float
    omega: float
    xi_minus: float
    xi_plus: float


def _require_int(name: str, value, lo: int) -> int:
    if int(value) != value:
        raise DomainError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if value < lo:
        raise DomainError(f"{name} must be >= {lo}, got {value}")
    return value


def _edge_pair(a: float, b: float) -> tuple[float, float]:
    ra, rb = math.sqrt(a), math.sqrt(b)
    center = (ra + rb) ** 2
    scale = (ra + rb) * (1.0 / ra + 1.0 / rb) ** (1.0 / 3.0)
    return center, scale


def johnstone_constants(n: int, p: int) -> ScalePair:
    """First-order constants built from sqrt(n-1) and sqrt(p)."""
    n = _require_int("n", n, 2)
    p = _require_int("p", p, 1)
    c, s = _edge_pair(n - 1.0, float(p))
    return ScalePair(c, s, Variant.Original, n, p)


def second_order_constants(n: int, p: int) -> ScalePair:
    """Half-integer shifted constants with N^(-2/3) accuracy.

    center = (sqrt(n-1/2) + sqrt(p-1/2))^2 and
    scale = (sqrt(n-1/2) + sqrt(p-1/2)) (1/sqrt(n-1/2) + 1/sqrt(p-1/2))^(1/3).
    """
    n = _require_int("n", n, 1)
    p = _require_int("p", p, 1)
    c, s = _edge_pair(n - 0.5, p - 0.5)
    return ScalePair(c, s, Variant.SecondOrder, n, p)


def log_constants(n: int, p: int) -> ScalePair:
    """Constants for log(lambda_1): center log(mu), scale sigma/mu."""
    base = second_order_constants(n, p)
    return ScalePair(math.log(base.center), base.scale / base.center, Variant.LogLargest, base.n, base.p)


def smallest_log_constants(n: int, p: int) -> ScalePair:
    """Constants for log(lambda_p), the smallest eigenvalue.

    Requires n - 1 >= p so the lower edge stays away from zero.
    """
    n = _require_int("n", n, 2)
    p = _require_int("p", p, 1)
    if p > n - 1:
        raise DomainError(f"smallest-eigenvalue constants need n - 1 >= p, got n={n}, p={p}")
    ra, rb = math.sqrt(n - 0.5), math.sqrt(p - 0.5)
    mu = (ra - rb) ** 2
    sigma = (ra - rb) * (1.0 / rb - 1.0 / ra) ** (1.0 / 3.0)
    tau = sigma / mu
    nu = math.log(mu) + tau * tau / 8.0
    return ScalePair(nu, tau, Variant.LogSmallest, n, p)


def rmt_constants(n: int, N: int) -> ScalePair:
    """Laguerre-side pair mu_{n,N}, sigma_{n,N} built on n+1/2 and N+1/2.

    ``rmt_constants(n - 1, p - 1)`` equals ``second_order_constants(n, p)``.
    The returned pair is tagged SecondOrder.
    """
    n = _require_int("n", n, 1)
    N = _require_int("N", N, 1)
    c, s = _edge_pair(n + 0.5, N + 0.5)
    return ScalePair(c, s, Variant.SecondOrder, n, N)


def _rmt_pair(a: int, b: int) -> tuple[float, float]:
    # internal variant that tolerates index 0 (used for small ladders)
    return _edge_pair(a + 0.5, b + 0.5)


def lue_constants(n: int, N: int) -> ScalePair:
    """Centering for the largest eigenvalue of complex Wishart data.

    Blends the two Laguerre-side pairs (n-1, N-1) and (n-2, N) with
    inverse-scale weights. Used to rescale the unitary-ensemble CDF
    computed by :func:`wishart_tw.lgasym.lue_largest_cdf`.
    """
    n = _require_int("n", n, 3)
    N = _require_int("N", N, 1)
    ma, sa = _rmt_pair(n - 1, N - 1)
    mb, sb = _rmt_pair(n - 2, N)
    wa, wb = 1.0 / sa, 1.0 / sb
    center = (ma * wa + mb * wb) / (wa + wb)
    scale = 2.0 / (wa + wb)
    return ScalePair(center, scale, Variant.SecondOrder, n, N)


def lg_parameters(n: int, N: int) -> LgFrame:
    """Liouville-Green frame for the weighted Laguerre function of degree N."""
    n = _require_int("n", n, 2)
    N = _require_int("N", N, 1)
    if n <= N:
        raise DomainError(f"lg_parameters needs n > N, got n={n}, N={N}")
    kappa = (n + N + 1) / 2.0
    lam = (n - N) / 2.0
    omega = 2.0 * lam / kappa
    root = math.sqrt(4.0 - omega * omega)
    xi_plus = 2.0 + root
    # product form avoids cancellation when omega is small
    xi_minus = omega * omega / xi_plus
    return LgFrame(n, N, kappa, lam, omega, xi_minus, xi_plus)


def beta_N(n: int, N: int, allow_odd: bool = False) -> float:
    """Half the total integral of the scaled function phi.

    Closed form in log-gamma terms::

        beta_N = (N(n-1))^(1/4) / sqrt(2) * 2^((1 - a)/2)
                 * Gamma((N+1)/2) / Gamma(n/2) * sqrt(Gamma(n-1) / Gamma(N+1))

    with a = n - N.

    Parameters
    ----------
    n, N : int
        Require n > N >= 2 and N even.
    allow_odd : bool
        Permit odd N. A warning is issued because the rank-one
        decomposition of the orthogonal kernel assumes N even.
    """
    n = _require_int("n", n, 3)
    N = _require_int("N", N, 2)
    if n <= N:
        raise DomainError(f"beta_N needs n > N, got n={n}, N={N}")
    if N % 2:
        if not allow_odd:
            raise DomainError(f"beta_N is defined for even N, got N={N}")
        warnings.warn(f"beta_N evaluated at odd N={N}", RuntimeWarning, stacklevel=2)
    a = n - N
    logb = (
        0.25 * math.log(N * (n - 1.0))
        - 0.5 * math.log(2.0)
        + 0.5 * (1 - a) * math.log(2.0)
        + log_gamma((N + 1) / 2.0)
        - log_gamma(n / 2.0)
        + 0.5 * (log_gamma(n - 1.0) - log_gamma(N + 1.0))
    )
    return math.exp(logb)


def delta_N(n: int, N: int) -> float:
    """Offset (mu_{n-1,N-1} - mu_{n-2,N}) / sigma_{n-2,N}."""
    n = _require_int("n", n, 3)
    N = _require_int("N", N, 2)
    m1, _ = _rmt_pair(n - 1, N - 1)
    m2, s2 = _rmt_pair(n - 2, N)
    return (m1 - m2) / s2


def sigma_ratio(n: int, N: int) -> float:
    """sigma_{n-1,N-1} / sigma_{n-2,N}."""
    n = _require_int("n", n, 3)
    N = _require_int("N", N, 2)
    return _rmt_pair(n - 1, N - 1)[1] / _rmt_pair(n - 2, N)[1]


def rho_factors(n: int, N: int) -> tuple[float, float]:
    """Normalization factors (rho_N, rho~_N) linking phi, psi to F_{n,N}.

    rho_N = (N(n-1))^(1/4) sigma_{n-1,N-1}^(3/2) / mu_{n-1,N-1}, and
    rho~_N is the same with (n-2, N), times the sigma ratio.
    """
    n = _require_int("n", n, 3)
    N = _require_int("N", N, 2)
    root = (N * (n - 1.0)) ** 0.25
    m1, s1 = _rmt_pair(n - 1, N - 1)
    m2, s2 = _rmt_pair(n - 2, N)
    rho = root * s1**1.5 / m1
    rho_t = (s1 / s2) * root * s2**1.5 / m2
    return rho, rho_t
