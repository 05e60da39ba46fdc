"""Laguerre soft-edge asymptotics and the Laguerre ensemble kernels.

Direct evaluations use the weighted Laguerre recurrence; approximations
use the Liouville-Green (Airy) form near the upper turning point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import DomainError, NumericError
from .scaling import (
    LgFrame,
    beta_N,
    delta_N,
    lg_parameters,
    rmt_constants,
    second_order_constants,
)
from .specfun import airy_arrays, laguerre_weighted, laguerre_weighted_all, log_gamma

_GL64 = leggauss(64)
_GL20 = leggauss(20)


@dataclass(frozen=True)
class LgEvaluation:
    """Direct and Liouville-Green values of F_{n,N} at one point."""

    n: int
    N: int
    s: float
    x: float
    xi: float
    zeta: float
    direct: float
    approx: float
    abs_err: float


def _check_nN(n: int, N: int, gap: int = 1) -> tuple[int, int]:
    if int(n) != n or int(N) != N:
        raise DomainError("n and N must be integers")
    n, N = int(n), int(N)
    if N < 1 or n - N < gap:
        raise DomainError(f"need N >= 1 and n - N >= {gap}, got n={n}, N={N}")
    return n, N


def _composite_gl(a: float, b: float, panels: int, rule=_GL20):
    nodes, weights = rule
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mids = 0.5 * (edges[:-1] + edges[1:])
    x = (mids[:, None] + half[:, None] * nodes[None, :]).ravel()
    w = (half[:, None] * weights[None, :]).ravel()
    return x, w


# ---------------------------------------------------------------- F_{n,N}


def f_direct(n: int, N: int, x):
    """Intermediate function F_{n,N}(x) = (-1)^N sigma^(-1/2) sqrt(x) phi_N(x; n-N).

    sigma is the Laguerre-side scale sigma_{n,N}.
    """
    n, N = _check_nN(n, N)
    sigma = rmt_constants(n, N).scale
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0):
        raise DomainError("f_direct needs x >= 0")
    val = (-1) ** N * np.sqrt(arr) * laguerre_weighted(N, n - N, arr) / math.sqrt(sigma)
    return float(val) if np.ndim(val) == 0 else val


def _zeta_integral(frame: LgFrame, xi: float) -> float:
    """Signed value of int sqrt|f| between xi_plus and xi."""
    xp, xm = frame.xi_plus, frame.xi_minus
    D = xp - xm
    if xi >= xp:
        top = math.sqrt(xi - xp)
        panels = max(1, int(math.ceil(top)))
        u, w = _composite_gl(0.0, top, panels, _GL64)
        return float(np.sum(w * u * u * np.sqrt(D + u * u) / (xp + u * u)))
    mid = 0.5 * (xp + xm)
    if xi >= mid:
        u, w = _composite_gl(0.0, math.sqrt(xp - xi), 1, _GL64)
        return -float(np.sum(w * u * u * np.sqrt(D - u * u) / (xp - u * u)))
    u, w = _composite_gl(0.0, math.sqrt(xp - mid), 1, _GL64)
    upper = float(np.sum(w * u * u * np.sqrt(D - u * u) / (xp - u * u)))
    # near the lower turning point substitute t = xi_minus + v^2
    v, w = _composite_gl(math.sqrt(xi - xm), math.sqrt(mid - xm), 4, _GL64)
    lower = float(np.sum(w * v * v * np.sqrt(D - v * v) / (xm + v * v)))
    return -(upper + lower)


def zeta_of_xi(frame: LgFrame, xi):
    """Liouville-Green variable zeta(xi) about the upper turning point.

    (2/3) zeta^(3/2) = int_{xi+}^{xi} sqrt(f) for xi >= xi+, and the
    reflected form below, with f = (t - xi-)(t - xi+) / (4 t^2).

    Raises
    ------
    DomainError
        If any xi <= xi_minus.
    """
    arr = np.asarray(xi, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr <= frame.xi_minus):
        raise DomainError("zeta_of_xi is only defined above the lower turning point")
    out = np.empty(arr.shape)
    for idx, val in np.ndenumerate(arr):
        integral = _zeta_integral(frame, float(val))
        out[idx] = math.copysign((1.5 * abs(integral)) ** (2.0 / 3.0), integral)
    return float(out) if out.ndim == 0 else out


def zeta_dot_edge(frame: LgFrame) -> float:
    """d zeta / d xi at the upper turning point."""
    D = frame.xi_plus - frame.xi_minus
    return (D / (4.0 * frame.xi_plus**2)) ** (1.0 / 3.0)


def _zeta_dot(frame: LgFrame, xi: np.ndarray, zeta: np.ndarray) -> np.ndarray:
    f = (xi - frame.xi_minus) * (xi - frame.xi_plus) / (4.0 * xi * xi)
    edge = zeta_dot_edge(frame)
    near = np.abs(xi - frame.xi_plus) < 1e-10
    safe = np.where(near, 1.0, zeta)
    return np.where(near, edge, np.sqrt(np.where(near, 1.0, f / safe)))


def r_N_factor(n: int, N: int) -> float:
    """Stirling-type constant r_N computed in the log domain."""
    if int(n) != n or int(N) != N or n < 1 or N < 1:
        raise DomainError("r_N needs positive integers")
    npl, Npl = n + 0.5, N + 0.5
    log_r2 = (
        math.log(2.0 * math.pi)
        - (npl + Npl)
        + npl * math.log(npl)
        + Npl * math.log(Npl)
        - log_gamma(N + 1.0)
        - log_gamma(n + 1.0)
    )
    return math.exp(0.5 * log_r2)


def lg_approx(n: int, N: int, x):
    """Liouville-Green principal term r_N R_N(xi) Ai(kappa^(2/3) zeta)."""
    n, N = _check_nN(n, N)
    frame = lg_parameters(n, N)
    arr = np.asarray(x, dtype=float)
    xi = arr / frame.kappa
    zeta = np.asarray(zeta_of_xi(frame, xi))
    zdot = _zeta_dot(frame, xi, zeta)
    R = (zdot / zeta_dot_edge(frame)) ** -0.5
    ai, _ = airy_arrays(frame.kappa ** (2.0 / 3.0) * zeta)
    val = r_N_factor(n, N) * R * ai
    return float(val) if np.ndim(val) == 0 else val


def lg_evaluate(n: int, N: int, s: float) -> LgEvaluation:
    """Compare F_{n,N} with its Airy approximation at x = mu_{n,N} + sigma_{n,N} s."""
    n, N = _check_nN(n, N)
    pair = rmt_constants(n, N)
    frame = lg_parameters(n, N)
    x = pair.center + pair.scale * float(s)
    xi = x / frame.kappa
    direct = f_direct(n, N, x)
    approx = lg_approx(n, N, x)
    return LgEvaluation(n, N, float(s), x, xi, zeta_of_xi(frame, xi), direct, approx, abs(direct - approx))


def kappa_zeta_taylor_check(n: int, N: int, s_grid) -> float:
    """sup N^(2/3) |kappa^(2/3) zeta(xi(s)) - s| / max(s^2, 1) on s in [0, N^(1/6)]."""
    n, N = _check_nN(n, N)
    s = np.asarray(s_grid, dtype=float)
    if np.any(s < 0) or np.any(s > N ** (1.0 / 6.0) + 1e-12):
        raise DomainError("s_grid must lie in [0, N^(1/6)]")
    pair = rmt_constants(n, N)
    frame = lg_parameters(n, N)
    xi = (pair.center + pair.scale * s) / frame.kappa
    dev = np.abs(frame.kappa ** (2.0 / 3.0) * np.asarray(zeta_of_xi(frame, xi)) - s)
    return float(np.max(N ** (2.0 / 3.0) * dev / np.maximum(s * s, 1.0)))


# ---------------------------------------------------------------- phi, psi


def _phi_psi(n: int, N: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    at = n - N - 1
    pref = math.sqrt(math.sqrt(N * (n - 1.0)) / 2.0)
    root = np.sqrt(x)
    phi = (-1) ** N * pref * laguerre_weighted(N, at - 1, x) / root
    psi = (-1) ** (N - 1) * pref * laguerre_weighted(N - 1, at + 1, x) / root
    return phi, psi


def phi_psi_point(n: int, N: int, x):
    """The pair (phi(x), psi(x)) built from Laguerre functions of degree N and N-1.

    Parameters
    ----------
    n, N : int
        n - N >= 2 so that phi's Laguerre parameter n - N - 2 is > -1.
    x : float or array_like
        Positive abscissae.
    """
    n, N = _check_nN(n, N, gap=2)
    arr = np.asarray(x, dtype=float)
    if np.any(arr <= 0):
        raise DomainError("phi_psi_point needs x > 0")
    phi, psi = _phi_psi(n, N, arr)
    if arr.ndim == 0:
        return float(phi), float(psi)
    return phi, psi


def _tau_scaled(n: int, N: int, s, which: int):
    n, N = _check_nN(n, N, gap=2)
    pair = second_order_constants(n, N)
    s = np.asarray(s, dtype=float)
    x = pair.center + pair.scale * s
    pos = x > 0
    vals = _phi_psi(n, N, np.where(pos, x, 1.0))[which]
    out = np.where(pos, pair.scale * vals, 0.0)
    return float(out) if out.ndim == 0 else out


def phi_tau(n: int, N: int, s):
    """sigma~ phi(mu~ + sigma~ s), zero where the argument is negative."""
    return _tau_scaled(n, N, s, 0)


def psi_tau(n: int, N: int, s):
    """sigma~ psi(mu~ + sigma~ s), zero where the argument is negative."""
    return _tau_scaled(n, N, s, 1)


def _central_diff(fun, s: np.ndarray) -> np.ndarray:
    h = 1e-5 * np.maximum(1.0, np.abs(s))
    return (fun(s + h) - fun(s - h)) / (2.0 * h)


def _lemma_setup(n: int, N: int, s_grid):
    n, N = _check_nN(n, N, gap=2)
    if N < 2 or N % 2:
        raise DomainError(f"lemma profile needs even N >= 2, got N={N}")
    s = np.asarray(s_grid, dtype=float)
    if s.ndim != 1 or s.size == 0 or np.min(s) < -4 or np.max(s) > 4:
        raise DomainError("s_grid must be a nonempty subset of [-4, 4]")
    ai, aip = airy_arrays(s)
    g = ai / math.sqrt(2.0)
    gp = aip / math.sqrt(2.0)
    gpp = s * g
    return n, N, s, g, gp, gpp


def lemma_error_profile(n: int, N: int, s_grid) -> tuple[float, float, float, float]:
    """Weighted sup errors of psi_tau, psi_tau', phi_tau, phi_tau' against G = Ai/sqrt(2).

    The phi comparisons include the shift correction Delta_N G' and
    Delta_N G''. Each supremum carries the weight e^s.

    Returns
    -------
    tuple of float
        (sup_psi, sup_dpsi, sup_phi, sup_dphi).
    """
    n, N, s, g, gp, gpp = _lemma_setup(n, N, s_grid)
    d = delta_N(n, N)
    weight = np.exp(s)
    ps = psi_tau(n, N, s)
    ph = phi_tau(n, N, s)
    dps = _central_diff(lambda t: psi_tau(n, N, t), s)
    dph = _central_diff(lambda t: phi_tau(n, N, t), s)
    return (
        float(np.max(weight * np.abs(ps - g))),
        float(np.max(weight * np.abs(dps - gp))),
        float(np.max(weight * np.abs(ph - g - d * gp))),
        float(np.max(weight * np.abs(dph - gp - d * gpp))),
    )


def phi_uncorrected_error(n: int, N: int, s_grid) -> tuple[float, float]:
    """Weighted sup errors of phi_tau and phi_tau' without the Delta_N shift."""
    n, N, s, g, gp, _ = _lemma_setup(n, N, s_grid)
    weight = np.exp(s)
    ph = phi_tau(n, N, s)
    dph = _central_diff(lambda t: phi_tau(n, N, t), s)
    return float(np.max(weight * np.abs(ph - g))), float(np.max(weight * np.abs(dph - gp)))


# ---------------------------------------------------------------- kernels


def _cutoff(n: int, N: int) -> float:
    """Abscissa beyond which phi and psi are below 1e-17 in magnitude."""
    pair = second_order_constants(n, N)
    t = pair.center + 10.0 * pair.scale
    for _ in range(200):
        phi, psi = _phi_psi(n, N, np.array([t, t + pair.scale]))
        if np.max(np.abs(phi)) < 1e-17 and np.max(np.abs(psi)) < 1e-17:
            return float(t + pair.scale)
        t += 5.0 * pair.scale
    raise NumericError("could not locate the decay cutoff")


def _panel_nodes(a: float, b: float, width: float = 1.0):
    panels = max(1, int(math.ceil((b - a) / width)))
    return _composite_gl(a, b, panels, _GL20)


def _s2_matrix(n: int, N: int, xs: np.ndarray, ys: np.ndarray | None = None) -> np.ndarray:
    """S_{N,2}(x_i, y_j) from the integral representation; ys defaults to xs."""
    top = _cutoff(n, N)
    low = np.min(xs) if ys is None else min(np.min(xs), np.min(ys))
    # panels short enough to resolve bulk oscillations
    width = min(4.0, max(1.0, 0.5 * second_order_constants(n, N).scale))
    z, w = _panel_nodes(0.0, max(top - low, 1.0), width)
    phx, psx = _phi_psi(n, N, xs[:, None] + z[None, :])
    if ys is None:
        half = (phx * w) @ psx.T
        return half + half.T
    phy, psy = _phi_psi(n, N, ys[:, None] + z[None, :])
    return (phx * w) @ psy.T + (psx * w) @ phy.T


def _check_kernel_args(n, N, x, y, even: bool):
    n, N = _check_nN(n, N, gap=2)
    if even and (N < 2 or N % 2):
        raise DomainError(f"orthogonal kernel needs even N >= 2, got N={N}")
    x, y = float(x), float(y)
    if not (x > 0 and y > 0):
        raise DomainError("kernel arguments must be positive")
    return n, N, x, y


def s2_kernel(n: int, N: int, x: float, y: float) -> float:
    """Unitary-ensemble kernel S_{N,2}(x, y) by its integral representation."""
    n, N, x, y = _check_kernel_args(n, N, x, y, even=False)
    return float(_s2_matrix(n, N, np.array([x]), np.array([y]))[0, 0])


def cd_kernel(N: int, alpha: float, x, y) -> float:
    """Finite-sum kernel sum_{k<N} phi_k(x; alpha) phi_k(y; alpha)."""
    if N < 1:
        return 0.0
    px = laguerre_weighted_all(N - 1, alpha, np.asarray(x, dtype=float))
    py = laguerre_weighted_all(N - 1, alpha, np.asarray(y, dtype=float))
    return float(np.sum(px * py))


def _tail_integral(fun, y: float, top: float) -> float:
    if y >= top:
        return 0.0
    t, w = _panel_nodes(y, top)
    return float(np.sum(w * fun(t)))


def epsilon_tail(n: int, N: int, y: float) -> float:
    """int_y^inf phi(t) dt."""
    n, N = _check_nN(n, N, gap=2)
    return _tail_integral(lambda t: _phi_psi(n, N, t)[0], float(y), _cutoff(n, N))


def s1_kernel_central(n: int, N: int, x: float, y: float) -> float:
    """Orthogonal-ensemble kernel as S_{N,2} plus a rank-one correction.

    S_{N,1}(x, y) = S_{N,2}(x, y) + psi(x) (beta_N - int_y^inf phi),
    with beta_N from its closed form.
    """
    n, N, x, y = _check_kernel_args(n, N, x, y, even=True)
    s2 = s2_kernel(n, N, x, y)
    _, psi_x = _phi_psi(n, N, np.array(x))
    return s2 + float(psi_x) * (beta_N(n, N) - epsilon_tail(n, N, y))


def _phibar(k: int, alpha: float, t):
    return (-1) ** k * laguerre_weighted(k, alpha, t) / np.sqrt(t)


def s1_kernel_alt(n: int, N: int, x: float, y: float) -> float:
    """Orthogonal-ensemble kernel via the degree N-1 finite sum.

    sqrt(y/x) K_{N-1}(x, y; a) + sqrt((N-1)/N) (a_N/2) phibar_{N-1}(x; a)
    (eps phibar_{N-2})(y; a), with a = n - N, a_N = sqrt(N(n-1)) and
    (eps f)(y) = (1/2) int_0^inf f - int_y^inf f, both integrals numeric.
    """
    n, N, x, y = _check_kernel_args(n, N, x, y, even=True)
    a = n - N
    a_N = math.sqrt(N * (n - 1.0))
    top = _cutoff(n, N)
    # total integral with t = u^2 to absorb the t^(-1/2) factor
    u, w = _panel_nodes(0.0, math.sqrt(top), 0.25)
    total = float(np.sum(w * 2.0 * (-1) ** (N - 2) * laguerre_weighted(N - 2, a, u * u)))
    tail = _tail_integral(lambda t: _phibar(N - 2, a, t), y, top)
    eps = 0.5 * total - tail
    cd = cd_kernel(N - 1, a, x, y)
    return math.sqrt(y / x) * cd + math.sqrt((N - 1.0) / N) * 0.5 * a_N * float(_phibar(N - 1, a, x)) * eps


def lue_largest_cdf(n: int, N: int, x_cut: float, m: int = 48) -> float:
    """P(largest eigenvalue <= x_cut) for the unitary Laguerre ensemble.

    The ensemble has N points and weight x^(n-N-1) e^(-x), the law of
    complex Wishart data with n - 1 degrees of freedom. Evaluated as
    det(I - S_{N,2}) on [x_cut, x_cut + 14 sigma] by Gauss-Legendre
    Nystrom with m and 2m nodes.

    Raises
    ------
    NumericError
        If doubling m changes the value by more than 1e-4.
    """
    n, N = _check_nN(n, N, gap=2)
    x_cut = float(x_cut)
    if not x_cut > 0:
        raise DomainError("x_cut must be positive")
    length = 14.0 * second_order_constants(n, N).scale

    def det_at(order: int) -> float:
        nodes, weights = leggauss(order)
        x = x_cut + (nodes + 1.0) * length / 2.0
        w = weights * length / 2.0
        kern = _s2_matrix(n, N, x)
        sw = np.sqrt(w)
        return float(np.linalg.det(np.eye(order) - sw[:, None] * kern * sw[None, :]))

    coarse, fine = det_at(m), det_at(2 * m)
    if not (math.isfinite(fine) and abs(fine - coarse) <= 1e-4):
        raise NumericError(f"Fredholm determinant not converged: {coarse} vs {fine}")
    return min(max(fine, 0.0), 1.0)
