"""Bath spectral function and the distance-dependent decoherence integral.

Natural units hbar = c = k_B = 1 throughout, so frequency, temperature and
inverse length/time all share one unit.  The central quantity is

    Gamma(r, tau) = A * int_0^inf dw w^(s-2) (1 - cos w*tau) coth(w/2T)
                                  * sinc(w*r) * exp(-w/Omega)

evaluated by a three-part scheme: a Gauss-Jacobi rule on [0, w_c] that
absorbs the w^(s-1)-type endpoint behaviour exactly, an adaptive
Gauss-Legendre body on [w_c, W], and an analytic bound for the tail
beyond W that is folded into the reported error estimate.  When r is so
large that resolving sin(w*r) panel-by-panel is hopeless, the body
switches to a Filon-type rule that integrates the r-phase exactly
against a per-panel Legendre fit of the slow factors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from . import quadrature
from .dephasing import DecoherencePair
from .errors import ConvergenceError, DomainError

__all__ = [
    "BathParams", "GeometryParams", "QuadratureConfig", "GammaEstimate",
    "spectral_density", "decoherence_integrand", "gamma", "gamma_detailed",
    "gamma_pair", "scaled_gamma", "scaling_identity_sides",
]


@dataclass(frozen=True)
class BathParams:
    """Spectral and thermal parameters (A, s, Omega, T) of the bosonic bath."""

    A: float
    s: float
    Omega: float
    T: float

    def __post_init__(self):
        if not self.A >= 0.0:
            raise DomainError(f"coupling amplitude must be >= 0, got {self.A}")
        if not 0.0 < self.s < 3.0:
            raise DomainError(f"spectral exponent must lie in (0, 3), got {self.s}")
        if not self.Omega > 0.0:
            raise DomainError(f"cutoff must be > 0, got {self.Omega}")
        if not self.T >= 0.0:
            raise DomainError(f"temperature must be >= 0, got {self.T}")


@dataclass(frozen=True)
class GeometryParams:
    """Inter-qubit distance r and observation time tau."""

    r: float
    tau: float

    def __post_init__(self):
        if not self.r >= 0.0:
            raise DomainError(f"distance must be >= 0, got {self.r}")
        if not self.tau >= 0.0:
            raise DomainError(f"time must be >= 0, got {self.tau}")


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and budgets for the decoherence integral.

    abs_tol=None selects the default 1e-12 * A * Omega^(s-1).
    """

    abs_tol: float | None = None
    rel_tol: float = 1e-9
    max_panels: int = 200_000
    head_nodes: int = 24


@dataclass(frozen=True)
class GammaEstimate:
    value: float
    error_estimate: float
    singular_flag: bool = False


def spectral_density(bath: BathParams, omega):
    """J(w) = A w^s exp(-w/Omega); scalar in, scalar out (arrays pass through)."""
    om = np.asarray(omega, dtype=float)
    if np.any(om < 0.0):
        raise DomainError("frequency must be >= 0")
    val = bath.A * om ** bath.s * np.exp(-om / bath.Omega)
    return float(val) if np.isscalar(omega) or om.ndim == 0 else val


def _series_threshold(T: float, tau: float) -> float:
    # below this frequency coth is replaced by its Laurent series 2T/w + w/(6T)
    lim = T
    if tau > 0.0:
        lim = min(lim, 1.0 / tau)
    return 1e-4 * lim


def _coth(omega: np.ndarray, T: float, series_below: float) -> np.ndarray:
    out = np.empty_like(omega)
    x = omega / (2.0 * T)
    small = omega < series_below
    big = x >= 20.0
    mid = ~(small | big)
    out[small] = 2.0 * T / omega[small] + omega[small] / (6.0 * T)
    out[big] = 1.0
    out[mid] = 1.0 + 2.0 / np.expm1(2.0 * x[mid])
    return out


def decoherence_integrand(omega, bath: BathParams, geom: GeometryParams) -> np.ndarray:
    """Stable elementwise evaluation of the Gamma integrand.

    Uses (1-cos w*tau)/w^2 = (tau^2/2) sinc(w*tau/2pi)^2 and a branched coth,
    so no 0/0 is ever formed.  w = 0 itself is mapped to the analytic limit.
    """
    om = np.atleast_1d(np.asarray(omega, dtype=float))
    osc = 0.5 * geom.tau ** 2 * np.sinc(om * geom.tau / (2.0 * np.pi)) ** 2
    val = bath.A * om ** bath.s * osc \
        * np.sinc(om * geom.r / np.pi) * np.exp(-om / bath.Omega)
    if bath.T > 0.0:
        zero = om == 0.0
        if zero.any():
            safe = np.where(zero, 1.0, om)
            val = val * _coth(safe, bath.T, _series_threshold(bath.T, geom.tau))
            if bath.s == 1.0:
                lim = bath.A * geom.tau ** 2 * bath.T
            elif bath.s > 1.0:
                lim = 0.0
            else:
                lim = np.inf
            val[zero] = lim
        else:
            val = val * _coth(om, bath.T, _series_threshold(bath.T, geom.tau))
    return val


def _head_integral(bath: BathParams, geom: GeometryParams, wc: float,
                   nodes: int) -> tuple[float, float]:
    """Gauss-Jacobi evaluation of [0, wc]; the w^(s-1) (or w^s at T=0)
    endpoint factor is the Jacobi weight, the remainder is analytic."""
    thr = _series_threshold(bath.T, geom.tau) if bath.T > 0.0 else 0.0

    def smooth(om):
        g = 0.5 * geom.tau ** 2 * np.sinc(om * geom.tau / (2.0 * np.pi)) ** 2 \
            * np.sinc(om * geom.r / np.pi) * np.exp(-om / bath.Omega)
        if bath.T > 0.0:
            wcoth = np.where(om < thr,
                             2.0 * bath.T + om ** 2 / (6.0 * bath.T),
                             om * (1.0 + 2.0 / np.expm1(
                                 np.minimum(om / bath.T, 50.0))))
            g = g * wcoth
        return g

    if bath.T > 0.0:
        beta = bath.s - 1.0
        prefac = bath.A * (0.5 * wc) ** bath.s
    else:
        beta = bath.s
        prefac = bath.A * (0.5 * wc) ** (bath.s + 1.0)

    vals = []
    for m in (nodes // 2, nodes):
        x, w = special.roots_jacobi(m, 0.0, beta)
        om = 0.5 * wc * (x + 1.0)
        vals.append(prefac * float(w @ smooth(om)))
    return vals[1], abs(vals[1] - vals[0])


def _tail_bound(bath: BathParams, W: float) -> float:
    # |1-cos| <= 2, |sinc| <= 1, coth(w/2T) <= 1 + 2T/w <= 1 + 2T/W
    factor = 2.0 * bath.A
    if bath.T > 0.0:
        factor *= 1.0 + 2.0 * bath.T / W
    if bath.s <= 2.0:
        integ = W ** (bath.s - 2.0) * bath.Omega * math.exp(-W / bath.Omega)
    else:
        integ = bath.Omega ** (bath.s - 1.0) * math.gamma(bath.s - 1.0) \
            * special.gammaincc(bath.s - 1.0, W / bath.Omega)
    return factor * integ


# Filon path: per-panel Legendre fit of the slow factors, exact sine moments.
_FILON_DEG = 15
_B_FILON = None


def _filon_matrix():
    global _B_FILON
    if _B_FILON is None:
        x, w = np.polynomial.legendre.leggauss(_FILON_DEG)
        V = np.polynomial.legendre.legvander(x, _FILON_DEG - 1)
        n = np.arange(_FILON_DEG)
        _B_FILON = ((n + 0.5)[:, None] * (V.T * w), x)
    return _B_FILON


def _filon_pass(F, edges: np.ndarray, r: float) -> float:
    B, xg = _filon_matrix()
    lo, hi = edges[:-1], edges[1:]
    h = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    xs = mid[:, None] + h[:, None] * xg
    Fv = F(xs.ravel()).reshape(xs.shape)
    coef = Fv @ B.T
    z = r * h
    jn = np.empty_like(coef)
    for n in range(_FILON_DEG):
        jn[:, n] = special.spherical_jn(n, z)
    ph = r * mid
    sin_p, cos_p = np.sin(ph), np.cos(ph)
    quarter = (sin_p, cos_p, -sin_p, -cos_p)
    trig = np.stack([quarter[n % 4] for n in range(_FILON_DEG)], axis=1)
    return float((2.0 * h * (coef * jn * trig).sum(axis=1)).sum())


def _filon_sine_integral(F, edges: np.ndarray, r: float, abs_tol: float,
                         rel_tol: float) -> tuple[float, float]:
    prev = _filon_pass(F, edges, r)
    for _ in range(4):
        mids = 0.5 * (edges[:-1] + edges[1:])
        edges = np.sort(np.concatenate([edges, mids]))
        cur = _filon_pass(F, edges, r)
        err = abs(cur - prev)
        if err <= max(abs_tol, rel_tol * abs(cur)):
            return cur, err
        prev = cur
    raise ConvergenceError("oscillatory far-field quadrature failed to settle",
                           estimate=cur, error_estimate=err)


def _filon_edges(wc: float, W: float, slow_cap: float) -> np.ndarray:
    # geometric growth away from the origin until the slow-scale cap binds
    pts = [wc]
    x = wc
    while x < W:
        x = min(W, x + min(slow_cap, x))
        pts.append(x)
    return np.asarray(pts)


def gamma_detailed(bath: BathParams, geom: GeometryParams,
                   quad: QuadratureConfig | None = None) -> GammaEstimate:
    """Decoherence integral with an explicit error estimate.

    The singular_flag marks the qualitative 2 <= s < 3 regime where the
    integral develops a kink across r = tau; the value is still returned.
    """
    quad = quad or QuadratureConfig()
    s, Om, T = bath.s, bath.Omega, bath.T
    r, tau = geom.r, geom.tau
    flag = s >= 2.0 and tau > 0.0 and abs(r - tau) < 1e-3 * tau
    if bath.A == 0.0 or tau == 0.0:
        return GammaEstimate(0.0, 0.0, flag)

    abs_tol = quad.abs_tol if quad.abs_tol is not None \
        else 1e-12 * bath.A * Om ** (s - 1.0)
    W = Om * max(40.0, 10.0 * s)
    scales = [Om]
    if T > 0.0:
        scales.append(T)
    scales.append(1.0 / tau)
    if r > 0.0:
        scales.append(1.0 / r)
    wc = 0.5 * min(scales)

    head, head_err = _head_integral(bath, geom, wc, quad.head_nodes)

    slow_cap = 0.5 * np.pi / max(tau, 1.0 / Om)
    full_cap = 0.5 * np.pi / max(r, tau, 1.0 / Om)
    body_tol = 0.5 * abs_tol
    if (W - wc) / full_cap > 30_000 and r > 4.0 * max(tau, 1.0 / Om):
        F = _far_field_factor(bath, geom)
        body, body_err = _filon_sine_integral(
            F, _filon_edges(wc, W, slow_cap), r, body_tol, quad.rel_tol)
    else:
        width = max(full_cap, (W - wc) / 30_000)
        edges = quadrature.uniform_edges(wc, W, width)
        try:
            body, body_err = quadrature.integrate(
                lambda om: decoherence_integrand(om, bath, geom), edges,
                abs_tol=body_tol, rel_tol=quad.rel_tol,
                max_panels=quad.max_panels)
        except ConvergenceError as exc:
            raise ConvergenceError(
                str(exc), estimate=head + exc.estimate,
                error_estimate=head_err + exc.error_estimate + _tail_bound(bath, W)
            ) from None

    value = head + body
    err = head_err + body_err + _tail_bound(bath, W)
    err = max(err, 2e-16 * abs(value))
    return GammaEstimate(value, err, flag)


def _far_field_factor(bath: BathParams, geom: GeometryParams):
    # slow part of the integrand once sin(w*r)/r is peeled off
    thr = _series_threshold(bath.T, geom.tau) if bath.T > 0.0 else 0.0

    def F(om):
        v = bath.A / geom.r * om ** (bath.s - 1.0) \
            * 0.5 * geom.tau ** 2 * np.sinc(om * geom.tau / (2.0 * np.pi)) ** 2 \
            * np.exp(-om / bath.Omega)
        if bath.T > 0.0:
            v = v * _coth(om, bath.T, thr)
        return v

    return F


def gamma(bath: BathParams, geom: GeometryParams,
          quad: QuadratureConfig | None = None) -> float:
    return gamma_detailed(bath, geom, quad).value


def gamma_pair(bath: BathParams, r: float, tau: float,
               quad: QuadratureConfig | None = None) -> DecoherencePair:
    """(Gamma_0, Gamma_r) with consistency clamps of quadrature roundoff.

    Outside the monotone regime (2 <= s < 3 can drive Gamma_r negative) the
    two-parameter channel does not apply and a DomainError is raised instead
    of silently truncating.
    """
    g0 = gamma_detailed(bath, GeometryParams(0.0, tau), quad)
    gr = g0 if r == 0.0 else gamma_detailed(bath, GeometryParams(r, tau), quad)
    slack = g0.error_estimate + gr.error_estimate + 1e-12 * abs(g0.value) + 1e-300
    v0, vr = g0.value, gr.value
    if v0 < 0.0:
        if v0 < -slack:
            raise ConvergenceError("gamma(0) computed negative",
                                   estimate=v0, error_estimate=slack)
        v0 = 0.0
    if vr < 0.0:
        if vr < -slack:
            raise DomainError(
                f"cross decoherence is negative ({vr:.6e}) at s={bath.s}; "
                "the (Gamma_0, Gamma_r) channel covers only the monotone regime")
        vr = 0.0
    if vr > v0:
        if vr - v0 > slack:
            raise ConvergenceError("gamma(r) exceeded gamma(0) beyond tolerance",
                                   estimate=vr, error_estimate=vr - v0)
        vr = v0
    return DecoherencePair(v0, vr)


def scaled_gamma(bath: BathParams, base: GeometryParams, a: float,
                 quad: QuadratureConfig | None = None) -> float:
    """Gamma evaluated at geometry (a*r0, a*tau0) with the bath unchanged."""
    if not a > 0.0:
        raise DomainError(f"scale factor must be > 0, got {a}")
    return gamma(bath, GeometryParams(base.r * a, base.tau * a), quad)


def scaling_identity_sides(bath: BathParams, base: GeometryParams, a: float,
                           quad: QuadratureConfig | None = None
                           ) -> tuple[GammaEstimate, GammaEstimate]:
    """Both sides of Gamma(s, a r0, a tau0, T, Omega) = a^(1-s) Gamma(s, r0, tau0, aT, aOmega).

    Returned as detailed estimates so equality can be asserted against the
    combined quadrature errors.
    """
    if not a > 0.0:
        raise DomainError(f"scale factor must be > 0, got {a}")
    lhs = gamma_detailed(bath, GeometryParams(base.r * a, base.tau * a), quad)
    scaled_bath = BathParams(bath.A, bath.s, bath.Omega * a, bath.T * a)
    rd = gamma_detailed(scaled_bath, base, quad)
    fac = a ** (1.0 - bath.s)
    rhs = GammaEstimate(fac * rd.value, fac * rd.error_estimate, rd.singular_flag)
    return lhs, rhs
