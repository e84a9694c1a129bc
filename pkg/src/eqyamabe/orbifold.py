"""Rotationally symmetric 2-orbifold bases.

Two representations are kept side by side:

* an arclength profile (ds^2 + phi(s)^2 dtheta^2 on [0, L] with cone points
  at the ends), which makes curvature, area and the radial Laplacian
  one-dimensional, and
* the rational chart of the weighted projective line CP^1(m1, m2), carrying
  the functions lam1, lam2, gamma of the quotient metric of the weighted
  circle action on the 3-sphere.

`wps_profile` converts the chart into an arclength profile.  Labelling
convention: the pole at s = 0 is the zero locus of the first complex
coordinate and carries isotropy of order m2; the pole at s = L carries
order m1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import DomainError, GridTooCoarse, NotCoprime, QuadratureFailure
from .numerics import IntegralResult, NoConvergence, QuadratureConfig, integrate

__all__ = [
    "ConeSurfaceProfile",
    "FlatTorusBase",
    "WpsChart",
    "Base",
    "make_round_sphere",
    "wps_profile",
    "profile_from_callables",
    "profile_from_samples",
    "gauss_curvature",
    "area",
    "gauss_bonnet_check",
    "chi_orb",
    "integrate_over_base",
    "scale_base",
]

_SLOPE_TOL = 1e-6


# ---------------------------------------------------------------------------
# chart of the weighted projective line
# ---------------------------------------------------------------------------

def _check_weights(m1: int, m2: int) -> None:
    if not (isinstance(m1, (int, np.integer)) and isinstance(m2, (int, np.integer))):
        raise NotCoprime("weights must be integers")
    if m1 < 1 or m2 < 1:
        raise NotCoprime("weights must be positive")
    if math.gcd(int(m1), int(m2)) != 1:
        raise NotCoprime(f"weights ({m1}, {m2}) are not coprime")


@dataclass(frozen=True)
class WpsChart:
    """Radial chart data of CP^1(m1, m2) in the parameter t in (0, 1).

    t is the squared modulus of the first sphere coordinate.  The frame
    functions are

        lam1(t) = -sqrt((m1^2 - m2^2) t + m2^2) / sqrt(t (1 - t))
        lam2(t) = -((m1 - m2) t + m2) / sqrt(t (1 - t))
        gamma(r) = (1 - r)^m1 / r^m2

    All first and second derivatives are hand-coded elementary expressions;
    they are validated against central differences in the test suite.
    """

    m1: int
    m2: int

    def __post_init__(self) -> None:
        _check_weights(self.m1, self.m2)

    # polynomial building blocks: P > 0 and Q > 0 on [0, 1]
    def _P(self, t):
        return (self.m1**2 - self.m2**2) * t + self.m2**2

    def _Q(self, t):
        return (self.m1 - self.m2) * t + self.m2

    def lam1(self, t):
        return -np.sqrt(self._P(t)) / np.sqrt(t * (1.0 - t))

    def lam1_d1(self, t):
        a = self.m1**2 - self.m2**2
        q = t * (1.0 - t)
        qp = 1.0 - 2.0 * t
        u = np.sqrt(self._P(t))
        up = a / (2.0 * u)
        v = q**-0.5
        vp = -0.5 * q**-1.5 * qp
        return -(up * v + u * vp)

    def lam1_d2(self, t):
        a = self.m1**2 - self.m2**2
        q = t * (1.0 - t)
        qp = 1.0 - 2.0 * t
        P = self._P(t)
        u = np.sqrt(P)
        up = a / (2.0 * u)
        upp = -(a * a) / (4.0 * P**1.5)
        v = q**-0.5
        vp = -0.5 * q**-1.5 * qp
        vpp = 0.75 * q**-2.5 * qp**2 + q**-1.5  # q'' = -2
        return -(upp * v + 2.0 * up * vp + u * vpp)

    def lam2(self, t):
        return -self._Q(t) / np.sqrt(t * (1.0 - t))

    def lam2_d1(self, t):
        b = self.m1 - self.m2
        q = t * (1.0 - t)
        qp = 1.0 - 2.0 * t
        v = q**-0.5
        vp = -0.5 * q**-1.5 * qp
        return -(b * v + self._Q(t) * vp)

    def lam2_d2(self, t):
        b = self.m1 - self.m2
        q = t * (1.0 - t)
        qp = 1.0 - 2.0 * t
        vp = -0.5 * q**-1.5 * qp
        vpp = 0.75 * q**-2.5 * qp**2 + q**-1.5
        return -(2.0 * b * vp + self._Q(t) * vpp)

    def gamma(self, r):
        return (1.0 - r) ** self.m1 / r**self.m2

    def gamma_d1(self, r):
        return self.gamma(r) * self.dlog_gamma(r)

    def gamma_d2(self, r):
        D = self.dlog_gamma(r)
        return self.gamma(r) * (D * D + self.dlog_gamma_d1(r))

    # log-derivative of gamma; works at every scale, unlike gamma itself
    def dlog_gamma(self, r):
        return -self._Q(r) / (r * (1.0 - r))

    def dlog_gamma_d1(self, r):
        b = self.m1 - self.m2
        q = r * (1.0 - r)
        return -(b * q - self._Q(r) * (1.0 - 2.0 * r)) / q**2

    def shear(self, t):
        """W = lam2 lam1' gamma / (lam1 gamma'), the connection coefficient."""
        return self.lam2(t) * self.lam1_d1(t) / (self.lam1(t) * self.dlog_gamma(t))

    def shear_d1(self, t):
        n = self.lam2(t) * self.lam1_d1(t)
        npr = self.lam2_d1(t) * self.lam1_d1(t) + self.lam2(t) * self.lam1_d2(t)
        d = self.lam1(t) * self.dlog_gamma(t)
        dpr = self.lam1_d1(t) * self.dlog_gamma(t) + self.lam1(t) * self.dlog_gamma_d1(t)
        return (npr * d - n * dpr) / (d * d)

    def kappa(self, t):
        """Gaussian curvature of the quotient metric at chart parameter t."""
        W = self.shear(t)
        return 4.0 * (self.shear_d1(t) * self.lam2(t) / self.dlog_gamma(t) - W * W)

    def boundary_form(self, t):
        """2 lam2 lam1' gamma / (lam1^2 gamma'); its endpoint limits are 1/m2 and -1/m1."""
        return 2.0 * self.lam2(t) * self.lam1_d1(t) / (self.lam1(t) ** 2 * self.dlog_gamma(t))


# ---------------------------------------------------------------------------
# bases
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConeSurfaceProfile:
    """Arclength profile of a rotationally symmetric 2-orbifold sphere.

    phi > 0 on (0, L), phi(0) = phi(L) = 0, and the profile slopes at the
    poles are 1/m_start and -1/m_end (cone angles 2 pi / m).
    """

    length: float
    m_start: int
    m_end: int
    phi: Callable[[np.ndarray], np.ndarray]
    phi_d1: Callable[[np.ndarray], np.ndarray]
    phi_d2: Callable[[np.ndarray], np.ndarray]
    label: str = "profile"

    def chi_orb(self) -> float:
        return 1.0 / self.m_start + 1.0 / self.m_end


@dataclass(frozen=True)
class FlatTorusBase:
    """Flat torus: periodic coordinate of length `length`, constant radius."""

    length: float
    radius: float

    def __post_init__(self) -> None:
        if self.length <= 0 or self.radius <= 0:
            raise ValueError("torus length and radius must be positive")

    def chi_orb(self) -> float:
        return 0.0


Base = Union[ConeSurfaceProfile, FlatTorusBase]


def profile_from_callables(
    length: float,
    phi: Callable,
    phi_d1: Callable,
    phi_d2: Callable,
    m_start: int,
    m_end: int,
    label: str = "profile",
    check: bool = True,
) -> ConeSurfaceProfile:
    """Wrap closed-form profile data, verifying the cone-slope invariants."""
    base = ConeSurfaceProfile(float(length), int(m_start), int(m_end), phi, phi_d1, phi_d2, label)
    if check:
        _check_cone_slopes(base, h=min(1e-5, length * 1e-5))
    return base


def _one_sided_slope(phi: Callable, s0: float, h: float, sign: float) -> float:
    # Richardson pair kills the h^2 term of the odd pole series.
    d1 = (float(phi(s0 + sign * h)) - float(phi(s0))) / h
    d2 = (float(phi(s0 + sign * 2 * h)) - float(phi(s0))) / (2 * h)
    return sign * (4.0 * d1 - d2) / 3.0


def _check_cone_slopes(base: ConeSurfaceProfile, h: float) -> None:
    if 2 * h >= base.length:
        raise GridTooCoarse("differencing step exceeds the profile length")
    probe = np.linspace(h, base.length - h, 65)
    if np.any(np.asarray(base.phi(probe)) <= 0.0):
        raise ValueError("profile must be strictly positive between the poles")
    s_start = _one_sided_slope(base.phi, 0.0, h, +1.0)
    s_end = _one_sided_slope(base.phi, base.length, h, -1.0)
    err0 = abs(s_start - 1.0 / base.m_start)
    errL = abs(s_end + 1.0 / base.m_end)
    if err0 > _SLOPE_TOL or errL > _SLOPE_TOL:
        raise GridTooCoarse(
            f"cone-order check failed at h={h:.3e}: slope errors {err0:.3e}, {errL:.3e}"
        )


def make_round_sphere(radius: float) -> ConeSurfaceProfile:
    """Round sphere of the given radius as a smooth profile (cone orders 1, 1)."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    R = float(radius)
    return profile_from_callables(
        math.pi * R,
        lambda s: R * np.sin(np.asarray(s) / R),
        lambda s: np.cos(np.asarray(s) / R),
        lambda s: -np.sin(np.asarray(s) / R) / R,
        1,
        1,
        label=f"round_sphere(R={R})",
        check=False,
    )


def wps_profile(m1: int, m2: int, grid: int = 512) -> ConeSurfaceProfile:
    """Arclength profile of the quotient metric of the weighted circle action.

    Along the chart, circumference/2pi is -1/lam1 and the arclength element
    is |gamma'| dt / (2 gamma |lam2|), which simplifies to dt / (2 sqrt(t(1-t))),
    so t = sin(s)^2 with total length pi/2.  Evaluation is split at L/2 and
    mirrored through the swapped-weight chart so that 1 - t is never formed
    by cancellation near a pole.
    """
    _check_weights(m1, m2)
    if grid < 4:
        raise GridTooCoarse("grid must be at least 4")
    chart_lo = WpsChart(int(m1), int(m2))      # s <= L/2, t = sin^2 s small
    chart_hi = WpsChart(int(m2), int(m1))      # mirrored coordinates near s = L
    L = 0.5 * math.pi

    def _eval(s, order: int):
        s = np.asarray(s, dtype=float)
        scalar = s.ndim == 0
        s = np.atleast_1d(s).copy()
        out = np.empty_like(s)
        # exact pole values, so the accessors are total on [0, L]
        at_start = s <= 0.0
        at_end = s >= L
        pole_vals = {0: (0.0, 0.0), 1: (1.0 / m2, -1.0 / m1), 2: (0.0, 0.0)}[order]
        near = s <= 0.5 * L
        for mask, chart, sign in ((near & ~at_start, chart_lo, 1.0), (~near & ~at_end, chart_hi, -1.0)):
            if not np.any(mask):
                continue
            sf = s[mask] if sign > 0 else L - s[mask]
            t = np.sin(sf) ** 2
            l1 = chart.lam1(t)
            if order == 0:
                out[mask] = -1.0 / l1
                continue
            l1p = chart.lam1_d1(t)
            dphidt = l1p / l1**2
            s2 = np.sin(2.0 * sf)
            if order == 1:
                out[mask] = sign * dphidt * s2
            else:
                l1pp = chart.lam1_d2(t)
                d2 = (l1pp / l1**2 - 2.0 * l1p**2 / l1**3) * s2**2 + dphidt * 2.0 * np.cos(2.0 * sf)
                out[mask] = d2
        out[at_start] = pole_vals[0]
        out[at_end] = pole_vals[1]
        return out[0] if scalar else out

    base = ConeSurfaceProfile(
        L,
        int(m2),
        int(m1),
        lambda s: _eval(s, 0),
        lambda s: _eval(s, 1),
        lambda s: _eval(s, 2),
        label=f"wps({m1},{m2})",
    )
    _check_cone_slopes(base, h=L / grid)
    return base


def profile_from_samples(
    s_values: np.ndarray,
    phi_values: np.ndarray,
    m_start: int,
    m_end: int,
    label: str = "sampled_profile",
) -> ConeSurfaceProfile:
    """Profile from arclength samples; endpoints must be the poles (phi = 0).

    Interior values and first derivatives come from a cubic spline.  Second
    derivatives near the poles are evaluated from the odd series
    phi ~ s/m - c s^3 fitted to nearby samples, which avoids differencing
    across the pole.
    """
    s = np.asarray(s_values, dtype=float)
    p = np.asarray(phi_values, dtype=float)
    if s.ndim != 1 or s.size < 8 or s.shape != p.shape:
        raise ValueError("need matching 1-d sample arrays with at least 8 points")
    if np.any(np.diff(s) <= 0):
        raise ValueError("sample abscissae must be strictly increasing")
    if abs(p[0]) > 1e-12 or abs(p[-1]) > 1e-12:
        raise ValueError("profile samples must vanish at both poles")
    L = float(s[-1] - s[0])
    s = s - s[0]
    if np.any(p[1:-1] <= 0):
        raise ValueError("profile must be positive between the poles")

    spline = CubicSpline(s, p, bc_type=((1, 1.0 / m_start), (1, -1.0 / m_end)))
    margin = max(3 * float(np.max(np.diff(s[: max(4, s.size // 8)]))), 0.02 * L)

    def _series_c3(pole: float, m: int, sign: float) -> float:
        # least squares for phi = d/m - c d^3 with d the distance into the profile
        sel = (np.abs(s - pole) > 0) & (np.abs(s - pole) <= 2 * margin)
        d = sign * (s[sel] - pole)
        resid = d / m - p[sel]
        return float(np.sum(d**3 * resid) / np.sum(d**6))

    c3_start = _series_c3(0.0, m_start, +1.0)
    c3_end = _series_c3(L, m_end, -1.0)

    def phi_fn(x):
        return spline(np.clip(np.asarray(x, dtype=float), 0.0, L))

    def phi_d1(x):
        return spline(np.clip(np.asarray(x, dtype=float), 0.0, L), 1)

    def phi_d2(x):
        # series near the poles, spline in the interior, linearly blended over
        # the outer half of the margin so the integrand stays continuous
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        x = np.atleast_1d(x)
        out = spline(np.clip(x, 0.0, L), 2)
        for dist, series in ((x, -6.0 * c3_start * x), (L - x, -6.0 * c3_end * (L - x))):
            w = np.clip(2.0 - 2.0 * dist / margin, 0.0, 1.0)
            out = w * series + (1.0 - w) * out
        return out[0] if scalar else out

    base = ConeSurfaceProfile(L, int(m_start), int(m_end), phi_fn, phi_d1, phi_d2, label)
    _check_cone_slopes(base, h=max(L * 1e-4, float(s[1] - s[0])))
    return base


# ---------------------------------------------------------------------------
# base queries
# ---------------------------------------------------------------------------

def gauss_curvature(base: Base, s):
    """Gauss curvature at arclength s: -phi''/phi for profiles, 0 for the torus."""
    if isinstance(base, FlatTorusBase):
        return np.zeros_like(np.asarray(s, dtype=float)) if np.ndim(s) else 0.0
    s_arr = np.asarray(s, dtype=float)
    if np.any(s_arr <= 0.0) or np.any(s_arr >= base.length):
        raise DomainError("curvature is defined on the open interval (0, L)")
    return -base.phi_d2(s) / base.phi(s)


def integrate_over_base(
    base: Base,
    fn: Callable[[np.ndarray], np.ndarray],
    cfg: QuadratureConfig | None = None,
    endpoint_mode: str | None = None,
) -> IntegralResult:
    """Integral of a radial function against the area measure of the base."""
    if cfg is None:
        cfg = QuadratureConfig()
    if endpoint_mode is not None and endpoint_mode != cfg.endpoint_mode:
        cfg = QuadratureConfig(
            panels=cfg.panels,
            points_per_panel=cfg.points_per_panel,
            endpoint_mode=endpoint_mode,
            epsilon=cfg.epsilon,
            max_refinements=cfg.max_refinements,
            abs_tol=cfg.abs_tol,
            rel_tol=cfg.rel_tol,
        )
    try:
        if isinstance(base, FlatTorusBase):
            res = integrate(lambda s: np.asarray(fn(s)), 0.0, base.length, cfg)
            return IntegralResult(
                2.0 * math.pi * base.radius * res.value,
                2.0 * math.pi * base.radius * res.error_estimate,
                res.refinements_used,
            )
        res = integrate(lambda s: np.asarray(fn(s)) * base.phi(s), 0.0, base.length, cfg)
        return IntegralResult(
            2.0 * math.pi * res.value, 2.0 * math.pi * res.error_estimate, res.refinements_used
        )
    except NoConvergence as exc:
        raise QuadratureFailure(str(exc)) from exc


def area(base: Base, cfg: QuadratureConfig | None = None) -> float:
    """Total area: 2 pi int phi ds, or 2 pi c L for the torus."""
    if isinstance(base, FlatTorusBase):
        return 2.0 * math.pi * base.radius * base.length
    return integrate_over_base(base, lambda s: np.ones_like(s), cfg, endpoint_mode="plain").value


def gauss_bonnet_check(base: Base, cfg: QuadratureConfig | None = None) -> float:
    """(1/2pi) int K dA by quadrature; contract: equals chi_orb within 1e-6.

    The default tolerance is matched to that contract rather than to the
    library default: sampled profiles have piecewise second derivatives and
    cannot refine to 1e-10.
    """
    if isinstance(base, FlatTorusBase):
        return 0.0
    if cfg is None:
        cfg = QuadratureConfig(endpoint_mode="epsilon_cutoff", abs_tol=1e-9, rel_tol=1e-8)
    res = integrate_over_base(
        base, lambda s: -base.phi_d2(s) / base.phi(s), cfg, endpoint_mode="epsilon_cutoff"
    )
    return res.value / (2.0 * math.pi)


def chi_orb(base: Base) -> float:
    """Orbifold Euler characteristic from the cone data (exact, no quadrature)."""
    return base.chi_orb()


def scale_base(base: Base, c: float) -> Base:
    """Metric scaling g -> c^2 g: (L, phi) -> (cL, c phi(s/c))."""
    if c <= 0:
        raise ValueError("scale factor must be positive")
    if isinstance(base, FlatTorusBase):
        return FlatTorusBase(c * base.length, c * base.radius)
    return ConeSurfaceProfile(
        c * base.length,
        base.m_start,
        base.m_end,
        lambda s: c * base.phi(np.asarray(s) / c),
        lambda s: base.phi_d1(np.asarray(s) / c),
        lambda s: base.phi_d2(np.asarray(s) / c) / c,
        label=f"{base.label}*{c}",
    )
