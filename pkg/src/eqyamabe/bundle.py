"""Circle-invariant metrics on circle bundles over a rotationally symmetric base.

A metric is (base, ell, F): the base orbifold, the fiber-length profile ell,
and the curvature density F defining the curvature 2-form as F times the base
area form.  With the convention that the area form has pointwise norm sqrt(2),
the squared norm of the curvature form is 2 F^2.

The Laplacian is taken nonnegative throughout: on radial functions
Delta f = -(phi f')' / phi.  This is the unique sign under which the two
equivalent forms of the submersion scalar-curvature formula coincide; see
`scalar_curvature_total` and the companion `_scalar_curvature_log_form`.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
from scipy.interpolate import CubicSpline

from .numerics import QuadratureConfig
from .orbifold import (
    Base,
    ConeSurfaceProfile,
    FlatTorusBase,
    integrate_over_base,
    scale_base,
)

__all__ = [
    "RadialField",
    "InvariantMetric",
    "NormReport",
    "scalar_curvature_total",
    "omega_norms",
    "volume_total",
    "scale_metric",
]


@dataclass(frozen=True)
class RadialField:
    """A radial (circle-invariant) function on the base with two derivatives.

    Callables must be vectorized.  `constant` is set when the field is known
    to be constant, which lets closed-form evaluations skip quadrature.
    """

    value: Callable[[np.ndarray], np.ndarray]
    d1: Callable[[np.ndarray], np.ndarray]
    d2: Callable[[np.ndarray], np.ndarray]
    constant: float | None = None

    @classmethod
    def const(cls, c: float) -> "RadialField":
        c = float(c)
        return cls(
            value=lambda s: np.full_like(np.asarray(s, dtype=float), c),
            d1=lambda s: np.zeros_like(np.asarray(s, dtype=float)),
            d2=lambda s: np.zeros_like(np.asarray(s, dtype=float)),
            constant=c,
        )

    @classmethod
    def from_callables(cls, value: Callable, d1: Callable | None = None,
                       d2: Callable | None = None, fd_step: float = 1e-6) -> "RadialField":
        """Wrap a callable; missing derivatives fall back to central differences."""
        if d1 is None:
            def d1(s, _f=value, _h=fd_step):
                s = np.asarray(s, dtype=float)
                return (_f(s + _h) - _f(s - _h)) / (2.0 * _h)
        if d2 is None:
            def d2(s, _f=value, _h=fd_step):
                s = np.asarray(s, dtype=float)
                return (_f(s + _h) - 2.0 * _f(s) + _f(s - _h)) / (_h * _h)
        return cls(value=value, d1=d1, d2=d2)

    @classmethod
    def from_samples(cls, grid: np.ndarray, values: np.ndarray,
                     periodic: bool = False) -> "RadialField":
        """Spline through samples; non-periodic data gets zero endpoint slope,
        matching the smoothness of invariant data at cone poles."""
        grid = np.asarray(grid, dtype=float)
        values = np.asarray(values, dtype=float)
        if periodic:
            if abs(values[0] - values[-1]) > 1e-12 * max(1.0, abs(values[0])):
                raise ValueError("periodic samples must match at the seam")
            spline = CubicSpline(grid, values, bc_type="periodic")
        else:
            spline = CubicSpline(grid, values, bc_type=((1, 0.0), (1, 0.0)))
        lo, hi = float(grid[0]), float(grid[-1])
        span = hi - lo

        def wrap(s):
            s = np.asarray(s, dtype=float)
            return lo + np.mod(s - lo, span) if periodic else np.clip(s, lo, hi)

        return cls(
            value=lambda s: spline(wrap(s)),
            d1=lambda s: spline(wrap(s), 1),
            d2=lambda s: spline(wrap(s), 2),
        )


FieldLike = Union[RadialField, float, int, Callable]


def as_radial_field(obj: FieldLike) -> RadialField:
    if isinstance(obj, RadialField):
        return obj
    if isinstance(obj, (int, float)):
        return RadialField.const(float(obj))
    if callable(obj):
        return RadialField.from_callables(obj)
    raise TypeError(f"cannot interpret {type(obj).__name__} as a radial field")


@dataclass(frozen=True)
class InvariantMetric:
    """base + fiber-length profile + curvature density, all radial."""

    base: Base
    ell: RadialField
    F: RadialField

    def __post_init__(self) -> None:
        probe = self._probe_grid()
        ell_vals = np.asarray(self.ell.value(probe), dtype=float)
        if np.any(ell_vals <= 0.0):
            raise ValueError("fiber length must be strictly positive on the base")
        if isinstance(self.base, ConeSurfaceProfile):
            # invariant data must be smooth across the poles: the radial
            # derivative must vanish there, so the slope within h of a pole
            # should be a small fraction of the field's interior slope scale
            h = 1e-4 * self.base.length
            for field, name in ((self.ell, "ell"), (self.F, "F")):
                interior = np.max(np.abs(np.asarray(field.d1(probe), dtype=float)))
                if interior <= 1e-12:
                    continue
                pole_slope = max(
                    abs(float(field.d1(h))), abs(float(field.d1(self.base.length - h)))
                )
                if pole_slope > 0.05 * interior:
                    warnings.warn(
                        f"{name}' does not vanish at a cone pole "
                        f"(|{name}'| ~ {pole_slope:.2e}); data may not be smooth "
                        "on the orbifold",
                        stacklevel=2,
                    )

    def _probe_grid(self) -> np.ndarray:
        if isinstance(self.base, FlatTorusBase):
            return np.linspace(0.0, self.base.length, 257)
        L = self.base.length
        return np.linspace(1e-6 * L, L * (1.0 - 1e-6), 257)


@dataclass(frozen=True)
class NormReport:
    omega_L1: float
    omega_L2_sq: float
    omega_L3_sq: float
    scal_L32: float
    chern_number: float


def _laplacian_of(field: RadialField, base: Base, s):
    """Nonnegative radial Laplacian: -(phi f')'/phi, or -f'' on the flat torus."""
    s = np.asarray(s, dtype=float)
    if isinstance(base, FlatTorusBase):
        return -field.d2(s)
    return -(base.phi_d1(s) / base.phi(s)) * field.d1(s) - field.d2(s)


def scalar_curvature_total(metric: InvariantMetric, s):
    """Total-space scalar curvature at base point s.

    2 K - (ell^2 / 2) F^2 + 2 Delta(ell)/ell, with the nonnegative Laplacian
    and |Omega|^2 = 2 F^2.
    """
    base = metric.base
    s_arr = np.asarray(s, dtype=float)
    if isinstance(base, ConeSurfaceProfile):
        if np.any(s_arr <= 0.0) or np.any(s_arr >= base.length):
            from .errors import DomainError

            raise DomainError("scalar curvature is evaluated on the open interval (0, L)")
        K = -base.phi_d2(s) / base.phi(s)
    else:
        K = np.zeros_like(s_arr)
    ell = metric.ell.value(s)
    F = metric.F.value(s)
    return 2.0 * K - 0.5 * ell**2 * F**2 + 2.0 * _laplacian_of(metric.ell, base, s) / ell


def _scalar_curvature_log_form(metric: InvariantMetric, s):
    """Alternate form with 2 Delta(log ell) - 2 |d ell|^2 / ell^2.

    Must agree pointwise with `scalar_curvature_total`; the agreement pins the
    Laplacian sign convention and is asserted in the test suite.
    """
    base = metric.base
    ell = metric.ell.value(s)
    dell = metric.ell.d1(s)
    F = metric.F.value(s)
    if isinstance(base, ConeSurfaceProfile):
        K = -base.phi_d2(s) / base.phi(s)
        lap_log = -(base.phi_d1(s) / base.phi(s)) * (dell / ell) - (
            metric.ell.d2(s) / ell - (dell / ell) ** 2
        )
    else:
        K = np.zeros_like(np.asarray(s, dtype=float))
        lap_log = -(metric.ell.d2(s) / ell - (dell / ell) ** 2)
    return 2.0 * K - 0.5 * ell**2 * F**2 - 2.0 * (dell / ell) ** 2 + 2.0 * lap_log


def omega_norms(metric: InvariantMetric, cfg: QuadratureConfig | None = None) -> NormReport:
    """L^p norms of the curvature form, the 3/2-norm of the base scalar
    curvature, and the measured Chern number (1/2pi) int F dv.

    The default tolerance is 2e-8 relative: |F| has kinks wherever F changes
    sign, and composite rules cannot refine across a kink to 1e-10.  For
    one-signed densities the |F| and F integrands coincide pointwise, so the
    triangle inequality between the L1 norm and the Chern number is exact.
    """
    if cfg is None:
        cfg = QuadratureConfig(abs_tol=1e-9, rel_tol=2e-8, max_refinements=7)
    base = metric.base
    F = metric.F.value
    sqrt2 = math.sqrt(2.0)

    l1 = integrate_over_base(base, lambda s: sqrt2 * np.abs(F(s)), cfg).value
    l2sq = integrate_over_base(base, lambda s: 2.0 * F(s) ** 2, cfg).value
    l3_int = integrate_over_base(base, lambda s: (sqrt2 * np.abs(F(s))) ** 3, cfg).value
    chern = integrate_over_base(base, F, cfg).value / (2.0 * math.pi)

    if isinstance(base, FlatTorusBase):
        scal32 = 0.0
    else:
        scal_int = integrate_over_base(
            base,
            lambda s: np.abs(2.0 * (-base.phi_d2(s) / base.phi(s))) ** 1.5,
            cfg,
            endpoint_mode="epsilon_cutoff",
        ).value
        scal32 = scal_int ** (2.0 / 3.0)

    _warn_on_fractional_chern(base, chern)
    return NormReport(
        omega_L1=l1,
        omega_L2_sq=l2sq,
        omega_L3_sq=l3_int ** (2.0 / 3.0),
        scal_L32=scal32,
        chern_number=chern,
    )


def _warn_on_fractional_chern(base: Base, chern: float) -> None:
    # quantization is not enforced, only flagged: m1 m2 c1 should be an integer
    if isinstance(base, ConeSurfaceProfile):
        m_product = base.m_start * base.m_end
    else:
        m_product = 1
    scaled = m_product * chern
    if abs(scaled - round(scaled)) > 1e-3:
        warnings.warn(
            f"curvature density has non-integral Chern data: {m_product} * {chern:.6f} "
            "is not close to an integer",
            stacklevel=3,
        )


def volume_total(metric: InvariantMetric, cfg: QuadratureConfig | None = None) -> float:
    """Total volume of the 3-manifold: every fiber has length 2 pi ell."""
    return 2.0 * math.pi * integrate_over_base(metric.base, metric.ell.value, cfg).value


def scale_metric(metric: InvariantMetric, c: float) -> InvariantMetric:
    """Scale base and fiber coherently: g -> c^2 g, ell -> c ell, F -> F / c^2.

    The curvature 2-form is unchanged, so the Chern number is too, and the
    total scalar curvature scales by c^-2.
    """
    if c <= 0:
        raise ValueError("scale factor must be positive")
    new_base = scale_base(metric.base, c)
    old_ell, old_F = metric.ell, metric.F
    new_ell = RadialField(
        value=lambda s: c * old_ell.value(np.asarray(s) / c),
        d1=lambda s: old_ell.d1(np.asarray(s) / c),
        d2=lambda s: old_ell.d2(np.asarray(s) / c) / c,
        constant=None if old_ell.constant is None else c * old_ell.constant,
    )
    new_F = RadialField(
        value=lambda s: old_F.value(np.asarray(s) / c) / c**2,
        d1=lambda s: old_F.d1(np.asarray(s) / c) / c**3,
        d2=lambda s: old_F.d2(np.asarray(s) / c) / c**4,
        constant=None if old_F.constant is None else old_F.constant / c**2,
    )
    return InvariantMetric(base=new_base, ell=new_ell, F=new_F)
