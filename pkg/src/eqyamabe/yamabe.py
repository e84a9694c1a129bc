"""Einstein-Hilbert functional on circle bundles and the topological bounds.

For an invariant metric with fiber-length profile ell over a base surface,
the functional is evaluated two ways: by the base integral

    J = 2 pi int (Scal_base - (ell^2/4) |Omega|^2) ell dv / (2 pi int ell dv)^{1/3}

(here the fiber-gradient terms have integrated out exactly), and directly as
total scalar curvature over volume^{1/3}.  Disagreement between the routes
signals a curvature or Laplacian bug and raises.

For constant ell everything collapses to a closed form in the area, the
orbifold Euler characteristic and the squared L2 norm of the curvature form;
maximizing that closed form over ell gives the topological upper bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .bundle import (
    FieldLike,
    InvariantMetric,
    NormReport,
    RadialField,
    as_radial_field,
    omega_norms,
    scalar_curvature_total,
)
from .errors import (
    InconsistentRoutes,
    InvalidCase,
    NonpositiveChi,
    NonPositiveFactor,
    NotCoprime,
    UnboundedInEll,
)
from .numerics import QuadratureConfig, minimize_scalar
from .orbifold import (
    Base,
    ConeSurfaceProfile,
    area,
    chi_orb,
    integrate_over_base,
    make_round_sphere,
    wps_profile,
)

__all__ = [
    "YamabeReport",
    "BoundReport",
    "sphere_volume",
    "sigma_sn",
    "SIGMA_S3",
    "functional_J",
    "functional_J_closed",
    "conformal_functional",
    "optimal_ell",
    "wps_curvature_density",
    "wps_metric",
    "hopf_metric",
    "bound_cauchy_schwarz",
    "bound_theorem_main",
    "bound_weighted_hopf",
    "hebey_vaugon_bound",
]

_OMEGA_ZERO_TOL = 1e-12


def sphere_volume(n: int) -> float:
    """Volume of the unit n-sphere: 2 pi^{(n+1)/2} / Gamma((n+1)/2)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return 2.0 * math.pi ** ((n + 1) / 2.0) / math.gamma((n + 1) / 2.0)


def sigma_sn(n: int) -> float:
    """Best-constant value n (n-1) vol(S^n)^{2/n} of the round n-sphere."""
    if n < 2:
        raise ValueError("n must be >= 2")
    return n * (n - 1) * sphere_volume(n) ** (2.0 / n)


#: 3 * 2^{5/3} * pi^{4/3}, the round 3-sphere value; every bound is a multiple of it.
SIGMA_S3 = sigma_sn(3)


@dataclass(frozen=True)
class YamabeReport:
    J: float
    numerator: float
    denominator: float
    route: str  # "base_integral" or "closed_form"
    error_estimate: float


@dataclass(frozen=True)
class BoundReport:
    """One evaluated bound: which rule produced it, its value, and the
    inputs it was computed from (rational topology or measured norms)."""

    kind: str  # topological | weighted_pair | cauchy_schwarz | orbit_count | optimal_fiber_length
    value: float
    inputs: dict

    def __post_init__(self) -> None:
        if not math.isfinite(self.value) and self.kind != "orbit_count":
            raise ValueError(f"bound value must be finite, got {self.value}")


def functional_J(metric: InvariantMetric, cfg: QuadratureConfig | None = None) -> YamabeReport:
    """Evaluate the functional by the base-integral route, cross-checked
    against the direct total-scalar-curvature route."""
    base = metric.base
    ell = metric.ell.value
    F = metric.F.value

    def integrand_base(s):
        if isinstance(base, ConeSurfaceProfile):
            K = -base.phi_d2(s) / base.phi(s)
        else:
            K = np.zeros_like(np.asarray(s, dtype=float))
        return (2.0 * K - 0.5 * ell(s) ** 2 * F(s) ** 2) * ell(s)

    mode = "epsilon_cutoff" if isinstance(base, ConeSurfaceProfile) else "plain"
    num = integrate_over_base(base, integrand_base, cfg, endpoint_mode=mode)
    vol_base = integrate_over_base(base, ell, cfg)
    numerator = 2.0 * math.pi * num.value
    volume = 2.0 * math.pi * vol_base.value
    denominator = volume ** (1.0 / 3.0)
    J = numerator / denominator

    direct = integrate_over_base(
        base, lambda s: scalar_curvature_total(metric, s) * ell(s), cfg, endpoint_mode=mode
    )
    J_direct = 2.0 * math.pi * direct.value / denominator
    tol = 1e-8 * max(abs(J), abs(J_direct), 1e-6)
    if abs(J - J_direct) > tol:
        raise InconsistentRoutes(
            f"base-integral and direct routes disagree: {J} vs {J_direct}"
        )

    err = 2.0 * math.pi * num.error_estimate / denominator + abs(J) * vol_base.error_estimate / (
        3.0 * max(vol_base.value, 1e-300)
    )
    return YamabeReport(J=J, numerator=numerator, denominator=denominator,
                        route="base_integral", error_estimate=err)


def functional_J_closed(
    base: Base, F: FieldLike, ell_const: float, cfg: QuadratureConfig | None = None,
    norms: NormReport | None = None,
) -> float:
    """Closed form for constant fiber length:

        (pi^2 / (16 vol))^{1/3} (16 pi chi ell^{2/3} - |Omega|_2^2 ell^{8/3})
    """
    if ell_const <= 0:
        raise ValueError("fiber length must be positive")
    chi = chi_orb(base)
    vol = area(base, cfg)
    if norms is None:
        norms = omega_norms(_as_metric(base, F, ell_const), cfg)
    return (math.pi**2 / (16.0 * vol)) ** (1.0 / 3.0) * (
        16.0 * math.pi * chi * ell_const ** (2.0 / 3.0)
        - norms.omega_L2_sq * ell_const ** (8.0 / 3.0)
    )


def _as_metric(base: Base, F: FieldLike, ell_const: float) -> InvariantMetric:
    return InvariantMetric(base=base, ell=RadialField.const(ell_const), F=as_radial_field(F))


def conformal_functional(
    metric: InvariantMetric, u: FieldLike, cfg: QuadratureConfig | None = None
) -> float:
    """Functional at the conformal factor u (fourth-power convention, n = 3):

        int 2 pi ell (8 |du|^2 + Scal u^2) dv / (int 2 pi ell u^6 dv)^{1/3}

    Invariant under u -> c u; requires u > 0.
    """
    uf = as_radial_field(u)
    base = metric.base
    ell = metric.ell.value

    probe = np.linspace(0.0, base.length, 513)[1:-1]
    if np.any(np.asarray(uf.value(probe)) <= 0.0):
        raise NonPositiveFactor("conformal factor must be strictly positive")

    mode = "epsilon_cutoff" if isinstance(base, ConeSurfaceProfile) else "plain"

    def num_integrand(s):
        return (
            2.0
            * math.pi
            * ell(s)
            * (8.0 * uf.d1(s) ** 2 + scalar_curvature_total(metric, s) * uf.value(s) ** 2)
        )

    def den_integrand(s):
        return 2.0 * math.pi * ell(s) * uf.value(s) ** 6

    num = integrate_over_base(base, num_integrand, cfg, endpoint_mode=mode).value
    den = integrate_over_base(base, den_integrand, cfg, endpoint_mode=mode).value
    return num / den ** (1.0 / 3.0)


def optimal_ell(
    base: Base, F: FieldLike, cfg: QuadratureConfig | None = None
) -> tuple[float, float]:
    """Maximizing constant fiber length and the maximal functional value.

        ell* = sqrt(4 pi chi) / |Omega|_2,
        J_max = 3 * 2^{4/3} pi^2 vol^{-1/3} chi^{4/3} |Omega|_2^{-2/3}

    Cross-checked against a numerical scan of the closed form; disagreement
    raises InconsistentRoutes.
    """
    chi = chi_orb(base)
    if chi <= 0:
        raise NonpositiveChi("no interior maximum in ell when chi <= 0")
    norms = omega_norms(_as_metric(base, F, 1.0), cfg)
    if norms.omega_L2_sq <= _OMEGA_ZERO_TOL:
        raise UnboundedInEll(
            "curvature form vanishes: the functional grows like ell^{2/3} without bound"
        )
    vol = area(base, cfg)
    ell_star = math.sqrt(4.0 * math.pi * chi) / math.sqrt(norms.omega_L2_sq)
    j_max = (
        3.0
        * 2.0 ** (4.0 / 3.0)
        * math.pi**2
        * vol ** (-1.0 / 3.0)
        * chi ** (4.0 / 3.0)
        * norms.omega_L2_sq ** (-1.0 / 3.0)
    )

    coef = (math.pi**2 / (16.0 * vol)) ** (1.0 / 3.0)

    def j_of_ell(l: float) -> float:
        return coef * (
            16.0 * math.pi * chi * l ** (2.0 / 3.0) - norms.omega_L2_sq * l ** (8.0 / 3.0)
        )

    ell_num, neg_j = minimize_scalar(
        lambda l: -j_of_ell(l),
        bracket=[ell_star / 8.0, ell_star * 8.0],
        tol=1e-9 * max(1.0, ell_star),
    )
    if abs(ell_num - ell_star) > 1e-6 * max(1.0, ell_star) or abs(-neg_j - j_max) > 1e-6 * max(
        1.0, abs(j_max)
    ):
        raise InconsistentRoutes(
            f"closed-form optimum (ell*={ell_star}, J={j_max}) disagrees with the "
            f"numerical scan (ell={ell_num}, J={-neg_j})"
        )
    return ell_star, j_max


def wps_curvature_density(m1: int, m2: int, t):
    """Unit-frame curvature density of the weighted Hopf connection:

        F(t) = 2 m1 m2 / ((m1^2 - m2^2) t + m2^2)^{3/2},

    normalized so that (1/2pi) int F dv over the quotient base is 1/(m1 m2).
    """
    if math.gcd(int(m1), int(m2)) != 1:
        raise NotCoprime(f"weights ({m1}, {m2}) are not coprime")
    t = np.asarray(t, dtype=float)
    P = (m1 * m1 - m2 * m2) * t + m2 * m2
    return 2.0 * m1 * m2 / P**1.5


def _wps_density_field(m1: int, m2: int) -> RadialField:
    # in arclength, P(sin^2 s) = m1^2 sin^2 s + m2^2 cos^2 s: stable at both poles
    a = float(m1 * m1 - m2 * m2)
    c = 2.0 * m1 * m2

    def P(s):
        return (m1 * np.sin(s)) ** 2 + (m2 * np.cos(s)) ** 2

    def val(s):
        s = np.asarray(s, dtype=float)
        return c * P(s) ** -1.5

    def d1(s):
        s = np.asarray(s, dtype=float)
        return -1.5 * c * P(s) ** -2.5 * a * np.sin(2.0 * s)

    def d2(s):
        s = np.asarray(s, dtype=float)
        return c * (
            3.75 * P(s) ** -3.5 * (a * np.sin(2.0 * s)) ** 2
            - 1.5 * P(s) ** -2.5 * 2.0 * a * np.cos(2.0 * s)
        )

    return RadialField(value=val, d1=d1, d2=d2)


def wps_metric(m1: int, m2: int, ell: float = 1.0, grid: int = 512) -> InvariantMetric:
    """Quotient base of the weighted circle action with its connection density."""
    base = wps_profile(m1, m2, grid=grid)
    return InvariantMetric(base=base, ell=RadialField.const(ell), F=_wps_density_field(m1, m2))


def hopf_metric(ell: float = 1.0) -> InvariantMetric:
    """Round 3-sphere data: half-radius round base, F = 2, constant fiber length."""
    return InvariantMetric(
        base=make_round_sphere(0.5), ell=RadialField.const(ell), F=RadialField.const(2.0)
    )


def bound_cauchy_schwarz(
    base: Base, F: FieldLike, cfg: QuadratureConfig | None = None
) -> float:
    """Upper bound 3 * 2^{4/3} pi^2 chi^{4/3} |Omega|_1^{-2/3} (volume-free)."""
    chi = chi_orb(base)
    if chi <= 0:
        raise NonpositiveChi("the bound requires chi > 0")
    norms = omega_norms(_as_metric(base, F, 1.0), cfg)
    if norms.omega_L1 <= _OMEGA_ZERO_TOL:
        raise UnboundedInEll("curvature form vanishes: no finite bound")
    return (
        3.0 * 2.0 ** (4.0 / 3.0) * math.pi**2 * chi ** (4.0 / 3.0) * norms.omega_L1 ** (-2.0 / 3.0)
    )


def bound_theorem_main(chi: float, c1: float) -> float:
    """Topological upper bound sigma(S^3) (chi / (2 sqrt(|c1|)))^{4/3}."""
    if chi <= 0:
        raise InvalidCase("the topological bound requires chi > 0")
    if c1 == 0:
        raise InvalidCase("the topological bound requires a nonzero Chern number")
    return SIGMA_S3 * (chi / (2.0 * math.sqrt(abs(c1)))) ** (4.0 / 3.0)


def bound_weighted_hopf(m1: int, m2: int) -> float:
    """sigma(S^3) ((m1 + m2) / (2 sqrt(m1 m2)))^{4/3} for the weighted actions."""
    if m1 < 1 or m2 < 1 or math.gcd(int(m1), int(m2)) != 1:
        raise NotCoprime(f"weights ({m1}, {m2}) must be coprime positive integers")
    return SIGMA_S3 * ((m1 + m2) / (2.0 * math.sqrt(m1 * m2))) ** (4.0 / 3.0)


def hebey_vaugon_bound(n: int, k: Union[int, float]) -> float:
    """sigma(S^n) k^{2/n} where k is the minimal orbit cardinality.

    k may be math.inf, in which case the bound is +inf (no constraint).
    """
    if n < 3:
        raise ValueError("the bound applies in dimension n >= 3")
    if k != math.inf:
        if k < 1 or int(k) != k:
            raise ValueError("orbit cardinality must be a positive integer or inf")
    if k == math.inf:
        return math.inf
    return sigma_sn(n) * float(k) ** (2.0 / n)
