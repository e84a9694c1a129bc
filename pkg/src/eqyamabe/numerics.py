"""Quadrature, derivative checking, scalar minimization and linear solves.

Everything here is deterministic: panel subdivision order is fixed and no
reduction is reordered, so repeated calls with the same inputs produce
bit-identical results.  Integrands must be vectorized (accept and return
numpy arrays).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import (
    DomainError,
    InvalidBracket,
    NoConvergence,
    NonFinite,
    LimitNotConverged,
    SingularMatrix,
)

__all__ = [
    "QuadratureConfig",
    "IntegralResult",
    "integrate",
    "check_derivative",
    "minimize_scalar",
    "solve_tridiagonal",
    "richardson_table",
    "limit_at_zero",
]

# Richardson ladder used by the epsilon-cutoff mode: cutoffs epsilon/10^k.
_RICHARDSON_RATIO = 10.0
_RICHARDSON_LEVELS = 3

_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class QuadratureConfig:
    """Composite Gauss-Legendre settings.

    endpoint_mode:
      "plain"          nodes may come arbitrarily close to a and b;
      "substitution"   map x = a + (b-a) sin^2(pi t / 2), which removes
                       inverse-square-root endpoint singularities;
      "epsilon_cutoff" integrate over [a+eps, b-eps] for a ladder of eps
                       values and Richardson-extrapolate to eps = 0.  This is
                       the default: the assembled geometric integrands are
                       bounded but cannot be evaluated at the endpoints.
    """

    panels: int = 32
    points_per_panel: int = 16
    endpoint_mode: str = "epsilon_cutoff"
    epsilon: float = 1e-3
    max_refinements: int = 6
    abs_tol: float = 1e-12
    rel_tol: float = 1e-10

    def __post_init__(self) -> None:
        if self.panels < 1:
            raise ValueError("panels must be a positive integer")
        if self.points_per_panel < 2:
            raise ValueError("points_per_panel must be >= 2")
        if self.endpoint_mode not in ("plain", "substitution", "epsilon_cutoff"):
            raise ValueError(f"unknown endpoint_mode {self.endpoint_mode!r}")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.max_refinements < 0:
            raise ValueError("max_refinements must be >= 0")
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class IntegralResult:
    value: float
    error_estimate: float
    refinements_used: int


@lru_cache(maxsize=64)
def _gauss_rule(k: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(k)
    return x, w


def _panel_sum(f: Callable, a: float, b: float, panels: int, k: int) -> float:
    x, w = _gauss_rule(k)
    edges = np.linspace(a, b, panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    vals = np.asarray(f(nodes), dtype=float)
    if not np.all(np.isfinite(vals)):
        bad = nodes[~np.isfinite(vals)][:3]
        raise NonFinite(f"integrand returned non-finite values near x={bad}")
    return float(np.dot(vals, (half[:, None] * w[None, :]).ravel()))


def _refine(f: Callable, a: float, b: float, cfg: QuadratureConfig) -> tuple[float, float, int]:
    """Double the panel count until successive values agree to tolerance."""
    panels = cfg.panels
    prev = _panel_sum(f, a, b, panels, cfg.points_per_panel)
    best_err = np.inf
    for r in range(1, cfg.max_refinements + 1):
        panels *= 2
        cur = _panel_sum(f, a, b, panels, cfg.points_per_panel)
        best_err = abs(cur - prev)
        if best_err <= max(cfg.abs_tol, cfg.rel_tol * abs(cur)):
            return cur, best_err, r
        prev = cur
    if cfg.max_refinements == 0:
        # single rule, no comparison available: report the rule value with a
        # zero a-posteriori estimate (caller opted out of refinement)
        return prev, 0.0, 0
    raise NoConvergence(
        f"quadrature did not reach tolerance after {cfg.max_refinements} refinements "
        f"(last error estimate {best_err:.3e})"
    )


def richardson_table(values: Sequence[float], ratio: float) -> list[list[float]]:
    """Neville extrapolation table for h-ladders h0, h0/ratio, h0/ratio^2, ..."""
    table = [list(values)]
    for j in range(1, len(values)):
        prev = table[j - 1]
        table.append(
            [prev[k + 1] + (prev[k + 1] - prev[k]) / (ratio**j - 1.0) for k in range(len(prev) - 1)]
        )
    return table


def integrate(f: Callable, a: float, b: float, cfg: QuadratureConfig | None = None) -> IntegralResult:
    """Integrate f over [a, b] with the configured endpoint handling.

    The returned error_estimate is the a-posteriori difference of the last
    two refinement (or extrapolation) stages.
    """
    if cfg is None:
        cfg = QuadratureConfig()
    if not (a < b):
        raise ValueError(f"need a < b, got [{a}, {b}]")

    if cfg.endpoint_mode == "plain":
        value, err, refs = _refine(f, a, b, cfg)
        return IntegralResult(value, err, refs)

    if cfg.endpoint_mode == "substitution":
        span = b - a

        def g(t: np.ndarray) -> np.ndarray:
            x = a + span * np.sin(0.5 * np.pi * t) ** 2
            return np.asarray(f(x)) * span * 0.5 * np.pi * np.sin(np.pi * t)

        value, err, refs = _refine(g, 0.0, 1.0, cfg)
        return IntegralResult(value, err, refs)

    # epsilon_cutoff
    if cfg.epsilon >= 0.5 * (b - a):
        raise ValueError("epsilon must be smaller than half the interval length")
    vals = []
    inner_err = 0.0
    refs = 0
    eps = cfg.epsilon
    for _ in range(_RICHARDSON_LEVELS):
        v, e, r = _refine(f, a + eps, b - eps, cfg)
        vals.append(v)
        inner_err = max(inner_err, e)
        refs = max(refs, r)
        eps /= _RICHARDSON_RATIO
    table = richardson_table(vals, _RICHARDSON_RATIO)
    value = table[-1][0]
    err = abs(value - table[-2][0]) + inner_err
    return IntegralResult(value, err, refs)


def check_derivative(
    f: Callable, df: Callable, t: float, h_sequence: Sequence[float]
) -> float:
    """Max over h of |central difference - df(t)| / max(1, |df(t)|).

    Used as the oracle for every hand-coded analytic derivative in the
    geometric modules.
    """
    try:
        target = float(df(t))
    except Exception as exc:  # noqa: BLE001 - domain failures become DomainError
        raise DomainError(f"df not evaluable at t={t}: {exc}") from exc
    worst = 0.0
    for h in h_sequence:
        if h <= 0:
            raise ValueError("finite-difference steps must be positive")
        try:
            hi = float(f(t + h))
            lo = float(f(t - h))
        except Exception as exc:  # noqa: BLE001
            raise DomainError(f"f not evaluable at t={t}+-{h}: {exc}") from exc
        if not (np.isfinite(hi) and np.isfinite(lo) and np.isfinite(target)):
            raise DomainError(f"non-finite evaluation at t={t}, h={h}")
        disc = abs((hi - lo) / (2.0 * h) - target) / max(1.0, abs(target))
        worst = max(worst, disc)
    return worst


def minimize_scalar(
    f: Callable[[float], float], bracket: Sequence[float], tol: float = 1e-10
) -> tuple[float, float]:
    """Golden-section search with a final parabolic polish.

    Returns (argmin, value).  Boundary minimizers are reported at the
    boundary itself: the endpoints compete with the interior candidate.
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if not lo < hi:
        raise InvalidBracket(f"need lo < hi, got [{lo}, {hi}]")
    if tol <= 0:
        raise ValueError("tol must be positive")

    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    x = c if fc < fd else d
    fx = min(fc, fd)

    # one guarded parabolic step through (a, x, b)
    fa, fb = f(a), f(b)
    denom = (x - a) * (fx - fb) - (x - b) * (fx - fa)
    if denom != 0.0:
        xp = x - 0.5 * ((x - a) ** 2 * (fx - fb) - (x - b) ** 2 * (fx - fa)) / denom
        if lo < xp < hi:
            fxp = f(xp)
            if fxp < fx:
                x, fx = xp, fxp

    # boundary minimizers win if strictly better
    flo, fhi = f(lo), f(hi)
    if flo <= fx and flo <= fhi:
        return lo, flo
    if fhi < fx:
        return hi, fhi
    return x, fx


def solve_tridiagonal(
    lower: Sequence[float],
    diag: Sequence[float],
    upper: Sequence[float],
    rhs: Sequence[float],
) -> np.ndarray:
    """Thomas elimination.  lower/upper have length n-1, diag/rhs length n."""
    d = np.asarray(diag, dtype=float).copy()
    lo = np.asarray(lower, dtype=float)
    up = np.asarray(upper, dtype=float)
    y = np.asarray(rhs, dtype=float).copy()
    n = d.size
    if lo.size != n - 1 or up.size != n - 1 or y.size != n:
        raise ValueError("inconsistent band lengths")
    scale = max(np.max(np.abs(d)), np.max(np.abs(lo), initial=0.0), np.max(np.abs(up), initial=0.0))
    tiny = 1e-300 + 1e-14 * scale
    for i in range(1, n):
        if abs(d[i - 1]) < tiny:
            raise SingularMatrix(f"pivot underflow at row {i - 1}")
        m = lo[i - 1] / d[i - 1]
        d[i] -= m * up[i - 1]
        y[i] -= m * y[i - 1]
    if abs(d[-1]) < tiny:
        raise SingularMatrix("pivot underflow at last row")
    x = np.empty(n)
    x[-1] = y[-1] / d[-1]
    for i in range(n - 2, -1, -1):
        x[i] = (y[i] - up[i] * x[i + 1]) / d[i]
    return x


def limit_at_zero(
    g: Callable[[float], float],
    h0: float = 1e-3,
    ratio: float = _RICHARDSON_RATIO,
    levels: int = 4,
    rel_tol: float = 1e-9,
) -> tuple[float, float]:
    """Extrapolate lim_{h->0+} g(h) from a geometric ladder of h values.

    Raises LimitNotConverged when the last two extrapolants disagree by more
    than rel_tol relative to the result's scale.
    """
    vals = [float(g(h0 / ratio**k)) for k in range(levels)]
    if not all(np.isfinite(v) for v in vals):
        raise LimitNotConverged("non-finite samples in limit ladder")
    table = richardson_table(vals, ratio)
    value = table[-1][0]
    err = abs(value - table[-2][0])
    if err > rel_tol * max(1.0, abs(value)):
        raise LimitNotConverged(
            f"extrapolants disagree: {value} vs {table[-2][0]} (err {err:.3e})"
        )
    return value, err
