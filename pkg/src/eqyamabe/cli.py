"""Command-line surface.

Subcommands:
    invariants   Chern number and Euler characteristic of a weighted pair
    bound        topological upper bounds (pair, explicit chi/c1, or orbit count)
    functional   functional value of a model, or a fiber-length scan
    scan         fiber-length scan with regime flags and fitted exponent
    minimize     conformal minimization (upper bound on the invariant infimum)
    laplace      uniformize the model's base to positive curvature

Exit codes: 0 ok, 2 usage or parse error, 3 numerical failure,
4 regime mismatch between the request and the model's topology.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import __version__
from .bundle import omega_norms
from .conformal import MinimizerConfig, minimize_conformal, uniformize_positive
from .errors import (
    CaseMismatchError,
    EqYamabeError,
    NumericalError,
    UsageError,
)
from .invariants import build_invariant_report, chi_boundary, chi_closed, chi_quadrature
from .invariants import c1_closed, c1_quadrature
from .modelio import (
    TOOL_NAME,
    TOOL_VERSION,
    build_metric,
    build_quadrature,
    canonical_json,
    parse_model_file,
    table_to_csv,
)
from .orbifold import area, chi_orb
from .scaling import (
    REGIME_DIVERGES,
    REGIME_INTERIOR_MAX,
    REGIME_SUP_ZERO,
    ell_scan,
)
from .yamabe import (
    BoundReport,
    bound_cauchy_schwarz,
    bound_theorem_main,
    bound_weighted_hopf,
    functional_J,
    hebey_vaugon_bound,
    optimal_ell,
)

_REGIME_NOTE = {
    REGIME_INTERIOR_MAX: "interior maximum in the fiber length",
    REGIME_DIVERGES: "functional unbounded as the fiber grows",
    REGIME_SUP_ZERO: "supremum 0, not attained (collapse)",
}


def _quantity(value, error=None, route=None, exact=False):
    q = {"value": float(value)}
    if exact:
        q["exact"] = True
    else:
        q["error_estimate"] = float(error if error is not None else 0.0)
    if route is not None:
        q["route"] = route
    return q


def _emit(args, report: dict, csv_text: str | None = None) -> None:
    payload = canonical_json(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(csv_text if (csv_text is not None and args.csv) else payload)
    else:
        sys.stdout.write(csv_text if (csv_text is not None and args.csv) else payload)


def _base_report(args, command: str) -> dict:
    return {
        "tool": {"name": TOOL_NAME, "version": TOOL_VERSION},
        "command": command,
        "seed": args.seed,
    }


def _parse_ell_arg(text: str) -> tuple[str, object]:
    if text.startswith("scan:"):
        parts = text.split(":")
        if len(parts) != 4:
            raise UsageError("--ell scan syntax is scan:lo:hi:n")
        try:
            lo, hi, n = float(parts[1]), float(parts[2]), int(parts[3])
        except ValueError as exc:
            raise UsageError(f"--ell scan: {exc}") from exc
        if lo <= 0 or hi <= lo or n < 2:
            raise UsageError("--ell scan needs 0 < lo < hi and n >= 2")
        return "scan", np.geomspace(lo, hi, n)
    try:
        value = float(text)
    except ValueError as exc:
        raise UsageError(f"--ell: expected a number or scan:lo:hi:n, got {text!r}") from exc
    if value <= 0:
        raise UsageError("--ell must be positive")
    return "value", value


def _tolerance_cfg(args):
    """Quadrature override built from --tol (tighter or looser refinement)."""
    if args.tol is None:
        return None
    from .numerics import QuadratureConfig

    # epsilon matches the invariants default: the cutoff ladder must start
    # well inside the boundary layers of lopsided weight pairs
    return QuadratureConfig(rel_tol=args.tol, abs_tol=args.tol * 1e-2, epsilon=1e-5)


def cmd_invariants(args) -> int:
    report = _base_report(args, "invariants")
    report["m1"] = args.m1
    report["m2"] = args.m2
    cfg = _tolerance_cfg(args)
    quantities: dict = {}
    if args.method in ("closed", "all"):
        quantities["c1_closed"] = _quantity(float(c1_closed(args.m1, args.m2)), exact=True)
        quantities["chi_closed"] = _quantity(float(chi_closed(args.m1, args.m2)), exact=True)
    if args.method in ("quadrature", "all"):
        c1q = c1_quadrature(args.m1, args.m2, cfg)
        chiq = chi_quadrature(args.m1, args.m2, cfg)
        quantities["c1_quadrature"] = _quantity(c1q.value, c1q.error_estimate, "quadrature")
        quantities["chi_quadrature"] = _quantity(chiq.value, chiq.error_estimate, "quadrature")
    if args.method in ("boundary", "all"):
        quantities["chi_boundary"] = _quantity(
            chi_boundary(args.m1, args.m2), 0.0, "boundary_limits"
        )
    if args.method == "all":
        rep = build_invariant_report(args.m1, args.m2)
        quantities["deltas"] = {k: _quantity(v, exact=True) for k, v in rep.deltas().items()}
    report["quantities"] = quantities
    _emit(args, report)
    return 0


def _serialize_bound(b: BoundReport, error: float | None = None) -> dict:
    entry = {"kind": b.kind}
    entry.update(_quantity(b.value, error=error, exact=error is None))
    entry["inputs"] = b.inputs
    return entry


def cmd_bound(args) -> int:
    report = _base_report(args, "bound")
    bounds: list[dict] = []
    if args.hebey_vaugon:
        if args.k == "inf":
            k = math.inf
        else:
            try:
                k = int(args.k)
            except ValueError as exc:
                raise UsageError(f"--k: expected an integer or 'inf', got {args.k!r}") from exc
        try:
            value = hebey_vaugon_bound(args.n, k)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        k_echo = "inf" if k == math.inf else int(k)
        bounds.append(
            _serialize_bound(BoundReport("orbit_count", value, {"n": args.n, "k": k_echo}))
        )
    elif args.model:
        spec = parse_model_file(args.model)
        metric = build_metric(spec)
        base = metric.base
        chi = chi_orb(base)
        norms = omega_norms(metric)
        report["model"] = spec.raw
        report["inputs"] = {
            "chi": _quantity(chi, exact=True),
            "c1_measured": _quantity(norms.chern_number, 0.0, "quadrature"),
        }
        bounds, regime = _bounds_for(chi, norms.chern_number, base, metric.F)
        report["regime"] = regime
    elif args.chi is not None or args.c1 is not None:
        if args.chi is None or args.c1 is None:
            raise UsageError("--chi and --c1 must be given together")
        bounds.append(
            _serialize_bound(
                BoundReport(
                    "topological",
                    bound_theorem_main(args.chi, args.c1),
                    {"chi": args.chi, "c1": args.c1},
                )
            )
        )
        report["regime"] = _REGIME_NOTE[REGIME_INTERIOR_MAX]
    else:
        if args.m1 is None or args.m2 is None:
            raise UsageError("provide --m1/--m2, --chi/--c1, --model, or --hebey-vaugon")
        chi = float(chi_closed(args.m1, args.m2))
        c1 = float(c1_closed(args.m1, args.m2))
        pair = {"m1": args.m1, "m2": args.m2, "chi": chi, "c1": c1}
        bounds = [
            _serialize_bound(
                BoundReport("weighted_pair", bound_weighted_hopf(args.m1, args.m2), pair)
            ),
            _serialize_bound(BoundReport("topological", bound_theorem_main(chi, c1), pair)),
            _serialize_bound(BoundReport("orbit_count", hebey_vaugon_bound(3, 1), {"n": 3, "k": 1})),
        ]
        report["regime"] = _REGIME_NOTE[REGIME_INTERIOR_MAX]
    report["bounds"] = bounds
    _emit(args, report)
    return 0


def _bounds_for(chi: float, c1: float, base, F) -> tuple[list[dict], str]:
    # these values come from measured norms: carry the norm-quadrature
    # tolerance as a conservative relative error estimate
    measured_inputs = {"chi": chi, "c1_measured": c1}
    if chi > 0 and abs(c1) > 1e-12:
        ell_star, j_max = optimal_ell(base, F)
        cs = bound_cauchy_schwarz(base, F)
        top = bound_theorem_main(chi, c1)
        bounds = [
            _serialize_bound(
                BoundReport(
                    "optimal_fiber_length", j_max, dict(measured_inputs, ell_star=ell_star)
                ),
                error=abs(j_max) * 5e-8,
            ),
            _serialize_bound(
                BoundReport("cauchy_schwarz", cs, measured_inputs), error=abs(cs) * 5e-8
            ),
            _serialize_bound(
                BoundReport("topological", top, measured_inputs), error=abs(top) * 5e-8
            ),
        ]
        return bounds, _REGIME_NOTE[REGIME_INTERIOR_MAX]
    if chi > 0:
        return [], _REGIME_NOTE[REGIME_DIVERGES]
    return [], _REGIME_NOTE[REGIME_SUP_ZERO]


def cmd_functional(args) -> int:
    spec = parse_model_file(args.model)
    cfg = build_quadrature(spec.quadrature) or _tolerance_cfg(args)
    metric = build_metric(spec)
    report = _base_report(args, "functional")
    report["model"] = spec.raw
    csv_text = None
    if args.ell is not None:
        kind, parsed = _parse_ell_arg(args.ell)
    else:
        kind = None
    if kind == "scan":
        table = ell_scan(metric.base, metric.F, parsed, cfg)
        report["regime"] = table.regime
        cols = {"ell": table.ell.tolist(), "J": table.J.tolist(), "flag": table.flags}
        if table.lower is not None:
            cols["lower_bound"] = table.lower.tolist()
        report["tables"] = cols
        if table.exponent is not None:
            report["fit"] = {
                "exponent": _quantity(table.exponent, 0.0, "log_log_fit"),
                "coefficient": _quantity(table.coefficient, 0.0, "log_log_fit"),
            }
        csv_text = table_to_csv(cols)
    else:
        if kind == "value":
            from .bundle import RadialField

            metric = type(metric)(base=metric.base, ell=RadialField.const(parsed), F=metric.F)
        rep = functional_J(metric, cfg)
        report["quantities"] = {
            "J": _quantity(rep.J, rep.error_estimate, rep.route),
            "numerator": _quantity(rep.numerator, rep.error_estimate, rep.route),
            "denominator": _quantity(rep.denominator, 0.0, rep.route),
        }
    _emit(args, report, csv_text)
    return 0


def cmd_scan(args) -> int:
    if args.ell is None:
        raise UsageError("scan requires --ell scan:lo:hi:n")
    return cmd_functional(args)


def cmd_minimize(args) -> int:
    spec = parse_model_file(args.model)
    metric = build_metric(spec)
    cfg = MinimizerConfig() if args.tol is None else MinimizerConfig(decrease_tol=args.tol)
    result = minimize_conformal(metric, cfg)
    report = _base_report(args, "minimize")
    report["model"] = spec.raw
    report["quantities"] = {
        "mu_upper": _quantity(result.mu_upper, 0.0, "projected_gradient"),
        "iterations": _quantity(float(len(result.trace)), exact=True),
        "converged": result.converged,
        "trace_monotone": bool(np.all(np.diff(result.trace) <= 1e-12)),
    }
    report["tables"] = {"trace": result.trace.tolist()}
    _emit(args, report, table_to_csv({"iteration": list(range(len(result.trace))),
                                      "J": result.trace.tolist()}))
    return 0


def cmd_laplace(args) -> int:
    spec = parse_model_file(args.model)
    metric = build_metric(spec)
    u, min_scal = uniformize_positive(metric.base)
    chi = chi_orb(metric.base)
    vol = area(metric.base)
    target = 4.0 * math.pi * chi / vol
    report = _base_report(args, "laplace")
    report["model"] = spec.raw
    report["quantities"] = {
        "min_scal": _quantity(min_scal, 0.0, "double_quadrature"),
        "uniformized_constant": _quantity(target, 0.0, "closed_form"),
        "positive": bool(min_scal > 0.0),
        "u_range": {
            "min": _quantity(float(np.min(u.values)), exact=True),
            "max": _quantity(float(np.max(u.values)), exact=True),
        },
    }
    _emit(args, report)
    return 0


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="write the report (or CSV with --csv) to this path")
    p.add_argument("--csv", action="store_true", help="emit tables as CSV instead of JSON")
    p.add_argument("--seed", type=int, default=0, help="seed echoed into the report")
    p.add_argument("--tol", type=float, default=None, help="override the stopping tolerance")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=TOOL_NAME,
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"{TOOL_NAME} {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_inv = sub.add_parser("invariants", help="Chern number and Euler characteristic")
    p_inv.add_argument("--m1", type=int, required=True)
    p_inv.add_argument("--m2", type=int, required=True)
    p_inv.add_argument(
        "--method", choices=["quadrature", "closed", "boundary", "all"], default="all"
    )
    _add_common(p_inv)
    p_inv.set_defaults(func=cmd_invariants)

    p_bound = sub.add_parser("bound", help="topological upper bounds")
    p_bound.add_argument("--m1", type=int)
    p_bound.add_argument("--m2", type=int)
    p_bound.add_argument("--chi", type=float)
    p_bound.add_argument("--c1", type=float)
    p_bound.add_argument("--model", help="model file; uses measured chi and c1")
    p_bound.add_argument("--hebey-vaugon", action="store_true", dest="hebey_vaugon")
    p_bound.add_argument("--n", type=int, default=3, help="dimension for --hebey-vaugon")
    p_bound.add_argument("--k", default="1", help="orbit cardinality (integer or 'inf')")
    _add_common(p_bound)
    p_bound.set_defaults(func=cmd_bound)

    for name, fn, help_text in (
        ("functional", cmd_functional, "functional value or fiber-length scan"),
        ("scan", cmd_scan, "fiber-length scan with regime flags"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--model", required=True)
        p.add_argument("--ell", help="fiber length VALUE or scan:lo:hi:n")
        _add_common(p)
        p.set_defaults(func=fn)

    p_min = sub.add_parser("minimize", help="conformal minimization (upper bound)")
    p_min.add_argument("--model", required=True)
    _add_common(p_min)
    p_min.set_defaults(func=cmd_minimize)

    p_lap = sub.add_parser("laplace", help="uniformize the base to positive curvature")
    p_lap.add_argument("--model", required=True)
    _add_common(p_lap)
    p_lap.set_defaults(func=cmd_laplace)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors, 0 on --help/--version
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CaseMismatchError as exc:
        print(f"case mismatch: {exc}", file=sys.stderr)
        return 4
    except (NumericalError, EqYamabeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
