"""Command-line front end: moment tables, Verblunsky coefficients, verification suites."""
from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys

from .algebra import Precision
from .classify import (
    Deg1,
    build_system,
    catalog_membership,
    imaginary_part_sup,
    roots_case,
    solve_system,
)
from .differences import (
    DifferenceEquation,
    EqId,
    difference_residual,
    equations_for,
    propagate,
)
from .errors import (
    DomainError,
    NumericalBreakdown,
    OpucError,
    QuadratureFailure,
    UnsolvableStep,
)
from .moments import MomentTable, compute_moments
from .mopuc import chain_residuals, szego_sequence, verblunsky_closed_form
from .relations import (
    Variant,
    family_identities,
    parts_identity_residual,
    relations_for,
    s_nn_first,
    s_nn_second,
    specialized_relation,
    structure_residual,
)
from .report import svg_disk_scatter, svg_polyline
from .weights import (
    Bessel,
    CircularJacobi,
    ExpSine,
    GeneralizedJacobi,
    HalfPlanePole,
    JacobiOPUC,
    Lebesgue,
    RotatedCos,
    SriRanga,
    boundary_check,
    pearson_residual,
    spec_to_dict,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BREAKDOWN = 0, 1, 2, 3


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

_COMPLEX = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")


def parse_complex(text: str) -> complex:
    """Parse ``a+bi`` style numbers: ``1``, ``-0.5i``, ``i``, ``2-0.5i``, ``1e-3+2i``."""
    s = text.strip().replace(" ", "").lower().replace("j", "i")
    if not s:
        raise UsageError("empty complex number")
    if not s.endswith("i"):
        if not _COMPLEX.match(s):
            raise UsageError(f"cannot parse {text!r} as a number")
        return complex(float(s), 0.0)
    body = s[:-1]
    # split at the last sign that is not part of an exponent
    cut = None
    for k in range(len(body) - 1, 0, -1):
        if body[k] in "+-" and body[k - 1] not in "e":
            cut = k
            break
    re_part, im_part = (body[:cut], body[cut:]) if cut is not None else ("0", body)
    if im_part in ("", "+"):
        im_part = "1"
    elif im_part == "-":
        im_part = "-1"
    if not (_COMPLEX.match(re_part) and _COMPLEX.match(im_part)):
        raise UsageError(f"cannot parse {text!r} as a complex number (use a+bi)")
    return complex(float(re_part), float(im_part))


def _real(text: str, name: str) -> float:
    z = parse_complex(text)
    if z.imag != 0:
        raise UsageError(f"--{name} must be real")
    return z.real


WEIGHT_NAMES = {
    "lebesgue": "Lebesgue",
    "expsine": "ExpSine",
    "bessel": "Bessel",
    "sriranga": "SriRanga",
    "cjacobi": "CircularJacobi",
    "gjacobi": "GeneralizedJacobi",
    "jacobi": "JacobiOPUC",
    "rotcos": "RotatedCos",
    "halfplane": "HalfPlanePole",
}


def _need(args, name):
    v = getattr(args, name.replace("-", "_").lstrip("_"), None)
    if v is None:
        raise UsageError(f"--{name} is required for weight {args.weight}")
    return v


def build_weight(args):
    """WeightSpec from the parsed command line."""
    if args.weight is None:
        raise UsageError("--weight is required")
    key = args.weight.lower()
    family = WEIGHT_NAMES.get(key) or {v.lower(): v for v in WEIGHT_NAMES.values()}.get(key)
    if family is None:
        raise UsageError(f"unknown weight {args.weight!r}; choose from {', '.join(WEIGHT_NAMES)}")
    norm = not args.raw
    if family == "Lebesgue":
        return Lebesgue(normalized=norm)
    if family == "ExpSine":
        return ExpSine(parse_complex(_need(args, "u")), normalized=norm)
    if family == "Bessel":
        return Bessel(_real(_need(args, "t"), "t"), normalized=norm)
    if family == "SriRanga":
        return SriRanga(parse_complex(_need(args, "b")), normalized=norm)
    if family == "CircularJacobi":
        return CircularJacobi(_real(_need(args, "lambda"), "lambda"), normalized=norm)
    if family == "GeneralizedJacobi":
        eta = _real(args.eta, "eta") if args.eta is not None else 0.0
        return GeneralizedJacobi(_real(_need(args, "lambda"), "lambda"),
                                 _real(_need(args, "beta"), "beta"), eta, normalized=norm)
    if family == "JacobiOPUC":
        return JacobiOPUC(_real(_need(args, "lambda"), "lambda"),
                          _real(_need(args, "beta"), "beta"), normalized=norm)
    if family == "RotatedCos":
        return RotatedCos(parse_complex(_need(args, "c")), normalized=norm)
    r = parse_complex(_need(args, "r"))
    if args.b0 is not None:
        return HalfPlanePole.from_b0(parse_complex(args.b0), r, normalized=norm)
    return HalfPlanePole(parse_complex(_need(args, "u")), r, normalized=norm)


def _precision(args) -> Precision:
    try:
        return Precision.parse(args.precision)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _tolerance(args, prec: Precision) -> float:
    if args.tol is not None:
        return float(args.tol)
    return 1e-20 if prec.is_extended else 1e-8


def _format(args, allowed: tuple) -> str:
    """Requested output format; the first entry of ``allowed`` is the default."""
    fmt = getattr(args, "format", None) or allowed[0]
    if fmt not in allowed:
        raise UsageError(f"{args.command} writes {' or '.join(allowed)}, not {fmt}")
    return fmt


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Routes to the Verblunsky coefficients
# ---------------------------------------------------------------------------


def moment_route(spec, n: int, prec: Precision, table: MomentTable | None = None):
    T = table if table is not None else compute_moments(spec, n + 2, prec)
    return szego_sequence(T, n), T


def difference_route(spec, n: int, prec: Precision, seeds=None) -> list:
    """alpha_0..alpha_n from a forward recurrence; seeds come from the moment route when needed."""
    if isinstance(spec, (SriRanga, CircularJacobi)):
        return list(propagate(DifferenceEquation.for_spec(EqId.RANGA_4_7, spec), None, n, prec).alphas)
    if seeds is None:
        seeds = moment_route(spec, max(n, 1), prec)[0].alphas[:2]
    if isinstance(spec, Bessel):
        eq = DifferenceEquation.for_spec(EqId.DPII, spec)
        return list(propagate(eq, seeds, n, prec).alphas)
    if isinstance(spec, ExpSine):
        eq = DifferenceEquation.for_spec(EqId.COMPLEX_DPII, spec)
        return list(propagate(eq, seeds, n, prec).alphas)
    for pair in spec.pearson_pairs(prec):
        try:
            eq = DifferenceEquation.for_spec(EqId.GEN_2_10, spec, pair)
            return list(propagate(eq, seeds, n, prec).alphas)
        except UnsolvableStep:
            continue
    raise UnsolvableStep(f"no Pearson pair of {spec.family} gives an explicit recurrence")


def cmd_moments(args) -> int:
    _format(args, ("json",))
    prec = _precision(args)
    spec = build_weight(args)
    T = compute_moments(spec, args.n, prec)
    fmt = prec.num.fmt
    for k in range(min(3, args.n) + 1):
        v = T.mu(k)
        print(f"mu_{k} = {fmt(v.real)} {fmt(v.imag)}i", file=sys.stderr if not args.out else sys.stdout)
    _emit(T.to_json() + "\n", args.out)
    return EXIT_OK


def cmd_verblunsky(args) -> int:
    out_format = _format(args, ("csv", "json"))
    prec = _precision(args)
    spec = build_weight(args)
    n = args.n
    routes: dict = {}
    if args.method in ("moments", "all"):
        routes["moments"] = list(moment_route(spec, n, prec)[0].alphas)
    if args.method in ("closed", "all"):
        try:
            routes["closed"] = verblunsky_closed_form(spec, n, prec)
        except OpucError:
            if args.method == "closed":
                raise
    if args.method in ("difference", "all"):
        seeds = routes["moments"][:2] if "moments" in routes else None
        routes["difference"] = difference_route(spec, n, prec, seeds)
    fmt = prec.num.fmt
    names = list(routes)
    pairs = [(a, b) for i, a in enumerate(names) for b in names[i + 1:]]
    if out_format == "json":
        doc = {"weight": spec_to_dict(spec), "precision": str(prec), "n": n,
               "alphas": {r: [[fmt(a.real), fmt(a.imag)] for a in routes[r]] for r in names}}
        _emit(json.dumps(doc, indent=2) + "\n", args.out)
        return EXIT_OK
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if len(names) == 1:
        header = ["n", "re_alpha", "im_alpha"]
    else:
        header = ["n"] + [f"{p}_{r}" for r in names for p in ("re", "im")]
        header += [f"dev_{a}_{b}" for a, b in pairs]
    w.writerow(header)
    worst = {pr: 0.0 for pr in pairs}
    for k in range(n + 1):
        row = [k]
        for r in names:
            vals = routes[r]
            if k < len(vals):
                row += [fmt(vals[k].real), fmt(vals[k].imag)]
            else:
                row += ["", ""]
        for a, b in pairs:
            if k < len(routes[a]) and k < len(routes[b]):
                d = float(abs(routes[a][k] - routes[b][k]))
                worst[(a, b)] = max(worst[(a, b)], d)
                row.append(f"{d:.17g}")
            else:
                row.append("")
        w.writerow(row)
    _emit(buf.getvalue(), args.out)
    for (a, b), d in worst.items():
        print(f"max |{a} - {b}| = {d:.3e}", file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Verification suites
# ---------------------------------------------------------------------------


def _check(suite, label, sup, tol) -> dict:
    sup = float(sup)
    return {"suite": suite, "check": label, "sup": sup, "tolerance": tol, "pass": bool(sup <= tol)}


def suite_pearson(spec, seq, T, n, tol, grid, prec) -> list:
    out = []
    for pair in spec.pearson_pairs(prec):
        rep = pearson_residual(spec, pair, grid or 128, tol, prec)
        out.append(_check("pearson", rep.label, rep.sup, tol))
        ok = boundary_check(spec, pair, precision=prec)
        out.append({"suite": "pearson", "check": f"boundary A={pair.label}",
                    "sup": 0.0 if ok else 1.0, "tolerance": 0.0, "pass": ok})
        worst = max(parts_identity_residual(pair, seq, T, m, k)
                    for m in range(min(n, 8) + 1) for k in range(m + 1))
        out.append(_check("pearson", f"integration by parts A={pair.label}", worst, tol))
    for m in range(1, n):
        for key, v in chain_residuals(seq, T, m).items():
            out.append(_check("pearson", f"{key} n={m}", v, tol))
    return out


def suite_structure(spec, seq, T, n, tol, grid, prec) -> list:
    out = []
    g = grid or 256
    for pair in spec.pearson_pairs(prec):
        for m in range(2, n + 1):
            for v in Variant:
                rep = structure_residual(pair, seq, m, g, v, tol)
                out.append(_check("structure", rep.label, rep.sup, tol))
            d = abs(s_nn_first(pair, seq, m) - s_nn_second(pair, seq, m))
            out.append(_check("structure", f"s_nn forms agree A={pair.label} n={m}", d, tol))
    for rid in relations_for(spec):
        for m in range(2, n + 1):
            rep = specialized_relation(spec, rid, seq, m, g, tol)
            out.append(_check("structure", rep.label, rep.sup, tol))
    for m in range(1, n + 1):
        for key, v in family_identities(spec, seq, m).items():
            out.append(_check("structure", f"{key} n={m}", v, tol))
    return out


def suite_difference(spec, seq, T, n, tol, grid, prec) -> list:
    out = []
    for eq in equations_for(spec, spec.pearson_pairs(prec)):
        label = eq.id.value + (f" A={eq.params['pair'].label}" if "pair" in eq.params else "")
        worst = max(difference_residual(eq, seq, m) for m in range(max(eq.min_n, 2), n + 1))
        out.append(_check("difference", label, worst, tol))
    return out


def suite_classify_weight(spec, prec) -> list:
    out = []
    for m in catalog_membership([spec]):
        out.append({"suite": "classify", "check": f"membership {m['family']} A={m['A']}",
                    "sup": m["residual"], "tolerance": 1e-10, "pass": m["member"]})
    return out


def suite_classify_roots(roots, boundary: bool) -> list:
    case = roots_case(roots)
    space = solve_system(build_system(case, boundary))
    out = [{"suite": "classify", "check": "solvable", "sup": space.system.residual(space.particular),
            "tolerance": 1e-10, "pass": space.contains(space.particular)}]
    # sample the solution space and confirm w'/w is real on the circle
    import numpy as np

    rng = np.random.default_rng(0)
    worst = 0.0
    for _ in range(4):
        coords = rng.normal(size=space.dimension)
        worst = max(worst, imaginary_part_sup(case, space.B(coords)))
    out.append({"suite": "classify", "check": "w'/w real on solution samples",
                "sup": worst, "tolerance": 1e-10, "pass": worst <= 1e-10})
    if isinstance(case, Deg1) and abs(case.r) == 0 and not boundary:
        # b2 = conj(b0), Im b1 = 1 on the whole space
        dev = 0.0
        for _ in range(4):
            B = space.B(rng.normal(size=space.dimension))
            dev = max(dev, abs(B.coeff(2) - B.coeff(0).conjugate()), abs(B.coeff(1).imag - 1))
        out.append({"suite": "classify", "check": "b2 = conj(b0), Im b1 = 1",
                    "sup": dev, "tolerance": 1e-10, "pass": dev <= 1e-10})
    for m in catalog_membership(sample_catalog(), case):
        out.append({"suite": "classify", "check": f"membership {m['family']} A={m['A']}",
                    "sup": m["residual"], "tolerance": 1e-10, "pass": m["member"]})
    return out


def sample_catalog() -> list:
    """One representative of each family, used when classifying bare roots."""
    return [
        Lebesgue(), ExpSine(0.6 - 0.3j), Bessel(1.0), SriRanga(1 + 0.5j), CircularJacobi(1.0),
        GeneralizedJacobi(0.3, 0.2, 0.5), JacobiOPUC(1.0, 1.0), RotatedCos(1 + 0.5j),
        HalfPlanePole(0.8, 0.5j),
    ]


SUITES = {
    "pearson": suite_pearson,
    "structure": suite_structure,
    "difference": suite_difference,
}


def _checks_csv(checks: list) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["suite", "check", "sup", "tolerance", "pass"])
    for c in checks:
        w.writerow([c["suite"], c["check"], f"{c['sup']:.17g}", f"{c['tolerance']:.3g}",
                    int(c["pass"])])
    return buf.getvalue()


def cmd_verify(args) -> int:
    out_format = _format(args, ("json", "csv"))
    prec = _precision(args)
    tol = _tolerance(args, prec)
    report: dict = {"suite": args.suite, "precision": str(prec), "n": args.n, "checks": []}
    if args.roots is not None:
        roots = [parse_complex(t) for t in args.roots.split(",") if t.strip()]
        report["roots"] = [[r.real, r.imag] for r in roots]
        if args.suite not in ("classify", "all"):
            raise UsageError("--roots only applies to the classify suite")
        report["checks"] += suite_classify_roots(roots, args.boundary)
    if args.weight is not None or args.moments is not None:
        table = None
        if args.moments is not None:
            with open(args.moments, encoding="utf-8") as fh:
                table = MomentTable.from_json(fh.read())
            if table.weight is None:
                raise UsageError("moment file carries no weight description")
            spec, prec = table.weight, table.precision
            n = min(args.n, table.N - 3)
            if n < 2:
                raise UsageError("moment table too short for verification")
        else:
            spec, n = build_weight(args), args.n
        report["weight"] = spec_to_dict(spec)
        seq, T = moment_route(spec, n + 1, prec, table)
        names = list(SUITES) if args.suite == "all" else [args.suite]
        for name in names:
            if name == "classify":
                report["checks"] += suite_classify_weight(spec, prec)
            else:
                report["checks"] += SUITES[name](spec, seq, T, n, tol, args.grid, prec)
        if args.suite == "all":
            report["checks"] += suite_classify_weight(spec, prec)
    elif args.roots is None:
        raise UsageError("verify needs --weight, --moments or --roots")
    failures = [c["check"] for c in report["checks"] if not c["pass"]]
    report["pass"] = not failures
    report["failures"] = failures
    if out_format == "csv":
        _emit(_checks_csv(report["checks"]), args.out)
    else:
        _emit(json.dumps(report, indent=2) + "\n", args.out)
    print(f"{len(report['checks'])} checks, {len(failures)} failed", file=sys.stderr)
    return EXIT_OK if not failures else EXIT_FAIL


def cmd_classify(args) -> int:
    if args.roots is None:
        raise UsageError("classify needs --roots (comma separated, empty for A = 1)")
    roots = [parse_complex(t) for t in args.roots.split(",") if t.strip()]
    case = roots_case(roots)
    space = solve_system(build_system(case, args.boundary))
    out = space.to_dict()
    out["B_particular"] = [[c.real, c.imag] for c in
                           (complex(space.B().coeff(k)) for k in range(3))]
    out["membership"] = catalog_membership(sample_catalog(), case)
    _emit(json.dumps(out, indent=2) + "\n", args.out)
    return EXIT_OK


def _read_csv_points(path: str):
    with open(path, encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if len(rows) < 2:
        raise UsageError(f"{path} holds no data rows")
    head = rows[0]
    data = [r for r in rows[1:] if r]
    if "residual" in head:
        x = head.index(head[0])
        y = head.index("residual")
        return "residual", [float(r[x]) for r in data], [float(r[y]) for r in data]
    re_cols = [k for k, h in enumerate(head) if h.startswith("re_")]
    if not re_cols:
        raise UsageError(f"{path}: expected alpha or residual columns")
    k = re_cols[0]
    pts = [complex(float(r[k]), float(r[k + 1])) for r in data if r[k] != ""]
    return "alpha", None, pts


def cmd_plot(args) -> int:
    _format(args, ("svg",))
    if args.input:
        kind, xs, ys = _read_csv_points(args.input)
        if not ys:
            raise UsageError("nothing to plot")
        if kind == "residual":
            svg = svg_polyline(xs, ys, title=f"residual ({args.input})", x_label="n")
        else:
            svg = svg_disk_scatter(ys, title=f"Verblunsky coefficients ({args.input})")
    else:
        prec = _precision(args)
        spec = build_weight(args)
        alphas = moment_route(spec, args.n, prec)[0].alphas
        svg = svg_disk_scatter(alphas, title=f"Verblunsky coefficients, {spec.family}")
    _emit(svg, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def _add_weight_flags(p: argparse.ArgumentParser):
    p.add_argument("--weight", help=f"one of {', '.join(WEIGHT_NAMES)}")
    for name in ("lambda", "beta", "eta", "t", "u", "r", "b", "b0", "c"):
        p.add_argument(f"--{name}", dest=name, metavar="X",
                       help="complex values use a+bi" if name in ("u", "r", "b", "b0", "c") else None)
    p.add_argument("--raw", action="store_true", help="skip normalization")
    p.add_argument("--precision", default="double", help="double or extended:<digits>")
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--grid", type=int, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("csv", "json", "svg"), default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="scopuc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("moments", help="normalized trigonometric moments as JSON")
    _add_weight_flags(p)
    p.set_defaults(func=cmd_moments)
    p = sub.add_parser("verblunsky", help="Verblunsky coefficients as CSV")
    _add_weight_flags(p)
    p.add_argument("--method", choices=("moments", "closed", "difference", "all"), default="moments")
    p.set_defaults(func=cmd_verblunsky)
    p = sub.add_parser("verify", help="run residual checks; exit 1 on any failure")
    _add_weight_flags(p)
    p.add_argument("--suite", choices=("pearson", "structure", "difference", "classify", "all"),
                   default="all")
    p.add_argument("--roots", default=None, help="zeros of A for the classify suite, comma separated")
    p.add_argument("--boundary", action="store_true", help="impose w(2 pi) = w(0)")
    p.add_argument("--moments", default=None, help="moment table JSON to verify instead of recomputing")
    p.set_defaults(func=cmd_verify)
    p = sub.add_parser("classify", help="solve the positivity system for given zeros of A")
    p.add_argument("--roots", default=None)
    p.add_argument("--boundary", action="store_true")
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("json",), default=None)
    p.set_defaults(func=cmd_classify)
    p = sub.add_parser("plot", help="SVG of Verblunsky coefficients or a residual table")
    _add_weight_flags(p)
    p.add_argument("--input", default=None, help="CSV from verblunsky or a residual table")
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "n", 0) is not None and getattr(args, "n", 0) < 0:
        print("error: --n must be nonnegative", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (NumericalBreakdown, QuadratureFailure) as exc:
        print(f"numerical breakdown: {exc}", file=sys.stderr)
        return EXIT_BREAKDOWN
    except (UsageError, DomainError, OpucError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
