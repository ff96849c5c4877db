"""Command-line interface: ``sobolev-embed {constant,reproduce,plot-data,geometry,verify}``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from . import geometry
from .embedding import ExponentPair, Method, NoApplicableMethod, best_embedding
from .geometry import GeometryError
from .quadrature import QuadratureError, QuadratureSettings
from .tables import TABLES, compute_table
from .verify import DEFAULT_SEED, embedding_check, poincare_check

EXIT_OK = 0
EXIT_NO_METHOD = 2
EXIT_QUADRATURE = 3
EXIT_BAD_POLYGON = 4
EXIT_BAD_EXPONENT = 5
EXIT_VIOLATION = 6

RECORD_FIELDS = ("domain", "p", "q", "method", "n", "c_p", "measure_term", "dp_term", "quadrature_error")


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def fmt(x):
    """10 significant digits; exponents at infinity print as ``inf``."""
    if x is None:
        return ""
    if isinstance(x, int):
        return str(x)
    if math.isinf(x):
        return "inf"
    return f"{x:.10g}"


def _json_value(x):
    if isinstance(x, float):
        return "inf" if math.isinf(x) else float(fmt(x))
    return x


def parse_exponent(text, name):
    try:
        v = float(text)
    except (TypeError, ValueError):
        raise CliError(f"invalid exponent {name}={text!r}: expected a number or 'inf'", EXIT_BAD_EXPONENT)
    if math.isnan(v) or v < 1.0:
        raise CliError(f"invalid exponent {name}={text!r}: must be >= 1 or inf", EXIT_BAD_EXPONENT)
    return v


def _exponents(args):
    return ExponentPair(parse_exponent(args.p, "p"), parse_exponent(args.q, "q"))


def _domain(text):
    if text in ("square", "triangle"):
        return text
    if text.startswith("file:"):
        try:
            return geometry.load_document(text[5:])
        except GeometryError as exc:
            raise CliError(str(exc), EXIT_BAD_POLYGON)
    raise CliError(f"unknown domain {text!r}: use square, triangle or file:PATH", EXIT_BAD_POLYGON)


def _settings(args):
    try:
        return QuadratureSettings(rel_tol=args.tol)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_BAD_EXPONENT)


def _compute(domain, e, method, k_max, settings):
    try:
        return best_embedding(domain, e, method, k_max, settings)
    except NoApplicableMethod as exc:
        raise CliError(str(exc), EXIT_NO_METHOD)
    except QuadratureError as exc:
        raise CliError(f"quadrature failure: {exc} (best value {exc.value}, error {exc.error})", EXIT_QUADRATURE)


def _method_label(res, requested):
    used = res.methods
    if len(used) == 1:
        return next(iter(used)).value
    return requested.value


def cmd_constant(args, out):
    e = _exponents(args)
    domain = _domain(args.domain)
    method = Method(args.method)
    res = _compute(domain, e, method, args.max_divisions, _settings(args))
    record = {
        "domain": args.domain,
        "p": e.p,
        "q": e.q,
        "method": _method_label(res, method),
        "n": res.n,
        "c_p": res.c_p,
        "measure_term": res.measure_term,
        "dp_term": res.dp_term,
        "quadrature_error": res.quadrature_error,
    }
    if args.format == "json":
        out.write(json.dumps({k: _json_value(v) for k, v in record.items()}) + "\n")
    elif args.format == "csv":
        _write_csv(out, RECORD_FIELDS, [[fmt(v) if not isinstance(v, str) else v for v in record.values()]])
    else:
        width = max(len(k) for k in RECORD_FIELDS)
        for k, v in record.items():
            out.write(f"{k:<{width}}  {v if isinstance(v, str) else fmt(v)}\n")
    return EXIT_OK


def _write_csv(out, header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    out.write(buf.getvalue())


def cmd_reproduce(args, out):
    layout = TABLES[args.table]
    table = compute_table(args.table, args.max_divisions, _settings(args))
    names = [m.value for m in layout.methods]
    header = [layout.row_var] + names + [f"n_{m}" for m in names]
    if layout.domain == "triangle":
        header += [f"c_4n_{m}" for m in names]
    rows = []
    for v, cells in table.items():
        vals = [fmt(c.c_p) if c else "" for c in cells.values()]
        ns = [str(c.n) if c else "" for c in cells.values()]
        row = [str(v)] + vals + ns
        if layout.domain == "triangle":
            # only reported where the (4n) form changes the printed value
            row += [fmt(c.c_p_4n) if c and fmt(c.c_p_4n) != fmt(c.c_p) else "" for c in cells.values()]
        rows.append(row)
    _write_csv(out, header, rows)
    return EXIT_OK


def parse_range(text):
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise CliError(f"invalid range {text!r}: expected a:b or a:b:step", EXIT_BAD_EXPONENT)
    try:
        a, b = float(parts[0]), float(parts[1])
        step = float(parts[2]) if len(parts) == 3 else 1.0
    except ValueError:
        raise CliError(f"invalid range {text!r}", EXIT_BAD_EXPONENT)
    if not step > 0.0:
        raise CliError("range step must be positive", EXIT_BAD_EXPONENT)
    vals = []
    i = 0
    while a + i * step <= b + 1e-9 * step:
        vals.append(a + i * step)
        i += 1
    return vals


def cmd_plot_data(args, out):
    q = parse_exponent(args.q, "q")
    domain = _domain(args.domain)
    settings = _settings(args)
    methods = (Method.HLS1, Method.HLS2, Method.YOUNG)
    rows = []
    for p in parse_range(args.p_range):
        e = ExponentPair(parse_exponent(p, "p"), q)
        row = [fmt(p)]
        for m in methods:
            try:
                row.append(fmt(best_embedding(domain, e, m, args.max_divisions, settings).c_p))
            except NoApplicableMethod:
                row.append("")
            except QuadratureError as exc:
                raise CliError(f"quadrature failure: {exc}", EXIT_QUADRATURE)
        rows.append(row)
    _write_csv(out, ["p"] + [m.value for m in methods], rows)
    return EXIT_OK


def _polygon_source(text):
    if text == "square":
        return geometry.unit_square()
    if text == "triangle":
        return geometry.unit_triangle()
    D = _domain(text if text.startswith("file:") else "file:" + text)
    if len(D.pieces) != 1:
        raise CliError("--difference-body expects a single polygon", EXIT_BAD_POLYGON)
    return D.pieces[0]


def cmd_geometry(args, out):
    if args.difference_body:
        doc = geometry.difference_body(_polygon_source(args.difference_body)).to_dict()
    elif args.subdivide:
        fn = geometry.subdivide_unit_square if args.subdivide == "square" else geometry.subdivide_equilateral_triangle
        try:
            doc = fn(args.k).to_dict()
        except ValueError as exc:
            raise CliError(str(exc), EXIT_BAD_POLYGON)
    else:
        raise CliError("geometry needs --difference-body or --subdivide", EXIT_BAD_POLYGON)
    out.write(json.dumps(doc, indent=1) + "\n")
    return EXIT_OK


def cmd_verify(args, out):
    e = _exponents(args)
    domain = _domain(args.domain)
    res = _compute(domain, e, Method(args.method), args.max_divisions, _settings(args))
    factor = args.mutate_factor
    cp = factor * res.c_p
    lines = []
    ok = True
    seen = set()
    for P, rep in zip(res.decomposition.pieces, res.per_piece):
        key = (round(rep.measure, 12), round(rep.diameter, 12), round(rep.dp, 10))
        if key in seen:
            continue
        seen.add(key)
        pc = poincare_check(P, factor * rep.dp, e, args.trials, args.seed)
        ok = ok and pc.passed
        lines.append(
            f"poincare  piece area={fmt(rep.measure)} dp={fmt(factor * rep.dp)} "
            f"max_ratio={fmt(pc.max_ratio)} violations={len(pc.violations)} skipped={pc.skipped}"
        )
    ec = embedding_check(res.decomposition, cp, e, args.trials, args.seed)
    ok = ok and ec.passed
    lines.append(f"embedding n={res.n} c_p={fmt(cp)} max_ratio={fmt(ec.max_ratio)} violations={len(ec.violations)}")
    if not ok:
        for line in lines:
            sys.stderr.write(line + "\n")
        sys.stderr.write("FAIL: inequality violated\n")
        return EXIT_VIOLATION
    for line in lines:
        out.write(line + "\n")
    out.write("PASS\n")
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(prog="sobolev-embed", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, domain=True):
        if domain:
            sp.add_argument("--domain", default="square", help="square, triangle or file:PATH")
        sp.add_argument("--max-divisions", type=int, default=5, help="search n = 4**k for k <= K")
        sp.add_argument("--tol", type=float, default=1e-12, help="quadrature relative tolerance")

    sp = sub.add_parser("constant", help="upper bound for C_p on a domain")
    common(sp)
    sp.add_argument("--p", required=True)
    sp.add_argument("--q", required=True)
    sp.add_argument("--method", choices=["auto", "hls1", "hls2", "young"], default="auto")
    sp.add_argument("--format", choices=["json", "csv", "text"], default="text")
    sp.set_defaults(func=cmd_constant)

    sp = sub.add_parser("reproduce", help="recompute one of the square/triangle tables as CSV")
    common(sp, domain=False)
    sp.add_argument("--table", type=int, choices=sorted(TABLES), required=True)
    sp.set_defaults(func=cmd_reproduce)

    sp = sub.add_parser("plot-data", help="C_p against p for each method, as CSV")
    common(sp)
    sp.add_argument("--q", default="2")
    sp.add_argument("--p-range", required=True, help="a:b[:step], inclusive")
    sp.set_defaults(func=cmd_plot_data)

    sp = sub.add_parser("geometry", help="difference bodies and subdivisions as polygon documents")
    sp.add_argument("--difference-body", metavar="SOURCE", help="square, triangle or file:PATH")
    sp.add_argument("--subdivide", choices=["square", "triangle"])
    sp.add_argument("--k", type=int, default=1)
    sp.set_defaults(func=cmd_geometry)

    sp = sub.add_parser("verify", help="check the computed constants on random smooth functions")
    common(sp)
    sp.add_argument("--p", required=True)
    sp.add_argument("--q", required=True)
    sp.add_argument("--method", choices=["auto", "hls1", "hls2", "young"], default="auto")
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp.add_argument("--mutate-factor", type=float, default=1.0, help=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_verify)
    return ap


def main(argv=None, out=None):
    out = out if out is not None else sys.stdout
    args = build_parser().parse_args(argv)
    buf = io.StringIO()
    try:
        code = args.func(args, buf)
    except CliError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.code
    if code == EXIT_OK:
        out.write(buf.getvalue())
    return code


if __name__ == "__main__":
    sys.exit(main())
