"""Command-line front end.

One executable, one subcommand per experiment.  Every successful run prints
a single JSON envelope (or CSV with a fixed, versioned column order) that
embeds the tool version, the field spec, and the seed, so identical configs
reproduce byte-identical artifacts.  Validation and precision problems exit
2 with a machine-readable error on stderr; blown budgets exit 3.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor

from . import __version__
from .algebra import NEG_INF, Field, parse_poly
from .contfrac import approx_quality, cf_expand, convergents
from .equidist import weyl_scan
from .errors import BudgetError, FFWeylError
from .expsum import ExpPoly, twisted_sum, weyl_sum
from .exponents import derived_sets
from .kinfty import parse_kelem
from .meanvalue import growth_table, profile
from .sieve import DenseSet, difference_search, gm_build, t_mn
from .weylmachinery import minor_arc_probe

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_BUDGET = 3


def _fmt_float(x):
    return float(f"{x:.12g}")


def _fmt_float_str(x):
    return f"{x:.12g}"


def _fmt_ord(v):
    if v is None:
        return None
    if v is NEG_INF:
        return "-inf"
    return int(v)


def _parse_int_list(text):
    """Accept '3', '1,2,5' and '1..12' (inclusive range)."""
    text = text.strip()
    if ".." in text:
        lo, hi = text.split("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(part) for part in text.split(",") if part.strip()]


def _load_json_arg(text):
    text = text.strip()
    if text.startswith("{"):
        return json.loads(text)
    with open(text, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _split_top(s, seps="+-"):
    out = []
    sign, buf, depth = "+", [], 0
    prev = ""
    for ch in s:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch in seps and depth == 0 and prev != "^":
            if any(not c.isspace() for c in buf):
                out.append((sign, "".join(buf)))
                sign, buf = ch, []
            else:
                sign = "-" if (sign == "-") != (ch == "-") else "+"
        else:
            buf.append(ch)
        if not ch.isspace():
            prev = ch
    if any(not c.isspace() for c in buf):
        out.append((sign, "".join(buf)))
    return out


def parse_upoly(field, s):
    """Parse a u-polynomial with F_q[t] coefficients, e.g. '(t^2+1)*u^3 + u + t'."""
    out = {}
    for sign, term in _split_top(s):
        term = term.strip()
        upos = None
        depth = 0
        for i, ch in enumerate(term):
            if ch in "([":
                depth += 1
            elif ch in ")]":
                depth -= 1
            elif ch == "u" and depth == 0:
                upos = i
                break
        if upos is None:
            exp = 0
            coeff_text = term
        else:
            rest = term[upos + 1:].strip()
            exp = 1
            if rest.startswith("^"):
                exp = int(rest[1:])
            elif rest:
                raise FFWeylError(f"bad u-term tail {rest!r}")
            coeff_text = term[:upos].strip()
            if coeff_text.endswith("*"):
                coeff_text = coeff_text[:-1].strip()
        if coeff_text.startswith("(") and coeff_text.endswith(")"):
            coeff_text = coeff_text[1:-1]
        coeff = parse_poly(field, coeff_text) if coeff_text else field.poly_one
        if sign == "-":
            coeff = -coeff
        out[exp] = out.get(exp, field.poly_zero) + coeff
    return {e: c for e, c in out.items() if not c.is_zero()}


def _load_exppoly(args, field):
    obj = _load_json_arg(args.f)
    return ExpPoly.from_json(obj, field=field, default_seed=args.seed)


def _emit(args, command, field, params, result, csv_rows=None):
    if args.out == "json":
        envelope = {
            "version": __version__,
            "command": command,
            "field": field.spec_string() if field is not None else None,
            "seed": args.seed,
            "params": params,
            "result": result,
        }
        print(json.dumps(envelope, sort_keys=True))
        return
    header, rows = csv_rows
    fieldspec = field.spec_string() if field is not None else ""
    print(f"# ffweyl {__version__} command={command} field={fieldspec} seed={args.seed}")
    print(",".join(header))
    for row in rows:
        print(",".join("" if v is None else str(v) for v in row))


# ---------------------------------------------------------------------------
# Subcommands.

def _cmd_exponents(args):
    sets = derived_sets(frozenset(_parse_int_list(args.set)), args.p)
    wanted = [w.strip() for w in args.emit.split(",") if w.strip()]
    known = {"shadow", "kstar", "sprime", "ktilde", "maximal"}
    bad = set(wanted) - known
    if bad:
        raise FFWeylError(f"unknown emit keys {sorted(bad)}")
    result = {name: sorted(getattr(sets, name)) for name in wanted}
    rows = [(name, " ".join(str(v) for v in result[name])) for name in wanted]
    _emit(args, "exponents", None, {"p": args.p, "set": sorted(_parse_int_list(args.set))},
          result, (("set", "elements"), rows))


def _cmd_cf(args):
    field = Field.parse(args.field)
    alpha = parse_kelem(field, args.alpha)
    cf = cf_expand(alpha, max_terms=args.max_terms)
    table = convergents(cf)
    conv_rows = []
    for n, (a, g) in enumerate(table.pairs):
        try:
            quality = _fmt_ord(approx_quality(alpha, n, cf=cf))
        except FFWeylError:
            quality = None
        conv_rows.append({"n": n, "b": str(cf.quotients[n]), "a": str(a),
                          "g": str(g), "quality": quality})
    result = {"quotients": [str(b) for b in cf.quotients],
              "convergents": conv_rows, "stopped": cf.stopped}
    rows = [(r["n"], r["b"], r["a"], r["g"], r["quality"]) for r in conv_rows]
    _emit(args, "cf", field, {"alpha": args.alpha, "max_terms": args.max_terms},
          result, (("n", "b", "a", "g", "quality"), rows))


def _cmd_weyl(args):
    field = Field.parse(args.field)
    f = _load_exppoly(args, field)
    if args.m is not None:
        hist = twisted_sum(f, parse_poly(field, args.m), args.N, budget=args.budget)
    else:
        hist = weyl_sum(f, args.N, budget=args.budget)
    result = {"counts": list(hist.counts), "total": hist.total,
              "magnitude": _fmt_float(hist.magnitude()),
              "normalized": _fmt_float(hist.normalized()),
              "is_zero": hist.is_zero(), "is_full": hist.is_full()}
    rows = [(r, c) for r, c in enumerate(hist.counts)]
    _emit(args, "weyl", field, {"N": args.N, "m": args.m},
          result, (("residue", "count"), rows))


def _scan_one(f, N, D, depth, budget):
    verdict = weyl_scan(f, [N], D, depth=depth, budget=budget)
    return verdict.rows[0]


def _cmd_equidist(args):
    field = Field.parse(args.field)
    f = _load_exppoly(args, field)
    N_list = _parse_int_list(args.N)
    if args.threads > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            rows = list(pool.map(
                lambda N: _scan_one(f, N, args.D, args.depth, args.budget), N_list))
    else:
        rows = [_scan_one(f, N, args.D, args.depth, args.budget) for N in N_list]
    rows = sorted(rows, key=lambda r: r.N)
    result = {
        "rows": [{"N": r.N, "sup": _fmt_float(r.sup), "witness": r.witness,
                  "discrepancy": None if r.discrepancy is None else str(r.discrepancy)}
                 for r in rows],
        "flags": {"failure_certificate": any(r.witness is not None for r in rows)},
    }
    csv = [(r.N, _fmt_float_str(r.sup), r.witness,
            None if r.discrepancy is None else str(r.discrepancy)) for r in rows]
    _emit(args, "equidist", field,
          {"N": N_list, "D": args.D, "depth": args.depth}, result,
          (("N", "sup_m", "witness", "discrepancy"), csv))


def _cmd_js(args):
    field = Field.parse(args.field)
    K = frozenset(_parse_int_list(args.set))
    prof = profile(K, field.p)
    rows = growth_table(K, args.s, _parse_int_list(args.N), field,
                        budget=args.budget)
    result = {
        "profile": {"psi": prof.psi, "phi": prof.phi, "kappa": prof.kappa,
                    "s_min": prof.s_min},
        "rows": [{"N": N, "J": J, "ratio": str(ratio)} for N, J, ratio in rows],
    }
    csv = [(N, J, str(ratio)) for N, J, ratio in rows]
    _emit(args, "js", field, {"set": sorted(K), "s": args.s}, result,
          (("N", "J", "ratio"), csv))


def _cmd_probe(args):
    field = Field.parse(args.field)
    f = _load_exppoly(args, field)
    report = minor_arc_probe(f, args.k, args.N, args.eta, budget=args.budget)
    sweep = [{"M": e.M, "a": str(e.a), "g": str(e.g), "quality_kind": e.quality_kind,
              "quality": _fmt_ord(e.quality), "ord_g": _fmt_ord(e.ord_g)}
             for e in report.entries]
    best = None
    if report.best is not None:
        b = report.best
        best = {"M": b.M, "a": str(b.a), "g": str(b.g),
                "quality": _fmt_ord(b.quality), "ord_g": _fmt_ord(b.ord_g)}
    result = {"counts": list(report.histogram.counts),
              "magnitude": _fmt_float(report.magnitude),
              "threshold": _fmt_float(report.threshold),
              "triggered": report.triggered, "sweep": sweep, "best": best}
    csv = [(e["M"], e["a"], e["g"], e["quality"], e["ord_g"]) for e in sweep]
    _emit(args, "probe", field,
          {"k": args.k, "N": args.N, "eta": args.eta}, result,
          (("M", "a", "g", "quality", "ord_g"), csv))


def _parse_dense_set(field, N, obj):
    if "elems" in obj:
        return DenseSet.from_elems(field, N,
                                   [parse_poly(field, s) for s in obj["elems"]])
    if "mod" in obj:
        g = parse_poly(field, obj["mod"])
        residues = [parse_poly(field, s) for s in obj["residues"]]
        return DenseSet.from_residues(field, N, g, residues)
    raise FFWeylError("dense set needs 'elems' or 'mod'/'residues'")


def _cmd_intersective(args):
    field = Field.parse(args.field)
    phi = parse_upoly(field, args.phi)
    A = _parse_dense_set(field, args.N, _load_json_arg(args.A))
    witness = difference_search(A, phi, args.xbound, budget=args.budget)
    wit = None
    if witness is not None:
        if not witness.verify():
            raise FFWeylError("witness failed re-verification")
        wit = {"a": str(witness.a), "a_prime": str(witness.a_prime),
               "x": str(witness.x), "value": str(witness.value)}
    result = {"witness": wit, "density": str(A.density()),
              "searched_x": field.q ** args.xbound}
    csv = [(wit["a"], wit["a_prime"], wit["x"], wit["value"])] if wit else []
    _emit(args, "intersective", field,
          {"phi": args.phi, "N": args.N, "xbound": args.xbound}, result,
          (("a", "a_prime", "x", "value"), csv))


def _cmd_sieve_tmn(args):
    field = Field.parse(args.field)
    phi = parse_upoly(field, args.phi)
    alpha = parse_kelem(field, args.alpha)
    gm = gm_build(field, args.M, phi, mode=args.mode, budget=args.budget)
    rows = []
    for N in _parse_int_list(args.N):
        r = t_mn(phi, alpha, args.M, N, field, gm=gm, budget=args.budget)
        rows.append({"N": N, "normalized": _fmt_float(r.normalized),
                     "exact_one": r.exact_one})
    result = {"modulus_degree": gm.modulus.deg, "mode": gm.mode,
              "root": None if gm.root is None else str(gm.root), "rows": rows}
    csv = [(r["N"], _fmt_float_str(r["normalized"]), r["exact_one"]) for r in rows]
    _emit(args, "sieve-tmn", field,
          {"phi": args.phi, "alpha": args.alpha, "M": args.M, "mode": args.mode},
          result, (("N", "normalized", "exact_one"), csv))


def _add_common(parser, suppress):
    """Global options, valid both before and after the subcommand."""
    sup = {"default": argparse.SUPPRESS} if suppress else {}
    parser.add_argument("--out", choices=("json", "csv"),
                        **(sup or {"default": "json"}))
    parser.add_argument("--seed", type=int, **(sup or {"default": 0}))
    parser.add_argument("--threads", type=int, **(sup or {"default": 1}))
    parser.add_argument("--budget", type=int,
                        help="cap on q^N-style enumerations",
                        **(sup or {"default": None}))


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ffweyl",
        description="Exact function-field character-sum experiments.")
    _add_common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_parser(name, **kwargs):
        p = sub.add_parser(name, **kwargs)
        _add_common(p, suppress=True)
        return p

    p = add_parser("exponents", help="shadow/core/peeling of an exponent set")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--set", required=True)
    p.add_argument("--emit", default="shadow,kstar,sprime,ktilde,maximal")
    p.set_defaults(func=_cmd_exponents)

    p = add_parser("cf", help="continued fraction expansion and convergents")
    p.add_argument("--field", required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--max-terms", type=int, default=32, dest="max_terms")
    p.set_defaults(func=_cmd_cf)

    p = add_parser("weyl", help="one exact character-sum histogram")
    p.add_argument("--field", required=True)
    p.add_argument("--f", required=True, help="ExpPoly JSON (inline or path)")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--m", default=None, help="optional twist polynomial")
    p.set_defaults(func=_cmd_weyl)

    p = add_parser("equidist", help="twist scan plus cylinder discrepancy")
    p.add_argument("--field", required=True)
    p.add_argument("--f", required=True)
    p.add_argument("--N", required=True, help="list or range, e.g. 1..12")
    p.add_argument("--D", type=int, required=True)
    p.add_argument("--depth", type=int, default=None)
    p.set_defaults(func=_cmd_equidist)

    p = add_parser("js", help="power-sum mean values")
    p.add_argument("--field", required=True)
    p.add_argument("--set", required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--N", required=True)
    p.set_defaults(func=_cmd_js)

    p = add_parser("probe", help="large-sum diagnostic with approximation sweep")
    p.add_argument("--field", required=True)
    p.add_argument("--f", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--eta", type=int, required=True)
    p.set_defaults(func=_cmd_probe)

    p = add_parser("intersective", help="difference-set witness search")
    p.add_argument("--field", required=True)
    p.add_argument("--phi", required=True, help="u-polynomial, e.g. 'u^2'")
    p.add_argument("--A", required=True, help="dense set JSON (inline or path)")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--xbound", type=int, required=True)
    p.set_defaults(func=_cmd_intersective)

    p = add_parser("sieve-tmn", help="congruence-average sums")
    p.add_argument("--field", required=True)
    p.add_argument("--phi", required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--N", required=True)
    p.add_argument("--mode", choices=("literal", "squarefree"), default="literal")
    p.set_defaults(func=_cmd_sieve_tmn)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except BudgetError as exc:
        print(json.dumps({"error": {"type": type(exc).__name__,
                                    "message": str(exc)}}), file=sys.stderr)
        return EXIT_BUDGET
    except (FFWeylError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(json.dumps({"error": {"type": type(exc).__name__,
                                    "message": str(exc)}}), file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
