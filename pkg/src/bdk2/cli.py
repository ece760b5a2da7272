"""``bdk2`` command-line front end.

Every subcommand prints deterministic JSON (sorted keys).  Exit codes: 2 on
parse errors, 1 on an obstruction when ``--strict`` is given, 0 otherwise.
"""

from __future__ import annotations

import argparse
import sys

from . import bd, ktheory, serialize
from .fields import ParseError, field_from_name
from .lattice import is_weyl_invariant
from .presets import PRESET_NAMES, preset
from .residue_functors import decide_integral_model, ez_of_residual_for, residual_extension, val_bd
from .suites import SUITES, run_suite


class _Obstructed(Exception):
    pass


def _field(args):
    return field_from_name(args.field)


def _emit(obj, args):
    if getattr(args, "format", "json") == "human":
        _human(obj)
    else:
        print(serialize.dumps(obj))


def _human(obj, indent: int = 0):
    pad = "  " * indent
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v:
                print(f"{pad}{k}:")
                _human(v, indent + 1)
            else:
                print(f"{pad}{k}: {v}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)):
                print(f"{pad}-")
                _human(v, indent + 1)
            else:
                print(f"{pad}- {v}")
    else:
        print(f"{pad}{obj}")


def _load_triple(ref: str):
    return serialize.triple_from_json(serialize.load_json(ref))


def _triple_from_args(args):
    if args.triple:
        return _load_triple(args.triple[0] if isinstance(args.triple, list) else args.triple)
    if args.root_datum and args.matrix:
        rd = serialize.load_root_datum(args.root_datum)
        C = serialize.incarnation_from_text(args.matrix)
        return _solve(rd, C, _field(args))
    raise ParseError("give --triple or both --root-datum and --matrix", "--triple")


def _solve(rd, C, field):
    if C.rank != rd.rank:
        raise ParseError("incarnation rank does not match the root datum", str(C.rank))
    return bd.third_invariant_solve(rd, C, field)


# -- subcommands --------------------------------------------------------------

def cmd_symbol(args):
    field = _field(args)
    u, v = field.parse(args.u), field.parse(args.v)
    for name, x in (("--u", args.u), ("--v", args.v)):
        if field.is_zero(field.parse(x)):
            raise ParseError(f"{name} must be nonzero", x)
    if args.place:
        place = field.parse_place(args.place)
        if place.kind == "real":
            val = ktheory.hilbert_real(u, v)
            _emit({"place": "real", "value": str(val)}, args)
        else:
            _emit({"place": str(place), "value": str(ktheory.tame_symbol(field, u, v, place))}, args)
        return
    coords = ktheory.k2_coordinates(ktheory.SymbolExpression.symbol(field, u, v))
    out = coords.to_json()
    out["reciprocity"] = ktheory.reciprocity_check(field, u, v)
    _emit(out, args)


def cmd_incarnate(args):
    field = _field(args)
    C = serialize.incarnation_from_text(args.matrix)
    T = bd.incarnate(C, field)

    def point(text):
        parts = [s for s in text.split(",")]
        if len(parts) != C.rank:
            raise ParseError(f"point needs {C.rank} comma-separated coordinates", text)
        vals = tuple(field.parse(s) for s in parts)
        for s, x in zip(parts, vals):
            if field.is_zero(x):
                raise ParseError("torus coordinates must be nonzero", s)
        return T.point(vals)

    s, kappa = T.multiply(point(args.left), point(args.right))
    _emit(
        {
            "s": [field.format(x) for x in s],
            "kappa": str(kappa),
            "coords": ktheory.k2_coordinates(kappa).to_json(),
            "Q": serialize.qform_to_json(bd.first_invariant(C)),
        },
        args,
    )


def cmd_invariants(args):
    field = _field(args)
    rd = serialize.load_root_datum(args.root_datum)
    C = serialize.incarnation_from_text(args.matrix)
    if C.rank != rd.rank:
        raise ParseError("incarnation rank does not match the root datum", args.matrix)
    Q = bd.first_invariant(C)
    out = {
        "Q": serialize.qform_to_json(Q),
        "D": serialize.extension_to_json(bd.second_invariant(C, field)),
        "weylInvariant": is_weyl_invariant(Q, rd),
    }
    if out["weylInvariant"]:
        out["triple"] = serialize.triple_to_json(bd.third_invariant_solve(rd, C, field))
    elif args.strict:
        _emit(out, args)
        raise _Obstructed()
    _emit(out, args)


def _two_triples(args):
    if args.triple and len(args.triple) == 2:
        return _load_triple(args.triple[0]), _load_triple(args.triple[1])
    if args.root_datum and args.matrix and len(args.matrix) == 2:
        rd = serialize.load_root_datum(args.root_datum)
        field = _field(args)
        return tuple(_solve(rd, serialize.incarnation_from_text(m), field) for m in args.matrix)
    raise ParseError("give two --triple files or --root-datum with two --matrix values", "--triple")


def cmd_baer_sum(args):
    T1, T2 = _two_triples(args)
    _emit(serialize.triple_to_json(bd.bd_baer_sum(T1, T2)), args)


def cmd_morphism(args):
    T1, T2 = _two_triples(args)
    res = bd.bd_morphisms(T1, T2)
    _emit({"exists": res.exists, "psi": serialize.cochain_to_json(res.psi) if res.exists else None, "reason": res.reason}, args)
    if args.strict and not res.exists:
        raise _Obstructed()


def cmd_residual(args):
    T = _triple_from_args(args)
    place = T.field.parse_place(args.place)
    if T.incarnation is None:
        raise ParseError("triple has no incarnation; residual extensions need one", "incarnation")
    res = residual_extension(T.incarnation, place, T.field)
    out = serialize.residual_to_json(res)
    out["ez"] = serialize.ez_to_json(ez_of_residual_for(T, place))
    _emit(out, args)
    if args.strict and not res.is_split:
        raise _Obstructed()


def cmd_val(args):
    T = _triple_from_args(args)
    place = T.field.parse_place(args.place)
    _emit(serialize.ez_to_json(val_bd(T, place)), args)


def cmd_decide_model(args):
    T = _triple_from_args(args)
    place = T.field.parse_place(args.place)
    if place.kind == "real":
        raise ParseError("integral models need a finite place or inf", args.place)
    rep = decide_integral_model(T, place)
    _emit(serialize.report_to_json(rep), args)
    if args.strict and not rep.exists:
        raise _Obstructed()


def cmd_verify(args):
    results = run_suite(args.suite)
    if args.format == "human":
        for r in results:
            print(r.line())
    else:
        print(serialize.dumps({"suite": args.suite, "results": [
            {"name": r.name, "passed": r.passed, "count": r.count, "detail": r.detail} for r in results
        ]}))
    if not all(r.passed for r in results):
        return 1
    return 0


PRESET_TRIPLES = ("sl2", "pgl2-odd", "gm1", "gm2", "gm3", "gm4")


def preset_triple(name: str, field):
    t = field.gen() if hasattr(field, "gen") and field.kind == "function" else None
    if name == "sl2":
        from .lattice import BilinearIncarnation
        return bd.third_invariant_solve(preset("SL2"), BilinearIncarnation(1, ((1,),)), field)
    if name == "pgl2-odd":
        from .lattice import BilinearIncarnation
        if t is None:
            raise ParseError("pgl2-odd needs a function field", field.name)
        base = bd.third_invariant_solve(preset("PGL2"), BilinearIncarnation(1, ((1,),)), field)
        return bd.twist_phi(base, t, (1,))
    if name.startswith("gm") and name[2:].isdigit() and 1 <= int(name[2:]) <= 4:
        return bd.zero_triple(preset(f"Gm^{name[2:]}"), field)
    raise ParseError("unknown preset triple", name)


def cmd_presets(args):
    if args.triple:
        _emit(serialize.triple_to_json(preset_triple(args.triple, _field(args))), args)
        return
    if args.name:
        try:
            rd = preset(args.name)
        except KeyError:
            raise ParseError("unknown preset", args.name) from None
        _emit(serialize.rootdatum_to_json(rd), args)
        return
    _emit({"rootData": list(PRESET_NAMES), "triples": list(PRESET_TRIPLES)}, args)


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bdk2", description="Invariants of K2-extensions of split tori and reductive groups.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, place=False):
        p.add_argument("--field", default="F5t", help="Q or F<p>t (default F5t)")
        p.add_argument("--format", choices=("json", "human"), default="json")
        p.add_argument("--strict", action="store_true", help="exit 1 on obstructions")
        if place:
            p.add_argument("--place", default="t", help="place such as t, t+2, inf, p:7")
        return p

    p = common(sub.add_parser("symbol", help="tame-symbol coordinates of {u, v}"))
    p.add_argument("--u", required=True)
    p.add_argument("--v", required=True)
    p.add_argument("--place")
    p.set_defaults(func=cmd_symbol)

    p = common(sub.add_parser("incarnate", help="multiply two points of an incarnated torus extension"))
    p.add_argument("--matrix", required=True, help='incarnation matrix, e.g. "[[1]]"')
    p.add_argument("--left", required=True, help="comma-separated torus coordinates")
    p.add_argument("--right", required=True)
    p.set_defaults(func=cmd_incarnate)

    p = common(sub.add_parser("invariants", help="Q, D and the third invariant of an incarnation"))
    p.add_argument("--root-datum", required=True, help="presets:NAME or a JSON file")
    p.add_argument("--matrix", required=True)
    p.set_defaults(func=cmd_invariants)

    for name, func, hlp in (("baer-sum", cmd_baer_sum, "Baer sum of two triples"), ("morphism", cmd_morphism, "BD morphism between two triples")):
        p = common(sub.add_parser(name, help=hlp))
        p.add_argument("--triple", action="append")
        p.add_argument("--root-datum")
        p.add_argument("--matrix", action="append")
        p.set_defaults(func=func)

    for name, func, hlp in (
        ("residual", cmd_residual, "residual extension at a place"),
        ("val", cmd_val, "valuation functor applied to a triple"),
        ("decide-model", cmd_decide_model, "decide existence of an integral model"),
    ):
        p = common(sub.add_parser(name, help=hlp), place=True)
        p.add_argument("--triple")
        p.add_argument("--root-datum")
        p.add_argument("--matrix")
        p.set_defaults(func=func)

    p = sub.add_parser("verify", help="run property suites")
    p.add_argument("--suite", choices=tuple(SUITES) + ("all",), default="all")
    p.add_argument("--format", choices=("json", "human"), default="human")
    p.set_defaults(func=cmd_verify)

    p = common(sub.add_parser("presets", help="list presets or print one"))
    p.add_argument("--name", help="root datum preset, e.g. SL2")
    p.add_argument("--triple", help="preset triple: " + ", ".join(PRESET_TRIPLES))
    p.set_defaults(func=cmd_presets)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code = args.func(args)
    except ParseError as exc:
        print(f"bdk2: parse error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"bdk2: parse error: cannot read {exc.filename!r}", file=sys.stderr)
        return 2
    except _Obstructed:
        return 1
    except ValueError as exc:
        print(f"bdk2: error: {exc}", file=sys.stderr)
        return 2
    return code or 0


if __name__ == "__main__":
    sys.exit(main())
