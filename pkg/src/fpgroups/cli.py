"""Command-line front end.

Exit codes: 0 success, 1 parse or usage error, 2 enumeration overflow,
3 inconsistent facts.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .classify import (
    OPEN_DEFICIENCIES,
    GroupFacts,
    InconsistentFactsError,
    classify,
    cyclic_cube_row,
    deficiency_interval,
    deficiency_table,
    effective_family,
)
from .homology import abelianization, betti_mod_p_complex
from .l2 import beta1_family, beta1_one_relator, format_rational
from .presentations import (
    Family,
    OrbifoldSignature,
    Presentation,
    euler_char_complex,
    format_presentation,
    orbifold_presentation,
    parse_presentation,
)
from .subgroups import (
    DEFAULT_MAX_COSETS,
    BudgetExceededError,
    CosetOverflowError,
    coset_enumerate,
    low_index_subgroups,
    reidemeister_schreier,
)
from .words import cyclic_reduce, format_word, parse_word, power_decompose

EXIT_OK, EXIT_PARSE, EXIT_OVERFLOW, EXIT_INCONSISTENT = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _emit(out, obj):
    out.write(json.dumps(obj, ensure_ascii=False, indent=2) + "\n")


def _load_presentation(arg: str) -> Presentation:
    if not arg.lstrip().startswith("<") and os.path.isfile(arg):
        with open(arg, encoding="utf-8") as fh:
            return parse_presentation(fh.read(), label=os.path.basename(arg))
    return parse_presentation(arg)


def _presentation_json(p: Presentation) -> dict:
    return {"generators": list(p.generators), "relators": [format_word(r) for r in p.relators]}


def _tristate(value: str | None) -> bool | None:
    return None if value is None else value == "yes"


def _parse_family(text: str | None) -> tuple[Family, ...] | None:
    if not text:
        return None
    return tuple(Family.parse(piece) for piece in text.split("*"))


def _facts(args, p: Presentation) -> GroupFacts:
    return GroupFacts(
        p,
        is_infinite=_tristate(getattr(args, "infinite", None)),
        is_limit_group=_tristate(getattr(args, "limit_group", None)),
        is_abelian=_tristate(getattr(args, "abelian", None)),
        family=_parse_family(getattr(args, "family", None)),
    )


def _beta1(facts: GroupFacts) -> Fraction | None:
    factors, _ = effective_family(facts)
    if factors is not None:
        return beta1_family(factors)
    p = facts.presentation
    if p.num_relators == 1 and p.num_generators >= 2:
        # one-relator groups on >= 2 generators have b1 >= 1, hence are infinite
        core, _ = cyclic_reduce(p.relators[0])
        _, n = power_decompose(core)
        return beta1_one_relator(p.num_generators, n)
    return None


def cmd_parse(args, out):
    p = _load_presentation(args.presentation)
    if args.json:
        _emit(out, _presentation_json(p))
    else:
        out.write(format_presentation(p) + "\n")


def cmd_invariants(args, out):
    p = _load_presentation(args.presentation)
    facts = _facts(args, p)
    lower, upper = deficiency_interval(facts)
    b1, torsion = abelianization(p)
    beta1 = _beta1(facts)
    report = {
        "generators": p.num_generators,
        "relators": p.num_relators,
        "def_lower": lower,
        "def_upper": upper,
        "b1": b1,
        "torsion": torsion,
        "betti_mod_p": [betti_mod_p_complex(p, q).as_dict() for q in sorted(set(args.mod))],
        "beta1": None if beta1 is None else format_rational(beta1),
        "chi_complex": euler_char_complex(p),
        "verdict": classify(facts).as_json(),
    }
    _emit(out, report)


def cmd_orbifold(args, out):
    mults = tuple(int(m) for m in args.mult.split(",") if m.strip()) if args.mult else ()
    p = orbifold_presentation(OrbifoldSignature(args.genus, mults))
    if args.json:
        _emit(out, _presentation_json(p))
    else:
        out.write(format_presentation(p) + "\n")


def _subgroup_json(p, table) -> dict:
    rw = reidemeister_schreier(p, table)
    return {
        "coset_table": table.as_json(),
        "subgroup_generators": [format_word(w) for w in table.subgroup_generators],
        "rewritten": rw.as_json(),
        "counts": {"generators": rw.num_generators, "relators": rw.num_relators},
    }


def cmd_subgroup(args, out):
    p = _load_presentation(args.presentation)
    if not p.generators:
        raise UsageError("presentation has no generators")
    words = [parse_word(w, p.generators) for w in args.gens.split(";") if w.strip()]
    table = coset_enumerate(p, words, max_cosets=args.max_cosets)
    result = _subgroup_json(p, table)
    if args.json:
        _emit(out, result)
        return
    out.write(f"index {table.index}\n")
    for g, col in result["coset_table"]["table"].items():
        out.write(f"  {g}: {' '.join(map(str, col))}\n")
    rw = reidemeister_schreier(p, table)
    out.write(f"rewritten: {format_presentation(rw.presentation)}\n")
    out.write(f"counts: {rw.num_generators} generators, {rw.num_relators} relators"
              f" ({rw.trivial_relators} trivial)\n")


def cmd_low_index(args, out):
    p = _load_presentation(args.presentation)
    tables = low_index_subgroups(p, args.max, conjugacy_classes=not args.all)
    if args.json:
        _emit(out, [_subgroup_json(p, t) for t in tables])
        return
    for t in tables:
        rw = reidemeister_schreier(p, t)
        images = "; ".join(
            f"{g}: {' '.join(str(c + 1) for c in col)}"
            for g, col in zip(p.generators, t.images)
        )
        out.write(f"index {t.index}  [{images}]  rewritten {rw.num_generators} gens,"
                  f" {rw.num_relators} rels\n")
    out.write(f"{len(tables)} subgroups\n")


def cmd_classify(args, out):
    p = _load_presentation(args.presentation)
    _emit(out, classify(_facts(args, p)).as_json())


def cmd_table(args, out):
    rows = deficiency_table(args.genus, args.prime)
    if args.with_cube:
        rows.append(cyclic_cube_row(args.prime))
    if args.json:
        _emit(out, {
            "rows": [{"label": r.label, "lower": r.lower, "upper": r.upper,
                      "characteristic": r.characteristic} for r in rows],
            "open": list(OPEN_DEFICIENCIES),
        })
        return
    width = max(len(r.label) for r in rows)
    for r in rows:
        out.write(f"{r.label:<{width}}  {r.lower}\n")
    out.write("open: " + ", ".join(map(str, OPEN_DEFICIENCIES)) + "\n")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    facts = _Parser(add_help=False)
    for flag in ("--infinite", "--limit-group", "--abelian"):
        facts.add_argument(flag, choices=("yes", "no"))
    facts.add_argument("--family", help="closed-form family tag, e.g. 'surface:2*free_abelian:2'")

    parser = _Parser(prog="fpgroups", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("parse", parents=[common], help="echo the canonical presentation")
    p.add_argument("presentation")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("invariants", parents=[common, facts], help="invariant report (JSON)")
    p.add_argument("presentation")
    p.add_argument("--mod", type=int, action="append", default=[], metavar="P")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("orbifold", parents=[common], help="orbifold surface-group presentation")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--mult", default="", help="comma-separated multiplicities")
    p.set_defaults(func=cmd_orbifold)

    p = sub.add_parser("subgroup", parents=[common], help="coset table and rewritten presentation")
    p.add_argument("presentation")
    p.add_argument("--gens", required=True, help="subgroup generators separated by ';'")
    p.add_argument("--max-cosets", type=int, default=DEFAULT_MAX_COSETS)
    p.set_defaults(func=cmd_subgroup)

    p = sub.add_parser("low-index", parents=[common], help="subgroups of small index")
    p.add_argument("presentation")
    p.add_argument("--max", type=int, default=6)
    p.add_argument("--all", action="store_true", help="every subgroup, not one per conjugacy class")
    p.set_defaults(func=cmd_low_index)

    p = sub.add_parser("classify", parents=[common, facts], help="Kähler verdict (JSON)")
    p.add_argument("presentation")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("table", parents=[common], help="negative deficiencies of product groups")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--with-cube", action="store_true", help="append the (Z_p)^3 row")
    p.set_defaults(func=cmd_table)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        args.func(args, out)
    except InconsistentFactsError as exc:
        err.write(f"inconsistent facts: {exc}\n")
        return EXIT_INCONSISTENT
    except (CosetOverflowError, BudgetExceededError) as exc:
        err.write(f"overflow: {exc}\n")
        return EXIT_OVERFLOW
    except (UsageError, ValueError, KeyError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_PARSE
    return EXIT_OK


run = main

if __name__ == "__main__":
    sys.exit(main())
