"""Command-line front end.

Exit codes: 0 when the outcome is the expected one, 1 on a mismatch,
2 on usage or parse errors.
"""
import argparse
import json
import sys
from pathlib import Path

from . import perms
from .action import GroupElement, apply, root_permutation
from .alphabet import ParamSeq, TreeWord
from .analysis import (
    commutes_to_depth,
    is_trivial_to_depth,
    order_on_truncation,
    ball_profile,
    relation_suite,
    selfsim_falsify,
    stabilized_ball_profile,
)
from .automaton import export_dot
from .errors import TVError
from .presets import PRESETS, preset
from .specfile import export_constant, export_tables, load_spec_file

SUMMARY_HORIZON = 16


class CommandError(Exception):
    pass


def _int_list(text):
    return [int(t) for t in text.split(",") if t.strip()]


def _source_parser():
    p = argparse.ArgumentParser(add_help=False)
    src = p.add_argument_group("automaton source")
    src.add_argument("--preset", choices=PRESETS, help="named preset")
    src.add_argument("--spec", help="JSON automaton spec file")
    src.add_argument("--seq", default="i+2", help="sequence r_i: a*i+b or list:2,3,4[,...] (default i+2)")
    src.add_argument("--n", type=int, help="Zn_wr_Z: number of free factors")
    src.add_argument("--r", type=int, help="Cr_wr_Z: torsion order")
    src.add_argument("--free-rank", type=int, help="A/D: free rank n1")
    src.add_argument("--torsion", type=_int_list, help="A/D: torsion orders, e.g. 3,5")
    src.add_argument("--seed", type=int, help="A/D: seeded-shuffle cycle layout")
    return p


def _load(args):
    if bool(args.preset) == bool(args.spec):
        raise CommandError("give exactly one of --preset or --spec")
    if args.spec:
        return load_spec_file(args.spec)
    pre = preset(
        args.preset,
        seq=ParamSeq.parse(args.seq),
        n=args.n,
        r=args.r,
        free_rank=args.free_rank,
        torsion=tuple(args.torsion or ()),
        seed=args.seed,
    )
    return pre.automaton, pre


def _offset(args, aut):
    return 0 if getattr(args, "raw", False) else aut.alphabet.display_offset


def _element(aut, text, level):
    return GroupElement.parse(aut, text, level)


def cmd_build(args, out):
    aut, pre = _load(args)
    h = SUMMARY_HORIZON if aut.horizon is None else min(SUMMARY_HORIZON, aut.horizon)
    inv = "invertible" if aut.is_invertible_up_to(h) else "NOT invertible"
    label = pre.name if pre else (aut.name or "automaton")
    out.write(f"{label}: {aut.num_states} states, alphabet {aut.alphabet.describe()}, {inv} (h={h})\n")
    if args.out:
        if pre is not None and args.spec is None:
            doc = {"preset": {"name": args.preset, "seq": args.seq}}
            for key in ("n", "r", "free_rank", "seed"):
                if getattr(args, key) is not None:
                    doc["preset"][key] = getattr(args, key)
            if args.torsion:
                doc["preset"]["torsion"] = args.torsion
        elif aut.is_mealy:
            doc = export_constant(aut)
        else:
            doc = export_tables(aut, h)
        Path(args.out).write_text(json.dumps(doc, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    return 0


def cmd_act(args, out):
    aut, _ = _load(args)
    offset = _offset(args, aut)
    word = TreeWord.parse(args.word, offset)
    el = _element(aut, args.element, word.start_level)
    out.write(apply(el, word, args.mode).format(offset) + "\n")
    return 0


def cmd_perm(args, out):
    aut, _ = _load(args)
    p = root_permutation(_element(aut, args.element, args.level))
    out.write(perms.to_cycle_text(p.images, _offset(args, aut)) + "\n")
    return 0


def _expect_code(trivial, expect):
    if expect is None:
        return 0
    return 0 if trivial == (expect == "trivial") else 1


def cmd_trivial(args, out):
    aut, _ = _load(args)
    verdict = is_trivial_to_depth(_element(aut, args.element, args.level), args.depth)
    out.write(verdict.describe(_offset(args, aut)) + "\n")
    return _expect_code(verdict.trivial, args.expect)


def cmd_order(args, out):
    aut, _ = _load(args)
    result = order_on_truncation(_element(aut, args.element, args.level), args.depth, args.bound)
    out.write(f"{result}\n")
    return 0


def cmd_commute(args, out):
    aut, _ = _load(args)
    e1 = _element(aut, args.first, args.level)
    e2 = _element(aut, args.second, args.level)
    verdict = commutes_to_depth(e1, e2, args.depth)
    out.write(verdict.describe(_offset(args, aut)) + "\n")
    return _expect_code(verdict.trivial, args.expect)


def cmd_ball(args, out):
    aut, _ = _load(args)
    gens = [_element(aut, g, args.level) for g in args.gens]
    if args.stabilize:
        profile, depth, stable = stabilized_ball_profile(aut, args.level, gens, args.radius, cap=args.cap)
        note = "stabilized" if stable else "cap reached"
        out.write(f"{' '.join(map(str, profile))} (depth {depth}, {note})\n")
    else:
        profile = ball_profile(aut, args.level, gens, args.radius, args.depth)
        out.write(" ".join(map(str, profile)) + "\n")
    return 0


def cmd_falsify(args, out):
    aut, pre = _load(args)
    expect = None
    if args.relator:
        relators = [_element(aut, t, 0).factors for t in args.relator]
        shifts = _int_list(args.shifts) if args.shifts else [0, 1, 2, 3]
    elif pre is not None and pre.falsify:
        relators, shifts = pre.falsify["relators"], pre.falsify["shifts"]
        expect = pre.falsify["expect"]
    else:
        raise CommandError("give --relator (this preset has no default relators)")
    cex = selfsim_falsify(aut, shifts, relators, args.depth)
    offset = _offset(args, aut)
    if cex is None:
        out.write(f"no counterexample at depth {args.depth} (not a proof of self-similarity)\n")
        return 0 if expect is None else 1
    out.write("counterexample: " + cex.describe(aut, offset) + "\n")
    if expect is None:
        return 0
    ok = cex.shift_trivial == expect["shift_trivial"] and cex.shift_nontrivial == expect["shift_nontrivial"]
    return 0 if ok else 1


def cmd_verify(args, out):
    aut, pre = _load(args)
    if pre is None:
        raise CommandError("verify needs a preset")
    report = relation_suite(aut, pre.suite, args.depth)
    out.write(report.to_json() + "\n" if args.json else report.to_text() + "\n")
    ok = report.ok
    first = report.first_mismatch()
    if first is not None:
        sys.stderr.write(f"mismatch: {first.name} expected {first.expect}, got {first.verdict}\n")
    if pre.falsify:
        cex = selfsim_falsify(aut, pre.falsify["shifts"], pre.falsify["relators"], args.depth)
        exp = pre.falsify["expect"]
        if cex is None:
            out.write("self-similarity falsifier: no counterexample [expected one]\n")
            sys.stderr.write("mismatch: expected a self-similarity counterexample\n")
            ok = False
        else:
            matched = (cex.shift_trivial, cex.shift_nontrivial) == (exp["shift_trivial"], exp["shift_nontrivial"])
            out.write(f"self-similarity falsifier: {cex.describe(aut, aut.alphabet.display_offset)}\n")
            if not matched:
                sys.stderr.write("mismatch: counterexample shifts differ from the expected ones\n")
                ok = False
    out.write(f"{'PASS' if ok else 'FAIL'}: {pre.name} at depth {args.depth}\n")
    return 0 if ok else 1


def cmd_export(args, out):
    aut, pre = _load(args)
    if args.format == "dot":
        namer = pre.namer if pre is not None else None
        text = export_dot(aut, args.levels, namer=namer, elide=args.elide)
    else:
        text = json.dumps(export_tables(aut, args.levels), indent=2, ensure_ascii=False) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        out.write(text)
    return 0


def build_parser():
    source = _source_parser()
    parser = argparse.ArgumentParser(
        prog="tvgroups", description="Time-varying automata over changing alphabets and the groups they generate."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[source], help=help_text)
        p.set_defaults(func=func)
        return p

    def depth_opt(p):
        p.add_argument("--depth", type=int, default=8, help="truncation depth (default 8)")

    def level_opt(p):
        p.add_argument("--level", type=int, default=0, help="base level of the element")

    def raw_opt(p):
        p.add_argument("--raw", action="store_true", help="0-based letters instead of display letters")

    p = add("build", cmd_build, "summarize an automaton")
    p.add_argument("--out", help="write a JSON spec reproducing the automaton")

    p = add("act", cmd_act, "apply an element to a word")
    p.add_argument("element", help="e.g. 'b a^-1'")
    p.add_argument("word", help="e.g. '0: 1 2'")
    p.add_argument("--mode", choices=("fused", "naive", "product"), default="fused")
    raw_opt(p)

    p = add("perm", cmd_perm, "root permutation of an element")
    p.add_argument("element")
    level_opt(p)
    raw_opt(p)

    p = add("trivial", cmd_trivial, "triviality to a depth, with witness")
    p.add_argument("element")
    level_opt(p)
    depth_opt(p)
    raw_opt(p)
    p.add_argument("--expect", choices=("trivial", "nontrivial"))

    p = add("order", cmd_order, "order on the depth truncation")
    p.add_argument("element")
    level_opt(p)
    depth_opt(p)
    p.add_argument("--bound", type=int, default=16)

    p = add("commute", cmd_commute, "commutation to a depth")
    p.add_argument("first")
    p.add_argument("second")
    level_opt(p)
    depth_opt(p)
    raw_opt(p)
    p.add_argument("--expect", choices=("trivial", "nontrivial"))

    p = add("ball", cmd_ball, "ball-size profile of truncated actions")
    p.add_argument("--gens", nargs="+", required=True, help="generator elements, e.g. a b")
    p.add_argument("--radius", type=int, default=3)
    level_opt(p)
    depth_opt(p)
    p.add_argument("--stabilize", action="store_true", help="double the depth until the profile is stable")
    p.add_argument("--cap", type=int, default=16)

    p = add("falsify", cmd_falsify, "search for a relator separating two shifts")
    p.add_argument("--relator", action="append", help="relator element text (repeatable)")
    p.add_argument("--shifts", help="comma-separated shifts (default 0,1,2,3)")
    depth_opt(p)
    raw_opt(p)

    p = add("verify", cmd_verify, "run the relation suite of a preset")
    p.add_argument("name", nargs="?", choices=PRESETS, help="preset name (alternative to --preset)")
    depth_opt(p)
    p.add_argument("--json", action="store_true")

    p = add("export", cmd_export, "export the level graph or the level tables")
    p.add_argument("--levels", type=int, default=2)
    p.add_argument("--format", choices=("dot", "json-tables"), default="dot")
    p.add_argument("--out", help="output file (default stdout)")
    p.add_argument("--elide", action="store_true", help="omit the label of the inferable multi-arrow")
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    if getattr(args, "name", None) and args.command == "verify":
        if args.preset and args.preset != args.name:
            sys.stderr.write("error: conflicting preset names\n")
            return 2
        args.preset = args.name
    try:
        return args.func(args, out)
    except (TVError, CommandError, OSError) as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
