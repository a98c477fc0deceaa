"""``wrcomm`` command line.

Exit status: 0 success, 1 negative verdict, 2 input error, 3 internal
invariant violation.
"""
from __future__ import annotations

import argparse
import sys
from contextlib import contextmanager
from typing import Iterator, Sequence

import numpy as np

from wrcomm import _backend, bench, oracle, wrformat
from wrcomm.errors import (GuardExceeded, InvariantViolation, NotInSubgroupError, ParseError,
                           SignatureError)
from wrcomm.groups import GroupId, GroupKind, criteria_report, sample_derived
from wrcomm.solver import CommutatorWitness, solve_Bk_derived, solve_cyclic_tower, solve_Gk_derived
from wrcomm.tree import AritySignature, TreeAut, level_profile, multiply

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3

GROUP_CHOICES = ("wreath", "sylow-s", "sylow-a", "derived-wreath", "derived-sylow-a")
_KIND_BY_NAME = {
    "wreath": GroupKind.FULL_WREATH,
    "sylow-s": GroupKind.FULL_WREATH,
    "sylow-a": GroupKind.SYLOW_ALT,
    "derived-wreath": GroupKind.DERIVED_FULL_WREATH,
    "derived-sylow-a": GroupKind.DERIVED_SYLOW_ALT,
}
# leaf permutations are only printed in verbose mode up to this many leaves
_MAX_PRINTED_LEAVES = 64


class UsageError(Exception):
    """Bad flag combination detected after argparse."""


# -- helpers -----------------------------------------------------------------

def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, int(n ** 0.5) + 1))


def group_id(name: str, sig: AritySignature) -> GroupId:
    if name == "sylow-s":
        ps = set(sig.arities)
        if len(ps) > 1 or not all(_is_prime(p) for p in ps):
            raise SignatureError(f"sylow-s needs a constant prime signature p,...,p, got ({sig})")
    return GroupId(_KIND_BY_NAME[name], sig)


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load(path: str, sig: AritySignature | None) -> tuple[AritySignature, list[TreeAut]]:
    try:
        return wrformat.read_element_document(_read_text(path), sig)
    except ParseError as exc:
        raise ParseError(f"{path}: {exc.bare_message}", exc.offset) from None


def _sig_arg(text: str | None) -> AritySignature | None:
    return AritySignature.parse(text) if text else None


@contextmanager
def _output(path: str | None) -> Iterator:
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8") as fh:
            yield fh


def profile_table(g: TreeAut, detail: bool = False) -> str:
    """Aligned per-level rows: arity, vertex count, level index, parity (and per-subtree split)."""
    prof = level_profile(g)
    sig = g.sig
    rows = [("level", "arity", "vertices", "In_l", "parity") + (("per level-1 subtree",) if detail else ())]
    for l, c in enumerate(prof.counts):
        row = (str(l), str(sig.arities[l]), str(sig.level_sizes[l]), str(c), "odd" if c % 2 else "even")
        if detail:
            row += (" ".join(map(str, prof.per_subtree[l])) or "-",)
        rows.append(row)
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return "\n".join("  ".join(cell.rjust(w) for cell, w in zip(r, widths)).rstrip() for r in rows)


def _membership(gid: GroupId, g: TreeAut) -> tuple[bool, dict[str, bool]]:
    report = criteria_report(gid, g)
    verdicts = set(report.values())
    if len(verdicts) > 1:
        raise InvariantViolation(f"criteria disagree on {wrformat.serialize_element(g)}: {report}")
    return verdicts.pop(), report


def _yes(b: bool | None) -> str:
    return "n/a" if b is None else ("yes" if b else "no")


def _cycle_text(p: oracle.LeafPermutation) -> str:
    return "e" if p.is_identity() else p.cycle_notation(sep="")


def _solve_for(gid: GroupId, w: TreeAut) -> CommutatorWitness:
    if gid.kind is GroupKind.DERIVED_SYLOW_ALT:
        return solve_Gk_derived(w)
    if gid.signature.is_binary:
        return solve_Bk_derived(w)
    return solve_cyclic_tower(w)


# -- subcommands ---------------------------------------------------------------

def cmd_mul(args) -> int:
    paths = args.inputs
    if len(paths) < 2:
        raise UsageError("mul needs at least two --in files")
    sig = _sig_arg(args.sig)
    factors: list[TreeAut] = []
    for p in paths:
        file_sig, elems = _load(p, sig)
        sig = file_sig
        if not elems:
            raise UsageError(f"{p}: no element")
        factors.extend(elems)
    prod = factors[0]
    for f in factors[1:]:
        prod = multiply(prod, f)
    if args.verbose:
        print(profile_table(prod), file=sys.stderr)
        if sig.leaf_count <= _MAX_PRINTED_LEAVES:
            perm = oracle.to_leaf_perm(factors[0])
            for f in factors[1:]:
                perm = perm * oracle.to_leaf_perm(f)
            direct = oracle.to_leaf_perm(prod)
            print(f"oracle product  : {perm}", file=sys.stderr)
            print(f"portrait product: {direct}", file=sys.stderr)
            if perm != direct:
                raise InvariantViolation("portrait product disagrees with leaf-permutation product")
    with _output(args.out) as fh:
        fh.write(wrformat.write_element_document([prod]))
    return EXIT_OK


def cmd_check(args) -> int:
    sig, elems = _load(args.input, _sig_arg(args.sig))
    gid = group_id(args.group, sig)
    all_members = True
    for i, g in enumerate(elems, 1):
        member, report = _membership(gid, g)
        all_members &= member
        print(f"element {i}: {wrformat.serialize_element(g)}")
        print(profile_table(g, detail=args.verbose))
        for name, ok in report.items():
            print(f"  {name}: {'member' if ok else 'non-member'}")
        print(f"  verdict: {'member of' if member else 'not in'} {args.group} ({sig})")
    return EXIT_OK if all_members else EXIT_NEGATIVE


def cmd_solve(args) -> int:
    sig, elems = _load(args.input, _sig_arg(args.sig))
    name = {"wreath": "derived-wreath", "sylow-s": "derived-wreath",
            "sylow-a": "derived-sylow-a"}.get(args.group, args.group)
    gid = group_id(name, sig)
    docs = []
    for i, w in enumerate(elems, 1):
        wit = _solve_for(gid, w)
        print(f"element {i}: recursion depth {wit.recursion_depth}, a in G_k: "
              f"{_yes(wit.a_in_sylow_alt)}, b in G_k: {_yes(wit.b_in_sylow_alt)}",
              file=sys.stderr)
        if args.verbose:
            print(profile_table(w), file=sys.stderr)
        docs.append(wrformat.export_witness(wit))
    with _output(args.out) as fh:
        fh.write("---\n".join(docs))
    return EXIT_OK


class _Suite:
    """Collects named pass/fail lines for oracle-verify."""

    def __init__(self) -> None:
        self.failures = 0

    def check(self, label: str, ok: bool, detail: str = "") -> None:
        self.failures += not ok
        print(f"  [{'PASS' if ok else 'FAIL'}] {label}{': ' + detail if detail else ''}")


def _solve_all(suite: _Suite, gid: GroupId, elems) -> None:
    need_b = gid.kind is GroupKind.DERIVED_SYLOW_ALT
    bad = 0
    for w in elems:
        wit = _solve_for(gid, w)
        if not wit.verify() or (gid.signature.is_binary and not wit.a_in_sylow_alt) \
                or (need_b and not wit.b_in_sylow_alt):
            bad += 1
    suite.check("solver witness for every derived element", bad == 0, f"{len(elems) - bad}/{len(elems)}")


def _exhaustive(suite: _Suite, full: GroupId, derived: GroupId, guard: int) -> None:
    group = oracle.enumerate_group(full, guard=guard)
    print(f"{full.kind.value} ({full.signature}): group order {len(group)}")
    suite.check("group order matches counting formula", len(group) == full.order(),
                f"{len(group)} vs {full.order()}")
    closure = oracle.derived_subgroup_closure(group, full.signature, guard=guard)
    print(f"  derived order {len(closure)}")
    by_criterion = frozenset(g for g in group if derived.contains(g))
    suite.check("closure equals criterion set", closure == by_criterion,
                f"{len(closure)} vs {len(by_criterion)}")
    try:
        cs = oracle.commutator_set(group)
    except GuardExceeded as exc:
        print(f"  commutator set skipped: {exc}")
    else:
        print(f"  commutator-set size {len(cs)}")
        suite.check("commutator set equals derived subgroup", cs == closure)
    if full.signature.is_binary and full.signature.depth == 3 and full.kind is GroupKind.SYLOW_ALT:
        for g in sorted(closure, key=TreeAut.key):
            print(f"    {_cycle_text(oracle.to_leaf_perm(g))}")
    _solve_all(suite, derived, sorted(closure, key=TreeAut.key))


def cmd_oracle_verify(args) -> int:
    sig = _sig_arg(args.sig) or AritySignature.binary(3)
    guard = oracle.guard_limit(args.guard)
    suites = ["wreath", "sylow"] if args.suite == "all" else [args.suite]
    if "sylow" in suites and not sig.is_binary:
        if args.suite == "sylow":
            raise SignatureError(f"sylow suite needs an all-2 signature, got ({sig})")
        suites.remove("sylow")
    suite = _Suite()
    try:
        for name in suites:
            if name == "wreath":
                _exhaustive(suite, GroupId(GroupKind.FULL_WREATH, sig),
                            GroupId(GroupKind.DERIVED_FULL_WREATH, sig), guard)
            elif name == "sylow":
                _exhaustive(suite, GroupId(GroupKind.SYLOW_ALT, sig),
                            GroupId(GroupKind.DERIVED_SYLOW_ALT, sig), guard)
            else:
                _solver_suite(suite, sig, args.reps, args.seed)
    except GuardExceeded as exc:
        print(f"error: {exc}\nrerun with --suite solver to verify sampled derived elements "
              f"with the solver instead of enumerating", file=sys.stderr)
        return EXIT_INPUT
    print(f"{'all checks passed' if not suite.failures else f'{suite.failures} check(s) failed'}")
    return EXIT_OK if not suite.failures else EXIT_NEGATIVE


def _solver_suite(suite: _Suite, sig: AritySignature, reps: int, seed: int | None) -> None:
    rng = np.random.default_rng(seed)
    kinds = [GroupKind.DERIVED_FULL_WREATH]
    if sig.is_binary and sig.depth >= 2:
        kinds.append(GroupKind.DERIVED_SYLOW_ALT)
    for kind in kinds:
        gid = GroupId(kind, sig)
        elems = [sample_derived(gid, rng) for _ in range(reps)]
        print(f"{kind.value} ({sig}): {reps} sampled elements")
        _solve_all(suite, gid, elems)


def cmd_bench(args) -> int:
    ops = bench.OPS if args.op == "all" else (args.op,)
    rows = bench.run(args.depth, ops, args.reps, args.seed or 0,
                     backends=[args.backend] if args.backend else None)
    print(bench.format_table(rows))
    if args.csv:
        with _output(args.csv) as fh:
            fh.write(bench.to_csv(rows))
    return EXIT_OK


def cmd_example_a8(args) -> int:
    gid = GroupId.binary(GroupKind.SYLOW_ALT, 3)
    group = oracle.enumerate_group(gid, guard=args.guard)
    derived = oracle.derived_subgroup_closure(group, gid.signature, guard=args.guard)
    perms = {g: oracle.to_leaf_perm(g) for g in derived}

    computed = sorted(_cycle_text(p) for p in perms.values())
    expected = {oracle.parse_cycles(c, 8) for c in oracle.A8_SYLOW_DERIVED_CYCLES}
    print(f"G_3 order {len(group)}; G_3' order {len(derived)}")
    for text in computed:
        print(f"  {text}")
    ok = True
    got = set(perms.values())
    if got != expected:
        ok = False
        print("mismatch with the listed permutations:")
        for p in sorted(got - expected, key=_cycle_text):
            print(f"  + {_cycle_text(p)}")
        for p in sorted(expected - got, key=_cycle_text):
            print(f"  - {_cycle_text(p)}")
    ident = oracle.LeafPermutation(tuple(range(8)))
    involutions = all((p * p) == ident for p in got)
    commuting = all(p * q == q * p for p in got for q in got)
    print(f"order 8: {len(got) == 8}; every element squares to e: {involutions}; abelian: {commuting}")
    ok &= len(got) == 8 and involutions and commuting
    solved = 0
    for g in derived:
        wit = solve_Gk_derived(g)
        solved += wit.verify() and bool(wit.a_in_sylow_alt) and bool(wit.b_in_sylow_alt)
    print(f"solver witnesses with a, b in G_3: {solved}/{len(derived)}")
    ok &= solved == len(derived)
    return EXIT_OK if ok else EXIT_NEGATIVE


# -- argument parsing -----------------------------------------------------------

def _guard_type(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("guard must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--sig", help="arity signature, e.g. 2,2,2 (a file header must agree)")
    common.add_argument("-v", "--verbose", action="store_true", help="print level-index profiles")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--guard", type=_guard_type, default=None,
                        help="oracle element-count guard (default: $WRCOMM_GUARD or 2^20)")
    common.add_argument("--backend", choices=_backend.available(),
                        help="kernel backend (default: compiled if available)")

    parser = argparse.ArgumentParser(prog="wrcomm", description=(
        "Iterated wreath products of cyclic groups as tree portraits: membership in derived "
        "subgroups and single-commutator witnesses."))
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mul", parents=[common], help="multiply elements left to right")
    p.add_argument("--in", dest="inputs", action="append", default=[], required=True,
                   help="element file (repeat; all elements are multiplied in order)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_mul)

    p = sub.add_parser("check", parents=[common], help="membership report")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--group", choices=GROUP_CHOICES, default="derived-wreath")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("solve", parents=[common], help="write each element as one commutator")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out")
    p.add_argument("--group", choices=GROUP_CHOICES, default="derived-wreath")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle-verify", parents=[common],
                       help="exhaustive cross-check against the permutation oracle")
    p.add_argument("--suite", choices=("all", "wreath", "sylow", "solver"), default="all")
    p.add_argument("--reps", type=int, default=100, help="samples for the solver suite")
    p.set_defaults(func=cmd_oracle_verify)

    p = sub.add_parser("bench", parents=[common], help="kernel timings per backend")
    p.add_argument("--depth", type=int, default=20)
    p.add_argument("--op", choices=("all",) + bench.OPS, default="all")
    p.add_argument("--reps", type=int, default=5)
    p.add_argument("--csv", help="also write the table as CSV to this path")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("example-a8", parents=[common],
                       help="derived subgroup of the Sylow 2-subgroup of A_8")
    p.set_defaults(func=cmd_example_a8)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        if args.backend:
            with _backend.use(args.backend):
                return args.func(args)
        return args.func(args)
    except InvariantViolation as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except NotInSubgroupError as exc:
        print(f"not a member: {exc}", file=sys.stderr)
        return EXIT_NEGATIVE
    except (ParseError, SignatureError, UsageError, OSError, ValueError, GuardExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
