"""Command-line interface: ``symbreak gen|check|orbits|gni|tree``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .circuit import (
    GateCircuit,
    PredicateEvaluator,
    cnf_to_evaluator,
    cnf_to_gates,
    gates_to_evaluator,
)
from .cnf import parse_dimacs, sbp_from_spec, to_dimacs
from .errors import CapExceeded, Intractable, SpecError, SymbreakError
from .groups import (
    Graph,
    format_spec,
    parse_graph,
    parse_spec,
    parse_tree,
    realize,
    tree_aut_decompose,
)
from .perm import DEFAULT_BIT_CAP, DEFAULT_GROUP_CAP, all_orbits, burnside_count
from .reductions import default_rc_sbp, johnson_canonical, rc_gni_prove, rc_gni_verify
from .verify import check_complete, predicate_size_report

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_CAP = 3
EXIT_INTERNAL = 4

VERDICT_NONISO = "NON-ISOMORPHIC (certificate verified)"
VERDICT_NONE = "NO CERTIFICATE (isomorphic or oracle limit)"


@dataclass
class RunConfig:
    group_cap: int = DEFAULT_GROUP_CAP
    bit_cap: int = DEFAULT_BIT_CAP
    out: Path | None = None
    fmt: str = "dimacs"

    def __post_init__(self) -> None:
        if self.group_cap < 1 or self.bit_cap < 1:
            raise SpecError("caps must be positive")

    def emit(self, text: str) -> None:
        if self.out is None:
            sys.stdout.write(text)
        else:
            self.out.write_text(text)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise SpecError(f"cannot read {path}: {exc.strerror}") from None


def _load_predicate(text: str, config: RunConfig) -> PredicateEvaluator:
    """Evaluator for a DIMACS or gate-circuit file."""
    if text.lstrip().startswith("inputs"):
        return gates_to_evaluator(GateCircuit.from_text(text), config.bit_cap)
    return cnf_to_evaluator(parse_dimacs(text), strict=False)


def cmd_gen(args: argparse.Namespace, config: RunConfig) -> int:
    spec = parse_spec(_read(args.spec))
    try:
        p = sbp_from_spec(spec, config.group_cap)
    except Intractable as exc:
        print(f"intractable: {exc}", file=sys.stderr)
        print("complete symmetry breaking for this family is not expected to have polynomial size", file=sys.stderr)
        return EXIT_CAP
    if config.fmt == "gates":
        config.emit(cnf_to_gates(p).to_text())
    elif config.fmt == "dimacs":
        config.emit(to_dimacs(p))
    else:
        raise SpecError("gen writes dimacs or gates")
    size = predicate_size_report(p)
    report = (
        f"core {size.core_vars} aux {size.aux_vars} clauses {size.clause_count} literals {size.literal_count}\n"
    )
    (sys.stderr if config.out is None else sys.stdout).write(report)
    return EXIT_OK


def cmd_check(args: argparse.Namespace, config: RunConfig) -> int:
    spec = parse_spec(_read(args.spec))
    ev = _load_predicate(_read(args.pred), config)
    if ev.domain_size != spec.domain_size:
        raise SpecError(f"predicate has {ev.domain_size} core variables, group acts on {spec.domain_size} points")
    report = check_complete(ev, realize(spec), config.bit_cap)
    config.emit(report.to_json() if config.fmt == "report-json" else report.summary())
    return EXIT_OK if report.complete else EXIT_NEGATIVE


def cmd_orbits(args: argparse.Namespace, config: RunConfig) -> int:
    g = realize(parse_spec(_read(args.spec)))
    enumerated = len(all_orbits(g, config.bit_cap))
    counted = burnside_count(g, config.group_cap)
    if config.fmt == "report-json":
        config.emit(json.dumps({"burnside": counted, "enumerated": enumerated}, sort_keys=True) + "\n")
    else:
        config.emit(f"{enumerated}/{counted}\n")
    if enumerated != counted:
        print("internal error: enumerated and Burnside orbit counts disagree", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


def _gni_johnson(g1: Graph, g2: Graph, cap: int) -> bool:
    forms = [johnson_canonical(g, cap) for g in (g1, g2)]
    return forms[0] != forms[1]


def cmd_gni(args: argparse.Namespace, config: RunConfig) -> int:
    g1 = parse_graph(_read(args.graph1))
    g2 = parse_graph(_read(args.graph2))
    if g1.vertex_count != g2.vertex_count or g1.edge_count != g2.edge_count:
        print("NON-ISOMORPHIC (shape mismatch)")
        return EXIT_OK
    if args.mode == "johnson":
        noniso = _gni_johnson(g1, g2, config.group_cap)
    elif g1.edge_count == 0:
        noniso = False
    else:
        sbp = default_rc_sbp(g1.vertex_count, g1.edge_count, config.group_cap)
        cert = rc_gni_prove(g1, g2, sbp, config.group_cap)
        noniso = cert is not None and rc_gni_verify(g1, g2, cert, sbp)
    print(VERDICT_NONISO if noniso else VERDICT_NONE)
    return EXIT_OK if noniso else EXIT_NEGATIVE


def cmd_tree(args: argparse.Namespace, config: RunConfig) -> int:
    config.emit(format_spec(tree_aut_decompose(parse_tree(_read(args.tree)))))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="symbreak", description="Complete symmetry breaking predicates.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--group-cap", type=int, default=DEFAULT_GROUP_CAP, help="max group elements enumerated")
    common.add_argument("--bit-cap", type=int, default=DEFAULT_BIT_CAP, help="max points in exhaustive sweeps")
    common.add_argument("--out", type=Path, help="write the main output here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="generate a predicate for a group spec")
    p.add_argument("--spec", required=True)
    p.add_argument("--format", choices=["dimacs", "gates"], default="dimacs")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("check", parents=[common], help="check a predicate for completeness")
    p.add_argument("--spec", required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--format", choices=["text", "report-json"], default="text")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("orbits", parents=[common], help="count orbits two ways")
    p.add_argument("--spec", required=True)
    p.add_argument("--format", choices=["text", "report-json"], default="text")
    p.set_defaults(func=cmd_orbits)

    p = sub.add_parser("gni", parents=[common], help="graph non-isomorphism demo")
    p.add_argument("--graph1", required=True)
    p.add_argument("--graph2", required=True)
    p.add_argument("--mode", choices=["rowcol", "johnson"], default="rowcol")
    p.set_defaults(func=cmd_gni, format="text")

    p = sub.add_parser("tree", parents=[common], help="decompose a tree's automorphism group")
    p.add_argument("--tree", required=True)
    p.set_defaults(func=cmd_tree, format="text")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        config = RunConfig(args.group_cap, args.bit_cap, args.out, args.format)
        return args.func(args, config)
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CapExceeded, Intractable) as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SymbreakError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
