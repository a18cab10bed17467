"""Exhaustive ground truth for symmetry breaking predicates."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import NamedTuple

from .circuit import PredicateEvaluator
from .cnf import CnfPredicate
from .errors import CapExceeded, SpecError
from .perm import DEFAULT_BIT_CAP, Assignment, GeneratedGroup, all_assignments, format_bits, int_to_bits, orbit_representatives


@dataclass
class CompletenessReport:
    orbit_count: int
    accepted_count: int
    orbits_with_zero_accepted: list[Assignment] = field(default_factory=list)
    orbits_with_multiple_accepted: list[tuple[Assignment, list[Assignment]]] = field(default_factory=list)

    @property
    def complete(self) -> bool:
        return (
            not self.orbits_with_zero_accepted
            and not self.orbits_with_multiple_accepted
            and self.accepted_count == self.orbit_count
        )

    @property
    def verdict(self) -> str:
        return "complete" if self.complete else "incomplete"

    def to_dict(self) -> dict:
        return {
            "orbitCount": self.orbit_count,
            "acceptedCount": self.accepted_count,
            "orbitsWithZeroAccepted": [format_bits(r) for r in self.orbits_with_zero_accepted],
            "orbitsWithMultipleAccepted": [
                {"representative": format_bits(r), "accepted": [format_bits(a) for a in acc]}
                for r, acc in self.orbits_with_multiple_accepted
            ],
            "verdict": self.verdict,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True) + "\n"

    def summary(self) -> str:
        lines = [f"orbits: {self.orbit_count}", f"accepted: {self.accepted_count}", f"verdict: {self.verdict}"]
        for r in self.orbits_with_zero_accepted:
            lines.append(f"no accepted assignment in orbit of {format_bits(r)}")
        for r, acc in self.orbits_with_multiple_accepted:
            lines.append(f"orbit of {format_bits(r)} accepts {' '.join(format_bits(a) for a in acc)}")
        return "\n".join(lines) + "\n"


def _check_bits(n: int, cap_bits: int) -> None:
    if n > cap_bits:
        raise CapExceeded(f"{n} points exceed the assignment-sweep cap of {cap_bits} bits")


def check_complete(
    ev: PredicateEvaluator, g: GeneratedGroup, cap_bits: int = DEFAULT_BIT_CAP
) -> CompletenessReport:
    """Sweep every assignment in lex order and count accepted assignments per orbit."""
    n = g.degree
    if ev.domain_size != n:
        raise SpecError(f"evaluator domain {ev.domain_size} differs from group degree {n}")
    _check_bits(n, cap_bits)
    reps = orbit_representatives(g, cap_bits)
    accepted: dict[int, list[Assignment]] = {}
    count = 0
    for index, theta in enumerate(all_assignments(n)):
        if ev(theta):
            accepted.setdefault(int(reps[index]), []).append(theta)
            count += 1
    rep_ids = sorted(set(reps.tolist()))
    zero = [int_to_bits(r, n) for r in rep_ids if r not in accepted]
    multiple = [(int_to_bits(r, n), accepted[r]) for r in rep_ids if len(accepted.get(r, ())) > 1]
    return CompletenessReport(len(rep_ids), count, zero, multiple)


def equiv_check(a: PredicateEvaluator, b: PredicateEvaluator, cap_bits: int = DEFAULT_BIT_CAP) -> Assignment | None:
    """First assignment in lex order on which the evaluators disagree, or None when equal."""
    if a.domain_size != b.domain_size:
        raise SpecError("evaluators have different domain sizes")
    _check_bits(a.domain_size, cap_bits)
    for theta in all_assignments(a.domain_size):
        if a(theta) != b(theta):
            return theta
    return None


class SizeReport(NamedTuple):
    core_vars: int
    aux_vars: int
    clause_count: int
    literal_count: int


def predicate_size_report(p: CnfPredicate) -> SizeReport:
    return SizeReport(p.core_vars, p.aux_vars, len(p.clauses), sum(len(c) for c in p.clauses))
