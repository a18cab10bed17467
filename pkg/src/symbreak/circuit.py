"""Symmetry breaking carriers beyond plain CNF.

A :class:`PredicateEvaluator` is a total accept/reject decision on complete
assignments of its domain. Evaluators here realize CNF-with-aux predicates,
gate circuits, the lex-min canonization oracle, the wreath-product algorithm
and the coset lift from a subgroup of small index.
"""

from __future__ import annotations

import re
from collections import deque
from itertools import product
from dataclasses import dataclass
from typing import Callable, Sequence

from .cnf import CnfPredicate
from .errors import CapExceeded, OracleIncomplete, PropagationStuck, SpecError
from .perm import (
    DEFAULT_GROUP_CAP,
    Assignment,
    GeneratedGroup,
    Partition,
    Permutation,
    _from_raw,
    _inverse_raw,
    act_assignment,
    inverse,
    orbit_of_assignment,
    partition_stabilizer,
    right_coset_reps,
)


class PredicateEvaluator:
    """Deterministic total decision procedure on ``{0,1}^domain_size``."""

    def __init__(self, domain_size: int, decide: Callable[[Assignment], bool], name: str = "") -> None:
        self.domain_size = domain_size
        self._decide = decide
        self.name = name or getattr(decide, "__name__", "evaluator")

    def __call__(self, theta: Sequence[int]) -> bool:
        theta = tuple(theta)
        if len(theta) != self.domain_size:
            raise SpecError(f"assignment of length {len(theta)} given to an evaluator on {self.domain_size}")
        return bool(self._decide(theta))

    def __repr__(self) -> str:
        return f"PredicateEvaluator({self.domain_size}, {self.name})"


def constant_evaluator(n: int, value: bool) -> PredicateEvaluator:
    return PredicateEvaluator(n, lambda theta: value, "always-true" if value else "always-false")


# --------------------------------------------------------------------------- CNF


def _propagate(clauses: Sequence[tuple[int, ...]], values: list[int]) -> bool:
    """Unit propagation to a fixed point; False on conflict."""
    changed = True
    while changed:
        changed = False
        for clause in clauses:
            free = 0
            last = 0
            for lit in clause:
                val = values[lit if lit > 0 else -lit]
                if val < 0:
                    free += 1
                    last = lit
                elif (val == 1) == (lit > 0):
                    break
            else:
                if free == 0:
                    return False
                if free == 1:
                    values[abs(last)] = 1 if last > 0 else 0
                    changed = True
    return True


def _search(clauses: Sequence[tuple[int, ...]], values: list[int], free: Sequence[int]) -> bool:
    if not _propagate(clauses, values):
        return False
    for v in free:
        if values[v] < 0:
            for bit in (0, 1):
                trial = list(values)
                trial[v] = bit
                if _search(clauses, trial, free):
                    return True
            return False
    return True


def cnf_to_evaluator(p: CnfPredicate, strict: bool = True) -> PredicateEvaluator:
    """Accept iff some aux extension of the core bits satisfies ``p``.

    Aux values are fixed by unit propagation. With ``strict`` an undetermined aux
    variable raises PropagationStuck; otherwise the remaining aux variables are
    searched by backtracking.
    """
    n = p.core_vars
    clauses = p.clauses
    aux = range(n + 1, p.total_vars + 1)

    def decide(theta: Assignment) -> bool:
        values = [-1] * (p.total_vars + 1)
        values[1 : n + 1] = theta
        if not _propagate(clauses, values):
            return False
        if any(values[v] < 0 for v in aux):
            if strict:
                raise PropagationStuck(f"aux variables undetermined for core {''.join(map(str, theta))}")
            return _search(clauses, values, aux)
        return True

    return PredicateEvaluator(n, decide, "cnf")


# --------------------------------------------------------------------------- gate circuits


_REF_RE = re.compile(r"^[xg](\d+)$")


@dataclass(frozen=True)
class Gate:
    op: str
    args: tuple[str, ...]


@dataclass(frozen=True)
class GateCircuit:
    """AND/OR/NOT circuit in topological order. Inputs are ``x1..xn``, gate ``k`` is ``gk``
    (1-based); the output may name a gate or an input wire.

    The first ``core_count`` inputs are the domain points; any further inputs are
    auxiliary and read existentially.
    """

    input_count: int
    gates: tuple[Gate, ...]
    output: str
    core_count: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.core_count is None:
            object.__setattr__(self, "core_count", self.input_count)
        if not 1 <= self.core_count <= self.input_count:
            raise SpecError("core input count must lie in [1, inputs]")
        for k, gate in enumerate(self.gates, start=1):
            arity = {"AND": 2, "OR": 2, "NOT": 1}.get(gate.op)
            if arity is None or len(gate.args) != arity:
                raise SpecError(f"gate g{k}: bad operation {gate.op} {gate.args}")
            for ref in gate.args:
                self._check_ref(ref, k)
        self._check_ref(self.output, len(self.gates) + 1)

    def _check_ref(self, ref: str, before: int) -> None:
        match = _REF_RE.match(ref)
        if not match:
            raise SpecError(f"bad wire name {ref!r}")
        idx = int(match.group(1))
        limit = self.input_count if ref[0] == "x" else before - 1
        if not 1 <= idx <= limit:
            raise SpecError(f"wire {ref} is undefined at this point")

    def to_text(self) -> str:
        lines = [f"inputs {self.input_count}"]
        if self.core_count != self.input_count:
            lines.append(f"core {self.core_count}")
        for k, gate in enumerate(self.gates, start=1):
            lines.append(f"g{k} = {gate.op} {' '.join(gate.args)}")
        lines.append(f"output {self.output}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> GateCircuit:
        lines = [ln.split() for ln in text.splitlines() if ln.strip()]
        if not lines or lines[0][0] != "inputs" or len(lines[0]) != 2:
            raise SpecError("circuit must start with 'inputs <n>'")
        if lines[-1][0] != "output" or len(lines[-1]) != 2:
            raise SpecError("circuit must end with 'output <wire>'")
        body = lines[1:-1]
        core = None
        if body and body[0][0] == "core":
            if len(body[0]) != 2:
                raise SpecError("expected 'core <n>'")
            core = int(body[0][1])
            body = body[1:]
        gates = []
        for k, ln in enumerate(body, start=1):
            if len(ln) < 4 or ln[0] != f"g{k}" or ln[1] != "=":
                raise SpecError(f"bad gate line {' '.join(ln)!r}")
            gates.append(Gate(ln[2], tuple(ln[3:])))
        return cls(int(lines[0][1]), tuple(gates), lines[-1][1], core)


def eval_gate_circuit(c: GateCircuit, theta: Sequence[int]) -> int:
    if len(theta) != c.input_count:
        raise SpecError(f"circuit has {c.input_count} inputs, got {len(theta)} values")
    values: list[int] = []

    def read(ref: str) -> int:
        idx = int(ref[1:])
        return theta[idx - 1] if ref[0] == "x" else values[idx - 1]

    for gate in c.gates:
        if gate.op == "NOT":
            values.append(1 - read(gate.args[0]))
        elif gate.op == "AND":
            values.append(read(gate.args[0]) & read(gate.args[1]))
        else:
            values.append(read(gate.args[0]) | read(gate.args[1]))
    return read(c.output)


def cnf_to_gates(p: CnfPredicate) -> GateCircuit:
    """Clauses become OR trees joined by an AND tree; aux variables stay circuit inputs."""
    gates: list[Gate] = []
    negated: dict[int, str] = {}

    def add(op: str, *args: str) -> str:
        gates.append(Gate(op, args))
        return f"g{len(gates)}"

    def wire(lit: int) -> str:
        v = abs(lit)
        if lit > 0:
            return f"x{v}"
        if v not in negated:
            negated[v] = add("NOT", f"x{v}")
        return negated[v]

    def fold(op: str, refs: list[str]) -> str:
        while len(refs) > 1:
            refs = [add(op, refs[i], refs[i + 1]) if i + 1 < len(refs) else refs[i] for i in range(0, len(refs), 2)]
        return refs[0]

    outs = [fold("OR", [wire(l) for l in c]) for c in p.clauses]
    if outs:
        output = fold("AND", outs)
    else:
        output = add("OR", "x1", add("NOT", "x1"))
    return GateCircuit(p.total_vars, tuple(gates), output, p.core_vars)


def gates_to_evaluator(c: GateCircuit, aux_cap: int = 16) -> PredicateEvaluator:
    """Accept iff some setting of the aux inputs makes the output 1 (exhaustive over aux)."""
    aux = c.input_count - c.core_count
    if aux > aux_cap:
        raise CapExceeded(f"{aux} aux inputs exceed the exhaustive cap of {aux_cap}")
    extensions = list(product((0, 1), repeat=aux))

    def decide(theta: Assignment) -> bool:
        return any(eval_gate_circuit(c, theta + ext) == 1 for ext in extensions)

    return PredicateEvaluator(c.core_count, decide, "gates")


# --------------------------------------------------------------------------- canonization oracle


def lexmin_canon_eval(g: GeneratedGroup, cap: int = DEFAULT_GROUP_CAP) -> PredicateEvaluator:
    """Accept exactly the lex-minimal element of every orbit (orbits closed under the generators)."""
    canon: dict[Assignment, Assignment] = {}

    def decide(theta: Assignment) -> bool:
        rep = canon.get(theta)
        if rep is None:
            orbit = orbit_of_assignment(theta, g, cap)
            rep = min(orbit)
            for member in orbit:
                canon[member] = rep
        return theta == rep

    return PredicateEvaluator(g.degree, decide, "lexmin")


def gni_cert_search(
    canon_eval: PredicateEvaluator, group: GeneratedGroup, theta: Sequence[int], cap: int = DEFAULT_GROUP_CAP
) -> Permutation | None:
    """Some ``x`` in ``group`` with ``canon_eval(theta ** x)``; None if the orbit has no accepted element."""
    theta = tuple(theta)
    if len(theta) != group.degree:
        raise SpecError("assignment length does not match the group degree")
    gens = group._raw_generators()
    pullbacks = [_inverse_raw(s) for s in gens]
    start = tuple(range(group.degree))
    seen = {theta: start}
    queue = deque([theta])
    while queue:
        cur = queue.popleft()
        if canon_eval(cur):
            return _from_raw(seen[cur])
        elem = seen[cur]
        for s, pb in zip(gens, pullbacks):
            img = tuple(map(cur.__getitem__, pb))
            if img not in seen:
                if len(seen) >= cap:
                    raise CapExceeded(f"orbit has more than {cap} elements")
                seen[img] = tuple(map(s.__getitem__, elem))
                queue.append(img)
    return None


# --------------------------------------------------------------------------- wreath products


def sym_product_eval(p: Partition) -> PredicateEvaluator:
    """Complete SBP for ``Sym(cell_1) x ... x Sym(cell_r)``: values nondecreasing within each cell."""
    cells = [[q - 1 for q in cell] for cell in p.cells]

    def decide(word: Assignment) -> bool:
        for cell in cells:
            seen_one = False
            for q in cell:
                if word[q]:
                    seen_one = True
                elif seen_one:
                    return False
        return True

    return PredicateEvaluator(p.domain_size, decide, "sym-product")


def default_stabilizer_sbp(
    h: GeneratedGroup, cap: int = DEFAULT_GROUP_CAP
) -> Callable[[Partition], PredicateEvaluator]:
    """Complete SBPs for partition stabilizers of ``h``: structural for Sym(m), brute force otherwise."""
    memo: dict[Partition, PredicateEvaluator] = {}

    def for_partition(p: Partition) -> PredicateEvaluator:
        ev = memo.get(p)
        if ev is None:
            if h.symmetric:
                ev = sym_product_eval(p)
            else:
                ev = lexmin_canon_eval(partition_stabilizer(h, p, cap), cap)
            memo[p] = ev
        return ev

    return for_partition


def wreath_eval(
    psi_g: PredicateEvaluator,
    top: GeneratedGroup,
    stab_sbp: Callable[[Partition], PredicateEvaluator] | None = None,
) -> PredicateEvaluator:
    """Complete SBP for ``G wr H`` (parts contiguous) from SBPs for ``G`` and every partition
    stabilizer of ``H``.

    Accept iff every part is accepted by ``psi_g`` and, for each row ``i``, the word of
    ``i``-th entries across the parts is accepted by the SBP of the stabilizer of the
    partition induced by rows ``1..i-1``.
    """
    n, m = psi_g.domain_size, top.degree
    if stab_sbp is None:
        stab_sbp = default_stabilizer_sbp(top)

    def decide(theta: Assignment) -> bool:
        for j in range(m):
            if not psi_g(theta[j * n : (j + 1) * n]):
                return False
        partition = Partition.unit(m)
        for i in range(n):
            row = theta[i::n]
            if not stab_sbp(partition)(row):
                return False
            partition = partition.refine(row)
        return True

    return PredicateEvaluator(n * m, decide, "wreath")


# --------------------------------------------------------------------------- coset lift


def index_lift_eval(
    psi_h: PredicateEvaluator, g: GeneratedGroup, h: GeneratedGroup, cap: int = DEFAULT_GROUP_CAP
) -> PredicateEvaluator:
    """Complete SBP for ``g`` from a complete SBP for a subgroup ``h``.

    Accept ``theta`` iff ``psi_h`` accepts it and it is lex-below the ``psi_h``-canonical
    element of every ``h``-orbit inside ``theta ** g``. Those orbits are
    ``(theta ** r^-1) ** h`` for ``r`` over the right coset representatives.
    """
    reps = [inverse(r) for r in right_coset_reps(g, h, cap)]
    canon: dict[Assignment, Assignment] = {}

    def canon_h(sigma: Assignment) -> Assignment:
        found = canon.get(sigma)
        if found is None:
            orbit = orbit_of_assignment(sigma, h, cap)
            accepted = [t for t in orbit if psi_h(t)]
            if not accepted:
                raise OracleIncomplete(f"no accepted element in the H-orbit of {''.join(map(str, sigma))}")
            found = min(accepted)
            for t in orbit:
                canon[t] = found
        return found

    def decide(theta: Assignment) -> bool:
        if not psi_h(theta):
            return False
        return all(theta <= canon_h(act_assignment(theta, r)) for r in reps)

    return PredicateEvaluator(g.degree, decide, "index-lift")
