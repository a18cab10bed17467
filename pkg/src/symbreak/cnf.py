"""Complete symmetry breaking predicates in CNF for the tractable group families.

Core variables ``1..n`` are the domain points; auxiliary variables follow at
``n+1..n+p``. Every generator selects the lex-minimal assignment of each orbit
(reading point 1 first, 0 < 1), except for tree groups whose representative
depends on the vertex labelling.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import CapExceeded, Intractable, SpecError
from .groups import (
    DisjointProduct,
    Explicit,
    GroupSpec,
    Johnson,
    Natural,
    RowColumn,
    RowInterchange,
    Tree,
    TreeAut,
    Trivial,
    Wreath,
    realize,
    tree_aut_decompose,
)
from .perm import DEFAULT_GROUP_CAP, GeneratedGroup, enumerate_group, inverse

Clause = tuple[int, ...]


@dataclass(frozen=True)
class CnfPredicate:
    core_vars: int
    aux_vars: int
    clauses: tuple[Clause, ...]
    names: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.core_vars < 1:
            raise SpecError("a predicate needs at least one core variable")
        if self.aux_vars < 0:
            raise SpecError("negative aux count")
        clauses = tuple(tuple(int(lit) for lit in c) for c in self.clauses)
        top = self.core_vars + self.aux_vars
        for c in clauses:
            if not c:
                raise SpecError("empty clause")
            for lit in c:
                if lit == 0 or abs(lit) > top:
                    raise SpecError(f"literal {lit} outside 1..{top}")
                if -lit in c:
                    raise SpecError(f"tautological clause {c}")
        object.__setattr__(self, "clauses", clauses)
        names = tuple(self.names) or default_names(self.core_vars, self.aux_vars)
        if len(names) != top:
            raise SpecError("one name per variable is required")
        object.__setattr__(self, "names", names)

    @property
    def total_vars(self) -> int:
        return self.core_vars + self.aux_vars

    def satisfied_by(self, total: Sequence[int]) -> bool:
        """Check every clause against a complete assignment to core and aux variables."""
        return all(any((total[abs(l) - 1] == 1) == (l > 0) for l in c) for c in self.clauses)

    def without_clause(self, index: int) -> CnfPredicate:
        return CnfPredicate(
            self.core_vars, self.aux_vars, self.clauses[:index] + self.clauses[index + 1 :], self.names
        )


def default_names(core: int, aux: int) -> tuple[str, ...]:
    return tuple(f"x_{i}" for i in range(1, core + 1)) + tuple(f"y_{k}" for k in range(1, aux + 1))


def _matrix_names(rows: int, cols: int) -> tuple[str, ...]:
    return tuple(f"x_{i}_{j}" for i in range(1, rows + 1) for j in range(1, cols + 1))


def _wreath_names(n: int, m: int) -> tuple[str, ...]:
    return tuple(f"x_{i}_{j}" for j in range(1, m + 1) for i in range(1, n + 1))


def lex_leq_pair(word_a: Sequence[int], word_b: Sequence[int], aux_base: int) -> tuple[list[Clause], int]:
    """Clauses for ``word_a <=_lex word_b`` over variable lists, with prefix-equality aux vars.

    Aux ``e_j`` (numbered from ``aux_base``) is defined by ``e_j <-> e_{j-1} & (a_j <-> b_j)``
    with ``e_0`` folded to true. Positions where both words use the same variable are
    always equal and are dropped before encoding.
    """
    if len(word_a) != len(word_b):
        raise SpecError("lex comparison of words with different lengths")
    pairs = [(a, b) for a, b in zip(word_a, word_b) if a != b]
    clauses: list[Clause] = []
    if not pairs:
        return clauses, 0
    prev = None
    for j, (a, b) in enumerate(pairs):
        guard = (-prev,) if prev is not None else ()
        clauses.append(guard + (-a, b))
        if j == len(pairs) - 1:
            break
        e = aux_base + j
        clauses.append((-e, -a, b))
        clauses.append((-e, a, -b))
        if prev is not None:
            clauses.append((-e, prev))
        clauses.append((e,) + guard + (a, b))
        clauses.append((e,) + guard + (-a, -b))
        prev = e
    return clauses, len(pairs) - 1


def sbp_symmetric(n: int) -> CnfPredicate:
    """``x_1 <= x_2 <= ... <= x_n`` for Sym(n) in its natural action."""
    return CnfPredicate(n, 0, tuple((-i, i + 1) for i in range(1, n)))


def sbp_row_interchange(rows: int, cols: int) -> CnfPredicate:
    clauses: list[Clause] = []
    core = rows * cols
    aux = 0
    for i in range(1, rows):
        upper = [(i - 1) * cols + j for j in range(1, cols + 1)]
        lower = [i * cols + j for j in range(1, cols + 1)]
        cs, used = lex_leq_pair(upper, lower, core + aux + 1)
        clauses.extend(cs)
        aux += used
    names = _matrix_names(rows, cols) + default_names(0, aux)
    return CnfPredicate(core, aux, tuple(clauses), names)


def sbp_small_group(g: GeneratedGroup, cap: int = DEFAULT_GROUP_CAP) -> CnfPredicate:
    """One lex-leader constraint ``theta <=_lex theta ** x`` per non-identity element ``x``."""
    n = g.degree
    clauses: list[Clause] = []
    aux = 0
    identity = list(range(1, n + 1))
    for x in enumerate_group(g, cap):
        if x.is_identity():
            continue
        # position j of theta ** x holds theta at j ** x^-1
        right = list(inverse(x).images)
        cs, used = lex_leq_pair(identity, right, n + aux + 1)
        clauses.extend(cs)
        aux += used
    return CnfPredicate(n, aux, tuple(clauses))


def _shift(clauses: Sequence[Clause], core_map: Sequence[int], aux_offset: int, core: int) -> list[Clause]:
    out = []
    for c in clauses:
        new = []
        for lit in c:
            v = abs(lit)
            w = core_map[v - 1] if v <= core else aux_offset + (v - core)
            new.append(w if lit > 0 else -w)
        out.append(tuple(new))
    return out


def sbp_disjoint(parts: Sequence[tuple[CnfPredicate, Sequence[int]]], degree: int) -> CnfPredicate:
    """Conjunction of part predicates moved onto their supports; other points stay free."""
    used: set[int] = set()
    for pred, supp in parts:
        if len(supp) != pred.core_vars:
            raise SpecError("support size differs from the part's core size")
        for p in supp:
            if not 1 <= p <= degree:
                raise SpecError(f"support point {p} outside [1, {degree}]")
            if p in used:
                raise SpecError(f"overlapping supports at point {p}")
            used.add(p)
    clauses: list[Clause] = []
    aux = 0
    for pred, supp in parts:
        clauses.extend(_shift(pred.clauses, list(supp), degree + aux, pred.core_vars))
        aux += pred.aux_vars
    return CnfPredicate(degree, aux, tuple(clauses))


def sbp_wreath_sym(gamma: CnfPredicate, m: int) -> CnfPredicate:
    """Base predicate on every part plus the lex chain ``w_1 <= ... <= w_m`` over part words."""
    if m < 1:
        raise SpecError("wreath top degree must be positive")
    n = gamma.core_vars
    core = n * m
    clauses: list[Clause] = []
    aux = 0
    for j in range(m):
        clauses.extend(_shift(gamma.clauses, range(j * n + 1, j * n + n + 1), core + aux, n))
        aux += gamma.aux_vars
    for j in range(m - 1):
        left = list(range(j * n + 1, j * n + n + 1))
        right = list(range((j + 1) * n + 1, (j + 1) * n + n + 1))
        cs, used = lex_leq_pair(left, right, core + aux + 1)
        clauses.extend(cs)
        aux += used
    names = _wreath_names(n, m) + default_names(0, aux)
    return CnfPredicate(core, aux, tuple(clauses), names)


def sbp_tree(t: Tree) -> CnfPredicate:
    return sbp_from_spec(tree_aut_decompose(t))


def sbp_from_spec(spec: GroupSpec, cap: int = DEFAULT_GROUP_CAP) -> CnfPredicate:
    """Structural construction where one exists, else the per-element fallback under ``cap``."""
    if isinstance(spec, Natural):
        return sbp_symmetric(spec.n)
    if isinstance(spec, Trivial):
        return CnfPredicate(spec.degree, 0, ())
    if isinstance(spec, RowInterchange):
        return sbp_row_interchange(spec.rows, spec.cols)
    if isinstance(spec, DisjointProduct):
        return sbp_disjoint([(sbp_from_spec(p, cap), s) for p, s in spec.parts], spec.degree)
    if isinstance(spec, Wreath) and isinstance(spec.top, Natural):
        return sbp_wreath_sym(sbp_from_spec(spec.base, cap), spec.top.n)
    if isinstance(spec, TreeAut):
        return sbp_tree(spec.tree)
    if isinstance(spec, (Johnson, RowColumn, Wreath, Explicit)):
        try:
            return sbp_small_group(realize(spec), cap)
        except CapExceeded as exc:
            raise Intractable(
                f"{type(spec).__name__} group exceeds the per-element cap ({exc}); no polynomial "
                "construction is provided for this family"
            ) from None
    raise SpecError(f"unknown group spec {spec!r}")


# --------------------------------------------------------------------------- DIMACS


def to_dimacs(p: CnfPredicate) -> str:
    lines = [f"c core-vars {p.core_vars}", f"c aux-vars {p.aux_vars}"]
    lines += [f"c map {v} {name}" for v, name in enumerate(p.names, start=1)]
    lines.append(f"p cnf {p.total_vars} {len(p.clauses)}")
    lines += [" ".join(map(str, c)) + " 0" for c in p.clauses]
    return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> CnfPredicate:
    core = aux = None
    names: dict[int, str] = {}
    header = None
    clauses: list[Clause] = []
    pending: list[int] = []
    for raw in text.splitlines():
        tokens = raw.split()
        if not tokens:
            continue
        if tokens[0] == "c":
            if len(tokens) == 3 and tokens[1] == "core-vars":
                core = int(tokens[2])
            elif len(tokens) == 3 and tokens[1] == "aux-vars":
                aux = int(tokens[2])
            elif len(tokens) == 4 and tokens[1] == "map":
                names[int(tokens[2])] = tokens[3]
            continue
        if tokens[0] == "p":
            if len(tokens) != 4 or tokens[1] != "cnf":
                raise SpecError("expected 'p cnf <vars> <clauses>'")
            header = (int(tokens[2]), int(tokens[3]))
            continue
        try:
            lits = [int(t) for t in tokens]
        except ValueError:
            raise SpecError(f"bad clause line {raw!r}") from None
        for lit in lits:
            if lit == 0:
                clauses.append(tuple(pending))
                pending = []
            else:
                pending.append(lit)
    if header is None:
        raise SpecError("missing 'p cnf' header")
    if pending:
        raise SpecError("last clause is not terminated by 0")
    total, count = header
    if count != len(clauses):
        raise SpecError(f"header announces {count} clauses, file has {len(clauses)}")
    if core is None:
        core = total - (aux or 0)
    if aux is None:
        aux = total - core
    if core + aux != total:
        raise SpecError("core-vars + aux-vars disagrees with the header")
    name_list = tuple(names.get(v, "") for v in range(1, total + 1))
    if not all(name_list):
        name_list = ()
    return CnfPredicate(core, aux, tuple(clauses), name_list)
