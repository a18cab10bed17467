"""Desk-scale graph (non-)isomorphism demos built on complete symmetry breaking oracles."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable

from .circuit import PredicateEvaluator, gni_cert_search, lexmin_canon_eval
from .errors import CapExceeded, OracleIncomplete, SpecError
from .groups import (
    Graph,
    Johnson,
    RelationalStructure,
    RowColumn,
    graph_to_bipartite_matrix,
    graph_to_johnson_assignment,
    realize,
    row_column_element,
    split_row_column,
)
from .perm import DEFAULT_GROUP_CAP, Assignment, Permutation, act_assignment

BRUTE_FORCE_MAX_VERTICES = 8


def _find_isomorphism(
    size: int, edges1: Iterable[tuple[int, ...]], edges2: Iterable[tuple[int, ...]]
) -> Permutation | None:
    """Backtracking search for a bijection on ``[size]`` mapping the set ``edges1`` onto ``edges2``.

    Only degree-preserving maps are tried; a partial map is pruned as soon as some edge
    with all points assigned has no image edge.
    """
    e1 = [tuple(sorted(e)) for e in edges1]
    target = frozenset(tuple(sorted(e)) for e in edges2)
    if len(e1) != len(target):
        return None
    deg1 = Counter(x for e in e1 for x in e)
    deg2 = Counter(x for e in target for x in e)
    if sorted(deg1[v] for v in range(1, size + 1)) != sorted(deg2[v] for v in range(1, size + 1)):
        return None
    # edges are checked once their last point (in search order) is placed
    order = sorted(range(1, size + 1), key=lambda v: -deg1[v])
    position = {v: i for i, v in enumerate(order)}
    closing: dict[int, list[tuple[int, ...]]] = {v: [] for v in order}
    for e in e1:
        closing[max(e, key=position.__getitem__)].append(e)
    image: dict[int, int] = {}
    used: set[int] = set()

    def extend(i: int) -> bool:
        if i == size:
            return True
        v = order[i]
        for w in range(1, size + 1):
            if w in used or deg2[w] != deg1[v]:
                continue
            image[v] = w
            if all(tuple(sorted(image[x] for x in e)) in target for e in closing[v]):
                used.add(w)
                if extend(i + 1):
                    return True
                used.discard(w)
            del image[v]
        return False

    if not extend(0):
        return None
    return Permutation(tuple(image[v] for v in range(1, size + 1)))


def graph_iso_bruteforce(g1: Graph, g2: Graph) -> Permutation | None:
    """An isomorphism ``phi`` with ``g1.relabel(phi) == g2``, or None when the graphs are not isomorphic."""
    if g1.vertex_count > BRUTE_FORCE_MAX_VERTICES or g2.vertex_count > BRUTE_FORCE_MAX_VERTICES:
        raise CapExceeded(f"brute-force isomorphism is limited to {BRUTE_FORCE_MAX_VERTICES} vertices")
    if g1.vertex_count != g2.vertex_count:
        return None
    return _find_isomorphism(g1.vertex_count, g1.edges, g2.edges)


def relational_iso_bruteforce(r1: RelationalStructure, r2: RelationalStructure) -> Permutation | None:
    if r1.arity != r2.arity or r1.universe_size != r2.universe_size:
        return None
    return _find_isomorphism(r1.universe_size, r1.hyperedges, r2.hyperedges)


# --------------------------------------------------------------------------- row-column GNI verifier


@dataclass(frozen=True)
class GniCertificate:
    """Row and edge-column permutations for each of the two incidence matrices."""

    sigma: tuple[Permutation, Permutation]
    pi: tuple[Permutation, Permutation]

    def __post_init__(self) -> None:
        if self.sigma[0].degree != self.pi[0].degree or self.sigma[1].degree != self.pi[1].degree:
            raise SpecError("certificate halves act on different matrix shapes")


def _same_shape(g1: Graph, g2: Graph) -> bool:
    return g1.vertex_count == g2.vertex_count and g1.edge_count == g2.edge_count


def _rc_group(n: int, m: int, cap: int):
    if math.factorial(n) * math.factorial(m) > cap:
        raise CapExceeded(f"row-column group of a {n}x{m} matrix has more than {cap} elements")
    return realize(RowColumn(n, m))


def rc_gni_verify(g1: Graph, g2: Graph, cert: GniCertificate, sbp: PredicateEvaluator) -> bool:
    """Accept (declare non-isomorphic) iff both permuted incidence matrices pass ``sbp`` and differ."""
    if not _same_shape(g1, g2) or g1.edge_count == 0:
        return False
    n, m = g1.vertex_count, g1.edge_count
    if cert.sigma[0].degree != n or cert.sigma[1].degree != m:
        return False
    left = act_assignment(graph_to_bipartite_matrix(g1), row_column_element(*cert.sigma))
    right = act_assignment(graph_to_bipartite_matrix(g2), row_column_element(*cert.pi))
    if not (sbp(left) and sbp(right)):
        return False
    return left != right


def default_rc_sbp(n: int, m: int, cap: int = DEFAULT_GROUP_CAP) -> PredicateEvaluator:
    return lexmin_canon_eval(_rc_group(n, m, cap), cap)


def rc_gni_prove(
    g1: Graph, g2: Graph, sbp: PredicateEvaluator | None = None, cap: int = DEFAULT_GROUP_CAP
) -> GniCertificate | None:
    """Certificate of non-isomorphism from the ``sbp``-accepted forms of both incidence matrices."""
    if not _same_shape(g1, g2) or g1.edge_count == 0:
        raise SpecError("the row-column verifier needs equal shapes with at least one edge")
    n, m = g1.vertex_count, g1.edge_count
    group = _rc_group(n, m, cap)
    if sbp is None:
        sbp = lexmin_canon_eval(group, cap)
    found = []
    for g in (g1, g2):
        theta = graph_to_bipartite_matrix(g)
        x = gni_cert_search(sbp, group, theta, cap)
        if x is None:
            raise OracleIncomplete("the predicate accepts nothing in the orbit of an incidence matrix")
        found.append((x, act_assignment(theta, x)))
    if found[0][1] == found[1][1]:
        return None
    return GniCertificate(split_row_column(found[0][0], n, m), split_row_column(found[1][0], n, m))


# --------------------------------------------------------------------------- Johnson canonization


def _johnson_group(k: int, cap: int):
    if math.factorial(k) > cap:
        raise CapExceeded(f"Sym({k}) has more than {cap} elements")
    return realize(Johnson(k, 2))


def johnson_canonical(g: Graph, cap: int = DEFAULT_GROUP_CAP) -> Assignment:
    """Lex-min edge indicator word over all relabelings of ``g``."""
    k = g.vertex_count
    theta = graph_to_johnson_assignment(g, k)
    if k <= 2:
        # at most one vertex pair: every orbit is a single point
        return theta
    group = _johnson_group(k, cap)
    x = gni_cert_search(lexmin_canon_eval(group, cap), group, theta, cap)
    assert x is not None
    return act_assignment(theta, x)
