"""Structured permutation-group families, tree automorphism decomposition, and the
graph / relational-structure encodings used by the reductions.

Flattening conventions (shared with the CNF generators):

* matrices (row interchange, row-column): ``x_ij`` is point ``(i - 1) * cols + j``;
* wreath products of a base on ``[n]`` by a top on ``[m]``: ``x_ij`` (entry ``i`` of
  part ``j``) is point ``(j - 1) * n + i``, so parts are contiguous;
* Johnson domains: ``t``-subsets of ``[k]`` as sorted tuples in lexicographic order.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Iterable, Sequence

from .errors import SpecError
from .perm import Assignment, GeneratedGroup, Permutation

# --------------------------------------------------------------------------- specs


class GroupSpec:
    """Algebraic description of a permutation group; see the concrete subclasses."""

    @property
    def domain_size(self) -> int:
        raise NotImplementedError


@dataclass(frozen=True)
class Natural(GroupSpec):
    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise SpecError("Natural(n) needs n >= 1")

    @property
    def domain_size(self) -> int:
        return self.n


@dataclass(frozen=True)
class Trivial(GroupSpec):
    degree: int

    def __post_init__(self) -> None:
        if self.degree < 1:
            raise SpecError("Trivial(degree) needs degree >= 1")

    @property
    def domain_size(self) -> int:
        return self.degree


@dataclass(frozen=True)
class RowInterchange(GroupSpec):
    rows: int
    cols: int

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise SpecError("matrix dimensions must be positive")

    @property
    def domain_size(self) -> int:
        return self.rows * self.cols


@dataclass(frozen=True)
class RowColumn(GroupSpec):
    rows: int
    cols: int

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise SpecError("matrix dimensions must be positive")

    @property
    def domain_size(self) -> int:
        return self.rows * self.cols


@dataclass(frozen=True)
class Johnson(GroupSpec):
    k: int
    t: int

    def __post_init__(self) -> None:
        if not 1 <= self.t <= self.k - 1:
            raise SpecError(f"Johnson(k={self.k}, t={self.t}) needs 1 <= t <= k - 1")

    @property
    def domain_size(self) -> int:
        return math.comb(self.k, self.t)


@dataclass(frozen=True)
class Wreath(GroupSpec):
    base: GroupSpec
    top: GroupSpec

    @property
    def domain_size(self) -> int:
        return self.base.domain_size * self.top.domain_size


@dataclass(frozen=True)
class DisjointProduct(GroupSpec):
    """Direct product of ``parts``; part ``(spec, support)`` acts on the listed points,
    local point ``p`` of ``spec`` being global point ``support[p - 1]``."""

    parts: tuple[tuple[GroupSpec, tuple[int, ...]], ...]
    degree: int

    def __post_init__(self) -> None:
        parts = tuple((spec, tuple(supp)) for spec, supp in self.parts)
        object.__setattr__(self, "parts", parts)
        used: set[int] = set()
        for spec, supp in parts:
            if len(supp) != spec.domain_size:
                raise SpecError(
                    f"part support has {len(supp)} points but the part acts on {spec.domain_size}"
                )
            for p in supp:
                if not 1 <= p <= self.degree:
                    raise SpecError(f"support point {p} outside [1, {self.degree}]")
                if p in used:
                    raise SpecError(f"parts overlap at point {p}")
                used.add(p)

    @property
    def domain_size(self) -> int:
        return self.degree


@dataclass(frozen=True)
class TreeAut(GroupSpec):
    tree: Tree

    @property
    def domain_size(self) -> int:
        return self.tree.vertex_count


@dataclass(frozen=True)
class Explicit(GroupSpec):
    degree: int
    generators: tuple[Permutation, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "generators", tuple(self.generators))
        for g in self.generators:
            if g.degree != self.degree:
                raise SpecError(f"generator {g} does not have degree {self.degree}")

    @property
    def domain_size(self) -> int:
        return self.degree


# --------------------------------------------------------------------------- structures


def _normalize_edges(vertex_count: int, edges: Iterable[Sequence[int]]) -> tuple[tuple[int, int], ...]:
    out = []
    for e in edges:
        u, v = (int(x) for x in e)
        if u == v:
            raise SpecError(f"loop at vertex {u}")
        if not (1 <= u <= vertex_count and 1 <= v <= vertex_count):
            raise SpecError(f"edge {{{u}, {v}}} outside [1, {vertex_count}]")
        out.append((min(u, v), max(u, v)))
    if len(set(out)) != len(out):
        raise SpecError("duplicate edge")
    return tuple(sorted(out))


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on ``[vertex_count]``; edges stored as sorted pairs in lex order."""

    vertex_count: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        if self.vertex_count < 1:
            raise SpecError("graph needs at least one vertex")
        object.__setattr__(self, "edges", _normalize_edges(self.vertex_count, self.edges))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return sum(v in e for e in self.edges)

    def relabel(self, p: Permutation) -> Graph:
        """The graph with vertex ``v`` renamed ``v ** p``."""
        return Graph(self.vertex_count, [(p(u), p(v)) for u, v in self.edges])


@dataclass(frozen=True)
class Tree:
    vertex_count: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        if self.vertex_count < 1:
            raise SpecError("tree needs at least one vertex")
        edges = _normalize_edges(self.vertex_count, self.edges)
        object.__setattr__(self, "edges", edges)
        if len(edges) != self.vertex_count - 1:
            raise SpecError(f"a tree on {self.vertex_count} vertices has {self.vertex_count - 1} edges")
        adj = self.adjacency()
        seen = {1}
        stack = [1]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != self.vertex_count:
            raise SpecError("tree is not connected")

    def adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {v: [] for v in range(1, self.vertex_count + 1)}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj


@dataclass(frozen=True)
class RelationalStructure:
    """Symmetric ``arity``-uniform relation on ``[universe_size]``, stored as sorted tuples."""

    universe_size: int
    arity: int
    hyperedges: frozenset[tuple[int, ...]] = frozenset()

    def __post_init__(self) -> None:
        normalized = set()
        for e in self.hyperedges:
            s = tuple(sorted(e))
            if len(set(s)) != self.arity or len(s) != self.arity:
                raise SpecError(f"hyperedge {e} does not have {self.arity} distinct elements")
            if not all(1 <= x <= self.universe_size for x in s):
                raise SpecError(f"hyperedge {e} leaves the universe")
            normalized.add(s)
        object.__setattr__(self, "hyperedges", frozenset(normalized))

    def degree(self, u: int) -> int:
        return sum(u in e for e in self.hyperedges)


# --------------------------------------------------------------------------- realization


@lru_cache(maxsize=None)
def johnson_domain(k: int, t: int) -> tuple[tuple[int, ...], ...]:
    return tuple(itertools.combinations(range(1, k + 1), t))


def _induced_on_subsets(pi: Permutation, k: int, t: int) -> Permutation:
    domain = johnson_domain(k, t)
    index = {s: i for i, s in enumerate(domain, start=1)}
    return Permutation(tuple(index[tuple(sorted(pi(a) for a in s))] for s in domain))


def _natural_generators(n: int) -> list[Permutation]:
    if n < 2:
        return []
    gens = [Permutation.from_cycles([(1, 2)], n)]
    if n > 2:
        gens.append(Permutation.from_cycles([tuple(range(1, n + 1))], n))
    return gens


@lru_cache(maxsize=1 << 14)
def _row_column_element(row: Permutation | None, col: Permutation | None, rows: int, cols: int) -> Permutation:
    images = []
    for i in range(1, rows + 1):
        for j in range(1, cols + 1):
            ii = row(i) if row is not None else i
            jj = col(j) if col is not None else j
            images.append((ii - 1) * cols + jj)
    return Permutation(tuple(images))


def row_column_element(row: Permutation, col: Permutation) -> Permutation:
    """The matrix permutation moving entry ``(i, j)`` to ``(i ** row, j ** col)``."""
    return _row_column_element(row, col, row.degree, col.degree)


def split_row_column(g: Permutation, rows: int, cols: int) -> tuple[Permutation, Permutation]:
    """Inverse of :func:`row_column_element`; raises SpecError if ``g`` is not of that form."""
    if g.degree != rows * cols:
        raise SpecError("permutation degree does not match the matrix shape")
    row = [0] * rows
    col = [0] * cols
    for i in range(rows):
        row[i] = (g(i * cols + 1) - 1) // cols + 1
    for j in range(cols):
        col[j] = (g(j + 1) - 1) % cols + 1
    try:
        r, c = Permutation(tuple(row)), Permutation(tuple(col))
    except SpecError:
        raise SpecError(f"{g} is not a row-column permutation") from None
    if row_column_element(r, c) != g:
        raise SpecError(f"{g} is not a row-column permutation")
    return r, c


def _top_orbit_minima(top: GeneratedGroup) -> list[int]:
    parent = list(range(top.degree + 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in top.generators:
        for i in range(1, top.degree + 1):
            a, b = find(i), find(g(i))
            if a != b:
                parent[max(a, b)] = min(a, b)
    return sorted({find(i) for i in range(1, top.degree + 1)})


def _embed(g: Permutation, support: Sequence[int], degree: int) -> Permutation:
    images = list(range(1, degree + 1))
    for local, point in enumerate(support, start=1):
        images[point - 1] = support[g(local) - 1]
    return Permutation(tuple(images))


def _product(values: Iterable[int | None]) -> int | None:
    out = 1
    for v in values:
        if v is None:
            return None
        out *= v
    return out


def realize(spec: GroupSpec) -> GeneratedGroup:
    """Generators for ``spec`` on its domain, following the module's flattening conventions."""
    if isinstance(spec, Natural):
        return GeneratedGroup(
            spec.n, tuple(_natural_generators(spec.n)), known_order=math.factorial(spec.n), symmetric=True
        )
    if isinstance(spec, Trivial):
        return GeneratedGroup.trivial(spec.degree)
    if isinstance(spec, (RowInterchange, RowColumn)):
        n, m = spec.rows, spec.cols
        gens = [_row_column_element(r, None, n, m) for r in _natural_generators(n)]
        order = math.factorial(n)
        if isinstance(spec, RowColumn):
            gens += [_row_column_element(None, c, n, m) for c in _natural_generators(m)]
            order *= math.factorial(m)
        return GeneratedGroup(n * m, tuple(gens), known_order=order)
    if isinstance(spec, Johnson):
        gens = [_induced_on_subsets(p, spec.k, spec.t) for p in _natural_generators(spec.k)]
        gens = list(dict.fromkeys(gens))
        return GeneratedGroup(spec.domain_size, tuple(gens), known_order=math.factorial(spec.k))
    if isinstance(spec, Wreath):
        base, top = realize(spec.base), realize(spec.top)
        n, m = base.degree, top.degree
        gens = []
        # base generators inside the first part of every top orbit, so intransitive tops
        # still yield the full base group G^m
        for j in _top_orbit_minima(top):
            for g in base.generators:
                images = list(range(1, n * m + 1))
                for i in range(1, n + 1):
                    images[(j - 1) * n + i - 1] = (j - 1) * n + g(i)
                gens.append(Permutation(tuple(images)))
        for h in top.generators:
            gens.append(
                Permutation(tuple((h(j) - 1) * n + i for j in range(1, m + 1) for i in range(1, n + 1)))
            )
        order = None
        if base.known_order is not None and top.known_order is not None:
            order = base.known_order**m * top.known_order
        return GeneratedGroup(n * m, tuple(gens), known_order=order)
    if isinstance(spec, DisjointProduct):
        gens = []
        orders = []
        for part, supp in spec.parts:
            sub = realize(part)
            gens.extend(_embed(g, supp, spec.degree) for g in sub.generators)
            orders.append(sub.known_order)
        return GeneratedGroup(spec.degree, tuple(gens), known_order=_product(orders))
    if isinstance(spec, TreeAut):
        return realize(tree_aut_decompose(spec.tree))
    if isinstance(spec, Explicit):
        return GeneratedGroup(spec.degree, spec.generators)
    raise SpecError(f"unknown group spec {spec!r}")


# --------------------------------------------------------------------------- trees


def tree_centers(tree: Tree) -> list[int]:
    """The one or two central vertices, by repeatedly stripping leaves."""
    adj = tree.adjacency()
    degree = {v: len(ws) for v, ws in adj.items()}
    remaining = set(adj)
    leaves = [v for v, d in degree.items() if d <= 1]
    while len(remaining) > 2:
        nxt = []
        for leaf in leaves:
            remaining.discard(leaf)
            for w in adj[leaf]:
                if w in remaining:
                    degree[w] -= 1
                    if degree[w] == 1:
                        nxt.append(w)
        leaves = nxt
    return sorted(remaining)


class _RootedDecomposer:
    def __init__(self, tree: Tree) -> None:
        self.adj = tree.adjacency()
        self._codes: dict[tuple[int, int], str] = {}

    def code(self, v: int, parent: int) -> str:
        key = (v, parent)
        if key not in self._codes:
            kids = sorted(self.code(c, v) for c in self.adj[v] if c != parent)
            self._codes[key] = "(" + "".join(kids) + ")"
        return self._codes[key]

    def rooted(self, v: int, parent: int) -> tuple[GroupSpec, list[int]]:
        """Group of the subtree at ``v`` (``v`` fixed) over its canonical vertex order.

        Equal-code sibling subtrees get identical specs and orders whose position-wise
        correspondence is an isomorphism, which is what the wreath product needs.
        """
        kids = sorted((self.code(c, v), c) for c in self.adj[v] if c != parent)
        order = [v]
        parts: list[tuple[GroupSpec, tuple[int, ...]]] = []
        for _, group in itertools.groupby(kids, key=lambda kc: kc[0]):
            members = [c for _, c in group]
            subs = [self.rooted(c, v) for c in members]
            start = len(order) + 1
            for _, sub_order in subs:
                order.extend(sub_order)
            supp = tuple(range(start, len(order) + 1))
            child_spec = subs[0][0]
            if len(members) > 1:
                parts.append((Wreath(child_spec, Natural(len(members))), supp))
            elif not isinstance(child_spec, Trivial):
                parts.append((child_spec, supp))
        return _disjoint_or_trivial(parts, len(order)), order


def _disjoint_or_trivial(parts: list[tuple[GroupSpec, tuple[int, ...]]], degree: int) -> GroupSpec:
    if not parts:
        return Trivial(degree)
    return DisjointProduct(tuple(parts), degree)


def _relabel_parts(spec: GroupSpec, order: Sequence[int]) -> list[tuple[GroupSpec, tuple[int, ...]]]:
    """Express a spec over local positions as parts over the vertex labels ``order``."""
    if isinstance(spec, Trivial):
        return []
    if isinstance(spec, DisjointProduct):
        return [(part, tuple(order[p - 1] for p in supp)) for part, supp in spec.parts]
    return [(spec, tuple(order))]


def tree_aut_decompose(tree: Tree) -> GroupSpec:
    """Aut(tree) on its vertex set as nested disjoint products and ``Wreath(., Natural(s))``.

    Rooted at the center (or central edge); children are grouped by AHU canonical code.
    """
    n = tree.vertex_count
    if n == 1:
        return Trivial(1)
    dec = _RootedDecomposer(tree)
    centers = tree_centers(tree)
    if len(centers) == 1:
        spec, order = dec.rooted(centers[0], 0)
        return _disjoint_or_trivial(_relabel_parts(spec, order), n)
    u, w = centers
    spec_u, order_u = dec.rooted(u, w)
    spec_w, order_w = dec.rooted(w, u)
    if dec.code(u, w) == dec.code(w, u):
        return DisjointProduct(((Wreath(spec_u, Natural(2)), tuple(order_u + order_w)),), n)
    return _disjoint_or_trivial(_relabel_parts(spec_u, order_u) + _relabel_parts(spec_w, order_w), n)


# --------------------------------------------------------------------------- encodings


def graph_to_bipartite_matrix(g: Graph) -> Assignment:
    """Vertex-edge incidence matrix, ``n x m`` row-major, edges in lex order."""
    if not g.edges:
        raise SpecError("the incidence matrix needs at least one edge")
    m = g.edge_count
    bits = [0] * (g.vertex_count * m)
    for j, (u, v) in enumerate(g.edges):
        bits[(u - 1) * m + j] = 1
        bits[(v - 1) * m + j] = 1
    return tuple(bits)


def graph_to_johnson_assignment(g: Graph, k: int) -> Assignment:
    if g.vertex_count != k:
        raise SpecError(f"graph has {g.vertex_count} vertices, expected {k}")
    edges = set(g.edges)
    return tuple(int(s in edges) for s in johnson_domain(k, 2))


def johnson_assignment_to_graph(theta: Sequence[int], k: int) -> Graph:
    domain = johnson_domain(k, 2)
    if len(theta) != len(domain):
        raise SpecError("assignment length does not match C(k, 2)")
    return Graph(k, [s for s, b in zip(domain, theta) if b])


def graph_to_relational(g: Graph, t: int) -> RelationalStructure:
    """t-uniform structure on ``r_1..r_n, v_1..v_{t-2}, a, b`` (points ``1..n+t`` in that order)."""
    if t < 2:
        raise SpecError("arity must be at least 2")
    if not g.edges:
        raise SpecError("graph needs at least one edge")
    n = g.vertex_count
    bogus = tuple(range(n + 1, n + t - 1))
    a, b = n + t - 1, n + t
    non_isolated = sorted({x for e in g.edges for x in e})
    hyper = {(u, w) + bogus for u, w in g.edges}
    hyper |= {(u,) + bogus + (a,) for u in non_isolated}
    hyper.add(bogus + (a, b))
    return RelationalStructure(n + t, t, frozenset(hyper))


def relational_to_assignment(r: RelationalStructure) -> Assignment:
    return tuple(int(s in r.hyperedges) for s in johnson_domain(r.universe_size, r.arity))


def assignment_to_relational(theta: Sequence[int], k: int, t: int) -> RelationalStructure:
    domain = johnson_domain(k, t)
    if len(theta) != len(domain):
        raise SpecError("assignment length does not match C(k, t)")
    return RelationalStructure(k, t, frozenset(s for s, bit in zip(domain, theta) if bit))


# --------------------------------------------------------------------------- file formats


def _parse_edge_text(text: str) -> tuple[int, list[tuple[int, int]]]:
    lines = [ln.split() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln[0].startswith(("c", "#"))]
    if not lines:
        raise SpecError("empty graph file")
    try:
        if lines[0][0] == "p":
            if len(lines[0]) != 4 or lines[0][1] not in ("edge", "col"):
                raise SpecError("expected 'p edge <n> <m>'")
            n, m = int(lines[0][2]), int(lines[0][3])
            edges = []
            for ln in lines[1:]:
                if ln[0] != "e" or len(ln) != 3:
                    raise SpecError(f"bad DIMACS edge line {' '.join(ln)!r}")
                edges.append((int(ln[1]), int(ln[2])))
        else:
            if len(lines[0]) != 2:
                raise SpecError("expected header line '<n> <m>'")
            n, m = int(lines[0][0]), int(lines[0][1])
            edges = []
            for ln in lines[1:]:
                if len(ln) != 2:
                    raise SpecError(f"bad edge line {' '.join(ln)!r}")
                edges.append((int(ln[0]), int(ln[1])))
    except ValueError as exc:
        raise SpecError(f"non-integer token in graph file: {exc}") from None
    if len(edges) != m:
        raise SpecError(f"header announces {m} edges, file has {len(edges)}")
    return n, edges


def parse_graph(text: str) -> Graph:
    """Read a graph in edge-list (``n m`` header) or DIMACS (``p edge n m``) format."""
    n, edges = _parse_edge_text(text)
    return Graph(n, edges)


def parse_tree(text: str) -> Tree:
    n, edges = _parse_edge_text(text)
    return Tree(n, edges)


def format_graph(g: Graph) -> str:
    return f"{g.vertex_count} {g.edge_count}\n" + "".join(f"{u} {v}\n" for u, v in g.edges)


def spec_from_dict(doc: dict[str, Any]) -> GroupSpec:
    try:
        kind = doc["kind"]
        if kind == "natural":
            return Natural(int(doc["n"]))
        if kind == "trivial":
            return Trivial(int(doc["degree"]))
        if kind == "row_interchange":
            return RowInterchange(int(doc["rows"]), int(doc["cols"]))
        if kind == "row_column":
            return RowColumn(int(doc["rows"]), int(doc["cols"]))
        if kind == "johnson":
            return Johnson(int(doc["k"]), int(doc["t"]))
        if kind == "wreath":
            return Wreath(spec_from_dict(doc["base"]), spec_from_dict(doc["top"]))
        if kind == "disjoint":
            parts = []
            for item in doc["parts"]:
                sub = spec_from_dict(item["spec"])
                if "support" in item:
                    supp = tuple(int(p) for p in item["support"])
                else:
                    offset = int(item.get("offset", 0))
                    supp = tuple(range(offset + 1, offset + sub.domain_size + 1))
                parts.append((sub, supp))
            degree = doc.get("degree")
            if degree is None:
                degree = max((p for _, s in parts for p in s), default=0)
            return DisjointProduct(tuple(parts), int(degree))
        if kind == "tree":
            edges = [tuple(e) for e in doc.get("edges", [])]
            n = int(doc.get("vertices", max((max(e) for e in edges), default=1)))
            return TreeAut(Tree(n, edges))
        if kind == "explicit":
            degree = int(doc["degree"])
            return Explicit(degree, tuple(Permutation.parse(s, degree) for s in doc.get("generators", [])))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, SpecError):
            raise
        raise SpecError(f"malformed group spec: {exc!r}") from None
    raise SpecError(f"unknown group spec kind {doc.get('kind')!r}")


def spec_to_dict(spec: GroupSpec) -> dict[str, Any]:
    if isinstance(spec, Natural):
        return {"kind": "natural", "n": spec.n}
    if isinstance(spec, Trivial):
        return {"kind": "trivial", "degree": spec.degree}
    if isinstance(spec, RowInterchange):
        return {"kind": "row_interchange", "rows": spec.rows, "cols": spec.cols}
    if isinstance(spec, RowColumn):
        return {"kind": "row_column", "rows": spec.rows, "cols": spec.cols}
    if isinstance(spec, Johnson):
        return {"kind": "johnson", "k": spec.k, "t": spec.t}
    if isinstance(spec, Wreath):
        return {"kind": "wreath", "base": spec_to_dict(spec.base), "top": spec_to_dict(spec.top)}
    if isinstance(spec, DisjointProduct):
        return {
            "kind": "disjoint",
            "degree": spec.degree,
            "parts": [{"spec": spec_to_dict(p), "support": list(s)} for p, s in spec.parts],
        }
    if isinstance(spec, TreeAut):
        return {"kind": "tree", "vertices": spec.tree.vertex_count, "edges": [list(e) for e in spec.tree.edges]}
    if isinstance(spec, Explicit):
        return {"kind": "explicit", "degree": spec.degree, "generators": [str(g) for g in spec.generators]}
    raise SpecError(f"unknown group spec {spec!r}")


def parse_spec(text: str) -> GroupSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise SpecError("group spec must be a JSON object")
    return spec_from_dict(doc)


def format_spec(spec: GroupSpec) -> str:
    return json.dumps(spec_to_dict(spec), sort_keys=True) + "\n"
