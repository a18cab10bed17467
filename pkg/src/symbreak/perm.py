"""Permutations, finitely generated permutation groups and their action on binary words.

Points are 1-based throughout. Permutations compose left to right: in
``compose(p, q)`` the permutation ``p`` is applied first. Groups act on
assignments from the right, ``(theta ** g)[j] = theta[j ** g^-1]``, so that
``act_assignment(act_assignment(theta, g), h) == act_assignment(theta, compose(g, h))``.
"""

from __future__ import annotations

import itertools
import math
import re
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import CapExceeded, NotSubgroup, SpecError

DEFAULT_GROUP_CAP = 2_000_000
DEFAULT_BIT_CAP = 22

#: A complete 0/1 assignment; position ``i`` (0-based) holds the value of point ``i + 1``.
Assignment = tuple[int, ...]

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


@dataclass(frozen=True)
class Permutation:
    """A permutation of ``[n]`` stored as its image sequence, ``images[i - 1] = i ** g``."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        images = tuple(int(x) for x in self.images)
        object.__setattr__(self, "images", images)
        if not images:
            raise SpecError("permutation degree must be positive")
        if sorted(images) != list(range(1, len(images) + 1)):
            raise SpecError(f"images {images} do not form a permutation of [{len(images)}]")

    @classmethod
    def identity(cls, degree: int) -> Permutation:
        return cls(tuple(range(1, degree + 1)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> Permutation:
        images = list(range(1, degree + 1))
        seen: set[int] = set()
        for cycle in cycles:
            for a, b in zip(cycle, list(cycle[1:]) + list(cycle[:1])):
                if not 1 <= a <= degree:
                    raise SpecError(f"point {a} outside [1, {degree}]")
                if a in seen:
                    raise SpecError(f"point {a} occurs twice in cycle notation")
                seen.add(a)
                images[a - 1] = b
        return cls(tuple(images))

    @classmethod
    def parse(cls, text: str, degree: int | None = None) -> Permutation:
        """Parse disjoint-cycle notation such as ``"(1 2 3)(4 5)"``; ``"()"`` is the identity."""
        stripped = re.sub(r"\s+", " ", text.strip())
        if _CYCLE_RE.sub("", stripped).strip():
            raise SpecError(f"cannot parse permutation {text!r}")
        cycles = []
        for body in _CYCLE_RE.findall(stripped):
            points = [int(tok) for tok in body.replace(",", " ").split()]
            if points:
                cycles.append(points)
        largest = max((p for c in cycles for p in c), default=1)
        if degree is None:
            degree = largest
        elif largest > degree:
            raise SpecError(f"point {largest} exceeds degree {degree}")
        return cls.from_cycles(cycles, degree)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point - 1]

    def __mul__(self, other: Permutation) -> Permutation:
        return compose(self, other)

    def __invert__(self) -> Permutation:
        return inverse(self)

    def is_identity(self) -> bool:
        return all(img == i for i, img in enumerate(self.images, start=1))

    def cycles(self) -> list[tuple[int, ...]]:
        """Non-trivial cycles, each starting at its smallest point, ordered by that point."""
        seen = set()
        out = []
        for start in range(1, self.degree + 1):
            if start in seen:
                continue
            cycle = [start]
            seen.add(start)
            nxt = self(start)
            while nxt != start:
                cycle.append(nxt)
                seen.add(nxt)
                nxt = self(nxt)
            if len(cycle) > 1:
                out.append(tuple(cycle))
        return out

    def __str__(self) -> str:
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cycles)

    def _raw(self) -> tuple[int, ...]:
        return tuple(x - 1 for x in self.images)


def _from_raw(raw: Sequence[int]) -> Permutation:
    return Permutation(tuple(x + 1 for x in raw))


def compose(p: Permutation, q: Permutation) -> Permutation:
    """Product ``pq`` mapping ``i`` to ``(i ** p) ** q``."""
    if p.degree != q.degree:
        raise SpecError(f"degree mismatch: {p.degree} vs {q.degree}")
    return Permutation(tuple(q.images[x - 1] for x in p.images))


def inverse(p: Permutation) -> Permutation:
    images = [0] * p.degree
    for i, x in enumerate(p.images, start=1):
        images[x - 1] = i
    return Permutation(tuple(images))


def act_assignment(theta: Sequence[int], g: Permutation) -> Assignment:
    """Return ``theta ** g``: the value at point ``i`` moves to point ``i ** g``."""
    if len(theta) != g.degree:
        raise SpecError(f"assignment length {len(theta)} does not match degree {g.degree}")
    out = [0] * g.degree
    for i, x in enumerate(g.images):
        out[x - 1] = theta[i]
    return tuple(out)


def parse_bits(text: str) -> Assignment:
    text = text.strip()
    if not text or set(text) - {"0", "1"}:
        raise SpecError(f"not a binary word: {text!r}")
    return tuple(int(c) for c in text)


def format_bits(theta: Sequence[int]) -> str:
    return "".join(str(b) for b in theta)


def all_assignments(n: int) -> Iterator[Assignment]:
    """All words of ``{0,1}^n`` in ascending lexicographic order."""
    return itertools.product((0, 1), repeat=n)


def bits_to_int(theta: Sequence[int]) -> int:
    value = 0
    for b in theta:
        value = (value << 1) | b
    return value


def int_to_bits(value: int, n: int) -> Assignment:
    return tuple((value >> (n - 1 - i)) & 1 for i in range(n))


@dataclass(frozen=True)
class Partition:
    """An ordered partition of ``[m]``; cells are sorted and ordered by their minima."""

    domain_size: int
    cells: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        cells = tuple(sorted((tuple(sorted(c)) for c in self.cells), key=lambda c: c[0] if c else 0))
        if any(not c for c in cells):
            raise SpecError("partition cells must be nonempty")
        points = [p for c in cells for p in c]
        if sorted(points) != list(range(1, self.domain_size + 1)):
            raise SpecError(f"cells {cells} do not partition [{self.domain_size}]")
        object.__setattr__(self, "cells", cells)

    @classmethod
    def unit(cls, m: int) -> Partition:
        return cls(m, (tuple(range(1, m + 1)),))

    def refine(self, word: Sequence[int]) -> Partition:
        """Split every cell according to the values of ``word`` on it."""
        if len(word) != self.domain_size:
            raise SpecError("refinement word has the wrong length")
        cells = []
        for cell in self.cells:
            zeros = tuple(p for p in cell if word[p - 1] == 0)
            ones = tuple(p for p in cell if word[p - 1] == 1)
            cells.extend(c for c in (zeros, ones) if c)
        return Partition(self.domain_size, tuple(cells))


@dataclass(frozen=True)
class GeneratedGroup:
    """The permutation group generated by ``generators`` on ``[degree]``.

    ``known_order`` may be supplied by constructors that know the group order
    structurally; it lets cap checks fail without enumerating. ``symmetric``
    tags the full symmetric group in its natural action.
    """

    degree: int
    generators: tuple[Permutation, ...] = ()
    known_order: int | None = field(default=None, compare=False)
    symmetric: bool = field(default=False, compare=False)
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self) -> None:
        if self.degree < 1:
            raise SpecError("group degree must be positive")
        gens = tuple(self.generators)
        for g in gens:
            if g.degree != self.degree:
                raise SpecError(f"generator {g} has degree {g.degree}, expected {self.degree}")
        object.__setattr__(self, "generators", gens)

    @classmethod
    def trivial(cls, degree: int) -> GeneratedGroup:
        return cls(degree, (), known_order=1)

    @classmethod
    def from_elements(cls, degree: int, elements: Iterable[Permutation]) -> GeneratedGroup:
        """Wrap a known closed element set, picking a small generating subset."""
        elements = sorted(set(elements), key=lambda p: p.images)
        raw = [p._raw() for p in elements]
        gens: list[tuple[int, ...]] = []
        span = {tuple(range(degree))}
        try:
            for r in raw:
                if r not in span:
                    gens.append(r)
                    span = _closure(gens, degree, len(raw))
        except CapExceeded:
            raise SpecError("element set is not closed under composition") from None
        group = cls(degree, tuple(_from_raw(g) for g in gens), known_order=len(raw))
        if len(span) != len(raw):
            raise SpecError("element set is not closed under composition")
        group._cache["elements"] = elements
        return group

    def elements(self, cap: int = DEFAULT_GROUP_CAP) -> list[Permutation]:
        return enumerate_group(self, cap)

    def order(self, cap: int = DEFAULT_GROUP_CAP) -> int:
        if self.known_order is not None:
            return self.known_order
        return len(enumerate_group(self, cap))

    def _raw_generators(self) -> list[tuple[int, ...]]:
        return [g._raw() for g in self.generators]


def _closure(gens: Sequence[tuple[int, ...]], degree: int, cap: int) -> set[tuple[int, ...]]:
    ident = tuple(range(degree))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                c = tuple(map(g.__getitem__, a))
                if c not in seen:
                    seen.add(c)
                    if len(seen) > cap:
                        raise CapExceeded(f"group has more than {cap} elements")
                    nxt.append(c)
        frontier = nxt
    return seen


def _raw_elements(g: GeneratedGroup, cap: int) -> list[tuple[int, ...]]:
    cached = g._cache.get("raw")
    if cached is not None:
        if len(cached) > cap:
            raise CapExceeded(f"group order {len(cached)} exceeds cap {cap}")
        return cached
    if g.known_order is not None and g.known_order > cap:
        raise CapExceeded(f"group order {g.known_order} exceeds cap {cap}")
    if "elements" in g._cache:
        raw = [p._raw() for p in g._cache["elements"]]
    else:
        raw = sorted(_closure(g._raw_generators(), g.degree, cap))
    g._cache["raw"] = raw
    return raw


def enumerate_group(g: GeneratedGroup, cap: int = DEFAULT_GROUP_CAP) -> list[Permutation]:
    """All elements of ``g`` sorted by image sequence. Raises CapExceeded when ``|g| > cap``."""
    raw = _raw_elements(g, cap)
    if "elements" not in g._cache:
        g._cache["elements"] = [_from_raw(r) for r in raw]
    return list(g._cache["elements"])


def _inverse_raw(g: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(g)
    for i, x in enumerate(g):
        inv[x] = i
    return tuple(inv)


def orbit_of_assignment(
    theta: Sequence[int], g: GeneratedGroup, cap: int | None = None
) -> set[Assignment]:
    """The orbit ``theta ** G`` by breadth-first closure under the generators."""
    theta = tuple(theta)
    if len(theta) != g.degree:
        raise SpecError(f"assignment length {len(theta)} does not match degree {g.degree}")
    pullbacks = [_inverse_raw(r) for r in g._raw_generators()]
    seen = {theta}
    queue = deque([theta])
    while queue:
        cur = queue.popleft()
        for pb in pullbacks:
            img = tuple(map(cur.__getitem__, pb))
            if img not in seen:
                seen.add(img)
                if cap is not None and len(seen) > cap:
                    raise CapExceeded(f"orbit has more than {cap} elements")
                queue.append(img)
    return seen


def orbit_representatives(g: GeneratedGroup, cap_bits: int = DEFAULT_BIT_CAP) -> np.ndarray:
    """Array mapping every assignment (as an integer, first point most significant)
    to the integer of the lex-minimal element of its orbit."""
    n = g.degree
    if n > cap_bits:
        raise CapExceeded(f"{n} points exceed the assignment-sweep cap of {cap_bits} bits")
    size = 1 << n
    x = np.arange(size, dtype=np.int64)
    rows, cols = [], []
    for raw in g._raw_generators():
        img = np.zeros(size, dtype=np.int64)
        for j, target in enumerate(raw):
            img |= ((x >> (n - 1 - j)) & 1) << (n - 1 - target)
        rows.append(x)
        cols.append(img)
    if not rows:
        return x.copy()
    r = np.concatenate(rows)
    c = np.concatenate(cols)
    graph = csr_matrix((np.ones(len(r), dtype=np.int8), (r, c)), shape=(size, size))
    ncomp, labels = connected_components(graph, directed=False)
    reps = np.full(ncomp, size, dtype=np.int64)
    np.minimum.at(reps, labels, x)
    return reps[labels]


@dataclass(frozen=True)
class Orbit:
    representative: Assignment
    members: tuple[Assignment, ...]


def all_orbits(g: GeneratedGroup, cap_bits: int = DEFAULT_BIT_CAP) -> list[Orbit]:
    """Partition ``{0,1}^n`` into orbits, ordered by lex-minimal representative."""
    n = g.degree
    reps = orbit_representatives(g, cap_bits)
    order = np.lexsort((np.arange(len(reps)), reps))
    out: list[Orbit] = []
    current: list[Assignment] = []
    current_rep = -1
    for idx in order:
        rep = int(reps[idx])
        if rep != current_rep:
            if current:
                out.append(Orbit(current[0], tuple(current)))
            current = []
            current_rep = rep
        current.append(int_to_bits(int(idx), n))
    if current:
        out.append(Orbit(current[0], tuple(current)))
    return out


def _cycle_count(raw: tuple[int, ...]) -> int:
    seen = bytearray(len(raw))
    count = 0
    for start in range(len(raw)):
        if seen[start]:
            continue
        count += 1
        j = start
        while not seen[j]:
            seen[j] = 1
            j = raw[j]
    return count


def burnside_count(g: GeneratedGroup, cap: int = DEFAULT_GROUP_CAP) -> int:
    """Number of orbits on ``{0,1}^n``: the average of ``2 ** cycles(x)`` over the elements."""
    raw = _raw_elements(g, cap)
    total = sum(1 << _cycle_count(r) for r in raw)
    count, rem = divmod(total, len(raw))
    assert rem == 0, "Burnside average must be integral"
    return count


def support(g: GeneratedGroup) -> frozenset[int]:
    return frozenset(i for p in g.generators for i, x in enumerate(p.images, start=1) if i != x)


def symmetric_product(degree: int, cells: Iterable[Sequence[int]]) -> GeneratedGroup:
    """``Sym(cell_1) x ... x Sym(cell_r)`` generated by adjacent transpositions inside each cell."""
    gens = []
    order = 1
    for cell in cells:
        cell = sorted(cell)
        order *= math.factorial(len(cell))
        for a, b in zip(cell, cell[1:]):
            gens.append(Permutation.from_cycles([(a, b)], degree))
    return GeneratedGroup(degree, tuple(gens), known_order=order)


def partition_stabilizer(
    h: GeneratedGroup, p: Partition, cap: int = DEFAULT_GROUP_CAP
) -> GeneratedGroup:
    """Subgroup of ``h`` fixing every cell of ``p`` setwise."""
    if p.domain_size != h.degree:
        raise SpecError("partition and group degrees differ")
    if h.symmetric:
        return symmetric_product(h.degree, p.cells)
    cell_of = [0] * h.degree
    for k, cell in enumerate(p.cells):
        for pt in cell:
            cell_of[pt - 1] = k
    kept = [
        _from_raw(r)
        for r in _raw_elements(h, cap)
        if all(cell_of[x] == cell_of[i] for i, x in enumerate(r))
    ]
    return GeneratedGroup.from_elements(h.degree, kept)


def right_coset_reps(
    g: GeneratedGroup, h: GeneratedGroup, cap: int = DEFAULT_GROUP_CAP
) -> list[Permutation]:
    """One representative per right coset ``Hx`` of ``h`` in ``g``: the lex-least element of each."""
    if g.degree != h.degree:
        raise SpecError("groups have different degrees")
    g_raw = _raw_elements(g, cap)
    g_set = set(g_raw)
    for gen in h._raw_generators():
        if gen not in g_set:
            raise NotSubgroup(f"generator {_from_raw(gen)} of H is not in G")
    h_raw = _raw_elements(h, cap)
    covered: set[tuple[int, ...]] = set()
    reps = []
    for x in g_raw:
        if x in covered:
            continue
        reps.append(_from_raw(x))
        for y in h_raw:
            covered.add(tuple(map(x.__getitem__, y)))
    assert len(reps) * len(h_raw) == len(g_raw)
    return reps
