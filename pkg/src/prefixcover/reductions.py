"""Geometric instances that encode K-hyperclique through a prefix covering design.

Axis ``i`` of a box instance (or subspace ``i`` of a point instance) stands
for sequence ``s_i``.  A coordinate in ``[0, U)``, ``U = n^L``, is read as
``L`` base-``n`` digits; digit ``l`` chooses the vertex of part ``s_i[l]``.
Edge-checking objects remove every consistent choice that misses an edge,
consistency-checking objects remove every choice where two occurrences of
an element disagree.  What survives is exactly the set of hypercliques.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .core import PrefixCoveringDesign, min_triplet_cover, normalize_equal_length, primary_position, verify
from .errors import AlphaOverflow, DigitOutOfRange, InvalidInput, KMismatch, StructuralError

MAX_BITS = 62
DEFAULT_BUDGET = 2_000_000

Vertex = tuple[int, int]  # (part, vertex)


@dataclass(frozen=True)
class Hypergraph3:
    """K-partite 3-uniform hypergraph; parts ``1..K``, vertices ``0..n-1``."""

    K: int
    n: int
    edges: frozenset[tuple[Vertex, Vertex, Vertex]]

    def __init__(self, K: int, n: int, edges: Iterable[Iterable[Vertex]] = ()):
        object.__setattr__(self, "K", int(K))
        object.__setattr__(self, "n", int(n))
        norm = set()
        for e in edges:
            t = tuple(sorted((int(p), int(v)) for p, v in e))
            if len(t) != 3 or len({p for p, _ in t}) != 3:
                raise StructuralError(f"edge {t} does not span three distinct parts")
            for p, v in t:
                if not (1 <= p <= self.K and 0 <= v < self.n):
                    raise StructuralError(f"vertex {(p, v)} outside parts 1..{K} x 0..{n - 1}")
            norm.add(t)
        object.__setattr__(self, "edges", frozenset(norm))

    def has_edge(self, a: Vertex, b: Vertex, c: Vertex) -> bool:
        return tuple(sorted((a, b, c))) in self.edges

    @classmethod
    def complete(cls, K: int, n: int) -> Hypergraph3:
        return cls(K, n, all_cross_triples(K, n))


def all_cross_triples(K: int, n: int) -> Iterator[tuple[Vertex, Vertex, Vertex]]:
    for parts in itertools.combinations(range(1, K + 1), 3):
        for vs in itertools.product(range(n), repeat=3):
            yield tuple(zip(parts, vs))


Interval = tuple[int, int]  # half-open [lo, hi)


@dataclass(frozen=True)
class Provenance:
    kind: str  # "edge" or "consistency"
    detail: tuple


@dataclass
class BoxInstance:
    """Half-open integer boxes inside ``[0, U)^d``; ``box[j] = (lo, hi)`` on axis ``j``."""

    d: int
    U: int
    boxes: list[tuple[Interval, ...]] = field(default_factory=list)
    provenance: list[Provenance | None] = field(default_factory=list)

    def add(self, box: tuple[Interval, ...], tag: Provenance | None = None) -> None:
        self.boxes.append(box)
        self.provenance.append(tag)

    def validate(self) -> None:
        for b in self.boxes:
            if len(b) != self.d or any(not (0 <= lo <= hi <= self.U) for lo, hi in b):
                raise StructuralError(f"box {b} leaves [0,{self.U})^{self.d}")

    @property
    def volume(self) -> int:
        return self.U**self.d


@dataclass
class PointInstance:
    """Points in dimension ``dim`` for the empty anchored box problems.

    For ``kind == "unit"`` coordinates are literal integers and the objective
    is the coordinate sum of the corner.  Otherwise ``kind`` is the base
    ``mu`` and coordinates are exponents of ``mu`` (``None`` is the literal
    coordinate 0); the objective is the exponent sum.  Corner coordinates are
    bounded by ``top``.
    """

    dim: int
    threshold: int
    kind: str
    top: int
    points: list[tuple[int | None, ...]] = field(default_factory=list)
    provenance: list[Provenance | None] = field(default_factory=list)

    @property
    def is_volume(self) -> bool:
        return self.kind != "unit"

    @property
    def floor(self) -> int:
        """Smallest admissible corner coordinate (positive side length)."""
        return 0 if self.is_volume else 1

    def add(self, p: tuple[int | None, ...], tag: Provenance | None = None) -> None:
        self.points.append(p)
        self.provenance.append(tag)


def ind(digits: Iterable[int], n: int, L: int) -> int:
    """Most-significant-first value of a digit prefix padded with zeros to ``L`` digits.

    The last digit may equal ``n`` so upper interval endpoints can be written.
    """
    ds = list(digits)
    if len(ds) > L:
        raise DigitOutOfRange(f"{len(ds)} digits exceed length {L}")
    val = 0
    for pos, dgt in enumerate(ds):
        top = n if pos == len(ds) - 1 else n - 1
        if not 0 <= dgt <= top:
            raise DigitOutOfRange(f"digit {dgt} at position {pos + 1} outside 0..{top}")
        val += dgt * n ** (L - pos - 1)
    return val


def interval(prefix: tuple[int, ...], n: int, L: int) -> Interval:
    """``I(v)``: coordinates whose first digits equal ``v``."""
    if not prefix:
        return 0, n**L
    return ind(prefix, n, L), ind(prefix[:-1] + (prefix[-1] + 1,), n, L)


def interval_below(prefix: tuple[int, ...], n: int, L: int) -> Interval:
    """``I_<(v)``: same first ``l-1`` digits, digit ``l`` smaller than ``v[l]``."""
    return ind(prefix[:-1] + (0,), n, L), ind(prefix, n, L)


def interval_above(prefix: tuple[int, ...], n: int, L: int) -> Interval:
    """``I_>(v)``: same first ``l-1`` digits, digit ``l`` larger than ``v[l]``."""
    return ind(prefix[:-1] + (prefix[-1] + 1,), n, L), ind(prefix[:-1] + (n,), n, L)


def _intersect(a: Interval, b: Interval) -> Interval:
    return max(a[0], b[0]), min(a[1], b[1])


@dataclass(frozen=True)
class Check:
    """One checking object: a constraint list ``(axis, interval)`` over 1-based axes."""

    constraints: tuple[tuple[int, Interval], ...]
    tag: Provenance


@dataclass
class ReductionPlan:
    """Everything the box and point generators share."""

    design: PrefixCoveringDesign
    graph: Hypergraph3
    L: int
    U: int

    @property
    def n(self) -> int:
        return self.graph.n


def _plan(design: PrefixCoveringDesign, graph: Hypergraph3, normalize: bool,
          budget: int) -> ReductionPlan:
    if design.K != graph.K:
        raise KMismatch(f"design has K = {design.K}, hypergraph has K = {graph.K}")
    report = verify(design, allow_repeats=True, max_witnesses=1)
    if not report.valid:
        raise InvalidInput(f"design {design} is not valid: " + "; ".join(report.lines()[:3]))
    if normalize and any(len(s) != design.alpha for s in design.sequences):
        design = normalize_equal_length(design)
    n = graph.n
    L = design.length
    if n < 1:
        raise StructuralError("hypergraph needs n >= 1")
    if n > 1 and L * math.log2(n) > MAX_BITS:
        raise AlphaOverflow(f"U = {n}^{L} does not fit into {MAX_BITS} bits")
    if n ** design.alpha > budget:
        raise AlphaOverflow(f"n^alpha = {n}^{design.alpha} exceeds the instance budget {budget}")
    return ReductionPlan(design, graph, L, n**L)


def cover_prefixes(design: PrefixCoveringDesign, triple: tuple[int, int, int]) -> tuple[tuple[int, int], ...]:
    """Deterministic minimum cover as ``(sequence, length)`` pairs."""
    return min_triplet_cover(design, triple).parts


def _functions(elems: list[int], n: int) -> Iterator[dict[int, int]]:
    for vals in itertools.product(range(n), repeat=len(elems)):
        yield dict(zip(elems, vals))


def _elements_of(design: PrefixCoveringDesign, prefixes: Iterable[tuple[int, int]]) -> list[int]:
    out = set()
    for i, length in prefixes:
        out.update(design.sequences[i - 1][:length])
    return sorted(out)


def edge_checks(plan: ReductionPlan) -> Iterator[Check]:
    design, graph, n, L = plan.design, plan.graph, plan.n, plan.L
    for a, b, c in itertools.combinations(range(1, design.K + 1), 3):
        parts = cover_prefixes(design, (a, b, c))
        X = _elements_of(design, parts)
        for f in _functions(X, n):
            if graph.has_edge((a, f[a]), (b, f[b]), (c, f[c])):
                continue
            cons = []
            for i, length in parts:
                digits = tuple(f[e] for e in design.sequences[i - 1][:length])
                cons.append((i, interval(digits, n, L)))
            yield Check(tuple(cons), Provenance("edge", (a, b, c, tuple(f[e] for e in X))))


def copies(design: PrefixCoveringDesign) -> Iterator[tuple[int, tuple[int, int], tuple[int, int]]]:
    """``(x, primary, copy)`` for every non-primary occurrence."""
    for x in sorted(design.occurrences):
        occ = design.occurrences[x]
        prim = primary_position(design, x)
        for p in occ:
            if p != prim:
                yield x, (prim.sequence, prim.level), (p.sequence, p.level)


def consistency_checks(plan: ReductionPlan) -> Iterator[Check]:
    design, n, L = plan.design, plan.n, plan.L
    for x, (i, lmin), (j, lc) in copies(design):
        X = _elements_of(design, [(i, lmin), (j, lc)])
        si, sj = design.sequences[i - 1], design.sequences[j - 1]
        for f in _functions(X, n):
            prim = interval(tuple(f[e] for e in si[:lmin]), n, L)
            head = tuple(f[e] for e in sj[:lc - 1]) + (f[x],)
            for side, iv in (("<", interval_below(head, n, L)), (">", interval_above(head, n, L))):
                if iv[0] >= iv[1]:
                    continue
                if i == j:
                    cons = ((i, _intersect(prim, iv)),)
                    if cons[0][1][0] >= cons[0][1][1]:
                        continue
                else:
                    cons = ((i, prim), (j, iv))
                tag = Provenance("consistency", (x, j, lc, tuple(f[e] for e in X), side))
                yield Check(cons, tag)


def all_checks(plan: ReductionPlan) -> Iterator[Check]:
    yield from edge_checks(plan)
    yield from consistency_checks(plan)


def build_coverage_instance(design: PrefixCoveringDesign, graph: Hypergraph3,
                            budget: int = DEFAULT_BUDGET, normalize: bool = True) -> BoxInstance:
    plan = _plan(design, graph, normalize, budget)
    d, U = plan.design.d, plan.U
    inst = BoxInstance(d, U)
    for chk in all_checks(plan):
        box = [(0, U)] * d
        for axis, iv in chk.constraints:
            box[axis - 1] = _intersect(box[axis - 1], iv)
        inst.add(tuple(box), chk.tag)
    return inst


def complement_slabs(box: tuple[Interval, ...], U: int) -> list[tuple[Interval, ...]]:
    """Disjoint boxes covering ``[0,U)^d`` minus a non-empty ``box`` (nested slabs, at most ``2d``)."""
    d = len(box)
    out = []
    for j in range(d):
        lo, hi = box[j]
        head = tuple(box[:j])
        tail = ((0, U),) * (d - j - 1)
        if lo > 0:
            out.append(head + ((0, lo),) + tail)
        if hi < U:
            out.append(head + ((hi, U),) + tail)
    return out


def coverage_to_depth(instance: BoxInstance) -> tuple[BoxInstance, int]:
    """Replace every box by its complement; depth ``N`` is reached iff coverage fails."""
    out = BoxInstance(instance.d, instance.U)
    for idx, box in enumerate(instance.boxes):
        tag = instance.provenance[idx] if idx < len(instance.provenance) else None
        if any(lo >= hi for lo, hi in box):
            out.add(((0, instance.U),) * instance.d, tag)
            continue
        for slab in complement_slabs(box, instance.U):
            out.add(slab, tag)
    return out, len(instance.boxes)


def _point_instance(design: PrefixCoveringDesign, graph: Hypergraph3, volume: bool, mu: int,
                    budget: int) -> PointInstance:
    plan = _plan(design, graph, True, budget)
    d, U = plan.design.d, plan.U
    zero = None if volume else 0
    inst = PointInstance(2 * d, d * (U + 1), str(mu) if volume else "unit", U)
    for i in range(d):
        for x in range(U + 1):
            p = [zero] * (2 * d)
            p[2 * i], p[2 * i + 1] = x, U - x
            inst.add(tuple(p), Provenance("scaffold", (i + 1, x)))
    for chk in all_checks(plan):
        p = [zero] * (2 * d)
        for axis, (lo, hi) in chk.constraints:
            p[2 * (axis - 1)], p[2 * (axis - 1) + 1] = lo, U - hi
        inst.add(tuple(p), chk.tag)
    return inst


def build_perimeter_instance(design: PrefixCoveringDesign, graph: Hypergraph3,
                             budget: int = DEFAULT_BUDGET) -> PointInstance:
    """Scaffold ``(x, U-x)`` per subspace plus one checking point per check; threshold ``d(U+1)``."""
    return _point_instance(design, graph, False, 0, budget)


def build_volume_instance(design: PrefixCoveringDesign, graph: Hypergraph3, mu: int = 2,
                          budget: int = DEFAULT_BUDGET) -> PointInstance:
    """Exponent-encoded variant with ``C = mu^U``; threshold exponent ``d(U+1)``."""
    if mu < 2:
        raise ValueError("mu must be >= 2")
    return _point_instance(design, graph, True, mu, budget)


@dataclass(frozen=True)
class Census:
    edge: int
    consistency: int
    scaffold: int

    @property
    def boxes(self) -> int:
        return self.edge + self.consistency

    @property
    def points(self) -> int:
        return self.boxes + self.scaffold


def census(design: PrefixCoveringDesign, graph: Hypergraph3, normalize: bool = True) -> Census:
    """Exact object counts, computed from the design without enumerating functions."""
    if normalize and any(len(s) != design.alpha for s in design.sequences):
        design = normalize_equal_length(design)
    n = graph.n
    edge = 0
    for a, b, c in itertools.combinations(range(1, design.K + 1), 3):
        X = _elements_of(design, cover_prefixes(design, (a, b, c)))
        present = sum(1 for e in graph.edges if {p for p, _ in e} == {a, b, c})
        edge += (n**3 - present) * n ** (len(X) - 3)
    cons = 0
    for x, prim, cp in copies(design):
        X = _elements_of(design, [prim, cp])
        cons += 2 * (n - 1) * n ** (len(X) - 1)
    scaffold = design.d * (n**design.length + 1)
    return Census(edge, cons, scaffold)


def decode_cell(design: PrefixCoveringDesign, n: int, coords: Iterable[int]) -> dict[int, int] | None:
    """Vertex choice encoded by a cell, or ``None`` if two occurrences disagree."""
    L = design.length
    choice: dict[int, int] = {}
    for seq, c in zip(design.sequences, coords):
        digits = []
        for _ in range(L):
            c, r = divmod(c, n)
            digits.append(r)
        digits.reverse()
        for e, dgt in zip(seq, digits):
            if choice.setdefault(e, dgt) != dgt:
                return None
    return choice


def is_clique(graph: Hypergraph3, choice: dict[int, int]) -> bool:
    return all(graph.has_edge((a, choice[a]), (b, choice[b]), (c, choice[c]))
               for a, b, c in itertools.combinations(range(1, graph.K + 1), 3))


def clique_cell(design: PrefixCoveringDesign, n: int, choice: dict[int, int]) -> tuple[int, ...]:
    """Cell coordinates of the consistent encoding of ``choice``."""
    L = design.length
    return tuple(ind(tuple(choice[e] for e in seq), n, L) if seq else 0 for seq in design.sequences)
