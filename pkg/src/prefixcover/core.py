"""Prefix covering designs: the data type, verification and basic transforms.

A ``(d, K, alpha)`` design is ``d`` ordered sequences over ``1..K``.  Every
3-subset of elements must be contained in at most three prefixes of total
length ``<= alpha`` (triplet condition) and every repeated element ``x`` must
satisfy ``l_min(x) + l_max(x) <= alpha + 1`` (singleton condition).

Levels and sequence indices are 1-based throughout.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidInput, StructuralError, Uncoverable, UnknownElement, ValueOverflow

INT63 = 2**63 - 1
_INF = 1 << 20  # larger than any level we will ever see; sums of three stay in int32


@dataclass(frozen=True)
class Position:
    sequence: int
    level: int


@dataclass(frozen=True)
class TripletCover:
    """Up to three ``(sequence, prefix length)`` pairs on distinct sequences."""

    parts: tuple[tuple[int, int], ...]

    @property
    def cost(self) -> int:
        return sum(length for _, length in self.parts)


@dataclass(frozen=True)
class PrefixCoveringDesign:
    d: int
    K: int
    alpha: int
    sequences: tuple[tuple[int, ...], ...]

    def __init__(self, d: int, K: int, alpha: int, sequences: Iterable[Iterable[int]]):
        seqs = tuple(tuple(int(e) for e in s) for s in sequences)
        object.__setattr__(self, "d", int(d))
        object.__setattr__(self, "K", int(K))
        object.__setattr__(self, "alpha", int(alpha))
        object.__setattr__(self, "sequences", seqs)

    @classmethod
    def from_sequences(cls, sequences: Sequence[Sequence[int]], alpha: int | None = None,
                       K: int | None = None) -> PrefixCoveringDesign:
        """Build a design inferring ``d`` and ``K``; ``alpha`` defaults to the minimal value."""
        seqs = [list(s) for s in sequences]
        if K is None:
            K = max((max(s) for s in seqs if s), default=0)
        design = cls(len(seqs), K, alpha if alpha is not None else 1, seqs)
        if alpha is None:
            design = design.with_alpha(compute_alpha(design, allow_repeats=True))
        return design

    def with_alpha(self, alpha: int) -> PrefixCoveringDesign:
        return PrefixCoveringDesign(self.d, self.K, alpha, self.sequences)

    @property
    def length(self) -> int:
        """Maximum sequence length ``L``."""
        return max((len(s) for s in self.sequences), default=0)

    @cached_property
    def occurrences(self) -> dict[int, tuple[Position, ...]]:
        occ: dict[int, list[Position]] = {}
        for i, seq in enumerate(self.sequences, start=1):
            for level, e in enumerate(seq, start=1):
                occ.setdefault(e, []).append(Position(i, level))
        return {e: tuple(sorted(p, key=lambda q: (q.level, q.sequence))) for e, p in occ.items()}

    def l_min(self, x: int) -> int:
        return primary_position(self, x).level

    def l_max(self, x: int) -> int:
        if x not in self.occurrences:
            raise UnknownElement(f"element {x} does not occur in the design")
        return max(p.level for p in self.occurrences[x])

    def first_levels(self) -> list[dict[int, int]]:
        """Per sequence, the first level at which each element occurs."""
        out = []
        for seq in self.sequences:
            m: dict[int, int] = {}
            for level, e in enumerate(seq, start=1):
                m.setdefault(e, level)
            out.append(m)
        return out

    def __str__(self) -> str:
        return f"({self.d},{self.K},{self.alpha})"


def structural_errors(design: PrefixCoveringDesign, allow_repeats: bool = False) -> list[str]:
    """Return human-readable structural problems; an empty list means well-formed."""
    errs = []
    if design.d < 3:
        errs.append(f"d = {design.d} < 3")
    if design.K < 3:
        errs.append(f"K = {design.K} < 3")
    if design.alpha < 1:
        errs.append(f"alpha = {design.alpha} < 1")
    if len(design.sequences) != design.d:
        errs.append(f"expected {design.d} sequences, found {len(design.sequences)}")
    seen = set()
    for i, seq in enumerate(design.sequences, start=1):
        inseq = set()
        for level, e in enumerate(seq, start=1):
            if not 1 <= e <= design.K:
                errs.append(f"s_{i}[{level}] = {e} outside 1..{design.K}")
            if e in inseq and not allow_repeats:
                errs.append(f"element {e} repeated within s_{i} (level {level})")
            inseq.add(e)
            seen.add(e)
    missing = [x for x in range(1, design.K + 1) if x not in seen]
    if missing:
        shown = ", ".join(map(str, missing[:10])) + (" ..." if len(missing) > 10 else "")
        errs.append(f"elements never occurring: {shown}")
    return errs


def validate(design: PrefixCoveringDesign, allow_repeats: bool = False) -> None:
    errs = structural_errors(design, allow_repeats)
    if errs:
        raise StructuralError("; ".join(errs))


def primary_position(design: PrefixCoveringDesign, x: int) -> Position:
    """Occurrence of ``x`` that is first in (level, sequence) order."""
    occ = design.occurrences.get(x)
    if not occ:
        raise UnknownElement(f"element {x} does not occur in the design")
    return occ[0]


@dataclass(frozen=True)
class SingletonViolation:
    element: int
    l_min: int
    l_max: int

    @property
    def cost(self) -> int:
        return self.l_min + self.l_max - 1


def check_singleton(design: PrefixCoveringDesign, alpha: int | None = None,
                    allow_repeats: bool = False) -> list[SingletonViolation]:
    validate(design, allow_repeats)
    alpha = design.alpha if alpha is None else alpha
    out = []
    for x in sorted(design.occurrences):
        occ = design.occurrences[x]
        if len(occ) < 2:
            continue
        lo, hi = occ[0].level, max(p.level for p in occ)
        if lo + hi > alpha + 1:
            out.append(SingletonViolation(x, lo, hi))
    return out


def _group_candidates(first: list[dict[int, int]], group: Sequence[int]) -> list[tuple[int, int]]:
    cands = []
    for i, m in enumerate(first, start=1):
        if all(e in m for e in group):
            cands.append((max(m[e] for e in group), i))
    return cands


_PARTITIONS = (
    ((0, 1, 2),),
    ((0, 1), (2,)),
    ((0, 2), (1,)),
    ((1, 2), (0,)),
    ((0,), (1,), (2,)),
)


def min_triplet_cover(design: PrefixCoveringDesign, triple: Iterable[int],
                      first: list[dict[int, int]] | None = None) -> TripletCover:
    """Cheapest cover of three distinct elements by prefixes of distinct sequences.

    Among covers of minimum cost the lexicographically smallest tuple of
    ``(sequence, length)`` pairs is returned, so the result is reproducible.
    """
    elems = tuple(triple)
    if len(set(elems)) != 3:
        raise ValueError(f"triple must hold 3 distinct elements, got {elems}")
    if first is None:
        for e in elems:
            if e not in design.occurrences:
                raise UnknownElement(f"element {e} does not occur in the design")
        first = design.first_levels()
    best: tuple[int, tuple[tuple[int, int], ...]] | None = None
    for partition in _PARTITIONS:
        lists = [_group_candidates(first, [elems[j] for j in g]) for g in partition]
        if any(not c for c in lists):
            continue
        for combo in itertools.product(*lists):
            seqs = [i for _, i in combo]
            if len(set(seqs)) != len(seqs):
                continue
            key = (sum(c for c, _ in combo), tuple(sorted((i, c) for c, i in combo)))
            if best is None or key < best:
                best = key
    if best is None:
        raise Uncoverable(f"no cover exists for {elems}")
    return TripletCover(best[1])


def _level_table(design: PrefixCoveringDesign) -> np.ndarray:
    """``pos[i, x]`` = first level of ``x`` in sequence ``i`` (``_INF`` if absent)."""
    pos = np.full((design.d, design.K + 1), _INF, dtype=np.int32)
    for i, seq in enumerate(design.sequences):
        for level in range(len(seq), 0, -1):
            pos[i, seq[level - 1]] = level
    return pos


def _triple_cost_slabs(design: PrefixCoveringDesign, workers: int = 1):
    """Yield ``(a, cost[b, c])`` for every element ``a``; only ``a < b < c`` is meaningful."""
    pos = _level_table(design)
    lmin = pos.min(axis=0)
    pair_max = [np.maximum.outer(p, p) for p in pos]
    pair = np.minimum.reduce(pair_max)
    single = lmin[:, None] + lmin[None, :]

    def slab(a: int) -> tuple[int, np.ndarray]:
        triple = np.full_like(pair, _INF)
        for i in range(design.d):
            np.minimum(triple, np.maximum(pair_max[i], pos[i, a]), out=triple)
        cost = np.minimum.reduce([
            single + lmin[a],
            pair[a][:, None] + lmin[None, :],
            pair[a][None, :] + lmin[:, None],
            pair + lmin[a],
            triple,
        ])
        return a, cost

    elements = range(1, design.K - 1)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            yield from pool.map(slab, elements)
    else:
        for a in elements:
            yield slab(a)


def _upper_mask(K: int, a: int) -> np.ndarray:
    idx = np.arange(K + 1)
    return (idx[:, None] > a) & (idx[None, :] > idx[:, None])


def triplet_alpha(design: PrefixCoveringDesign, workers: int = 1) -> int:
    best = 0
    for a, cost in _triple_cost_slabs(design, workers):
        vals = cost[_upper_mask(design.K, a)]
        if vals.size:
            best = max(best, int(vals.max()))
    return best


def compute_alpha(design: PrefixCoveringDesign, allow_repeats: bool = False, workers: int = 1) -> int:
    """Smallest ``alpha`` for which the sequences form a prefix covering design."""
    validate(design, allow_repeats)
    return max(_singleton_alpha(design), triplet_alpha(design, workers))


def _singleton_alpha(design: PrefixCoveringDesign) -> int:
    single = 0
    for occ in design.occurrences.values():
        if len(occ) > 1:
            single = max(single, occ[0].level + max(p.level for p in occ) - 1)
    return single


@dataclass(frozen=True)
class TripletViolation:
    triple: tuple[int, int, int]
    cost: int


@dataclass
class VerificationReport:
    design: PrefixCoveringDesign
    structural: list[str] = field(default_factory=list)
    alpha_star: int | None = None
    triplet_violations: list[TripletViolation] = field(default_factory=list)
    triplet_violation_count: int = 0
    singleton_violations: list[SingletonViolation] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.structural and self.alpha_star is not None and self.alpha_star <= self.design.alpha

    def __bool__(self) -> bool:
        return self.valid

    def lines(self) -> list[str]:
        out = []
        for s in self.structural:
            out.append(f"structural: {s}")
        for v in self.singleton_violations:
            out.append(f"singleton: element {v.element} l_min={v.l_min} l_max={v.l_max} "
                       f"needs alpha >= {v.cost}")
        for v in self.triplet_violations:
            out.append(f"triplet: {{{v.triple[0]},{v.triple[1]},{v.triple[2]}}} cost {v.cost}")
        hidden = self.triplet_violation_count - len(self.triplet_violations)
        if hidden > 0:
            out.append(f"... {hidden} more violating triples")
        return out


def verify(design: PrefixCoveringDesign, allow_repeats: bool = False, workers: int = 1,
           max_witnesses: int = 100) -> VerificationReport:
    """Check structure first, then both covering conditions at ``design.alpha``.

    ``allow_repeats`` accepts repeated elements inside one sequence; it is
    needed for designs produced by :func:`normalize_equal_length`.
    """
    report = VerificationReport(design, structural_errors(design, allow_repeats))
    if report.structural:
        return report
    report.singleton_violations = check_singleton(design, allow_repeats=allow_repeats)
    single = _singleton_alpha(design)
    best = 0
    for a, cost in _triple_cost_slabs(design, workers):
        sub = np.where(_upper_mask(design.K, a), cost, 0)
        if sub.size:
            best = max(best, int(sub.max()))
        bad = np.argwhere(sub > design.alpha)
        report.triplet_violation_count += len(bad)
        for b, c in bad:
            if len(report.triplet_violations) < max_witnesses:
                report.triplet_violations.append(TripletViolation((a, int(b), int(c)), int(sub[b, c])))
    report.alpha_star = max(single, best)
    return report


def _require_valid(design: PrefixCoveringDesign, allow_repeats: bool = False) -> None:
    report = verify(design, allow_repeats=allow_repeats, max_witnesses=1)
    if not report.valid:
        raise InvalidInput(f"design {design} is not valid: " + "; ".join(report.lines()[:3]))


def normalize_equal_length(design: PrefixCoveringDesign) -> PrefixCoveringDesign:
    """Truncate to ``alpha`` levels and pad every sequence to length ``alpha`` with ``s_1[1]``.

    Padding repeats ``s_1[1]``, so the result is only accepted by
    :func:`verify` with ``allow_repeats=True``.
    """
    _require_valid(design, allow_repeats=True)
    a = design.alpha
    filler = design.sequences[0][0]
    seqs = [list(s[:a]) + [filler] * (a - min(len(s), a)) for s in design.sequences]
    return PrefixCoveringDesign(design.d, design.K, a, seqs)


def scale(design: PrefixCoveringDesign, lam: int) -> PrefixCoveringDesign:
    """Blow every element up into ``lam`` elements; yields a ``(d, lam*K, lam*alpha)`` design.

    Primary occurrences get the new block in ascending order, copies in
    descending order.
    """
    if lam < 1:
        raise ValueError("scaling factor must be a positive integer")
    if lam * design.K > INT63 or lam * design.alpha > INT63:
        raise ValueOverflow(f"lambda*K = {lam * design.K} exceeds 63 bits")
    _require_valid(design)
    seqs = []
    for i, seq in enumerate(design.sequences, start=1):
        out = []
        for level, x in enumerate(seq, start=1):
            block = range(lam * x - lam + 1, lam * x + 1)
            if primary_position(design, x) == Position(i, level):
                out.extend(block)
            else:
                out.extend(reversed(block))
        seqs.append(out)
    return PrefixCoveringDesign(design.d, lam * design.K, lam * design.alpha, seqs)


def dedupe(design: PrefixCoveringDesign) -> PrefixCoveringDesign:
    """Drop every repeat of an element within the same sequence."""
    seqs = []
    for seq in design.sequences:
        seen: set[int] = set()
        seqs.append([e for e in seq if not (e in seen or seen.add(e))])
    return PrefixCoveringDesign(design.d, design.K, design.alpha, seqs)


def quality(design: PrefixCoveringDesign) -> Fraction:
    return Fraction(design.K, design.alpha)
