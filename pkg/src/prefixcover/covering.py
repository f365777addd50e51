"""Covering designs with t = 2 and the multi-matching condition."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import networkx as nx

from .errors import IndivisibleUniverse, InvalidInput, NotPrime, StructuralError


@dataclass(frozen=True)
class CoveringDesign:
    """``d`` blocks of size ``k`` over ``1..v``; block order is significant."""

    v: int
    k: int
    blocks: tuple[tuple[int, ...], ...]

    def __init__(self, v: int, k: int, blocks):
        object.__setattr__(self, "v", int(v))
        object.__setattr__(self, "k", int(k))
        object.__setattr__(self, "blocks", tuple(tuple(int(e) for e in b) for b in blocks))

    @property
    def d(self) -> int:
        return len(self.blocks)

    @property
    def frequency(self) -> Fraction:
        return Fraction(self.k * self.d, self.v)

    def __str__(self) -> str:
        return f"({self.v},{self.k},2) with {self.d} blocks"


@dataclass(frozen=True)
class MultiMatching:
    """``parts[i]`` is the subset chosen from block ``i`` (0-based)."""

    parts: tuple[tuple[int, ...], ...]


@dataclass
class CDReport:
    design: CoveringDesign
    structural: list[str] = field(default_factory=list)
    uncovered: tuple[int, int] | None = None

    @property
    def valid(self) -> bool:
        return not self.structural and self.uncovered is None

    def __bool__(self) -> bool:
        return self.valid


def cd_structural_errors(cd: CoveringDesign) -> list[str]:
    errs = []
    if cd.v < 2:
        errs.append(f"v = {cd.v} < 2")
    if cd.k < 2:
        errs.append(f"k = {cd.k} < 2")
    for i, b in enumerate(cd.blocks, start=1):
        if len(b) != cd.k:
            errs.append(f"block {i} has {len(b)} elements, expected {cd.k}")
        if len(set(b)) != len(b):
            errs.append(f"block {i} repeats an element")
        bad = [e for e in b if not 1 <= e <= cd.v]
        if bad:
            errs.append(f"block {i} has elements outside 1..{cd.v}: {bad}")
    return errs


def uncovered_pairs(cd: CoveringDesign):
    covered = set()
    for b in cd.blocks:
        covered.update(itertools.combinations(sorted(set(b)), 2))
    for pair in itertools.combinations(range(1, cd.v + 1), 2):
        if pair not in covered:
            yield pair


def verify_cd(cd: CoveringDesign) -> CDReport:
    report = CDReport(cd, cd_structural_errors(cd))
    if report.structural:
        return report
    report.uncovered = next(uncovered_pairs(cd), None)
    if report.valid and cd.d >= 2:
        # every valid 2-covering has k >= 2v/d; failure here means the checker is wrong
        assert cd.k * cd.d >= 2 * cd.v, f"lemma k >= 2v/d violated by verified design {cd}"
    return report


def _require_valid(cd: CoveringDesign) -> None:
    report = verify_cd(cd)
    if not report.valid:
        why = "; ".join(report.structural) or f"pair {report.uncovered} uncovered"
        raise InvalidInput(f"covering design {cd} is not valid: {why}")


def scale_cd(cd: CoveringDesign, factor: int) -> CoveringDesign:
    """Replace element ``e`` by ``(e-1)*factor+1 .. e*factor``."""
    if factor < 1:
        raise ValueError("factor must be a positive integer")
    _require_valid(cd)
    blocks = [[(e - 1) * factor + j for e in b for j in range(1, factor + 1)] for b in cd.blocks]
    return CoveringDesign(cd.v * factor, cd.k * factor, blocks)


def validate_matching(cd: CoveringDesign, mm: MultiMatching) -> None:
    if cd.v % cd.d:
        raise IndivisibleUniverse(f"v = {cd.v} is not divisible by d = {cd.d}")
    size = cd.v // cd.d
    if len(mm.parts) != cd.d:
        raise StructuralError(f"matching has {len(mm.parts)} parts, expected {cd.d}")
    union: list[int] = []
    for i, (part, block) in enumerate(zip(mm.parts, cd.blocks), start=1):
        if len(part) != size:
            raise StructuralError(f"part {i} has {len(part)} elements, expected {size}")
        if not set(part) <= set(block):
            raise StructuralError(f"part {i} is not a subset of block {i}")
        union.extend(part)
    if sorted(union) != list(range(1, cd.v + 1)):
        raise StructuralError("matching parts do not partition 1..v")


def multimatching_flow(cd: CoveringDesign) -> tuple[int, nx.DiGraph]:
    """Max-flow value of source -> block (cap v/d) -> element -> sink (cap 1)."""
    if cd.v % cd.d:
        raise IndivisibleUniverse(f"v = {cd.v} is not divisible by d = {cd.d}")
    cap = cd.v // cd.d
    g = nx.DiGraph()
    for i, block in enumerate(cd.blocks):
        g.add_edge("s", ("b", i), capacity=cap)
        for e in block:
            g.add_edge(("b", i), ("e", e), capacity=1)
    for e in range(1, cd.v + 1):
        g.add_edge(("e", e), "t", capacity=1)
    value, flow = nx.maximum_flow(g, "s", "t")
    return value, flow


def find_multimatching(cd: CoveringDesign) -> MultiMatching | None:
    """Exact feasibility test; returns an integral matching or ``None``."""
    value, flow = multimatching_flow(cd)
    if value < cd.v:
        return None
    parts = []
    for i, block in enumerate(cd.blocks):
        out = flow[("b", i)]
        parts.append(tuple(e for e in block if out.get(("e", e), 0) > 0))
    mm = MultiMatching(tuple(parts))
    validate_matching(cd, mm)
    return mm


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    return all(q % p for p in range(2, int(q**0.5) + 1))


def _normalized_vectors(q: int) -> list[tuple[int, int, int]]:
    vecs = []
    for v in itertools.product(range(q), repeat=3):
        nz = next((c for c in v if c), 0)
        if nz == 1:
            vecs.append(v)
    return vecs


def projective_plane(q: int) -> CoveringDesign:
    """Desarguesian plane of prime order ``q``: ``q^2+q+1`` points and lines."""
    if not is_prime(q):
        raise NotPrime(f"q = {q} is not prime (prime powers are not supported)")
    pts = _normalized_vectors(q)
    blocks = []
    for line in pts:
        blocks.append([j for j, p in enumerate(pts, start=1)
                       if sum(a * b for a, b in zip(line, p)) % q == 0])
    return CoveringDesign(len(pts), q + 1, blocks)


def complete_pairs(m: int) -> CoveringDesign:
    """All ``C(m, 2)`` pairs of ``1..m`` as blocks of size 2."""
    return CoveringDesign(m, 2, itertools.combinations(range(1, m + 1), 2))


def canonical_parts(v: int, d: int) -> tuple[tuple[int, ...], ...]:
    step = v // d
    return tuple(tuple(range(i * step + 1, (i + 1) * step + 1)) for i in range(d))


def pad_multimatch(cd: CoveringDesign) -> CoveringDesign:
    """Force a multi-matching by adding ``(i-1)v/d+1 .. i*v/d`` to block ``i``.

    The added labels are existing elements, so every block only grows and
    coverage is preserved.  Blocks are then filled to the common size
    ``k + v/d`` with their smallest missing elements.  The canonical parts
    from :func:`canonical_parts` are a multi-matching of the result.
    """
    if cd.v % cd.d:
        raise IndivisibleUniverse(f"v = {cd.v} is not divisible by d = {cd.d}; scale first")
    _require_valid(cd)
    extra = cd.v // cd.d
    size = min(cd.k + extra, cd.v)
    blocks = []
    for block, part in zip(cd.blocks, canonical_parts(cd.v, cd.d)):
        # matched elements first so the transformation finds them in front
        out = list(part) + [e for e in block if e not in part]
        have = set(out)
        filler = (e for e in range(1, cd.v + 1) if e not in have)
        while len(out) < size:
            out.append(next(filler))
        blocks.append(out)
    return CoveringDesign(cd.v, size, blocks)


@dataclass
class PreparedDesign:
    """A covering design ready for the transformation, with how it was obtained."""

    source: CoveringDesign
    design: CoveringDesign
    matching: MultiMatching
    scaled: bool
    padded: bool


def prepare(cd: CoveringDesign) -> PreparedDesign:
    """Scale by ``d`` when needed, then match; pad only if no matching exists."""
    _require_valid(cd)
    work, scaled = cd, False
    if cd.v % cd.d:
        work, scaled = scale_cd(cd, cd.d), True
    mm = find_multimatching(work)
    padded = False
    if mm is None:
        work, padded = pad_multimatch(work), True
        mm = MultiMatching(canonical_parts(work.v, work.d))
        validate_matching(work, mm)
    return PreparedDesign(cd, work, mm, scaled, padded)
