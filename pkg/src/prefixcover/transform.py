"""Constructions of prefix covering designs.

* :func:`cd_to_pcd` turns a covering design with a multi-matching into a
  ``(d, (nk+v')d, 3nk-(2n-3)v')`` design (``v' = v/d``, ``n`` copies).
* :func:`general_pcd` extends a projective-plane design to any ``d``.
* :func:`classic_cyclic` and :func:`classic_star` are the small classic
  designs for three and for ``d`` sequences.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import PrefixCoveringDesign
from .covering import (
    CoveringDesign,
    MultiMatching,
    find_multimatching,
    is_prime,
    projective_plane,
    validate_matching,
)
from .errors import InvalidInput, UnsupportedDimension


@dataclass(frozen=True)
class TransformParams:
    n: int
    source: CoveringDesign
    matching: MultiMatching

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("replication count n must be >= 1")
        validate_matching(self.source, self.matching)

    @property
    def v_prime(self) -> int:
        return self.source.v // self.source.d

    @property
    def m(self) -> int:
        """Number of fresh elements put in front of every sequence."""
        return self.n * self.source.k - (self.n - 1) * self.v_prime

    @property
    def T(self) -> int:
        return 3 * self.n * self.source.k - (2 * self.n - 3) * self.v_prime

    @property
    def K(self) -> int:
        return (self.n * self.source.k + self.v_prime) * self.source.d


def params_for(cd: CoveringDesign, n: int = 1, matching: MultiMatching | None = None) -> TransformParams:
    if matching is None:
        matching = find_multimatching(cd)
        if matching is None:
            raise InvalidInput(f"{cd} admits no multi-matching; pad it first")
    return TransformParams(n, cd, matching)


def cd_to_pcd(params: TransformParams) -> PrefixCoveringDesign:
    """``s_i = (A_i, U_i^1, ..., U_i^n, R_i^n, ..., R_i^1)`` with copy ``j`` offset by ``(j-1)v``."""
    cd, n = params.source, params.n
    v, d, m = cd.v, cd.d, params.m
    seqs = []
    for i, (block, part) in enumerate(zip(cd.blocks, params.matching.parts)):
        chosen = [e for e in block if e in part]
        rest = [e for e in block if e not in part]
        fresh = list(range(n * v + i * m + 1, n * v + (i + 1) * m + 1))
        matched = [(j - 1) * v + e for j in range(1, n + 1) for e in chosen]
        remaining = [(j - 1) * v + e for j in range(n, 0, -1) for e in rest]
        seqs.append(fresh + matched + remaining)
    return PrefixCoveringDesign(d, params.K, params.T, seqs)


def transform(cd: CoveringDesign, n: int = 1, matching: MultiMatching | None = None) -> PrefixCoveringDesign:
    return cd_to_pcd(params_for(cd, n, matching))


def transformed_quality(cd: CoveringDesign, n: int) -> Fraction:
    """``K/alpha`` guaranteed by the ``n``-fold transformation, without building it."""
    vp = Fraction(cd.v, cd.d)
    return (n * cd.k + vp) * cd.d / (3 * n * cd.k - (2 * n - 3) * vp)


def classic_cyclic(g: int) -> PrefixCoveringDesign:
    """``(3, 3g, 2g+1)`` design with ``a_i = i``, ``b_i = g+i``, ``c_i = 2g+i``."""
    if g < 1:
        raise ValueError("g must be >= 1")
    a = list(range(1, g + 1))
    b = [g + i for i in a]
    c = [2 * g + i for i in a]
    seqs = [a + b[::-1], b + c[::-1], c + a[::-1]]
    return PrefixCoveringDesign(3, 3 * g, 2 * g + 1, seqs)


def classic_star(d: int) -> PrefixCoveringDesign:
    """``s_i = (i, d+1)``: a ``(d, d+1, 3)`` design."""
    if d < 3:
        raise UnsupportedDimension("star design needs d >= 3")
    return PrefixCoveringDesign(d, d + 1, 3, [(i, d + 1) for i in range(1, d + 1)])


def plane_order_for(d_target: int) -> int | None:
    """Largest prime ``p`` with ``p^2 + p + 1 <= d_target``."""
    best = None
    p = 2
    while p * p + p + 1 <= d_target:
        if is_prime(p):
            best = p
        p += 1
    return best


def general_pcd(d_target: int, n: int = 1) -> PrefixCoveringDesign:
    """Design on ``d_target`` sequences built from the largest fitting projective plane.

    The extra ``d_target - d`` sequences hold ``nk - (2n-1)`` fresh elements
    each.  Below ``d_target = 7`` no plane fits: ``d = 3`` uses the cyclic
    design with ``g = n``, ``d`` in 4..6 the star design.
    """
    if d_target < 3:
        raise UnsupportedDimension(f"d = {d_target} < 3")
    p = plane_order_for(d_target)
    if p is None:
        return classic_cyclic(n) if d_target == 3 else classic_star(d_target)
    base = transform(projective_plane(p), n)
    k, vp = p + 1, 1
    extra_len = n * k - (2 * n - 1) * vp
    seqs = [list(s) for s in base.sequences]
    nxt = base.K + 1
    for _ in range(d_target - base.d):
        seqs.append(list(range(nxt, nxt + extra_len)))
        nxt += extra_len
    return PrefixCoveringDesign(d_target, nxt - 1, base.alpha, seqs)


def general_quality_limit(d_target: int) -> Fraction:
    """``(k d' - 2(d'-d)) / (3k - 2)``: the ``n -> infinity`` limit of :func:`general_pcd`."""
    p = plane_order_for(d_target)
    if p is None:
        raise UnsupportedDimension(f"no projective plane fits into d = {d_target}")
    d, k = p * p + p + 1, p + 1
    return Fraction(k * d_target - 2 * (d_target - d), 3 * k - 2)
