"""Brute-force reference solvers used to certify reductions at desk scale."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import TooLarge
from .reductions import BoxInstance, Hypergraph3, PointInstance, is_clique

CELL_LIMIT = 10**7
CLIQUE_LIMIT = 10**7
NODE_LIMIT = 5 * 10**6


@dataclass(frozen=True)
class CompressedGrid:
    """Per-axis breakpoints; cell ``(c_1, ..., c_d)`` spans ``[axes[j][c_j], axes[j][c_j+1])``."""

    axes: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, inst: BoxInstance) -> CompressedGrid:
        axes = []
        for j in range(inst.d):
            pts = {0, inst.U}
            for b in inst.boxes:
                pts.update(b[j])
            axes.append(tuple(sorted(p for p in pts if 0 <= p <= inst.U)))
        return cls(tuple(axes))

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(a) - 1 for a in self.axes)

    @property
    def cell_count(self) -> int:
        return int(np.prod(self.shape, dtype=object))

    def slices(self, box) -> tuple[slice, ...]:
        out = []
        for ax, (lo, hi) in zip(self.axes, box):
            out.append(slice(ax.index(lo), ax.index(hi)) if lo < hi else slice(0, 0))
        return tuple(out)

    def extent(self, cell: tuple[int, ...]) -> tuple[tuple[int, int], ...]:
        return tuple((ax[c], ax[c + 1]) for ax, c in zip(self.axes, cell))

    def widths(self, j: int) -> list[int]:
        ax = self.axes[j]
        return [ax[c + 1] - ax[c] for c in range(len(ax) - 1)]


def _depth_grid(inst: BoxInstance) -> tuple[CompressedGrid, np.ndarray]:
    grid = CompressedGrid.of(inst)
    if grid.cell_count > CELL_LIMIT:
        raise TooLarge(f"{grid.cell_count} cells exceed the limit {CELL_LIMIT}")
    count = np.zeros(grid.shape, dtype=np.int64)
    for b in inst.boxes:
        count[grid.slices(b)] += 1
    return grid, count


@dataclass(frozen=True)
class CoverageResult:
    covered: bool
    witness: tuple[int, ...] | None = None  # lower corner of an uncovered cell

    def __bool__(self) -> bool:
        return self.covered


def solve_coverage(inst: BoxInstance) -> CoverageResult:
    grid, count = _depth_grid(inst)
    if count.size == 0:
        return CoverageResult(True)
    holes = np.argwhere(count == 0)
    if len(holes) == 0:
        return CoverageResult(True)
    cell = tuple(int(c) for c in holes[0])
    return CoverageResult(False, tuple(lo for lo, _ in grid.extent(cell)))


def solve_measure(inst: BoxInstance) -> int:
    grid, count = _depth_grid(inst)
    if count.size == 0:
        return 0
    covered = count > 0
    if inst.U**inst.d < 2**62:
        vol = np.ones(grid.shape, dtype=np.int64)
        for j in range(inst.d):
            w = np.asarray(grid.widths(j), dtype=np.int64)
            vol = vol * w.reshape([-1 if k == j else 1 for k in range(inst.d)])
        return int(vol[covered].sum())
    total = 0
    for cell in map(tuple, np.argwhere(covered)):
        v = 1
        for lo, hi in grid.extent(cell):
            v *= hi - lo
        total += v
    return total


def uncovered_measure(inst: BoxInstance) -> int:
    """Volume outside all boxes, by repeated exact box subtraction (no grid)."""
    free = [((0, inst.U),) * inst.d] if inst.U > 0 else []
    for b in inst.boxes:
        if any(lo >= hi for lo, hi in b):
            continue
        nxt = []
        for r in free:
            inter = tuple((max(a, c), min(bb, dd)) for (a, bb), (c, dd) in zip(r, b))
            if any(lo >= hi for lo, hi in inter):
                nxt.append(r)
                continue
            # split r into the pieces outside b, axis by axis
            cur = list(r)
            for j in range(inst.d):
                lo, hi = cur[j]
                if lo < inter[j][0]:
                    nxt.append(tuple(cur[:j]) + ((lo, inter[j][0]),) + tuple(cur[j + 1:]))
                if inter[j][1] < hi:
                    nxt.append(tuple(cur[:j]) + ((inter[j][1], hi),) + tuple(cur[j + 1:]))
                cur[j] = inter[j]
        free = nxt
    total = 0
    for r in free:
        v = 1
        for lo, hi in r:
            v *= hi - lo
        total += v
    return total


@dataclass(frozen=True)
class DepthResult:
    depth: int
    witness: tuple[int, ...] | None


def solve_depth(inst: BoxInstance) -> DepthResult:
    grid, count = _depth_grid(inst)
    if count.size == 0:
        return DepthResult(0, None)
    flat = int(np.argmax(count))
    cell = np.unravel_index(flat, count.shape)
    depth = int(count[cell])
    return DepthResult(depth, tuple(lo for lo, _ in grid.extent(tuple(int(c) for c in cell))))


def solve_hyperclique(graph: Hypergraph3) -> tuple[int, ...] | None:
    """Lexicographically first clique ``(v_1, ..., v_K)`` or ``None``."""
    if graph.n**graph.K > CLIQUE_LIMIT:
        raise TooLarge(f"{graph.n}^{graph.K} candidate tuples exceed {CLIQUE_LIMIT}")
    for choice in itertools.product(range(graph.n), repeat=graph.K):
        if is_clique(graph, dict(enumerate(choice, start=1))):
            return choice
    return None


@dataclass(frozen=True)
class EmptyBoxResult:
    value: int | None  # None when no admissible corner exists
    corner: tuple[int, ...] | None

    def meets(self, threshold: int) -> bool:
        return self.value is not None and self.value >= threshold


def _lt(p: int | None, b: int) -> bool:
    return p is None or p < b


def candidates(inst: PointInstance, j: int) -> list[int]:
    """Corner values worth trying on axis ``j``: point coordinates and the top."""
    vals = {inst.top}
    for p in inst.points:
        if p[j] is not None and inst.floor <= p[j] <= inst.top:
            vals.add(p[j])
    return sorted(vals)


def solve_empty_anchored(inst: PointInstance, objective: str | None = None,
                         node_limit: int = NODE_LIMIT) -> EmptyBoxResult:
    """Exact maximum of the corner objective over empty anchored boxes.

    A point blocks corner ``b`` iff it is strictly below ``b`` on every axis.
    Axes are grouped in pairs.  Each group's candidate combinations are
    enumerated once with the set of points they leave blocked (a bitmask),
    then a depth-first branch and bound picks one combination per group so
    that no point stays blocked in every group.
    """
    if objective is not None and (objective == "volume") != inst.is_volume:
        raise ValueError(f"objective {objective!r} does not match instance kind {inst.kind!r}")
    dim = inst.dim
    cands = [candidates(inst, j) for j in range(dim)]
    groups = [tuple(range(j, min(j + 2, dim))) for j in range(0, dim, 2)]
    npts = len(inst.points)

    # points blocked in a group no matter which combination is chosen there
    sure = []
    for g in groups:
        m = 0
        for idx, p in enumerate(inst.points):
            if all(_lt(p[j], cands[j][0]) for j in g):
                m |= 1 << idx
        sure.append(m)
    full = (1 << npts) - 1

    options = []  # per group: list of (sum, combo, blocked mask), best first
    work = 0
    for gi, g in enumerate(groups):
        others = full
        for gj in range(len(groups)):
            if gj != gi:
                others &= sure[gj]
        opts = []
        for combo in itertools.product(*(cands[j] for j in g)):
            work += 1
            if work > node_limit:
                raise TooLarge(f"more than {node_limit} candidate combinations")
            blocked = 0
            for idx, p in enumerate(inst.points):
                if all(_lt(p[j], c) for j, c in zip(g, combo)):
                    blocked |= 1 << idx
            if blocked & others:
                continue  # leaves a point blocked that no other group can free
            opts.append((sum(combo), combo, blocked))
        opts.sort(key=lambda o: (-o[0], o[1]))
        options.append(opts)
    if any(not o for o in options):
        return EmptyBoxResult(None, None)

    # masks that stay blocked whatever the remaining groups choose
    always = [0] * (len(groups) + 1)
    always[len(groups)] = full
    for gi in range(len(groups) - 1, -1, -1):
        m = full
        for _, _, blocked in options[gi]:
            m &= blocked
        always[gi] = always[gi + 1] & m
    tail_best = [0] * (len(groups) + 1)
    for gi in range(len(groups) - 1, -1, -1):
        tail_best[gi] = tail_best[gi + 1] + options[gi][0][0]

    best: list = [None, None]
    nodes = 0

    def dfs(gi: int, mask: int, acc: int, chosen: list) -> None:
        nonlocal nodes
        if gi == len(groups):
            if mask == 0 and (best[0] is None or acc > best[0]):
                best[0], best[1] = acc, tuple(c for combo in chosen for c in combo)
            return
        if mask & always[gi]:
            return
        for s, combo, blocked in options[gi]:
            if best[0] is not None and acc + s + tail_best[gi + 1] <= best[0]:
                break  # options are sorted by sum, nothing further can win
            nodes += 1
            if nodes > node_limit:
                raise TooLarge(f"search exceeded {node_limit} nodes")
            chosen.append(combo)
            dfs(gi + 1, mask & blocked, acc + s, chosen)
            chosen.pop()

    dfs(0, full, 0, [])
    return EmptyBoxResult(best[0], best[1])


def grid_search_empty_anchored(inst: PointInstance) -> EmptyBoxResult:
    """Unrestricted reference: every corner in ``[floor, top]^dim``."""
    span = inst.top - inst.floor + 1
    if span**inst.dim > CELL_LIMIT:
        raise TooLarge(f"{span}^{inst.dim} corners exceed {CELL_LIMIT}")
    best = EmptyBoxResult(None, None)
    for b in itertools.product(range(inst.floor, inst.top + 1), repeat=inst.dim):
        if any(all(_lt(p[j], b[j]) for j in range(inst.dim)) for p in inst.points):
            continue
        s = sum(b)
        if best.value is None or s > best.value:
            best = EmptyBoxResult(s, b)
    return best
