"""Plain-text (and JSON for designs) readers and writers for every object."""

from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import TextIO

from .core import PrefixCoveringDesign
from .covering import CoveringDesign
from .errors import FormatError
from .reductions import BoxInstance, Hypergraph3, PointInstance


def _lines(text: str) -> list[list[str]]:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(line.split())
    return out


def _ints(tokens: list[str], what: str) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError as exc:
        raise FormatError(f"{what}: expected integers, got {' '.join(tokens)!r}") from exc


# -- prefix covering designs ----------------------------------------------------

def parse_pcd(text: str) -> PrefixCoveringDesign:
    """``d K alpha`` then one line per sequence; JSON with the same keys is accepted too."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            obj = json.loads(stripped)
            return PrefixCoveringDesign(obj["d"], obj["K"], obj["alpha"], obj["sequences"])
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"bad JSON design: {exc}") from exc
    rows = _lines(text)
    if not rows:
        raise FormatError("empty design file")
    head = _ints(rows[0], "header")
    if len(head) != 3:
        raise FormatError("header must be 'd K alpha'")
    d, K, alpha = head
    body = rows[1:]
    if len(body) != d:
        raise FormatError(f"expected {d} sequences, found {len(body)}")
    seqs = [_ints(r, f"sequence {i + 1}") for i, r in enumerate(body)]
    return PrefixCoveringDesign(d, K, alpha, seqs)


def format_pcd(design: PrefixCoveringDesign) -> str:
    lines = [f"{design.d} {design.K} {design.alpha}"]
    lines += [" ".join(map(str, s)) for s in design.sequences]
    return "\n".join(lines) + "\n"


def pcd_json(design: PrefixCoveringDesign) -> str:
    return json.dumps({"d": design.d, "K": design.K, "alpha": design.alpha,
                       "sequences": [list(s) for s in design.sequences]})


# -- covering designs -------------------------------------------------------------

def parse_cd(text: str) -> CoveringDesign:
    """``v k 2 d`` header, then ``d`` blocks; a headerless block list is also accepted."""
    rows = _lines(text)
    if not rows:
        raise FormatError("empty covering design file")
    head = _ints(rows[0], "header")
    if len(head) == 4 and head[2] == 2 and len(rows) - 1 == head[3]:
        v, k, _, d = head
        blocks = [_ints(r, f"block {i + 1}") for i, r in enumerate(rows[1:])]
        return CoveringDesign(v, k, blocks)
    if len(head) == 4 and head[2] != 2:
        raise FormatError(f"only t = 2 is supported, header says t = {head[2]}")
    # repository files list blocks only
    blocks = [_ints(r, f"block {i + 1}") for i, r in enumerate(rows)]
    sizes = {len(b) for b in blocks}
    if len(sizes) != 1:
        raise FormatError("blocks have different sizes and there is no header")
    v = max(max(b) for b in blocks)
    return CoveringDesign(v, sizes.pop(), blocks)


def format_cd(cd: CoveringDesign) -> str:
    lines = [f"{cd.v} {cd.k} 2 {cd.d}"] + [" ".join(map(str, b)) for b in cd.blocks]
    return "\n".join(lines) + "\n"


# -- hypergraphs -------------------------------------------------------------------

def parse_hypergraph(text: str) -> Hypergraph3:
    rows = _lines(text)
    if not rows:
        raise FormatError("empty hypergraph file")
    head = _ints(rows[0], "header")
    if len(head) != 2:
        raise FormatError("header must be 'K n'")
    edges = []
    for r in rows[1:]:
        x = _ints(r, "edge")
        if len(x) != 6:
            raise FormatError(f"edge line needs 6 integers: {' '.join(r)!r}")
        edges.append(((x[0], x[1]), (x[2], x[3]), (x[4], x[5])))
    return Hypergraph3(head[0], head[1], edges)


def format_hypergraph(g: Hypergraph3) -> str:
    lines = [f"{g.K} {g.n}"]
    for e in sorted(g.edges):
        lines.append(" ".join(f"{p} {v}" for p, v in e))
    return "\n".join(lines) + "\n"


# -- box instances -------------------------------------------------------------------

def parse_boxes(text: str) -> BoxInstance:
    rows = _lines(text)
    if not rows:
        raise FormatError("empty box file")
    head = _ints(rows[0], "header")
    if len(head) != 3:
        raise FormatError("header must be 'd U N'")
    d, U, N = head
    if len(rows) - 1 != N:
        raise FormatError(f"header announces {N} boxes, found {len(rows) - 1}")
    inst = BoxInstance(d, U)
    for r in rows[1:]:
        x = _ints(r, "box")
        if len(x) != 2 * d:
            raise FormatError(f"box line needs {2 * d} integers")
        inst.add(tuple((x[2 * j], x[2 * j + 1]) for j in range(d)))
    inst.validate()
    return inst


def format_boxes(inst: BoxInstance) -> str:
    lines = [f"{inst.d} {inst.U} {len(inst.boxes)}"]
    for b in inst.boxes:
        lines.append(" ".join(f"{lo} {hi}" for lo, hi in b))
    return "\n".join(lines) + "\n"


# -- point instances -------------------------------------------------------------------

def parse_points(text: str) -> PointInstance:
    """Header ``dim count threshold kind [top]``; ``-`` marks a zero coordinate in exponent form."""
    rows = _lines(text)
    if not rows:
        raise FormatError("empty point file")
    head = rows[0]
    if len(head) not in (4, 5):
        raise FormatError("header must be 'dim count threshold kind [top]'")
    dim, count, threshold = _ints(head[:3], "header")
    kind = head[3]
    if kind != "unit":
        _ints([kind], "base mu")
    pts = []
    for r in rows[1:]:
        if len(r) != dim:
            raise FormatError(f"point line needs {dim} coordinates")
        pts.append(tuple(None if t == "-" else _ints([t], "coordinate")[0] for t in r))
    if len(pts) != count:
        raise FormatError(f"header announces {count} points, found {len(pts)}")
    if len(head) == 5:
        top = _ints(head[4:], "top")[0]
    else:
        top = max((c for p in pts for c in p if c is not None), default=1)
    inst = PointInstance(dim, threshold, kind, top)
    for p in pts:
        inst.add(p)
    return inst


def format_points(inst: PointInstance) -> str:
    lines = [f"{inst.dim} {len(inst.points)} {inst.threshold} {inst.kind} {inst.top}"]
    for p in inst.points:
        lines.append(" ".join("-" if c is None else str(c) for c in p))
    return "\n".join(lines) + "\n"


def read_text(path: str | Path) -> str:
    if str(path) == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from exc


def write_text(path: str | Path | None, text: str, stdout: TextIO | None = None) -> None:
    if path is None or str(path) == "-":
        (stdout or sys.stdout).write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise FormatError(f"cannot write {path}: {exc.strerror}") from exc
