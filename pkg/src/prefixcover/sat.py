"""Fixed-shape PCD existence as CNF satisfiability.

The shape fixes the first ``g`` levels to ``s_i[j] = (i-1)g + j``, so every
element's primary position (and hence ``l_min``) is known in advance.  Only
levels ``g+1..L`` are free.  Selection variable ``x[i,l,e]`` says that
position ``(i, l)`` holds ``e``.

Triplet clauses use two facts about a fixed primary layout.  A 3-cover of
minimum cost can always take single elements at their primaries, and two
groups placed in the same sequence can be merged without increasing the
cost.  So ``{a,b,c}`` is coverable within ``alpha`` iff the three primaries
suffice, or some sequence holds a pair within ``alpha - l_min(third)``
levels, or some sequence holds all three.  Prefix membership is reified
through auxiliary variables in full equivalence, so an assignment induced
by a design satisfies every clause iff the design is valid.
"""

from __future__ import annotations

import csv
import io
import itertools
import os
import shlex
import subprocess
import tempfile
from dataclasses import dataclass, field
from typing import Iterable, TextIO

from .core import PrefixCoveringDesign, verify
from .errors import EncoderBug, FormatError, LayoutMismatch, ModelInconsistent, ShapeTooLarge, SolverError

SOLVER_ENV = "PCD_SAT_SOLVER"
DEFAULT_CLAUSE_BUDGET = 20_000_000

# constant literals used during construction; never emitted
TRUE = "T"
FALSE = "F"


@dataclass(frozen=True)
class SearchShape:
    d: int
    g: int
    alpha: int
    L: int | None = None

    def __post_init__(self):
        if self.d < 3:
            raise ValueError("d must be >= 3")
        if self.g < 1:
            raise ValueError("g must be >= 1")
        if self.alpha < 1:
            raise ValueError("alpha must be >= 1")
        if self.L is not None and self.L < self.g:
            raise ValueError("L must be >= g")

    @property
    def K(self) -> int:
        return self.g * self.d

    @property
    def length(self) -> int:
        """Effective maximum length: levels above ``alpha`` never help a cover."""
        L = self.alpha if self.L is None else self.L
        return max(self.g, min(L, self.alpha))

    def home(self, e: int) -> int:
        return (e - 1) // self.g + 1

    def l_min(self, e: int) -> int:
        return (e - 1) % self.g + 1

    def fixed(self, i: int) -> list[int]:
        return list(range((i - 1) * self.g + 1, i * self.g + 1))

    def __str__(self) -> str:
        return f"(d={self.d}, g={self.g}, alpha={self.alpha}, L={self.length})"


@dataclass
class CnfInstance:
    shape: SearchShape
    num_vars: int = 0
    clauses: list[tuple[int, ...]] = field(default_factory=list)
    tags: list[str] = field(default_factory=list)
    selection: dict[tuple[int, int, int], int] = field(default_factory=dict)
    occupancy: dict[tuple[int, int], int] = field(default_factory=dict)
    # aux var -> ("or" | "and", operand literals); operands are always older variables
    definitions: dict[int, tuple[str, tuple[int, ...]]] = field(default_factory=dict)

    @property
    def meaning(self) -> dict[int, tuple[int, int, int]]:
        return {v: key for key, v in self.selection.items()}

    @property
    def aux_range(self) -> tuple[int, int]:
        lo = len(self.selection) + len(self.occupancy) + 1
        return lo, self.num_vars

    def new_var(self) -> int:
        self.num_vars += 1
        return self.num_vars

    def add(self, lits: Iterable[int], tag: str) -> None:
        self.clauses.append(tuple(lits))
        self.tags.append(tag)


def estimate_clauses(shape: SearchShape) -> int:
    K, d = shape.K, shape.d
    free = d * (shape.length - shape.g)
    triples = K * (K - 1) * (K - 2) // 6
    return free * K * K // 2 + d * K * (shape.length - shape.g) ** 2 // 2 + triples * (4 * d * 4 + 1)


class _Builder:
    def __init__(self, inst: CnfInstance):
        self.inst = inst
        self.prefix: dict[tuple[int, int, int], int | str] = {}
        self.conj: dict[tuple, int | str] = {}

    def define(self, kind: str, operands: list[int | str]) -> int | str:
        """Fresh variable equivalent to the OR/AND of operands, with constants folded."""
        absorbing, neutral = (TRUE, FALSE) if kind == "or" else (FALSE, TRUE)
        if absorbing in operands:
            return absorbing
        ops = tuple(dict.fromkeys(o for o in operands if o != neutral))
        if not ops:
            return neutral
        if len(ops) == 1:
            return ops[0]
        inst = self.inst
        v = inst.new_var()
        inst.definitions[v] = (kind, ops)
        if kind == "or":
            inst.add([-v, *ops], "aux")
            for o in ops:
                inst.add([v, -o], "aux")
        else:
            inst.add([v, *(-o for o in ops)], "aux")
            for o in ops:
                inst.add([-v, o], "aux")
        return v

    def in_prefix(self, i: int, level: int, e: int) -> int | str:
        """Literal for "e occurs in s_i[..level]"."""
        shape = self.inst.shape
        level = min(level, shape.length)
        if level < 1:
            return FALSE
        if shape.home(e) == i:
            return TRUE if level >= shape.l_min(e) else FALSE
        if level <= shape.g:
            return FALSE
        key = (i, level, e)
        if key not in self.prefix:
            prev = self.in_prefix(i, level - 1, e)
            self.prefix[key] = self.define("or", [prev, self.inst.selection[(i, level, e)]])
        return self.prefix[key]

    def all_in(self, i: int, level: int, elems: tuple[int, ...]) -> int | str:
        level = min(level, self.inst.shape.length)
        key = (i, level, elems)
        if key not in self.conj:
            self.conj[key] = self.define("and", [self.in_prefix(i, level, e) for e in elems])
        return self.conj[key]


def encode(shape: SearchShape, clause_budget: int = DEFAULT_CLAUSE_BUDGET) -> CnfInstance:
    est = estimate_clauses(shape)
    if est > clause_budget:
        raise ShapeTooLarge(f"shape {shape} needs about {est} clauses, budget is {clause_budget}")
    inst = CnfInstance(shape)
    d, K, L, alpha = shape.d, shape.K, shape.length, shape.alpha
    free_levels = range(shape.g + 1, L + 1)
    for i in range(1, d + 1):
        for level in free_levels:
            for e in range(1, K + 1):
                inst.selection[(i, level, e)] = inst.new_var()
    for i in range(1, d + 1):
        for level in free_levels:
            inst.occupancy[(i, level)] = inst.new_var()

    def allowed(i: int, level: int, e: int) -> bool:
        return shape.home(e) != i and level + shape.l_min(e) <= alpha + 1

    for (i, level, e), x in inst.selection.items():
        if shape.home(e) == i:
            inst.add([-x], "no-repeat")
        elif level + shape.l_min(e) > alpha + 1:
            inst.add([-x], "singleton")

    for i in range(1, d + 1):
        for level in free_levels:
            ok = [inst.selection[(i, level, e)] for e in range(1, K + 1) if allowed(i, level, e)]
            for x, y in itertools.combinations(ok, 2):
                inst.add([-x, -y], "at-most-one")
    for i in range(1, d + 1):
        for e in range(1, K + 1):
            xs = [inst.selection[(i, level, e)] for level in free_levels if allowed(i, level, e)]
            for x, y in itertools.combinations(xs, 2):
                inst.add([-x, -y], "no-repeat")

    for (i, level), o in inst.occupancy.items():
        xs = [inst.selection[(i, level, e)] for e in range(1, K + 1)]
        inst.add([-o, *xs], "occupancy")
        for x in xs:
            inst.add([o, -x], "occupancy")
        if level > shape.g + 1:
            inst.add([-o, inst.occupancy[(i, level - 1)]], "occupancy")

    b = _Builder(inst)
    for a, bb, c in itertools.combinations(range(1, K + 1), 3):
        lm = {e: shape.l_min(e) for e in (a, bb, c)}
        if lm[a] + lm[bb] + lm[c] <= alpha:
            continue
        options: list[int | str] = []
        for pair, other in (((a, bb), c), ((a, c), bb), ((bb, c), a)):
            budget = alpha - lm[other]
            for i in range(1, d + 1):
                options.append(b.all_in(i, budget, pair))
        for i in range(1, d + 1):
            options.append(b.all_in(i, alpha, (a, bb, c)))
        tag = f"triplet{{{a},{bb},{c}}}"
        if TRUE in options:
            continue
        lits = [o for o in dict.fromkeys(options) if o != FALSE]
        if lits:
            inst.add(lits, tag)
        else:
            u = inst.new_var()
            inst.add([u], tag)
            inst.add([-u], tag)
    return inst


def _selection_from_design(shape: SearchShape, design: PrefixCoveringDesign) -> set[tuple[int, int, int]]:
    if design.d != shape.d or design.K != shape.K:
        raise LayoutMismatch(f"design {design} does not have d = {shape.d}, K = {shape.K}")
    chosen = set()
    for i, seq in enumerate(design.sequences, start=1):
        if list(seq[:shape.g]) != shape.fixed(i):
            raise LayoutMismatch(f"s_{i} does not start with {shape.fixed(i)}")
        if len(seq) > shape.length:
            raise LayoutMismatch(f"s_{i} has length {len(seq)} > {shape.length}")
        for level in range(shape.g + 1, len(seq) + 1):
            chosen.add((i, level, seq[level - 1]))
    return chosen


def assignment_for(inst: CnfInstance, design: PrefixCoveringDesign) -> dict[int, bool]:
    """Total assignment induced by a design of the instance's layout."""
    chosen = _selection_from_design(inst.shape, design)
    val: dict[int, bool] = {}
    for key, v in inst.selection.items():
        val[v] = key in chosen
    for (i, level), o in inst.occupancy.items():
        val[o] = level <= len(design.sequences[i - 1])
    for v in range(1, inst.num_vars + 1):
        if v in val:
            continue
        defn = inst.definitions.get(v)
        if defn is None:
            val[v] = True  # empty-clause marker; its clauses are contradictory anyway
            continue
        kind, ops = defn
        vals = [val[o] if o > 0 else not val[-o] for o in ops]
        val[v] = any(vals) if kind == "or" else all(vals)
    return val


@dataclass(frozen=True)
class CheckResult:
    satisfied: bool
    clause_index: int | None = None
    clause_class: str | None = None
    clause: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.satisfied


def evaluate(inst: CnfInstance, val: dict[int, bool]) -> CheckResult:
    for idx, cl in enumerate(inst.clauses):
        if not any(val[l] if l > 0 else not val[-l] for l in cl):
            return CheckResult(False, idx, inst.tags[idx], cl)
    return CheckResult(True)


def check_assignment(shape: SearchShape, design: PrefixCoveringDesign,
                     instance: CnfInstance | None = None) -> CheckResult:
    inst = instance if instance is not None else encode(shape)
    if inst.shape != shape:
        raise ValueError("instance was built for a different shape")
    return evaluate(inst, assignment_for(inst, design))


def decode(inst: CnfInstance, model: Iterable[int]) -> PrefixCoveringDesign:
    """Read a design off a model (signed literals) and re-verify it."""
    true: set[int] = set()
    assigned: set[int] = set()
    for lit in model:
        if lit == 0:
            continue
        if abs(lit) > inst.num_vars:
            raise ModelInconsistent(f"literal {lit} exceeds the {inst.num_vars} variables")
        if lit > 0:
            true.add(lit)
        assigned.add(abs(lit))
    missing = [v for v in inst.selection.values() if v not in assigned]
    if missing:
        raise ModelInconsistent(f"model is truncated: {len(missing)} selection variables unassigned")
    shape = inst.shape
    seqs = []
    for i in range(1, shape.d + 1):
        seq = shape.fixed(i)
        ended = False
        for level in range(shape.g + 1, shape.length + 1):
            here = [e for e in range(1, shape.K + 1) if inst.selection[(i, level, e)] in true]
            if len(here) > 1:
                raise ModelInconsistent(f"position ({i},{level}) holds {here}")
            if not here:
                ended = True
                continue
            if ended:
                raise ModelInconsistent(f"hole in s_{i} before level {level}")
            seq.append(here[0])
        seqs.append(seq)
    design = PrefixCoveringDesign(shape.d, shape.K, shape.alpha, seqs)
    report = verify(design, max_witnesses=3)
    if not report.valid:
        raise EncoderBug(f"decoded design {design} fails verification: " + "; ".join(report.lines()[:3]))
    return design


# -- DIMACS interchange -------------------------------------------------------

def write_dimacs(inst: CnfInstance, fh: TextIO) -> None:
    s = inst.shape
    fh.write(f"c prefix covering design search d={s.d} g={s.g} alpha={s.alpha} L={s.length}\n")
    fh.write(f"p cnf {inst.num_vars} {len(inst.clauses)}\n")
    for cl in inst.clauses:
        fh.write(" ".join(map(str, cl)) + " 0\n")


def dimacs_text(inst: CnfInstance) -> str:
    buf = io.StringIO()
    write_dimacs(inst, buf)
    return buf.getvalue()


def write_varmap(inst: CnfInstance, fh: TextIO) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["var", "i", "level", "element"])
    for (i, level, e), v in sorted(inst.selection.items(), key=lambda kv: kv[1]):
        w.writerow([v, i, level, e])


def read_dimacs(fh: TextIO) -> tuple[int, list[list[int]]]:
    nvars = nclauses = None
    clauses: list[list[int]] = []
    cur: list[int] = []
    for line in fh:
        line = line.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise FormatError(f"bad DIMACS header: {line!r}")
            nvars, nclauses = int(parts[2]), int(parts[3])
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(cur)
                cur = []
            else:
                cur.append(lit)
    if nvars is None:
        raise FormatError("missing 'p cnf' header")
    if cur:
        clauses.append(cur)
    if len(clauses) != nclauses:
        raise FormatError(f"header announces {nclauses} clauses, found {len(clauses)}")
    return nvars, clauses


@dataclass(frozen=True)
class SolverResult:
    status: str  # "SAT", "UNSAT" or "UNKNOWN"
    model: tuple[int, ...] = ()


def parse_solver_output(text: str) -> SolverResult:
    status = None
    model: list[int] = []
    for line in text.splitlines():
        line = line.strip()
        if line.startswith("s "):
            word = line[2:].strip().upper()
            if word == "SATISFIABLE":
                status = "SAT"
            elif word == "UNSATISFIABLE":
                status = "UNSAT"
            else:
                status = "UNKNOWN"
        elif line.startswith("v "):
            model.extend(int(t) for t in line[2:].split() if t != "0")
    if status is None:
        raise SolverError("solver output has no 's' status line")
    return SolverResult(status, tuple(model))


def solver_command(template: str | None = None) -> str:
    cmd = template or os.environ.get(SOLVER_ENV)
    if not cmd:
        raise SolverError(f"no solver configured; pass a command template or set {SOLVER_ENV}")
    return cmd


def run_solver(inst: CnfInstance, template: str | None = None, timeout: float | None = None) -> SolverResult:
    """Run an external DIMACS solver; ``{cnf}`` in the template is replaced by the file path."""
    cmd = solver_command(template)
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "instance.cnf")
        with open(path, "w") as fh:
            write_dimacs(inst, fh)
        args = shlex.split(cmd.replace("{cnf}", shlex.quote(path)) if "{cnf}" in cmd else cmd)
        if "{cnf}" not in cmd:
            args.append(path)
        try:
            proc = subprocess.run(args, capture_output=True, text=True, timeout=timeout)
        except subprocess.TimeoutExpired as exc:
            raise SolverError(f"solver timed out after {timeout} s") from exc
        except OSError as exc:
            raise SolverError(f"cannot run solver {args[0]!r}: {exc}") from exc
    result = parse_solver_output(proc.stdout)
    if result.status == "SAT" and not result.model and inst.num_vars:
        raise SolverError("solver reported SAT without a model")
    return result


def search(shape: SearchShape, template: str | None = None,
           timeout: float | None = None) -> PrefixCoveringDesign | None:
    """Encode, solve and decode; ``None`` means the shape is unsatisfiable."""
    inst = encode(shape)
    res = run_solver(inst, template, timeout)
    if res.status == "UNSAT":
        return None
    if res.status != "SAT":
        raise SolverError("solver gave no answer")
    return decode(inst, res.model)
