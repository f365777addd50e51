"""``pcd`` command line: one subcommand per pipeline stage.

Exit status: 0 success or positive decision, 1 negative decision (invalid
design, UNSAT, no clique), 2 usage or I/O error, 3 when the two sides of a
round trip disagree.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Sequence

from . import bounds, formats, golden, oracles, reductions, sat
from .core import compute_alpha, dedupe, normalize_equal_length, scale, verify
from .covering import (
    complete_pairs,
    find_multimatching,
    pad_multimatch,
    prepare,
    projective_plane,
    scale_cd,
    verify_cd,
)
from .errors import InvalidInput, PCDError, StructuralError, Uncoverable
from .transform import TransformParams, cd_to_pcd, classic_cyclic, classic_star, general_pcd

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_DISAGREE = 0, 1, 2, 3
PROBLEMS = ("coverage", "depth", "perimeter", "volume")


class UsageError(Exception):
    pass


def _out(args, text: str) -> None:
    formats.write_text(getattr(args, "output", None), text)


def _pcd(path: str):
    return formats.parse_pcd(formats.read_text(path))


def _cd(path: str):
    return formats.parse_cd(formats.read_text(path))


def _num(x, exact: bool) -> str:
    return bounds.render(x, exact)


# -- designs ------------------------------------------------------------------------

def cmd_verify_pcd(args) -> int:
    design = _pcd(args.file)
    report = verify(design, allow_repeats=args.allow_repeats, workers=args.threads)
    if report.valid:
        q = Fraction(design.K, design.alpha)
        print(f"valid {design}, quality {design.K}/{design.alpha} = {_num(q, False)}"
              + (f" (minimal alpha {report.alpha_star})" if report.alpha_star < design.alpha else ""))
        return EXIT_OK
    print(f"invalid {design}" + (f", minimal alpha {report.alpha_star}" if report.alpha_star else ""))
    for line in report.lines():
        print("  " + line)
    return EXIT_NO


def cmd_alpha(args) -> int:
    design = _pcd(args.file)
    a = compute_alpha(design, allow_repeats=args.allow_repeats, workers=args.threads)
    print(f"{a} quality {design.K}/{a} = {_num(Fraction(design.K, a), False)}")
    return EXIT_OK


def cmd_scale(args) -> int:
    _out(args, formats.format_pcd(scale(_pcd(args.file), args.lam)))
    return EXIT_OK


def cmd_normalize(args) -> int:
    _out(args, formats.format_pcd(normalize_equal_length(_pcd(args.file))))
    return EXIT_OK


def cmd_dedupe(args) -> int:
    _out(args, formats.format_pcd(dedupe(_pcd(args.file))))
    return EXIT_OK


# -- covering designs ----------------------------------------------------------------

def cmd_verify_cd(args) -> int:
    cd = _cd(args.file)
    rep = verify_cd(cd)
    if rep.valid:
        print(f"valid ({cd.v},{cd.k},2) with {cd.d} blocks, frequency {cd.frequency}")
        return EXIT_OK
    for s in rep.structural:
        print(f"structural: {s}")
    if rep.uncovered:
        print(f"invalid: pair {{{rep.uncovered[0]},{rep.uncovered[1]}}} is not covered")
    return EXIT_NO


def cmd_scale_cd(args) -> int:
    _out(args, formats.format_cd(scale_cd(_cd(args.file), args.factor)))
    return EXIT_OK


def cmd_match(args) -> int:
    cd = _cd(args.file)
    mm = find_multimatching(cd)
    if mm is None:
        print("no multi-matching (max flow below v)")
        return EXIT_NO
    for i, part in enumerate(mm.parts, start=1):
        print(f"U_{i}: " + " ".join(map(str, part)))
    return EXIT_OK


def cmd_pplane(args) -> int:
    _out(args, formats.format_cd(projective_plane(args.q)))
    return EXIT_OK


def cmd_pad(args) -> int:
    _out(args, formats.format_cd(pad_multimatch(_cd(args.file))))
    return EXIT_OK


def cmd_cd2pcd(args) -> int:
    cd = _cd(args.file)
    if args.prepare:
        prep = prepare(cd)
        params = TransformParams(args.n, prep.design, prep.matching)
        if prep.scaled or prep.padded:
            print(f"# prepared: scaled={prep.scaled} padded={prep.padded}", file=sys.stderr)
    else:
        mm = find_multimatching(cd)
        if mm is None:
            print("no multi-matching; rerun with --prepare to pad", file=sys.stderr)
            return EXIT_NO
        params = TransformParams(args.n, cd, mm)
    _out(args, formats.format_pcd(cd_to_pcd(params)))
    return EXIT_OK


def cmd_general_pcd(args) -> int:
    _out(args, formats.format_pcd(general_pcd(args.d, args.n)))
    return EXIT_OK


def cmd_cyclic(args) -> int:
    _out(args, formats.format_pcd(classic_cyclic(args.g)))
    return EXIT_OK


def cmd_star(args) -> int:
    _out(args, formats.format_pcd(classic_star(args.d)))
    return EXIT_OK


# -- bounds --------------------------------------------------------------------------

def _d_range(spec: str) -> list[int]:
    try:
        if "-" in spec:
            lo, hi = spec.split("-", 1)
            return list(range(int(lo), int(hi) + 1))
        return [int(spec)]
    except ValueError as exc:
        raise UsageError(f"--d expects N or LO-HI, got {spec!r}") from exc


def builtin_cd(d: int):
    """Covering design for the bound table that can be built without external files."""
    src = golden.TABLE_SOURCES.get(d)
    if src is None:
        return None
    kind, _, arg = src.partition(":")
    if kind == "pairs":
        return complete_pairs(3)
    if kind == "plane":
        return projective_plane(int(arg))
    if kind == "scaled":
        return scale_cd(golden.SMALL_5_3, int(arg))
    return None


def cmd_bounds(args) -> int:
    ds = _d_range(args.d)
    cds = {}
    for path in args.cd or []:
        cd = _cd(path)
        cds[cd.d] = cd
    pcds = [_pcd(p) for p in args.pcd or []]
    rows = []
    for d in ds:
        cd = cds.get(d) or (builtin_cd(d) if not args.no_builtin else None)
        rows.append(bounds.table_row(d, cd, pcds, workers=args.threads))
    if args.format == "csv":
        lines = [bounds.TABLE_HEADER_CSV] + [r.csv(args.exact) for r in rows]
    else:
        lines = [bounds.TABLE_HEADER_TEXT] + [r.text(args.exact) for r in rows]
    _out(args, "\n".join(lines) + "\n")
    return EXIT_OK


# -- SAT -----------------------------------------------------------------------------

def _shape(args) -> sat.SearchShape:
    return sat.SearchShape(args.d, args.g, args.alpha, args.L)


def cmd_sat_encode(args) -> int:
    inst = sat.encode(_shape(args), clause_budget=args.budget)
    _out(args, sat.dimacs_text(inst))
    if args.map:
        with open(args.map, "w") as fh:
            sat.write_varmap(inst, fh)
    print(f"c {inst.num_vars} variables, {len(inst.clauses)} clauses", file=sys.stderr)
    return EXIT_OK


def cmd_sat_run(args) -> int:
    shape = _shape(args)
    inst = sat.encode(shape, clause_budget=args.budget)
    res = sat.run_solver(inst, args.solver, args.timeout)
    if res.status == "UNSAT":
        print(f"UNSAT {shape}")
        return EXIT_NO
    if res.status != "SAT":
        print(f"UNKNOWN {shape}")
        return EXIT_USAGE
    design = sat.decode(inst, res.model)
    _out(args, formats.format_pcd(design))
    return EXIT_OK


def cmd_sat_check(args) -> int:
    res = sat.check_assignment(_shape(args), _pcd(args.file))
    if res.satisfied:
        print("satisfied")
        return EXIT_OK
    print(f"violated clause {res.clause_index} class {res.clause_class}")
    return EXIT_NO


# -- reductions and oracles -------------------------------------------------------------

def build_instance(problem: str, design, graph, mu: int, budget: int):
    if problem in ("coverage", "measure"):
        return reductions.build_coverage_instance(design, graph, budget)
    if problem == "depth":
        inst, N = reductions.coverage_to_depth(reductions.build_coverage_instance(design, graph, budget))
        return inst, N
    if problem == "perimeter":
        return reductions.build_perimeter_instance(design, graph, budget)
    if problem == "volume":
        return reductions.build_volume_instance(design, graph, mu, budget)
    raise UsageError(f"unknown problem {problem!r}")


def cmd_reduce(args) -> int:
    design, graph = _pcd(args.pcd), formats.parse_hypergraph(formats.read_text(args.graph))
    res = build_instance(args.problem, design, graph, args.mu, args.budget)
    if args.problem == "depth":
        inst, N = res
        print(f"# depth threshold {N}", file=sys.stderr)
        _out(args, formats.format_boxes(inst))
    elif args.problem in ("coverage", "measure"):
        _out(args, formats.format_boxes(res))
    else:
        _out(args, formats.format_points(res))
    return EXIT_OK


def _witness(xs) -> str:
    return "" if xs is None else " " + " ".join(map(str, xs))


def cmd_oracle(args) -> int:
    p = args.problem
    if p == "hyperclique":
        clq = oracles.solve_hyperclique(formats.parse_hypergraph(formats.read_text(args.input)))
        print(("clique" + _witness(clq)) if clq is not None else "none")
        return EXIT_OK if clq is not None else EXIT_NO
    text = formats.read_text(args.input)
    if p in ("perimeter", "volume"):
        inst = formats.parse_points(text)
        r = oracles.solve_empty_anchored(inst, p)
        meets = r.meets(inst.threshold)
        print(f"{'meets' if meets else 'below'} {r.value}{_witness(r.corner)}")
        return EXIT_OK if meets else EXIT_NO
    inst = formats.parse_boxes(text)
    if p == "coverage":
        r = oracles.solve_coverage(inst)
        print("covered" if r.covered else "uncovered" + _witness(r.witness))
        return EXIT_OK if r.covered else EXIT_NO
    if p == "measure":
        print(f"measure {oracles.solve_measure(inst)}")
        return EXIT_OK
    if p == "depth":
        r = oracles.solve_depth(inst)
        status = "ok"
        if args.threshold is not None:
            status = "meets" if r.depth >= args.threshold else "below"
        print(f"{status} {r.depth}{_witness(r.witness)}")
        return EXIT_NO if status == "below" else EXIT_OK
    raise UsageError(f"unknown problem {p!r}")


def roundtrip(problem: str, design, graph, mu: int = 2, budget: int = reductions.DEFAULT_BUDGET):
    """``(clique exists, reduction says clique)`` for one instance."""
    clique = oracles.solve_hyperclique(graph) is not None
    if problem == "coverage":
        said = not oracles.solve_coverage(reductions.build_coverage_instance(design, graph, budget)).covered
    elif problem == "depth":
        inst, N = build_instance("depth", design, graph, mu, budget)
        said = oracles.solve_depth(inst).depth >= N
    elif problem in ("perimeter", "volume"):
        inst = build_instance(problem, design, graph, mu, budget)
        said = oracles.solve_empty_anchored(inst, problem).meets(inst.threshold)
    else:
        raise UsageError(f"unknown problem {problem!r}")
    return clique, said


def cmd_roundtrip(args) -> int:
    design, graph = _pcd(args.pcd), formats.parse_hypergraph(formats.read_text(args.graph))
    problems = PROBLEMS if args.problem == "all" else (args.problem,)
    worst = None
    for p in problems:
        clique, said = roundtrip(p, design, graph, args.mu, args.budget)
        agree = clique == said
        print(f"{p}: hyperclique={'yes' if clique else 'no'} reduction={'yes' if said else 'no'} "
              f"{'agree' if agree else 'DISAGREE'}")
        code = EXIT_DISAGREE if not agree else (EXIT_OK if clique else EXIT_NO)
        worst = code if worst is None else max(worst, code)
    return worst


# -- selftest ------------------------------------------------------------------------

def selftest_checks(workers: int = 1):
    """Yield ``(name, ok, detail)`` for every embedded golden fact."""
    for design, alpha, txt in ((golden.THM_D4, 21, "1.9047"), (golden.THM_D5, 18, "2.2222")):
        a = compute_alpha(design, workers=workers)
        q = bounds.truncate(Fraction(design.K, a))
        yield f"golden {design}", a == alpha and verify(design).valid and q == txt, f"alpha {a}, quality {q}"
    for cd, n, want, seqs in ((golden.FANO_FIG1, 1, (7, 28, 10), golden.FIG1_SEQUENCES),
                              (golden.FANO_FIG2, 3, (7, 70, 24), golden.FIG2_SEQUENCES)):
        p = cd_to_pcd(TransformParams(n, cd, golden.first_element_matching(cd)))
        ok = (p.d, p.K, p.alpha) == want and verify(p).valid and p.sequences == seqs
        yield f"figure n={n}", ok, str(p)
    fano = projective_plane(2)
    ok = sorted(map(sorted, fano.blocks)) == sorted(map(sorted, golden.FANO.blocks))
    yield "Fano plane", ok and verify_cd(fano).valid, f"{len(fano.blocks)} lines"
    for d, (v, k) in sorted(bounds.TABLE_DESIGNS.items()):
        if d not in bounds.TABLE_VALUES:
            continue
        got = bounds.truncate(bounds.cd_lower_bound(v, k, d))
        yield f"table d={d} ({v},{k})", got == bounds.TABLE_VALUES[d], got
    for d in sorted(golden.TABLE_SOURCES):
        cd = builtin_cd(d)
        ok = verify_cd(cd).valid and find_multimatching(cd) is not None
        got = bounds.truncate(bounds.table_row(d, cd).lower_cd)
        yield f"built design d={d} ({cd.v},{cd.k})", ok and got == bounds.TABLE_VALUES[d], got
    yield "upper bound d=18", bounds.upper_bound(18) == 9, str(bounds.upper_bound(18))


def cmd_selftest(args) -> int:
    failed = 0
    for name, ok, detail in selftest_checks(args.threads):
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
        failed += not ok
    print(f"{failed} failure(s)")
    return EXIT_OK if failed == 0 else EXIT_NO


# -- parser --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=1, help="worker threads for verification")
    common.add_argument("--exact", action="store_true", help="print exact rationals")
    common.add_argument("-o", "--output", help="output file (default stdout)")

    p = argparse.ArgumentParser(prog="pcd", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=func)
        return sp

    for name, func, help_ in (("verify-pcd", cmd_verify_pcd, "verify a prefix covering design"),
                              ("alpha", cmd_alpha, "minimal alpha of a design")):
        sp = add(name, func, help_)
        sp.add_argument("file")
        sp.add_argument("--allow-repeats", action="store_true")
    sp = add("scale", cmd_scale, "scaling lemma")
    sp.add_argument("file")
    sp.add_argument("--lam", type=int, required=True)
    add("normalize", cmd_normalize, "truncate/pad to length alpha").add_argument("file")
    add("dedupe", cmd_dedupe, "drop repeats within sequences").add_argument("file")

    add("verify-cd", cmd_verify_cd, "verify a covering design").add_argument("file")
    sp = add("scale-cd", cmd_scale_cd, "blow up every element")
    sp.add_argument("file")
    sp.add_argument("--factor", type=int, required=True)
    add("match", cmd_match, "find a multi-matching").add_argument("file")
    add("pplane", cmd_pplane, "projective plane of prime order").add_argument("--q", type=int, required=True)
    add("pad", cmd_pad, "force a multi-matching").add_argument("file")
    sp = add("cd2pcd", cmd_cd2pcd, "covering design to PCD")
    sp.add_argument("file")
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--prepare", action="store_true", help="scale and pad as needed")
    sp = add("general-pcd", cmd_general_pcd, "construction for any d")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--n", type=int, default=1)
    add("cyclic", cmd_cyclic, "(3,3g,2g+1) design").add_argument("--g", type=int, required=True)
    add("star", cmd_star, "(d,d+1,3) design").add_argument("--d", type=int, required=True)

    sp = add("bounds", cmd_bounds, "bound table rows")
    sp.add_argument("--d", required=True, help="N or LO-HI")
    sp.add_argument("--cd", action="append", help="covering design file (row picked by block count)")
    sp.add_argument("--pcd", action="append", help="PCD file for the SAT column")
    sp.add_argument("--format", choices=("text", "csv"), default="csv")
    sp.add_argument("--no-builtin", action="store_true", help="only use supplied designs")

    for name, func, help_ in (("sat-encode", cmd_sat_encode, "write DIMACS CNF"),
                              ("sat-run", cmd_sat_run, "encode, solve and decode"),
                              ("sat-check", cmd_sat_check, "evaluate clauses on a design")):
        sp = add(name, func, help_)
        sp.add_argument("--d", type=int, required=True)
        sp.add_argument("--g", type=int, required=True)
        sp.add_argument("--alpha", type=int, required=True)
        sp.add_argument("--L", type=int)
        sp.add_argument("--budget", type=int, default=sat.DEFAULT_CLAUSE_BUDGET)
        if name == "sat-encode":
            sp.add_argument("--map", help="sidecar CSV var,i,level,element")
        if name == "sat-run":
            sp.add_argument("--solver", help=f"command template with {{cnf}} (default ${sat.SOLVER_ENV})")
            sp.add_argument("--timeout", type=float)
        if name == "sat-check":
            sp.add_argument("file")

    sp = add("reduce", cmd_reduce, "build a geometric instance")
    sp.add_argument("--problem", choices=PROBLEMS, required=True)
    sp.add_argument("--pcd", required=True)
    sp.add_argument("--graph", required=True)
    sp.add_argument("--mu", type=int, default=2)
    sp.add_argument("--budget", type=int, default=reductions.DEFAULT_BUDGET)

    sp = add("oracle", cmd_oracle, "brute-force solver")
    sp.add_argument("--problem", required=True,
                    choices=("coverage", "measure", "depth", "perimeter", "volume", "hyperclique"))
    sp.add_argument("input")
    sp.add_argument("--threshold", type=int, help="depth decision threshold")

    sp = add("roundtrip", cmd_roundtrip, "reduce, solve, compare with hyperclique")
    sp.add_argument("--problem", choices=PROBLEMS + ("all",), default="all")
    sp.add_argument("--pcd", required=True)
    sp.add_argument("--graph", required=True)
    sp.add_argument("--mu", type=int, default=2)
    sp.add_argument("--budget", type=int, default=reductions.DEFAULT_BUDGET)

    add("selftest", cmd_selftest, "check the embedded golden data")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InvalidInput, StructuralError, Uncoverable) as exc:
        print(f"error [{type(exc).__name__}]: {exc}", file=sys.stderr)
        return EXIT_NO
    except (PCDError, ValueError) as exc:
        print(f"error [{type(exc).__name__}]: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
