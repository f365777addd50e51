"""Property tests for the invariants of every module."""

import random

from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from brute import (
    brute_cover_cost,
    brute_depth,
    brute_measure,
    brute_multimatching,
    random_box_instance,
    random_cd_with_matching,
    random_graph,
    random_point_instance,
)
from prefixcover.core import (
    PrefixCoveringDesign,
    compute_alpha,
    dedupe,
    min_triplet_cover,
    normalize_equal_length,
    scale,
    verify,
)
from prefixcover.covering import CoveringDesign, find_multimatching, scale_cd, verify_cd
from prefixcover.formats import format_pcd, parse_pcd
from prefixcover.oracles import (
    grid_search_empty_anchored,
    solve_coverage,
    solve_depth,
    solve_empty_anchored,
    solve_hyperclique,
    solve_measure,
    uncovered_measure,
)
from prefixcover.reductions import build_coverage_instance, coverage_to_depth
from prefixcover.transform import TransformParams, cd_to_pcd, classic_star

SETTINGS = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def designs(draw, max_d=4, max_K=8, max_len=5, repeats=False):
    d = draw(st.integers(3, max_d))
    K = draw(st.integers(3, max_K))
    elem = st.integers(1, K)
    seqs = []
    for _ in range(d):
        if repeats:
            seqs.append(draw(st.lists(elem, min_size=1, max_size=max_len)))
        else:
            seqs.append(draw(st.lists(elem, min_size=1, max_size=min(max_len, K), unique=True)))
    missing = sorted(set(range(1, K + 1)) - {e for s in seqs for e in s})
    for e in missing:
        i = draw(st.integers(0, d - 1))
        seqs[i].insert(draw(st.integers(0, len(seqs[i]))), e)
    base = PrefixCoveringDesign(d, K, 1, seqs)
    return base.with_alpha(compute_alpha(base, allow_repeats=repeats))


seeds = st.integers(0, 2**32 - 1)


# -- designs-core ------------------------------------------------------------------

@SETTINGS
@given(designs())
def test_alpha_is_minimal(p):
    assert verify(p).valid
    if p.alpha > 1:
        assert not verify(p.with_alpha(p.alpha - 1)).valid


@SETTINGS
@given(designs(max_K=6, max_len=4), st.integers(1, 4))
def test_scaling_soundness(p, lam):
    s = scale(p, lam)
    assert (s.d, s.K, s.alpha) == (p.d, lam * p.K, lam * p.alpha)
    assert verify(s).valid
    assert compute_alpha(s) <= lam * p.alpha


@SETTINGS
@given(designs())
def test_normalization_soundness(p):
    n = normalize_equal_length(p)
    assert all(len(s) == p.alpha for s in n.sequences)
    assert verify(n, allow_repeats=True).valid
    assert compute_alpha(n, allow_repeats=True) <= p.alpha


@SETTINGS
@given(designs())
def test_valid_designs_stop_at_alpha(p):
    # a unique element past level alpha breaks every triple containing it,
    # a repeated one breaks the singleton condition
    assert p.length <= p.alpha


@SETTINGS
@given(designs(max_K=7, max_len=4), st.data())
def test_triplet_cover_matches_brute_force(p, data):
    t = tuple(data.draw(st.lists(st.integers(1, p.K), min_size=3, max_size=3, unique=True)))
    c = min_triplet_cover(p, t)
    assert c.cost == brute_cover_cost(p.sequences, t)
    assert c.cost == sum(l for _, l in c.parts)


@SETTINGS
@given(designs(repeats=True))
def test_dedupe_keeps_validity(p):
    assume(verify(p, allow_repeats=True).valid)
    q = dedupe(p)
    assert all(len(set(s)) == len(s) for s in q.sequences)
    assert verify(q).valid


@SETTINGS
@given(designs(max_K=8), st.integers(2, 4))
def test_parallel_schedule_independent(p, workers):
    assert compute_alpha(p, workers=workers) == compute_alpha(p)


@SETTINGS
@given(designs())
def test_pcd_text_round_trip(p):
    assert parse_pcd(format_pcd(p)) == p


# -- covering designs ------------------------------------------------------------------

@SETTINGS
@given(seeds, st.integers(1, 3))
def test_scale_cd_commutes_with_verify(seed, factor):
    rng = random.Random(seed)
    v = rng.randint(3, 7)
    blocks = [rng.sample(range(1, v + 1), rng.randint(2, v)) for _ in range(rng.randint(2, 6))]
    k = max(len(b) for b in blocks)
    blocks = [b + [e for e in range(1, v + 1) if e not in b][:k - len(b)] for b in blocks]
    cd = CoveringDesign(v, k, blocks)
    if verify_cd(cd).valid:
        assert verify_cd(scale_cd(cd, factor)).valid
    else:
        # scaling keeps a missing pair missing
        expanded = CoveringDesign(v * factor, k * factor,
                                  [[(e - 1) * factor + j for e in b for j in range(1, factor + 1)] for b in cd.blocks])
        assert not verify_cd(expanded).valid


@SETTINGS
@given(seeds)
def test_multimatching_exact(seed):
    rng = random.Random(seed)
    d = rng.randint(2, 5)
    v = d * rng.randint(1, max(1, 20 // d))
    k = rng.randint(1, v)
    cd = CoveringDesign(v, k, [rng.sample(range(1, v + 1), k) for _ in range(d)])
    assert (find_multimatching(cd) is not None) == brute_multimatching(cd)


# -- transformation ------------------------------------------------------------------

@settings(max_examples=25, deadline=None)
@given(seeds, st.integers(1, 4))
def test_transformation_validity(seed, n):
    cd = random_cd_with_matching(random.Random(seed), max_v=18)
    t = TransformParams(n, cd, find_multimatching(cd))
    p = cd_to_pcd(t)
    assert p.K == (n * cd.k + t.v_prime) * cd.d
    assert verify(p).valid
    for x, occ in p.occurrences.items():
        if len(occ) > 1:
            assert p.l_min(x) + p.l_max(x) <= t.T


# -- oracles ------------------------------------------------------------------------------

@SETTINGS
@given(seeds)
def test_measure_plus_uncovered(seed):
    inst = random_box_instance(random.Random(seed))
    m = solve_measure(inst)
    assert m + uncovered_measure(inst) == inst.volume
    assert m == brute_measure(inst)


@SETTINGS
@given(seeds)
def test_depth_bounds(seed):
    inst = random_box_instance(random.Random(seed))
    r = solve_depth(inst)
    assert r.depth == brute_depth(inst)
    assert r.depth <= len(inst.boxes)
    if any(all(lo < hi for lo, hi in b) for b in inst.boxes):
        assert r.depth >= 1


@SETTINGS
@given(seeds, st.booleans())
def test_empty_anchored_candidates_complete(seed, volume):
    inst = random_point_instance(random.Random(seed), volume=volume)
    assert solve_empty_anchored(inst).value == grid_search_empty_anchored(inst).value


# -- reductions ------------------------------------------------------------------------------

@settings(max_examples=30, deadline=None)
@given(seeds, st.floats(0.3, 1.0))
def test_coverage_and_depth_equivalence(seed, p):
    g = random_graph(random.Random(seed), 4, 2, p)
    clique = solve_hyperclique(g) is not None
    inst = build_coverage_instance(classic_star(3), g)
    assert (not solve_coverage(inst).covered) == clique
    out, N = coverage_to_depth(inst)
    assert (solve_depth(out).depth == N) == clique
