import itertools
import random

import pytest

from brute import brute_multimatching, random_cd_with_matching
from prefixcover.covering import (
    CoveringDesign,
    MultiMatching,
    canonical_parts,
    complete_pairs,
    find_multimatching,
    multimatching_flow,
    pad_multimatch,
    prepare,
    projective_plane,
    scale_cd,
    validate_matching,
    verify_cd,
)
from prefixcover.errors import IndivisibleUniverse, InvalidInput, NotPrime, StructuralError
from prefixcover.golden import FANO, SMALL_5_3

PAIRS3 = CoveringDesign(3, 2, [(1, 2), (1, 3), (2, 3)])


def pair_counts(cd):
    counts = {}
    for b in cd.blocks:
        for p in itertools.combinations(sorted(b), 2):
            counts[p] = counts.get(p, 0) + 1
    return counts


class TestVerifyCd:
    def test_fano_valid(self):
        assert verify_cd(FANO).valid

    def test_fano_minus_block(self):
        r = verify_cd(CoveringDesign(7, 3, FANO.blocks[:6]))
        assert not r.valid
        assert r.uncovered in {(5, 6), (3, 5), (3, 6)}

    def test_pairs_valid(self):
        assert verify_cd(PAIRS3).valid

    def test_structural_separate(self):
        r = verify_cd(CoveringDesign(4, 2, [(1, 2), (3, 9)]))
        assert r.structural and r.uncovered is None
        r = verify_cd(CoveringDesign(4, 3, [(1, 2, 3), (1, 4)]))
        assert any("expected 3" in s for s in r.structural)

    def test_lemma_on_valid_designs(self):
        rng = random.Random(5)
        for _ in range(50):
            cd = random_cd_with_matching(rng)
            assert verify_cd(cd).valid
            assert cd.k * cd.d >= 2 * cd.v


class TestScaleCd:
    def test_fano_by_7(self):
        s = scale_cd(FANO, 7)
        assert (s.v, s.k, s.d) == (49, 21, 7)
        assert verify_cd(s).valid

    def test_identity(self):
        assert scale_cd(FANO, 1) == FANO

    def test_pairs_by_3(self):
        s = scale_cd(PAIRS3, 3)
        assert (s.v, s.k, s.d) == (9, 6, 3)
        assert verify_cd(s).valid

    def test_element_blocks(self):
        s = scale_cd(PAIRS3, 3)
        assert s.blocks[0] == (1, 2, 3, 4, 5, 6)

    def test_invalid_input(self):
        with pytest.raises(InvalidInput):
            scale_cd(CoveringDesign(7, 3, FANO.blocks[:6]), 2)

    def test_small_5_3_gives_20_12(self):
        s = scale_cd(SMALL_5_3, 4)
        assert (s.v, s.k, s.d) == (20, 12, 4)
        assert verify_cd(s).valid


class TestMultimatching:
    def test_fano_sdr(self):
        mm = find_multimatching(FANO)
        assert mm is not None
        validate_matching(FANO, mm)
        assert sorted(p[0] for p in mm.parts) == list(range(1, 8))

    def test_pairs_representatives(self):
        mm = find_multimatching(PAIRS3)
        validate_matching(PAIRS3, mm)
        assert all(len(p) == 1 for p in mm.parts)

    def test_missing_element_infeasible(self):
        cd = CoveringDesign(6, 3, [(1, 2, 3), (1, 2, 4), (1, 2, 5)])
        value, _ = multimatching_flow(cd)
        assert value == 5 < cd.v
        assert find_multimatching(cd) is None

    def test_indivisible(self):
        with pytest.raises(IndivisibleUniverse):
            find_multimatching(SMALL_5_3)

    def test_matches_exhaustive_search(self):
        rng = random.Random(17)
        seen = {True: 0, False: 0}
        for _ in range(120):
            d = rng.randint(2, 5)
            v = d * rng.randint(1, max(1, 20 // d))
            k = rng.randint(1, v)
            blocks = [rng.sample(range(1, v + 1), k) for _ in range(d)]
            cd = CoveringDesign(v, k, blocks)
            expect = brute_multimatching(cd)
            got = find_multimatching(cd)
            assert (got is not None) == expect
            seen[expect] += 1
        assert seen[True] and seen[False]

    def test_validate_rejects_bad_parts(self):
        with pytest.raises(StructuralError):
            validate_matching(PAIRS3, MultiMatching(((1,), (1,), (2,))))
        with pytest.raises(StructuralError):
            validate_matching(PAIRS3, MultiMatching(((3,), (1,), (2,))))


class TestProjectivePlane:
    def test_q2_is_fano_parameters(self):
        p = projective_plane(2)
        assert (p.v, p.k, p.d) == (7, 3, 7)
        assert verify_cd(p).valid

    def test_q3(self):
        p = projective_plane(3)
        assert (p.v, p.k, p.d) == (13, 4, 13)
        assert verify_cd(p).valid

    @pytest.mark.parametrize("q", [2, 3, 5, 7])
    def test_exact_pair_coverage(self, q):
        p = projective_plane(q)
        v = q * q + q + 1
        assert (p.v, p.k, p.d) == (v, q + 1, v)
        counts = pair_counts(p)
        assert len(counts) == v * (v - 1) // 2
        assert set(counts.values()) == {1}
        occ = [sum(e in b for b in p.blocks) for e in range(1, v + 1)]
        assert set(occ) == {q + 1}

    @pytest.mark.parametrize("q", [1, 4, 6, 9])
    def test_not_prime(self, q):
        with pytest.raises(NotPrime):
            projective_plane(q)


class TestPad:
    def test_padded_fano_has_matching(self):
        p = pad_multimatch(FANO)
        assert p.d == 7 and p.k == 4
        assert verify_cd(p).valid
        assert find_multimatching(p) is not None
        validate_matching(p, MultiMatching(canonical_parts(p.v, p.d)))

    def test_blocks_only_grow(self):
        p = pad_multimatch(FANO)
        for old, new in zip(FANO.blocks, p.blocks):
            assert set(old) <= set(new)

    def test_matched_elements_in_front(self):
        p = pad_multimatch(scale_cd(SMALL_5_3, 4))
        for block, part in zip(p.blocks, canonical_parts(p.v, p.d)):
            assert block[:len(part)] == part

    def test_indivisible(self):
        with pytest.raises(IndivisibleUniverse):
            pad_multimatch(SMALL_5_3)

    def test_random_designs(self):
        rng = random.Random(8)
        for _ in range(20):
            cd = random_cd_with_matching(rng)
            p = pad_multimatch(cd)
            assert verify_cd(p).valid
            assert p.k == min(cd.k + cd.v // cd.d, cd.v)
            validate_matching(p, MultiMatching(canonical_parts(p.v, p.d)))


class TestPrepare:
    def test_fano_untouched(self):
        p = prepare(FANO)
        assert p.design == FANO and not p.scaled and not p.padded

    def test_small_design_gets_scaled(self):
        p = prepare(SMALL_5_3)
        assert p.scaled and (p.design.v, p.design.k) == (20, 12)
        validate_matching(p.design, p.matching)

    def test_complete_pairs(self):
        cd = complete_pairs(4)
        assert cd.d == 6 and verify_cd(cd).valid
        p = prepare(cd)
        validate_matching(p.design, p.matching)
