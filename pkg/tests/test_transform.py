import random
from fractions import Fraction

import pytest

from brute import random_cd_with_matching
from prefixcover.core import compute_alpha, verify
from prefixcover.covering import CoveringDesign, MultiMatching, find_multimatching, projective_plane
from prefixcover.bounds import cd_lower_bound
from prefixcover.errors import InvalidInput, StructuralError, UnsupportedDimension
from prefixcover.golden import FANO, FANO_FIG1, FANO_FIG2, FIG1_SEQUENCES, FIG2_SEQUENCES, first_element_matching
from prefixcover.transform import (
    TransformParams,
    cd_to_pcd,
    classic_cyclic,
    classic_star,
    general_pcd,
    general_quality_limit,
    params_for,
    plane_order_for,
    transform,
    transformed_quality,
)

PAIRS3 = CoveringDesign(3, 2, [(1, 2), (1, 3), (2, 3)])


def params(design):
    return design.d, design.K, design.alpha


class TestCdToPcd:
    def test_fano_n1(self):
        p = transform(FANO, 1)
        assert params(p) == (7, 28, 10)
        assert verify(p).valid

    def test_fano_n3(self):
        p = transform(FANO, 3)
        assert params(p) == (7, 70, 24)
        assert verify(p).valid

    def test_pairs_n1(self):
        p = transform(PAIRS3, 1)
        assert params(p) == (3, 9, 7)
        assert Fraction(p.K, p.alpha) == Fraction(9, 7)
        assert verify(p).valid

    def test_fig1_layout(self):
        p = transform(FANO_FIG1, 1, first_element_matching(FANO_FIG1))
        assert p.sequences == FIG1_SEQUENCES

    def test_fig2_layout(self):
        p = transform(FANO_FIG2, 3, first_element_matching(FANO_FIG2))
        assert p.sequences == FIG2_SEQUENCES

    def test_param_identities(self):
        t = params_for(FANO, 3)
        assert (t.v_prime, t.m, t.K, t.T) == (1, 7, 70, 24)

    def test_layout_shape(self):
        # sequence = (A_i, U^1..U^n, R^n..R^1)
        t = params_for(FANO, 2)
        p = cd_to_pcd(t)
        s = p.sequences[0]
        assert len(s) == t.m + 2 * t.v_prime + 2 * (FANO.k - t.v_prime)
        assert min(s[:t.m]) > 2 * FANO.v

    def test_no_matching(self):
        cd = CoveringDesign(6, 3, [(1, 2, 3), (1, 2, 4), (1, 2, 5)])
        with pytest.raises(InvalidInput):
            params_for(cd, 1)

    def test_bad_matching(self):
        with pytest.raises(StructuralError):
            TransformParams(1, FANO, MultiMatching(((1,),) * 7))

    def test_bad_n(self):
        with pytest.raises(ValueError):
            params_for(FANO, 0)

    def test_random_designs(self):
        rng = random.Random(21)
        for _ in range(15):
            cd = random_cd_with_matching(rng, max_v=20)
            mm = find_multimatching(cd)
            for n in (1, 2, 3, 4):
                t = TransformParams(n, cd, mm)
                p = cd_to_pcd(t)
                assert p.K == (n * cd.k + t.v_prime) * cd.d
                assert p.alpha == t.T
                assert compute_alpha(p) <= t.T
                for x in p.occurrences:
                    if len(p.occurrences[x]) > 1:
                        assert p.l_min(x) + p.l_max(x) <= t.T

    def test_quality_monotone_in_n(self):
        qs = [transformed_quality(FANO, n) for n in range(1, 6)]
        assert qs == sorted(qs)
        for n in range(1, 5):
            p = transform(FANO, n)
            assert Fraction(p.K, compute_alpha(p)) >= qs[n - 1]

    def test_quality_converges_to_bound(self):
        bound = cd_lower_bound(FANO.v, FANO.k, FANO.d)
        gaps = [abs(transformed_quality(FANO, n) - bound) for n in range(1, 8)]
        assert all(a > b for a, b in zip(gaps, gaps[1:]))
        assert transformed_quality(FANO, 1000) < bound


class TestGeneral:
    def test_d8(self):
        p = general_pcd(8, 1)
        assert params(p) == (8, 30, 10)
        assert Fraction(p.K, p.alpha) == 3
        assert verify(p).valid

    def test_d7_is_plain_transform(self):
        assert general_pcd(7, 1) == transform(projective_plane(2), 1)

    @pytest.mark.parametrize("d", range(3, 16))
    def test_valid_for_range(self, d):
        p = general_pcd(d, 2)
        assert p.d == d
        assert verify(p).valid

    def test_alpha_formula(self):
        for n in (1, 2, 3):
            k = 4
            p = general_pcd(13, n)
            assert p.alpha == 3 * n * k - 2 * n + 3
            # K = (nk+1)d + (nk-2n+1)(d'-d); here d' = d
            assert p.K == (n * k + 1) * 13

    def test_K_formula_with_extra(self):
        n, k, d, dp = 2, 3, 7, 11
        p = general_pcd(dp, n)
        assert p.K == (n * k + 1) * d + (n * k - 2 * n + 1) * (dp - d)

    def test_limit(self):
        assert general_quality_limit(8) == Fraction(3 * 8 - 2, 7)
        lim = general_quality_limit(10)
        qs = [Fraction(general_pcd(10, n).K, general_pcd(10, n).alpha) for n in (1, 4, 16, 64)]
        assert all(q < lim for q in qs)
        assert lim - qs[-1] < Fraction(1, 10)

    def test_plane_order(self):
        assert plane_order_for(6) is None
        assert plane_order_for(7) == 2
        assert plane_order_for(12) == 2
        assert plane_order_for(13) == 3
        assert plane_order_for(31) == 5

    def test_unsupported(self):
        with pytest.raises(UnsupportedDimension):
            general_pcd(2)
        with pytest.raises(UnsupportedDimension):
            general_quality_limit(5)


class TestClassic:
    def test_cyclic_g1(self):
        p = classic_cyclic(1)
        assert p.sequences == ((1, 2), (2, 3), (3, 1))
        assert params(p) == (3, 3, 3) and verify(p).valid

    def test_cyclic_g2(self):
        p = classic_cyclic(2)
        assert params(p) == (3, 6, 5) and verify(p).valid
        assert p.sequences[0] == (1, 2, 4, 3)

    def test_cyclic_g10(self):
        p = classic_cyclic(10)
        q = Fraction(p.K, p.alpha)
        assert q == Fraction(30, 21) and q > Fraction(142, 100)
        assert verify(p).valid
        assert Fraction(3) / 2 - Fraction(300, 201) < Fraction(3) / 2 - q

    def test_star3(self):
        p = classic_star(3)
        assert params(p) == (3, 4, 3) and Fraction(p.K, p.alpha) == Fraction(4, 3)

    def test_star5(self):
        p = classic_star(5)
        assert params(p) == (5, 6, 3) and Fraction(p.K, p.alpha) == 2

    def test_star4(self):
        p = classic_star(4)
        assert verify(p).valid and compute_alpha(p) == 3

    def test_star_errors(self):
        with pytest.raises(UnsupportedDimension):
            classic_star(2)
        with pytest.raises(ValueError):
            classic_cyclic(0)
