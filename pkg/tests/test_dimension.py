import random
from fractions import Fraction

import pytest

from ncd_moduli.dimension import (
    DimensionInput,
    enhanced_balance,
    expected_dim,
    naive_gap,
    stratum_codim,
)
from ncd_moduli.fixtures import neck1b, neck2, smooth_level_one


class TestExpectedDim:
    def test_plane_cubic_contact(self):
        # a line meeting a cubic at one triple point
        assert expected_dim(DimensionInput(3, 4, 2, 1, 3)) == 0

    def test_six_dimensional_middle_term_vanishes(self):
        rng = random.Random(0)
        for _ in range(30):
            c1a, ell, av = rng.randint(-5, 9), rng.randint(0, 6), rng.randint(0, 9)
            chi = rng.randint(-6, 4)
            assert expected_dim(DimensionInput(c1a, 6, chi, ell, av)) == 2 * c1a + 2 * ell - 2 * av

    def test_linear_in_ell(self):
        base = DimensionInput(4, 8, 2, 3, 5)
        bumped = DimensionInput(4, 8, 2, 4, 5)
        assert expected_dim(bumped) == expected_dim(base) + 2

    def test_rejects_odd_dimension(self):
        with pytest.raises(ValueError):
            DimensionInput(1, 5, 2, 0, 0)

    def test_against_fraction_oracle(self):
        rng = random.Random(42)
        for _ in range(100):
            inp = DimensionInput(
                rng.randint(-10, 10),
                2 * rng.randint(1, 6),
                rng.randint(-8, 8),
                rng.randint(0, 8),
                rng.randint(0, 12),
            )
            oracle = (
                2 * Fraction(inp.c1a)
                + Fraction(inp.dim_x - 6) * Fraction(inp.chi) / 2
                + 2 * Fraction(inp.ell)
                - 2 * Fraction(inp.av)
            )
            assert oracle.denominator == 1
            assert expected_dim(inp) == oracle

    def test_partition_independence(self):
        # any way of partitioning the contact degree over the same number of
        # points gives the same dimension
        rng = random.Random(7)
        for _ in range(50):
            ell = rng.randint(1, 5)
            av = rng.randint(ell, 12)
            dims = set()
            for _ in range(8):
                cuts = sorted(rng.sample(range(1, av), ell - 1)) if ell > 1 else []
                parts = [b - a for a, b in zip([0] + cuts, cuts + [av])]
                assert sum(parts) == av and len(parts) == ell
                dims.add(expected_dim(DimensionInput(5, 4, 2, len(parts), sum(parts))))
            assert len(dims) == 1


class TestGapAndBalance:
    def test_depth_one_gap_vanishes(self):
        assert naive_gap([1]) == 0

    def test_depth_two(self):
        assert naive_gap([2]) == -2

    def test_two_depth_three_nodes(self):
        assert naive_gap([3, 3]) == -8

    def test_balance_always_zero(self):
        rng = random.Random(3)
        for _ in range(200):
            depths = [rng.randint(1, 5) for _ in range(rng.randint(0, 6))]
            assert naive_gap(depths) == 2 * sum(1 - k for k in depths)
            assert enhanced_balance(depths) == 0

    def test_bad_depth(self):
        with pytest.raises(ValueError):
            naive_gap([0])


class TestStratumCodim:
    def test_smooth_level_one(self):
        assert stratum_codim(smooth_level_one()) == 2

    def test_neck1b(self):
        assert stratum_codim(neck1b()) == 2

    def test_neck2(self):
        assert stratum_codim(neck2()) == 2


class TestCodimLowerBound:
    def test_positive_level_strata_have_codim_at_least_two(self):
        from ncd_moduli.fixtures import neck1a, neck2, neck3

        for build in [smooth_level_one, neck1a, neck1b, neck2, neck3]:
            mt = build()
            assert stratum_codim(mt) >= 2
