import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncd_moduli.exactnum import (
    ONE,
    ExactNonzeroComplex,
    RationalMatrix,
    rank,
    rational_nullspace,
    smith_normal_form,
    solve_power_system,
    strict_positive_solution,
    verify_solution,
)
from oracle_helpers import (
    arg_grid_solutions,
    fourier_motzkin_feasible,
    lcm,
    power_system_oracle_consistent,
    random_value,
)

frac = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))
exact_values = st.builds(
    lambda e2, e3, a: ExactNonzeroComplex.from_parts({2: e2, 3: e3}, a),
    frac,
    frac,
    st.builds(Fraction, st.integers(-12, 12), st.integers(1, 12)),
)


class TestValues:
    def test_inverse_pair(self):
        a = ExactNonzeroComplex.from_rational(2)
        b = ExactNonzeroComplex.from_rational(Fraction(1, 2))
        assert a * b == ONE

    def test_square_of_sqrt2_quarter_turn(self):
        a = ExactNonzeroComplex.from_parts({2: Fraction(1, 2)}, Fraction(1, 4))
        sq = a * a
        assert sq == ExactNonzeroComplex.from_parts({2: 1}, Fraction(1, 2))

    def test_identity(self):
        a = ExactNonzeroComplex.from_parts({3: 1}, Fraction(1, 3))
        assert a * ONE == a

    def test_negative_rational(self):
        a = ExactNonzeroComplex.from_rational(-6)
        assert a.mag_dict == {2: 1, 3: 1}
        assert a.arg == Fraction(1, 2)

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            ExactNonzeroComplex.from_rational(0)

    @given(exact_values, exact_values, exact_values)
    def test_group_laws(self, a, b, c):
        assert (a * b) * c == a * (b * c)
        assert a * b == b * a
        assert a * a.inverse() == ONE

    @given(exact_values)
    def test_pow_one_and_inverse(self, a):
        assert a.pow(1) == a
        assert a.pow(-1) == a.inverse()

    def test_pow_examples(self):
        four = ExactNonzeroComplex.from_rational(4)
        assert four.pow(Fraction(1, 2)) == ExactNonzeroComplex.from_rational(2)
        minus_one = ExactNonzeroComplex.from_parts({}, Fraction(1, 2))
        assert minus_one.pow(2) == ONE
        v = ExactNonzeroComplex.from_parts({2: 3}, Fraction(1, 2))
        assert v.pow(Fraction(1, 3)) == ExactNonzeroComplex.from_parts(
            {2: 1}, Fraction(1, 6)
        )

    def test_roots_examples(self):
        assert ONE.roots(2) == {
            ONE,
            ExactNonzeroComplex.from_parts({}, Fraction(1, 2)),
        }
        four = ExactNonzeroComplex.from_rational(4)
        assert four.roots(2) == {
            ExactNonzeroComplex.from_rational(2),
            ExactNonzeroComplex.from_rational(-2),
        }
        i_like = ExactNonzeroComplex.from_parts({}, Fraction(1, 2))
        assert i_like.roots(2) == {
            ExactNonzeroComplex.from_parts({}, Fraction(1, 4)),
            ExactNonzeroComplex.from_parts({}, Fraction(3, 4)),
        }

    @given(exact_values, st.integers(min_value=1, max_value=6))
    @settings(max_examples=200)
    def test_roots_are_roots_and_distinct(self, a, n):
        rs = a.roots(n)
        assert len(rs) == n
        for r in rs:
            assert r.pow(n) == a


class TestLinalg:
    def test_nullspace_examples(self):
        assert rational_nullspace([[1, -1]]) == ((Fraction(1), Fraction(1)),)
        assert rational_nullspace([[1, 0], [0, 1]]) == ()
        basis = rational_nullspace([[2, 0, -1]])
        assert len(basis) == 2
        # contains the direction (1, 0, 2)
        target = (Fraction(1), Fraction(0), Fraction(2))
        found = any(
            all(x * target[0] == v[0] * tx for x, tx in zip(v, target))
            for v in basis
            if v[0] != 0
        )
        assert found

    @given(
        st.lists(
            st.lists(st.integers(-4, 4), min_size=3, max_size=3),
            min_size=1,
            max_size=3,
        )
    )
    def test_nullspace_kills_matrix(self, rows):
        for v in rational_nullspace(rows):
            for row in rows:
                assert sum(a * x for a, x in zip(row, v)) == 0
        assert len(rational_nullspace(rows)) == 3 - rank(rows)

    def test_positive_examples(self):
        assert strict_positive_solution([[1, -1]]) is not None
        assert strict_positive_solution([[1, 1]]) is None
        w = strict_positive_solution([[3, -1]])
        assert w is not None and 3 * w[0] == w[1]

    def test_rational_matrix_shape(self):
        m = RationalMatrix.from_rows([[1, 2], [3, 4]])
        assert (m.rows, m.cols) == (2, 2)
        with pytest.raises(ValueError):
            RationalMatrix.from_rows([[1], [2, 3]])

    @pytest.mark.parametrize("seed", range(6))
    def test_positive_matches_fourier_motzkin(self, seed):
        rng = random.Random(1000 + seed)
        for _ in range(60):
            n = rng.randint(1, 4)
            m = rng.randint(1, 3)
            A = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(m)]
            witness = strict_positive_solution(A)
            feasible = fourier_motzkin_feasible(A)
            assert (witness is not None) == feasible
            if witness is not None:
                assert all(x > 0 for x in witness)


class TestSmith:
    @given(
        st.lists(
            st.lists(st.integers(-9, 9), min_size=1, max_size=4),
            min_size=1,
            max_size=4,
        ).filter(lambda rows: len({len(r) for r in rows}) == 1)
    )
    @settings(max_examples=150)
    def test_snf_decomposition(self, rows):
        U, D, V = smith_normal_form(rows)
        m, n = len(rows), len(rows[0])
        # U A V == D
        prod = _mat_mul(_mat_mul([list(r) for r in U.entries], rows), [list(r) for r in V.entries])
        assert prod == [list(r) for r in D.entries]
        assert _det(U.entries) in (1, -1)
        assert _det(V.entries) in (1, -1)
        divisors = [D.entries[i][i] for i in range(min(m, n))]
        for i in range(m):
            for j in range(n):
                if i != j:
                    assert D.entries[i][j] == 0
        nz = [d for d in divisors if d != 0]
        assert all(d > 0 for d in nz)
        for a, b in zip(nz, nz[1:]):
            assert b % a == 0


def _mat_mul(a, b):
    return [
        [sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))]
        for i in range(len(a))
    ]


def _det(entries):
    m = [list(map(Fraction, row)) for row in entries]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return det


class TestPowerSystems:
    def test_single_square(self):
        sol = solve_power_system([[2]], [ExactNonzeroComplex.from_rational(4)])
        assert sol.consistent and sol.branch_count == 2
        values = {s[0] for s in sol.solutions}
        assert values == {
            ExactNonzeroComplex.from_rational(2),
            ExactNonzeroComplex.from_rational(-2),
        }

    def test_coprime_unique(self):
        sol = solve_power_system(
            [[2], [3]],
            [ExactNonzeroComplex.from_rational(4), ExactNonzeroComplex.from_rational(8)],
        )
        assert sol.consistent and sol.branch_count == 1
        assert sol.solutions[0][0] == ExactNonzeroComplex.from_rational(2)

    def test_contradictory(self):
        sol = solve_power_system(
            [[2], [4]],
            [
                ExactNonzeroComplex.from_rational(4),
                ExactNonzeroComplex.from_parts({2: 4}, Fraction(1, 2)),
            ],
        )
        assert not sol.consistent
        assert sol.violated_equation == 1

    def test_kernel_rank(self):
        # mu1 * mu2^{-1} = 4 has a one-dimensional solution torus
        sol = solve_power_system([[1, -1]], [ExactNonzeroComplex.from_rational(4)])
        assert sol.consistent
        assert sol.kernel_rank == 1
        assert sol.branch_count == 1

    @pytest.mark.parametrize("seed", range(8))
    def test_against_grid_oracle(self, seed):
        rng = random.Random(7000 + seed)
        for _ in range(40):
            m = rng.randint(1, 3)
            n = rng.randint(1, 3)
            M = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(m)]
            if rng.random() < 0.6:
                # consistent by construction: plug in a random mu
                mu = [random_value(rng, primes=(2, 3), arg_dens=(1, 2, 4)) for _ in range(n)]
                values = []
                for row in M:
                    acc = ExactNonzeroComplex.one()
                    for e, x in zip(row, mu):
                        acc = acc * x.pow(e)
                    values.append(acc)
            else:
                values = [random_value(rng, primes=(2, 3), arg_dens=(1, 2, 4)) for _ in range(m)]
            from ncd_moduli.exactnum import elementary_divisors

            divisors = elementary_divisors(M) or (1,)
            L = lcm(*divisors) * lcm(1, *[v.arg.denominator for v in values])
            if L > 24:
                continue
            sol = solve_power_system(M, values)
            assert sol.consistent == power_system_oracle_consistent(M, values, L)
            if sol.consistent:
                for s in sol.solutions:
                    assert verify_solution(M, values, s)
                if sol.kernel_rank == 0:
                    grid = arg_grid_solutions(M, [v.arg for v in values], L)
                    assert len(grid) == sol.branch_count
