from fractions import Fraction
from itertools import permutations
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from topophase.exactlinalg import (
    convex_feasible,
    determinant,
    kernel_lattice,
    rank_rational,
    solve_rational,
)

W3_ROWS = [(1, -1, -1), (-1, 1, -1), (-1, -1, 1)]


def brute_force_det(rows):
    """Permutation-sum oracle, independent of the Bareiss path."""
    n = len(rows)
    total = 0
    for perm in permutations(range(n)):
        sign = 1
        seen = list(perm)
        for i in range(n):  # count inversions for the parity
            for j in range(i + 1, n):
                if seen[i] > seen[j]:
                    sign = -sign
        term = sign
        for i in range(n):
            term *= rows[i][perm[i]]
        total += term
    return total


small_matrices = st.integers(1, 4).flatmap(
    lambda n: st.lists(
        st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=n, max_size=n
    )
)


class TestDeterminant:
    def test_one_by_one(self):
        assert determinant([[5]]) == 5

    def test_w3_sign_matrix(self):
        assert determinant(W3_ROWS) == -4

    def test_repeated_rows(self):
        assert determinant([[1, 2], [1, 2]]) == 0

    def test_non_square_rejected(self):
        with pytest.raises(ValueError):
            determinant([[1, 2, 3], [4, 5, 6]])

    @settings(max_examples=150, deadline=None)
    @given(small_matrices)
    def test_matches_permutation_sum(self, rows):
        assert determinant(rows) == brute_force_det(rows)


class TestKernelLattice:
    def test_antipodal_pair(self):
        assert kernel_lattice([(1, 1, 1), (-1, -1, -1)]) == [(1, 1)]

    def test_full_rank_w3(self):
        assert kernel_lattice(W3_ROWS) == []

    def test_identity(self):
        assert kernel_lattice([(1, 0), (0, 1)]) == []

    @settings(max_examples=150, deadline=None)
    @given(
        st.integers(1, 5).flatmap(
            lambda n: st.lists(
                st.lists(st.integers(-4, 4), min_size=n, max_size=n),
                min_size=1,
                max_size=7,
            )
        )
    )
    def test_basis_annihilates_and_is_primitive(self, rows):
        ncols = len(rows[0])
        basis = kernel_lattice(rows)
        for vec in basis:
            assert len(vec) == len(rows)
            for k in range(ncols):
                assert sum(c * rows[j][k] for j, c in enumerate(vec)) == 0
            assert gcd(*vec) == 1
        # basis size matches the rank deficiency computed independently
        assert len(basis) == len(rows) - rank_rational(rows)


class TestSolveRational:
    def test_scalar(self):
        assert solve_rational([(2,)], [3]) == ((Fraction(3, 2),), 0)

    def test_ghz3_system(self):
        # angles + phase unknowns, rhs in units of pi
        sol = solve_rational([(1, 1, 1, -1), (-1, -1, -1, -1)], [0, 2])
        assert sol is not None
        x, free = sol
        assert x[3] == -1  # raw phase component, -pi
        assert free == 2

    def test_inconsistent(self):
        assert solve_rational([(1,), (1,)], [0, 1]) is None

    @settings(max_examples=150, deadline=None)
    @given(
        st.integers(1, 4).flatmap(
            lambda n: st.tuples(
                st.lists(
                    st.lists(st.integers(-5, 5), min_size=n, max_size=n),
                    min_size=1,
                    max_size=6,
                ),
                st.just(n),
            )
        ),
        st.data(),
    )
    def test_solution_substitutes(self, rows_n, data):
        rows, n = rows_n
        rhs = data.draw(
            st.lists(st.integers(-5, 5), min_size=len(rows), max_size=len(rows))
        )
        sol = solve_rational(rows, rhs)
        if sol is None:
            # independent consistency check: augmenting must raise the rank
            assert rank_rational([list(r) + [b] for r, b in zip(rows, rhs)]) > rank_rational(rows)
            return
        x, free = sol
        for row, b in zip(rows, rhs):
            assert sum(Fraction(a) * v for a, v in zip(row, x)) == b
        assert free == n - rank_rational(rows)


class TestConvexFeasible:
    def test_antipodal(self):
        assert convex_feasible([(1, 1, 1), (-1, -1, -1)]) == (Fraction(1, 2), Fraction(1, 2))

    def test_w3_infeasible(self):
        assert convex_feasible(W3_ROWS) is None

    def test_even_parity_corners(self):
        rows = [(-1, -1, -1), (-1, 1, 1), (1, -1, 1), (1, 1, -1)]
        assert convex_feasible(rows) == (Fraction(1, 4),) * 4

    def test_certificates_substitute(self):
        import random

        rng = random.Random(20240817)
        for _ in range(200):
            n = rng.randint(1, 5)
            m = rng.randint(1, 10)
            rows = [
                tuple(rng.choice((-1, 1)) for _ in range(n)) for _ in range(m)
            ]
            lam = convex_feasible(rows)
            if lam is None:
                continue
            assert sum(lam) == 1
            assert all(f >= 0 for f in lam)
            for k in range(n):
                assert sum(f * row[k] for f, row in zip(lam, rows)) == 0

    def test_agrees_with_float_lp(self):
        import random

        import numpy as np
        from scipy.optimize import linprog

        rng = random.Random(99)
        for _ in range(120):
            n = rng.randint(1, 4)
            m = rng.randint(1, 8)
            rows = [
                tuple(rng.randint(-3, 3) for _ in range(n)) for _ in range(m)
            ]
            exact = convex_feasible(rows) is not None
            a_eq = np.vstack([np.array(rows, dtype=float).T, np.ones(m)])
            b_eq = np.zeros(n + 1)
            b_eq[-1] = 1.0
            res = linprog(np.zeros(m), A_eq=a_eq, b_eq=b_eq, bounds=[(0, None)] * m,
                          method="highs")
            assert exact == res.success
