import random
from fractions import Fraction
from math import lcm

import pytest

from conftest import (
    FIVE_QUBIT_MAXLEN_PI4,
    FIVE_QUBIT_MAXLEN_PI5,
    FIVE_QUBIT_PRINTED_THIRD,
    FIVE_QUBIT_SIX_TERM,
    SEVEN_QUBIT_PI18,
    WORKED_SEVEN_QUBIT_SUPPORT,
    WORKED_SEVEN_QUBIT_STRUCTURE,
)
from topophase.balance import (
    PhaseSet,
    affine_certificate,
    analysis_report,
    bezout_inequivalence,
    classify,
    construct_state,
    convex_certificate,
    irreducibility,
    is_irreducible_maximal_length,
    phase_set,
    positive_maximal_kernel,
    solve_stabilizer,
    telescope,
    winding_for_phase,
)
from topophase.search import CombinatorialStructure
from topophase.states import (
    WeightMatrix,
    ghz_state,
    ones_plus_w_state,
    support_state,
    tensor_product,
    w_state,
    weight_matrix,
    zeros_plus_w_state,
)

ROTATED_GHZ3 = ["000", "011", "101", "110"]


def wm(state):
    return weight_matrix(state)


def random_support_state(rng, n, m=None):
    m = m or rng.randint(2, min(2 ** n, 12))
    bits = rng.sample([format(i, f"0{n}b") for i in range(2 ** n)], m)
    return support_state(n, bits)


class TestPhaseSet:
    def test_ghz3(self):
        ps = phase_set(wm(ghz_state(3)))
        assert ps.d == 2 and ps.chi_min == Fraction(1)

    def test_ghz3_rotated_basis(self):
        ps = phase_set(wm(support_state(3, ROTATED_GHZ3)))
        assert ps.d == 4 and ps.chi_min == Fraction(1, 2)

    def test_w3_continuous(self):
        ps = phase_set(wm(w_state(3)))
        assert ps.continuous and ps.chi_min is None

    def test_ones_plus_w_four_qubits(self):
        ps = phase_set(wm(ones_plus_w_state(4)))
        assert ps.d == 6 and ps.chi_min == Fraction(1, 3)

    def test_single_term_trivial(self):
        assert phase_set(wm(support_state(3, ["010"]))).continuous

    def test_odd_d_rejected(self):
        with pytest.raises(ValueError):
            PhaseSet(3)

    def test_invariances_and_even_sums(self):
        from topophase.exactlinalg import kernel_lattice

        rng = random.Random(20240201)
        for _ in range(150):
            n = rng.randint(2, 6)
            state = random_support_state(rng, n)
            w = wm(state)
            d = phase_set(w).d
            assert d % 2 == 0
            for vec in kernel_lattice(w.rows):
                assert sum(vec) % 2 == 0
            rows = list(w.rows)
            rng.shuffle(rows)
            assert phase_set(WeightMatrix(w.m, w.n, tuple(rows))).d == d
            perm = rng.sample(range(n), n)
            permuted = tuple(tuple(r[k] for k in perm) for r in w.rows)
            assert phase_set(WeightMatrix(w.m, w.n, permuted)).d == d
            k = rng.randrange(n)
            negated = tuple(
                tuple(-x if j == k else x for j, x in enumerate(r)) for r in w.rows
            )
            assert phase_set(WeightMatrix(w.m, w.n, negated)).d == d


class TestCertificates:
    def test_ghz3_affine(self):
        cert = affine_certificate(wm(ghz_state(3)))
        assert cert.coefficients == (1, 1) and cert.total == 2

    def test_zeros_plus_w_affine_only(self):
        w = wm(zeros_plus_w_state(3))
        cert = affine_certificate(w)
        assert sorted(cert.coefficients) == [-1, 1, 1, 1]
        assert cert.total == 2
        assert convex_certificate(w) is None

    def test_w3_no_affine(self):
        assert affine_certificate(wm(w_state(3))) is None

    def test_ghz3_convex(self):
        assert convex_certificate(wm(ghz_state(3))).coefficients == (1, 1)

    def test_six_term_five_qubit_all_ones(self):
        cert = convex_certificate(wm(support_state(5, FIVE_QUBIT_SIX_TERM)))
        assert cert.coefficients == (1,) * 6

    def test_affine_iff_discrete(self):
        rng = random.Random(4242)
        for _ in range(150):
            state = random_support_state(rng, rng.randint(2, 5))
            w = wm(state)
            assert (affine_certificate(w) is not None) == (phase_set(w).d != 0)

    def test_convex_implies_affine(self):
        rng = random.Random(777)
        for _ in range(150):
            state = random_support_state(rng, rng.randint(2, 5))
            w = wm(state)
            if convex_certificate(w) is not None:
                assert affine_certificate(w) is not None


class TestIrreducibility:
    def test_ghz3_irreducible(self):
        res = irreducibility(wm(ghz_state(3)))
        assert res.irreducible and res.support == (0, 1)

    def test_antipodal_pair_dominates(self):
        res = irreducibility(wm(support_state(3, ["000", "111", "110"])))
        assert not res.irreducible
        assert res.support == (0, 1)

    def test_five_qubit_maximal_irreducible(self):
        res = irreducibility(wm(support_state(5, FIVE_QUBIT_MAXLEN_PI5)))
        assert res.irreducible and len(res.support) == 6

    def test_non_a_state_rejected(self):
        with pytest.raises(ValueError, match="a-state"):
            irreducibility(wm(w_state(3)))


class TestMaximalLength:
    def test_seven_qubit_example(self):
        assert is_irreducible_maximal_length(wm(support_state(7, SEVEN_QUBIT_PI18)))

    def test_ghz4_not_maximal(self):
        assert not is_irreducible_maximal_length(wm(ghz_state(4)))

    def test_determinant_test_vs_positive_kernel(self):
        # The determinant test alone can pass for a support whose dependence
        # skips a row (coefficient zero); the positive-kernel check refines it.
        rows = ((1, 1), (1, -1), (-1, 1))
        w = WeightMatrix(3, 2, rows)
        assert is_irreducible_maximal_length(w)
        assert positive_maximal_kernel(rows) is None

    def test_positive_kernel_on_worked_states(self):
        assert positive_maximal_kernel(
            wm(support_state(5, FIVE_QUBIT_MAXLEN_PI5)).rows
        ) == (3, 2, 2, 1, 1, 1)
        assert positive_maximal_kernel(
            wm(support_state(7, SEVEN_QUBIT_PI18)).rows
        ) == (8, 7, 6, 5, 4, 3, 2, 1)


class TestSolveStabilizer:
    def test_ghz3_pi(self):
        sol = solve_stabilizer(wm(ghz_state(3)), (0, 1))
        assert sol.chi == 1  # normalized from -pi to +pi
        assert sol.free_parameters == 2

    def test_ghz3_identity_class(self):
        assert solve_stabilizer(wm(ghz_state(3)), (0, 0)).chi == 0

    def test_rows_satisfied_exactly(self):
        rng = random.Random(5150)
        w = wm(support_state(7, SEVEN_QUBIT_PI18))
        for _ in range(25):
            winding = tuple(rng.randint(-3, 3) for _ in range(w.m))
            sol = solve_stabilizer(w, winding)
            assert sol is not None and sol.free_parameters == 0
            assert -1 < sol.chi <= 1
            assert (sol.chi * 18).denominator == 1  # multiple of pi/18
            for row, a in zip(w.rows, sol.winding):
                assert sum(l * f for l, f in zip(row, sol.phis)) == sol.chi + 2 * a

    def test_inconsistent_winding(self):
        # reducible support: the antipodal pair forces a relation among rhs
        w = wm(support_state(3, ["000", "111", "100", "011"]))
        assert solve_stabilizer(w, (0, 0, 0, 1)) is None

    def test_winding_for_phase_hits_chi_min(self):
        for support, d in [
            (FIVE_QUBIT_SIX_TERM, 6),
            (FIVE_QUBIT_MAXLEN_PI5, 10),
            (SEVEN_QUBIT_PI18, 36),
        ]:
            w = wm(support_state(len(support[0]), support))
            winding = winding_for_phase(w)
            sol = solve_stabilizer(w, winding)
            assert sol.chi == Fraction(2, d)

    def test_winding_for_phase_multidim_kernel(self):
        state = tensor_product(ghz_state(2), ghz_state(2))
        w = wm(state)
        winding = winding_for_phase(w)
        assert solve_stabilizer(w, winding).chi == 1

    def test_winding_for_phase_continuous(self):
        assert winding_for_phase(wm(w_state(3))) is None


class TestConstructState:
    def test_worked_seven_qubit_state(self):
        state = construct_state(WORKED_SEVEN_QUBIT_STRUCTURE)
        assert list(state.support) == WORKED_SEVEN_QUBIT_SUPPORT

    def test_ghz_class_representative(self):
        structure = CombinatorialStructure(3, (1, 1, 1), 1, ((0,), (1,), (2,)))
        state = construct_state(structure)
        assert list(state.support) == ["111", "100", "010", "001"]

    def test_ones_plus_w_representative(self):
        structure = CombinatorialStructure(
            5, (1, 1, 1, 1, 1), 1, ((0,), (1,), (2,), (3,), (4,))
        )
        assert construct_state(structure) == ones_plus_w_state(5)

    def test_bad_pattern_sum_rejected(self):
        structure = CombinatorialStructure(3, (2, 1, 1), 1, ((0,), (1,), (2,)))
        with pytest.raises(ValueError, match="sum"):
            construct_state(structure)


class TestTelescope:
    def test_ghz3_column_in_span(self):
        out = telescope(ghz_state(3), (1, -1))
        assert out.n == 4
        a, b = out.support
        assert all(x != y for x, y in zip(a, b))  # antipodal pair
        assert phase_set(wm(out)).d == 2

    def test_ghz3_column_outside_span(self):
        with pytest.raises(ValueError, match="span"):
            telescope(ghz_state(3), (1, 1))

    def test_duplicated_column_preserves_d(self):
        state = support_state(5, FIVE_QUBIT_SIX_TERM)
        col = tuple(row[0] for row in wm(state).rows)
        out = telescope(state, col)
        assert out.n == 6
        assert phase_set(wm(out)).d == 6

    def test_random_extensions_preserve_d(self):
        rng = random.Random(31415)
        bases = [
            support_state(5, FIVE_QUBIT_SIX_TERM),
            support_state(5, FIVE_QUBIT_MAXLEN_PI5),
            support_state(7, SEVEN_QUBIT_PI18),
            ghz_state(4),
        ]
        for _ in range(40):
            state = rng.choice(bases)
            w = wm(state)
            k = rng.randrange(state.n)
            sign = rng.choice((1, -1))
            col = tuple(sign * row[k] for row in w.rows)
            out = telescope(state, col)
            assert phase_set(wm(out)).d == phase_set(w).d


class TestBezout:
    def test_five_qubit_pairs(self):
        allowed = {1, 2, 3, 4, 5}
        assert bezout_inequivalence(3, 4, allowed)
        assert bezout_inequivalence(3, 5, allowed)
        assert not bezout_inequivalence(1, 2, allowed)
        assert not bezout_inequivalence(2, 4, allowed)

    def test_seven_qubit_pair(self):
        assert bezout_inequivalence(17, 18, set(range(1, 19)))

    def test_invalid(self):
        with pytest.raises(ValueError):
            bezout_inequivalence(0, 3, {1})


class TestClassify:
    def test_ghz3(self):
        flags = classify(ghz_state(3))
        assert (flags.n_partite_entangled, flags.a_state, flags.c_state,
                flags.semistable_certified) == (True, True, True, False)

    def test_w3(self):
        flags = classify(w_state(3))
        assert (flags.n_partite_entangled, flags.a_state, flags.c_state,
                flags.semistable_certified) == (True, False, False, False)

    def test_five_qubit_maximal(self):
        flags = classify(support_state(5, FIVE_QUBIT_MAXLEN_PI5))
        assert (flags.n_partite_entangled, flags.a_state, flags.c_state,
                flags.semistable_certified) == (True, True, True, True)

    def test_product_state_not_n_partite(self):
        flags = classify(tensor_product(ghz_state(2), ghz_state(2)))
        assert not flags.n_partite_entangled
        assert flags.a_state

    def test_single_term(self):
        flags = classify(support_state(2, ["01"]))
        assert flags.single_term and not flags.a_state


class TestPrintedThirdFiveQubitState:
    """The third five-qubit display in the published reference tables picks the singular
    pair 4-cycle {1,2},{2,3},{3,4},{4,1} for the structure ({2,1,1,1,1}, Z=2),
    so the printed support is reducible with chi_min pi/2.  A nonsingular
    selection yields the intended pi/4 state."""

    def test_printed_state_is_reducible_pi_half(self):
        w = wm(support_state(5, FIVE_QUBIT_PRINTED_THIRD))
        assert phase_set(w).d == 4  # chi_min pi/2, not pi/4
        assert not is_irreducible_maximal_length(w)
        assert not irreducibility(w).irreducible

    def test_printed_selection_fails_uniqueness(self):
        from topophase.search import uniqueness_check

        printed_selection = CombinatorialStructure(
            5, (2, 1, 1, 1, 1), 2, ((0,), (1, 2), (2, 3), (3, 4), (1, 4))
        )
        assert not uniqueness_check(printed_selection)
        state = construct_state(printed_selection)
        assert list(state.support) == FIVE_QUBIT_PRINTED_THIRD

    def test_valid_selection_gives_quarter_phase(self):
        structure = CombinatorialStructure(
            5, (2, 1, 1, 1, 1), 2, ((0,), (1, 2), (1, 3), (1, 4), (2, 3))
        )
        state = construct_state(structure)
        assert list(state.support) == FIVE_QUBIT_MAXLEN_PI4
        w = wm(state)
        assert positive_maximal_kernel(w.rows) == (2, 2, 1, 1, 1, 1)
        assert phase_set(w).chi_min == Fraction(1, 4)


class TestProductPhases:
    def test_ghz2_ghz2_sumset(self):
        state = tensor_product(ghz_state(2), ghz_state(2))
        assert phase_set(wm(state)).d == 2  # {0, pi} + {0, pi} = {0, pi}

    def test_ghz2_with_pi3_factor(self):
        state = tensor_product(ghz_state(2), ones_plus_w_state(4))
        d1 = phase_set(wm(ghz_state(2))).d
        d2 = phase_set(wm(ones_plus_w_state(4))).d
        assert phase_set(wm(state)).d == lcm(d1, d2)


class TestAnalysisReport:
    def test_ghz3_report(self):
        rep = analysis_report(ghz_state(3))
        assert rep["d"] == 2
        assert rep["chi_min"] == {"num": 1, "den": 1}
        assert rep["certificate"] == [1, 1]
        assert rep["certificate_kind"] == "convex"
        assert rep["irreducible"] is True
        assert rep["maximal_length"] is False

    def test_w3_report(self):
        rep = analysis_report(w_state(3))
        assert rep["chi_min"] == "continuous"
        assert rep["certificate"] is None

    def test_seven_qubit_report(self):
        rep = analysis_report(support_state(7, SEVEN_QUBIT_PI18))
        assert rep["d"] == 36
        assert rep["chi_min"] == {"num": 1, "den": 18}
        assert rep["maximal_length"] is True
        assert rep["flags"]["semistable_certified"] is True
