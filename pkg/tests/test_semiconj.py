from fractions import Fraction as F
from math import floor

import pytest

from carcass.conjugacy import conjugate_by
from carcass.errors import DepthError, PreconditionError, ValidationError
from carcass.rational_pl import compose, kinks
from carcass.semiconj import (
    constant_solutions,
    dyadic_index_map,
    first_kink_check,
    initial_collinear_run,
    is_power_of_two,
    lattice_commutation_defects,
    lattice_identity_defects,
    lemma_3_5_check,
    nonlinearity_evidence,
    psi_exact,
    psi_lattice,
    tangent_estimate,
    verify_commutation,
    xi,
)
from carcass.unimodal import tent


def zigzag(t, x):
    """Distance-to-even-integer form of the t-tooth zig-zag."""
    y = t * x
    whole = floor(y)
    frac = y - whole
    return frac if whole % 2 == 0 else 1 - frac


@pytest.mark.parametrize("t", [1, 2, 3, 5, 6, 7])
def test_xi_matches_formula(t):
    z = xi(t)
    for den in (12, 16):
        for k in range(den + 1):
            assert z(F(k, den)) == zigzag(t, F(k, den))


def test_xi_small_cases():
    assert xi(2) == tent().map
    assert kinks(xi(1)) == []
    with pytest.raises(ValidationError):
        xi(0)


def test_xi_commutes_with_tent(tent_map):
    for t in range(1, 9):
        assert verify_commutation(xi(t), tent_map)


def test_composition_multiplies_index(tent_map):
    assert compose(xi(2), xi(3)) == xi(6)


class TestExact:
    def test_psi3_on_g_A(self, h_A, g_A):
        sol = psi_exact(h_A, 3)
        assert sol.source == g_A
        assert sol.body.breakpoints == (
            (0, 0), (F(1, 12), F(1, 4)), (F(1, 6), 1), (F(1, 4), F(1, 4)),
            (F(1, 2), 0), (F(3, 4), F(1, 4)), (1, 1),
        )

    def test_first_kink(self, h_A, g_A):
        r = first_kink_check(g_A, psi_exact(h_A, 3))
        assert r.passed and r.predicted == r.actual == F(1, 12)

    def test_first_kink_preconditions(self, h_A, g_A):
        with pytest.raises(PreconditionError):
            first_kink_check(g_A, psi_exact(h_A, 2))
        with pytest.raises(PreconditionError):
            first_kink_check(g_A, psi_lattice(g_A, 3, 4))

    def test_constants(self, g_A, tent_map):
        assert constant_solutions(tent_map) == [0, F(2, 3)]
        assert constant_solutions(g_A) == [0, F(1, 2)]


class TestIndexMap:
    @pytest.mark.parametrize("t", [1, 2, 3, 5, 6])
    def test_matches_xi(self, t):
        for n in range(1, 7):
            size = 2 ** (n - 1)
            for k in range(size + 1):
                assert F(dyadic_index_map(t, n, k), size) == zigzag(t, F(k, size))

    def test_range(self):
        with pytest.raises(ValidationError):
            dyadic_index_map(3, 3, 5)


class TestLattice:
    def test_g_B_level_3(self, g_B):
        pts = psi_lattice(g_B, 3, 3).points
        assert pts == ((0, 0), (F(1, 9), F(7, 9)), (F(1, 3), F(1, 3)), (F(7, 9), F(1, 9)), (1, 1))

    def test_commutes_on_nodes(self, g_B, g_A):
        for g in (g_A, g_B):
            for t in (2, 3, 5):
                assert lattice_commutation_defects(g, t, 7) == []

    def test_identity_against_exact(self, h_A, g_A):
        psi = psi_exact(h_A, 5).body
        assert lattice_identity_defects(psi, g_A, 5, 8) == []
        assert lattice_identity_defects(xi(5), g_A, 5, 6)

    def test_tangent_estimates(self, g_A, g_B, tent_map):
        assert tangent_estimate(tent_map, 5, 6) == 5
        assert tangent_estimate(g_A, 3, 6) == 3
        assert {tangent_estimate(g_B, 3, n) for n in (3, 5, 7)} == {7}
        with pytest.raises(DepthError):
            tangent_estimate(g_A, 5, 3)


class TestNonlinearity:
    def test_g_B_grows(self, g_B):
        p = nonlinearity_evidence(g_B, 3, 4, 8)
        assert p.counts == (6, 13, 27, 55, 111) and p.verdict == "non-pl-evidence"

    def test_g_A_settles(self, g_A):
        p = nonlinearity_evidence(g_A, 3, 4, 8)
        assert p.counts == (7, 9, 9, 9, 9) and p.verdict == "pl-consistent"

    def test_tent_t7(self, tent_map):
        p = nonlinearity_evidence(tent_map, 7, 4, 10)
        assert p.counts[1:] == (12,) * 6 and p.verdict == "pl-consistent"

    def test_range(self, g_A):
        with pytest.raises(DepthError):
            nonlinearity_evidence(g_A, 3, 2, 6)


class TestShareUniformity:
    def test_powers(self):
        assert [t for t in range(1, 17) if is_power_of_two(t)] == [1, 2, 4, 8, 16]

    def test_collinear_run(self):
        pts = [(0, 0), (F(1, 4), F(1, 2)), (F(1, 2), 1), (F(3, 4), F(1, 2))]
        assert initial_collinear_run(pts) == 3
        assert initial_collinear_run([(F(1, 2), 0)]) == 1

    def test_tent_and_g_A_pass(self, tent_map, g_A):
        r = lemma_3_5_check(tent_map, 3, 8)
        assert r.status == "pass" and r.collinear_nodes == 43
        r = lemma_3_5_check(g_A, 3, 8)
        assert r.status == "pass" and r.collinear_nodes == 22
        assert set(r.delta_table.values()) == {F(1, 2)}

    def test_g_B_hypothesis_fails(self, g_B):
        r = lemma_3_5_check(g_B, 3, 8)
        assert r.status == "not-applicable-hypothesis" and r.collinear_nodes == 3

    def test_power_of_two_skipped(self, g_A):
        assert lemma_3_5_check(g_A, 4, 8).status == "not-applicable"


def test_corpus_first_kink(corpus):
    for h in corpus[:20]:
        g = conjugate_by(h)
        for t in (3, 5, 6):
            assert first_kink_check(g, psi_exact(h, t)).passed
