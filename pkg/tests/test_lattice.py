from fractions import Fraction as F

import pytest

from carcass.conjugacy import conjugate_by
from carcass.errors import DepthError, LatticeIndexError, PreconditionError, ResourceError, ValidationError
from carcass.lattice import (
    build_lattice,
    delta,
    deltas,
    image_interval,
    index_binary,
    interval_length,
    interval_lengths,
    next_level,
    point_cap,
    structure_report,
)
from carcass.rational_pl import PLMap, preimage_points
from carcass.unimodal import firmness, iterate, validate_carcass

from conftest import homeomorphism_corpus


def preimage_oracle(g, nodes):
    """g^{-1}(nodes) by brute-force solving on every linear piece."""
    out = set()
    for y in nodes:
        out.update(preimage_points(g.map, y))
    return tuple(sorted(out))


class TestLevels:
    def test_tent_level_4(self, tent_map):
        L = build_lattice(tent_map, 4)
        assert L.level(4) == tuple(F(k, 8) for k in range(9))

    def test_g_B_level_3(self, g_B):
        assert build_lattice(g_B, 3).level(3) == (0, F(1, 9), F(1, 3), F(7, 9), 1)

    def test_g_A_level_3(self, g_A):
        assert build_lattice(g_A, 3).level(3) == (0, F(1, 8), F(1, 4), F(5, 8), 1)

    @pytest.mark.parametrize("name", ["tent_map", "g_A", "g_B"])
    def test_matches_brute_force(self, request, name):
        g = request.getfixturevalue(name)
        L = build_lattice(g, 7)
        for n in range(1, 7):
            assert L.level(n + 1) == preimage_oracle(g, L.level(n))
            assert all(iterate(g, x, n) == 0 for x in L.level(n))

    def test_nesting_and_counts(self, g_B):
        L = build_lattice(g_B, 9)
        for n in range(1, 9):
            assert len(L.level(n)) == 2 ** (n - 1) + 1
            assert all(L.mu(n, k) == L.mu(n + 1, 2 * k) for k in range(2 ** (n - 1) + 1))

    def test_next_level_from_level_1(self, tent_map):
        assert next_level(tent_map, (F(0), F(1))) == (0, F(1, 2), 1)

    def test_index_errors(self, tent_map):
        L = build_lattice(tent_map, 3)
        for call in (lambda: L.level(4), lambda: L.mu(3, 5), lambda: interval_length(L, 2, 2), lambda: delta(L, 3, 0)):
            with pytest.raises(LatticeIndexError):
                call()
        with pytest.raises(ValidationError):
            build_lattice(tent_map, 0)

    def test_point_cap(self, tent_map):
        with pytest.raises(ResourceError):
            build_lattice(tent_map, 8, max_points=100)
        with point_cap(100):
            with pytest.raises(ResourceError):
                build_lattice(tent_map, 8)
        assert build_lattice(tent_map, 8).depth == 8


class TestIntervals:
    def test_g_B_lengths(self, g_B):
        L = build_lattice(g_B, 3)
        assert interval_lengths(L, 3) == [F(1, 9), F(2, 9), F(4, 9), F(2, 9)]
        assert sum(interval_lengths(L, 3)) == 1

    def test_g_B_deltas(self, g_B):
        L = build_lattice(g_B, 5)
        assert deltas(L, 3) == [F(1, 3), F(2, 3), F(1, 3), F(2, 3)]

    def test_tent_deltas(self, tent_map):
        L = build_lattice(tent_map, 6)
        assert all(d == F(1, 2) for n in range(1, 6) for d in deltas(L, n))

    def test_g_B_counterexample_lengths(self, g_B):
        L = build_lattice(g_B, 4)
        assert interval_length(L, 4, 6) == F(4, 27)
        assert F(16, 27) == F(4, 1) * interval_length(L, 4, 4)

    @pytest.mark.parametrize("k, digits, bits", [(0, 3, [0, 0, 0]), (6, 3, [1, 1, 0]), (5, 4, [0, 1, 0, 1])])
    def test_index_binary(self, k, digits, bits):
        assert index_binary(k, digits) == bits

    def test_index_binary_overflow(self):
        with pytest.raises(ValidationError):
            index_binary(8, 3)

    def test_image_interval(self, g_A):
        L = build_lattice(g_A, 5)
        for n in range(2, 6):
            for k in range(2 ** (n - 1)):
                kp, keeps = image_interval(L, n, k)
                lo, hi = g_A(L.mu(n, k)), g_A(L.mu(n, k + 1))
                assert {lo, hi} == {L.mu(n - 1, kp), L.mu(n - 1, kp + 1)}
                assert (lo < hi) == keeps


def test_conjugacy_transports_nodes(corpus):
    """Lattice of h∘T∘h⁻¹ is h applied to the dyadic tent lattice."""
    for h in corpus[:10]:
        g = conjugate_by(h)
        L = build_lattice(g, 7)
        for n in range(1, 8):
            assert L.level(n) == tuple(h(F(k, 2 ** (n - 1))) for k in range(2 ** (n - 1) + 1))


class TestStructure:
    def report(self, g, depth):
        return structure_report(build_lattice(g, depth), firmness(g))

    def test_tent(self, tent_map):
        r = self.report(tent_map, 10)
        assert r.delta_table == {j: F(1, 2) for j in range(4)}
        assert r.l_constants == (1, 1, 1, 1)
        for c in (r.digit_dependence, r.orientation_transport, r.remark_2_11, r.remark_2_9,
                  r.remark_2_9_tracked, r.remark_3_4):
            assert c.holds, c.name
        assert r.variant_holding(r.remark_2_12) == ["remark_2_12[sum from 0]"]
        assert r.variant_holding(r.remark_3_3) == ["remark_3_3[sum from 0, cubed]"]

    def test_g_B(self, g_B):
        r = self.report(g_B, 10)
        assert r.delta_table == {0: F(1, 3), 1: F(2, 3), 2: F(1, 3), 3: F(2, 3)}
        assert r.l_constants == (1, 2, 4, 2)
        assert r.digit_dependence.holds and r.remark_3_4.holds and r.remark_2_9_tracked.holds
        v = r.remark_2_9.violation_at(4, 6)
        assert (v.expected, v.actual) == (F(16, 27), F(4, 27))

    def test_g_A(self, g_A):
        r = self.report(g_A, 13)
        assert r.n0 == 3
        assert r.l_constants == (1, 1, 1, 1, 3, 3, 3, 3)
        assert set(r.delta_table.values()) == {F(1, 2)}
        assert r.remark_3_4.holds and r.digit_dependence.holds

    def test_depth_and_firmness_required(self, tent_map):
        with pytest.raises(DepthError):
            self.report(tent_map, 8)
        stuck = validate_carcass(PLMap([(0, 0), ("1/2", 1), ("3/5", "3/5"), (1, 0)]))
        with pytest.raises(PreconditionError):
            structure_report(build_lattice(stuck, 3), firmness(stuck, 5))
