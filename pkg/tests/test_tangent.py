"""The codimension engine: extended/non-extended values, consistency checks."""

from __future__ import annotations

import random

import pytest

from germcalc.germ import Branch, MultiGerm
from germcalc.ring import Poly, StabilizationPolicy
from germcalc.tangent import (WilsonReport, a_codim, ae_codim, is_stable,
                              wilson_check, _codim_at_degree, _tangent_rows)
from germcalc._echelon import RowSpan
from germcalc.ring import monomials_up_to


def V(n, i):
    return Poly.variable(n, i)


def B(*comps):
    return Branch(tuple(comps))


def G(*branches):
    return MultiGerm(tuple(branches))


X, Y, Z = V(3, 0), V(3, 1), V(3, 2)
T = V(1, 0)


class TestAeCodim:
    def test_stable_fold(self):
        assert ae_codim(G(B(X, Y, Z * Z))).value == 0

    def test_quintic_form(self):
        g = G(B(X, Y, Z ** 5 + X * Z + Y * Z * Z))
        assert ae_codim(g).value == 1

    def test_plane_curve(self):
        g = G(Branch((T ** 2, T ** 5)))
        assert ae_codim(g).value == 2

    def test_fold_and_cusp_bigerm(self):
        g = G(B(X ** 3 + Y * X, Y, Z), B(X, Y * Y + Z ** 3, Z))
        assert ae_codim(g).value == 2

    def test_explicit_d0(self):
        g = G(B(X, Y, Z * Z))
        res = ae_codim(g, StabilizationPolicy(d0=5))
        assert res.value == 0 and res.degree_used == 6


class TestACodim:
    def test_plane_curve(self):
        # extended 2, one branch, (n, p) = (1, 2): non-extended = 2 - 1 + 2
        assert a_codim(G(Branch((T ** 2, T ** 5)))).value == 3

    def test_fold_pair_with_contact(self):
        # extended 2, r = 2, n = p = 3: non-extended = 2 + 3
        g = G(B(X, Y, Z * Z), B(X, Y, Z * Z + Y * Y + X ** 3))
        assert a_codim(g).value == 5


class TestWilson:
    def test_quintic_consistent(self):
        g = G(B(X, Y, Z ** 5 + X * Z + Y * Z * Z))
        assert wilson_check(g).status == WilsonReport.CONSISTENT

    def test_stable_not_applicable(self):
        assert wilson_check(G(B(X, Y, Z * Z))).status == WilsonReport.NOT_APPLICABLE

    def test_curve_consistent(self):
        report = wilson_check(G(Branch((T ** 2, T ** 5))))
        assert report.status == WilsonReport.CONSISTENT
        assert (report.extended, report.non_extended) == (2, 3)


class TestIsStable:
    def test_cuspidal_edge(self):
        assert is_stable(G(B(X, Y, Z ** 3 + Y * Z)))

    def test_cusp_curve(self):
        assert not is_stable(G(Branch((T ** 2, T ** 3))))

    def test_two_cusps_with_contact(self):
        g = G(B(X ** 3 + Z * X, Y, Z), B(X, Y, Z ** 3 + Y * Z))
        assert not is_stable(g)


class TestInvariance:
    def setup_method(self):
        self.g = G(B(X ** 3 + Y * X, Y, Z), B(X, Y * Y + Z ** 3, Z))
        self.base = ae_codim(self.g).value

    def test_branch_permutation(self):
        swapped = G(*reversed(self.g.branches))
        assert ae_codim(swapped).value == self.base

    def test_source_variable_permutation(self):
        perm = [2, 0, 1]
        branches = tuple(
            Branch(tuple(c.remap_variables(3, perm) for c in b.components))
            for b in self.g.branches)
        assert ae_codim(MultiGerm(branches)).value == self.base

    def test_common_target_linear_change(self):
        rng = random.Random(77)
        for _ in range(3):
            rows = [[1 if i == j else 0 for j in range(3)] for i in range(3)]
            for _ in range(6):
                i, j = rng.sample(range(3), 2)
                c = rng.randint(-2, 2)
                rows[i] = [a + c * b for a, b in zip(rows[i], rows[j])]
            branches = []
            for b in self.g.branches:
                comps = [sum((Poly.const(3, rows[i][j]) * b.components[j]
                              for j in range(3)), Poly.zero(3))
                         for i in range(3)]
                branches.append(Branch(tuple(comps)))
            assert ae_codim(MultiGerm(tuple(branches))).value == self.base


class TestBasis:
    @pytest.mark.parametrize("germ,value", [
        (G(Branch((T ** 2, T ** 5))), 2),
        (G(B(X, Y, Z ** 5 + X * Z + Y * Z * Z)), 1),
    ])
    def test_basis_matches_value_and_is_independent(self, germ, value):
        result = ae_codim(germ)
        assert result.value == value
        assert len(result.basis) == value

        # rebuild the tangent rows at the stabilized degree and check each
        # basis section is outside the span until adjoined
        d = result.degree_used
        slots = []
        for mono in monomials_up_to(germ.n, d):
            for b in range(germ.r):
                for l in range(germ.p):
                    slots.append((b, l, mono))
        slots.sort(key=lambda s: (sum(s[2]), s[0], s[1], s[2]))
        col = {s: i for i, s in enumerate(slots)}
        span = RowSpan()
        for row in _tangent_rows(germ, d, True, col):
            span.insert(row)
        for section in result.basis:
            row = {}
            for b, comps in enumerate(section.per_branch):
                for l, poly in enumerate(comps):
                    for mono, coef in poly.items():
                        row[col[(b, l, mono)]] = coef
            assert not span.contains(row)
            assert span.insert(row)
            assert span.contains(row)


class TestClassicalMonogerms:
    def test_cross_cap_is_stable(self):
        x, y = V(2, 0), V(2, 1)
        g = G(Branch((x, y * y, x * y)))
        assert ae_codim(g).value == 0

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_curve_cusp_augmented_by_power(self, k):
        # augmenting the plane cusp curve by x^{k+1} multiplies the base
        # codimension 1 by tau(x^{k+1}) = k
        x, y = V(2, 0), V(2, 1)
        g = G(Branch((y * y, y ** 3 + x ** (k + 1) * y, x)))
        assert ae_codim(g).value == k

    @pytest.mark.parametrize("a,b", [(2, 3), (2, 5), (2, 7), (3, 4), (3, 5)])
    def test_monomial_curves_match_delta_invariant(self, a, b):
        # for quasi-homogeneous curve parameterizations the codimension
        # equals the delta invariant, (a-1)(b-1)/2 for (t^a, t^b)
        g = G(Branch((T ** a, T ** b)))
        assert ae_codim(g).value == (a - 1) * (b - 1) // 2


def test_augmentation_family_of_codim_one_base(augmentation_adjacency_family):
    # the base (x, z^4+x*z) has codimension 1; augmenting by z^k must give
    # codimension k - 1, stepping down the adjacency chain as k drops
    for k, germ in augmentation_adjacency_family((2, 3, 4)):
        assert ae_codim(germ).value == k - 1


def test_adjacency_chain_descends(augmentation_adjacency_family):
    values = [ae_codim(germ).value
              for _, germ in augmentation_adjacency_family((4, 3, 2))]
    assert values == [3, 2, 1]
