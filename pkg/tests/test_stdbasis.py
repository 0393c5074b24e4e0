"""Tests for local standard bases and quotient computations."""

import pytest

from singcat.errors import IncompleteBasisError, PreconditionError
from singcat.linalg import jet_quotient_dimension, nullspace, rank, solve
from singcat.parser import parse_poly
from singcat.ring import INFINITY, ONE, ZERO, RingContext, coefficient, partial_derivative
from singcat.stdbasis import (
    LOCAL_ORDER,
    hilbert_function,
    ideal_membership,
    monomial_basis,
    mora_normal_form,
    quotient_dimension,
    reduced_normal_form,
    standard_basis,
)


def jacobian(text, ring):
    f = parse_poly(text, ring)
    return [partial_derivative(f, k) for k in range(ring.var_count)]


class TestLocalOrder:
    def test_lower_degree_leads(self, ring_xy):
        p = parse_poly("x^3 + y^2 + x*y^2", ring_xy)
        assert LOCAL_ORDER.leading_monomial(p) == (0, 2)
        assert LOCAL_ORDER.ecart(p) == 1

    def test_constant_is_largest(self, ring_x):
        p = parse_poly("1 + x", ring_x)
        assert LOCAL_ORDER.leading_monomial(p) == (0,)


class TestStandardBasis:
    def test_unit_generates_everything(self, ring_x):
        sb = standard_basis([parse_poly("x + x^2", ring_x)])
        assert sb.complete
        assert quotient_dimension(sb) == 1
        # 1 + x is a unit in the local ring
        sb = standard_basis([parse_poly("1 + x", ring_x)])
        assert quotient_dimension(sb) == 0

    def test_local_not_global(self):
        ring = RingContext.of("z")
        # z^2 + z^3 has two critical points globally, one at the origin
        sb = standard_basis(jacobian("z^2 + z^3", ring))
        assert quotient_dimension(sb) == 1

    @pytest.mark.parametrize(
        "text, expected",
        [
            ("x^2 + y^2", 1),
            ("x^3 + y^2", 2),
            ("x^4 + y^4", 9),
            ("x^3 + y^5", 8),
            ("x^2*y + y^4", 5),
            ("x^3 + x*y^3", 7),
            ("x*y + x^5 + y^5", 1),
        ],
    )
    def test_jacobian_quotients(self, ring_xy, text, expected):
        sb = standard_basis(jacobian(text, ring_xy))
        assert sb.complete
        assert quotient_dimension(sb) == expected

    @pytest.mark.parametrize("text", ["x^4 + y^4", "x^3 + x*y^3", "x^2*y + y^5 + x^4"])
    def test_agrees_with_jet_oracle(self, ring_xy, text):
        gens = jacobian(text, ring_xy)
        sb = standard_basis(gens)
        assert quotient_dimension(sb) == jet_quotient_dimension(gens, sb.corner + 1)

    def test_non_isolated_is_infinite(self, ring_xy):
        sb = standard_basis(jacobian("x^2*y^2", ring_xy))
        assert quotient_dimension(sb) == INFINITY
        with pytest.raises(PreconditionError):
            monomial_basis(sb)

    def test_degree_cap_reports_incomplete(self, ring_xy):
        sb = standard_basis(jacobian("x^5 + x^2*y^2 + y^5", ring_xy), degree_cap=2)
        assert not sb.complete
        with pytest.raises(IncompleteBasisError):
            quotient_dimension(sb)

    def test_rejects_empty_and_bad_cap(self, ring_x):
        with pytest.raises(PreconditionError):
            standard_basis([])
        with pytest.raises(PreconditionError):
            standard_basis([ring_x.variable("x")], degree_cap=0)


class TestQuotient:
    def test_monomial_basis_and_hilbert(self, ring_xy):
        sb = standard_basis(jacobian("x^4 + y^4", ring_xy))
        basis = monomial_basis(sb)
        assert basis.dimension == 9
        assert basis.monomials[0] == (0, 0)
        assert hilbert_function(basis).values == (1, 2, 3, 2, 1)
        assert hilbert_function(basis).total == 9

    def test_membership(self, ring_xy):
        sb = standard_basis(jacobian("x^3 + y^3", ring_xy))
        assert ideal_membership(parse_poly("x^2 + x^2*y", ring_xy), sb)
        assert ideal_membership(parse_poly("x^3*y^3", ring_xy), sb)
        assert not ideal_membership(parse_poly("x*y", ring_xy), sb)

    def test_weak_normal_form_vanishes_on_members(self, ring_xy):
        sb = standard_basis(jacobian("x^2*y + y^4", ring_xy))
        member = parse_poly("x*y*(2*x*y) + (1 + x)*(x^2 + 4*y^3)", ring_xy)
        assert mora_normal_form(member, sb.generators).is_zero

    def test_reduced_normal_form_uses_standard_monomials(self, ring_xy):
        sb = standard_basis(jacobian("x^3 + y^3", ring_xy))
        standard = set(monomial_basis(sb).monomials)
        reduced = reduced_normal_form(parse_poly("1 + x*y + x^2 + x^2*y^2", ring_xy), sb)
        assert set(reduced.support()) <= standard
        assert reduced == parse_poly("1 + x*y", ring_xy)


class TestLinearAlgebra:
    def test_rank_and_nullspace(self):
        rows = [{0: ONE, 1: ONE}, {0: coefficient(2), 1: coefficient(2)}]
        assert rank(rows, 2) == 1
        kernel = nullspace(rows, 2)
        assert len(kernel) == 1
        vector = kernel[0]
        assert vector.get(0, ZERO) + vector.get(1, ZERO) == ZERO

    def test_solve_consistent_and_inconsistent(self):
        rows = [{0: ONE}, {0: ONE}]
        assert solve(rows, [ONE, ONE], 1) == {0: ONE}
        assert solve(rows, [ONE, coefficient(2)], 1) is None
