"""Tests for the singularity category classifier."""

import pytest

from singcat.classify import (
    Budget,
    decide_dg_equivalence,
    krull_dimension,
    parity_check,
    serre_functor_shift,
    stabilize,
    verify_verdict,
)
from singcat.config import EngineSettings
from singcat.errors import NotIsolatedError, PreconditionError
from singcat.models import (
    ADEWitness,
    Equivalent,
    IdentityWitness,
    NotEquivalent,
    NotIsolated,
    ParityObstruction,
    SubstitutionWitness,
    TyurinaInvariantMismatch,
    Unknown,
)
from singcat.singularity import InvariantsMatch, tyurina_algebra, tyurina_compare, tyurina_number

from .conftest import ADE_SUITE, make_germ

PAIRS = [
    ("x^3", "x", "x^3 + y^2 + z^2", "x,y,z"),
    ("x^3", "x", "x^3 + y^2", "x,y"),
    ("x^3", "x", "x^4", "x"),
    ("x^2 + y^2", "x,y", "x*y", "x,y"),
    ("x^5 + y^2", "x,y", "x^2*y + y^3", "x,y"),
    ("x^4 + y^4", "x,y", "x^4 + y^4 + x^2*y^3", "x,y"),
    ("x^4 + y^4", "x,y", "x^4 + 2*y^4", "x,y"),
]


class TestDimensions:
    def test_krull_dimension(self, germ):
        assert krull_dimension(germ("x^3", "x")) == 0
        assert krull_dimension(germ("x^3 + y^2 + z^2", "x,y,z")) == 2

    def test_serre_shift_parity(self, germ):
        assert serre_functor_shift(germ("x^3", "x")) == 1
        assert serre_functor_shift(germ("x^2 + y^2", "x,y")) == 0

    def test_stabilize_appends_fresh_squares(self, germ):
        g = germ("x^3", "x")
        stable = stabilize(g, 2)
        assert stable.ring.var_names == ("x", "w1", "w2")
        assert stable == germ("x^3 + w1^2 + w2^2", "x,w1,w2")
        assert stabilize(g, 0) is g
        with pytest.raises(PreconditionError):
            stabilize(g, -1)

    def test_stabilize_preserves_tyurina_number(self, germ):
        g = germ("x^2*y + y^4", "x,y")
        assert tyurina_number(stabilize(g, 2)) == tyurina_number(g)

    @pytest.mark.parametrize("d, e, obstructed", [(0, 2, False), (0, 1, True), (3, 3, False), (4, 1, True)])
    def test_parity_check(self, d, e, obstructed):
        assert (parity_check(d, e) is not None) == obstructed

    def test_parity_check_rejects_negative(self):
        with pytest.raises(PreconditionError):
            parity_check(-1, 0)

    def test_budget_from_settings(self):
        settings = EngineSettings(degree_cap=20, witness_candidates=5)
        budget = Budget.from_settings(settings, witness_candidates=None, witness_degree_cap=6)
        assert budget == Budget(degree_cap=20, witness_candidates=5, witness_degree_cap=6)


class TestDecisions:
    def test_stabilization_by_two_squares(self, germ):
        verdict = decide_dg_equivalence(germ("x^3", "x"), germ("x^3 + y^2 + z^2", "x,y,z"))
        assert isinstance(verdict, Equivalent)
        assert verdict.squares == 2
        assert verdict.stabilized_side == "left"
        assert verdict.fresh_variables == ["w1", "w2"]

    def test_odd_difference_is_obstructed(self, germ):
        verdict = decide_dg_equivalence(germ("x^3", "x"), germ("x^3 + y^2", "x,y"))
        assert isinstance(verdict, NotEquivalent)
        assert verdict.certificate == ParityObstruction(d=0, e=1, serre_shift_left=1, serre_shift_right=0)

    def test_tyurina_number_mismatch(self, germ):
        verdict = decide_dg_equivalence(germ("x^3", "x"), germ("x^4", "x"))
        assert verdict.certificate == TyurinaInvariantMismatch(invariant="tau", left=2, right=3)

    def test_hilbert_mismatch(self, germ):
        verdict = decide_dg_equivalence(germ("x^5 + y^2", "x,y"), germ("x^2*y + y^3", "x,y"))
        assert verdict.certificate.invariant == "hilbert"
        assert verdict.certificate.left == [1, 1, 1, 1]
        assert verdict.certificate.right == [1, 2, 1]

    def test_ade_match(self, germ):
        verdict = decide_dg_equivalence(germ("x^2 + y^2", "x,y"), germ("x*y", "x,y"))
        assert verdict.witness == ADEWitness(ade="A1")

    def test_substitution_witness(self, germ):
        verdict = decide_dg_equivalence(germ("x^4 + y^4", "x,y"), germ("x^4 + y^4 + x^2*y^3", "x,y"))
        assert isinstance(verdict.witness, SubstitutionWitness)
        assert verdict.witness.source == "left"
        assert verdict.witness.determinacy == 4

    def test_unknown_when_no_witness(self, germ):
        verdict = decide_dg_equivalence(germ("x^4 + y^4", "x,y"), germ("x^4 + 2*y^4", "x,y"))
        assert isinstance(verdict, Unknown)

    def test_reflexive(self, germ):
        g = germ("x^3 + x*y^3", "x,y")
        verdict = decide_dg_equivalence(g, g)
        assert verdict == Equivalent(squares=0, witness=IdentityWitness())

    def test_rejects_smooth_and_non_isolated(self, germ):
        with pytest.raises(PreconditionError, match="right"):
            decide_dg_equivalence(germ("x^2", "x"), germ("x + y^2", "x,y"))
        with pytest.raises(NotIsolatedError) as excinfo:
            decide_dg_equivalence(germ("x^2*y^2", "x,y"), germ("x^2", "x"))
        assert excinfo.value.side == "left"

    @pytest.mark.parametrize("left, left_vars, right, right_vars", PAIRS)
    def test_symmetric_outcome(self, left, left_vars, right, right_vars):
        g1, g2 = make_germ(left, left_vars), make_germ(right, right_vars)
        forward = decide_dg_equivalence(g1, g2)
        backward = decide_dg_equivalence(g2, g1)
        assert forward.outcome == backward.outcome


class TestParitySuite:
    @pytest.mark.parametrize("label, variables, text, mu", ADE_SUITE)
    @pytest.mark.parametrize("squares", [0, 1, 2, 3, 4])
    def test_stabilizations(self, label, variables, text, mu, squares):
        g = make_germ(text, variables)
        stable = stabilize(g, squares)
        verdict = decide_dg_equivalence(g, stable)
        if squares % 2:
            assert isinstance(verdict.certificate, ParityObstruction)
        else:
            assert isinstance(verdict, Equivalent)
            assert verdict.squares == squares
        assert verify_verdict(g, stable, verdict)

    @pytest.mark.parametrize("label, variables, text, mu", ADE_SUITE)
    def test_tyurina_invariance_under_two_squares(self, label, variables, text, mu):
        g = make_germ(text, variables)
        result = tyurina_compare(tyurina_algebra(g), tyurina_algebra(stabilize(g, 2)))
        assert isinstance(result, InvariantsMatch)


class TestReplay:
    @pytest.mark.parametrize("left, left_vars, right, right_vars", PAIRS)
    def test_every_verdict_replays(self, left, left_vars, right, right_vars):
        g1, g2 = make_germ(left, left_vars), make_germ(right, right_vars)
        assert verify_verdict(g1, g2, decide_dg_equivalence(g1, g2))

    def test_forged_identity_fails(self, germ):
        g1, g2 = germ("x^2 + y^2", "x,y"), germ("x*y", "x,y")
        assert not verify_verdict(g1, g2, Equivalent(squares=0, witness=IdentityWitness()))

    def test_forged_tyurina_values_fail(self, germ):
        g1, g2 = germ("x^3", "x"), germ("x^4", "x")
        forged = NotEquivalent(certificate=TyurinaInvariantMismatch(invariant="tau", left=2, right=4))
        assert not verify_verdict(g1, g2, forged)

    def test_forged_substitution_fails(self, germ):
        g1, g2 = germ("x^4 + y^4", "x,y"), germ("x^4 + 2*y^4", "x,y")
        witness = SubstitutionWitness(source="left", source_variables=["x", "y"], images=["x", "y"], determinacy=4)
        assert not verify_verdict(g1, g2, Equivalent(squares=0, witness=witness))

    def test_parity_on_equal_dimensions_fails(self, germ):
        g = germ("x^3", "x")
        forged = NotEquivalent(certificate=ParityObstruction(d=0, e=1, serre_shift_left=1, serre_shift_right=0))
        assert not verify_verdict(g, g, forged)

    def test_not_isolated_certificate(self, germ):
        g1, g2 = germ("x^2*y^2", "x,y"), germ("x^2", "x")
        assert verify_verdict(g1, g2, NotEquivalent(certificate=NotIsolated(side="left")))
        assert not verify_verdict(g1, g2, NotEquivalent(certificate=NotIsolated(side="right")))
