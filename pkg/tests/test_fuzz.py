"""Property tests using Hypothesis."""

from hypothesis import HealthCheck, given, settings, strategies as st

from singcat.errors import ParseError, SingcatError
from singcat.mf import (
    Homotopy,
    MatrixFactorization,
    as_matrix,
    cone,
    direct_sum,
    identity_morphism,
    knoerrer,
    knoerrer_squares,
    morphism_from_homotopy,
    permute,
    reduce,
    shift,
    trivial_pair,
    validate,
)
from singcat.parser import format_poly, parse_poly
from singcat.ring import RingContext, coefficient, order, partial_derivative, substitute
from singcat.singularity import Germ, invariants

RING = RingContext.of("x,y")

coefficients = st.builds(
    coefficient,
    st.fractions(min_value=-5, max_value=5, max_denominator=4),
    st.sampled_from([0, 0, 1, -2]),
)


def polys(min_degree=0, max_exponent=3, max_size=4):
    exponents = st.integers(0, max_exponent)
    monomials = st.tuples(exponents, exponents).filter(lambda m: sum(m) >= min_degree)
    return st.dictionaries(monomials, coefficients, max_size=max_size).map(RING.from_terms)


small_polys = polys(max_exponent=2, max_size=3)
germ_maps = st.lists(polys(min_degree=1, max_exponent=2, max_size=2), min_size=2, max_size=2)


@st.composite
def factorizations(draw):
    """Sums of Koszul factorizations of f = a1*b1 + a2*b2, trivial pairs and shifts."""

    x, y = RING.gens()
    a1 = x + draw(polys(min_degree=2))
    b1 = y + draw(polys(min_degree=2))
    a2 = draw(polys(min_degree=2))
    b2 = draw(polys(min_degree=2))
    f = a1 * b1 + a2 * b2
    koszul = MatrixFactorization(((a1, a2), (-b2, b1)), ((b1, -a2), (b2, a1)), f)
    first, second = trivial_pair(f)
    pieces = draw(st.lists(st.sampled_from([koszul, shift(koszul), first, second]), min_size=1, max_size=2))
    M = pieces[0]
    for piece in pieces[1:]:
        M = direct_sum(M, piece)
    permutation = draw(st.permutations(range(M.size)))
    return permute(M, permutation)


@st.composite
def factorizations_with_homotopy(draw):
    M = draw(factorizations())
    square = st.lists(st.lists(small_polys, min_size=M.size, max_size=M.size), min_size=M.size, max_size=M.size)
    return M, Homotopy(as_matrix(draw(square)), as_matrix(draw(square)))


def revalidates(M: MatrixFactorization) -> bool:
    return validate(M.A, M.B, M.f) == M


@given(polys())
def test_print_then_parse_is_identity(p):
    assert parse_poly(format_poly(p), RING) == p


@settings(max_examples=200)
@given(st.text(alphabet="xy+-*^/ i12", max_size=8))
def test_parser_fails_only_with_parse_errors(text):
    try:
        parse_poly(text, RING)
    except ParseError:
        pass


@given(polys(), polys(), polys())
def test_ring_axioms(p, q, r):
    zero, one = RING.zero(), RING.one()
    assert (p + q) + r == p + (q + r)
    assert p + q == q + p
    assert (p * q) * r == p * (q * r)
    assert p * q == q * p
    assert p * (q + r) == p * q + p * r
    assert p + zero == p
    assert p * one == p
    assert p - p == zero


@given(polys(), polys(), st.integers(0, 1))
def test_partial_derivative_is_a_derivation(p, q, k):
    def d(s):
        return partial_derivative(s, k)

    assert d(p * q) == p * d(q) + q * d(p)
    assert d(p + q) == d(p) + d(q)


@settings(deadline=None)
@given(small_polys, small_polys, germ_maps)
def test_substitute_is_a_ring_homomorphism(p, q, images):
    def pull(s):
        return substitute(s, images)

    assert pull(p * q) == pull(p) * pull(q)
    assert pull(p + q) == pull(p) + pull(q)
    assert pull(RING.one()) == RING.one()


@given(polys(), polys())
def test_order_is_additive(p, q):
    assert order(p * q) == order(p) + order(q)


@settings(max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])
@given(factorizations_with_homotopy())
def test_factorization_algebra(case):
    M, homotopy = case
    assert revalidates(M)

    assert shift(shift(M)) == M
    assert revalidates(shift(M))

    image = knoerrer(M, "u", "v")
    assert revalidates(image)
    assert image.size == 2 * M.size
    assert image.is_reduced == M.is_reduced

    squares = knoerrer_squares(M, "u", "v")
    assert revalidates(squares)
    assert squares.size == 2 * M.size
    assert squares.is_reduced == M.is_reduced

    once = reduce(M)
    assert revalidates(once)
    assert reduce(once) == once
    assert once.is_reduced
    assert once.size <= M.size

    phi = morphism_from_homotopy(M, M, homotopy)
    assert revalidates(cone(phi))
    assert cone(phi).size == 2 * M.size
    assert revalidates(cone(identity_morphism(M)))
    assert reduce(cone(identity_morphism(once))).size == 0


@settings(max_examples=40, deadline=None)
@given(polys(min_degree=2))
def test_invariants_never_crash_outside_error_hierarchy(p):
    if p.is_zero:
        return
    try:
        summary = invariants(Germ(p), degree_cap=12)
    except SingcatError:
        return
    assert summary.tau <= summary.mu
