"""Deciding equivalence of singularity categories of isolated hypersurfaces.

Two isolated hypersurface germs have quasi-equivalent dg singularity
categories exactly when their Krull dimensions differ by an even number and,
after adding that many squares to the smaller one, their Tyurina algebras
are isomorphic. Non-isomorphism is certified by invariants; isomorphism by
a coordinate change or a matching simple-singularity type.
"""

from __future__ import annotations

import itertools
import logging
import time
from dataclasses import dataclass
from typing import Iterator, Optional, Union

from .config import EngineSettings
from .errors import NotIsolatedError, PreconditionError
from .linalg import dense_rows, rank, solve
from .models import (
    ADETypeMismatch,
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
from .parser import format_poly, parse_poly
from .ring import (
    IMAGINARY_UNIT,
    INFINITY,
    ONE,
    ZERO,
    Poly,
    RingContext,
    monomials_of_degree,
    order,
    partial_derivative,
    substitute,
)
from .singularity import (
    ADEType,
    DistinctCertificate,
    Germ,
    ade_recognize,
    determinacy_bound,
    milnor_number,
    tyurina_algebra,
    tyurina_compare,
    tyurina_invariant,
)
from .stdbasis import DEFAULT_DEGREE_CAP

logger = logging.getLogger("singcat.classify")

Verdict = Union[Equivalent, NotEquivalent, Unknown]

SCALINGS = (ONE, -ONE, IMAGINARY_UNIT, -IMAGINARY_UNIT)


@dataclass(frozen=True)
class Budget:
    """Effort limits for one decision."""

    degree_cap: int = DEFAULT_DEGREE_CAP
    witness_candidates: int = 64
    witness_degree_cap: int = 12

    @classmethod
    def from_settings(cls, settings: EngineSettings, **overrides) -> "Budget":
        values = {
            "degree_cap": settings.degree_cap,
            "witness_candidates": settings.witness_candidates,
            "witness_degree_cap": settings.witness_degree_cap,
        }
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)


def krull_dimension(g: Germ) -> int:
    return g.var_count - 1


def serre_functor_shift(g: Germ) -> int:
    """Residue mod 2 of the Serre functor shift [d - 1] of the singularity category."""

    return (krull_dimension(g) - 1) % 2


def stabilize(g: Germ, m: int) -> Germ:
    """g plus squares of ``m`` fresh variables w1, w2, ... appended to the ring."""

    if m < 0:
        raise PreconditionError("the number of squares must be non-negative")
    if m == 0:
        return g
    names = g.ring.fresh_names(m)
    ring = g.ring.extend(names)
    f = substitute(g.f, ring.gens()[: g.var_count])
    for name in names:
        f = f + ring.variable(name) ** 2
    return Germ(f)


def parity_check(d: int, e: int) -> Optional[ParityObstruction]:
    if d < 0 or e < 0:
        raise PreconditionError("Krull dimensions are non-negative")
    if (d - e) % 2 == 0:
        return None
    return ParityObstruction(d=d, e=e, serre_shift_left=(d - 1) % 2, serre_shift_right=(e - 1) % 2)


def _json_value(value: object) -> object:
    return list(value) if isinstance(value, tuple) else value


def _check_inputs(g1: Germ, g2: Germ, budget: Budget) -> None:
    for side, g in (("left", g1), ("right", g2)):
        g.require_singular(side)
        if milnor_number(g, budget.degree_cap) == INFINITY:
            raise NotIsolatedError("Milnor number is infinite; the singularity is not isolated", side=side)


def _stabilized_pair(g1: Germ, g2: Germ) -> tuple[Germ, Germ, int, Optional[str], list[str]]:
    d, e = krull_dimension(g1), krull_dimension(g2)
    squares = abs(d - e)
    if d < e:
        stable = stabilize(g1, squares)
        return stable, g2, squares, "left", list(stable.ring.var_names[g1.var_count :])
    if e < d:
        stable = stabilize(g2, squares)
        return g1, stable, squares, "right", list(stable.ring.var_names[g2.var_count :])
    return g1, g2, 0, None, []


def _positional(p: Poly, ring: RingContext) -> Poly:
    return substitute(p, ring.gens())


# --- jet-level coordinate changes ---------------------------------------------


def _linear_candidates(n: int, ring: RingContext) -> Iterator[list[Poly]]:
    """Permutations of the variables combined with scalings by 1, -1, i, -i."""

    gens = ring.gens()
    for permutation in itertools.permutations(range(n)):
        for scales in itertools.product(SCALINGS, repeat=n):
            yield [gens[permutation[k]].scale(scales[k]) for k in range(n)]


def _solve_correction(partials: list[Poly], difference: Poly, step: int) -> Optional[list[Poly]]:
    """Homogeneous psi of degree ``step`` with sum partials[k] * psi[k] equal to ``difference``."""

    ring = difference.ring
    n = ring.var_count
    monomials = list(monomials_of_degree(n, step))
    unknowns = [(k, m) for k in range(n) for m in monomials]
    targets = {m: c for m, c in difference.terms()}
    rows: dict = {}
    for column, (k, m) in enumerate(unknowns):
        for term, value in partials[k].mul_term(m, ONE).terms():
            rows.setdefault(term, {})[column] = value
    keys = sorted(set(rows) | set(targets))
    solution = solve([rows.get(key, {}) for key in keys], [targets.get(key, ZERO) for key in keys], len(unknowns))
    if solution is None:
        return None
    psi = [ring.zero() for _ in range(n)]
    for column, value in solution.items():
        k, m = unknowns[column]
        psi[k] = psi[k] + ring.monomial(m, value)
    return psi


def _jet_witness(source: Germ, target: Germ, bound: int, budget: Budget) -> Optional[list[Poly]]:
    """Images phi of the target's variables over the source ring with target(phi) = source mod m^(bound+1)."""

    ring = source.ring
    n = ring.var_count
    low = int(order(target.f))
    if int(order(source.f)) != low:
        return None
    source_jet = source.f.truncate(bound)
    leading = source.f.homogeneous_part(low)
    lowest_target = _positional(target.f.homogeneous_part(low), ring)
    target_jet = target.f.truncate(bound)
    tried = 0
    for linear in itertools.islice(_linear_candidates(n, ring), budget.witness_candidates):
        tried += 1
        if substitute(lowest_target, linear) != leading:
            continue
        partials = [
            substitute(partial_derivative(target.f, k), linear).homogeneous_part(low - 1) for k in range(n)
        ]
        images = list(linear)
        for _ in range(bound + 1):
            difference = (source_jet - substitute(target_jet, images)).truncate(bound)
            if difference.is_zero:
                logger.debug("Jet witness found", extra={"candidates": tried, "degree_cap": bound})
                return images
            t = int(order(difference))
            step = t - low + 1
            if step < 2:
                break
            psi = _solve_correction(partials, difference.homogeneous_part(t), step)
            if psi is None:
                break
            images = [(image + correction).truncate(bound) for image, correction in zip(images, psi)]
    logger.debug("No jet witness", extra={"candidates": tried, "degree_cap": bound})
    return None


def _substitution_witness(source: Germ, target: Germ, side: str, budget: Budget) -> Optional[SubstitutionWitness]:
    bound = determinacy_bound(source, budget.degree_cap)
    if bound is None or bound > budget.witness_degree_cap:
        return None
    images = _jet_witness(source, target, bound, budget)
    if images is None:
        return None
    return SubstitutionWitness(
        source=side,
        source_variables=list(source.ring.var_names),
        images=[format_poly(image) for image in images],
        determinacy=bound,
    )


# --- decision ---------------------------------------------------------------------


def decide_dg_equivalence(g1: Germ, g2: Germ, budget: Optional[Budget] = None) -> Verdict:
    """Decide quasi-equivalence of the dg singularity categories of two isolated germs."""

    budget = budget or Budget()
    started = time.perf_counter()
    _check_inputs(g1, g2, budget)

    verdict = _decide(g1, g2, budget)
    logger.info(
        "Decision finished",
        extra={
            "verdict": verdict.outcome,
            "certificate": getattr(getattr(verdict, "certificate", None), "kind", None)
            or getattr(getattr(verdict, "witness", None), "kind", None),
            "elapsed_ms": round((time.perf_counter() - started) * 1000, 3),
        },
    )
    return verdict


def _decide(g1: Germ, g2: Germ, budget: Budget) -> Verdict:
    obstruction = parity_check(krull_dimension(g1), krull_dimension(g2))
    if obstruction is not None:
        return NotEquivalent(certificate=obstruction)

    left, right, squares, side, fresh = _stabilized_pair(g1, g2)
    comparison = tyurina_compare(tyurina_algebra(left, budget.degree_cap), tyurina_algebra(right, budget.degree_cap))
    if isinstance(comparison, DistinctCertificate):
        return NotEquivalent(
            certificate=TyurinaInvariantMismatch(
                invariant=comparison.invariant,
                left=_json_value(comparison.left),
                right=_json_value(comparison.right),
            )
        )

    def equivalent(witness) -> Equivalent:
        return Equivalent(squares=squares, stabilized_side=side, fresh_variables=fresh, witness=witness)

    if _positional(right.f, left.ring) == left.f:
        return equivalent(IdentityWitness())

    left_type = ade_recognize(g1, budget.degree_cap)
    right_type = ade_recognize(g2, budget.degree_cap)
    if left_type is not None and right_type is not None:
        if left_type == right_type:
            return equivalent(ADEWitness(ade=str(left_type)))
        return NotEquivalent(certificate=ADETypeMismatch(left=str(left_type), right=str(right_type)))

    for source, target, source_side in ((left, right, "left"), (right, left, "right")):
        witness = _substitution_witness(source, target, source_side, budget)
        if witness is not None:
            return equivalent(witness)

    return Unknown(reason="Tyurina invariants match but no isomorphism witness was found within budget")


# --- replay -------------------------------------------------------------------------


def _replay_substitution(left: Germ, right: Germ, witness: SubstitutionWitness, budget: Budget) -> bool:
    source, target = (left, right) if witness.source == "left" else (right, left)
    if list(source.ring.var_names) != witness.source_variables or len(witness.images) != target.var_count:
        return False
    images = [parse_poly(text, source.ring) for text in witness.images]
    if any(image.constant_term() for image in images):
        return False
    jacobian = [[image.coefficient(tuple(1 if j == k else 0 for j in range(source.var_count))) for k in range(source.var_count)] for image in images]
    if rank(dense_rows(jacobian), source.var_count) != source.var_count:
        return False
    certified = determinacy_bound(source, budget.degree_cap)
    if certified is None or certified > witness.determinacy:
        return False
    difference = substitute(target.f, images) - source.f
    return order(difference) > witness.determinacy


def verify_verdict(g1: Germ, g2: Germ, verdict: Verdict, budget: Optional[Budget] = None) -> bool:
    """Replay the certificate or witness carried by ``verdict``."""

    budget = budget or Budget()
    if isinstance(verdict, NotEquivalent):
        certificate = verdict.certificate
        if isinstance(certificate, NotIsolated):
            germ = g1 if certificate.side == "left" else g2
            return milnor_number(germ, budget.degree_cap) == INFINITY
        _check_inputs(g1, g2, budget)
        if isinstance(certificate, ParityObstruction):
            return parity_check(krull_dimension(g1), krull_dimension(g2)) == certificate
        if parity_check(krull_dimension(g1), krull_dimension(g2)) is not None:
            return False
        if isinstance(certificate, TyurinaInvariantMismatch):
            left, right, *_ = _stabilized_pair(g1, g2)
            left_value = _json_value(tyurina_invariant(tyurina_algebra(left, budget.degree_cap), certificate.invariant))
            right_value = _json_value(tyurina_invariant(tyurina_algebra(right, budget.degree_cap), certificate.invariant))
            return left_value == certificate.left and right_value == certificate.right and left_value != right_value
        if isinstance(certificate, ADETypeMismatch):
            left_type = ade_recognize(g1, budget.degree_cap)
            right_type = ade_recognize(g2, budget.degree_cap)
            return (
                left_type is not None
                and right_type is not None
                and str(left_type) == certificate.left
                and str(right_type) == certificate.right
                and left_type != right_type
            )
        return False

    _check_inputs(g1, g2, budget)
    if parity_check(krull_dimension(g1), krull_dimension(g2)) is not None:
        return False
    left, right, squares, side, fresh = _stabilized_pair(g1, g2)

    if isinstance(verdict, Unknown):
        comparison = tyurina_compare(tyurina_algebra(left, budget.degree_cap), tyurina_algebra(right, budget.degree_cap))
        return not isinstance(comparison, DistinctCertificate)

    if (verdict.squares, verdict.stabilized_side, verdict.fresh_variables) != (squares, side, fresh):
        return False
    witness = verdict.witness
    if isinstance(witness, IdentityWitness):
        return _positional(right.f, left.ring) == left.f
    if isinstance(witness, ADEWitness):
        expected = ADEType.parse(witness.ade)
        return ade_recognize(g1, budget.degree_cap) == expected and ade_recognize(g2, budget.degree_cap) == expected
    return _replay_substitution(left, right, witness, budget)
