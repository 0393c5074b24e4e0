"""Local standard bases (Mora normal form) for ideals of the power series ring.

Everything is computed with respect to the negative-degree reverse
lexicographic order, in which lower total degree dominates. Standard bases
computed here certify completeness either by exhausting all s-pairs or by a
highest corner: once m^k lies in the leading ideal, s-pairs whose lcm has
degree >= k reduce to zero and are skipped.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .errors import IncompleteBasisError, PreconditionError
from .ring import INFINITY, ONE, Coefficient, Monomial, Order, Poly, RingContext, monomial_degree

__all__ = [
    "LocalOrder",
    "LOCAL_ORDER",
    "StandardBasis",
    "QuotientBasis",
    "HilbertFunction",
    "mora_normal_form",
    "reduced_normal_form",
    "standard_basis",
    "quotient_dimension",
    "monomial_basis",
    "hilbert_function",
    "ideal_membership",
]

logger = logging.getLogger("singcat.stdbasis")

DEFAULT_DEGREE_CAP = 32


def monomial_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def monomial_quotient(b: Monomial, a: Monomial) -> Monomial:
    return tuple(y - x for x, y in zip(a, b))


def monomial_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


@dataclass(frozen=True)
class LocalOrder:
    """Negative-degree reverse lexicographic order.

    u > v when deg u < deg v; equal degrees are broken reverse
    lexicographically. The constant monomial is the largest element.
    """

    kind: str = "negative-degree-reverse-lexicographic"

    @staticmethod
    def key(monomial: Monomial) -> tuple:
        return (-monomial_degree(monomial), tuple(-e for e in reversed(monomial)))

    def leading_term(self, p: Poly) -> tuple[Monomial, Coefficient]:
        if p.is_zero:
            raise PreconditionError("the zero polynomial has no leading term")
        return max(p.terms(), key=lambda term: self.key(term[0]))

    def leading_monomial(self, p: Poly) -> Monomial:
        return self.leading_term(p)[0]

    def ecart(self, p: Poly) -> int:
        return p.degree() - monomial_degree(self.leading_monomial(p))

    def sorted_desc(self, monomials) -> list[Monomial]:
        return sorted(monomials, key=self.key, reverse=True)


LOCAL_ORDER = LocalOrder()


@dataclass(frozen=True)
class StandardBasis:
    """A standard basis together with its completeness certificate."""

    ring: RingContext
    generators: tuple[Poly, ...]
    input_generators: tuple[Poly, ...]
    order: LocalOrder
    complete: bool
    degree_bound: int
    corner: Optional[int]

    @property
    def leading_monomials(self) -> tuple[Monomial, ...]:
        return tuple(self.order.leading_monomial(g) for g in self.generators)

    def require_complete(self) -> None:
        if not self.complete:
            raise IncompleteBasisError(
                f"standard basis not certified within degree cap {self.degree_bound}; dimensions are only lower bounds"
            )


@dataclass(frozen=True)
class QuotientBasis:
    monomials: tuple[Monomial, ...]
    dimension: Order


@dataclass(frozen=True)
class HilbertFunction:
    values: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.values)


@dataclass
class _Reducer:
    poly: Poly
    lead: Monomial
    lead_coeff: Coefficient
    ecart: int


def _reducer(p: Poly, order: LocalOrder) -> _Reducer:
    lead, lead_coeff = order.leading_term(p)
    return _Reducer(p, lead, lead_coeff, p.degree() - monomial_degree(lead))


def mora_normal_form(p: Poly, basis: Sequence[Poly], order: LocalOrder = LOCAL_ORDER) -> Poly:
    """Weak normal form in the local ring.

    Returns r with u*p - r in the ideal for a unit u, and the leading monomial
    of r not divisible by any leading monomial of ``basis``; r is zero exactly
    when p lies in the local ideal, provided ``basis`` is a standard basis.
    """

    reducers = [_reducer(g, order) for g in basis if not g.is_zero]
    h = p
    while not h.is_zero:
        current = _reducer(h, order)
        candidates = [r for r in reducers if monomial_divides(r.lead, current.lead)]
        if not candidates:
            break
        chosen = min(candidates, key=lambda r: r.ecart)
        if chosen.ecart > current.ecart:
            reducers.append(current)
        factor = current.lead_coeff / chosen.lead_coeff
        h = h - chosen.poly.mul_term(monomial_quotient(current.lead, chosen.lead), factor)
    return h


def reduced_normal_form(p: Poly, sb: StandardBasis) -> Poly:
    """Fully reduced normal form modulo a complete zero-dimensional basis.

    Works in P/m^k for the certified corner k, where the standard monomials
    form a basis of the local quotient; the result is the unique
    representative supported on standard monomials.
    """

    sb.require_complete()
    if sb.corner is None:
        raise PreconditionError("full reduction needs a zero-dimensional ideal")
    bound = sb.corner - 1
    reducers = [_reducer(g, sb.order) for g in sb.generators]
    remainder: dict[Monomial, Coefficient] = {}
    h = p.truncate(bound)
    while not h.is_zero:
        lead, lead_coeff = sb.order.leading_term(h)
        chosen = next((r for r in reducers if monomial_divides(r.lead, lead)), None)
        if chosen is None:
            remainder[lead] = lead_coeff
            h = h - p.ring.monomial(lead, lead_coeff)
            continue
        factor = lead_coeff / chosen.lead_coeff
        h = (h - chosen.poly.mul_term(monomial_quotient(lead, chosen.lead), factor)).truncate(bound)
    return p.ring.from_terms(remainder)


def _standard_monomials(leads: Sequence[Monomial], var_count: int) -> Optional[list[Monomial]]:
    """Monomials outside the monomial ideal, or None when there are infinitely many."""

    for index in range(var_count):
        if not any(all(e == 0 for k, e in enumerate(lead) if k != index) for lead in leads):
            return None
    start = (0,) * var_count
    if any(monomial_divides(lead, start) for lead in leads):
        return []
    seen = {start}
    frontier = [start]
    while frontier:
        following = []
        for monom in frontier:
            for index in range(var_count):
                step = tuple(e + 1 if k == index else e for k, e in enumerate(monom))
                if step in seen or any(monomial_divides(lead, step) for lead in leads):
                    continue
                seen.add(step)
                following.append(step)
        frontier = following
    return list(seen)


def _highest_corner(leads: Sequence[Monomial], var_count: int) -> Optional[int]:
    """Least k with m^k inside the monomial ideal, or None."""

    standard = _standard_monomials(leads, var_count)
    if standard is None:
        return None
    return 1 + max((monomial_degree(m) for m in standard), default=-1)


def _normalize(p: Poly, order: LocalOrder) -> Poly:
    _, lead_coeff = order.leading_term(p)
    return p.scale(ONE / lead_coeff)


def _s_polynomial(f: Poly, g: Poly, order: LocalOrder) -> Poly:
    lead_f = order.leading_monomial(f)
    lead_g = order.leading_monomial(g)
    lcm = monomial_lcm(lead_f, lead_g)
    return f.mul_term(monomial_quotient(lcm, lead_f), ONE) - g.mul_term(monomial_quotient(lcm, lead_g), ONE)


def standard_basis(
    gens: Sequence[Poly],
    order: LocalOrder = LOCAL_ORDER,
    degree_cap: int = DEFAULT_DEGREE_CAP,
) -> StandardBasis:
    """Complete ``gens`` to a local standard basis, processing s-pairs by lcm degree."""

    if degree_cap < 1:
        raise PreconditionError("degree_cap must be at least 1")
    nonzero = [g for g in gens if not g.is_zero]
    if not gens:
        raise PreconditionError("at least one generator is required")
    ring = gens[0].ring
    for g in gens:
        if g.ring != ring:
            raise PreconditionError("generators must share one ring")

    basis: list[Poly] = []
    leads: list[Monomial] = []
    pairs: set[tuple[int, int]] = set()

    def add(poly: Poly) -> None:
        normalized = _normalize(poly, order)
        lead = order.leading_monomial(normalized)
        for index, other in enumerate(leads):
            if monomial_lcm(other, lead) != tuple(a + b for a, b in zip(other, lead)):
                pairs.add((index, len(basis)))
        basis.append(normalized)
        leads.append(lead)

    for g in nonzero:
        add(g)

    def pair_degree(pair: tuple[int, int]) -> int:
        return monomial_degree(monomial_lcm(leads[pair[0]], leads[pair[1]]))

    corner = _highest_corner(leads, ring.var_count)
    while pairs:
        if corner is not None:
            pairs = {pair for pair in pairs if pair_degree(pair) < corner}
        ready = [pair for pair in pairs if pair_degree(pair) <= degree_cap]
        if not ready:
            break
        pair = min(ready, key=lambda pr: (pair_degree(pr), pr))
        pairs.discard(pair)
        remainder = mora_normal_form(_s_polynomial(basis[pair[0]], basis[pair[1]], order), basis, order)
        if not remainder.is_zero:
            add(remainder)
            corner = _highest_corner(leads, ring.var_count)

    complete = not pairs
    minimal: list[Poly] = []
    minimal_leads: list[Monomial] = []
    for index in sorted(range(len(basis)), key=lambda k: (order.key(leads[k]), -k), reverse=True):
        lead = leads[index]
        if any(monomial_divides(other, lead) for other in minimal_leads):
            continue
        minimal.append(basis[index])
        minimal_leads.append(lead)

    logger.debug(
        "Standard basis computed",
        extra={"size": len(minimal), "degree_cap": degree_cap, "variables": ring.var_count},
    )
    return StandardBasis(
        ring=ring,
        generators=tuple(minimal),
        input_generators=tuple(gens),
        order=order,
        complete=complete,
        degree_bound=degree_cap,
        corner=corner,
    )


def quotient_dimension(sb: StandardBasis) -> Union[int, float]:
    """dim of the local quotient; infinity when some variable has no pure power in the leading ideal."""

    sb.require_complete()
    standard = _standard_monomials(sb.leading_monomials, sb.ring.var_count)
    if standard is None:
        return INFINITY
    return len(standard)


def monomial_basis(sb: StandardBasis) -> QuotientBasis:
    sb.require_complete()
    standard = _standard_monomials(sb.leading_monomials, sb.ring.var_count)
    if standard is None:
        raise PreconditionError("the quotient is infinite-dimensional")
    ordered = tuple(sb.order.sorted_desc(standard))
    return QuotientBasis(monomials=ordered, dimension=len(ordered))


def hilbert_function(qb: QuotientBasis) -> HilbertFunction:
    if qb.dimension == INFINITY:
        raise PreconditionError("the quotient is infinite-dimensional")
    counts: dict[int, int] = {}
    for monom in qb.monomials:
        counts[monomial_degree(monom)] = counts.get(monomial_degree(monom), 0) + 1
    top = max(counts, default=-1)
    return HilbertFunction(values=tuple(counts.get(d, 0) for d in range(top + 1)))


def ideal_membership(p: Poly, sb: StandardBasis) -> bool:
    sb.require_complete()
    return mora_normal_form(p, sb.generators, sb.order).is_zero
