"""Invariants of isolated hypersurface germs.

Milnor and Tyurina numbers, the Tyurina algebra with its invariant battery,
Hessian corank, finite determinacy, the splitting lemma and recognition of
simple (ADE) singularities.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Literal, Optional, Sequence, Union

from .errors import BudgetExhaustedError, NotIsolatedError, PreconditionError
from .linalg import dense_rows, rank, rref
from .ring import (
    INFINITY,
    ONE,
    ZERO,
    Coefficient,
    Order,
    Poly,
    RingContext,
    embed,
    hessian_at_zero,
    monomials_of_degree,
    order,
    partial_derivative,
    substitute,
)
from .stdbasis import (
    DEFAULT_DEGREE_CAP,
    HilbertFunction,
    QuotientBasis,
    StandardBasis,
    hilbert_function,
    ideal_membership,
    monomial_basis,
    quotient_dimension,
    reduced_normal_form,
    standard_basis,
)

logger = logging.getLogger("singcat.singularity")

Vector = dict[int, Coefficient]


@dataclass(frozen=True)
class Germ:
    """A polynomial vanishing at the origin, read as a germ."""

    f: Poly

    def __post_init__(self) -> None:
        if self.f.is_zero:
            raise PreconditionError("the zero polynomial is not a germ")
        if order(self.f) < 1:
            raise PreconditionError("a germ must vanish at the origin")

    @property
    def ring(self) -> RingContext:
        return self.f.ring

    @property
    def var_count(self) -> int:
        return self.f.ring.var_count

    def require_singular(self, side: Optional[str] = None) -> None:
        if order(self.f) < 2:
            message = "germ must lie in m^2 (order >= 2)"
            raise PreconditionError(f"{side} germ: {message}" if side else message)


@dataclass(frozen=True)
class ADEType:
    family: Literal["A", "D", "E"]
    index: int

    def __post_init__(self) -> None:
        valid = {
            "A": self.index >= 1,
            "D": self.index >= 4,
            "E": self.index in (6, 7, 8),
        }
        if not valid.get(self.family, False):
            raise PreconditionError(f"no simple singularity {self.family}{self.index}")

    def __str__(self) -> str:
        return f"{self.family}{self.index}"

    @classmethod
    def parse(cls, label: str) -> "ADEType":
        label = label.strip().upper().replace("_", "")
        if len(label) < 2 or not label[1:].isdigit():
            raise PreconditionError(f"not an ADE label: {label!r}")
        return cls(label[0], int(label[1:]))  # type: ignore[arg-type]

    def normal_form(self, ring: RingContext) -> Germ:
        """The normal form in the first variables of ``ring``, plus squares of the rest."""

        gens = ring.gens()
        if len(gens) == 1:
            if self.family != "A":
                raise PreconditionError(f"{self} needs two variables")
            return Germ(gens[0] ** (self.index + 1))
        x, y = gens[0], gens[1]
        k = self.index
        if self.family == "A":
            f = x ** (k + 1) + y**2
        elif self.family == "D":
            f = x**2 * y + y ** (k - 1)
        elif k == 6:
            f = x**3 + y**4
        elif k == 7:
            f = x**3 + x * y**3
        else:
            f = x**3 + y**5
        for extra in gens[2:]:
            f = f + extra**2
        return Germ(f)


@dataclass(frozen=True)
class TyurinaAlgebra:
    basis: QuotientBasis
    tau: int
    hilbert: HilbertFunction
    mult_table: tuple[tuple[tuple[Coefficient, ...], ...], ...]
    socle_dim: int
    m_power_dims: tuple[int, ...]

    @property
    def m_squared_dim(self) -> int:
        return self.m_power_dims[1] if len(self.m_power_dims) > 1 else 0


@dataclass(frozen=True)
class SingularityInvariants:
    mu: Order
    tau: Order
    corank: int
    determinacy: Optional[int]
    ade: Optional[ADEType] = None


@dataclass(frozen=True)
class DistinctCertificate:
    """Two Tyurina algebras differ in the named isomorphism invariant."""

    invariant: str
    left: object
    right: object

    @property
    def reason(self) -> str:
        return f"{self.invariant}: {self.left} != {self.right}"


@dataclass(frozen=True)
class InvariantsMatch:
    """Every computed invariant agrees; not a proof of isomorphism."""


@dataclass(frozen=True)
class SplitResult:
    """Outcome of the splitting lemma on a jet.

    ``transform`` lists substitutions in application order, each one the
    images of all variables of the original ring; ``squares`` maps each
    eliminated variable to the coefficient of its square.
    """

    germ: Germ
    residual: Optional[Germ]
    squares: dict[str, Coefficient]
    transform: tuple[tuple[Poly, ...], ...]
    jet_degree: int

    @property
    def corank(self) -> int:
        return 0 if self.residual is None else self.residual.var_count

    def coordinate_change(self) -> tuple[Poly, ...]:
        """The composite of ``transform`` as one substitution, truncated at the jet degree."""

        ring = self.germ.ring
        images = tuple(ring.gens())
        for step in self.transform:
            images = tuple(substitute(image, list(step)).truncate(self.jet_degree) for image in images)
        return images

    def split_form(self) -> Poly:
        ring = self.germ.ring
        total = ring.zero()
        for name, value in self.squares.items():
            total = total + (ring.variable(name) ** 2).scale(value)
        if self.residual is not None:
            total = total + embed(self.residual.f, ring)
        return total


def _isolated_dimension(gens: Sequence[Poly], degree_cap: int) -> tuple[Order, StandardBasis]:
    sb = standard_basis(gens, degree_cap=degree_cap)
    if not sb.complete:
        logger.warning("Standard basis incomplete", extra={"degree_cap": degree_cap, "size": len(sb.generators)})
    return quotient_dimension(sb), sb


def _jacobian(f: Poly) -> list[Poly]:
    return [partial_derivative(f, k) for k in range(f.ring.var_count)]


def milnor_number(g: Germ, degree_cap: int = DEFAULT_DEGREE_CAP) -> Order:
    """dim P/(df); infinity for a non-isolated critical point."""

    mu, _ = _isolated_dimension(_jacobian(g.f), degree_cap)
    logger.debug("Milnor number computed", extra={"mu": mu, "variables": g.var_count})
    return mu


def _apply(matrix: Sequence[Vector], vector: Vector) -> Vector:
    result: Vector = {}
    for j, value in vector.items():
        for row, entry in matrix[j].items():
            total = result.get(row, ZERO) + value * entry
            if total:
                result[row] = total
            else:
                result.pop(row, None)
    return result


def tyurina_algebra(g: Germ, degree_cap: int = DEFAULT_DEGREE_CAP) -> TyurinaAlgebra:
    """The local algebra P/(f, df) with structure constants and invariants."""

    tau, sb = _isolated_dimension([g.f, *_jacobian(g.f)], degree_cap)
    if tau == INFINITY:
        raise NotIsolatedError("Tyurina number is infinite; the singularity is not isolated")
    basis = monomial_basis(sb)
    ring = g.ring
    index = {monom: k for k, monom in enumerate(basis.monomials)}
    size = len(basis.monomials)

    def coordinates(p: Poly) -> Vector:
        reduced = reduced_normal_form(p, sb)
        return {index[m]: c for m, c in reduced.terms()}

    def dense(vector: Vector) -> tuple[Coefficient, ...]:
        return tuple(vector.get(k, ZERO) for k in range(size))

    elements = [ring.monomial(m) for m in basis.monomials]
    table = tuple(tuple(dense(coordinates(a * b)) for b in elements) for a in elements)

    # column j of each operator is x_k times the j-th basis element
    operators = [[coordinates(x * b) for b in elements] for x in ring.gens()]
    stacked = []
    for op in operators:
        for row in range(size):
            stacked.append({j: vec[row] for j, vec in enumerate(op) if row in vec})
    socle_dim = size - rank(stacked, size)

    m_power_dims: list[int] = []
    current: list[Vector] = [{k: ONE} for k in range(size)]
    while True:
        images = [_apply(op, vector) for op in operators for vector in current]
        echelon, pivots = rref(images, size)
        if not pivots:
            break
        m_power_dims.append(len(pivots))
        current = echelon

    algebra = TyurinaAlgebra(
        basis=basis,
        tau=size,
        hilbert=hilbert_function(basis),
        mult_table=table,
        socle_dim=socle_dim,
        m_power_dims=tuple(m_power_dims),
    )
    logger.debug("Tyurina algebra computed", extra={"tau": size, "variables": g.var_count})
    return algebra


def tyurina_number(g: Germ, degree_cap: int = DEFAULT_DEGREE_CAP) -> Order:
    tau, _ = _isolated_dimension([g.f, *_jacobian(g.f)], degree_cap)
    return tau


def corank(g: Germ) -> int:
    n = g.var_count
    return n - rank(dense_rows(hessian_at_zero(g.f)), n)


def determinacy_bound(g: Germ, degree_cap: int = DEFAULT_DEGREE_CAP) -> Optional[int]:
    """Smallest k <= degree_cap with m^(k+1) inside m^2 J(f); None when not found."""

    if milnor_number(g, degree_cap) == INFINITY:
        raise NotIsolatedError("Milnor number is infinite; no finite determinacy")
    ring = g.ring
    gens = ring.gens()
    jacobian = [d for d in _jacobian(g.f) if not d.is_zero]
    products = [
        gens[a] * gens[b] * d
        for a in range(len(gens))
        for b in range(a, len(gens))
        for d in jacobian
    ]
    sb = standard_basis(products, degree_cap=degree_cap)
    if not sb.complete:
        logger.warning("Determinacy basis incomplete", extra={"degree_cap": degree_cap})
        return None
    start = max(1, (sb.corner or 1) - 1)
    for k in range(start, degree_cap + 1):
        if all(ideal_membership(ring.monomial(m), sb) for m in monomials_of_degree(ring.var_count, k + 1)):
            return k
    return None


def _quadratic(h: Poly, a: int, b: int) -> Coefficient:
    exponents = [0] * h.ring.var_count
    exponents[a] += 1
    exponents[b] += 1
    return h.coefficient(tuple(exponents))


def _peel(h: Poly, pivot: int) -> Poly:
    """The quotient by x_pivot of the terms of h that involve x_pivot."""

    quotient = {}
    for monom, value in h.terms():
        if monom[pivot]:
            quotient[monom[:pivot] + (monom[pivot] - 1,) + monom[pivot + 1 :]] = value
    return h.ring.from_terms(quotient)


def _set_image(ring: RingContext, target: int, image: Poly) -> tuple[Poly, ...]:
    return tuple(image if k == target else ring.gen(k) for k in range(ring.var_count))


def _split(g: Germ, jet_degree: int) -> SplitResult:
    ring = g.ring
    n = ring.var_count
    h = g.f.truncate(jet_degree)
    remaining = list(range(n))
    squares: dict[str, Coefficient] = {}
    steps: list[tuple[Poly, ...]] = []

    def step(images: tuple[Poly, ...]) -> None:
        nonlocal h
        h = substitute(h, list(images)).truncate(jet_degree)
        steps.append(images)

    while True:
        pivot = next((j for j in remaining if _quadratic(h, j, j)), None)
        if pivot is None:
            mixed = next(
                ((a, b) for a in remaining for b in remaining if a < b and _quadratic(h, a, b)),
                None,
            )
            if mixed is None:
                break
            a, pivot = mixed
            step(_set_image(ring, a, ring.gen(a) + ring.gen(pivot)))

        x = ring.gen(pivot)
        for _ in range(2 * jet_degree + 2):
            q = _quadratic(h, pivot, pivot)
            cofactor = _peel(h, pivot) - x.scale(q)
            if cofactor.is_zero:
                break
            step(_set_image(ring, pivot, x - cofactor.scale(ONE / (q + q))))
        else:
            raise BudgetExhaustedError("completing the square did not converge within the jet degree")

        squares[ring.var_names[pivot]] = _quadratic(h, pivot, pivot)
        remaining.remove(pivot)

    residual: Optional[Germ] = None
    if remaining:
        rest = h
        for name, value in squares.items():
            rest = rest - (ring.variable(name) ** 2).scale(value)
        target = RingContext(tuple(ring.var_names[k] for k in remaining))
        positions = [remaining.index(k) if k in remaining else None for k in range(n)]
        terms = {}
        for monom, value in rest.terms():
            if any(e and positions[k] is None for k, e in enumerate(monom)):
                raise PreconditionError("splitting left a mixed term behind")
            terms[tuple(monom[k] for k in remaining)] = value
        residual_poly = target.from_terms(terms)
        if residual_poly.is_zero:
            raise PreconditionError("the residual vanishes on the jet; jet_degree is below the determinacy degree")
        residual = Germ(residual_poly)
    return SplitResult(
        germ=g,
        residual=residual,
        squares=squares,
        transform=tuple(steps),
        jet_degree=jet_degree,
    )


def split_squares(g: Germ, jet_degree: int, degree_cap: int = DEFAULT_DEGREE_CAP) -> SplitResult:
    """Splitting lemma on the jet of degree ``jet_degree``.

    Completes squares one variable at a time with substitutions dividing
    only by nonzero constants; the residual has zero Hessian and lives in the
    non-eliminated variables.
    """

    if jet_degree < 2:
        raise PreconditionError("jet_degree must be at least 2")
    if milnor_number(g, degree_cap) == INFINITY:
        raise NotIsolatedError("Milnor number is infinite; splitting needs an isolated singularity")
    return _split(g, jet_degree)


def _cubic_type(residual: Poly) -> Optional[str]:
    """Root pattern of the binary cubic part: distinct, double, triple or None when zero."""

    a = residual.coefficient((3, 0))
    b = residual.coefficient((2, 1))
    c = residual.coefficient((1, 2))
    d = residual.coefficient((0, 3))
    if not (a or b or c or d):
        return None
    discriminant = b * b * c * c - 4 * a * c * c * c - 4 * b * b * b * d - 27 * a * a * d * d + 18 * a * b * c * d
    if discriminant:
        return "distinct"
    covariant = (b * b - 3 * a * c, b * c - 9 * a * d, c * c - 3 * b * d)
    return "double" if any(covariant) else "triple"


def ade_recognize(g: Germ, degree_cap: int = DEFAULT_DEGREE_CAP) -> Optional[ADEType]:
    """Simple-singularity type of ``g``, or None when it is not recognized."""

    mu = milnor_number(g, degree_cap)
    if mu == INFINITY:
        raise NotIsolatedError("Milnor number is infinite")
    if order(g.f) < 2:
        return None
    bound = determinacy_bound(g, degree_cap)
    if bound is None:
        return None
    split = _split(g, max(bound, 3))
    rank_deficit = split.corank
    if rank_deficit == 0:
        return ADEType("A", 1) if mu == 1 else None
    if rank_deficit == 1:
        return ADEType("A", int(mu))
    if rank_deficit == 2:
        pattern = _cubic_type(split.residual.f)
        if pattern == "distinct" and mu == 4:
            return ADEType("D", 4)
        if pattern == "double" and mu >= 5:
            return ADEType("D", int(mu))
        if pattern == "triple" and mu in (6, 7, 8):
            return ADEType("E", int(mu))
    return None


def tyurina_compare(left: TyurinaAlgebra, right: TyurinaAlgebra) -> Union[DistinctCertificate, InvariantsMatch]:
    """Compare isomorphism invariants; a difference certifies non-isomorphism."""

    checks = (
        ("tau", left.tau, right.tau),
        ("hilbert", left.hilbert.values, right.hilbert.values),
        ("socle_dim", left.socle_dim, right.socle_dim),
        ("m_power_dims", left.m_power_dims, right.m_power_dims),
        ("m_squared_dim", left.m_squared_dim, right.m_squared_dim),
    )
    for name, a, b in checks:
        if a != b:
            return DistinctCertificate(invariant=name, left=a, right=b)
    return InvariantsMatch()


def tyurina_invariant(algebra: TyurinaAlgebra, name: str) -> object:
    """Look up a comparison invariant by the name used in certificates."""

    values = {
        "tau": algebra.tau,
        "hilbert": algebra.hilbert.values,
        "socle_dim": algebra.socle_dim,
        "m_power_dims": algebra.m_power_dims,
        "m_squared_dim": algebra.m_squared_dim,
    }
    if name not in values:
        raise PreconditionError(f"unknown Tyurina invariant {name!r}")
    return values[name]


def invariants(g: Germ, degree_cap: int = DEFAULT_DEGREE_CAP) -> SingularityInvariants:
    """mu, tau, corank, determinacy and ADE type in one pass."""

    mu = milnor_number(g, degree_cap)
    if mu == INFINITY:
        raise NotIsolatedError("Milnor number is infinite; the singularity is not isolated")
    tau = tyurina_number(g, degree_cap)
    return SingularityInvariants(
        mu=mu,
        tau=tau,
        corank=corank(g),
        determinacy=determinacy_bound(g, degree_cap),
        ade=ade_recognize(g, degree_cap),
    )
