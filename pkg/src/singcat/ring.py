"""Exact multivariate polynomial arithmetic over the Gaussian rationals.

Polynomials are immutable wrappers around sympy's sparse ``PolyElement`` in a
``PolyRing`` over ``QQ_I`` with graded-lexicographic term order, so that the
canonical term listing (and therefore every serialization) is stable.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations_with_replacement
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

from sympy.polys.domains import QQ, QQ_I
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement, PolyRing

from .errors import PreconditionError, RingMismatchError, VariableNameError

__all__ = [
    "Coefficient",
    "Monomial",
    "Order",
    "INFINITY",
    "RingContext",
    "Poly",
    "coefficient",
    "real_part",
    "imag_part",
    "add",
    "mul",
    "exact_quotient",
    "partial_derivative",
    "substitute",
    "embed",
    "order",
    "hessian_at_zero",
    "monomial_degree",
    "monomials_of_degree",
    "monomials_up_to",
]

Coefficient = QQ_I.dtype
Monomial = tuple[int, ...]
Order = Union[int, float]
INFINITY = math.inf

RationalLike = Union[int, Fraction]

VARIABLE_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
RESERVED_NAMES = frozenset({"i"})


def _to_qq(value: RationalLike):
    fraction = Fraction(value)
    return QQ(fraction.numerator, fraction.denominator)


def coefficient(re_part: RationalLike = 0, im_part: RationalLike = 0) -> Coefficient:
    """Build the Gaussian rational ``re_part + im_part*i``."""

    return QQ_I(_to_qq(re_part), _to_qq(im_part))


def _qq_to_fraction(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


def real_part(value: Coefficient) -> Fraction:
    return _qq_to_fraction(value.x)


def imag_part(value: Coefficient) -> Fraction:
    return _qq_to_fraction(value.y)


ZERO = QQ_I.zero
ONE = QQ_I.one
IMAGINARY_UNIT = coefficient(0, 1)


def monomial_degree(monomial: Monomial) -> int:
    return sum(monomial)


def monomials_of_degree(var_count: int, degree: int) -> Iterator[Monomial]:
    """Yield every exponent vector of the given total degree."""

    for combo in combinations_with_replacement(range(var_count), degree):
        exponents = [0] * var_count
        for index in combo:
            exponents[index] += 1
        yield tuple(exponents)


def monomials_up_to(var_count: int, degree: int) -> list[Monomial]:
    """All exponent vectors of total degree at most ``degree``, degree by degree."""

    result: list[Monomial] = []
    for d in range(degree + 1):
        result.extend(sorted(monomials_of_degree(var_count, d), reverse=True))
    return result


@dataclass(frozen=True)
class RingContext:
    """An ordered, duplicate-free list of variable names."""

    var_names: tuple[str, ...]

    def __post_init__(self) -> None:
        names = tuple(self.var_names)
        object.__setattr__(self, "var_names", names)
        if not names:
            raise VariableNameError("a ring needs at least one variable")
        if len(set(names)) != len(names):
            raise VariableNameError(f"duplicate variable names: {', '.join(names)}")
        for name in names:
            if not VARIABLE_NAME_RE.match(name) or name in RESERVED_NAMES:
                raise VariableNameError(f"invalid variable name: {name!r}")

    @classmethod
    def of(cls, names: Union[str, Iterable[str]]) -> "RingContext":
        if isinstance(names, str):
            names = [part.strip() for part in names.split(",") if part.strip()]
        return cls(tuple(names))

    @property
    def var_count(self) -> int:
        return len(self.var_names)

    @cached_property
    def sympy_ring(self) -> PolyRing:
        return PolyRing(self.var_names, QQ_I, grlex)

    @property
    def zero_monomial(self) -> Monomial:
        return (0,) * self.var_count

    def index(self, name: str) -> int:
        try:
            return self.var_names.index(name)
        except ValueError:
            raise VariableNameError(f"unknown variable {name!r}") from None

    def wrap(self, element: PolyElement) -> "Poly":
        return Poly(self, element)

    def zero(self) -> "Poly":
        return Poly(self, self.sympy_ring.zero)

    def one(self) -> "Poly":
        return Poly(self, self.sympy_ring.one)

    def constant(self, value: Union[Coefficient, RationalLike]) -> "Poly":
        if not isinstance(value, Coefficient):
            value = coefficient(value)
        return Poly(self, self.sympy_ring.ground_new(value))

    def gen(self, index: int) -> "Poly":
        if not 0 <= index < self.var_count:
            raise PreconditionError(f"variable index {index} out of range for {self.var_count} variables")
        return Poly(self, self.sympy_ring.gens[index])

    def gens(self) -> list["Poly"]:
        return [self.gen(k) for k in range(self.var_count)]

    def variable(self, name: str) -> "Poly":
        return self.gen(self.index(name))

    def monomial(self, exponents: Sequence[int], coeff: Union[Coefficient, RationalLike] = 1) -> "Poly":
        return self.from_terms({tuple(exponents): coeff})

    def from_terms(self, terms: Mapping[Monomial, Union[Coefficient, RationalLike]]) -> "Poly":
        cleaned: dict[Monomial, Coefficient] = {}
        for monom, value in terms.items():
            monom = tuple(int(e) for e in monom)
            if len(monom) != self.var_count or any(e < 0 for e in monom):
                raise PreconditionError(f"monomial {monom} does not fit {self.var_count} variables")
            if not isinstance(value, Coefficient):
                value = coefficient(value)
            total = cleaned.get(monom, ZERO) + value
            if total:
                cleaned[monom] = total
            else:
                cleaned.pop(monom, None)
        return Poly(self, self.sympy_ring.from_dict(cleaned) if cleaned else self.sympy_ring.zero)

    def extend(self, names: Iterable[str]) -> "RingContext":
        """The ring with ``names`` appended; names must be fresh."""

        extra = tuple(names)
        clash = set(extra) & set(self.var_names)
        if clash:
            raise VariableNameError(f"variable names already in use: {', '.join(sorted(clash))}")
        return RingContext(self.var_names + extra)

    def fresh_names(self, count: int, prefix: str = "w") -> list[str]:
        """``count`` names ``prefix1, prefix2, ...`` skipping those already declared."""

        names: list[str] = []
        k = 1
        taken = set(self.var_names)
        while len(names) < count:
            candidate = f"{prefix}{k}"
            if candidate not in taken:
                names.append(candidate)
            k += 1
        return names


class Poly:
    """An immutable polynomial bound to a :class:`RingContext`."""

    __slots__ = ("ring", "_element")

    def __init__(self, ring: RingContext, element: PolyElement) -> None:
        self.ring = ring
        self._element = element

    @property
    def element(self) -> PolyElement:
        return self._element

    def _check(self, other: "Poly") -> None:
        if self.ring != other.ring:
            raise RingMismatchError(
                f"ring mismatch: ({', '.join(self.ring.var_names)}) vs ({', '.join(other.ring.var_names)})"
            )

    def _coerce(self, other) -> PolyElement:
        if isinstance(other, Poly):
            self._check(other)
            return other._element
        if isinstance(other, (int, Fraction)):
            return self.ring.sympy_ring.ground_new(coefficient(other))
        if isinstance(other, Coefficient):
            return self.ring.sympy_ring.ground_new(other)
        raise TypeError(f"cannot combine Poly with {type(other).__name__}")

    # --- arithmetic -----------------------------------------------------

    def __add__(self, other) -> "Poly":
        return Poly(self.ring, self._element + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other) -> "Poly":
        return Poly(self.ring, self._element - self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return Poly(self.ring, self._coerce(other) - self._element)

    def __neg__(self) -> "Poly":
        return Poly(self.ring, -self._element)

    def __mul__(self, other) -> "Poly":
        return Poly(self.ring, self._element * self._coerce(other))

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Poly":
        if exponent < 0:
            raise PreconditionError("negative exponents are not supported")
        return Poly(self.ring, self._element**exponent)

    def scale(self, value: Coefficient) -> "Poly":
        return Poly(self.ring, self._element * self.ring.sympy_ring.ground_new(value))

    def mul_term(self, monomial: Monomial, value: Coefficient) -> "Poly":
        return Poly(self.ring, self._element.mul_term((tuple(monomial), value)))

    # --- inspection -----------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring == other.ring and dict(self._element) == dict(other._element)

    def __hash__(self) -> int:
        return hash((self.ring, frozenset(self._element.items())))

    def __bool__(self) -> bool:
        return bool(self._element)

    def __repr__(self) -> str:
        return f"Poly({self._element}, ring={self.ring.var_names})"

    @property
    def is_zero(self) -> bool:
        return not self._element

    def terms(self) -> list[tuple[Monomial, Coefficient]]:
        """Terms in canonical order: graded, then lexicographic, largest first."""

        return self._element.terms()

    def as_dict(self) -> dict[Monomial, Coefficient]:
        return dict(self._element)

    def support(self) -> list[Monomial]:
        return [monom for monom, _ in self.terms()]

    def coefficient(self, monomial: Monomial) -> Coefficient:
        return self._element.get(tuple(monomial), ZERO)

    def constant_term(self) -> Coefficient:
        return self.coefficient(self.ring.zero_monomial)

    def is_constant(self) -> bool:
        return all(monomial_degree(monom) == 0 for monom in self._element)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""

        return max((monomial_degree(m) for m in self._element), default=-1)

    def homogeneous_part(self, degree: int) -> "Poly":
        kept = {m: c for m, c in self._element.items() if monomial_degree(m) == degree}
        return Poly(self.ring, self.ring.sympy_ring.from_dict(kept))

    def truncate(self, degree: int) -> "Poly":
        """Drop every term of total degree above ``degree``."""

        kept = {m: c for m, c in self._element.items() if monomial_degree(m) <= degree}
        return Poly(self.ring, self.ring.sympy_ring.from_dict(kept))


def add(p: Poly, q: Poly) -> Poly:
    return p + q


def mul(p: Poly, q: Poly) -> Poly:
    return p * q


def exact_quotient(p: Poly, divisor: Poly) -> Optional[Poly]:
    """``p / divisor`` when it is a polynomial, else None."""

    p._check(divisor)
    if divisor.is_zero:
        raise PreconditionError("division by the zero polynomial")
    # a single divisor is its own Groebner basis: the remainder vanishes iff divisor | p
    quotient, remainder = divmod(p.element, divisor.element)
    if remainder:
        return None
    return Poly(p.ring, quotient)


def partial_derivative(p: Poly, var_index: int) -> Poly:
    if not 0 <= var_index < p.ring.var_count:
        raise PreconditionError(f"variable index {var_index} out of range for {p.ring.var_count} variables")
    return Poly(p.ring, p.element.diff(p.ring.sympy_ring.gens[var_index]))


def substitute(p: Poly, images: Sequence[Poly]) -> Poly:
    """Replace each variable of ``p`` by the corresponding image.

    Every image must vanish at the origin so that the map is a germ map.
    """

    if len(images) != p.ring.var_count:
        raise PreconditionError(f"expected {p.ring.var_count} images, got {len(images)}")
    target = images[0].ring
    for image in images:
        if image.ring != target:
            raise RingMismatchError("substitution images must share one ring")
        if image.constant_term():
            raise PreconditionError("substitution image has a nonzero constant term and would not fix the origin")

    elements = [image.element for image in images]
    powers: dict[tuple[int, int], PolyElement] = {}
    result = target.sympy_ring.zero
    for monom, value in p.element.items():
        term = target.sympy_ring.ground_new(value)
        for index, exponent in enumerate(monom):
            if exponent:
                key = (index, exponent)
                if key not in powers:
                    powers[key] = elements[index] ** exponent
                term = term * powers[key]
        result = result + term
    return Poly(target, result)


def embed(p: Poly, target: RingContext) -> Poly:
    """Rewrite ``p`` in a ring that declares all of its variables (by name)."""

    return substitute(p, [target.variable(name) for name in p.ring.var_names])


def order(p: Poly) -> Order:
    """Minimal total degree over the support; infinity for zero."""

    if p.is_zero:
        return INFINITY
    return min(monomial_degree(m) for m in p.element)


def hessian_at_zero(p: Poly) -> tuple[tuple[Coefficient, ...], ...]:
    """Second partial derivatives at the origin, read off the quadratic part."""

    n = p.ring.var_count
    rows = []
    for j in range(n):
        row = []
        for k in range(n):
            exponents = [0] * n
            exponents[j] += 1
            exponents[k] += 1
            value = p.coefficient(tuple(exponents))
            row.append(value * 2 if j == k else value)
        rows.append(tuple(row))
    return tuple(rows)
