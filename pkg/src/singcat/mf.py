"""Matrix factorizations and their homotopy category.

A matrix factorization of f is a pair (A, B) of square polynomial matrices
with AB = BA = f*I. Every constructor here validates that identity exactly,
so any value of :class:`MatrixFactorization` is a genuine factorization.
Matrices are tuples of rows of :class:`~singcat.ring.Poly`.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import FactorizationError, NotIsolatedError, PreconditionError, RingMismatchError
from .linalg import nullspace, rank, solve
from .ring import (
    IMAGINARY_UNIT,
    INFINITY,
    ONE,
    ZERO,
    Coefficient,
    Monomial,
    Poly,
    RingContext,
    embed,
    exact_quotient,
    monomials_up_to,
    monomial_degree,
    order,
    substitute,
)
from .singularity import Germ, milnor_number
from .stdbasis import DEFAULT_DEGREE_CAP

logger = logging.getLogger("singcat.mf")

Matrix = tuple[tuple[Poly, ...], ...]


# --- matrix helpers -------------------------------------------------------


def as_matrix(rows: Sequence[Sequence[Poly]]) -> Matrix:
    return tuple(tuple(row) for row in rows)


def zeros(ring: RingContext, rows: int, cols: int) -> Matrix:
    zero = ring.zero()
    return tuple(tuple(zero for _ in range(cols)) for _ in range(rows))


def scalar_matrix(ring: RingContext, size: int, value: Poly) -> Matrix:
    zero = ring.zero()
    return tuple(tuple(value if r == c else zero for c in range(size)) for r in range(size))


def identity(ring: RingContext, size: int) -> Matrix:
    return scalar_matrix(ring, size, ring.one())


def mat_mul(ring: RingContext, left: Matrix, right: Matrix, inner: Optional[int] = None) -> Matrix:
    rows = len(left)
    inner = len(right) if inner is None else inner
    cols = len(right[0]) if right else 0
    result = []
    for r in range(rows):
        row = []
        for c in range(cols):
            total = ring.zero()
            for k in range(inner):
                a = left[r][k]
                if a.is_zero:
                    continue
                b = right[k][c]
                if not b.is_zero:
                    total = total + a * b
            row.append(total)
        result.append(tuple(row))
    return tuple(result)


def mat_add(left: Matrix, right: Matrix) -> Matrix:
    return tuple(tuple(a + b for a, b in zip(lr, rr)) for lr, rr in zip(left, right))


def mat_neg(matrix: Matrix) -> Matrix:
    return tuple(tuple(-a for a in row) for row in matrix)


def mat_map(matrix: Matrix, fn) -> Matrix:
    return tuple(tuple(fn(a) for a in row) for row in matrix)


def block(ring: RingContext, blocks: Sequence[Sequence[Matrix]], row_sizes: Sequence[int], col_sizes: Sequence[int]) -> Matrix:
    rows = []
    for bi, height in enumerate(row_sizes):
        for r in range(height):
            row: list[Poly] = []
            for bj, width in enumerate(col_sizes):
                piece = blocks[bi][bj]
                row.extend(piece[r] if piece else [ring.zero()] * width)
            rows.append(tuple(row))
    return tuple(rows)


def _shape_check(name: str, matrix: Matrix, rows: int, cols: int, ring: RingContext) -> None:
    if len(matrix) != rows or any(len(row) != cols for row in matrix):
        raise PreconditionError(f"{name} must be {rows}x{cols}")
    for row in matrix:
        for entry in row:
            if entry.ring != ring:
                raise RingMismatchError(f"{name} has an entry outside the ring of f")


# --- values ---------------------------------------------------------------


@dataclass(frozen=True)
class MatrixFactorization:
    """A validated pair (A, B) with AB = BA = f*I."""

    A: Matrix
    B: Matrix
    f: Poly

    def __post_init__(self) -> None:
        size = len(self.A)
        _shape_check("A", self.A, size, size, self.f.ring)
        _shape_check("B", self.B, size, size, self.f.ring)
        for label, left, right in (("AB", self.A, self.B), ("BA", self.B, self.A)):
            product = mat_mul(self.ring, left, right, size)
            for r in range(size):
                for c in range(size):
                    expected = self.f if r == c else self.ring.zero()
                    if product[r][c] != expected:
                        raise FactorizationError(
                            f"{label} differs from f*I at entry ({r}, {c})", product=label, row=r, column=c
                        )

    @property
    def ring(self) -> RingContext:
        return self.f.ring

    @property
    def size(self) -> int:
        return len(self.A)

    @property
    def is_reduced(self) -> bool:
        return all(order(entry) >= 1 for matrix in (self.A, self.B) for row in matrix for entry in row)


@dataclass(frozen=True)
class MFMorphism:
    """A morphism of 2-periodic complexes: vA = A'u and uB = B'v."""

    source: MatrixFactorization
    target: MatrixFactorization
    u: Matrix
    v: Matrix

    def __post_init__(self) -> None:
        src, tgt = self.source, self.target
        if src.f != tgt.f:
            raise PreconditionError("source and target factorize different polynomials")
        ring = src.ring
        _shape_check("u", self.u, tgt.size, src.size, ring)
        _shape_check("v", self.v, tgt.size, src.size, ring)
        checks = (
            ("vA", mat_mul(ring, self.v, src.A, src.size), mat_mul(ring, tgt.A, self.u, tgt.size)),
            ("uB", mat_mul(ring, self.u, src.B, src.size), mat_mul(ring, tgt.B, self.v, tgt.size)),
        )
        for label, left, right in checks:
            for r, (lrow, rrow) in enumerate(zip(left, right)):
                for c, (a, b) in enumerate(zip(lrow, rrow)):
                    if a != b:
                        raise FactorizationError(
                            f"morphism square {label} does not commute at entry ({r}, {c})", product=label, row=r, column=c
                        )


@dataclass(frozen=True)
class Homotopy:
    """(h, k) with u = kA + B'h and v = hB + A'k."""

    h: Matrix
    k: Matrix


@dataclass(frozen=True)
class NullhomotopyResult:
    nullhomotopic: bool
    conclusive: bool
    homotopy: Optional[Homotopy] = None


@dataclass(frozen=True)
class HomDimension:
    dimension: int
    stabilized: bool
    degree_bound: int


# --- objects --------------------------------------------------------------


def validate(A: Sequence[Sequence[Poly]], B: Sequence[Sequence[Poly]], f: Poly) -> MatrixFactorization:
    return MatrixFactorization(as_matrix(A), as_matrix(B), f)


def zero_object(f: Poly) -> MatrixFactorization:
    return MatrixFactorization((), (), f)


def trivial_pair(f: Poly) -> tuple[MatrixFactorization, MatrixFactorization]:
    if f.is_zero:
        raise PreconditionError("trivial factorizations need f != 0")
    one = f.ring.one()
    return validate([[one]], [[f]], f), validate([[f]], [[one]], f)


def shift(M: MatrixFactorization) -> MatrixFactorization:
    return MatrixFactorization(M.B, M.A, M.f)


def _require_same(M: MatrixFactorization, N: MatrixFactorization) -> None:
    if M.ring != N.ring:
        raise RingMismatchError("factorizations live in different rings")
    if M.f != N.f:
        raise PreconditionError("factorizations of different polynomials")


def direct_sum(M: MatrixFactorization, N: MatrixFactorization) -> MatrixFactorization:
    _require_same(M, N)
    ring, sizes = M.ring, (M.size, N.size)
    A = block(ring, [[M.A, zeros(ring, M.size, N.size)], [zeros(ring, N.size, M.size), N.A]], sizes, sizes)
    B = block(ring, [[M.B, zeros(ring, M.size, N.size)], [zeros(ring, N.size, M.size), N.B]], sizes, sizes)
    return MatrixFactorization(A, B, M.f)


def permute(M: MatrixFactorization, permutation: Sequence[int]) -> MatrixFactorization:
    """Reorder rows and columns of both matrices simultaneously; position a takes index permutation[a]."""

    if sorted(permutation) != list(range(M.size)):
        raise PreconditionError("not a permutation of the factorization's rows")
    A = tuple(tuple(M.A[a][b] for b in permutation) for a in permutation)
    B = tuple(tuple(M.B[a][b] for b in permutation) for a in permutation)
    return MatrixFactorization(A, B, M.f)


def knoerrer_sum_permutation(left_size: int, right_size: int) -> list[int]:
    """The fixed reordering taking knoerrer(M + N) to knoerrer(M) + knoerrer(N)."""

    total = left_size + right_size
    return [
        *range(left_size),
        *range(total, total + left_size),
        *range(left_size, total),
        *range(total + left_size, 2 * total),
    ]


def canonical_permutation(M: MatrixFactorization, left_size: int) -> MatrixFactorization:
    """Normalize a Knoerrer image of a direct sum whose first summand has ``left_size`` rows."""

    half = M.size // 2
    return permute(M, knoerrer_sum_permutation(left_size, half - left_size))


# --- morphisms ------------------------------------------------------------


def identity_morphism(M: MatrixFactorization) -> MFMorphism:
    unit = identity(M.ring, M.size)
    return MFMorphism(M, M, unit, unit)


def zero_morphism(M: MatrixFactorization, N: MatrixFactorization) -> MFMorphism:
    _require_same(M, N)
    empty = zeros(M.ring, N.size, M.size)
    return MFMorphism(M, N, empty, empty)


def compose(first: MFMorphism, second: MFMorphism) -> MFMorphism:
    """second after first."""

    if first.target != second.source:
        raise PreconditionError("morphisms are not composable")
    ring = first.source.ring
    inner = first.target.size
    return MFMorphism(
        first.source,
        second.target,
        mat_mul(ring, second.u, first.u, inner),
        mat_mul(ring, second.v, first.v, inner),
    )


def morphism_from_homotopy(source: MatrixFactorization, target: MatrixFactorization, homotopy: Homotopy) -> MFMorphism:
    _require_same(source, target)
    ring = source.ring
    u = mat_add(mat_mul(ring, homotopy.k, source.A, source.size), mat_mul(ring, target.B, homotopy.h, target.size))
    v = mat_add(mat_mul(ring, homotopy.h, source.B, source.size), mat_mul(ring, target.A, homotopy.k, target.size))
    return MFMorphism(source, target, u, v)


# --- triangulated structure -----------------------------------------------


def cone(phi: MFMorphism) -> MatrixFactorization:
    """C_A = [[A', v], [0, -B]] and C_B = [[B', u], [0, -A]]."""

    src, tgt = phi.source, phi.target
    ring = src.ring
    rows = (tgt.size, src.size)
    C_A = block(ring, [[tgt.A, phi.v], [zeros(ring, src.size, tgt.size), mat_neg(src.B)]], rows, rows)
    C_B = block(ring, [[tgt.B, phi.u], [zeros(ring, src.size, tgt.size), mat_neg(src.A)]], rows, rows)
    try:
        return MatrixFactorization(C_A, C_B, src.f)
    except FactorizationError as exc:
        raise RuntimeError("cone of a valid morphism failed to validate") from exc


def knoerrer(M: MatrixFactorization, x_name: str, y_name: str) -> MatrixFactorization:
    """Knoerrer's functor to f + xy in a ring extended by x and y."""

    extended = M.ring.extend([x_name, y_name])
    x, y = extended.variable(x_name), extended.variable(y_name)
    A = mat_map(M.A, lambda p: embed(p, extended))
    B = mat_map(M.B, lambda p: embed(p, extended))
    size = M.size
    sizes = (size, size)
    K_A = block(
        extended,
        [[A, scalar_matrix(extended, size, -y)], [scalar_matrix(extended, size, x), B]],
        sizes,
        sizes,
    )
    K_B = block(
        extended,
        [[B, scalar_matrix(extended, size, y)], [scalar_matrix(extended, size, -x), A]],
        sizes,
        sizes,
    )
    return MatrixFactorization(K_A, K_B, embed(M.f, extended) + x * y)


def knoerrer_squares(M: MatrixFactorization, u_name: str, v_name: str) -> MatrixFactorization:
    """knoerrer followed by x -> u + i*v, y -> u - i*v, landing over f + u^2 + v^2."""

    image = knoerrer(M, u_name, v_name)
    ring = image.ring
    u, v = ring.variable(u_name), ring.variable(v_name)
    twisted = v.scale(IMAGINARY_UNIT)
    images = [ring.gen(k) for k in range(ring.var_count)]
    images[ring.index(u_name)] = u + twisted
    images[ring.index(v_name)] = u - twisted

    def change(p: Poly) -> Poly:
        return substitute(p, images)

    return MatrixFactorization(mat_map(image.A, change), mat_map(image.B, change), change(image.f))


# --- trivial summands -----------------------------------------------------


def _unit_positions(matrix: list[list[Poly]]) -> list[tuple[int, int]]:
    """Entries of order 0, constants first, then by number of terms."""

    units = [(r, c) for r, row in enumerate(matrix) for c, entry in enumerate(row) if order(entry) == 0]
    return sorted(units, key=lambda rc: (not matrix[rc[0]][rc[1]].is_constant(), len(matrix[rc[0]][rc[1]].terms())))


def _schur_complement(A: list[list[Poly]], p: int, q: int) -> Optional[list[list[Poly]]]:
    """A0 - beta*alpha/a around the unit a = A[p][q]; None when a quotient is not polynomial.

    Over the local ring the pivot row and column are cleared by row and column
    operations; the complementary block of the partner matrix is untouched by
    them, so it survives as is.
    """

    pivot = A[p][q]
    rest: list[list[Poly]] = []
    for r, row in enumerate(A):
        if r == p:
            continue
        new_row: list[Poly] = []
        for c, entry in enumerate(row):
            if c == q:
                continue
            product = A[r][q] * A[p][c]
            if not product.is_zero:
                quotient = exact_quotient(product, pivot)
                if quotient is None:
                    return None
                entry = entry - quotient
            new_row.append(entry)
        rest.append(new_row)
    return rest


def _split_unit(A: list[list[Poly]], B: list[list[Poly]]) -> Optional[tuple[list[list[Poly]], list[list[Poly]]]]:
    """Split one trivial summand off at a unit entry of A."""

    for p, q in _unit_positions(A):
        A_rest = _schur_complement(A, p, q)
        if A_rest is None:
            continue
        B_rest = [[entry for c, entry in enumerate(row) if c != p] for r, row in enumerate(B) if r != q]
        return A_rest, B_rest
    return None


def reduce(M: MatrixFactorization) -> MatrixFactorization:
    """Split off trivial summands until every entry of A and B lies in the maximal ideal.

    Pivots are local units (nonzero constant term), so ``1 + x`` counts as
    one. The remaining blocks keep polynomial entries.
    """

    A = [list(row) for row in M.A]
    B = [list(row) for row in M.B]
    pivots = 0
    while A:
        split = _split_unit(A, B)
        if split is not None:
            A, B = split
        else:
            split = _split_unit(B, A)
            if split is None:
                break
            B, A = split
        pivots += 1

    result = MatrixFactorization(as_matrix(A), as_matrix(B), M.f)
    if not result.is_reduced:
        logger.warning("Unit pivots without polynomial complement left in place", extra={"size": result.size, "pivots": pivots})
    logger.debug("Trivial summands split off", extra={"size": result.size, "pivots": pivots})
    return result


# --- jet-level linear systems ----------------------------------------------

Coordinate = tuple  # (matrix label, row, column, monomial)


def _shifted(monomial: Monomial, other: Monomial) -> Monomial:
    return tuple(a + b for a, b in zip(monomial, other))


def _accumulate(target: dict, label: str, row: int, col: int, entry: Poly, monomial: Monomial, sign: int) -> None:
    for term, value in entry.terms():
        key = (label, row, col, _shifted(term, monomial))
        total = target.get(key, ZERO) + (value if sign > 0 else -value)
        if total:
            target[key] = total
        else:
            target.pop(key, None)


def _unknowns(target: MatrixFactorization, source: MatrixFactorization, labels: Sequence[str], degree: int) -> list[tuple]:
    monomials = monomials_up_to(source.ring.var_count, degree)
    return [
        (label, i, j, monomial)
        for label in labels
        for i in range(target.size)
        for j in range(source.size)
        for monomial in monomials
    ]


def _boundary_image(source: MatrixFactorization, target: MatrixFactorization, unknown: tuple) -> dict:
    """(u, v) = (kA + B'h, hB + A'k) for a single monomial entry of h or k."""

    label, i, j, monomial = unknown
    image: dict = {}
    if label == "h":
        for r in range(target.size):
            _accumulate(image, "u", r, j, target.B[r][i], monomial, 1)
        for c in range(source.size):
            _accumulate(image, "v", i, c, source.B[j][c], monomial, 1)
    else:
        for c in range(source.size):
            _accumulate(image, "u", i, c, source.A[j][c], monomial, 1)
        for r in range(target.size):
            _accumulate(image, "v", r, j, target.A[r][i], monomial, 1)
    return image


def _cocycle_image(source: MatrixFactorization, target: MatrixFactorization, unknown: tuple) -> dict:
    """(vA - A'u, uB - B'v) for a single monomial entry of u or v."""

    label, i, j, monomial = unknown
    image: dict = {}
    if label == "u":
        for r in range(target.size):
            _accumulate(image, "vA", r, j, target.A[r][i], monomial, -1)
        for c in range(source.size):
            _accumulate(image, "uB", i, c, source.B[j][c], monomial, 1)
    else:
        for c in range(source.size):
            _accumulate(image, "vA", i, c, source.A[j][c], monomial, 1)
        for r in range(target.size):
            _accumulate(image, "uB", r, j, target.B[r][i], monomial, -1)
    return image


def _equation_rows(images: Sequence[dict], keep=None) -> tuple[list[dict[int, Coefficient]], list[Coordinate]]:
    """Transpose per-unknown images into equation rows over the unknowns."""

    rows: dict[Coordinate, dict[int, Coefficient]] = {}
    for column, image in enumerate(images):
        for key, value in image.items():
            if keep is not None and not keep(key):
                continue
            rows.setdefault(key, {})[column] = value
    keys = sorted(rows, key=repr)
    return [rows[key] for key in keys], keys


def _homotopy_system(phi: MFMorphism, degree: int, truncate: bool):
    src, tgt = phi.source, phi.target
    unknowns = _unknowns(tgt, src, ("h", "k"), degree)
    images = [_boundary_image(src, tgt, unknown) for unknown in unknowns]
    keep = (lambda key: monomial_degree(key[3]) <= degree) if truncate else None
    target_image: dict = {}
    for label, matrix in (("u", phi.u), ("v", phi.v)):
        for r, row in enumerate(matrix):
            for c, entry in enumerate(row):
                _accumulate(target_image, label, r, c, entry, src.ring.zero_monomial, 1)
    rows, keys = _equation_rows(images, keep)
    known = set(keys)
    extra = [key for key in target_image if key not in known and (keep is None or keep(key))]
    keys = keys + extra
    rows = rows + [{} for _ in extra]
    rhs = [target_image.get(key, ZERO) for key in keys]
    return unknowns, rows, rhs


def is_nullhomotopic(phi: MFMorphism, degree_bound: int) -> NullhomotopyResult:
    """Search for a homotopy (h, k) with entries of degree <= ``degree_bound``.

    An exact polynomial solution proves null-homotopy. When the equations are
    unsolvable even modulo m^(degree_bound + 1) no power-series homotopy
    exists, so the negative answer is conclusive; otherwise it is not.
    """

    if degree_bound < 1:
        raise PreconditionError("degree_bound must be at least 1")
    src, tgt = phi.source, phi.target
    if src.size == 0 or tgt.size == 0:
        empty = zeros(src.ring, tgt.size, src.size)
        return NullhomotopyResult(True, True, Homotopy(empty, empty))

    unknowns, rows, rhs = _homotopy_system(phi, degree_bound, truncate=False)
    solution = solve(rows, rhs, len(unknowns))
    if solution is not None:
        ring = src.ring
        h = [[ring.zero() for _ in range(src.size)] for _ in range(tgt.size)]
        k = [[ring.zero() for _ in range(src.size)] for _ in range(tgt.size)]
        for column, value in solution.items():
            label, i, j, monomial = unknowns[column]
            entries = h if label == "h" else k
            entries[i][j] = entries[i][j] + ring.monomial(monomial, value)
        return NullhomotopyResult(True, True, Homotopy(as_matrix(h), as_matrix(k)))

    unknowns, rows, rhs = _homotopy_system(phi, degree_bound, truncate=True)
    conclusive = solve(rows, rhs, len(unknowns)) is None
    if not conclusive:
        logger.warning("Null-homotopy test inconclusive", extra={"degree_cap": degree_bound})
    return NullhomotopyResult(False, conclusive)


def _hom_dimension(M: MatrixFactorization, N: MatrixFactorization, degree: int) -> int:
    cocycle_unknowns = _unknowns(N, M, ("u", "v"), degree)
    if not cocycle_unknowns:
        return 0
    index = {unknown: k for k, unknown in enumerate(cocycle_unknowns)}
    rows, _ = _equation_rows([_cocycle_image(M, N, unknown) for unknown in cocycle_unknowns])
    cocycles = len(cocycle_unknowns) - rank(rows, len(cocycle_unknowns))

    boundary_unknowns = _unknowns(N, M, ("h", "k"), degree)
    lows: list[dict[int, Coefficient]] = []
    highs: list[dict] = []
    for unknown in boundary_unknowns:
        image = _boundary_image(M, N, unknown)
        lows.append({index[key]: value for key, value in image.items() if monomial_degree(key[3]) <= degree})
        highs.append({key: value for key, value in image.items() if monomial_degree(key[3]) > degree})
    high_rows, _ = _equation_rows(highs)
    combinations = nullspace(high_rows, len(boundary_unknowns)) if high_rows else [
        {k: ONE} for k in range(len(boundary_unknowns))
    ]
    boundaries = []
    for combination in combinations:
        vector: dict[int, Coefficient] = {}
        for column, weight in combination.items():
            for key, value in lows[column].items():
                total = vector.get(key, ZERO) + weight * value
                if total:
                    vector[key] = total
                else:
                    vector.pop(key, None)
        boundaries.append(vector)
    return cocycles - rank(boundaries, len(cocycle_unknowns))


def stable_hom_dimension(
    M: MatrixFactorization,
    N: MatrixFactorization,
    degree_bound: int,
    degree_cap: int = DEFAULT_DEGREE_CAP,
) -> HomDimension:
    """dim of morphisms modulo null-homotopic ones, computed on jets of degree <= ``degree_bound``.

    The value is reported as stabilized when it agrees with the one at
    ``degree_bound + 1``.
    """

    _require_same(M, N)
    if degree_bound < 1:
        raise PreconditionError("degree_bound must be at least 1")
    if milnor_number(Germ(M.f), degree_cap) == INFINITY:
        raise NotIsolatedError("stable Hom is only computed for isolated singularities")
    value = _hom_dimension(M, N, degree_bound)
    following = _hom_dimension(M, N, degree_bound + 1)
    stabilized = value == following
    if not stabilized:
        logger.warning("Stable Hom dimension not stabilized", extra={"degree_cap": degree_bound, "size": value})
    return HomDimension(dimension=value, stabilized=stabilized, degree_bound=degree_bound)
