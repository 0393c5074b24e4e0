"""Exact linear algebra over the Gaussian rationals.

Matrices are handed to sympy's ``DomainMatrix`` in sparse (dict-of-dicts)
form; row reduction happens there, everything else is read off the reduced
row echelon form.
"""

from __future__ import annotations

from typing import Mapping, Optional, Sequence

from sympy.polys.domains import QQ_I
from sympy.polys.matrices import DomainMatrix

from .ring import Coefficient, Monomial, Poly, monomial_degree, monomials_up_to

SparseRow = Mapping[int, Coefficient]


def _domain_matrix(rows: Sequence[SparseRow], ncols: int) -> DomainMatrix:
    data = {}
    for index, row in enumerate(rows):
        cleaned = {col: value for col, value in row.items() if value}
        if cleaned:
            data[index] = cleaned
    return DomainMatrix(data, (len(rows), ncols), QQ_I)


def rref(rows: Sequence[SparseRow], ncols: int) -> tuple[list[dict[int, Coefficient]], tuple[int, ...]]:
    """Reduced row echelon form: the nonzero rows (in pivot order) and the pivot columns."""

    if not rows or ncols == 0:
        return [], ()
    reduced, pivots = _domain_matrix(rows, ncols).rref()
    sparse = reduced.to_sparse().rep
    echelon = [dict(sparse.get(i, {})) for i in range(len(pivots))]
    return echelon, tuple(pivots)


def rank(rows: Sequence[SparseRow], ncols: int) -> int:
    return len(rref(rows, ncols)[1])


def nullspace(rows: Sequence[SparseRow], ncols: int) -> list[dict[int, Coefficient]]:
    """A basis of {x : M x = 0}, one sparse vector per free column."""

    echelon, pivots = rref(rows, ncols)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vector = {free: QQ_I.one}
        for row, pivot in zip(echelon, pivots):
            value = row.get(free)
            if value:
                vector[pivot] = -value
        basis.append(vector)
    return basis


def solve(rows: Sequence[SparseRow], rhs: Sequence[Coefficient], ncols: int) -> Optional[dict[int, Coefficient]]:
    """One solution of M x = rhs (free variables set to zero), or None."""

    augmented = []
    for index in range(max(len(rows), len(rhs))):
        row = dict(rows[index]) if index < len(rows) else {}
        if index < len(rhs) and rhs[index]:
            row[ncols] = rhs[index]
        augmented.append(row)
    if not augmented:
        return {}
    echelon, pivots = rref(augmented, ncols + 1)
    if ncols in pivots:
        return None
    solution = {}
    for row, pivot in zip(echelon, pivots):
        value = row.get(ncols)
        if value:
            solution[pivot] = value
    return solution


def dense_rows(matrix: Sequence[Sequence[Coefficient]]) -> list[dict[int, Coefficient]]:
    return [{j: value for j, value in enumerate(row) if value} for row in matrix]


def poly_row(p: Poly, columns: Mapping[Monomial, int]) -> dict[int, Coefficient]:
    """Coefficients of ``p`` on the indexed monomials; other terms are dropped."""

    return {columns[m]: c for m, c in p.terms() if m in columns}


def jet_quotient_dimension(gens: Sequence[Poly], degree: int) -> int:
    """dim P/(I + m^degree) by dense linear algebra on the jet space.

    For a zero-dimensional ideal I of the local ring and ``degree`` past its
    highest corner this is the local quotient dimension; it serves as an
    independent oracle for the standard-basis engine.
    """

    if not gens:
        raise ValueError("at least one generator is required")
    ring = gens[0].ring
    columns = {m: k for k, m in enumerate(monomials_up_to(ring.var_count, degree - 1))}
    rows = []
    for g in gens:
        if g.is_zero:
            continue
        low = min(monomial_degree(m) for m in g.support())
        for multiplier in columns:
            if monomial_degree(multiplier) + low >= degree:
                continue
            rows.append(poly_row(g.mul_term(multiplier, QQ_I.one), columns))
    return len(columns) - rank(rows, len(columns))
