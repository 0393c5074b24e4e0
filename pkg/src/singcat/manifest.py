"""Manifest documents: conversion between engine values and JSON."""

from __future__ import annotations

import json
from typing import Optional, Type, TypeVar

from pydantic import BaseModel, ValidationError

from .classify import Verdict
from .errors import ParseError
from .mf import HomDimension, Matrix, MatrixFactorization, MFMorphism, as_matrix, validate
from .models import (
    GermDocument,
    HomDocument,
    InvariantsDocument,
    Manifest,
    MFDocument,
    MorphismDocument,
    Payload,
    RingSpec,
    TyurinaDocument,
    VerdictDocument,
)
from .parser import format_coefficient, format_monomial, format_poly, parse_poly
from .ring import RingContext
from .singularity import Germ, SingularityInvariants, TyurinaAlgebra

ModelT = TypeVar("ModelT", bound=BaseModel)


def dumps(document: BaseModel, indent: Optional[int] = 2) -> str:
    """Canonical JSON: sorted keys, unset optional fields omitted."""

    return json.dumps(document.model_dump(mode="json", exclude_none=True), sort_keys=True, indent=indent)


def loads(text: str, model: Type[ModelT] = Manifest) -> ModelT:  # type: ignore[assignment]
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc.msg}", exc.lineno, exc.colno) from None
    try:
        return model.model_validate(data)
    except ValidationError as exc:
        first = exc.errors()[0]
        location = ".".join(str(part) for part in first["loc"]) or "document"
        raise ParseError(f"invalid {model.__name__} at {location}: {first['msg']}") from None


def ring_of(variables) -> RingContext:
    return RingContext.of(variables)


# --- germs ----------------------------------------------------------------------


def germ_document(g: Germ) -> GermDocument:
    return GermDocument(variables=list(g.ring.var_names), germ=format_poly(g.f))


def germ_from_document(document: GermDocument) -> Germ:
    ring = ring_of(document.variables)
    return Germ(parse_poly(document.germ, ring))


def germ_manifest(g: Germ) -> Manifest:
    return Manifest(ring=RingSpec(variables=list(g.ring.var_names)), payload=Payload(germ=format_poly(g.f)))


def germ_from_manifest(manifest: Manifest) -> Germ:
    if manifest.payload.germ is None:
        raise ParseError(f"expected a germ payload, got {manifest.payload.kind}")
    return Germ(parse_poly(manifest.payload.germ, ring_of(manifest.ring.variables)))


# --- matrix factorizations -----------------------------------------------------------


def _format_matrix(matrix: Matrix) -> list[list[str]]:
    return [[format_poly(entry) for entry in row] for row in matrix]


def _parse_matrix(rows: list[list[str]], ring: RingContext) -> Matrix:
    return as_matrix([[parse_poly(text, ring) for text in row] for row in rows])


def mf_document(M: MatrixFactorization) -> MFDocument:
    return MFDocument(
        A=_format_matrix(M.A),
        B=_format_matrix(M.B),
        f=format_poly(M.f),
        size=M.size,
        reduced=M.is_reduced,
    )


def mf_from_document(document: MFDocument, ring: RingContext) -> MatrixFactorization:
    return validate(_parse_matrix(document.A, ring), _parse_matrix(document.B, ring), parse_poly(document.f, ring))


def mf_manifest(M: MatrixFactorization) -> Manifest:
    return Manifest(ring=RingSpec(variables=list(M.ring.var_names)), payload=Payload(mf=mf_document(M)))


def mf_from_manifest(manifest: Manifest) -> MatrixFactorization:
    if manifest.payload.mf is None:
        raise ParseError(f"expected an mf payload, got {manifest.payload.kind}")
    return mf_from_document(manifest.payload.mf, ring_of(manifest.ring.variables))


def morphism_from_document(document: MorphismDocument, ring: RingContext) -> MFMorphism:
    return MFMorphism(
        mf_from_document(document.source, ring),
        mf_from_document(document.target, ring),
        _parse_matrix(document.u, ring),
        _parse_matrix(document.v, ring),
    )


# --- results ------------------------------------------------------------------------


def invariants_manifest(g: Germ, summary: SingularityInvariants) -> Manifest:
    document = InvariantsDocument(
        mu=int(summary.mu),
        tau=int(summary.tau),
        corank=summary.corank,
        determinacy=summary.determinacy,
        ade=str(summary.ade) if summary.ade is not None else None,
    )
    return Manifest(ring=RingSpec(variables=list(g.ring.var_names)), payload=Payload(invariants=document))


def tyurina_manifest(g: Germ, algebra: TyurinaAlgebra) -> Manifest:
    ring = g.ring
    document = TyurinaDocument(
        tau=algebra.tau,
        basis=[format_monomial(m, ring) for m in algebra.basis.monomials],
        hilbert=list(algebra.hilbert.values),
        socle_dim=algebra.socle_dim,
        m_power_dims=list(algebra.m_power_dims),
        m_squared_dim=algebra.m_squared_dim,
        mult_table=[[[format_coefficient(c) for c in entry] for entry in row] for row in algebra.mult_table],
    )
    return Manifest(ring=RingSpec(variables=list(ring.var_names)), payload=Payload(tyurina=document))


def hom_manifest(ring: RingContext, hom: HomDimension) -> Manifest:
    document = HomDocument(dimension=hom.dimension, stabilized=hom.stabilized, degree_bound=hom.degree_bound)
    return Manifest(ring=RingSpec(variables=list(ring.var_names)), payload=Payload(hom=document))


def verdict_manifest(g1: Germ, g2: Germ, verdict: Verdict, verified: Optional[bool] = None) -> Manifest:
    document = VerdictDocument(left=germ_document(g1), right=germ_document(g2), verdict=verdict, verified=verified)
    return Manifest(ring=RingSpec(variables=list(g1.ring.var_names)), payload=Payload(verdict=document))


def verdict_from_manifest(manifest: Manifest) -> tuple[Germ, Germ, Verdict]:
    document = manifest.payload.verdict
    if document is None:
        raise ParseError(f"expected a verdict payload, got {manifest.payload.kind}")
    return germ_from_document(document.left), germ_from_document(document.right), document.verdict
