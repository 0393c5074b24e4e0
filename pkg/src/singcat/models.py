"""Pydantic v2 schemas for verdicts, certificates and manifests."""

from typing import Annotated, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

SCHEMA_VERSION = "1"

Side = Literal["left", "right"]


class _Frozen(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


# --- certificates -----------------------------------------------------------


class ParityObstruction(_Frozen):
    """Krull dimensions differ by an odd number."""

    kind: Literal["parity_obstruction"] = "parity_obstruction"
    d: int = Field(..., ge=0)
    e: int = Field(..., ge=0)
    serre_shift_left: int = Field(..., ge=0, le=1)
    serre_shift_right: int = Field(..., ge=0, le=1)


class TyurinaInvariantMismatch(_Frozen):
    """A named isomorphism invariant of the Tyurina algebras differs."""

    kind: Literal["tyurina_invariant_mismatch"] = "tyurina_invariant_mismatch"
    invariant: Literal["tau", "hilbert", "socle_dim", "m_power_dims", "m_squared_dim"]
    left: Union[int, list[int]]
    right: Union[int, list[int]]


class ADETypeMismatch(_Frozen):
    kind: Literal["ade_type_mismatch"] = "ade_type_mismatch"
    left: str
    right: str


class NotIsolated(_Frozen):
    kind: Literal["not_isolated"] = "not_isolated"
    side: Side


Certificate = Annotated[
    Union[ParityObstruction, TyurinaInvariantMismatch, ADETypeMismatch, NotIsolated],
    Field(discriminator="kind"),
]


# --- witnesses ----------------------------------------------------------------


class IdentityWitness(_Frozen):
    """The stabilized germs coincide after matching variables by position."""

    kind: Literal["identity"] = "identity"


class ADEWitness(_Frozen):
    kind: Literal["ade_match"] = "ade_match"
    ade: str


class SubstitutionWitness(_Frozen):
    """target(images) agrees with source modulo m^(determinacy + 1).

    ``images`` are the images of the target germ's variables, written over
    ``source_variables``.
    """

    kind: Literal["substitution"] = "substitution"
    source: Side
    source_variables: list[str]
    images: list[str]
    determinacy: int = Field(..., ge=1)


Witness = Annotated[Union[IdentityWitness, ADEWitness, SubstitutionWitness], Field(discriminator="kind")]


# --- verdicts -------------------------------------------------------------------


class Equivalent(_Frozen):
    outcome: Literal["equivalent"] = "equivalent"
    squares: int = Field(..., ge=0)
    stabilized_side: Optional[Side] = None
    fresh_variables: list[str] = Field(default_factory=list)
    witness: Witness


class NotEquivalent(_Frozen):
    outcome: Literal["not_equivalent"] = "not_equivalent"
    certificate: Certificate


class Unknown(_Frozen):
    outcome: Literal["unknown"] = "unknown"
    reason: str


EquivalenceVerdict = Annotated[Union[Equivalent, NotEquivalent, Unknown], Field(discriminator="outcome")]


# --- manifest payloads ------------------------------------------------------------


class RingSpec(_Frozen):
    variables: list[str] = Field(..., min_length=1)


class GermDocument(_Frozen):
    variables: list[str] = Field(..., min_length=1)
    germ: str


class MFDocument(_Frozen):
    A: list[list[str]]
    B: list[list[str]]
    f: str
    size: Optional[int] = Field(None, ge=0)
    reduced: Optional[bool] = None


class InvariantsDocument(_Frozen):
    mu: int = Field(..., ge=0)
    tau: int = Field(..., ge=0)
    corank: int = Field(..., ge=0)
    determinacy: Optional[int] = None
    ade: Optional[str] = None


class TyurinaDocument(_Frozen):
    tau: int = Field(..., ge=0)
    basis: list[str]
    hilbert: list[int]
    socle_dim: int = Field(..., ge=0)
    m_power_dims: list[int]
    m_squared_dim: int = Field(..., ge=0)
    mult_table: list[list[list[str]]]


class HomDocument(_Frozen):
    dimension: int = Field(..., ge=0)
    stabilized: bool
    degree_bound: int = Field(..., ge=1)


class VerdictDocument(_Frozen):
    left: GermDocument
    right: GermDocument
    verdict: EquivalenceVerdict
    verified: Optional[bool] = None


class Payload(_Frozen):
    """Exactly one of the fields is set."""

    germ: Optional[str] = None
    mf: Optional[MFDocument] = None
    verdict: Optional[VerdictDocument] = None
    invariants: Optional[InvariantsDocument] = None
    tyurina: Optional[TyurinaDocument] = None
    hom: Optional[HomDocument] = None

    @model_validator(mode="after")
    def _exactly_one(self) -> "Payload":
        present = [name for name, value in self if value is not None]
        if len(present) != 1:
            raise ValueError(f"payload must carry exactly one kind, got {present or 'none'}")
        return self

    @property
    def kind(self) -> str:
        return next(name for name, value in self if value is not None)


class Manifest(_Frozen):
    schema_version: Literal["1"] = SCHEMA_VERSION
    ring: RingSpec
    payload: Payload


class ErrorDocument(_Frozen):
    """Per-line failure record in batch mode."""

    error: str
    exit_code: int = Field(..., ge=1, le=5)
    line: int = Field(..., ge=1)


class MorphismDocument(_Frozen):
    source: MFDocument
    target: MFDocument
    u: list[list[str]]
    v: list[list[str]]


class HomRequest(_Frozen):
    source: MFDocument
    target: MFDocument


class BatchPair(_Frozen):
    """One line of batch input."""

    left: GermDocument
    right: GermDocument
