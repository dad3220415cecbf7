"""Pydantic models for equichain documents.

Groups and finite free G-complexes are exchanged as JSON documents; homology
results are reported the same way. Structural checks that need the group
(∂² = 0 over ZG, group axioms) live in :mod:`equichain.schema`.
"""

from typing import Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import (
    AliasChoices,
    BaseModel,
    ConfigDict,
    Field,
    field_validator,
    model_validator,
)

ZGEntry = List[Tuple[int, int]]


class FiniteGroupDocument(BaseModel):
    """A finite group as a multiplication table.

    Attributes:
        kind: Always ``"group"``.
        name: Display name.
        identity: Index of the identity element.
        table: ``table[a][b]`` is the index of ``a·b``; also read from ``mul``.
        order: Optional; must match the table size when given.
    """

    kind: Literal["group"] = Field(default="group", description="Document kind")
    name: str = Field(default="", description="Group name")
    identity: int = Field(default=0, ge=0, description="Index of the identity element")
    table: List[List[int]] = Field(
        ...,
        min_length=1,
        validation_alias=AliasChoices("table", "mul"),
        description="Multiplication table",
    )
    order: Optional[int] = Field(default=None, ge=1, description="Number of elements")

    model_config = ConfigDict(str_strip_whitespace=True, validate_assignment=True)

    @field_validator("table")
    @classmethod
    def validate_table_shape(cls, v: List[List[int]]) -> List[List[int]]:
        """The table must be square with entries naming elements."""
        order = len(v)
        for i, row in enumerate(v):
            if len(row) != order:
                raise ValueError(f"row {i} has length {len(row)}, expected {order}")
            for entry in row:
                if not 0 <= entry < order:
                    raise ValueError(f"entry {entry} in row {i} is not an element index")
        return v

    @model_validator(mode="after")
    def validate_identity_index(self) -> "FiniteGroupDocument":
        if self.identity >= len(self.table):
            raise ValueError(f"identity {self.identity} is not an element index")
        if self.order is not None and self.order != len(self.table):
            raise ValueError(
                f"order {self.order} does not match a table of size {len(self.table)}"
            )
        return self

    def to_json_payload(self) -> Dict[str, Any]:
        return self.model_dump(mode="json")


class DegreeDocument(BaseModel):
    """One degree of a finite free G-complex.

    ``differential[j][i]`` is the ZG-coefficient of the ``i``-th basis element
    of degree ``degree - 1`` in the boundary of the ``j``-th basis element,
    as ``(coefficient, group element)`` pairs.
    """

    degree: int = Field(..., ge=0, description="Degree")
    rank: int = Field(..., ge=0, description="Rank over ZG")
    differential: List[List[ZGEntry]] = Field(
        default_factory=list, description="Boundary coefficients per basis element"
    )

    @model_validator(mode="after")
    def validate_rows(self) -> "DegreeDocument":
        if self.differential and len(self.differential) != self.rank:
            raise ValueError(
                f"degree {self.degree}: differential has {len(self.differential)} rows, "
                f"expected {self.rank}"
            )
        if self.degree == 0 and any(entry for row in self.differential for entry in row):
            raise ValueError("degree 0 cannot have a nonzero differential")
        return self


class ComplexDocument(BaseModel):
    """A finite free G-complex.

    Attributes:
        kind: Always ``"complex"``.
        name: Display name.
        group: A group spec (``cyclic:n``, ``symmetric:3``) or an inline table.
        degrees: Consecutive degrees starting at 0.
    """

    kind: Literal["complex"] = Field(default="complex", description="Document kind")
    name: str = Field(default="complex", description="Complex name")
    group: Union[str, FiniteGroupDocument] = Field(..., description="Coefficient group")
    degrees: List[DegreeDocument] = Field(..., description="Degrees 0..n")

    model_config = ConfigDict(str_strip_whitespace=True, validate_assignment=True)

    @field_validator("degrees")
    @classmethod
    def validate_consecutive(cls, v: List[DegreeDocument]) -> List[DegreeDocument]:
        for expected, entry in enumerate(v):
            if entry.degree != expected:
                raise ValueError(f"degrees must run 0, 1, ...; found {entry.degree} at {expected}")
        return v

    @property
    def ranks(self) -> List[int]:
        return [entry.rank for entry in self.degrees]

    def to_json_payload(self) -> Dict[str, Any]:
        return self.model_dump(mode="json")


class GroupDescriptorDocument(BaseModel):
    """A finitely generated abelian group in one degree."""

    degree: int = Field(..., ge=0, description="Degree")
    rank: int = Field(..., ge=0, description="Free rank")
    torsion: List[int] = Field(default_factory=list, description="Invariant factors")

    @field_validator("torsion")
    @classmethod
    def validate_chain(cls, v: List[int]) -> List[int]:
        if any(d < 2 for d in v):
            raise ValueError(f"torsion coefficients must be at least 2: {v}")
        for a, b in zip(v, v[1:]):
            if b % a:
                raise ValueError(f"torsion {v} is not a divisibility chain")
        return v


class HomologyReportDocument(BaseModel):
    """Per-degree (co)homology of one input."""

    input: str = Field(..., description="Input spec or path")
    group: str = Field(..., description="Group name")
    kind: Literal["homology", "cohomology"] = Field(default="homology")
    max_degree: int = Field(..., ge=0)
    seed: int = Field(default=0)
    target_ranks: Optional[List[int]] = Field(
        default=None, description="Ranks of the bar construction over ZG"
    )
    groups: List[GroupDescriptorDocument] = Field(default_factory=list)

    def to_json_payload(self) -> Dict[str, Any]:
        return self.model_dump(mode="json")


Document = Union[FiniteGroupDocument, ComplexDocument]


def parse_document(payload: Dict[str, Any]) -> Document:
    """Dispatch on ``kind``, falling back to the keys present."""
    kind = payload.get("kind")
    if kind is None:
        kind = "group" if "table" in payload or "mul" in payload else "complex"
    if kind == "group":
        return FiniteGroupDocument.model_validate(payload)
    return ComplexDocument.model_validate(payload)
