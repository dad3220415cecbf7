"""Test document invariant checks."""

import json
from pathlib import Path

import pytest

from equichain.pydantic_models import (
    ComplexDocument,
    DegreeDocument,
    FiniteGroupDocument,
    parse_document,
)
from equichain.schema import (
    validate_complex_document,
    validate_document,
    validate_documents,
    validate_group_document,
)

FIXTURES = Path(__file__).parent / "fixtures"


def _load(name):
    with open(FIXTURES / name, "r", encoding="utf-8") as f:
        return parse_document(json.load(f))


@pytest.mark.parametrize("name", ["z3_group.json", "lens_3.json", "circle_z2.json"])
def test_valid_documents(name):
    """Test the example documents have no problems."""
    assert validate_document(_load(name)) == []


def test_broken_group():
    """Test the associativity witness."""
    problems = validate_group_document(_load("broken_group.json"))
    assert problems == ["associativity fails for triple (1, 1, 2)"]


def test_square_not_zero():
    """Test d∘d ≠ 0 is found on the first offending basis element."""
    problems = validate_document(_load("bad_square.json"))
    assert problems == ["d^2 is not zero on basis element 0 of degree 2"]


def test_row_length_and_elements():
    """Test entries against the previous rank and the group order."""
    doc = ComplexDocument(
        group="cyclic:2",
        degrees=[
            DegreeDocument(degree=0, rank=1),
            DegreeDocument(degree=1, rank=2, differential=[[[(1, 5)]], [[], []]]),
        ],
    )
    problems = validate_complex_document(doc)
    assert problems == [
        "degree 1, basis element 0: 5 is not an element of Z/2",
        "degree 1, basis element 1: 2 entries, expected 1",
    ]


def test_unknown_group_spec():
    """Test a complex over a group that cannot be loaded."""
    doc = ComplexDocument(group="dihedral", degrees=[DegreeDocument(degree=0, rank=1)])
    problems = validate_complex_document(doc)
    assert len(problems) == 1
    assert problems[0].startswith("group: unknown group spec")


def test_validate_documents():
    """Test the index of the first invalid document is reported."""
    good = FiniteGroupDocument(table=[[0, 1], [1, 0]])
    validate_documents([good, _load("lens_3.json")])
    with pytest.raises(ValueError, match="Document 1 validation failed"):
        validate_documents([good, _load("bad_square.json")])
