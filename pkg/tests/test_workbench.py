"""Test example complexes, group specs and document conversion."""

from pathlib import Path

import pytest

from equichain.algebra import cyclic_group
from equichain.errors import InvalidComplexError
from equichain.homology import homology_table, quotient_by_G
from equichain.pydantic_models import FiniteGroupDocument
from equichain.workbench import (
    builtin_document,
    complex_from_document,
    complex_to_document,
    gen_bar_resolution,
    gen_lens_complex,
    group_to_document,
    load_complex,
    load_group,
)

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.mark.parametrize(
    "spec,order,name",
    [("cyclic:1", 1, "Z/1"), ("cyclic:4", 4, "Z/4"), ("symmetric:3", 6, "S3")],
)
def test_load_group_specs(spec, order, name):
    """Test builtin group specs."""
    group = load_group(spec)
    assert group.order == order
    assert group.name == name


def test_load_group_from_file():
    """Test a group table read from JSON."""
    group = load_group(str(FIXTURES / "z3_group.json"))
    assert group.order == 3
    assert group.name == "Z/3"


def test_load_group_from_document():
    """Test an inline document round trip."""
    group = load_group(group_to_document(cyclic_group(5)))
    assert group.order == 5


@pytest.mark.parametrize(
    "spec,message",
    [
        ("cyclic:0", "bad cyclic group spec"),
        ("cyclic:x", "bad cyclic group spec"),
        ("symmetric:4", "only symmetric:3"),
        ("dihedral", "unknown group spec"),
    ],
)
def test_load_group_errors(spec, message):
    """Test rejected group specs."""
    with pytest.raises(InvalidComplexError, match=message):
        load_group(spec)


def test_load_group_checks_axioms():
    """Test a table that is not associative."""
    with pytest.raises(InvalidComplexError, match="associativity"):
        load_group(str(FIXTURES / "broken_group.json"))
    doc = FiniteGroupDocument(table=[[0, 1, 2], [1, 0, 1], [2, 2, 0]])
    with pytest.raises(InvalidComplexError):
        load_group(doc)


def test_lens_complex_shape():
    """Test ranks, boundaries and bounds of the lens complex."""
    lens = gen_lens_complex(3, 2)
    assert lens.name == "L(3,2)"
    assert [len(lens.labels(n)) for n in range(5)] == [1, 1, 1, 1, 0]
    assert len(lens.label_boundary((2,)).raw_items()) == 3
    with pytest.raises(InvalidComplexError, match="p >= 2"):
        gen_lens_complex(1, 2)
    with pytest.raises(InvalidComplexError, match="k >= 1"):
        gen_lens_complex(2, 0)


def test_bar_resolution_shape():
    """Test the bar resolution is free on n-tuples."""
    module, se = gen_bar_resolution(cyclic_group(2), 2)
    assert module.name == "EZ/2"
    assert [len(module.labels(n)) for n in range(4)] == [1, 2, 4, 8]
    assert module.max_degree == 4
    assert se.left.source is module


def test_document_round_trip_keeps_homology():
    """Test serializing and reloading a complex."""
    lens = gen_lens_complex(3, 2)
    doc = complex_to_document(lens, 3, "cyclic:3")
    assert doc.ranks == [1, 1, 1, 1]
    reloaded = complex_from_document(doc)
    assert homology_table(quotient_by_G(reloaded, 3), range(4)) == homology_table(
        quotient_by_G(lens, 3), range(4)
    )


def test_builtin_documents():
    """Test builtin specs serialize with their group."""
    lens = builtin_document("builtin:lens:2:2", 3)
    assert lens.ranks == [1, 1, 1, 1]
    assert lens.group == "cyclic:2"
    bar = builtin_document("builtin:bar:cyclic:2", 2)
    assert bar.ranks == [1, 2, 4]
    assert bar.group == "cyclic:2"


def test_load_complex_builtins():
    """Test builtin complexes come with an equivalence out of them."""
    module, se = load_complex("builtin:lens:3:1", 2)
    assert module.name == "L(3,1)"
    assert se.source is module
    circle, _ = load_complex("builtin:circle", 1)
    assert circle.ring.group.order == 1


def test_load_complex_from_files():
    """Test the example documents."""
    lens, _ = load_complex(str(FIXTURES / "lens_3.json"), 3)
    assert [str(d) for d in homology_table(quotient_by_G(lens, 3), range(4))] == [
        "Z",
        "Z/3",
        "0",
        "Z",
    ]
    circle, _ = load_complex(str(FIXTURES / "circle_z2.json"), 1)
    assert [str(d) for d in homology_table(quotient_by_G(circle, 1), range(2))] == ["Z", "Z"]


@pytest.mark.parametrize(
    "spec,message",
    [
        ("builtin:torus", "unknown builtin"),
        ("builtin:lens:a:b", "bad lens spec"),
        ("missing.json", "no such complex file"),
    ],
)
def test_load_complex_errors(spec, message):
    """Test rejected complex specs."""
    with pytest.raises(InvalidComplexError, match=message):
        load_complex(spec, 2)
