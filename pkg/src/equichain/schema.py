"""Invariant checks for group and complex documents.

Pydantic validates the shape of a document; the checks here need the group
itself: the group axioms, element indices, row lengths and ∂² = 0 over ZG.
Each check returns the violations it found instead of raising.
"""

from typing import List, Sequence

from equichain.errors import EquichainError
from equichain.pydantic_models import ComplexDocument, Document, FiniteGroupDocument
from equichain.workbench import complex_from_document, group_from_document, load_group


def validate_group_document(doc: FiniteGroupDocument) -> List[str]:
    """Group axioms; messages name the first failing triple or element."""
    return group_from_document(doc).violations()


def validate_complex_document(doc: ComplexDocument) -> List[str]:
    """Group, matrix shapes and ∂² = 0 on every basis element."""
    try:
        group = load_group(doc.group)
    except EquichainError as e:
        return [f"group: {e}"]
    problems = []
    ranks = doc.ranks
    for entry in doc.degrees[1:]:
        k = entry.degree
        for j, row in enumerate(entry.differential):
            if len(row) != ranks[k - 1]:
                problems.append(
                    f"degree {k}, basis element {j}: {len(row)} entries, "
                    f"expected {ranks[k - 1]}"
                )
                continue
            for pairs in row:
                for _, g in pairs:
                    if not 0 <= g < group.order:
                        problems.append(
                            f"degree {k}, basis element {j}: {g} is not an element of "
                            f"{group.name}"
                        )
    if problems:
        return problems
    module = complex_from_document(doc)
    for k in range(2, len(ranks)):
        for label in module.labels(k):
            if module.boundary(module.boundary(module.embed(label))):
                problems.append(f"d^2 is not zero on basis element {label[1]} of degree {k}")
                return problems
    return problems


def validate_document(doc: Document) -> List[str]:
    if isinstance(doc, FiniteGroupDocument):
        return validate_group_document(doc)
    return validate_complex_document(doc)


def validate_documents(docs: Sequence[Document]) -> None:
    """Validate several documents.

    Raises:
        ValueError: naming the index of the first invalid document.
    """
    for i, doc in enumerate(docs):
        problems = validate_document(doc)
        if problems:
            raise ValueError(f"Document {i} validation failed: {problems[0]}")
