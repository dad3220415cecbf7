"""Example complexes and JSON I/O for groups and finite G-complexes.

Builtin inputs are generated rather than stored so that the truncation degree
stays a free parameter:

* ``builtin:lens:<p>:<k>``: the periodic complex of Z/p of length ``2k``;
* ``builtin:bar:cyclic:<n>`` and ``builtin:bar:symmetric:3``: the bar
  resolution with its contraction to a point;
* ``builtin:circle``: Z → Z with zero differential over the trivial group.
"""

import json
from pathlib import Path
from typing import Dict, Hashable, List, Optional, Tuple, Union

from equichain.algebra import (
    Chain,
    FiniteGroup,
    add_into,
    cyclic_group,
    group_ring,
    symmetric_group,
)
from equichain.complexes import ChainComplex, FreeComplex, GradedMap, point_complex
from equichain.errors import InvalidComplexError
from equichain.logging_config import get_logger
from equichain.pydantic_models import (
    ComplexDocument,
    DegreeDocument,
    FiniteGroupDocument,
)
from equichain.reduction import StrongEquivalence, identity_reduction, normalize_homotopy

logger = get_logger(__name__)


def _sign(exponent: int) -> int:
    return -1 if exponent % 2 else 1


# -- groups -------------------------------------------------------------


def group_from_document(doc: FiniteGroupDocument) -> FiniteGroup:
    return FiniteGroup(doc.table, doc.identity, name=doc.name)


def group_to_document(group: FiniteGroup) -> FiniteGroupDocument:
    return FiniteGroupDocument(
        name=group.name, identity=group.identity, table=[list(row) for row in group.mul]
    )


def load_group(spec: Union[str, FiniteGroupDocument]) -> FiniteGroup:
    """``cyclic:n``, ``symmetric:3``, an inline document or a JSON file path.

    Raises:
        InvalidComplexError: unknown spec or a table violating the group axioms.
    """
    if isinstance(spec, FiniteGroupDocument):
        return group_from_document(spec).check()
    kind, _, arg = spec.partition(":")
    if kind == "cyclic" and arg:
        try:
            return cyclic_group(int(arg))
        except ValueError as e:
            raise InvalidComplexError(f"bad cyclic group spec {spec!r}: {e}")
    if kind == "symmetric" and arg:
        if arg != "3":
            raise InvalidComplexError(f"only symmetric:3 is built in, got {spec!r}")
        return symmetric_group(3)
    path = Path(spec)
    if not path.exists():
        raise InvalidComplexError(f"unknown group spec {spec!r}")
    with open(path, "r", encoding="utf-8") as f:
        doc = FiniteGroupDocument.model_validate(json.load(f))
    return group_from_document(doc).check()


# -- generated complexes ------------------------------------------------


def gen_bar_resolution(
    group: FiniteGroup, max_degree: int
) -> Tuple[FreeComplex, StrongEquivalence]:
    """The bar resolution of ``group`` and its contraction to a point.

    ``M_n`` is free over ZG on all n-tuples ``[g1|…|gn]`` with
    ``∂[g1|…|gn] = g1[g2|…|gn] + Σ (-1)^i [g1|…|g(i)g(i+1)|…|gn] + (-1)^n [g1|…|g(n-1)]``.
    The contraction sends ``g0[]`` to the point, the point to ``[]``, and
    ``g0[g1|…|gn]`` to ``[g0|g1|…|gn]`` before normalization.
    """
    ring = group_ring(group)
    unit = group.identity
    bound = max_degree + 2

    def labels(n: int):
        out = [()]
        for _ in range(n):
            out = [word + (g,) for word in out for g in group.elements()]
        return out

    def label_boundary(word):
        n = len(word)
        data: Dict[Hashable, int] = {}
        if n == 0:
            return Chain()
        add_into(data, {(word[0], word[1:]): 1})
        for i in range(1, n):
            merged = word[: i - 1] + (group.multiply(word[i - 1], word[i]),) + word[i + 1 :]
            add_into(data, {(unit, merged): _sign(i)})
        add_into(data, {(unit, word[:-1]): _sign(n)})
        return Chain._wrap(data)

    module = FreeComplex(
        f"E{group.name}", ring, len, label_boundary, labels=labels, max_degree=bound
    )
    point = point_complex()
    alpha = GradedMap(
        0,
        lambda cell: Chain.basis(0) if not cell[1] else Chain(),
        source=module,
        target=point,
        name="augmentation",
    )
    beta = GradedMap(
        0, lambda cell: Chain.basis((unit, ())), source=point, target=module, name="base"
    )
    eta_raw = GradedMap(
        1,
        lambda cell: Chain.basis((unit, (cell[0],) + cell[1])),
        source=module,
        target=module,
        name="cone",
    )
    contraction = normalize_homotopy(
        alpha,
        beta,
        eta_raw,
        source=module,
        target=point,
        max_degree=min(max_degree, 3),
        name=f"{module.name}=>point",
    )
    logger.info(f"generated bar resolution of {group.name} up to degree {bound}")
    return module, StrongEquivalence(identity_reduction(module), contraction)


def gen_lens_complex(p: int, k: int) -> FreeComplex:
    """Periodic free resolution of Z/p cut off after degree ``2k - 1``.

    Odd degrees map by ``g - 1`` and positive even degrees by the norm
    ``1 + g + … + g^(p-1)``.
    """
    if p < 2 or k < 1:
        raise InvalidComplexError(f"lens complex needs p >= 2 and k >= 1, got p={p}, k={k}")
    group = cyclic_group(p)
    ring = group_ring(group)
    top = 2 * k - 1

    def labels(n: int):
        return [(n,)] if 0 <= n <= top else []

    def label_boundary(label):
        (i,) = label
        if i == 0:
            return Chain()
        if i % 2:
            return Chain({(1, (i - 1,)): 1, (0, (i - 1,)): -1})
        return Chain({(j, (i - 1,)): 1 for j in group.elements()})

    return FreeComplex(f"L({p},{k})", ring, lambda label: label[0], label_boundary, labels)


def circle_complex(group: Optional[FiniteGroup] = None) -> Union[ChainComplex, FreeComplex]:
    """Z → Z with zero differential.

    Without a group this is a plain Z-complex; with one it is free over ZG on
    one generator in degrees 0 and 1.
    """
    if group is None:
        return ChainComplex(
            "circle",
            lambda cell: cell,
            lambda cell: Chain(),
            cells=lambda n: (n,) if n in (0, 1) else (),
        )
    return FreeComplex(
        "circle",
        group_ring(group),
        lambda label: label[0],
        lambda label: Chain(),
        labels=lambda n: [(n,)] if n in (0, 1) else [],
    )


# -- documents ----------------------------------------------------------


def complex_from_document(doc: ComplexDocument) -> FreeComplex:
    """Free G-complex with labels ``(degree, index)``.

    Raises:
        InvalidComplexError: entries name missing elements or basis elements.
    """
    group = load_group(doc.group)
    ring = group_ring(group)
    ranks = doc.ranks
    boundaries: Dict[Tuple[int, int], Chain] = {}
    for entry in doc.degrees:
        k = entry.degree
        if k == 0:
            continue
        for j, row in enumerate(entry.differential):
            if len(row) != ranks[k - 1]:
                raise InvalidComplexError(
                    f"degree {k}, row {j}: {len(row)} entries, expected {ranks[k - 1]}"
                )
            data: Dict[Hashable, int] = {}
            for i, pairs in enumerate(row):
                for coef, g in pairs:
                    if not 0 <= g < group.order:
                        raise InvalidComplexError(
                            f"degree {k}, row {j}: {g} is not an element of {group.name}"
                        )
                    add_into(data, {(g, (k - 1, i)): coef})
            boundaries[(k, j)] = Chain._wrap(data)

    def labels(n: int):
        return [(n, j) for j in range(ranks[n])] if n < len(ranks) else []

    return FreeComplex(
        doc.name,
        ring,
        lambda label: label[0],
        lambda label: boundaries.get(label, Chain()),
        labels=labels,
    )


def complex_to_document(
    module: FreeComplex,
    max_degree: int,
    group: Union[str, FiniteGroup],
    name: str = "",
) -> ComplexDocument:
    """Serialize degrees ``0..max_degree`` of a free complex."""
    group_field = group if isinstance(group, str) else group_to_document(group)
    degrees: List[DegreeDocument] = []
    previous: Dict[Hashable, int] = {}
    for k in range(max_degree + 1):
        labels = module.labels(k)
        rows = []
        for label in labels:
            row: List[List[Tuple[int, int]]] = [[] for _ in previous]
            for label_part, element in sorted(module.expand(module.label_boundary(label)).items()):
                row[previous[label_part]] = [(c, g) for g, c in element.terms()]
            rows.append(row)
        degrees.append(DegreeDocument(degree=k, rank=len(labels), differential=rows if k else []))
        previous = {label: i for i, label in enumerate(labels)}
    return ComplexDocument(name=name or module.name, group=group_field, degrees=degrees)


def builtin_document(spec: str, max_degree: int) -> ComplexDocument:
    """ComplexDocument of a builtin, serialized up to ``max_degree``."""
    module, _ = load_complex(spec, max_degree)
    group_name = spec.split(":", 1)[1]
    if group_name.startswith("lens:"):
        group_name = f"cyclic:{group_name.split(':')[1]}"
    elif group_name.startswith("bar:"):
        group_name = group_name[len("bar:") :]
    else:
        group_name = "cyclic:1"
    top = max_degree
    if module.max_degree is not None:
        top = min(top, module.max_degree)
    return complex_to_document(module, top, group_name)


def load_complex(
    spec: str, max_degree: int
) -> Tuple[FreeComplex, StrongEquivalence]:
    """A free G-complex and a strong equivalence out of it.

    ``builtin:...`` names a generated example; anything else is a path to a
    ComplexDocument, paired with the trivial equivalence.

    Raises:
        InvalidComplexError: unknown builtin or a malformed document.
    """
    if spec.startswith("builtin:"):
        parts = spec.split(":")[1:]
        if parts[0] == "lens" and len(parts) == 3:
            try:
                p, k = int(parts[1]), int(parts[2])
            except ValueError:
                raise InvalidComplexError(f"bad lens spec {spec!r}")
            module = gen_lens_complex(p, k)
            return module, StrongEquivalence.trivial(module)
        if parts[0] == "bar" and len(parts) == 3:
            return gen_bar_resolution(load_group(f"{parts[1]}:{parts[2]}"), max_degree)
        if parts == ["circle"]:
            module = circle_complex(cyclic_group(1))
            return module, StrongEquivalence.trivial(module)
        raise InvalidComplexError(f"unknown builtin {spec!r}")
    path = Path(spec)
    if not path.exists():
        raise InvalidComplexError(f"no such complex file: {spec}")
    with open(path, "r", encoding="utf-8") as f:
        doc = ComplexDocument.model_validate(json.load(f))
    module = complex_from_document(doc)
    logger.info(f"loaded {module.name} with ranks {doc.ranks}")
    return module, StrongEquivalence.trivial(module)
