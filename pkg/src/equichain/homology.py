"""Quotients by the group action, Smith normal form and (co)homology groups.

A free G-complex is collapsed to ``N/G = Z ⊗_{ZG} N`` by sending every group
element to 1; the resulting integer matrices are diagonalized by unimodular
row and column operations. All arithmetic uses Python integers; certified runs
also compare against sympy's Smith normal form over ``ZZ``.
"""

import math
import threading
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple

import pandas as pd
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import invariant_factors

from equichain.complexes import ChainComplex, FreeComplex
from equichain.errors import EquichainError, InvalidComplexError
from equichain.logging_config import get_logger

logger = get_logger(__name__)

Entries = Dict[Tuple[int, int], int]


@dataclass(frozen=True)
class IntegerMatrix:
    """Sparse integer matrix; ``entries`` holds the nonzero entries only."""

    rows: int
    cols: int
    entries: Mapping[Tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError(f"matrix dimensions must be non-negative: {self.rows}x{self.cols}")
        cleaned = {}
        for (i, j), value in self.entries.items():
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise ValueError(f"entry ({i}, {j}) outside a {self.rows}x{self.cols} matrix")
            if value:
                cleaned[(i, j)] = int(value)
        object.__setattr__(self, "entries", cleaned)

    @classmethod
    def from_rows(
        cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None
    ) -> "IntegerMatrix":
        width = cols if cols is not None else (len(rows[0]) if rows else 0)
        entries = {}
        for i, row in enumerate(rows):
            if len(row) != width:
                raise ValueError(f"row {i} has length {len(row)}, expected {width}")
            for j, value in enumerate(row):
                if value:
                    entries[(i, j)] = value
        return cls(len(rows), width, entries)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntegerMatrix":
        return cls(rows, cols, {})

    def to_rows(self) -> List[List[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), value in self.entries.items():
            out[i][j] = value
        return out

    def transpose(self) -> "IntegerMatrix":
        return IntegerMatrix(
            self.cols, self.rows, {(j, i): v for (i, j), v in self.entries.items()}
        )

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise ValueError(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        by_row: Dict[int, Dict[int, int]] = {}
        for (k, j), v in other.entries.items():
            by_row.setdefault(k, {})[j] = v
        out: Entries = {}
        for (i, k), a in self.entries.items():
            for j, b in by_row.get(k, {}).items():
                out[(i, j)] = out.get((i, j), 0) + a * b
        return IntegerMatrix(self.rows, other.cols, out)

    def permuted(self, row_order: Sequence[int], col_order: Sequence[int]) -> "IntegerMatrix":
        """Row ``i`` of the result is row ``row_order[i]`` of this matrix, likewise for columns."""
        row_pos = {old: new for new, old in enumerate(row_order)}
        col_pos = {old: new for new, old in enumerate(col_order)}
        return IntegerMatrix(
            self.rows,
            self.cols,
            {(row_pos[i], col_pos[j]): v for (i, j), v in self.entries.items()},
        )

    @property
    def is_zero(self) -> bool:
        return not self.entries

    def to_domain_matrix(self) -> DomainMatrix:
        """The same matrix as a sparse sympy ``DomainMatrix`` over ``ZZ``."""
        rows: Dict[int, Dict[int, object]] = {}
        for (i, j), value in self.entries.items():
            rows.setdefault(i, {})[j] = ZZ(value)
        return DomainMatrix(rows, (self.rows, self.cols), ZZ)


class SmithForm(NamedTuple):
    factors: Tuple[int, ...]
    rank: int


def _eliminate_unit_pivots(matrix: IntegerMatrix) -> Tuple[int, Dict[int, Dict[int, int]]]:
    """Remove ±1 pivots; returns their number and the remaining rows."""
    rows: Dict[int, Dict[int, int]] = {}
    cols: Dict[int, set] = {}
    for (i, j), v in matrix.entries.items():
        rows.setdefault(i, {})[j] = v
        cols.setdefault(j, set()).add(i)
    units = 0
    progress = True
    while progress:
        progress = False
        for _, i in sorted((len(row), i) for i, row in rows.items()):
            row = rows.get(i)
            if not row:
                continue
            candidates = [j for j, v in row.items() if v in (1, -1)]
            if not candidates:
                continue
            j = min(candidates, key=lambda c: (len(cols[c]), c))
            pivot_row = rows.pop(i)
            u = pivot_row[j]
            for k in cols[j] - {i}:
                target = rows[k]
                factor = target[j] * u
                for c, v in pivot_row.items():
                    value = target.get(c, 0) - factor * v
                    if value:
                        target[c] = value
                        cols[c].add(k)
                    else:
                        target.pop(c, None)
                        cols[c].discard(k)
                if not target:
                    del rows[k]
            for c in pivot_row:
                cols[c].discard(i)
            del cols[j]
            units += 1
            progress = True
    return units, rows


class _DenseReduction:
    """Min-abs pivot diagonalization with optional recorded transforms."""

    def __init__(self, a: List[List[int]], track: bool = False):
        self.a = a
        self.m = len(a)
        self.n = len(a[0]) if a else 0
        self.track = track
        if track:
            self.left = [[int(i == j) for j in range(self.m)] for i in range(self.m)]
            self.right = [[int(i == j) for j in range(self.n)] for i in range(self.n)]

    def _swap_rows(self, i: int, k: int) -> None:
        self.a[i], self.a[k] = self.a[k], self.a[i]
        if self.track:
            self.left[i], self.left[k] = self.left[k], self.left[i]

    def _swap_cols(self, j: int, k: int) -> None:
        for row in self.a:
            row[j], row[k] = row[k], row[j]
        if self.track:
            for row in self.right:
                row[j], row[k] = row[k], row[j]

    def _add_row(self, target: int, source: int, k: int) -> None:
        """row[target] += k * row[source]"""
        self.a[target] = [x + k * y for x, y in zip(self.a[target], self.a[source])]
        if self.track:
            self.left[target] = [
                x + k * y for x, y in zip(self.left[target], self.left[source])
            ]

    def _add_col(self, target: int, source: int, k: int) -> None:
        for row in self.a:
            row[target] += k * row[source]
        if self.track:
            for row in self.right:
                row[target] += k * row[source]

    def _min_abs(self, s: int) -> Optional[Tuple[int, int]]:
        best = None
        for i in range(s, self.m):
            row = self.a[i]
            for j in range(s, self.n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        return i, j
        return (best[1], best[2]) if best else None

    def diagonal(self) -> List[int]:
        a = self.a
        out = []
        for s in range(min(self.m, self.n)):
            found = self._min_abs(s)
            if found is None:
                break
            self._swap_rows(s, found[0])
            self._swap_cols(s, found[1])
            while True:
                p = a[s][s]
                for i in range(s + 1, self.m):
                    if a[i][s]:
                        self._add_row(i, s, -(a[i][s] // p))
                for j in range(s + 1, self.n):
                    if a[s][j]:
                        self._add_col(j, s, -(a[s][j] // p))
                i = next((i for i in range(s + 1, self.m) if a[i][s]), None)
                if i is not None:
                    self._swap_rows(s, i)
                    continue
                j = next((j for j in range(s + 1, self.n) if a[s][j]), None)
                if j is not None:
                    self._swap_cols(s, j)
                    continue
                break
            if a[s][s] < 0:
                a[s] = [-x for x in a[s]]
                if self.track:
                    self.left[s] = [-x for x in self.left[s]]
            out.append(a[s][s])
        return out


def _matmul_rows(x: List[List[int]], y: List[List[int]]) -> List[List[int]]:
    columns = list(zip(*y)) if y else []
    return [[sum(p * q for p, q in zip(row, col)) for col in columns] for row in x]


def _invariant_factors(diagonal: Iterable[int]) -> Tuple[int, ...]:
    """Turn a diagonal into the divisibility chain of invariant factors."""
    d = sorted(abs(x) for x in diagonal if x)
    for i in range(len(d)):
        for j in range(i + 1, len(d)):
            g = math.gcd(d[i], d[j])
            d[i], d[j] = g, d[i] * d[j] // g
    return tuple(d)


def sympy_invariant_factors(matrix: IntegerMatrix) -> Tuple[int, ...]:
    """Nonzero invariant factors from sympy's Smith normal form over ``ZZ``."""
    if matrix.rows == 0 or matrix.cols == 0:
        return ()
    factors = invariant_factors(matrix.to_domain_matrix().to_dense())
    return tuple(sorted(abs(int(f)) for f in factors if f))


def smith_normal_form(matrix: IntegerMatrix, certify: bool = False) -> SmithForm:
    """Invariant factors ``d₁ | d₂ | …`` and the rank of an integer matrix.

    Unit pivots are removed first by sparse elimination, preferring short rows
    and sparse columns; the remainder is diagonalized densely by pivoting on
    the entry of least absolute value.

    Args:
        matrix: The matrix to reduce.
        certify: Diagonalize the whole matrix densely with recorded row and
            column transforms, check ``L·A·R = D`` and compare the factors with
            :func:`sympy_invariant_factors` before returning.

    Raises:
        EquichainError: the recorded transforms do not reproduce the diagonal,
            or sympy finds different invariant factors.
    """
    if certify:
        a = matrix.to_rows()
        reduction = _DenseReduction([row[:] for row in a], track=True)
        diagonal = reduction.diagonal()
        product = _matmul_rows(_matmul_rows(reduction.left, a), reduction.right)
        expected = [[0] * matrix.cols for _ in range(matrix.rows)]
        for s, value in enumerate(diagonal):
            expected[s][s] = value
        if product != expected:
            raise EquichainError("Smith normal form certificate does not reproduce the diagonal")
        factors = _invariant_factors(diagonal)
        reference = sympy_invariant_factors(matrix)
        if factors != reference:
            raise EquichainError(
                f"Smith normal form {factors} disagrees with sympy's invariant factors {reference}"
            )
        return SmithForm(factors, len(factors))

    units, remaining = _eliminate_unit_pivots(matrix)
    columns = sorted({j for row in remaining.values() for j in row})
    position = {j: k for k, j in enumerate(columns)}
    dense = []
    for i in sorted(remaining):
        row = [0] * len(columns)
        for j, v in remaining[i].items():
            row[position[j]] = v
        dense.append(row)
    diagonal = _DenseReduction(dense).diagonal() if dense else []
    factors = (1,) * units + _invariant_factors(diagonal)
    logger.debug(
        f"SNF of {matrix.rows}x{matrix.cols}: {units} unit pivots, "
        f"{len(dense)}x{len(columns)} dense remainder"
    )
    return SmithForm(factors, len(factors))


@dataclass(frozen=True)
class AbelianGroupDescriptor:
    """``Z^rank ⊕ Z/d₁ ⊕ Z/d₂ ⊕ …`` with ``d₁ | d₂ | …`` and every ``dᵢ ≥ 2``."""

    rank: int
    torsion: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        if self.rank < 0:
            raise ValueError(f"rank must be non-negative, got: {self.rank}")
        if any(d < 2 for d in self.torsion):
            raise ValueError(f"torsion coefficients must be at least 2: {self.torsion}")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"torsion {self.torsion} is not a divisibility chain")

    @property
    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    def __str__(self) -> str:
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) or "0"

    def to_dict(self) -> Dict[str, object]:
        return {"rank": self.rank, "torsion": list(self.torsion)}

    @classmethod
    def from_dict(cls, data: Mapping[str, object]) -> "AbelianGroupDescriptor":
        return cls(int(data["rank"]), tuple(data.get("torsion", ())))


class QuotientComplex:
    """A finite Z-complex as bases and integer differential matrices.

    ``differential(k)`` is ``∂_k: C_k → C_(k-1)`` with ``rank(k-1)`` rows and
    ``rank(k)`` columns; missing degrees are zero.
    """

    def __init__(
        self,
        name: str,
        bases: Mapping[int, Sequence[object]],
        differentials: Mapping[int, IntegerMatrix],
        certify: bool = False,
    ):
        self.name = name
        self.bases = {k: tuple(v) for k, v in bases.items()}
        self._differentials = dict(differentials)
        self.certify = certify
        self._smith: Dict[Tuple[int, bool], SmithForm] = {}
        self._smith_locks: Dict[Tuple[int, bool], threading.Lock] = {}
        self._lock = threading.Lock()
        for k, matrix in self._differentials.items():
            if matrix.cols != self.rank(k) or matrix.rows != self.rank(k - 1):
                raise InvalidComplexError(
                    f"{name}: differential in degree {k} is {matrix.rows}x{matrix.cols}, "
                    f"expected {self.rank(k - 1)}x{self.rank(k)}"
                )

    @classmethod
    def from_ranks(
        cls, name: str, ranks: Sequence[int], differentials: Mapping[int, IntegerMatrix]
    ) -> "QuotientComplex":
        bases = {k: tuple(range(r)) for k, r in enumerate(ranks)}
        return cls(name, bases, differentials)

    @property
    def max_degree(self) -> int:
        return max(self.bases, default=-1)

    def rank(self, k: int) -> int:
        return len(self.bases.get(k, ()))

    def differential(self, k: int) -> IntegerMatrix:
        if k in self._differentials:
            return self._differentials[k]
        return IntegerMatrix.zeros(self.rank(k - 1), self.rank(k))

    def smith(self, k: int, transposed: bool = False) -> SmithForm:
        """Smith form of ``∂_k`` (or its transpose), computed once per key across threads."""
        key = (k, transposed)
        with self._lock:
            lock = self._smith_locks.setdefault(key, threading.Lock())
        with lock:
            if key not in self._smith:
                matrix = self.differential(k)
                if transposed:
                    matrix = matrix.transpose()
                self._smith[key] = smith_normal_form(matrix, certify=self.certify)
            return self._smith[key]

    def check_square_zero(self, k: int) -> None:
        """Raise unless ``∂_k ∂_(k+1) = 0``."""
        product = self.differential(k) @ self.differential(k + 1)
        if not product.is_zero:
            (i, j), value = next(iter(sorted(product.entries.items())))
            raise InvalidComplexError(
                f"{self.name}: d{k} d{k + 1} is not zero (entry ({i}, {j}) = {value})"
            )

    def to_dict(self) -> Dict[str, object]:
        return {
            "name": self.name,
            "ranks": [self.rank(k) for k in range(self.max_degree + 1)],
            "differentials": {
                str(k): self.differential(k).to_rows() for k in range(1, self.max_degree + 1)
            },
        }


def quotient_by_G(
    complex_: ChainComplex, max_degree: int, certify: bool = False
) -> QuotientComplex:
    """``Z ⊗_{ZG} N`` in degrees ``0..max_degree + 1``.

    For a free complex each R-basis label becomes a Z-basis element and a
    coefficient ``c·g`` contributes ``c·ε(g)``. A complex without a ring is
    returned as it is.

    Raises:
        InvalidComplexError: the complex has no basis enumeration or its dga
            has no augmentation.
    """
    top = max_degree + 1
    if isinstance(complex_, FreeComplex):
        if not complex_.has_labels:
            raise InvalidComplexError(f"{complex_.name} has no basis enumeration")
        ring = complex_.ring
        if not ring.is_augmented:
            raise InvalidComplexError(f"{ring.name} has no augmentation")
        bases = {k: complex_.labels(k) for k in range(top + 1)}

        def boundary(label):
            data: Dict[object, int] = {}
            for (g, target), coef in complex_.label_boundary(label).raw_items():
                weight = ring.augmentation.get(g, 0)
                if weight:
                    data[target] = data.get(target, 0) + coef * weight
            return data

    else:
        if not complex_.has_basis:
            raise InvalidComplexError(f"{complex_.name} has no basis enumeration")
        bases = {k: complex_.cells(k) for k in range(top + 1)}

        def boundary(cell):
            return dict(complex_.boundary_cell(cell).raw_items())

    differentials = {}
    for k in range(1, top + 1):
        index = {b: i for i, b in enumerate(bases[k - 1])}
        entries: Entries = {}
        for j, b in enumerate(bases[k]):
            for target, coef in boundary(b).items():
                key = (index[target], j)
                entries[key] = entries.get(key, 0) + coef
        differentials[k] = IntegerMatrix(len(bases[k - 1]), len(bases[k]), entries)
        logger.debug(
            f"quotient differential of {complex_.name} in degree {k}: "
            f"{len(bases[k - 1])}x{len(bases[k])}",
            extra={"degree": k},
        )
    return QuotientComplex(f"{complex_.name}/G", bases, differentials, certify=certify)


def homology_groups(complex_: QuotientComplex, k: int) -> AbelianGroupDescriptor:
    """``H_k = ker ∂_k / im ∂_(k+1)``.

    Raises:
        InvalidComplexError: ``∂_k ∂_(k+1) ≠ 0``.
    """
    complex_.check_square_zero(k)
    outgoing = complex_.smith(k)
    incoming = complex_.smith(k + 1)
    free = complex_.rank(k) - outgoing.rank - incoming.rank
    return AbelianGroupDescriptor(free, tuple(d for d in incoming.factors if d > 1))


def cohomology_groups(complex_: QuotientComplex, k: int) -> AbelianGroupDescriptor:
    """``H^k`` of ``Hom(C, Z)``, from the transposed differentials."""
    complex_.check_square_zero(k)
    outgoing = complex_.smith(k + 1, transposed=True)
    incoming = complex_.smith(k, transposed=True)
    free = complex_.rank(k) - outgoing.rank - incoming.rank
    return AbelianGroupDescriptor(free, tuple(d for d in incoming.factors if d > 1))


def homology_table(
    complex_: QuotientComplex, degrees: Iterable[int], cohomology: bool = False
) -> List[AbelianGroupDescriptor]:
    compute = cohomology_groups if cohomology else homology_groups
    return [compute(complex_, k) for k in degrees]


def homology_frame(descriptors: Sequence[AbelianGroupDescriptor], start: int = 0) -> pd.DataFrame:
    """One row per degree with ``degree``, ``rank`` and comma-joined ``torsion``."""
    return pd.DataFrame(
        {
            "degree": [start + i for i in range(len(descriptors))],
            "rank": [d.rank for d in descriptors],
            "torsion": [",".join(str(t) for t in d.torsion) for d in descriptors],
        }
    )
