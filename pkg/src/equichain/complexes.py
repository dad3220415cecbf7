"""Locally effective chain complexes and graded maps between them.

Sign conventions follow the Koszul rule throughout:

* ``[∂, f] = ∂f - (-1)^{|f|} f∂``
* ``(f ⊗ g)(x ⊗ y) = (-1)^{|g||x|} f(x) ⊗ g(y)``
* ``∂(sx) = -s(∂x)`` and ``r·sx = (-1)^{|r|} s(rx)``
* an R-linear map of degree k satisfies ``f(r·x) = (-1)^{k|r|} r·f(x)``
"""

import random
from functools import lru_cache
from typing import Callable, Dict, Hashable, Iterable, Optional, Sequence, Tuple, Union

from equichain.algebra import Chain, DgaPresentation, RingElement, add_into
from equichain.errors import DegreeMismatchError, InvalidComplexError, TruncationError

Cell = Hashable

# Bound on the values remembered per map; basis-keyed caches of a complex stay unbounded.
MEMO_SIZE = 1 << 18
Sampler = Callable[[random.Random, int], Chain]


def _sign(exponent: int) -> int:
    return -1 if exponent % 2 else 1


class ChainComplex:
    """A chain complex presented cell by cell.

    Args:
        name: Human-readable name used in logs and errors.
        cell_degree: Degree of a Z-basis cell.
        boundary: Boundary of a single cell as a :class:`Chain` of cells.
        cells: Optional enumeration of the Z-basis in each degree.
        max_degree: Truncation bound for ``cells``; ``None`` means unbounded.
        ring: Optional dga acting on the left.
        action: ``action(g, cell)`` for a ring generator ``g``.
        sampler: Draws a homogeneous chain of a given degree when there is no
            finite basis.
    """

    def __init__(
        self,
        name: str,
        cell_degree: Callable[[Cell], int],
        boundary: Callable[[Cell], Chain],
        cells: Optional[Callable[[int], Sequence[Cell]]] = None,
        max_degree: Optional[int] = None,
        ring: Optional[DgaPresentation] = None,
        action: Optional[Callable[[int, Cell], Chain]] = None,
        sampler: Optional[Sampler] = None,
    ):
        self.name = name
        self.cell_degree = cell_degree
        self.max_degree = max_degree
        self.ring = ring
        self.sampler = sampler
        self.boundary_cell = lru_cache(maxsize=None)(boundary)
        self._cells = lru_cache(maxsize=None)(lambda n: tuple(cells(n))) if cells else None
        self._action = lru_cache(maxsize=None)(action) if action else None

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name!r})"

    @property
    def has_basis(self) -> bool:
        return self._cells is not None

    @property
    def has_action(self) -> bool:
        return self._action is not None

    def check_degree(self, n: int) -> None:
        if self.max_degree is not None and n > self.max_degree:
            raise TruncationError(self.name, n, self.max_degree)

    def cells(self, n: int) -> Tuple[Cell, ...]:
        """Z-basis in degree ``n``."""
        if self._cells is None:
            raise InvalidComplexError(f"{self.name} has no basis enumeration")
        self.check_degree(n)
        if n < 0:
            return ()
        return self._cells(n)

    def rank(self, n: int) -> int:
        return len(self.cells(n))

    def vanishes_in(self, n: int) -> bool:
        """True when the complex is known to be zero in degree ``n``."""
        if n < 0:
            return True
        if self._cells is None:
            return False
        if self.max_degree is not None and n > self.max_degree:
            return False
        return not self._cells(n)

    def boundary(self, chain: Chain) -> Chain:
        data: Dict[Hashable, int] = {}
        for cell, coef in chain.raw_items():
            add_into(data, self.boundary_cell(cell), coef)
        return Chain._wrap(data)

    def degree(self, chain: Chain) -> Optional[int]:
        """Degree of a homogeneous chain, ``None`` for zero."""
        found = {self.cell_degree(cell) for cell, _ in chain.raw_items()}
        if len(found) > 1:
            raise DegreeMismatchError(f"chain in {self.name} is not homogeneous: {chain!r}")
        return found.pop() if found else None

    def act_generator(self, g: int, cell: Cell) -> Chain:
        if self._action is None:
            raise InvalidComplexError(f"{self.name} carries no ring action")
        return self._action(g, cell)

    def act(self, r: Union[int, Chain], chain: Chain) -> Chain:
        """Left action of a ring generator index or ring element on a chain."""
        if self._action is None:
            raise InvalidComplexError(f"{self.name} carries no ring action")
        element = RingElement.basis(r) if isinstance(r, int) else r
        data: Dict[Hashable, int] = {}
        for g, rc in element.raw_items():
            for cell, coef in chain.raw_items():
                add_into(data, self._action(g, cell), rc * coef)
        return Chain._wrap(data)

    def random_chain(
        self, rng: random.Random, n: int, max_terms: int = 3, bound: int = 3
    ) -> Chain:
        """Pseudo-random homogeneous chain of degree ``n`` (possibly zero)."""
        if self._cells is not None:
            cells = self.cells(n)
            if not cells:
                return Chain()
            data: Dict[Hashable, int] = {}
            for _ in range(rng.randint(1, max_terms)):
                cell = cells[rng.randrange(len(cells))]
                coef = rng.choice([c for c in range(-bound, bound + 1) if c])
                add_into(data, {cell: coef})
            return Chain._wrap(data)
        if self.sampler is not None:
            return self.sampler(rng, n)
        raise InvalidComplexError(f"{self.name} can neither enumerate nor sample cells")

    def identity(self) -> "GradedMap":
        return GradedMap.identity(self)

    def differential(self) -> "GradedMap":
        return GradedMap(
            -1, self.boundary_cell, source=self, target=self, name=f"d_{self.name}"
        )


class FreeComplex(ChainComplex):
    """Complex free as a graded module over a dga, presented by an R-basis.

    Z-cells are pairs ``(g, label)`` standing for ``g ⊗ label``. Only the
    boundary of ``1 ⊗ label`` is supplied; the rest follows from
    ``∂(r ⊗ b) = ∂r ⊗ b + (-1)^{|r|} r·∂(1 ⊗ b)``.
    """

    def __init__(
        self,
        name: str,
        ring: DgaPresentation,
        label_degree: Callable[[Hashable], int],
        label_boundary: Callable[[Hashable], Chain],
        labels: Optional[Callable[[int], Sequence[Hashable]]] = None,
        max_degree: Optional[int] = None,
    ):
        self.label_degree = lru_cache(maxsize=None)(label_degree)
        self.label_boundary = lru_cache(maxsize=None)(label_boundary)
        self._labels = lru_cache(maxsize=None)(lambda n: tuple(labels(n))) if labels else None
        super().__init__(
            name,
            cell_degree=self._cell_degree,
            boundary=self._boundary_of_cell,
            cells=self._enumerate_cells if labels else None,
            max_degree=max_degree,
            ring=ring,
            action=self._act_on_cell,
        )

    def _cell_degree(self, cell: Tuple[int, Hashable]) -> int:
        g, label = cell
        return self.ring.degree(g) + self.label_degree(label)

    def _boundary_of_cell(self, cell: Tuple[int, Hashable]) -> Chain:
        g, label = cell
        data: Dict[Hashable, int] = {}
        for h, coef in self.ring.d(g).raw_items():
            add_into(data, {(h, label): coef})
        inner = self.label_boundary(label)
        if g == self.ring.unit:
            add_into(data, inner)
        else:
            add_into(data, self._act_chain(g, inner), _sign(self.ring.degree(g)))
        return Chain._wrap(data)

    def _act_on_cell(self, s: int, cell: Tuple[int, Hashable]) -> Chain:
        g, label = cell
        return Chain._wrap(
            {(t, label): coef for t, coef in self.ring.mul(s, g).raw_items()}
        )

    def _act_chain(self, s: int, chain: Chain) -> Chain:
        data: Dict[Hashable, int] = {}
        for (g, label), coef in chain.raw_items():
            for t, c in self.ring.mul(s, g).raw_items():
                add_into(data, {(t, label): c * coef})
        return Chain._wrap(data)

    def _enumerate_cells(self, n: int) -> Tuple[Tuple[int, Hashable], ...]:
        out = []
        for k in range(0, n + 1):
            gens = self.ring.generators_in_degree(k)
            if not gens:
                continue
            for label in self.labels(n - k):
                out.extend((g, label) for g in gens)
        return tuple(sorted(out))

    @property
    def has_labels(self) -> bool:
        return self._labels is not None

    def labels(self, n: int) -> Tuple[Hashable, ...]:
        """R-basis in degree ``n``."""
        if self._labels is None:
            raise InvalidComplexError(f"{self.name} has no basis enumeration")
        self.check_degree(n)
        if n < 0:
            return ()
        return self._labels(n)

    def label_rank(self, n: int) -> int:
        return len(self.labels(n))

    def embed(self, label: Hashable, coef: int = 1) -> Chain:
        """``1 ⊗ label`` as a chain."""
        return Chain.basis((self.ring.unit, label), coef)

    def expand(self, chain: Chain) -> Dict[Hashable, RingElement]:
        """Coordinates of ``chain`` in the R-basis, as ring elements per label."""
        parts: Dict[Hashable, Dict[Hashable, int]] = {}
        for (g, label), coef in chain.raw_items():
            parts.setdefault(label, {})[g] = coef
        return {label: RingElement._wrap(data) for label, data in parts.items()}


Map = Callable[[Cell], Chain]


class GradedMap:
    """Additive map of a fixed degree, given by its values on cells."""

    def __init__(
        self,
        degree: int,
        on_cell: Map,
        source: Optional[ChainComplex] = None,
        target: Optional[ChainComplex] = None,
        name: str = "",
        rlinear: bool = False,
        memoize: bool = True,
    ):
        self.degree = degree
        self.source = source
        self.target = target
        self.name = name or "f"
        self.rlinear = rlinear
        self.on_cell = lru_cache(maxsize=MEMO_SIZE)(on_cell) if memoize else on_cell

    def __repr__(self) -> str:
        return f"GradedMap({self.name!r}, degree={self.degree})"

    def __call__(self, chain: Chain) -> Chain:
        data: Dict[Hashable, int] = {}
        for cell, coef in chain.raw_items():
            add_into(data, self.on_cell(cell), coef)
        return Chain._wrap(data)

    def compose(self, other: "GradedMap") -> "GradedMap":
        """``self ∘ other``."""
        return GradedMap(
            self.degree + other.degree,
            lambda cell: self(other.on_cell(cell)),
            source=other.source,
            target=self.target,
            name=f"{self.name}∘{other.name}",
            rlinear=self.rlinear and other.rlinear,
        )

    __matmul__ = compose

    def _check_same_degree(self, other: "GradedMap") -> None:
        if self.degree != other.degree:
            raise DegreeMismatchError(
                f"cannot add {self.name} (degree {self.degree}) and "
                f"{other.name} (degree {other.degree})"
            )

    def __add__(self, other: "GradedMap") -> "GradedMap":
        self._check_same_degree(other)
        return GradedMap(
            self.degree,
            lambda cell: self.on_cell(cell) + other.on_cell(cell),
            source=self.source or other.source,
            target=self.target or other.target,
            name=f"({self.name}+{other.name})",
            rlinear=self.rlinear and other.rlinear,
        )

    def __sub__(self, other: "GradedMap") -> "GradedMap":
        self._check_same_degree(other)
        return GradedMap(
            self.degree,
            lambda cell: self.on_cell(cell) - other.on_cell(cell),
            source=self.source or other.source,
            target=self.target or other.target,
            name=f"({self.name}-{other.name})",
            rlinear=self.rlinear and other.rlinear,
        )

    def __neg__(self) -> "GradedMap":
        return self.scaled(-1)

    def scaled(self, k: int) -> "GradedMap":
        return GradedMap(
            self.degree,
            lambda cell: self.on_cell(cell) * k,
            source=self.source,
            target=self.target,
            name=f"{k}{self.name}",
            rlinear=self.rlinear,
        )

    def renamed(self, name: str) -> "GradedMap":
        return GradedMap(
            self.degree,
            self.on_cell,
            source=self.source,
            target=self.target,
            name=name,
            rlinear=self.rlinear,
            memoize=False,
        )

    @classmethod
    def identity(cls, complex_: ChainComplex) -> "GradedMap":
        return cls(
            0,
            Chain.basis,
            source=complex_,
            target=complex_,
            name="id",
            rlinear=complex_.has_action,
            memoize=False,
        )

    @classmethod
    def zero(
        cls,
        degree: int,
        source: Optional[ChainComplex] = None,
        target: Optional[ChainComplex] = None,
    ) -> "GradedMap":
        return cls(
            degree,
            lambda cell: Chain(),
            source=source,
            target=target,
            name="0",
            rlinear=True,
            memoize=False,
        )

    @classmethod
    def rlinear_on_labels(
        cls,
        source: FreeComplex,
        target: ChainComplex,
        degree: int,
        on_label: Callable[[Hashable], Chain],
        name: str = "",
    ) -> "GradedMap":
        """Extend values on ``1 ⊗ label`` to an R-linear map of the given degree."""
        ring = source.ring
        label_values = lru_cache(maxsize=MEMO_SIZE)(on_label)

        def on_cell(cell):
            g, label = cell
            value = label_values(label)
            if g == ring.unit:
                return value
            return target.act(g, value) * _sign(degree * ring.degree(g))

        return cls(degree, on_cell, source=source, target=target, name=name, rlinear=True)

    def is_rlinear_on(self, chain: Chain, g: int) -> bool:
        """Check ``f(g·x) = (-1)^{|f||g|} g·f(x)`` for one generator and chain."""
        ring = self.source.ring
        lhs = self(self.source.act(g, chain))
        rhs = self.target.act(g, self(chain)) * _sign(self.degree * ring.degree(g))
        return lhs == rhs


def graded_commutator(
    f: GradedMap,
    source_diff: Optional[GradedMap] = None,
    target_diff: Optional[GradedMap] = None,
) -> GradedMap:
    """``[∂, f] = ∂f - (-1)^{|f|} f∂``, of degree ``|f| - 1``."""
    if source_diff is None:
        if f.source is None:
            raise DegreeMismatchError(f"{f.name} has no source complex")
        source_diff = f.source.differential()
    if target_diff is None:
        if f.target is None:
            raise DegreeMismatchError(f"{f.name} has no target complex")
        target_diff = f.target.differential()
    for diff in (source_diff, target_diff):
        if diff.degree != -1:
            raise DegreeMismatchError(f"{diff.name} has degree {diff.degree}, expected -1")
    sign = _sign(f.degree)

    def on_cell(cell):
        return target_diff(f.on_cell(cell)) - f(source_diff.on_cell(cell)) * sign

    return GradedMap(
        f.degree - 1,
        on_cell,
        source=f.source,
        target=f.target,
        name=f"[d,{f.name}]",
        rlinear=f.rlinear,
    )


def tensor_chain(x: Chain, y: Chain) -> Chain:
    data: Dict[Hashable, int] = {}
    for a, ca in x.raw_items():
        for b, cb in y.raw_items():
            add_into(data, {(a, b): ca * cb})
    return Chain._wrap(data)


def tensor_complex(left: ChainComplex, right: ChainComplex) -> ChainComplex:
    """``left ⊗ right`` over Z with ``∂(a⊗b) = ∂a⊗b + (-1)^{|a|} a⊗∂b``."""

    def cell_degree(cell):
        a, b = cell
        return left.cell_degree(a) + right.cell_degree(b)

    def boundary(cell):
        a, b = cell
        first = tensor_chain(left.boundary_cell(a), Chain.basis(b))
        second = tensor_chain(Chain.basis(a), right.boundary_cell(b))
        return first + second * _sign(left.cell_degree(a))

    cells = None
    if left.has_basis and right.has_basis:

        def cells(n):
            return sorted(
                (a, b)
                for k in range(0, n + 1)
                for a in left.cells(k)
                for b in right.cells(n - k)
            )

    def sampler(rng, n):
        k = rng.randint(0, n)
        return tensor_chain(left.random_chain(rng, k), right.random_chain(rng, n - k))

    bound = None
    if left.max_degree is not None and right.max_degree is not None:
        bound = min(left.max_degree, right.max_degree)
    return ChainComplex(
        f"{left.name}⊗{right.name}",
        cell_degree,
        boundary,
        cells=cells,
        max_degree=bound,
        sampler=sampler,
    )


def tensor_map(
    f: GradedMap,
    g: GradedMap,
    source: Optional[ChainComplex] = None,
    target: Optional[ChainComplex] = None,
) -> GradedMap:
    """``(f ⊗ g)(x ⊗ y) = (-1)^{|g||x|} f(x) ⊗ g(y)``."""
    if source is None and f.source is not None and g.source is not None:
        source = tensor_complex(f.source, g.source)
    if target is None and f.target is not None and g.target is not None:
        target = tensor_complex(f.target, g.target)

    def on_cell(cell):
        a, b = cell
        sign = _sign(g.degree * f.source.cell_degree(a))
        return tensor_chain(f.on_cell(a), g.on_cell(b)) * sign

    return GradedMap(
        f.degree + g.degree,
        on_cell,
        source=source,
        target=target,
        name=f"{f.name}⊗{g.name}",
    )


def suspend(complex_: ChainComplex) -> ChainComplex:
    """The suspension ``sC`` with ``(sC)_n = C_{n-1}``; cells are ``("s", c)``."""

    def cell_degree(cell):
        return complex_.cell_degree(cell[1]) + 1

    def wrap(chain: Chain) -> Chain:
        return chain.map_keys(lambda c: ("s", c))

    def boundary(cell):
        return -wrap(complex_.boundary_cell(cell[1]))

    cells = None
    if complex_.has_basis:

        def cells(n):
            return [("s", c) for c in complex_.cells(n - 1)]

    action = None
    if complex_.has_action:

        def action(g, cell):
            value = wrap(complex_.act_generator(g, cell[1]))
            return value * _sign(complex_.ring.degree(g))

    sampler = None
    if complex_.sampler is not None or complex_.has_basis:

        def sampler(rng, n):
            return wrap(complex_.random_chain(rng, n - 1))

    return ChainComplex(
        f"s{complex_.name}",
        cell_degree,
        boundary,
        cells=cells,
        max_degree=None if complex_.max_degree is None else complex_.max_degree + 1,
        ring=complex_.ring,
        action=action,
        sampler=sampler,
    )


def suspension_map(complex_: ChainComplex, suspended: ChainComplex) -> GradedMap:
    """The degree-one map ``x ↦ sx``."""
    return GradedMap(
        1,
        lambda cell: Chain.basis(("s", cell)),
        source=complex_,
        target=suspended,
        name="s",
        memoize=False,
    )


def ring_complex(ring: DgaPresentation) -> ChainComplex:
    """The dga itself as a complex, acting on itself from the left."""

    def action(g, h):
        return ring.mul(g, h)

    return ChainComplex(
        ring.name,
        ring.degree,
        ring.d,
        cells=ring.generators_in_degree,
        ring=ring,
        action=action,
    )


def point_complex() -> ChainComplex:
    """Z concentrated in degree 0, on the single cell ``0``."""
    return ChainComplex(
        "point",
        lambda cell: 0,
        lambda cell: Chain(),
        cells=lambda n: (0,) if n == 0 else (),
    )


def chains_of(cells: Iterable[Cell]) -> Tuple[Chain, ...]:
    return tuple(Chain.basis(c) for c in cells)
