"""Exact graded algebra over the integers.

This module holds the value types everything else is built from: canonical
integer combinations (``Chain``), finite groups given by multiplication tables,
and presentations of differential graded algebras that are free as graded
abelian groups with the unit as one of the generators.
"""

import itertools
from functools import lru_cache
from typing import (
    Callable,
    Dict,
    Hashable,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

from equichain.errors import DegreeMismatchError, InvalidComplexError


def _freeze(obj):
    """Turn nested lists (as produced by JSON) back into nested tuples."""
    if isinstance(obj, list):
        return tuple(_freeze(item) for item in obj)
    return obj


def _thaw(obj):
    if isinstance(obj, tuple):
        return [_thaw(item) for item in obj]
    return obj


class Chain(Mapping):
    """Finite integer combination of hashable, mutually comparable keys.

    Zero coefficients are never stored and iteration is in sorted key order, so
    two chains are equal exactly when their normal forms agree.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Union[Mapping, Iterable[Tuple[Hashable, int]], None] = None):
        data: Dict[Hashable, int] = {}
        if terms is not None:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for key, coef in items:
                if not coef:
                    continue
                value = data.get(key, 0) + coef
                if value:
                    data[key] = value
                else:
                    del data[key]
        self._terms = data
        self._hash = None

    @classmethod
    def _wrap(cls, data: Dict[Hashable, int]) -> "Chain":
        obj = cls.__new__(cls)
        obj._terms = data
        obj._hash = None
        return obj

    @classmethod
    def basis(cls, key: Hashable, coef: int = 1) -> "Chain":
        return cls._wrap({key: coef} if coef else {})

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence]) -> "Chain":
        """Parse ``[[coef, key], ...]`` as written by :meth:`to_pairs`."""
        return cls((_freeze(key), int(coef)) for coef, key in pairs)

    def to_pairs(self) -> List[list]:
        return [[coef, _thaw(key)] for key, coef in self.terms()]

    def __getitem__(self, key: Hashable) -> int:
        return self._terms[key]

    def coefficient(self, key: Hashable) -> int:
        return self._terms.get(key, 0)

    def __iter__(self) -> Iterator[Hashable]:
        return iter(sorted(self._terms))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __contains__(self, key) -> bool:
        return key in self._terms

    def terms(self) -> List[Tuple[Hashable, int]]:
        return [(key, self._terms[key]) for key in sorted(self._terms)]

    def raw_items(self):
        """Unsorted (key, coefficient) view for hot loops."""
        return self._terms.items()

    def __eq__(self, other) -> bool:
        if isinstance(other, Chain):
            return self._terms == other._terms
        if isinstance(other, int) and other == 0:
            return not self._terms
        return NotImplemented

    def __ne__(self, other) -> bool:
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __add__(self, other) -> "Chain":
        if isinstance(other, int) and other == 0:
            return self
        if not isinstance(other, Chain):
            return NotImplemented
        data = dict(self._terms)
        add_into(data, other)
        return self._wrap_like(data)

    __radd__ = __add__

    def __sub__(self, other) -> "Chain":
        if isinstance(other, int) and other == 0:
            return self
        if not isinstance(other, Chain):
            return NotImplemented
        data = dict(self._terms)
        add_into(data, other, -1)
        return self._wrap_like(data)

    def __neg__(self) -> "Chain":
        return self._wrap_like({key: -coef for key, coef in self._terms.items()})

    def __mul__(self, scalar) -> "Chain":
        if not isinstance(scalar, int):
            return NotImplemented
        if scalar == 0:
            return self._wrap_like({})
        if scalar == 1:
            return self
        return self._wrap_like({key: scalar * coef for key, coef in self._terms.items()})

    __rmul__ = __mul__

    def _wrap_like(self, data: Dict[Hashable, int]) -> "Chain":
        return type(self)._wrap(data)

    def apply(self, fn: Callable[[Hashable], "Chain"]) -> "Chain":
        """Extend ``fn`` (key -> chain) linearly over this combination."""
        data: Dict[Hashable, int] = {}
        for key, coef in self._terms.items():
            add_into(data, fn(key), coef)
        return Chain._wrap(data)

    def restrict(self, predicate: Callable[[Hashable], bool]) -> "Chain":
        return self._wrap_like(
            {key: coef for key, coef in self._terms.items() if predicate(key)}
        )

    def map_keys(self, fn: Callable[[Hashable], Hashable]) -> "Chain":
        data: Dict[Hashable, int] = {}
        for key, coef in self._terms.items():
            target = fn(key)
            value = data.get(target, 0) + coef
            if value:
                data[target] = value
            else:
                data.pop(target, None)
        return Chain._wrap(data)

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(f"{coef}*{key!r}" for key, coef in self.terms())


def add_into(data: Dict[Hashable, int], chain: Mapping, scale: int = 1) -> None:
    """Accumulate ``scale * chain`` into a plain dict of coefficients."""
    if not scale:
        return
    items = chain.raw_items() if isinstance(chain, Chain) else chain.items()
    for key, coef in items:
        value = data.get(key, 0) + scale * coef
        if value:
            data[key] = value
        else:
            data.pop(key, None)


class RingElement(Chain):
    """Integer combination of generator indices of a :class:`DgaPresentation`."""

    __slots__ = ()


def degree_sum(
    elements: Sequence, i: int, j: int, ring: Optional["DgaPresentation"] = None
) -> int:
    """Sum of the degrees of ``elements[i..j]`` (inclusive); an empty range is 0.

    Entries are degrees unless ``ring`` is given, in which case they are
    generator indices or homogeneous ring elements of that ring.
    """
    total = 0
    for k in range(i, j + 1):
        item = elements[k]
        if ring is None:
            total += int(item)
        elif isinstance(item, Chain):
            total += ring.degree_of(item) or 0
        else:
            total += ring.degree(item)
    return total


class FiniteGroup:
    """Finite group given by a multiplication table on ``0..order-1``.

    The table is checked for shape on construction; the group axioms are
    reported by :meth:`violations` so that documents can be validated without
    raising.
    """

    def __init__(self, mul: Sequence[Sequence[int]], identity: int = 0, name: str = ""):
        table = tuple(tuple(int(x) for x in row) for row in mul)
        order = len(table)
        if order == 0:
            raise InvalidComplexError("group table is empty")
        for index, row in enumerate(table):
            if len(row) != order:
                raise InvalidComplexError(
                    f"row {index} of the multiplication table has length {len(row)}, "
                    f"expected {order}"
                )
            for entry in row:
                if not 0 <= entry < order:
                    raise InvalidComplexError(
                        f"table entry {entry} in row {index} is not an element index"
                    )
        if not 0 <= identity < order:
            raise InvalidComplexError(f"identity {identity} is not an element index")
        self.mul = table
        self.identity = int(identity)
        self.name = name or f"group of order {order}"
        inv = []
        for a in range(order):
            found = [b for b in range(order) if table[a][b] == identity]
            inv.append(found[0] if found else -1)
        self.inv = tuple(inv)

    @property
    def order(self) -> int:
        return len(self.mul)

    def elements(self) -> range:
        return range(self.order)

    def multiply(self, a: int, b: int) -> int:
        return self.mul[a][b]

    def inverse(self, a: int) -> int:
        return self.inv[a]

    def violations(self) -> List[str]:
        """List violated group axioms; each message names the first witness."""
        problems = []
        e = self.identity
        for a in self.elements():
            if self.mul[e][a] != a or self.mul[a][e] != a:
                problems.append(f"identity {e} is not two-sided at element {a}")
                break
        for a, b, c in itertools.product(self.elements(), repeat=3):
            if self.mul[self.mul[a][b]][c] != self.mul[a][self.mul[b][c]]:
                problems.append(f"associativity fails for triple ({a}, {b}, {c})")
                break
        for a in self.elements():
            b = self.inv[a]
            if b < 0 or self.mul[b][a] != e:
                problems.append(f"element {a} has no two-sided inverse")
                break
        return problems

    def check(self) -> "FiniteGroup":
        problems = self.violations()
        if problems:
            raise InvalidComplexError(problems[0])
        return self

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name!r})"


def cyclic_group(n: int) -> FiniteGroup:
    """Z/n with elements 0..n-1 under addition; ``1`` is the generator."""
    if n < 1:
        raise InvalidComplexError(f"cyclic group order must be positive, got {n}")
    table = [[(a + b) % n for b in range(n)] for a in range(n)]
    return FiniteGroup(table, 0, name=f"Z/{n}")


def symmetric_group(n: int) -> FiniteGroup:
    """Permutations of ``0..n-1`` in lexicographic order, composed as p∘q."""
    perms = list(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    table = [
        [index[tuple(p[q[k]] for k in range(n))] for q in perms] for p in perms
    ]
    return FiniteGroup(table, index[tuple(range(n))], name=f"S{n}")


ProductRule = Callable[[int, int], RingElement]


class DgaPresentation:
    """A dga that is free as a graded abelian group on a finite generator set.

    Generators are indexed ``0..n-1``; ``unit`` is the distinguished generator
    representing 1. Products and differentials of generators are integer
    combinations of generators.
    """

    def __init__(
        self,
        degrees: Sequence[int],
        unit: int,
        product: ProductRule,
        differentials: Optional[Mapping[int, RingElement]] = None,
        augmentation: Optional[Mapping[int, int]] = None,
        names: Optional[Sequence[str]] = None,
        name: str = "",
    ):
        self.degrees = tuple(int(d) for d in degrees)
        if any(d < 0 for d in self.degrees):
            raise InvalidComplexError("generator degrees must be non-negative")
        if not 0 <= unit < len(self.degrees):
            raise InvalidComplexError(f"unit {unit} is not a generator")
        if self.degrees[unit] != 0:
            raise InvalidComplexError("the unit generator must have degree 0")
        self.unit = unit
        self._differentials = {
            g: RingElement(d) for g, d in (differentials or {}).items() if d
        }
        self.augmentation = dict(augmentation) if augmentation is not None else None
        self.names = tuple(names) if names else tuple(f"x{i}" for i in self.generators)
        self.name = name or "dga"
        self.group: Optional[FiniteGroup] = None
        self._product = product
        self.mul = lru_cache(maxsize=None)(self._mul)

    @property
    def generators(self) -> range:
        return range(len(self.degrees))

    @property
    def is_augmented(self) -> bool:
        return self.augmentation is not None

    @property
    def has_zero_differential(self) -> bool:
        return not self._differentials

    def degree(self, g: int) -> int:
        return self.degrees[g]

    def generators_in_degree(self, n: int) -> Tuple[int, ...]:
        return tuple(g for g in self.generators if self.degrees[g] == n)

    def element(self, g: int, coef: int = 1) -> RingElement:
        return RingElement.basis(g, coef)

    def one(self) -> RingElement:
        return RingElement.basis(self.unit)

    def d(self, g: int) -> RingElement:
        return self._differentials.get(g, RingElement())

    def _mul(self, g: int, h: int) -> RingElement:
        if g == self.unit:
            return RingElement.basis(h)
        if h == self.unit:
            return RingElement.basis(g)
        return RingElement(self._product(g, h))

    def multiply(self, a: Chain, b: Chain) -> RingElement:
        data: Dict[Hashable, int] = {}
        for g, ca in a.raw_items():
            for h, cb in b.raw_items():
                add_into(data, self.mul(g, h), ca * cb)
        return RingElement._wrap(data)

    def differential(self, a: Chain) -> RingElement:
        data: Dict[Hashable, int] = {}
        for g, coef in a.raw_items():
            add_into(data, self.d(g), coef)
        return RingElement._wrap(data)

    def augment(self, a: Chain) -> int:
        if self.augmentation is None:
            raise InvalidComplexError(f"{self.name} has no augmentation")
        return sum(coef * self.augmentation.get(g, 0) for g, coef in a.raw_items())

    def homogeneous_parts(self, a: Chain) -> Dict[int, RingElement]:
        parts: Dict[int, Dict[Hashable, int]] = {}
        for g, coef in a.raw_items():
            parts.setdefault(self.degrees[g], {})[g] = coef
        return {deg: RingElement._wrap(data) for deg, data in sorted(parts.items())}

    def degree_of(self, a: Chain) -> Optional[int]:
        """Degree of a homogeneous element, ``None`` for zero."""
        found = {self.degrees[g] for g in a}
        if len(found) > 1:
            raise DegreeMismatchError(f"element {a!r} is not homogeneous")
        return found.pop() if found else None

    def violations(self) -> List[str]:
        """Check the dga axioms on all generators, pairs and triples."""
        problems = []
        if self.d(self.unit):
            problems.append("the differential of the unit is not zero")
        for g in self.generators:
            for h in self.d(g):
                if self.degrees[h] != self.degrees[g] - 1:
                    problems.append(f"differential of generator {g} is not of degree -1")
                    break
            if self.differential(self.d(g)):
                problems.append(f"d^2 is not zero on generator {g}")
        for g, h in itertools.product(self.generators, repeat=2):
            prod = self.mul(g, h)
            for t in prod:
                if self.degrees[t] != self.degrees[g] + self.degrees[h]:
                    problems.append(f"product of {g} and {h} is not degree-additive")
                    break
            lhs = self.differential(prod)
            sign = -1 if self.degrees[g] % 2 else 1
            rhs = self.multiply(self.d(g), self.element(h)) + sign * self.multiply(
                self.element(g), self.d(h)
            )
            if lhs != rhs:
                problems.append(f"Leibniz rule fails on the pair ({g}, {h})")
        for g, h, k in itertools.product(self.generators, repeat=3):
            left = self.multiply(self.mul(g, h), self.element(k))
            right = self.multiply(self.element(g), self.mul(h, k))
            if left != right:
                problems.append(f"associativity fails for triple ({g}, {h}, {k})")
                break
        if self.augmentation is not None:
            if self.augmentation.get(self.unit, 0) != 1:
                problems.append("augmentation does not send the unit to 1")
            for g, h in itertools.product(self.generators_in_degree(0), repeat=2):
                if self.augment(self.mul(g, h)) != self.augment(
                    self.element(g)
                ) * self.augment(self.element(h)):
                    problems.append(f"augmentation is not multiplicative on ({g}, {h})")
                    break
        return problems

    def check(self) -> "DgaPresentation":
        problems = self.violations()
        if problems:
            raise InvalidComplexError(problems[0])
        return self

    @classmethod
    def integers(cls) -> "DgaPresentation":
        """Z, with the unit as its only generator."""
        return cls(
            degrees=(0,),
            unit=0,
            product=lambda g, h: RingElement.basis(0),
            augmentation={0: 1},
            names=("1",),
            name="Z",
        )

    def __repr__(self) -> str:
        return f"DgaPresentation({self.name!r}, generators={len(self.degrees)})"


def group_ring(group: FiniteGroup) -> DgaPresentation:
    """ZG: group elements as degree-0 generators, zero differential."""
    ring = DgaPresentation(
        degrees=(0,) * group.order,
        unit=group.identity,
        product=lambda g, h: RingElement.basis(group.mul[g][h]),
        augmentation={g: 1 for g in group.elements()},
        names=tuple(f"g{g}" for g in group.elements()),
        name=f"Z[{group.name}]",
    )
    ring.group = group
    return ring


def cone_algebra() -> DgaPresentation:
    """Z<1, x, y> with |x| = 0, |y| = 1, dy = x and all other products zero."""
    return DgaPresentation(
        degrees=(0, 0, 1),
        unit=0,
        product=lambda g, h: RingElement(),
        differentials={2: RingElement.basis(1)},
        augmentation={0: 1, 1: 0},
        names=("1", "x", "y"),
        name="cone",
    )
