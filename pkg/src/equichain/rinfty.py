"""The cofibrant replacement R∞ of a dga R and its reductions to R.

An additive basis element of R∞ is a product of generator tuples, stored as a
tuple of tuples of generator indices: ``((g,), (h, k))`` is ``(g)·(h,k)``.
The empty product ``()`` is the unit. Unit relations are applied on
construction: the factor ``(1,)`` disappears and any longer factor containing
the unit generator is zero.
"""

import itertools
import random
from functools import lru_cache
from typing import Dict, Hashable, Iterable, Optional, Tuple

from equichain.algebra import Chain, DgaPresentation, RingElement, add_into
from equichain.complexes import ChainComplex, GradedMap, graded_commutator, ring_complex
from equichain.errors import ReductionError
from equichain.logging_config import get_logger
from equichain.reduction import Reduction, compose_reductions, normalize_homotopy

logger = get_logger(__name__)

Factor = Tuple[int, ...]
Product = Tuple[Factor, ...]


def _sign(exponent: int) -> int:
    return -1 if exponent % 2 else 1


class RInfty:
    """R∞ for a presented dga, with its length filtration.

    Args:
        ring: The dga R.
    """

    def __init__(self, ring: DgaPresentation):
        self.ring = ring
        self.unit = ring.unit
        self._nonunit = tuple(g for g in ring.generators if g != ring.unit)
        self.diff_key = lru_cache(maxsize=None)(self._diff_key)
        self._levels: Dict[int, ChainComplex] = {}
        self._steps: Dict[int, Reduction] = {}
        self._reductions: Dict[int, Reduction] = {}
        self._ring_complex = ring_complex(ring)

    def __repr__(self) -> str:
        return f"RInfty({self.ring.name!r})"

    # -- elements -------------------------------------------------------

    def normalize_key(self, key: Iterable[Iterable[int]]) -> Optional[Product]:
        """Apply the unit relations; ``None`` means the product is zero."""
        out = []
        for factor in key:
            factor = tuple(factor)
            if factor == (self.unit,):
                continue
            if self.unit in factor:
                return None
            out.append(factor)
        return tuple(out)

    def element(self, terms: Iterable[Tuple[Iterable[Iterable[int]], int]]) -> Chain:
        data: Dict[Hashable, int] = {}
        for key, coef in terms:
            normal = self.normalize_key(key)
            if normal is not None:
                add_into(data, {normal: coef})
        return Chain._wrap(data)

    def tuple_element(self, *generators: int) -> Chain:
        """The generator ``(r₀, …, r_m)``."""
        return self.element([((tuple(generators),), 1)])

    def one(self) -> Chain:
        return Chain.basis(())

    def degree_of_key(self, key: Product) -> int:
        return sum(len(f) - 1 + sum(self.ring.degree(g) for g in f) for f in key)

    @staticmethod
    def length_of_key(key: Product) -> int:
        return sum(len(f) for f in key)

    def length(self, e: Chain) -> int:
        """Largest length of a product in ``e``; 0 for zero and the unit."""
        return max((self.length_of_key(key) for key in e), default=0)

    def degree_of(self, e: Chain) -> Optional[int]:
        found = {self.degree_of_key(key) for key in e}
        if len(found) > 1:
            raise ValueError(f"R∞ element {e!r} is not homogeneous")
        return found.pop() if found else None

    # -- structure ------------------------------------------------------

    def _diff_factor(self, factor: Factor) -> Dict[Product, int]:
        """∂⊗ + ∂⁺ + ∂⁻ on one tuple, as products."""
        ring = self.ring
        m = len(factor) - 1
        prefix = [0]
        for g in factor:
            prefix.append(prefix[-1] + ring.degree(g))
        data: Dict[Hashable, int] = {}

        def put(key, coef):
            normal = self.normalize_key(key)
            if normal is not None:
                add_into(data, {normal: coef})

        for k, g in enumerate(factor):
            sign = _sign(k + prefix[k])
            for h, c in ring.d(g).raw_items():
                put((factor[:k] + (h,) + factor[k + 1 :],), sign * c)
        for k in range(1, m + 1):
            sign = _sign(k - 1 + prefix[k])
            for h, c in ring.mul(factor[k - 1], factor[k]).raw_items():
                put((factor[: k - 1] + (h,) + factor[k + 1 :],), sign * c)
            put((factor[:k], factor[k:]), _sign(k + prefix[k]))
        return data

    def _diff_key(self, key: Product) -> Chain:
        data: Dict[Hashable, int] = {}
        before = 0
        for i, factor in enumerate(key):
            sign = _sign(before)
            head, tail = key[:i], key[i + 1 :]
            for middle, coef in self._diff_factor(factor).items():
                add_into(data, {head + middle + tail: sign * coef})
            before += len(factor) - 1 + sum(self.ring.degree(g) for g in factor)
        return Chain._wrap(data)

    def diff(self, e: Chain) -> Chain:
        return e.apply(self.diff_key)

    def mul(self, a: Chain, b: Chain) -> Chain:
        data: Dict[Hashable, int] = {}
        for p, ca in a.raw_items():
            for q, cb in b.raw_items():
                add_into(data, {p + q: ca * cb})
        return Chain._wrap(data)

    def to_r(self, e: Chain) -> RingElement:
        """The dga map R∞ → R: ``(r) ↦ r``, longer tuples ↦ 0."""
        data: Dict[Hashable, int] = {}
        for key, coef in e.raw_items():
            if any(len(f) != 1 for f in key):
                continue
            product = RingElement.basis(self.unit)
            for f in key:
                product = self.ring.multiply(product, RingElement.basis(f[0]))
            add_into(data, product, coef)
        return RingElement._wrap(data)

    def section(self, r: Chain) -> Chain:
        """``r ↦ (r)``; a chain map that is not multiplicative."""
        return self.element(((((g,),), coef) for g, coef in r.raw_items()))

    # -- filtration -----------------------------------------------------

    def _factors(self, length: int, max_degree: int) -> Tuple[Factor, ...]:
        if length - 1 > max_degree:
            return ()
        out = []
        for entries in itertools.product(self._nonunit, repeat=length):
            if length - 1 + sum(self.ring.degree(g) for g in entries) <= max_degree:
                out.append(entries)
        return tuple(out)

    @lru_cache(maxsize=None)
    def cells(self, n: int, max_length: int) -> Tuple[Product, ...]:
        """Normalized products of degree ``n`` and length at most ``max_length``."""
        if n < 0:
            return ()
        out = [()] if n == 0 else []
        for length in range(1, max_length + 1):
            for factor in self._factors(length, n):
                rest = n - self.degree_of_key((factor,))
                for tail in self.cells(rest, max_length - length):
                    out.append((factor,) + tail)
        return tuple(sorted(out))

    def filtration_complex(self, d: int) -> ChainComplex:
        """R^d: the subcomplex spanned by products of length at most ``d``."""
        if d not in self._levels:
            self._levels[d] = ChainComplex(
                f"R^{d}",
                self.degree_of_key,
                self.diff_key,
                cells=lambda n: self.cells(n, d),
            )
        return self._levels[d]

    def complex(self, sample_length: int = 2) -> ChainComplex:
        """All of R∞; sampled by products of length up to degree + ``sample_length``."""

        def sampler(rng: random.Random, n: int) -> Chain:
            cells = self.cells(n, n + sample_length)
            if not cells:
                return Chain()
            return Chain(
                (cells[rng.randrange(len(cells))], rng.choice((-2, -1, 1, 2)))
                for _ in range(rng.randint(1, 3))
            )

        return ChainComplex(
            f"{self.ring.name}∞", self.degree_of_key, self.diff_key, sampler=sampler
        )

    def eta_level(self, d: int) -> GradedMap:
        """The homotopy on R^d: ``(r)·(r₀,…,r_m)·ρ ↦ (-1)^{|r|+1} (r,r₀,…,r_m)·ρ``.

        Zero on products of length below ``d``, on single tuples, and on
        products whose first factor is longer than one.
        """
        level = self.filtration_complex(d)

        def on_cell(key: Product) -> Chain:
            if self.length_of_key(key) != d or len(key) < 2 or len(key[0]) != 1:
                return Chain()
            r = key[0][0]
            merged = ((r,) + key[1],) + key[2:]
            return Chain.basis(merged, _sign(self.ring.degree(r) + 1))

        return GradedMap(1, on_cell, source=level, target=level, name=f"eta_{d}")

    def filtration_step(self, d: int) -> Reduction:
        """The reduction R^d ⇒ R^{d-1} with projection ``p_d = id - [∂, η_d]``."""
        if d < 2:
            raise ReductionError(f"filtration steps start at level 2, got {d}")
        if d not in self._steps:
            source = self.filtration_complex(d)
            target = self.filtration_complex(d - 1)
            eta = self.eta_level(d)
            p = GradedMap.identity(source) - graded_commutator(eta)
            alpha = GradedMap(0, p.on_cell, source=source, target=target, name=f"p_{d}")
            beta = GradedMap(0, Chain.basis, source=target, target=source, name="incl")
            self._steps[d] = Reduction(
                source, target, alpha, beta, eta, name=f"R^{d}=>R^{d - 1}"
            )
        return self._steps[d]

    def base_isomorphism(self) -> Reduction:
        """R¹ ≅ R, sending ``()`` to the unit and ``((r,),)`` to ``r``."""
        level = self.filtration_complex(1)
        target = self._ring_complex
        alpha = GradedMap(
            0, lambda key: self.to_r(Chain.basis(key)), source=level, target=target, name="iso"
        )
        beta = GradedMap(
            0,
            lambda g: self.section(RingElement.basis(g)),
            source=target,
            target=level,
            name="section",
        )
        return Reduction(
            level, target, alpha, beta, GradedMap.zero(1, level, level), name="R^1=>R"
        )

    def filtration_reduction(self, d: int) -> Reduction:
        """R^d ⇒ R assembled from the steps, with side conditions normalized."""
        if d < 1:
            raise ReductionError(f"filtration level must be at least 1, got {d}")
        if d in self._reductions:
            return self._reductions[d]
        red = self.base_isomorphism()
        for level in range(2, d + 1):
            red = compose_reductions(self.filtration_step(level), red)
        if d > 1:
            red = normalize_homotopy(
                red.alpha,
                red.beta,
                red.eta,
                source=red.source,
                target=red.target,
                check=False,
                name=f"R^{d}=>R",
            )
        logger.debug(f"assembled filtration reduction of level {d}", extra={"degree": d})
        self._reductions[d] = red
        return red

    def rinfty_reduction(self) -> Reduction:
        """R∞ ⇒ R, evaluated on each product at the level given by its length."""
        source = self.complex()
        target = self._ring_complex

        def level(key: Product) -> Reduction:
            return self.filtration_reduction(max(1, self.length_of_key(key)))

        alpha = GradedMap(
            0,
            lambda key: level(key).alpha.on_cell(key),
            source=source,
            target=target,
            name="alpha",
        )
        beta = GradedMap(
            0,
            lambda g: self.section(RingElement.basis(g)),
            source=target,
            target=source,
            name="section",
        )
        eta = GradedMap(
            1, lambda key: level(key).eta.on_cell(key), source=source, target=source, name="eta"
        )
        return Reduction(source, target, alpha, beta, eta, name=f"{source.name}=>{target.name}")


def rinfty_diff(algebra: RInfty, e: Chain) -> Chain:
    return algebra.diff(e)


def rinfty_mul(algebra: RInfty, a: Chain, b: Chain) -> Chain:
    return algebra.mul(a, b)


def rinfty_to_r(algebra: RInfty, e: Chain) -> RingElement:
    return algebra.to_r(e)


def filtration_reduction(algebra: RInfty, d: int) -> Reduction:
    return algebra.filtration_reduction(d)
