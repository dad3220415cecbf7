"""Bar constructions over a presented dga.

The two-sided bar construction of a module M has Z-basis cells
``(r0, (tail, x))`` standing for ``r0 | r1 | … | rm ⊗ x`` with
``tail = (r1, …, rm)`` and ``x`` a Z-cell of M. It is a free left module on
the labels ``(tail, x)``. Words keep unit entries; nothing is normalized.
"""

import itertools
from functools import lru_cache
from typing import Callable, Dict, Hashable, NamedTuple, Optional, Sequence, Tuple

from equichain.algebra import Chain, DgaPresentation, add_into
from equichain.complexes import ChainComplex, FreeComplex, GradedMap
from equichain.errors import InvalidComplexError
from equichain.logging_config import get_logger
from equichain.reduction import CycleFiller, Reduction, build_reduction

logger = get_logger(__name__)

Word = Tuple[int, ...]
Label = Tuple[Word, Hashable]


def _sign(exponent: int) -> int:
    return -1 if exponent % 2 else 1


class RInftyModuleAction:
    """An action of R∞ on a complex, given on generator tuples and Z-cells.

    ``act_cell(tup, cell)`` is only consulted for normalized tuples: ``(1,)``
    acts as the identity and longer tuples containing the unit act by zero.
    Products of tuples act right to left.
    """

    def __init__(
        self,
        complex_: ChainComplex,
        ring: DgaPresentation,
        act_cell: Callable[[Word, Hashable], Chain],
        name: str = "action",
        strict: bool = False,
    ):
        self.complex = complex_
        self.ring = ring
        self.name = name
        self.strict = strict
        self._act_cell = lru_cache(maxsize=None)(act_cell)
        # set when the action was transferred along a reduction
        self.shuffle = None

    def __repr__(self) -> str:
        return f"RInftyModuleAction({self.name!r} on {self.complex.name})"

    def degree(self, tup: Sequence[int]) -> int:
        return len(tup) - 1 + sum(self.ring.degree(g) for g in tup)

    def act(self, tup: Sequence[int], chain: Chain) -> Chain:
        tup = tuple(tup)
        unit = self.ring.unit
        if tup == (unit,):
            return chain
        if unit in tup:
            return Chain()
        data: Dict[Hashable, int] = {}
        for cell, coef in chain.raw_items():
            add_into(data, self._act_cell(tup, cell), coef)
        return Chain._wrap(data)

    def act_element(self, element: Chain, chain: Chain) -> Chain:
        """Action of an R∞ element given as products of tuples."""
        data: Dict[Hashable, int] = {}
        for key, coef in element.raw_items():
            value = chain
            for factor in reversed(key):
                value = self.act(factor, value)
            add_into(data, value, coef)
        return Chain._wrap(data)

    def as_map(self, tup: Sequence[int]) -> GradedMap:
        tup = tuple(tup)
        return GradedMap(
            self.degree(tup),
            lambda cell: self.act(tup, Chain.basis(cell)),
            source=self.complex,
            target=self.complex,
            name=f"{tup}",
        )


def strict_action(complex_: ChainComplex) -> RInftyModuleAction:
    """``(r)`` acts as ``r·`` and longer tuples act by zero."""
    if not complex_.has_action:
        raise InvalidComplexError(f"{complex_.name} carries no ring action")

    def act_cell(tup, cell):
        if len(tup) == 1:
            return complex_.act_generator(tup[0], cell)
        return Chain()

    return RInftyModuleAction(
        complex_, complex_.ring, act_cell, name=f"strict({complex_.name})", strict=True
    )


def trivial_action(complex_: ChainComplex, ring: DgaPresentation) -> RInftyModuleAction:
    """Degree-0 generators act through the augmentation; everything else by zero."""
    if not ring.is_augmented:
        raise InvalidComplexError(f"{ring.name} has no augmentation")

    def act_cell(tup, cell):
        if len(tup) == 1 and ring.degree(tup[0]) == 0:
            return Chain.basis(cell, ring.augmentation.get(tup[0], 0))
        return Chain()

    return RInftyModuleAction(
        complex_, ring, act_cell, name=f"trivial({complex_.name})", strict=True
    )


def _tails(ring: DgaPresentation, length: int, budget: int) -> Sequence[Word]:
    out = []
    for tail in itertools.product(ring.generators, repeat=length):
        if sum(ring.degree(g) for g in tail) <= budget:
            out.append(tail)
    return out


def _bar_labels(ring: DgaPresentation, module: ChainComplex, n: int) -> Sequence[Label]:
    out = []
    for m in range(0, n + 1):
        for tail in _tails(ring, m, n - m):
            rest = n - m - sum(ring.degree(g) for g in tail)
            if module.vanishes_in(rest):
                continue
            out.extend((tail, x) for x in module.cells(rest))
    return sorted(out)


def _free_terms(ring: DgaPresentation, module: ChainComplex, tail: Word, x: Hashable):
    """∂⊗ on the word and on x, and the merges of neighbouring word entries."""
    unit = ring.unit
    word = (unit,) + tail
    m = len(tail)
    prefix = [0]
    for g in word:
        prefix.append(prefix[-1] + ring.degree(g))
    data: Dict[Hashable, int] = {}
    for k in range(1, m + 1):
        sign = _sign(k + prefix[k])
        for h, c in ring.d(word[k]).raw_items():
            add_into(data, {(unit, (tail[: k - 1] + (h,) + tail[k:], x)): sign * c})
    for k in range(1, m + 1):
        sign = _sign(k - 1 + prefix[k])
        for h, c in ring.mul(word[k - 1], word[k]).raw_items():
            if k == 1:
                cell = (h, (tail[1:], x))
            else:
                cell = (unit, (tail[: k - 2] + (h,) + tail[k:], x))
            add_into(data, {cell: sign * c})
    sign = _sign(m + prefix[m + 1])
    for y, c in module.boundary_cell(x).raw_items():
        add_into(data, {(unit, (tail, y)): sign * c})
    return data, word, prefix


def bar_complex(
    module: ChainComplex, max_degree: Optional[int] = None, name: str = ""
) -> FreeComplex:
    """B(R, R, M) for a strict module M with a Z-basis.

    Only the last word entry acts on M: ``∂alg`` sends
    ``1|r1|…|rm ⊗ x`` to ``(-1)^{m+|r1..r(m-1)|} 1|r1|…|r(m-1) ⊗ rm·x``.
    """
    if not module.has_action:
        raise InvalidComplexError(f"{module.name} is not a module over a dga")
    ring = module.ring

    def label_degree(label):
        tail, x = label
        return len(tail) + sum(ring.degree(g) for g in tail) + module.cell_degree(x)

    def label_boundary(label):
        tail, x = label
        data, word, prefix = _free_terms(ring, module, tail, x)
        m = len(tail)
        if m >= 1:
            sign = _sign(m + prefix[m])
            for y, c in module.act_generator(tail[-1], x).raw_items():
                add_into(data, {(ring.unit, (tail[:-1], y)): sign * c})
        return Chain._wrap(data)

    labels = (lambda n: _bar_labels(ring, module, n)) if module.has_basis else None
    return FreeComplex(
        name or f"B{module.name}",
        ring,
        label_degree,
        label_boundary,
        labels=labels,
        max_degree=max_degree,
    )


def perturbed_bar(
    module: ChainComplex,
    action: RInftyModuleAction,
    max_degree: Optional[int] = None,
    name: str = "",
) -> FreeComplex:
    """BM for an R∞-module M: the tail ``(rk, …, rm)`` is consumed by the action.

    ``∂⁻_k`` sends ``1|r1|…|rm ⊗ x`` to
    ``(-1)^{k+|r0..r(k-1)|} 1|r1|…|r(k-1) ⊗ (rk, …, rm)x`` for ``k = 1..m``.
    """
    ring = action.ring

    def label_degree(label):
        tail, x = label
        return len(tail) + sum(ring.degree(g) for g in tail) + module.cell_degree(x)

    def label_boundary(label):
        tail, x = label
        data, word, prefix = _free_terms(ring, module, tail, x)
        basis = Chain.basis(x)
        for k in range(1, len(tail) + 1):
            sign = _sign(k + prefix[k])
            for y, c in action.act(word[k:], basis).raw_items():
                add_into(data, {(ring.unit, (word[1:k], y)): sign * c})
        return Chain._wrap(data)

    labels = (lambda n: _bar_labels(ring, module, n)) if module.has_basis else None
    return FreeComplex(
        name or f"B{module.name}",
        ring,
        label_degree,
        label_boundary,
        labels=labels,
        max_degree=max_degree,
    )


def bar_basis(bar: FreeComplex, n: int) -> Tuple[Label, ...]:
    """R-basis labels ``(tail, x)`` of the bar complex in degree ``n``."""
    return bar.labels(n)


def bar_rank(bar: FreeComplex, n: int) -> int:
    return bar.label_rank(n)


class RetractData(NamedTuple):
    """M as a deformation retract of BM: ``ε₀ζ₀ = id`` and ``[∂, η₀] = id - ζ₀ε₀``."""

    epsilon: GradedMap
    zeta: GradedMap
    eta: GradedMap


def _prepend_unit(unit: int) -> Callable[[Tuple[int, Label]], Chain]:
    def on_cell(cell):
        r0, (tail, x) = cell
        return Chain.basis((unit, ((r0,) + tail, x)))

    return on_cell


def bm_retract_data(
    module: ChainComplex,
    action: RInftyModuleAction,
    bar: Optional[FreeComplex] = None,
) -> RetractData:
    """``ε₀`` applies the whole word as a tuple, ``ζ₀`` is ``x ↦ 1 ⊗ x``, ``η₀`` prepends ``1|``.

    None of these maps is linear over R∞.
    """
    bar = bar or perturbed_bar(module, action)
    unit = action.ring.unit

    def epsilon(cell):
        r0, (tail, x) = cell
        return action.act((r0,) + tail, Chain.basis(x))

    return RetractData(
        GradedMap(0, epsilon, source=bar, target=module, name="epsilon0"),
        GradedMap(
            0,
            lambda x: Chain.basis((unit, ((), x))),
            source=module,
            target=bar,
            name="zeta0",
            memoize=False,
        ),
        GradedMap(1, _prepend_unit(unit), source=bar, target=bar, name="eta0"),
    )


def bar_reduction(
    module: FreeComplex,
    bar: Optional[FreeComplex] = None,
    check_degree: Optional[int] = None,
) -> Reduction:
    """The R-linear reduction B(R, R, M) ⇒ M.

    ``ε(r0 ⊗ x) = r0·x`` and ``ε`` vanishes on longer words. The section is
    ``ζ₀(e) = 1 ⊗ e`` on the R-basis of M and ``ker ε`` is filled by ``η₀``.
    """
    if not isinstance(module, FreeComplex) or not module.has_labels:
        raise InvalidComplexError(f"{module.name} has no R-basis enumeration")
    bar = bar or bar_complex(module)
    ring = module.ring
    unit = ring.unit

    def epsilon_label(label):
        tail, x = label
        return Chain.basis(x) if not tail else Chain()

    epsilon = GradedMap.rlinear_on_labels(bar, module, 0, epsilon_label, name="epsilon")
    zeta = GradedMap.rlinear_on_labels(
        module,
        bar,
        0,
        lambda e: Chain.basis((unit, ((), (unit, e)))),
        name="zeta0",
    )
    eta0 = GradedMap(1, _prepend_unit(unit), source=bar, target=bar, name="eta0")
    filler = CycleFiller.from_homotopy(bar, eta0, name="eta0")
    red = build_reduction(
        epsilon, zeta, filler, check_degree=check_degree, name=f"{bar.name}=>{module.name}"
    )
    logger.info(f"built bar reduction {red.name}", extra={"reduction": red.name})
    return red
