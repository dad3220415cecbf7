"""Transfer of R∞-actions along reductions and the calculus of R∞-maps.

An R∞-map ``f: M → N`` of degree ``d`` is a family of components
``f_ℓ(r1, …, rℓ): M → N``. It induces the R-linear map of perturbed bar
constructions

    f(r0|…|rm ⊗ x) = Σ_k (-1)^{d(k+|r0..rk|)} r0|…|rk ⊗ f_{m-k}(r(k+1), …, rm) x

and every map between perturbed bar constructions of that shape is determined
by its components.
"""

import itertools
import random
from functools import lru_cache
from typing import Callable, Dict, Hashable, NamedTuple, Optional, Sequence, Tuple

from equichain.algebra import Chain, add_into
from equichain.bar import RInftyModuleAction, perturbed_bar, strict_action
from equichain.complexes import MEMO_SIZE, FreeComplex, GradedMap, graded_commutator
from equichain.errors import FillerError, InvalidComplexError, ReductionError
from equichain.ids import derive_seed
from equichain.logging_config import get_logger
from equichain.models import ValidationReport, Violation
from equichain.reduction import CycleFiller, Reduction, sample_elements, validate_reduction

logger = get_logger(__name__)

Word = Tuple[int, ...]
Component = Callable[[Word, Hashable], Chain]


def _sign(exponent: int) -> int:
    return -1 if exponent % 2 else 1


def _prefix_degrees(ring, word: Sequence[int]) -> Tuple[int, ...]:
    """``out[k]`` is the total degree of the first ``k`` entries."""
    out = [0]
    for g in word:
        out.append(out[-1] + ring.degree(g))
    return tuple(out)


class ShuffleOperator:
    """Sh(r0, …, rm): the tuple action with ``η`` inserted between blocks.

    Evaluated by the recursion
    ``Sh(t) = (t) + Σ_{k=1}^{m} (t[:k]) η Sh(t[k:])`` and cached per
    ``(tuple, cell)``.
    """

    def __init__(self, red: Reduction, action: RInftyModuleAction):
        if action.complex is not red.source:
            raise ReductionError(
                f"action on {action.complex.name} does not act on {red.source.name}"
            )
        self.reduction = red
        self.action = action
        self._on_cell = lru_cache(maxsize=MEMO_SIZE)(self._shuffle_cell)

    def _shuffle_cell(self, tup: Word, cell: Hashable) -> Chain:
        x = Chain.basis(cell)
        data: Dict[Hashable, int] = {}
        add_into(data, self.action.act(tup, x))
        eta = self.reduction.eta
        for k in range(1, len(tup)):
            inner = self.apply(tup[k:], x)
            if inner:
                add_into(data, self.action.act(tup[:k], eta(inner)))
        return Chain._wrap(data)

    def apply(self, tup: Sequence[int], chain: Chain) -> Chain:
        tup = tuple(tup)
        data: Dict[Hashable, int] = {}
        for cell, coef in chain.raw_items():
            add_into(data, self._on_cell(tup, cell), coef)
        return Chain._wrap(data)

    def degree(self, tup: Sequence[int]) -> int:
        return self.action.degree(tup)

    def as_map(self, tup: Sequence[int]) -> GradedMap:
        tup = tuple(tup)
        return GradedMap(
            self.degree(tup),
            lambda cell: self._on_cell(tup, cell),
            source=self.reduction.source,
            target=self.reduction.source,
            name=f"Sh{tup}",
            memoize=False,
        )


def shuffle_action(red: Reduction, action: RInftyModuleAction, tup: Sequence[int]) -> GradedMap:
    return ShuffleOperator(red, action).as_map(tup)


def shuffle_differential(sh: ShuffleOperator, tup: Sequence[int], chain: Chain) -> Chain:
    """The closed form of ``[∂, Sh(tup)]`` applied to ``chain``.

    Sum of Sh on the internal differential of each entry, Sh on merged
    neighbours, and ``Sh(r0..r(k-1)) βα Sh(rk..rm)`` for each split.
    """
    tup = tuple(tup)
    ring = sh.action.ring
    red = sh.reduction
    prefix = _prefix_degrees(ring, tup)
    m = len(tup) - 1
    data: Dict[Hashable, int] = {}
    for k, g in enumerate(tup):
        sign = _sign(k + prefix[k])
        for h, c in ring.d(g).raw_items():
            add_into(data, sh.apply(tup[:k] + (h,) + tup[k + 1 :], chain), sign * c)
    for k in range(1, m + 1):
        sign = _sign(k - 1 + prefix[k])
        for h, c in ring.mul(tup[k - 1], tup[k]).raw_items():
            add_into(data, sh.apply(tup[: k - 1] + (h,) + tup[k + 1 :], chain), sign * c)
        tail = sh.apply(tup[k:], chain)
        value = sh.apply(tup[:k], red.beta(red.alpha(tail)))
        add_into(data, value, _sign(k + prefix[k]))
    return Chain._wrap(data)


def _require_side_conditions(red: Reduction, samples: int, max_degree: int) -> None:
    report = validate_reduction(
        red,
        samples=samples,
        max_degree=max_degree,
        identities=("alpha_eta", "eta_beta", "eta_eta"),
    )
    if not report.ok:
        first = report.violations[0]
        raise ReductionError(
            f"{red.name} fails the side condition {first.identity}",
            identity=first.identity,
            witness=first.witness,
        )


def transfer_basic(
    red: Reduction,
    action: RInftyModuleAction,
    check: bool = True,
    samples: int = 10,
    check_degree: int = 3,
) -> RInftyModuleAction:
    """Action on ``red.target``: ``(r0, …, rm) y = α Sh(r0, …, rm) β y``.

    Raises:
        ReductionError: ``red`` violates a side condition on a sample.
    """
    if check:
        _require_side_conditions(red, samples, check_degree)
    sh = ShuffleOperator(red, action)
    target = red.target

    def act_cell(tup, cell):
        if target.vanishes_in(target.cell_degree(cell) + action.degree(tup)):
            return Chain()
        return red.alpha(sh.apply(tup, red.beta(Chain.basis(cell))))

    transferred = RInftyModuleAction(target, action.ring, act_cell, name=f"transfer({red.name})")
    transferred.shuffle = sh
    logger.debug(f"transferred {action.name} along {red.name}", extra={"reduction": red.name})
    return transferred


def transfer_easy(red: Reduction, action: RInftyModuleAction) -> RInftyModuleAction:
    """Action on ``red.source`` from an action on ``red.target``, for augmented R.

    ``(r) x = β(r)αx + ε(r)(x - βαx)`` and longer tuples act by ``βραx``; this
    makes ``α``, ``β`` and ``η`` R∞-linear.

    Raises:
        InvalidComplexError: the dga has no augmentation.
    """
    ring = action.ring
    if not ring.is_augmented:
        raise InvalidComplexError(f"{ring.name} has no augmentation")
    if action.complex is not red.target:
        raise ReductionError(
            f"action on {action.complex.name} does not act on {red.target.name}"
        )
    alpha, beta = red.alpha, red.beta

    def act_cell(tup, cell):
        x = Chain.basis(cell)
        ax = alpha(x)
        value = beta(action.act(tup, ax))
        if len(tup) == 1 and ring.degree(tup[0]) == 0:
            eps = ring.augmentation.get(tup[0], 0)
            if eps:
                value = value + (x - beta(ax)) * eps
        return value

    return RInftyModuleAction(red.source, ring, act_cell, name=f"easy({red.name})")


class RInftyMap:
    """An R∞-map given by its components.

    Args:
        degree: Degree ``d`` of every component.
        components: ``components(tail, cell)`` is ``f_ℓ(tail)`` on a Z-cell of
            the source, with ``ℓ = len(tail)``.
        source: Action on the source complex.
        target: Action on the target complex.
        source_bar: Perturbed bar construction of the source, for :meth:`induced`.
        target_bar: Perturbed bar construction of the target.
        name: Label for logs.
    """

    def __init__(
        self,
        degree: int,
        components: Component,
        source: RInftyModuleAction,
        target: RInftyModuleAction,
        source_bar: Optional[FreeComplex] = None,
        target_bar: Optional[FreeComplex] = None,
        name: str = "f",
    ):
        self.degree = degree
        self.source = source
        self.target = target
        self.source_bar = source_bar
        self.target_bar = target_bar
        self.name = name
        self._raw = components
        self._component = lru_cache(maxsize=MEMO_SIZE)(components)

    def __repr__(self) -> str:
        return f"RInftyMap({self.name!r}, degree={self.degree})"

    @property
    def ring(self):
        return self.source.ring

    def component(self, tail: Sequence[int], chain: Chain) -> Chain:
        tail = tuple(tail)
        data: Dict[Hashable, int] = {}
        for cell, coef in chain.raw_items():
            add_into(data, self._component(tail, cell), coef)
        return Chain._wrap(data)

    def cache_info(self):
        """Hit and size statistics of the component memo."""
        return self._component.cache_info()

    def component_map(self, tail: Sequence[int]) -> GradedMap:
        tail = tuple(tail)
        return GradedMap(
            self.degree + self.source.degree(tail) + 1 if tail else self.degree,
            lambda cell: self._component(tail, cell),
            source=self.source.complex,
            target=self.target.complex,
            name=f"{self.name}_{len(tail)}{tail}",
            memoize=False,
        )

    def _derived(self, degree: int, components: Component, name: str) -> "RInftyMap":
        return RInftyMap(
            degree,
            components,
            self.source,
            self.target,
            self.source_bar,
            self.target_bar,
            name=name,
        )

    def with_bars(self, source_bar: FreeComplex, target_bar: FreeComplex) -> "RInftyMap":
        return RInftyMap(
            self.degree, self._raw, self.source, self.target, source_bar, target_bar, self.name
        )

    # -- linear structure ----------------------------------------------

    def _check_compatible(self, other: "RInftyMap") -> None:
        if self.degree != other.degree:
            raise ReductionError(
                f"cannot add {self.name} (degree {self.degree}) and "
                f"{other.name} (degree {other.degree})"
            )

    def __add__(self, other: "RInftyMap") -> "RInftyMap":
        self._check_compatible(other)
        return self._derived(
            self.degree,
            lambda tail, cell: self._component(tail, cell) + other._component(tail, cell),
            f"({self.name}+{other.name})",
        )

    def __sub__(self, other: "RInftyMap") -> "RInftyMap":
        self._check_compatible(other)
        return self._derived(
            self.degree,
            lambda tail, cell: self._component(tail, cell) - other._component(tail, cell),
            f"({self.name}-{other.name})",
        )

    def __neg__(self) -> "RInftyMap":
        return self._derived(
            self.degree, lambda tail, cell: -self._component(tail, cell), f"-{self.name}"
        )

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_linear(
        cls,
        f: GradedMap,
        source: RInftyModuleAction,
        target: RInftyModuleAction,
        source_bar: Optional[FreeComplex] = None,
        target_bar: Optional[FreeComplex] = None,
    ) -> "RInftyMap":
        """``f₀ = f`` and all higher components zero."""

        def components(tail, cell):
            return f.on_cell(cell) if not tail else Chain()

        return cls(f.degree, components, source, target, source_bar, target_bar, name=f.name)

    @classmethod
    def identity(
        cls, action: RInftyModuleAction, bar: Optional[FreeComplex] = None
    ) -> "RInftyMap":
        return cls.from_linear(GradedMap.identity(action.complex), action, action, bar, bar)

    @classmethod
    def zero(
        cls,
        degree: int,
        source: RInftyModuleAction,
        target: RInftyModuleAction,
        source_bar: Optional[FreeComplex] = None,
        target_bar: Optional[FreeComplex] = None,
    ) -> "RInftyMap":
        return cls(
            degree, lambda tail, cell: Chain(), source, target, source_bar, target_bar, "0"
        )

    # -- bar maps -------------------------------------------------------

    def induced(self) -> GradedMap:
        """The R-linear map of perturbed bar constructions."""
        if self.source_bar is None or self.target_bar is None:
            raise ReductionError(f"{self.name} has no bar constructions attached")
        ring = self.ring
        d = self.degree
        unit = ring.unit

        def on_label(label):
            tail, x = label
            word = (unit,) + tail
            prefix = _prefix_degrees(ring, word)
            basis = Chain.basis(x)
            data: Dict[Hashable, int] = {}
            for k in range(0, len(tail) + 1):
                sign = _sign(d * (k + prefix[k + 1]))
                for y, c in self.component(word[k + 1 :], basis).raw_items():
                    add_into(data, {(unit, (word[1 : k + 1], y)): sign * c})
            return Chain._wrap(data)

        return GradedMap.rlinear_on_labels(
            self.source_bar, self.target_bar, d, on_label, name=f"{self.name}*"
        )

    def compose(self, other: "RInftyMap") -> "RInftyMap":
        """``self ∘ other``: ``(gf)_ℓ = Σ_k (-1)^{|f|(k+|r1..rk|)} g_k ∘ f_{ℓ-k}``."""
        ring = self.ring
        f, g = other, self

        def components(tail, cell):
            prefix = _prefix_degrees(ring, tail)
            x = Chain.basis(cell)
            data: Dict[Hashable, int] = {}
            for k in range(0, len(tail) + 1):
                inner = f.component(tail[k:], x)
                if inner:
                    sign = _sign(f.degree * (k + prefix[k]))
                    add_into(data, g.component(tail[:k], inner), sign)
            return Chain._wrap(data)

        return RInftyMap(
            self.degree + other.degree,
            components,
            other.source,
            self.target,
            other.source_bar,
            self.target_bar,
            name=f"{self.name}∘{other.name}",
        )

    __matmul__ = compose

    def delta(self) -> "RInftyMap":
        """Components of ``[∂, f]``, of degree ``d - 1``."""
        ring = self.ring
        d = self.degree
        source_complex = self.source.complex
        target_complex = self.target.complex

        def components(tail, cell):
            ell = len(tail)
            prefix = _prefix_degrees(ring, tail)
            x = Chain.basis(cell)
            data: Dict[Hashable, int] = {}
            add_into(data, target_complex.boundary(self.component(tail, x)))
            inner: Dict[Hashable, int] = {}
            for k in range(1, ell + 1):
                sign = _sign(k + prefix[k - 1])
                for h, c in ring.d(tail[k - 1]).raw_items():
                    changed = tail[: k - 1] + (h,) + tail[k:]
                    add_into(inner, self.component(changed, x), sign * c)
            add_into(
                inner,
                self.component(tail, source_complex.boundary(x)),
                _sign(ell + prefix[ell]),
            )
            add_into(data, inner, -_sign(d))
            for k in range(1, ell + 1):
                lower = self.component(tail[k:], x)
                if lower:
                    add_into(
                        data, self.target.act(tail[:k], lower), -_sign(d * (k + prefix[k]))
                    )
            for j in range(1, ell):
                sign = -_sign(d + j + prefix[j])
                for h, c in ring.mul(tail[j - 1], tail[j]).raw_items():
                    merged = tail[: j - 1] + (h,) + tail[j + 1 :]
                    add_into(data, self.component(merged, x), sign * c)
            for j in range(0, ell):
                acted = self.source.act(tail[j:], x)
                if acted:
                    add_into(
                        data,
                        self.component(tail[:j], acted),
                        -_sign(d + j + 1 + prefix[j]),
                    )
            return Chain._wrap(data)

        return self._derived(d - 1, components, f"[d,{self.name}]")


def rinfty_map_apply(f: RInftyMap, chain: Chain) -> Chain:
    return f.induced()(chain)


def rinfty_map_delta(f: RInftyMap) -> RInftyMap:
    return f.delta()


def rinfty_map_compose(g: RInftyMap, f: RInftyMap) -> RInftyMap:
    return g.compose(f)


def _sample_tails(ring, length: int, rng: random.Random, samples: int) -> Sequence[Word]:
    total = len(ring.degrees) ** length
    if total <= samples:
        return list(itertools.product(ring.generators, repeat=length))
    gens = tuple(ring.generators)
    return [tuple(rng.choice(gens) for _ in range(length)) for _ in range(samples)]


def check_structure_equations(
    f: RInftyMap,
    expected: Optional[RInftyMap] = None,
    max_length: int = 3,
    samples: int = 20,
    seed: int = 0,
    max_degree: int = 3,
) -> ValidationReport:
    """Compare the components of ``[∂, f]`` with ``expected`` (zero by default).

    Tails of length up to ``max_length`` and source elements in degrees up to
    ``max_degree`` are sampled deterministically from ``seed``.
    """
    rng = random.Random(derive_seed(seed, f"structure:{f.name}"))
    report = ValidationReport(name=f"structure({f.name})", max_degree=max_degree)
    delta = f.delta()
    complex_ = f.source.complex
    top = max_degree
    if complex_.max_degree is not None:
        top = min(top, complex_.max_degree)
    for ell in range(0, max_length + 1):
        tails = _sample_tails(f.ring, ell, rng, samples)
        for n in range(0, top + 1):
            for x in sample_elements(complex_, n, rng, samples):
                tail = tails[rng.randrange(len(tails))]
                report.checked += 1
                lhs = delta.component(tail, x)
                rhs = expected.component(tail, x) if expected is not None else Chain()
                if lhs != rhs:
                    report.add(
                        Violation(
                            f"structure_{ell}",
                            n,
                            repr(x)[:200],
                            f"tail {tail}: difference {(lhs - rhs)!r}"[:400],
                        )
                    )
                    break
    return report


def is_chain_map(f: RInftyMap, max_length: int = 3, samples: int = 20, seed: int = 0) -> bool:
    """Whether all components of ``[∂, f]`` vanish on the sampled tails."""
    return check_structure_equations(f, max_length=max_length, samples=samples, seed=seed).ok


class BarMaps(NamedTuple):
    """ε*, ζ*, η* relating an R∞-module M and its perturbed bar construction X."""

    epsilon: RInftyMap
    zeta: RInftyMap
    eta: RInftyMap
    bar: FreeComplex
    double_bar: FreeComplex


def bar_maps(
    action: RInftyModuleAction,
    bar: Optional[FreeComplex] = None,
    double_bar: Optional[FreeComplex] = None,
) -> BarMaps:
    """The R∞-maps ``ε*: X → M``, ``ζ*: M → X`` and ``η*: X → X`` for ``X = BM``.

    ``ε*ζ* = id`` and ``[∂, η*] = id - ζ*ε*``.
    """
    module = action.complex
    ring = action.ring
    unit = ring.unit
    bar = bar or perturbed_bar(module, action)
    bar_action = strict_action(bar)
    double_bar = double_bar or perturbed_bar(bar, bar_action)
    module_bar = bar

    def sign_of(tail):
        return _sign(len(tail) + sum(ring.degree(g) for g in tail))

    def epsilon(tail, cell):
        r0, (inner, x) = cell
        return action.act(tail + (r0,) + inner, Chain.basis(x)) * sign_of(tail)

    def zeta(tail, y):
        return Chain.basis((unit, (tail, y)))

    def eta(tail, cell):
        r0, (inner, x) = cell
        return Chain.basis((unit, (tail + (r0,) + inner, x)), sign_of(tail))

    return BarMaps(
        RInftyMap(0, epsilon, bar_action, action, double_bar, module_bar, "epsilon"),
        RInftyMap(0, zeta, action, bar_action, module_bar, double_bar, "zeta"),
        RInftyMap(1, eta, bar_action, bar_action, double_bar, double_bar, "eta"),
        bar,
        double_bar,
    )


def strictify_reduction_maps(
    red: Reduction,
    source_action: RInftyModuleAction,
    target_action: Optional[RInftyModuleAction] = None,
    source_bar: Optional[FreeComplex] = None,
    target_bar: Optional[FreeComplex] = None,
) -> Tuple[RInftyMap, RInftyMap]:
    """R∞-maps ``α*`` and ``β*`` extending the projection and inclusion.

    ``α_ℓ(r1..rℓ) = (-1)^{ℓ+|r1..rℓ|} α Sh(r1..rℓ) η`` and
    ``β_ℓ(r1..rℓ) = η Sh(r1..rℓ) β`` for ``ℓ ≥ 1``.
    """
    if target_action is None:
        target_action = transfer_basic(red, source_action)
    sh = target_action.shuffle
    if sh is None or sh.reduction is not red:
        sh = ShuffleOperator(red, source_action)
    ring = source_action.ring
    alpha, beta, eta = red.alpha, red.beta, red.eta

    def alpha_components(tail, cell):
        x = Chain.basis(cell)
        if not tail:
            return alpha(x)
        sign = _sign(len(tail) + sum(ring.degree(g) for g in tail))
        return alpha(sh.apply(tail, eta(x))) * sign

    def beta_components(tail, cell):
        y = Chain.basis(cell)
        if not tail:
            return beta(y)
        return eta(sh.apply(tail, beta(y)))

    return (
        RInftyMap(
            0, alpha_components, source_action, target_action, source_bar, target_bar, "alpha"
        ),
        RInftyMap(
            0, beta_components, target_action, source_action, target_bar, source_bar, "beta"
        ),
    )


def kernel_filler(
    alpha: RInftyMap,
    eta: GradedMap,
    bar: FreeComplex,
    max_rounds: Optional[int] = None,
) -> CycleFiller:
    """Filler for cycles of ``ker α`` in the perturbed bar construction ``bar``.

    The longest-word component of a cycle has its module part in ``ker α₀``;
    ``η`` is applied slotwise there, the boundary of the lift is subtracted
    and the shorter remainder is treated the same way. Assumes the dga has zero
    internal differential so the longest component is a cycle in the module.

    Raises:
        FillerError: the longest component leaves ``ker α₀`` or the word
            length fails to drop.
    """
    ring = alpha.ring

    def fill(z: Chain) -> Chain:
        c: Dict[Hashable, int] = {}
        remainder = z
        previous = None
        rounds = 0
        while remainder:
            length = max(len(cell[1][0]) for cell in remainder)
            if previous is not None and length >= previous:
                raise FillerError(
                    f"word length did not drop below {previous}", witness=repr(remainder)[:200]
                )
            rounds += 1
            if max_rounds is not None and rounds > max_rounds:
                raise FillerError("too many rounds", witness=repr(remainder)[:200])
            groups: Dict[Tuple[int, Word], Dict[Hashable, int]] = {}
            for (r0, (tail, x)), coef in remainder.raw_items():
                if len(tail) == length:
                    groups.setdefault((r0, tail), {})[x] = coef
            lift: Dict[Hashable, int] = {}
            for (r0, tail), part in groups.items():
                module_part = Chain._wrap(part)
                if alpha.component((), module_part):
                    raise FillerError(
                        f"component over {(r0,) + tail} is not in the kernel of alpha",
                        witness=repr(module_part)[:200],
                    )
                sign = _sign(length + ring.degree(r0) + sum(ring.degree(g) for g in tail))
                for y, coef in eta(module_part).raw_items():
                    add_into(lift, {(r0, (tail, y)): sign * coef})
            lifted = Chain._wrap(lift)
            add_into(c, lifted)
            remainder = remainder - bar.boundary(lifted)
            previous = length
        return Chain._wrap(c)

    return CycleFiller(bar, fill, name=f"kernel_filler({alpha.name})")


def extend_nullhomotopic(
    eta: GradedMap,
    source: RInftyModuleAction,
    target: Optional[RInftyModuleAction] = None,
    source_bar: Optional[FreeComplex] = None,
    target_bar: Optional[FreeComplex] = None,
) -> RInftyMap:
    """Extend ``f₀ = [∂, η]`` to an R∞-chain map of degree ``d = |η| - 1``.

    ``f_ℓ(r1..rℓ) = (-1)^{d+1} [η, (r1..rℓ)]`` with the graded commutator
    ``[η, ρ] = ηρ - (-1)^{|η||ρ|} ρη``.
    """
    target = target or source
    d = eta.degree - 1
    f0 = graded_commutator(eta)

    def components(tail, cell):
        x = Chain.basis(cell)
        if not tail:
            return f0.on_cell(cell)
        rho_degree = source.degree(tail)
        value = eta(source.act(tail, x)) - target.act(tail, eta(x)) * _sign(
            eta.degree * rho_degree
        )
        return value * _sign(d + 1)

    return RInftyMap(d, components, source, target, source_bar, target_bar, f"ext({eta.name})")


def extend_homotopic(strict: RInftyMap, eta: GradedMap) -> RInftyMap:
    """R∞-extension of ``f₀ + [∂, η]`` where ``f₀`` already extends to ``strict``."""
    return strict + extend_nullhomotopic(
        eta, strict.source, strict.target, strict.source_bar, strict.target_bar
    )
