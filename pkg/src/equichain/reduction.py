"""Reductions, strong equivalences and the constructions that produce them.

A reduction ``C ⇒ D`` is a triple ``(α, β, η)`` with ``αβ = id``,
``[∂, η] = id - βα`` and the side conditions ``αη = ηβ = ηη = 0``. The
builders here either check these identities by sampling or establish them by
construction.
"""

import random
from dataclasses import dataclass
from typing import Callable, Iterable, List, Optional, Tuple

from equichain.algebra import Chain
from equichain.complexes import ChainComplex, FreeComplex, GradedMap, graded_commutator
from equichain.errors import (
    DegreeMismatchError,
    FillerError,
    InvalidComplexError,
    ReductionError,
)
from equichain.ids import derive_seed
from equichain.logging_config import get_logger
from equichain.models import ValidationReport, Violation

logger = get_logger(__name__)

IDENTITIES = (
    "chain_maps",
    "alpha_beta",
    "homotopy",
    "alpha_eta",
    "eta_beta",
    "eta_eta",
    "linearity",
)

WITNESS_WIDTH = 200


def _witness(chain: Chain) -> str:
    text = repr(chain)
    if len(text) > WITNESS_WIDTH:
        return text[: WITNESS_WIDTH - 3] + "..."
    return text


@dataclass(frozen=True)
class Reduction:
    """A reduction ``source ⇒ target``.

    Attributes:
        source: The big complex.
        target: The small complex.
        alpha: Projection, a degree 0 chain map ``source → target``.
        beta: Inclusion, a degree 0 chain map ``target → source``.
        eta: Homotopy of degree +1 on ``source``.
        rlinear: Whether all three maps are linear over the acting dga.
        name: Label used in reports and logs.
    """

    source: ChainComplex
    target: ChainComplex
    alpha: GradedMap
    beta: GradedMap
    eta: GradedMap
    rlinear: bool = False
    name: str = "reduction"

    def __post_init__(self):
        for label, fn, expected in (
            ("alpha", self.alpha, 0),
            ("beta", self.beta, 0),
            ("eta", self.eta, 1),
        ):
            if fn.degree != expected:
                raise DegreeMismatchError(
                    f"{self.name}: {label} has degree {fn.degree}, expected {expected}"
                )

    def renamed(self, name: str) -> "Reduction":
        return Reduction(
            self.source, self.target, self.alpha, self.beta, self.eta, self.rlinear, name
        )

    def __repr__(self) -> str:
        return f"Reduction({self.name!r}: {self.source.name} => {self.target.name})"


@dataclass(frozen=True)
class StrongEquivalence:
    """A span of reductions ``left.target ⇐ source ⇒ right.target``."""

    left: Reduction
    right: Reduction

    def __post_init__(self):
        if self.left.source is not self.right.source:
            raise ReductionError(
                f"strong equivalence legs have different sources: "
                f"{self.left.source.name} and {self.right.source.name}",
                identity="shared_source",
            )

    @property
    def source(self) -> ChainComplex:
        return self.left.source

    @classmethod
    def trivial(cls, complex_: ChainComplex) -> "StrongEquivalence":
        """The span ``C ⇐ C ⇒ C`` of identity reductions."""
        reduction = identity_reduction(complex_)
        return cls(reduction, reduction)

    def validate(
        self, samples: int = 50, seed: int = 0, max_degree: int = 6
    ) -> ValidationReport:
        report = ValidationReport(name="strong_equivalence", max_degree=max_degree)
        for prefix, leg in (("left.", self.left), ("right.", self.right)):
            report.merge(
                validate_reduction(leg, samples=samples, seed=seed, max_degree=max_degree),
                prefix=prefix,
            )
        return report


class CycleFiller:
    """Partial function ``z ↦ c`` with ``∂c = z`` on cycles of a subcomplex.

    Every result is checked and a miss is reported with its witness.
    """

    def __init__(
        self,
        complex_: ChainComplex,
        fill: Callable[[Chain], Chain],
        name: str = "filler",
        check_cycle: bool = True,
    ):
        self.complex = complex_
        self.name = name
        self._fill = fill
        self.check_cycle = check_cycle

    def __call__(self, z: Chain) -> Chain:
        if not z:
            return Chain()
        if self.check_cycle and self.complex.boundary(z):
            raise FillerError(f"{self.name}: input is not a cycle", witness=_witness(z))
        c = self._fill(z)
        if self.complex.boundary(c) != z:
            raise FillerError(
                f"{self.name}: boundary of the lift differs from the cycle",
                witness=_witness(z),
            )
        return c

    @classmethod
    def from_homotopy(
        cls, complex_: ChainComplex, homotopy: GradedMap, name: str = ""
    ) -> "CycleFiller":
        """Fill with a map ``h`` such that ``∂h z = z`` on the relevant cycles."""
        return cls(complex_, homotopy, name=name or f"filler({homotopy.name})")


def identity_reduction(complex_: ChainComplex) -> Reduction:
    return Reduction(
        complex_,
        complex_,
        GradedMap.identity(complex_),
        GradedMap.identity(complex_),
        GradedMap.zero(1, complex_, complex_),
        rlinear=complex_.has_action,
        name=f"id_{complex_.name}",
    )


def compose_reductions(first: Reduction, second: Reduction, name: str = "") -> Reduction:
    """Compose ``A ⇒ B`` with ``B ⇒ C`` into ``A ⇒ C``.

    The result is ``(α₂α₁, β₁β₂, η₁ + β₁η₂α₁)``; side conditions are inherited.
    """
    if first.target is not second.source:
        raise ReductionError(
            f"cannot compose {first.name} with {second.name}: "
            f"{first.target.name} is not {second.source.name}",
            identity="composable",
        )
    alpha = second.alpha @ first.alpha
    beta = first.beta @ second.beta
    eta = first.eta + first.beta @ second.eta @ first.alpha
    return Reduction(
        first.source,
        second.target,
        alpha.renamed("alpha"),
        beta.renamed("beta"),
        eta.renamed("eta"),
        rlinear=first.rlinear and second.rlinear,
        name=name or f"{second.name}*{first.name}",
    )


def sample_elements(
    complex_: ChainComplex, n: int, rng: random.Random, samples: int
) -> List[Chain]:
    """Elements to test in degree ``n``: the whole basis when it is small."""
    if complex_.has_basis:
        cells = complex_.cells(n)
        if len(cells) <= samples:
            return [Chain.basis(cell) for cell in cells]
    out = []
    for _ in range(samples):
        chain = complex_.random_chain(rng, n)
        if chain:
            out.append(chain)
    return out


def _top_degree(complex_: ChainComplex, requested: int) -> int:
    if complex_.max_degree is None:
        return requested
    # degree n+1 must exist for η to be evaluated
    return min(requested, complex_.max_degree - 1)


def validate_reduction(
    red: Reduction,
    samples: int = 50,
    seed: int = 0,
    max_degree: int = 6,
    identities: Iterable[str] = IDENTITIES,
) -> ValidationReport:
    """Check the reduction identities on seeded samples in degrees ``0..max_degree``.

    Args:
        red: The reduction to check.
        samples: Elements per degree; a smaller basis is checked completely.
        seed: Base seed, combined with the reduction's name.
        max_degree: Highest degree sampled; clipped to the complexes' bounds.
        identities: Subset of :data:`IDENTITIES` to check.

    Returns:
        A report listing the first witness for each violated identity and degree.
    """
    wanted = set(identities)
    unknown = wanted - set(IDENTITIES)
    if unknown:
        raise ValueError(f"unknown identities: {sorted(unknown)}")
    rng = random.Random(derive_seed(seed, red.name))
    report = ValidationReport(name=red.name, max_degree=max_degree)
    src, tgt = red.source, red.target
    d_src, d_tgt = src.differential(), tgt.differential()
    alpha, beta, eta = red.alpha, red.beta, red.eta
    check_linearity = (
        "linearity" in wanted and red.rlinear and src.has_action and tgt.has_action
    )

    def fail(identity: str, degree: int, element: Chain, detail: str = "") -> None:
        report.add(Violation(identity, degree, _witness(element), detail))

    for n in range(0, _top_degree(src, max_degree) + 1):
        failed = set()
        for x in sample_elements(src, n, rng, samples):
            report.checked += 1
            ax = alpha(x)
            if "chain_maps" in wanted and "chain_maps" not in failed:
                if alpha(d_src(x)) != d_tgt(ax):
                    failed.add("chain_maps")
                    fail("chain_maps", n, x, "alpha does not commute with the boundary")
            ex = eta(x) if wanted & {"homotopy", "alpha_eta", "eta_eta"} else None
            if "homotopy" in wanted and "homotopy" not in failed:
                lhs = d_src(ex) + eta(d_src(x))
                if lhs != x - beta(ax):
                    failed.add("homotopy")
                    fail("homotopy", n, x, "[d, eta] differs from id - beta alpha")
            if "alpha_eta" in wanted and "alpha_eta" not in failed and alpha(ex):
                failed.add("alpha_eta")
                fail("alpha_eta", n, x)
            if "eta_eta" in wanted and "eta_eta" not in failed and eta(ex):
                failed.add("eta_eta")
                fail("eta_eta", n, x)
            if check_linearity and "linearity" not in failed:
                for g in src.ring.generators:
                    if not all(f.is_rlinear_on(x, g) for f in (alpha, eta)):
                        failed.add("linearity")
                        fail("linearity", n, x, f"generator {g}")
                        break
        logger.debug(
            f"{red.name}: source degree {n} checked",
            extra={"degree": n, "reduction": red.name},
        )

    for n in range(0, _top_degree(tgt, max_degree) + 1):
        failed = set()
        for y in sample_elements(tgt, n, rng, samples):
            report.checked += 1
            by = beta(y)
            if "chain_maps" in wanted and "chain_maps" not in failed:
                if beta(d_tgt(y)) != d_src(by):
                    failed.add("chain_maps")
                    fail("chain_maps", n, y, "beta does not commute with the boundary")
            if "alpha_beta" in wanted and "alpha_beta" not in failed and alpha(by) != y:
                failed.add("alpha_beta")
                fail("alpha_beta", n, y)
            if "eta_beta" in wanted and "eta_beta" not in failed and eta(by):
                failed.add("eta_beta")
                fail("eta_beta", n, y)
            if check_linearity and "linearity" not in failed:
                for g in tgt.ring.generators:
                    if not beta.is_rlinear_on(y, g):
                        failed.add("linearity")
                        fail("linearity", n, y, f"beta, generator {g}")
                        break

    if report.ok:
        logger.info(
            f"{red.name}: all identities hold on {report.checked} samples",
            extra={"reduction": red.name},
        )
    else:
        logger.warning(
            f"{red.name}: violated {', '.join(report.violated())}",
            extra={"reduction": red.name},
        )
    return report


def normalize_homotopy(
    alpha: GradedMap,
    beta: GradedMap,
    eta_raw: GradedMap,
    source: Optional[ChainComplex] = None,
    target: Optional[ChainComplex] = None,
    check: bool = True,
    samples: int = 20,
    seed: int = 0,
    max_degree: int = 4,
    name: str = "",
) -> Reduction:
    """Turn a chain homotopy ``[∂, η_raw] = id - βα`` into one with side conditions.

    With ``π = id - βα`` and ``h = π η_raw π`` the result uses ``η = h∂h``.

    Raises:
        ReductionError: ``αβ = id`` or the homotopy identity fails on a sample.
    """
    source = source or alpha.source
    target = target or alpha.target
    if source is None or target is None:
        raise ReductionError("normalize_homotopy needs source and target complexes")
    name = name or "normalized"
    rlinear = alpha.rlinear and beta.rlinear and eta_raw.rlinear
    if check:
        raw = Reduction(source, target, alpha, beta, eta_raw, rlinear, name=f"{name}.raw")
        report = validate_reduction(
            raw,
            samples=samples,
            seed=seed,
            max_degree=max_degree,
            identities=("alpha_beta", "homotopy"),
        )
        if not report.ok:
            first = report.violations[0]
            raise ReductionError(
                f"{name}: precondition {first.identity} fails in degree {first.degree}",
                identity=first.identity,
                witness=first.witness,
            )
    pi = GradedMap.identity(source) - beta @ alpha
    h = pi @ eta_raw @ pi
    eta = h @ source.differential() @ h
    return Reduction(
        source,
        target,
        alpha,
        beta,
        eta.renamed("eta"),
        rlinear=rlinear,
        name=name,
    )


def contraction_from_filler(
    complex_: FreeComplex,
    filler: CycleFiller,
    projection: Optional[GradedMap] = None,
    retraction: Optional[Tuple[GradedMap, GradedMap]] = None,
    name: str = "sigma",
) -> GradedMap:
    """R-linear contraction ``σ`` with ``[∂, σ] = id`` on an acyclic subcomplex.

    The subcomplex is the image of ``projection`` (the whole complex when
    omitted). On a basis element ``b`` with ``x = projection(b)`` the value is
    ``σb = fill(x - σ∂x)``; lower degrees are reached recursively and cached.

    ``retraction = (include, project)`` presents ``complex_`` as a retract of
    the free complex ``include.target``; the filler then lives on that complex
    and the result is ``project ∘ σ ∘ include``.

    Raises:
        FillerError: the filler returned a chain with the wrong boundary.
    """
    if retraction is not None:
        include, project = retraction
        free = include.target
        if not isinstance(free, FreeComplex):
            raise InvalidComplexError("a retraction must include into a free complex")
        sigma = contraction_from_filler(free, filler, projection=projection, name=name)
        return (project @ sigma @ include).renamed(name)
    if not isinstance(complex_, FreeComplex):
        raise InvalidComplexError(f"{complex_.name} is not presented by an R-basis")

    def on_label(label):
        x = complex_.embed(label)
        if projection is not None:
            x = projection(x)
        z = x - sigma(complex_.boundary(x))
        try:
            return filler(z)
        except FillerError as exc:
            raise FillerError(
                f"{name}: cannot contract basis element {label!r}: {exc}",
                witness=exc.witness,
            ) from exc

    sigma = GradedMap.rlinear_on_labels(complex_, complex_, 1, on_label, name=name)
    return sigma


def _check_section(
    alpha: GradedMap, beta0: GradedMap, check_degree: Optional[int]
) -> None:
    """Exact check of ``αβ₀ = id`` on every target basis element."""
    target = alpha.target
    if not target.has_basis:
        rng = random.Random(0)
        degrees = range(0, (check_degree if check_degree is not None else 4) + 1)
        candidates = ((n, target.random_chain(rng, n)) for n in degrees for _ in range(10))
    else:
        bound = check_degree
        if bound is None:
            bound = target.max_degree if target.max_degree is not None else 6
        elif target.max_degree is not None:
            bound = min(bound, target.max_degree)
        candidates = (
            (n, Chain.basis(cell)) for n in range(0, bound + 1) for cell in target.cells(n)
        )
    for n, y in candidates:
        if alpha(beta0(y)) != y:
            raise ReductionError(
                f"alpha∘beta0 is not the identity in degree {n}",
                identity="alpha_beta",
                witness=_witness(y),
            )


def build_reduction(
    alpha: GradedMap,
    beta0: GradedMap,
    filler: CycleFiller,
    check_degree: Optional[int] = None,
    name: str = "",
) -> Reduction:
    """Reduction from an R-linear chain map and an R-linear section.

    ``β₀`` need not be a chain map. With ``σ`` the contraction of ``ker α``
    (projecting by ``id - β₀α``) the result is ``β = β₀ - σ[∂, β₀]`` and
    ``η = η'∂η'`` for ``η' = σ(id - βα)``.

    Args:
        alpha: Chain map ``source → target`` whose kernel the filler fills.
        beta0: Section with ``αβ₀ = id``.
        filler: Fills cycles of ``ker α``; its lifts must stay in ``ker α``.
        check_degree: Bound for the exact ``αβ₀ = id`` check.
        name: Label for reports.

    Raises:
        ReductionError: ``αβ₀ ≠ id`` on a basis element.
    """
    source, target = alpha.source, alpha.target
    if source is None or target is None:
        raise ReductionError("build_reduction needs alpha with source and target")
    name = name or f"{source.name}=>{target.name}"
    _check_section(alpha, beta0, check_degree)

    identity = GradedMap.identity(source)
    projection = identity - beta0 @ alpha
    sigma = contraction_from_filler(source, filler, projection=projection, name=f"sigma_{name}")
    defect = graded_commutator(beta0)
    beta = beta0 - sigma @ defect
    eta_prime = sigma @ (identity - beta @ alpha)
    eta = eta_prime @ source.differential() @ eta_prime
    logger.debug(f"built reduction {name}", extra={"reduction": name})
    return Reduction(
        source,
        target,
        alpha,
        beta.renamed("beta"),
        eta.renamed("eta"),
        rlinear=alpha.rlinear and beta0.rlinear,
        name=name,
    )
