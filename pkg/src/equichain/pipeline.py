"""Pipeline orchestrator for equichain.

From a free G-complex ``M`` and a strong equivalence ``M ⇐ M̃ ⇒ N`` that need
not respect the group action, build the G-linear strong equivalence

    M ⇐ BM ⇐ BM̃ ⇒ BN

and compute the homology of ``BN/G``.
"""

from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

from equichain.bar import (
    RInftyModuleAction,
    bar_complex,
    bar_reduction,
    perturbed_bar,
    strict_action,
)
from equichain.complexes import ChainComplex, FreeComplex
from equichain.config import EquichainConfig
from equichain.errors import PipelineError, TruncationError
from equichain.homology import (
    AbelianGroupDescriptor,
    QuotientComplex,
    cohomology_groups,
    homology_groups,
    quotient_by_G,
)
from equichain.logging_config import get_logger
from equichain.models import ValidationReport
from equichain.reduction import (
    Reduction,
    StrongEquivalence,
    build_reduction,
    compose_reductions,
    validate_reduction,
)
from equichain.transfer import (
    kernel_filler,
    strictify_reduction_maps,
    transfer_basic,
    transfer_easy,
)

logger = get_logger(__name__)


def bn_rank(n: int, ranks: Sequence[int], order: int) -> int:
    """Rank of ``(BN)_n`` over ZG: ``Σ_m |G|^m · rk N_(n-m)``.

    ``ranks[k]`` is the Z-rank of ``N_k``; missing degrees count as zero.

    Examples:
        >>> bn_rank(2, [1, 1, 0], 2)
        6
    """
    total = 0
    for m in range(0, n + 1):
        k = n - m
        if k < len(ranks):
            total += order**m * ranks[k]
    return total


@dataclass
class PipelineResult:
    """The legs of ``M ⇐ BM ⇐ BM̃ ⇒ BN``.

    Attributes:
        left: ``BM ⇒ M``.
        middle: ``BM̃ ⇒ BM``.
        right: ``BM̃ ⇒ BN``.
        target: ``BN``, truncated one degree above ``max_degree``.
        base: ``N`` with the transferred action used to build ``BN``.
        max_degree: Highest degree whose homology the result supports.
        order: ``|G|``.
    """

    left: Reduction
    middle: Reduction
    right: Reduction
    target: FreeComplex
    base: RInftyModuleAction
    max_degree: int
    order: int

    def strong_equivalence(self) -> StrongEquivalence:
        """``M ⇐ BM̃ ⇒ BN`` with the left legs composed."""
        return StrongEquivalence(compose_reductions(self.middle, self.left), self.right)

    def target_ranks(self) -> List[int]:
        return [self.target.label_rank(n) for n in range(self.max_degree + 1)]

    def expected_ranks(self) -> List[int]:
        complex_ = self.base.complex
        ranks = [
            0 if complex_.vanishes_in(k) else complex_.rank(k)
            for k in range(self.max_degree + 1)
        ]
        return [bn_rank(n, ranks, self.order) for n in range(self.max_degree + 1)]

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {
            "max_degree": self.max_degree,
            "order": self.order,
            "left": self.left.name,
            "middle": self.middle.name,
            "right": self.right.name,
            "target": self.target.name,
            "target_ranks": self.target_ranks(),
        }


def _require_bound(complex_: ChainComplex, needed: int) -> None:
    if complex_.max_degree is not None and complex_.max_degree < needed:
        raise TruncationError(complex_.name, needed, complex_.max_degree)


def _middle_action(left: Reduction, module: FreeComplex) -> RInftyModuleAction:
    """The action on M̃ that makes the left leg R∞-linear."""
    source = left.source
    if left.rlinear and source.has_action and source.ring is module.ring:
        return strict_action(source)
    logger.info(f"{left.name} is not R-linear; using the augmentation transfer")
    return transfer_easy(left, strict_action(module))


def equivariant_strong_equivalence(
    module: FreeComplex,
    se: StrongEquivalence,
    max_degree: int,
    check: bool = True,
    samples: int = 20,
    seed: int = 0,
    check_degree: Optional[int] = None,
) -> PipelineResult:
    """G-linear strong equivalence from a non-equivariant one.

    Args:
        module: The free G-complex ``M`` with an R-basis enumeration.
        se: ``M ⇐ M̃ ⇒ N``; ``M̃`` needs a Z-basis, ``N`` need only be a Z-complex.
        max_degree: Highest degree of interest; complexes are enumerated up to
            ``max_degree + 1``.
        check: Validate ``se`` on samples first.
        samples: Samples per degree for that validation.
        seed: Base seed for that validation.
        check_degree: Bound for the exact section checks of the rebuilt legs.

    Raises:
        PipelineError: the input is not a G-complex, ``M̃`` has no basis, or
            ``se`` fails validation.
        TruncationError: one of the complexes is truncated below ``max_degree + 1``.
    """
    if max_degree < 0:
        raise PipelineError(f"max_degree must be non-negative, got {max_degree}")
    if not isinstance(module, FreeComplex) or not module.has_labels:
        raise PipelineError(f"{module.name} is not a free G-complex with a basis")
    ring = module.ring
    if ring.group is None:
        raise PipelineError(f"{module.name} is not a complex over a group ring")
    if se.left.target is not module:
        raise PipelineError(f"the left leg {se.left.name} does not reduce onto {module.name}")
    tilde, base = se.source, se.right.target
    if not tilde.has_basis:
        raise PipelineError(f"{tilde.name} has no basis enumeration")
    if tilde.has_action and tilde.ring is not ring:
        raise PipelineError(f"{tilde.name} is not a complex over {ring.name}")
    bound = max_degree + 1
    for complex_ in (module, tilde, base):
        _require_bound(complex_, bound)
    check_degree = bound if check_degree is None else min(check_degree, bound)

    run_logger = get_logger(__name__, reduction=se.right.name)
    if check:
        report = se.validate(samples=samples, seed=seed, max_degree=min(bound, 4))
        if not report.ok:
            first = report.violations[0]
            raise PipelineError(
                f"strong equivalence fails {first.identity} in degree {first.degree}"
            )
        run_logger.info(f"validated input strong equivalence ({report.checked} checks)")

    action_tilde = _middle_action(se.left, module)
    action_base = transfer_basic(se.right, action_tilde, check=check)

    bar_m = bar_complex(module, max_degree=bound, name=f"B{module.name}")
    bar_tilde = perturbed_bar(tilde, action_tilde, max_degree=bound, name=f"B{tilde.name}~")
    bar_base = perturbed_bar(base, action_base, max_degree=bound, name=f"B{base.name}")
    run_logger.info(f"built bar constructions truncated at degree {bound}")

    alpha_r, beta_r = strictify_reduction_maps(
        se.right, action_tilde, action_base, bar_tilde, bar_base
    )
    right = build_reduction(
        alpha_r.induced(),
        beta_r.induced(),
        kernel_filler(alpha_r, se.right.eta, bar_tilde),
        check_degree=check_degree,
        name=f"{bar_tilde.name}=>{bar_base.name}",
    )
    module_action = strict_action(module)
    alpha_l, beta_l = strictify_reduction_maps(
        se.left, action_tilde, module_action, bar_tilde, bar_m
    )
    middle = build_reduction(
        alpha_l.induced(),
        beta_l.induced(),
        kernel_filler(alpha_l, se.left.eta, bar_tilde),
        check_degree=check_degree,
        name=f"{bar_tilde.name}=>{bar_m.name}",
    )
    left = bar_reduction(module, bar=bar_m, check_degree=check_degree)
    run_logger.info(f"assembled {left.name}, {middle.name} and {right.name}")
    return PipelineResult(
        left=left,
        middle=middle,
        right=right,
        target=bar_base,
        base=action_base,
        max_degree=max_degree,
        order=ring.group.order,
    )


class Pipeline:
    """Runs the equivariant construction and its homology with logging.

    Per-degree homology runs on a thread pool when ``config.parallel`` is set.
    """

    def __init__(self, config: Optional[EquichainConfig] = None):
        self.config = config or EquichainConfig()

    def run(
        self, module: FreeComplex, se: StrongEquivalence, max_degree: int, check: bool = True
    ) -> PipelineResult:
        logger.info(f"Starting pipeline for {module.name} up to degree {max_degree}")
        result = equivariant_strong_equivalence(
            module,
            se,
            max_degree,
            check=check,
            samples=min(self.config.samples_per_degree, 20),
            seed=self.config.seed,
            check_degree=self.config.max_check_degree,
        )
        logger.info(f"Pipeline completed: target ranks {result.target_ranks()}")
        return result

    def quotient(self, result: PipelineResult) -> QuotientComplex:
        return quotient_by_G(result.target, result.max_degree, certify=self.config.certify_snf)

    def homology(
        self,
        result: PipelineResult,
        max_degree: Optional[int] = None,
        cohomology: bool = False,
    ) -> List[AbelianGroupDescriptor]:
        """Descriptors of ``H_k(BN/G)`` (or ``H^k``) for ``k = 0..max_degree``."""
        top = result.max_degree if max_degree is None else max_degree
        if top > result.max_degree:
            raise TruncationError(result.target.name, top + 1, result.max_degree + 1)
        quotient = self.quotient(result)
        return compute_table(quotient, top, cohomology, self.config)

    def validate(
        self, result: PipelineResult, max_degree: Optional[int] = None
    ) -> ValidationReport:
        """Sample every leg's identities, including R-linearity."""
        requested = result.max_degree if max_degree is None else max_degree
        top = min(requested, self.config.max_check_degree)
        report = ValidationReport(name="pipeline", max_degree=top)
        legs = (("left.", result.left), ("middle.", result.middle), ("right.", result.right))
        for prefix, leg in legs:
            report.merge(
                validate_reduction(
                    leg,
                    samples=self.config.samples_per_degree,
                    seed=self.config.seed,
                    max_degree=top,
                ),
                prefix=prefix,
            )
        if report.ok:
            logger.info(f"all legs passed {report.checked} checks")
        else:
            logger.warning(f"pipeline legs violate {report.violated()}")
        return report


def compute_table(
    quotient: QuotientComplex,
    max_degree: int,
    cohomology: bool = False,
    config: Optional[EquichainConfig] = None,
) -> List[AbelianGroupDescriptor]:
    """Per-degree (co)homology, concurrently when ``config.parallel`` is set."""
    config = config or EquichainConfig()
    compute = cohomology_groups if cohomology else homology_groups
    degrees = range(max_degree + 1)
    if not config.parallel:
        return [compute(quotient, k) for k in degrees]
    # Smith forms are the expensive part and independent per degree
    with ThreadPoolExecutor(max_workers=config.max_workers or 1) as executor:
        futures = {
            executor.submit(quotient.smith, k, cohomology): k for k in range(max_degree + 2)
        }
        for future in as_completed(futures):
            future.result()
            k = futures[future]
            logger.debug(f"reduced differential {k}", extra={"degree": k})
    return [compute(quotient, k) for k in degrees]
