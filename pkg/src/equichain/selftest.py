"""Deterministic self-checks of the whole construction.

Every check draws its samples from ``derive_seed(seed, name)``, so two runs
with the same seed and degree bound produce identical reports. Reports carry
no timestamps.
"""

import itertools
import random
from typing import Any, Callable, Dict, List, Optional, Tuple

from equichain.algebra import Chain, cone_algebra, cyclic_group, group_ring, symmetric_group
from equichain.bar import bar_reduction, perturbed_bar, strict_action, trivial_action
from equichain.complexes import graded_commutator, point_complex
from equichain.config import EquichainConfig
from equichain.errors import EquichainError
from equichain.homology import AbelianGroupDescriptor, homology_table, quotient_by_G
from equichain.ids import derive_seed, report_digest
from equichain.logging_config import get_logger
from equichain.models import CheckResult, SelftestReport
from equichain.pipeline import Pipeline, bn_rank
from equichain.reduction import Reduction, StrongEquivalence, validate_reduction
from equichain.rinfty import RInfty
from equichain.transfer import (
    ShuffleOperator,
    check_structure_equations,
    extend_nullhomotopic,
    shuffle_differential,
    strictify_reduction_maps,
    transfer_basic,
)
from equichain.workbench import circle_complex, gen_bar_resolution, gen_lens_complex

logger = get_logger(__name__)

Check = Callable[[int, int, EquichainConfig], CheckResult]


def expected_group_homology(order: int, k: int) -> AbelianGroupDescriptor:
    """``H_k(Z/n)``: Z in degree 0, Z/n in odd degrees, 0 otherwise."""
    if k == 0:
        return AbelianGroupDescriptor(1)
    return AbelianGroupDescriptor(0, (order,) if k % 2 else ())


def check_group_axioms(seed: int, max_degree: int, config: EquichainConfig) -> CheckResult:
    groups = [cyclic_group(2), cyclic_group(3), symmetric_group(3)]
    for group in groups:
        problems = group.violations()
        if problems:
            return CheckResult("group_axioms", False, len(groups), f"{group.name}: {problems[0]}")
    ring_problems = cone_algebra().violations()
    if ring_problems:
        return CheckResult("group_axioms", False, len(groups), f"cone: {ring_problems[0]}")
    return CheckResult("group_axioms", True, len(groups) + 1)


def check_rinfty_square_zero(seed: int, max_degree: int, config: EquichainConfig) -> CheckResult:
    checked = 0
    rings = [group_ring(cyclic_group(2)), group_ring(cyclic_group(3)), cone_algebra()]
    rings.append(group_ring(symmetric_group(3)))
    for ring in rings:
        algebra = RInfty(ring)
        top = min(max_degree, 2 if ring.name.startswith("Z[S") else 4)
        for n in range(top + 1):
            for key in algebra.cells(n, n + 1):
                checked += 1
                if algebra.diff(algebra.diff(Chain.basis(key))):
                    return CheckResult(
                        "rinfty_square_zero", False, checked, f"{ring.name}: d^2 {key} != 0"
                    )
    return CheckResult("rinfty_square_zero", True, checked)


def check_bar_square_zero(seed: int, max_degree: int, config: EquichainConfig) -> CheckResult:
    rng = random.Random(derive_seed(seed, "bar_square_zero"))
    top = min(max_degree, 4)
    module, se = gen_bar_resolution(cyclic_group(2), top)
    action = strict_action(module)
    transferred = transfer_basic(se.right, action, check=False)
    complexes = [
        perturbed_bar(module, action, max_degree=top + 1),
        perturbed_bar(se.right.target, transferred, max_degree=top + 1),
        bar_reduction(gen_lens_complex(3, 2)).source,
    ]
    checked = 0
    for complex_ in complexes:
        for n in range(1, top + 1):
            for _ in range(max(config.samples_per_degree // 5, 1)):
                x = complex_.random_chain(rng, n)
                checked += 1
                if complex_.boundary(complex_.boundary(x)):
                    return CheckResult(
                        "bar_square_zero", False, checked, f"{complex_.name}: d^2 != 0 on {x!r}"
                    )
    return CheckResult("bar_square_zero", True, checked)


def _reduction_check(
    name: str,
    reductions: List[Reduction],
    seed: int,
    max_degree: int,
    config: EquichainConfig,
) -> CheckResult:
    checked = 0
    for red in reductions:
        report = validate_reduction(
            red, samples=config.samples_per_degree, seed=seed, max_degree=max_degree
        )
        checked += report.checked
        if not report.ok:
            first = report.violations[0]
            return CheckResult(
                name, False, checked, f"{red.name}: {first.identity} in degree {first.degree}"
            )
    return CheckResult(name, True, checked)


def check_filtration_reductions(
    seed: int, max_degree: int, config: EquichainConfig
) -> CheckResult:
    algebra = RInfty(group_ring(cyclic_group(2)))
    reductions = [algebra.filtration_reduction(d) for d in range(1, 5)]
    return _reduction_check(
        "filtration_reductions", reductions, seed, min(max_degree, 3), config
    )


def check_bar_reduction(seed: int, max_degree: int, config: EquichainConfig) -> CheckResult:
    top = min(max_degree, 3)
    reductions = [bar_reduction(gen_lens_complex(2, 2))]
    return _reduction_check("bar_reduction", reductions, seed, top, config)


def check_shuffle_differential(
    seed: int, max_degree: int, config: EquichainConfig
) -> CheckResult:
    group = cyclic_group(2)
    module, se = gen_bar_resolution(group, 3)
    sh = ShuffleOperator(se.right, strict_action(module))
    checked = 0
    for m in range(0, 3):
        for tup in itertools.product(group.elements(), repeat=m + 1):
            commutator = graded_commutator(sh.as_map(tup))
            for n in range(0, 2):
                for cell in module.cells(n):
                    x = Chain.basis(cell)
                    checked += 1
                    if commutator(x) != shuffle_differential(sh, tup, x):
                        return CheckResult(
                            "shuffle_differential", False, checked, f"tuple {tup} on {cell}"
                        )
    return CheckResult("shuffle_differential", True, checked)


def check_structure_maps(seed: int, max_degree: int, config: EquichainConfig) -> CheckResult:
    module, se = gen_bar_resolution(cyclic_group(2), 3)
    action = strict_action(module)
    alpha, beta = strictify_reduction_maps(se.right, action)
    extension = extend_nullhomotopic(se.right.eta, action)
    checked = 0
    for f in (alpha, beta, extension):
        report = check_structure_equations(
            f,
            max_length=2,
            samples=max(config.samples_per_degree // 10, 2),
            seed=seed,
            max_degree=2,
        )
        checked += report.checked
        if not report.ok:
            return CheckResult(
                "structure_equations", False, checked, f"{f.name}: {report.violated()[0]}"
            )
    return CheckResult("structure_equations", True, checked)


def check_rank_formula(seed: int, max_degree: int, config: EquichainConfig) -> CheckResult:
    top = min(max_degree, 5)
    checked = 0
    for order in (2, 3):
        ring = group_ring(cyclic_group(order))
        for base, ranks in ((point_complex(), [1]), (circle_complex(), [1, 1])):
            bar = perturbed_bar(base, trivial_action(base, ring), max_degree=top)
            for n in range(top + 1):
                checked += 1
                expected = bn_rank(n, ranks, order)
                if bar.label_rank(n) != expected:
                    return CheckResult(
                        "rank_formula",
                        False,
                        checked,
                        f"Z/{order}, {base.name}, degree {n}: "
                        f"{bar.label_rank(n)} != {expected}",
                    )
    return CheckResult("rank_formula", True, checked)


def check_group_homology(seed: int, max_degree: int, config: EquichainConfig) -> CheckResult:
    top = min(max_degree, 4)
    group = cyclic_group(2)
    module, se = gen_bar_resolution(group, top)
    pipeline = Pipeline(config)
    result = pipeline.run(module, se, top)
    table = pipeline.homology(result, top)
    for k, descriptor in enumerate(table):
        if descriptor != expected_group_homology(group.order, k):
            return CheckResult("group_homology", False, k + 1, f"H_{k} = {descriptor}")
    return CheckResult("group_homology", True, len(table))


def check_lens_homology(seed: int, max_degree: int, config: EquichainConfig) -> CheckResult:
    top = min(max_degree, 3)
    module = gen_lens_complex(2, 2)
    pipeline = Pipeline(config)
    result = pipeline.run(module, StrongEquivalence.trivial(module), top)
    via_pipeline = pipeline.homology(result, top)
    direct = homology_table(quotient_by_G(module, top), range(top + 1))
    if via_pipeline != direct:
        return CheckResult(
            "lens_homology",
            False,
            top + 1,
            f"{[str(d) for d in via_pipeline]} != {[str(d) for d in direct]}",
        )
    return CheckResult("lens_homology", True, top + 1)


CHECKS: Tuple[Tuple[str, Check], ...] = (
    ("group_axioms", check_group_axioms),
    ("rinfty_square_zero", check_rinfty_square_zero),
    ("bar_square_zero", check_bar_square_zero),
    ("filtration_reductions", check_filtration_reductions),
    ("bar_reduction", check_bar_reduction),
    ("shuffle_differential", check_shuffle_differential),
    ("structure_equations", check_structure_maps),
    ("rank_formula", check_rank_formula),
    ("group_homology", check_group_homology),
    ("lens_homology", check_lens_homology),
)


def run_selftest(
    seed: int,
    max_degree: int,
    config: Optional[EquichainConfig] = None,
    only: Optional[List[str]] = None,
) -> SelftestReport:
    """Run the named checks in a fixed order.

    A check that raises is recorded as failed with the error message.

    Raises:
        EquichainError: ``only`` names a check that does not exist.
    """
    if only:
        known = [name for name, _ in CHECKS]
        unknown = sorted(set(only) - set(known))
        if unknown:
            raise EquichainError(
                f"unknown selftest checks: {', '.join(unknown)} "
                f"(available: {', '.join(known)})"
            )
    config = config or EquichainConfig()
    report = SelftestReport(seed=seed, max_degree=max_degree)
    for name, check in CHECKS:
        if only and name not in only:
            continue
        check_logger = get_logger(__name__, check=name, seed=seed)
        try:
            result = check(seed, max_degree, config)
        except EquichainError as e:
            result = CheckResult(name, False, 0, f"{type(e).__name__}: {e}")
        if result.ok:
            check_logger.info(f"{name}: ok ({result.checked} checked)")
        else:
            check_logger.warning(f"{name}: FAILED {result.detail}")
        report.checks.append(result)
    return report


def report_payload(report: SelftestReport) -> Dict[str, Any]:
    """The report as JSON data with its digest."""
    payload = report.to_dict()
    payload["digest"] = report_digest(payload)
    return payload
