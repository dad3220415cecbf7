"""Test bar constructions, their ranks and the reduction onto the module."""

import pytest

from equichain.algebra import Chain, cyclic_group, group_ring
from equichain.bar import (
    bar_basis,
    bar_complex,
    bar_rank,
    bar_reduction,
    bm_retract_data,
    perturbed_bar,
    strict_action,
    trivial_action,
)
from equichain.complexes import graded_commutator, point_complex
from equichain.errors import InvalidComplexError
from equichain.pipeline import bn_rank
from equichain.reduction import validate_reduction
from equichain.workbench import circle_complex, gen_lens_complex


@pytest.fixture
def lens():
    """Periodic resolution of Z/2 in degrees 0..3."""
    return gen_lens_complex(2, 2)


def test_bar_boundary_squares_to_zero(lens):
    """Test d∘d = 0 on every label of B(R, R, M) up to degree 4."""
    bar = bar_complex(lens, max_degree=4)
    for n in range(2, 5):
        for label in bar.labels(n):
            assert not bar.boundary(bar.boundary(bar.embed(label))), label


def test_strict_action_gives_the_classical_bar(lens):
    """Test that the perturbed bar of a strict module is B(R, R, M)."""
    classical = bar_complex(lens)
    perturbed = perturbed_bar(lens, strict_action(lens))
    for n in range(4):
        assert classical.labels(n) == perturbed.labels(n)
        for label in classical.labels(n):
            assert classical.label_boundary(label) == perturbed.label_boundary(label)


def test_words_keep_unit_entries(lens):
    """Test labels are (tail, x) with unnormalized tails."""
    bar = bar_complex(lens)
    labels = bar_basis(bar, 1)
    assert ((0,), (0, (0,))) in labels
    assert ((), (1, (1,))) in labels
    assert bar_rank(bar, 1) == 2 * 2 + 2


@pytest.mark.parametrize("order", [2, 3])
def test_rank_formula(order):
    """Test rk (BN)_n = Σ_m |G|^m rk N_(n-m) for trivial actions."""
    ring = group_ring(cyclic_group(order))
    for base, ranks in ((point_complex(), [1]), (circle_complex(), [1, 1])):
        bar = perturbed_bar(base, trivial_action(base, ring), max_degree=4)
        for n in range(5):
            assert bar.label_rank(n) == bn_rank(n, ranks, order)


def test_bar_of_a_circle_in_degree_two():
    """Test the rank example 2·1 + 4·1 = 6."""
    ring = group_ring(cyclic_group(2))
    circle = circle_complex()
    bar = perturbed_bar(circle, trivial_action(circle, ring))
    assert bar.label_rank(2) == 6


def test_retract_data(lens):
    """Test eps0 zeta0 = id and [d, eta0] = id - zeta0 eps0 on the classical bar."""
    action = strict_action(lens)
    bar = perturbed_bar(lens, action)
    epsilon, zeta, eta = bm_retract_data(lens, action, bar)
    for n in range(3):
        for cell in lens.cells(n):
            x = Chain.basis(cell)
            assert epsilon(zeta(x)) == x
    commutator = graded_commutator(eta)
    for n in range(3):
        for cell in bar.cells(n):
            x = Chain.basis(cell)
            assert commutator(x) == x - zeta(epsilon(x)), cell


def test_bar_reduction_is_valid(lens):
    """Test the R-linear reduction B(R, R, M) ⇒ M."""
    red = bar_reduction(lens)
    assert red.rlinear
    report = validate_reduction(red, samples=15, seed=3, max_degree=2)
    assert report.ok, report.violated()


def test_bar_reduction_section(lens):
    """Test beta sends a basis element to 1 ⊗ it plus terms in longer words."""
    red = bar_reduction(lens)
    x = lens.embed((1,))
    assert red.alpha(red.beta(x)) == x


def test_bar_needs_a_module():
    """Test that a complex without an action has no bar construction."""
    with pytest.raises(InvalidComplexError):
        bar_complex(circle_complex())
    with pytest.raises(InvalidComplexError):
        strict_action(point_complex())
