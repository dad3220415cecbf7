"""Test the cofibrant replacement R∞ and its filtration reductions."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equichain.algebra import (
    Chain,
    RingElement,
    cone_algebra,
    cyclic_group,
    group_ring,
    symmetric_group,
)
from equichain.errors import ReductionError
from equichain.reduction import validate_reduction
from equichain.rinfty import (
    RInfty,
    filtration_reduction,
    rinfty_diff,
    rinfty_mul,
    rinfty_to_r,
)

GROUPS = {
    "Z/2": lambda: cyclic_group(2),
    "Z/3": lambda: cyclic_group(3),
    "S3": lambda: symmetric_group(3),
}


@pytest.fixture
def z3():
    """R∞ for the group ring of Z/3."""
    return RInfty(group_ring(cyclic_group(3)))


def test_unit_relations(z3):
    """Test that (1) disappears and longer tuples containing 1 vanish."""
    assert z3.normalize_key(((0,), (1, 2))) == ((1, 2),)
    assert z3.normalize_key(((1, 0),)) is None
    assert z3.tuple_element(0) == z3.one()
    assert z3.tuple_element(2, 0) == 0


def test_degrees_and_lengths(z3):
    """Test |(r0..rm)| = m + Σ|ri| and lengths add over products."""
    key = ((1,), (1, 2))
    assert z3.degree_of_key(key) == 1
    assert RInfty.length_of_key(key) == 3
    assert z3.length(Chain.basis(key) + Chain.basis(((2,),))) == 3


def test_differential_of_a_pair(z3):
    """Test d(g, h) = (gh) - (g)(h) over a group ring."""
    assert z3.diff(z3.tuple_element(1, 1)) == Chain({((2,),): 1, ((1,), (1,)): -1})
    assert z3.diff(z3.tuple_element(1, 2)) == Chain({(): 1, ((1,), (2,)): -1})


@pytest.mark.parametrize("group", sorted(GROUPS))
def test_square_zero_over_group_rings(group):
    """Test d∘d = 0 on every basis product up to degree 3."""
    algebra = RInfty(group_ring(GROUPS[group]()))
    for n in range(4):
        for key in algebra.cells(n, n + 1):
            assert not algebra.diff(algebra.diff(Chain.basis(key))), key


@pytest.mark.parametrize("group", sorted(GROUPS))
def test_square_zero_on_generator_tuples(group):
    """Test d∘d = 0 on every single tuple (r0, ..., rm) up to degree 5."""
    ring = group_ring(GROUPS[group]())
    algebra = RInfty(ring)
    nonunit = [g for g in ring.generators if g != ring.unit]
    checked = 0
    for n in range(6):
        for entries in itertools.product(nonunit, repeat=n + 1):
            assert algebra.degree_of_key((entries,)) == n
            assert not algebra.diff(algebra.diff(algebra.tuple_element(*entries))), entries
            checked += 1
    assert checked == sum(len(nonunit) ** (n + 1) for n in range(6))


def test_square_zero_over_the_cone():
    """Test d∘d = 0 when the dga has a nonzero differential."""
    algebra = RInfty(cone_algebra())
    for n in range(4):
        for key in algebra.cells(n, n + 1):
            assert not algebra.diff(algebra.diff(Chain.basis(key))), key


@given(st.data())
@settings(max_examples=40, deadline=None)
def test_differential_is_a_derivation(data):
    """Test d(ab) = (da)b + (-1)^{|a|} a(db) on random basis products."""
    algebra = RInfty(group_ring(cyclic_group(3)))
    n = data.draw(st.integers(0, 2))
    m = data.draw(st.integers(0, 2))
    a = Chain.basis(data.draw(st.sampled_from(algebra.cells(n, 3))))
    b = Chain.basis(data.draw(st.sampled_from(algebra.cells(m, 3))))
    lhs = algebra.diff(algebra.mul(a, b))
    rhs = algebra.mul(algebra.diff(a), b) + algebra.mul(a, algebra.diff(b)) * (-1) ** n
    assert lhs == rhs


def test_projection_on_level_three(z3):
    """Test p3((g)(h,k)) = (gh,k) - (g,hk) and p3((g,h)(k)) = 0."""
    step = z3.filtration_step(3)
    assert step.alpha(Chain.basis(((1,), (1, 1)))) == Chain({((2, 1),): 1, ((1, 2),): -1})
    assert step.alpha(Chain.basis(((1, 1), (1,)))) == 0


def test_projection_on_level_two(z3):
    """Test p2((g)(h)) = (gh)."""
    step = z3.filtration_step(2)
    assert step.alpha(Chain.basis(((1,), (1,)))) == Chain.basis(((2,),))
    assert step.alpha(Chain.basis(((1,), (2,)))) == z3.one()


def test_homotopy_on_level_three(z3):
    """Test eta3 merges the first factor into the second and ignores shorter products."""
    eta = z3.eta_level(3)
    assert eta(Chain.basis(((1,), (2, 1)))) == Chain.basis(((1, 2, 1),), -1)
    assert eta(Chain.basis(((1,), (2,)))) == 0
    assert eta(Chain.basis(((1, 2), (1,)))) == 0


def test_filtration_steps_start_at_two(z3):
    """Test the step bounds."""
    with pytest.raises(ReductionError):
        z3.filtration_step(1)
    with pytest.raises(ReductionError):
        z3.filtration_reduction(0)


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_filtration_reductions_are_valid(d):
    """Test R^d ⇒ R satisfies all reduction identities."""
    algebra = RInfty(group_ring(cyclic_group(2)))
    report = validate_reduction(algebra.filtration_reduction(d), samples=20, max_degree=2)
    assert report.ok, report.violated()


def test_to_r_kills_longer_tuples(z3):
    """Test the dga map R∞ → R."""
    assert z3.to_r(Chain.basis(((1,), (2,)))) == RingElement.basis(0)
    assert z3.to_r(z3.tuple_element(1, 1)) == 0
    assert z3.section(RingElement({1: 2})) == Chain.basis(((1,),), 2)


def test_rinfty_reduction_matches_levels(z3):
    """Test the global projection agrees with the level reductions."""
    red = z3.rinfty_reduction()
    key = ((1,), (1, 1))
    assert red.alpha(Chain.basis(key)) == z3.filtration_reduction(3).alpha(Chain.basis(key))


def test_operation_wrappers(z3):
    """Test the functional forms agree with the methods."""
    a = z3.tuple_element(1, 1)
    b = z3.tuple_element(2)
    assert rinfty_diff(z3, a) == z3.diff(a)
    assert rinfty_mul(z3, a, b) == z3.mul(a, b)
    assert rinfty_to_r(z3, b) == RingElement.basis(2)
    assert filtration_reduction(z3, 2) is z3.filtration_reduction(2)


def test_filtration_complexes(z3):
    """Test R^d is spanned by products of length at most d."""
    r1 = z3.filtration_complex(1)
    assert r1.cells(0) == ((), ((1,),), ((2,),))
    assert r1.rank(1) == 0
    r2 = z3.filtration_complex(2)
    assert r2 is z3.filtration_complex(2)
    assert r2.rank(1) == 4
    assert r2.boundary(Chain.basis(((1, 2),))) == Chain({(): 1, ((1,), (2,)): -1})
