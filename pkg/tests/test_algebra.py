"""Test chains, finite groups and dga presentations."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equichain.algebra import (
    Chain,
    DgaPresentation,
    FiniteGroup,
    RingElement,
    cone_algebra,
    cyclic_group,
    degree_sum,
    group_ring,
    symmetric_group,
)
from equichain.errors import DegreeMismatchError, InvalidComplexError

chains = st.dictionaries(st.integers(0, 6), st.integers(-5, 5), max_size=5).map(Chain)


@pytest.fixture
def broken_table():
    """Order-3 table with a two-sided identity that is not associative."""
    return [[0, 1, 2], [1, 0, 1], [2, 2, 0]]


def test_chain_drops_zero_coefficients():
    """Test that zero terms never survive construction or arithmetic."""
    assert Chain({"a": 1, "b": 0}) == Chain.basis("a")
    assert Chain([("a", 2), ("a", -2)]) == 0
    assert not (Chain.basis("x", 3) - Chain.basis("x", 3))
    assert len(Chain({"a": 1, "b": 2}) + Chain({"b": -2})) == 1


def test_chain_iterates_in_sorted_order():
    """Test that terms come out sorted by key."""
    chain = Chain({(2, "b"): 1, (1, "z"): -1, (1, "a"): 4})
    assert [key for key, _ in chain.terms()] == [(1, "a"), (1, "z"), (2, "b")]


def test_chain_pairs_restore_tuple_keys():
    """Test that JSON-style pairs turn nested lists back into tuples."""
    chain = Chain.basis((1, (2, 3)), 5)
    assert chain.to_pairs() == [[5, [1, [2, 3]]]]
    assert Chain.from_pairs(chain.to_pairs()) == chain


def test_chain_apply_is_linear():
    """Test extending a function on keys linearly."""
    chain = Chain({1: 2, 2: -1})
    doubled = chain.apply(lambda key: Chain({key: 1, key + 10: 1}))
    assert doubled == Chain({1: 2, 11: 2, 2: -1, 12: -1})


@given(chains, chains, chains)
@settings(max_examples=60, deadline=None)
def test_chain_addition_is_an_abelian_group(a, b, c):
    """Test associativity, commutativity and inverses of chain addition."""
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert (a + b) - b == a
    assert a + (-a) == 0
    assert 3 * a == a + a + a


def test_cyclic_group_arithmetic():
    """Test the multiplication table of Z/4."""
    group = cyclic_group(4)
    assert group.order == 4
    assert group.multiply(3, 3) == 2
    assert group.inverse(1) == 3
    assert group.violations() == []


def test_symmetric_group_is_nonabelian():
    """Test S3 satisfies the axioms and does not commute."""
    group = symmetric_group(3)
    assert group.order == 6
    assert group.violations() == []
    assert any(
        group.multiply(a, b) != group.multiply(b, a)
        for a in group.elements()
        for b in group.elements()
    )


def test_broken_table_reports_associativity(broken_table):
    """Test that the first failing triple is named."""
    group = FiniteGroup(broken_table, 0, name="broken")
    assert group.violations() == ["associativity fails for triple (1, 1, 2)"]
    with pytest.raises(InvalidComplexError, match="associativity"):
        group.check()


def test_malformed_tables_are_rejected():
    """Test shape checks on construction."""
    with pytest.raises(InvalidComplexError, match="length"):
        FiniteGroup([[0, 1], [1]])
    with pytest.raises(InvalidComplexError, match="not an element"):
        FiniteGroup([[0, 5], [1, 0]])
    with pytest.raises(InvalidComplexError, match="empty"):
        FiniteGroup([])
    with pytest.raises(InvalidComplexError):
        cyclic_group(0)


def test_group_ring_multiplication_and_augmentation():
    """Test ZG products follow the group law and the augmentation sums coefficients."""
    ring = group_ring(cyclic_group(3))
    assert ring.group is not None
    assert ring.multiply(ring.element(1), ring.element(2)) == ring.one()
    assert ring.augment(RingElement({1: 2, 2: -1})) == 1
    assert ring.has_zero_differential
    assert ring.violations() == []


def test_cone_algebra_axioms():
    """Test the cone dga: dy = x and Leibniz holds on all pairs."""
    ring = cone_algebra()
    assert ring.violations() == []
    assert ring.d(2) == RingElement.basis(1)
    assert ring.generators_in_degree(0) == (0, 1)


def test_inhomogeneous_element_has_no_degree():
    """Test that mixing degrees is detected."""
    ring = cone_algebra()
    with pytest.raises(DegreeMismatchError):
        ring.degree_of(RingElement({0: 1, 2: 1}))
    assert ring.degree_of(RingElement()) is None


def test_unit_must_have_degree_zero():
    """Test presentation checks on the unit generator."""
    with pytest.raises(InvalidComplexError, match="degree 0"):
        DgaPresentation(degrees=(1,), unit=0, product=lambda g, h: RingElement())
    with pytest.raises(InvalidComplexError, match="not a generator"):
        DgaPresentation(degrees=(0,), unit=3, product=lambda g, h: RingElement())


def test_integers_presentation():
    """Test Z as a dga with a single generator."""
    ring = DgaPresentation.integers()
    assert ring.multiply(ring.one(), ring.element(0, 3)) == RingElement.basis(0, 3)
    assert ring.augment(ring.element(0, 4)) == 4


def test_degree_sum():
    """Test summed degrees over inclusive index ranges."""
    assert degree_sum([], 0, -1) == 0
    assert degree_sum([1, 2, 0], 0, 2) == 3
    assert degree_sum([1, 2, 0], 1, 1) == 2
    ring = cone_algebra()
    assert degree_sum([2, 1, 2], 0, 2, ring=ring) == 2
    assert degree_sum([RingElement.basis(2), RingElement()], 0, 1, ring=ring) == 1
    assert degree_sum([0, 1, 2], 0, 2, ring=group_ring(cyclic_group(3))) == 0
