"""Test Smith normal form, quotients by G and (co)homology groups."""

import threading
import time

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Matrix
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DM
from sympy.polys.matrices.normalforms import invariant_factors

from equichain.errors import InvalidComplexError
from equichain.homology import (
    AbelianGroupDescriptor,
    IntegerMatrix,
    QuotientComplex,
    cohomology_groups,
    homology_frame,
    homology_groups,
    homology_table,
    quotient_by_G,
    smith_normal_form,
    sympy_invariant_factors,
)
from equichain.workbench import circle_complex, gen_lens_complex

Z = AbelianGroupDescriptor(1)
ZERO = AbelianGroupDescriptor(0)


def torsion(*factors):
    return AbelianGroupDescriptor(0, factors)


@st.composite
def matrices(draw):
    rows = draw(st.integers(1, 4))
    cols = draw(st.integers(1, 4))
    values = st.lists(st.integers(-6, 6), min_size=cols, max_size=cols)
    return draw(st.lists(values, min_size=rows, max_size=rows))


def test_smith_normal_form_examples():
    """Test invariant factors of small matrices."""
    assert smith_normal_form(IntegerMatrix.from_rows([[2, 4], [6, 8]])) == ((2, 4), 2)
    assert smith_normal_form(IntegerMatrix.from_rows([[2, 0], [0, 0]])) == ((2,), 1)
    assert smith_normal_form(IntegerMatrix.from_rows([[1, 2], [3, 4]])).factors == (1, 2)
    assert smith_normal_form(IntegerMatrix.from_rows([[2, 0], [0, 3]])).factors == (1, 6)
    assert smith_normal_form(IntegerMatrix.zeros(3, 2)) == ((), 0)


def _sympy_factors(rows):
    return tuple(sorted(abs(int(f)) for f in invariant_factors(DM(rows, ZZ)) if f))


@st.composite
def wide_matrices(draw):
    rows = draw(st.integers(1, 7))
    cols = draw(st.integers(1, 7))
    values = st.lists(st.integers(-20, 20), min_size=cols, max_size=cols)
    return draw(st.lists(values, min_size=rows, max_size=rows))


def test_smith_normal_form_of_a_known_matrix():
    """Test a 4x4 matrix whose Smith form is diag(1, 10, 30, 0)."""
    rows = [[12, 6, 4, 8], [3, 9, 6, 12], [2, 16, 14, 28], [20, 10, 10, 20]]
    matrix = IntegerMatrix.from_rows(rows)
    assert smith_normal_form(matrix) == ((1, 10, 30), 3)
    assert smith_normal_form(matrix, certify=True) == ((1, 10, 30), 3)
    assert _sympy_factors(rows) == (1, 10, 30)


@given(wide_matrices())
@settings(max_examples=150, deadline=None)
def test_smith_normal_form_agrees_with_sympy(rows):
    """Test invariant factors and rank against sympy over ZZ."""
    form = smith_normal_form(IntegerMatrix.from_rows(rows))
    expected = _sympy_factors(rows)
    assert form.factors == expected
    assert form.rank == len(expected)


def test_domain_matrix_conversion():
    """Test the sympy view of a sparse matrix."""
    rows = [[0, 2, 0], [-3, 0, 0]]
    matrix = IntegerMatrix.from_rows(rows)
    assert matrix.to_domain_matrix().shape == (2, 3)
    assert matrix.to_domain_matrix().to_Matrix() == Matrix(rows)
    assert sympy_invariant_factors(matrix) == (1, 6)
    assert sympy_invariant_factors(IntegerMatrix.zeros(0, 3)) == ()
    assert sympy_invariant_factors(IntegerMatrix.zeros(2, 2)) == ()


def test_certified_smith_normal_form():
    """Test the certified path agrees on the examples."""
    for rows, expected in (([[2, 4], [6, 8]], (2, 4)), ([[2, 0], [0, 0]], (2,))):
        form = smith_normal_form(IntegerMatrix.from_rows(rows), certify=True)
        assert form.factors == expected


@given(matrices(), st.randoms(use_true_random=False))
@settings(max_examples=80, deadline=None)
def test_smith_normal_form_invariance(rows, rnd):
    """Test invariance under permutations and transposition, and the certificate."""
    matrix = IntegerMatrix.from_rows(rows)
    form = smith_normal_form(matrix)
    row_order = list(range(matrix.rows))
    col_order = list(range(matrix.cols))
    rnd.shuffle(row_order)
    rnd.shuffle(col_order)
    assert smith_normal_form(matrix.permuted(row_order, col_order)) == form
    assert smith_normal_form(matrix.transpose()) == form
    assert smith_normal_form(matrix, certify=True) == form
    for a, b in zip(form.factors, form.factors[1:]):
        assert b % a == 0


def test_integer_matrix_basics():
    """Test construction, products and bounds."""
    a = IntegerMatrix.from_rows([[1, 2], [0, 1]])
    b = IntegerMatrix.from_rows([[1, -2], [0, 1]])
    assert (a @ b).to_rows() == [[1, 0], [0, 1]]
    assert a.transpose().to_rows() == [[1, 0], [2, 1]]
    assert IntegerMatrix(2, 2, {(0, 0): 0}).is_zero
    with pytest.raises(ValueError, match="outside"):
        IntegerMatrix(1, 1, {(1, 0): 3})
    with pytest.raises(ValueError, match="cannot multiply"):
        a @ IntegerMatrix.zeros(3, 1)


def test_descriptor_formatting():
    """Test the printed form of abelian groups."""
    assert str(ZERO) == "0"
    assert str(Z) == "Z"
    assert str(AbelianGroupDescriptor(2, (2, 4))) == "Z^2 + Z/2 + Z/4"
    assert AbelianGroupDescriptor.from_dict({"rank": 1, "torsion": [3]}) == AbelianGroupDescriptor(
        1, (3,)
    )
    assert ZERO.is_trivial


def test_descriptor_validation():
    """Test torsion must be a divisibility chain of factors at least 2."""
    with pytest.raises(ValueError, match="divisibility"):
        AbelianGroupDescriptor(0, (2, 3))
    with pytest.raises(ValueError, match="at least 2"):
        AbelianGroupDescriptor(0, (1,))
    with pytest.raises(ValueError, match="non-negative"):
        AbelianGroupDescriptor(-1)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_lens_homology(p):
    """Test H_k of the lens quotient is Z, Z/p, 0, Z."""
    quotient = quotient_by_G(gen_lens_complex(p, 2), 3)
    assert [quotient.rank(k) for k in range(5)] == [1, 1, 1, 1, 0]
    assert quotient.differential(2).to_rows() == [[p]]
    assert homology_table(quotient, range(4)) == [Z, torsion(p), ZERO, Z]


@pytest.mark.parametrize("p", [2, 3, 5])
def test_lens_cohomology(p):
    """Test H^k is Z, 0, Z/p, Z, as universal coefficients predict."""
    quotient = quotient_by_G(gen_lens_complex(p, 2), 3)
    assert homology_table(quotient, range(4), cohomology=True) == [Z, ZERO, torsion(p), Z]


def test_quotient_of_a_plain_complex():
    """Test a complex without a ring is taken as it is."""
    quotient = quotient_by_G(circle_complex(), 1)
    assert homology_table(quotient, range(2)) == [Z, Z]


def test_non_complex_is_rejected():
    """Test that d∘d ≠ 0 is detected before computing homology."""
    ones = IntegerMatrix.from_rows([[1]])
    quotient = QuotientComplex.from_ranks("bad", [1, 1, 1], {1: ones, 2: ones})
    with pytest.raises(InvalidComplexError, match="is not zero"):
        homology_groups(quotient, 1)
    with pytest.raises(InvalidComplexError, match="is not zero"):
        cohomology_groups(quotient, 1)


def test_differential_shapes_are_checked():
    """Test matrix dimensions against the bases."""
    with pytest.raises(InvalidComplexError, match="expected 1x2"):
        QuotientComplex.from_ranks("bad", [1, 2], {1: IntegerMatrix.zeros(2, 1)})


def test_missing_differentials_are_zero():
    """Test Z^2 in degree 0 with nothing above."""
    quotient = QuotientComplex.from_ranks("points", [2], {})
    assert homology_groups(quotient, 0) == AbelianGroupDescriptor(2)
    assert homology_groups(quotient, 1) == ZERO


def test_homology_frame():
    """Test the tabular form of a homology table."""
    frame = homology_frame([Z, torsion(2, 4), ZERO], start=1)
    assert list(frame.columns) == ["degree", "rank", "torsion"]
    assert frame["degree"].tolist() == [1, 2, 3]
    assert frame["torsion"].tolist() == ["", "2,4", ""]


def test_quotient_to_dict():
    """Test the serialized quotient."""
    quotient = quotient_by_G(gen_lens_complex(3, 1), 0)
    data = quotient.to_dict()
    assert data["ranks"] == [1, 1]
    assert data["differentials"] == {"1": [[0]]}


def test_smith_forms_are_computed_once_across_threads(monkeypatch):
    """Test concurrent requests for one differential share a single reduction."""
    calls = []
    original = smith_normal_form

    def slow_smith(matrix, certify=False):
        calls.append(matrix.rows)
        time.sleep(0.05)
        return original(matrix, certify=certify)

    monkeypatch.setattr("equichain.homology.smith_normal_form", slow_smith)
    quotient = quotient_by_G(gen_lens_complex(3, 2), 3)
    barrier = threading.Barrier(6)
    results = []

    def worker():
        barrier.wait()
        results.append(quotient.smith(2))

    threads = [threading.Thread(target=worker) for _ in range(6)]
    for thread in threads:
        thread.start()
    for thread in threads:
        thread.join()
    assert len(calls) == 1
    assert results == [((3,), 1)] * 6
