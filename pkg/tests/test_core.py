import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pairedgraph import (
    Assignment,
    PairedSample,
    PooledIndex,
    ValidationError,
    identity_assignment,
    pool,
)


def test_pool_single_pair():
    sample = PairedSample(x=[[1.0, 2.0]], y=[[3.0, 4.0]])
    pooled, index = pool(sample)
    assert pooled.tolist() == [[1.0, 2.0], [3.0, 4.0]]
    assert index.partner(0) == 1
    assert index.partner(1) == 0


def test_pool_two_pairs_partner_map():
    sample = PairedSample(x=np.zeros((2, 1)), y=np.ones((2, 1)))
    _, index = pool(sample)
    assert [index.partner(i) for i in range(4)] == [2, 3, 0, 1]


def test_pool_row_layout_round_trips():
    rng = np.random.default_rng(0)
    sample = PairedSample(x=rng.standard_normal((7, 3)), y=rng.standard_normal((7, 3)))
    pooled, _ = pool(sample)
    assert np.array_equal(pooled[:7], sample.x)
    assert np.array_equal(pooled[7:], sample.y)


@given(st.integers(min_value=1, max_value=50))
def test_partner_is_an_involution(n):
    index = PooledIndex(n)
    for i in range(2 * n):
        assert index.partner(i) != i
        assert index.partner(index.partner(i)) == i
    partner = index.partner_array()
    assert np.array_equal(partner[partner], np.arange(2 * n))


def test_identity_assignment_layout():
    assert identity_assignment(PooledIndex(2)).labels.tolist() == [1, 1, 2, 2]
    assert identity_assignment(PooledIndex(1)).labels.tolist() == [1, 2]


@given(st.integers(min_value=1, max_value=30))
def test_identity_assignment_is_balanced(n):
    labels = identity_assignment(PooledIndex(n)).labels
    assert np.count_nonzero(labels == 1) == n
    assert np.count_nonzero(labels == 2) == n


def test_assignment_rejects_equal_pair_labels():
    with pytest.raises(ValidationError):
        Assignment(np.array([1, 1, 1, 2], dtype=np.int8))


def test_assignment_rejects_bad_values():
    with pytest.raises(ValidationError):
        Assignment(np.array([1, 0, 2, 3], dtype=np.int8))


def test_sample_rejects_nan_with_location():
    x = np.zeros((3, 2))
    x[1, 1] = np.nan
    with pytest.raises(ValidationError, match="row 2, column 2"):
        PairedSample(x=x, y=np.zeros((3, 2)))


def test_sample_rejects_inf():
    y = np.zeros((2, 2))
    y[0, 0] = np.inf
    with pytest.raises(ValidationError, match="y"):
        PairedSample(x=np.zeros((2, 2)), y=y)


def test_sample_rejects_shape_mismatch():
    with pytest.raises(ValidationError):
        PairedSample(x=np.zeros((3, 2)), y=np.zeros((2, 2)))


def test_types_are_immutable():
    sample = PairedSample(x=np.zeros((2, 2)), y=np.zeros((2, 2)))
    with pytest.raises(ValueError):
        sample.x[0, 0] = 1.0
