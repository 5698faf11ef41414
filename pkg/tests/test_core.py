import math

import numpy as np
import pytest

from bomp.core import (
    BlockedMatrix,
    BlockLayout,
    BlockSignal,
    SensingProblem,
    block_norms,
    block_support,
    extract_blocks,
    mixed_norm,
)


def test_layout_basics():
    layout = BlockLayout(num_blocks=4, block_width=3)
    assert layout.ambient_dim == 12
    assert layout.block_slice(1) == slice(0, 3)
    assert layout.block_slice(4) == slice(9, 12)
    assert list(layout.block_indices()) == [1, 2, 3, 4]


def test_layout_rejects_bad_sizes():
    with pytest.raises(ValueError):
        BlockLayout(0, 2)
    with pytest.raises(ValueError):
        BlockLayout(3, 0)


def test_layout_index_range_is_one_based():
    layout = BlockLayout(3, 2)
    with pytest.raises(ValueError):
        layout.block_slice(0)
    with pytest.raises(ValueError):
        layout.block_slice(4)


def test_signal_blocks_and_immutability():
    layout = BlockLayout(3, 2)
    x = BlockSignal(layout, [1.0, 2.0, 0.0, 0.0, 3.0, 4.0])
    np.testing.assert_array_equal(x.block(1), [1.0, 2.0])
    np.testing.assert_array_equal(x.block(3), [3.0, 4.0])
    with pytest.raises(ValueError):
        x.values[0] = 9.0  # frozen buffer


def test_signal_from_blocks_and_zero():
    layout = BlockLayout(4, 2)
    x = BlockSignal.from_blocks(layout, {2: [1.0, -1.0], 4: [0.5, 0.0]})
    np.testing.assert_array_equal(x.values, [0, 0, 1, -1, 0, 0, 0.5, 0])
    assert np.all(BlockSignal.zero(layout).values == 0.0)


def test_signal_rejects_bad_shape_and_nonfinite():
    layout = BlockLayout(2, 2)
    with pytest.raises(ValueError):
        BlockSignal(layout, [1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        BlockSignal(layout, [1.0, np.nan, 0.0, 0.0])


def test_matrix_views():
    layout = BlockLayout(3, 2)
    A = BlockedMatrix(layout, np.arange(24.0).reshape(4, 6))
    assert A.rows == 4
    np.testing.assert_array_equal(A.block(2), A.entries[:, 2:4])
    with pytest.raises(ValueError):
        A.entries[0, 0] = 1.0


def test_matrix_rejects_wrong_columns():
    with pytest.raises(ValueError):
        BlockedMatrix(BlockLayout(3, 2), np.zeros((4, 5)))
    with pytest.raises(ValueError):
        BlockedMatrix(BlockLayout(3, 2), np.zeros(6))


def test_problem_validation():
    A = BlockedMatrix(BlockLayout(2, 2), np.eye(4))
    with pytest.raises(ValueError):
        SensingProblem(matrix=A, observation=np.zeros(3))
    with pytest.raises(ValueError):
        SensingProblem(matrix=A, observation=np.zeros(4), noise_bound=-0.1)


def test_block_norms_and_mixed_norms():
    layout = BlockLayout(3, 2)
    x = BlockSignal(layout, [3.0, 4.0, 0.0, 0.0, 0.0, 2.0])
    np.testing.assert_allclose(block_norms(x), [5.0, 0.0, 2.0])
    assert mixed_norm(x, 1) == pytest.approx(7.0)
    assert mixed_norm(x, 2) == pytest.approx(np.sqrt(29.0))
    assert mixed_norm(x, math.inf) == pytest.approx(5.0)
    # p=2 coincides with the flat Euclidean norm
    assert mixed_norm(x, 2) == pytest.approx(np.linalg.norm(x.values))
    with pytest.raises(ValueError):
        mixed_norm(x, 3)


def test_block_support_threshold():
    layout = BlockLayout(4, 1)
    x = BlockSignal(layout, [0.0, 1e-12, 1e-9, -2.0])
    assert block_support(x) == (3, 4)
    assert block_support(x, zero_tol=1e-13) == (2, 3, 4)
    assert block_support(x, zero_tol=5.0) == ()
    with pytest.raises(ValueError):
        block_support(x, zero_tol=-1.0)


def test_extract_blocks_sorts_and_validates():
    layout = BlockLayout(4, 2)
    A = BlockedMatrix(layout, np.arange(16.0).reshape(2, 8))
    sub = extract_blocks(A, (3, 1))
    np.testing.assert_array_equal(sub, np.hstack([A.block(1), A.block(3)]))
    assert extract_blocks(A, ()).shape == (2, 0)
    with pytest.raises(ValueError):
        extract_blocks(A, (1, 1))
    with pytest.raises(ValueError):
        extract_blocks(A, (0,))
    with pytest.raises(ValueError):
        extract_blocks(A, (5,))
