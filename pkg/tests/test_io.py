import json

import numpy as np
import pytest

from bomp.core import BlockedMatrix, BlockLayout
from bomp.io import (
    load_layout,
    load_matrix,
    load_vector,
    save_layout,
    save_matrix,
    save_vector,
)


def test_vector_roundtrip_is_exact(tmp_path):
    rng = np.random.default_rng(0)
    v = rng.normal(size=37) * np.exp(rng.normal(size=37) * 8)
    path = tmp_path / "v.csv"
    save_vector(path, v)
    # 17 significant digits reproduce doubles bit for bit
    np.testing.assert_array_equal(load_vector(path), v)


def test_matrix_roundtrip_with_sidecar(tmp_path):
    rng = np.random.default_rng(1)
    layout = BlockLayout(4, 3)
    A = BlockedMatrix(layout, rng.normal(size=(7, 12)))
    save_matrix(tmp_path / "A.csv", A, tmp_path / "A.json")
    back = load_matrix(tmp_path / "A.csv", tmp_path / "A.json")
    np.testing.assert_array_equal(back.entries, A.entries)
    assert back.layout == layout


def test_layout_roundtrip(tmp_path):
    path = tmp_path / "layout.json"
    save_layout(path, BlockLayout(5, 2), rows=11)
    rows, layout = load_layout(path)
    assert rows == 11
    assert layout == BlockLayout(5, 2)
    assert json.loads(path.read_text()) == {"m": 11, "M": 5, "d": 2}


def test_layout_missing_key(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"m": 4, "M": 2}')
    with pytest.raises(ValueError, match="missing key"):
        load_layout(path)


def test_layout_bad_rows(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"m": 0, "M": 2, "d": 1}')
    with pytest.raises(ValueError):
        load_layout(path)


def test_matrix_size_mismatch(tmp_path):
    layout_path = tmp_path / "A.json"
    save_layout(layout_path, BlockLayout(2, 2), rows=3)
    matrix_path = tmp_path / "A.csv"
    save_vector(matrix_path, np.arange(10.0))  # needs 12 numbers
    with pytest.raises(ValueError, match="holds 10 numbers"):
        load_matrix(matrix_path, layout_path)
