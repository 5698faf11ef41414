"""Block layouts, block-sparse vectors, mixed norms, and blocked matrix views.

Every vector of length ``n = M*d`` is viewed as a concatenation of M blocks
of uniform width d, and every m x n matrix as a concatenation of M column
blocks of shape (m, d). Block indices are 1-based in all public interfaces.
All types are immutable after construction; the operations are pure
functions and safe to call concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

DEFAULT_ZERO_TOL = 1e-10


def _frozen_array(values, shape, what: str) -> np.ndarray:
    arr = np.array(values, dtype=float, copy=True)
    if arr.shape != shape:
        raise ValueError(f"{what} must have shape {shape}, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} contains non-finite entries")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class BlockLayout:
    """Partition of ``num_blocks * block_width`` coordinates into uniform blocks."""

    num_blocks: int
    block_width: int

    def __post_init__(self):
        if self.num_blocks < 1:
            raise ValueError("num_blocks must be a positive integer")
        if self.block_width < 1:
            raise ValueError("block_width must be a positive integer")

    @property
    def ambient_dim(self) -> int:
        return self.num_blocks * self.block_width

    def block_slice(self, index: int) -> slice:
        """Coordinate slice of block ``index`` (1-based)."""
        self.check_index(index)
        d = self.block_width
        return slice((index - 1) * d, index * d)

    def check_index(self, index: int) -> None:
        if not 1 <= index <= self.num_blocks:
            raise ValueError(
                f"block index {index} out of range 1..{self.num_blocks}"
            )

    def block_indices(self) -> range:
        """All block indices, 1-based."""
        return range(1, self.num_blocks + 1)


@dataclass(frozen=True, eq=False)
class BlockSignal:
    """A length-n real vector viewed through a :class:`BlockLayout`."""

    layout: BlockLayout
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = _frozen_array(self.values, (self.layout.ambient_dim,), "signal")
        object.__setattr__(self, "values", arr)

    def block(self, index: int) -> np.ndarray:
        return self.values[self.layout.block_slice(index)]

    @classmethod
    def zero(cls, layout: BlockLayout) -> "BlockSignal":
        return cls(layout, np.zeros(layout.ambient_dim))

    @classmethod
    def from_blocks(cls, layout: BlockLayout, blocks: dict) -> "BlockSignal":
        """Assemble a signal from a {block index: width-d vector} mapping."""
        values = np.zeros(layout.ambient_dim)
        for index, blk in blocks.items():
            values[layout.block_slice(index)] = np.asarray(blk, dtype=float)
        return cls(layout, values)


@dataclass(frozen=True, eq=False)
class BlockedMatrix:
    """An m x n real matrix whose columns carry the block layout."""

    layout: BlockLayout
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.array(self.entries, dtype=float, copy=True)
        if arr.ndim != 2:
            raise ValueError("matrix entries must be two-dimensional")
        if arr.shape[1] != self.layout.ambient_dim:
            raise ValueError(
                f"matrix has {arr.shape[1]} columns, layout requires "
                f"{self.layout.ambient_dim}"
            )
        if not np.all(np.isfinite(arr)):
            raise ValueError("matrix contains non-finite entries")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    def block(self, index: int) -> np.ndarray:
        """Column block ``index`` as an (m, d) view."""
        return self.entries[:, self.layout.block_slice(index)]


@dataclass(frozen=True, eq=False)
class SensingProblem:
    """Measurement matrix, observed vector, and noise-norm bound."""

    matrix: BlockedMatrix
    observation: np.ndarray = field(repr=False)
    noise_bound: float = 0.0

    def __post_init__(self):
        y = _frozen_array(self.observation, (self.matrix.rows,), "observation")
        object.__setattr__(self, "observation", y)
        if not self.noise_bound >= 0.0:
            raise ValueError("noise_bound must be nonnegative")


def block_norms(x: BlockSignal) -> np.ndarray:
    """Per-block Euclidean norms: entry ``l`` is ||x[l]||_2."""
    d = x.layout.block_width
    return np.linalg.norm(x.values.reshape(x.layout.num_blocks, d), axis=1)


def mixed_norm(x: BlockSignal, p) -> float:
    """Mixed l2/lp norm: the lp norm of the vector of per-block l2 norms.

    ``p`` must be 1, 2, or infinity. For p=2 this coincides with the plain
    Euclidean norm of the flat vector.
    """
    w = block_norms(x)
    if p == 1:
        return float(np.sum(w))
    if p == 2:
        return float(np.linalg.norm(w))
    if p == math.inf:
        return float(np.max(w))
    raise ValueError(f"unsupported mixed-norm order {p!r}; use 1, 2, or math.inf")


def block_support(x: BlockSignal, zero_tol: float = DEFAULT_ZERO_TOL) -> tuple:
    """Block indices whose block norm exceeds ``zero_tol``, ascending.

    The default tolerance separates genuine zeros from least-squares
    round-off at double precision.
    """
    if zero_tol < 0:
        raise ValueError("zero_tol must be nonnegative")
    w = block_norms(x)
    return tuple(int(i) + 1 for i in np.nonzero(w > zero_tol)[0])


def extract_blocks(A: BlockedMatrix, support) -> np.ndarray:
    """Horizontal concatenation of the column blocks indexed by ``support``.

    Blocks are concatenated in ascending index order regardless of the
    order given; duplicate or out-of-range indices are rejected. An empty
    support yields an (m, 0) matrix.
    """
    indices = [int(i) for i in support]
    for i in indices:
        A.layout.check_index(i)
    if len(set(indices)) != len(indices):
        raise ValueError(f"duplicate block indices in support {indices}")
    indices.sort()
    if not indices:
        return np.zeros((A.rows, 0))
    return np.hstack([A.block(i) for i in indices])
