"""Block orthogonal matching pursuit.

Each iteration picks the block whose columns correlate most strongly with
the current residual, solves the least-squares problem restricted to all
blocks chosen so far, and updates the residual. The subdictionary solve
uses a singular value decomposition rather than normal equations, which
keeps the projection accurate on nearly-isometric dictionaries.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import BlockedMatrix, BlockSignal, SensingProblem, extract_blocks
from .errors import RankDeficientError

RANK_TOL = 1e-10
ORTHO_TOL = 1e-8

RESIDUAL_THRESHOLD = "residual_threshold"
FIXED_ITERATIONS = "fixed_iterations"
BOTH = "both"

STATUS_CONVERGED = "converged"
STATUS_BUDGET_EXCEEDED = "iteration_budget_exceeded"


@dataclass(frozen=True)
class StoppingRule:
    """When to stop iterating.

    ``residual_threshold`` stops once the residual norm drops to ``epsilon``
    (``max_iterations``, if given, acts as a safety budget); ``fixed_iterations``
    runs exactly ``max_iterations``; ``both`` stops at whichever fires first.
    """

    mode: str
    epsilon: float = 0.0
    max_iterations: int | None = None

    def __post_init__(self):
        if self.mode not in (RESIDUAL_THRESHOLD, FIXED_ITERATIONS, BOTH):
            raise ValueError(f"unknown stopping mode {self.mode!r}")
        if self.mode in (RESIDUAL_THRESHOLD, BOTH) and not self.epsilon >= 0.0:
            raise ValueError("epsilon must be nonnegative")
        if self.mode in (FIXED_ITERATIONS, BOTH):
            if self.max_iterations is None or self.max_iterations < 1:
                raise ValueError("max_iterations must be a positive integer")
        if self.max_iterations is not None and self.max_iterations < 1:
            raise ValueError("max_iterations must be a positive integer")


@dataclass(frozen=True, eq=False)
class RecoveryTrace:
    """Per-iteration record of a pursuit run.

    ``residual_norms[k]`` is the residual norm after k iterations, so the
    list starts at ||y||_2 and has length ``iterations_run + 1``.
    """

    chosen_indices: tuple
    residual_norms: tuple
    final_estimate: BlockSignal
    iterations_run: int
    status: str = STATUS_CONVERGED

    def to_dict(self) -> dict:
        return {
            "chosen_indices": list(self.chosen_indices),
            "residual_norms": list(self.residual_norms),
            "final_estimate": self.final_estimate.values.tolist(),
            "iterations_run": self.iterations_run,
            "status": self.status,
        }


def select_block(A: BlockedMatrix, r: np.ndarray, exclude=()) -> int:
    """Index of the block maximizing ||A[l]' r||_2, smallest index on ties.

    Blocks in ``exclude`` are masked out of the argmax; they cannot win
    anyway once the residual is orthogonal to them, but masking makes the
    choice robust to round-off.
    """
    r = np.asarray(r, dtype=float)
    if r.shape != (A.rows,):
        raise ValueError(f"residual must have length {A.rows}")
    M = A.layout.num_blocks
    scores = np.linalg.norm(
        (A.entries.T @ r).reshape(M, A.layout.block_width), axis=1
    )
    if exclude:
        scores = scores.copy()
        for i in exclude:
            A.layout.check_index(i)
            scores[i - 1] = -1.0
    # np.argmax returns the first maximum, which is the smallest block index
    return int(np.argmax(scores)) + 1


def block_correlation_scores(A: BlockedMatrix, r: np.ndarray) -> np.ndarray:
    """All selection scores ||A[l]' r||_2 as a length-M vector."""
    r = np.asarray(r, dtype=float)
    M = A.layout.num_blocks
    return np.linalg.norm(
        (A.entries.T @ r).reshape(M, A.layout.block_width), axis=1
    )


def project_least_squares(
    A: BlockedMatrix, support, y: np.ndarray, rank_tol: float = RANK_TOL
):
    """Least-squares fit of ``y`` on the blocks in ``support``.

    Returns ``(estimate, residual)`` where the estimate is zero outside the
    support and ``residual = y - A @ estimate``; the residual is orthogonal
    to every supported column. Raises :class:`RankDeficientError` when the
    subdictionary's smallest singular value falls below ``rank_tol`` times
    its largest.
    """
    y = np.asarray(y, dtype=float)
    if y.shape != (A.rows,):
        raise ValueError(f"observation must have length {A.rows}")
    indices = sorted(int(i) for i in support)
    sub = extract_blocks(A, indices)
    if sub.shape[1] == 0:
        return BlockSignal.zero(A.layout), y.copy()
    if sub.shape[1] > A.rows:
        raise RankDeficientError(
            f"support spans {sub.shape[1]} columns but only {A.rows} rows"
        )
    U, sigma, Vt = np.linalg.svd(sub, full_matrices=False)
    if sigma[0] == 0.0 or sigma[-1] < rank_tol * sigma[0]:
        raise RankDeficientError(
            f"subdictionary on blocks {indices} is rank deficient "
            f"(singular values {sigma[-1]:.3e} .. {sigma[0]:.3e})"
        )
    coef = Vt.T @ ((U.T @ y) / sigma)
    values = np.zeros(A.layout.ambient_dim)
    d = A.layout.block_width
    for pos, i in enumerate(indices):
        values[A.layout.block_slice(i)] = coef[pos * d : (pos + 1) * d]
    estimate = BlockSignal(A.layout, values)
    residual = y - sub @ coef
    return estimate, residual


def run_bomp(problem: SensingProblem, stop: StoppingRule) -> RecoveryTrace:
    """Run the pursuit until the stopping rule fires.

    The trace records the chosen block of every iteration and the residual
    norm after each projection. If the rule cannot be met before the
    iteration budget (or before the dictionary runs out of usable blocks),
    the trace comes back with status ``iteration_budget_exceeded`` instead
    of raising.
    """
    A = problem.matrix
    y = problem.observation
    # least squares needs at most rows/width blocks; never more than all of them
    capacity = min(A.layout.num_blocks, A.rows // A.layout.block_width)
    budget = capacity if stop.max_iterations is None else min(stop.max_iterations, capacity)

    chosen: list[int] = []
    residual = y.copy()
    norms = [float(np.linalg.norm(residual))]
    estimate = BlockSignal.zero(A.layout)
    status = STATUS_BUDGET_EXCEEDED

    check_residual = stop.mode in (RESIDUAL_THRESHOLD, BOTH)
    check_count = stop.mode in (FIXED_ITERATIONS, BOTH)

    while True:
        if check_residual and norms[-1] <= stop.epsilon:
            status = STATUS_CONVERGED
            break
        if check_count and len(chosen) == stop.max_iterations:
            status = STATUS_CONVERGED
            break
        if len(chosen) == budget:
            break
        chosen.append(select_block(A, residual, exclude=chosen))
        estimate, residual = project_least_squares(A, chosen, y)
        norms.append(float(np.linalg.norm(residual)))

    return RecoveryTrace(
        chosen_indices=tuple(chosen),
        residual_norms=tuple(norms),
        final_estimate=estimate,
        iterations_run=len(chosen),
        status=status,
    )
