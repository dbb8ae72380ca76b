"""
Linear systems over a FieldSpec, solved by galois row reduction.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from algebra.field import FieldElement, FieldSpec
from errors import AlgebraError


def solve_linear(
    spec: FieldSpec,
    rows: Sequence[Sequence[FieldElement]],
    rhs: Sequence[FieldElement],
) -> list[FieldElement] | None:
    """
    Solve rows @ x = rhs. Returns one solution with free variables set to 0,
    or None when rhs lies outside the column span.
    """
    if len(rows) != len(rhs):
        raise AlgebraError(f"{len(rows)} equations but {len(rhs)} right-hand sides")
    if not rows:
        return []
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise AlgebraError("ragged coefficient matrix")
    augmented = np.array(
        [[c.value for c in row] + [b.value] for row, b in zip(rows, rhs)],
        dtype=np.int64,
    )
    reduced = spec.gf(augmented).row_reduce().view(np.ndarray)
    solution = [spec.zero] * width
    for row in reduced:
        nonzero = np.flatnonzero(row)
        if nonzero.size == 0:
            continue
        pivot = int(nonzero[0])
        if pivot == width:
            return None
        solution[pivot] = spec.element(int(row[width]))
    return solution
