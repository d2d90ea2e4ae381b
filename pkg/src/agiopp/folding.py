# Folding operator of agiopp.
# (C) 2026 The agiopp authors

# SPDX-License-Identifier: BSD-3-Clause

"""
The randomized folding operator.

For a target point P with fiber ``{P_0, ..., P_{p-1}}`` the values of f on the fiber are
interpolated in the partition function, ``I(mu) = sum_j a_j mu^j``, and folded to

    ``Fold(f, z)(P) = sum_j (z1^j + z2^(j+1) nu_j(P)) a_j``.

Fiber positions, inverse Vandermonde matrices and balancing values all come from the
:py:class:`~agiopp.foldplan.LevelData` tables.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence

import galois
import numpy as np

from .algebra import coefficients, interpolate
from .errors import CodeError, PlanError
from .foldplan import FoldingPlan, LevelData
from .workers import map_partitioned, map_partitioned_async

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OracleTable:
    """
    Function on the evaluation domain of one level.
    """

    #: Plan level
    level: int

    #: Values aligned with the level's domain order
    values: galois.FieldArray

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class Challenge:
    """
    Folding challenge ``z = (z1, z2)``, stored as integer element representations.
    """

    z1: int
    z2: int

    def elements(self, field) -> galois.FieldArray:
        return field([self.z1, self.z2])


@dataclass
class OpCounter:
    """
    Field operation counts.
    """

    #: Multiplications
    mul: int = 0

    #: Additions and subtractions
    add: int = 0

    #: Inversions
    inv: int = 0

    @property
    def total(self) -> int:
        return self.mul + self.add + self.inv

    def count(self, mul: int = 0, add: int = 0, inv: int = 0) -> None:
        self.mul += mul
        self.add += add
        self.inv += inv


def _weight_powers(field, z: Challenge, p: int, counter: Optional[OpCounter]):
    z1, z2 = z.elements(field)
    if counter is not None:
        counter.count(mul=2 * p)
    return [z1 ** j for j in range(p)], [z2 ** (j + 1) for j in range(p)]


def _count_block(counter: Optional[OpCounter], p: int, size: int) -> None:
    # Interpolation plus weights plus the final sum, per target point.
    if counter is None:
        return
    if p == 2:
        counter.count(mul=size * 6, add=size * 5)
    else:
        counter.count(mul=size * (p * p + 2 * p), add=size * (p * (p - 1) + 2 * p - 1))


def _fold_block(
    level: LevelData,
    fiber_values: galois.FieldArray,
    rows,
    powers,
) -> galois.FieldArray:
    """
    Fold the fibers of the target positions ``rows`` given their values, shape ``(len, p)``.
    """
    p = level.arity
    pow1, pow2 = powers
    if p == 2:
        a1 = (fiber_values[:, 1] - fiber_values[:, 0]) * level.inv_diff[rows]
        a0 = fiber_values[:, 0] - a1 * level.mu_values[rows, 0]
        coeffs = [a0, a1]
    else:
        inverse = level.fiber_inverse[rows]
        coeffs = []
        for j in range(p):
            acc = inverse[:, j, 0] * fiber_values[:, 0]
            for k in range(1, p):
                acc = acc + inverse[:, j, k] * fiber_values[:, k]
            coeffs.append(acc)

    nu = level.nu_table[:, rows]
    out = coeffs[0] * (pow1[0] + pow2[0] * nu[0])
    for j in range(1, p):
        out = out + coeffs[j] * (pow1[j] + pow2[j] * nu[j])

    return out


def _level(plan: FoldingPlan, table: OracleTable) -> LevelData:
    if not 0 <= table.level < plan.rounds:
        raise PlanError(
            f"No folding round at level {table.level} of a {plan.rounds} round plan"
        )
    level = plan.levels[table.level]
    if len(table) != level.length:
        raise CodeError(
            f"Table of length {len(table)} for level {table.level} of length {level.length}"
        )
    return level


def fiber_coefficients(
    table: OracleTable, position: int, plan: FoldingPlan
) -> galois.FieldArray:
    """
    Coefficients ``(a_0, ..., a_{p-1})`` of the interpolant of ``table`` on the fiber over
    target ``position``, as a function of the partition function.

    This is the reference path through polynomial interpolation; folding itself uses the
    precomputed inverse Vandermonde matrices.
    """
    level = _level(plan, table)
    fiber = level.fibers[position]
    poly = interpolate(level.mu_values[position], table.values[fiber])
    return coefficients(poly, level.arity)


def fold_at_point(
    fiber_values: Sequence,
    z: Challenge,
    level: LevelData,
    position: int,
    counter: Optional[OpCounter] = None,
) -> galois.FieldArray:
    """
    Folded value at target ``position`` from the ``p`` values on its fiber.

    Args:
        fiber_values: Values at ``level.fibers[position]``, in that order
        z: Challenge
        level: Folding level
        position: Position in the target domain
        counter: Operation counter

    Returns:
        A field scalar
    """
    field = level.curve.spec.field
    values = field(fiber_values).reshape(1, level.arity)
    powers = _weight_powers(field, z, level.arity, counter)
    _count_block(counter, level.arity, 1)
    return _fold_block(level, values, [position], powers)[0]


def _fold_worker(level: LevelData, values, powers):
    def run(start: int, stop: int) -> galois.FieldArray:
        rows = slice(start, stop)
        return _fold_block(level, values[level.fibers[rows]], rows, powers)

    return run


def _collect(field, table: OracleTable, parts: List[galois.FieldArray]) -> OracleTable:
    values = field(np.concatenate([np.asarray(part.view(np.ndarray)) for part in parts]))
    return OracleTable(table.level + 1, values)


def fold(
    table: OracleTable,
    z: Challenge,
    plan: FoldingPlan,
    threads: int = 1,
    counter: Optional[OpCounter] = None,
) -> OracleTable:
    """
    Fold a table of level ``i`` into a table of level ``i + 1``.

    Args:
        table: Table at a folding level
        z: Challenge
        plan: Folding plan
        threads: Number of worker threads. The output does not depend on it.
        counter: Operation counter

    Raises:
        PlanError: If the level has no folding round.
        CodeError: If the table length does not match the level.
    """
    level = _level(plan, table)
    field = plan.spec.field
    powers = _weight_powers(field, z, level.arity, counter)
    _count_block(counter, level.arity, len(level.target))
    worker = _fold_worker(level, table.values, powers)
    parts = map_partitioned(worker, len(level.target), threads)
    logger.debug("Folded level %d (%d -> %d)", table.level, len(table), len(level.target))
    return _collect(field, table, parts)


async def fold_async(
    table: OracleTable,
    z: Challenge,
    plan: FoldingPlan,
    threads: int = 1,
    counter: Optional[OpCounter] = None,
) -> OracleTable:
    """
    :py:func:`fold` for callers already running inside trio.
    """
    level = _level(plan, table)
    field = plan.spec.field
    powers = _weight_powers(field, z, level.arity, counter)
    _count_block(counter, level.arity, len(level.target))
    worker = _fold_worker(level, table.values, powers)
    parts = await map_partitioned_async(worker, len(level.target), threads)
    return _collect(field, table, parts)
