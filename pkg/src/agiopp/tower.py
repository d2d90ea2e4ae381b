# Hermitian tower of agiopp.
# (C) 2026 The agiopp authors

# SPDX-License-Identifier: BSD-3-Clause

"""
Levels of the Hermitian tower over F_{q^2}.

Level ``i`` is cut out by ``x_k^q + x_k = x_{k-1}^{q+1}`` for ``k = 1..i``; level 0 is the
projective line. The quotient map forgets the last coordinate. The point at infinity is
totally ramified, every affine fiber has exactly q points.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Sequence, Tuple

import galois

from .abstract import AbstractCurve, CurvePoint, Family
from .algebra import FieldSpec, as_ints
from .errors import CurveError
from .rrbasis import INFINITY, ORIGIN, BasisFunction, Divisor, tower_basis, tower_weight


def tower_genus(q: int, level: int) -> int:
    """
    Genus of tower level ``i``: ``((q^2 - 1)((q+1)^i - q^i) + 1 - q^i) / 2``.
    """
    return ((q * q - 1) * ((q + 1) ** level - q ** level) + 1 - q ** level) // 2


def tower_genus_bound(q: int, level: int) -> Fraction:
    """
    Upper bound ``(i/2) q^{i+1} + (i(i-1)/2) q^i``, valid when ``2(i - 1) < q``.
    """
    return Fraction(level * q ** (level + 1), 2) + Fraction(level * (level - 1) * q ** level, 2)


class TowerCurve(AbstractCurve):
    """
    Level ``i`` of the Hermitian tower.

    Args:
        spec: The field F_{q^2}
        q: Base parameter
        level: Level ``i``
    """

    # Base parameter of the tower
    _q: int

    def __init__(self, spec: FieldSpec, q: int, level: int) -> None:
        super().__init__(spec, level)
        if q < 2 or spec.order != q * q:
            raise CurveError(f"Tower with q = {q} needs a field of order q^2, got {spec}")
        self._q = q

    @property
    def family(self) -> Family:
        return Family.TOWER

    @property
    def q(self) -> int:
        return self._q

    @property
    def quotient_degree(self) -> int:
        if self._level == 0:
            raise CurveError("Level 0 of the tower has no quotient")
        return self._q

    @property
    def mu_index(self) -> int:
        return self._level

    def genus(self) -> int:
        return tower_genus(self._q, self._level)

    @cached_property
    def _trace_classes(self) -> Dict[int, List[int]]:
        field = self._spec.field
        elements = field.elements
        traces = as_ints(elements ** self._q + elements)
        classes: Dict[int, List[int]] = {}
        for a, t in zip(as_ints(elements), traces):
            classes.setdefault(int(t), []).append(int(a))
        return classes

    def lift(self, rows: Sequence[Tuple[int, ...]]) -> List[Tuple[int, ...]]:
        """
        All extensions of affine points one level up, keeping lexicographic order.
        """
        if not rows:
            return []
        field = self._spec.field
        norms = as_ints(field([r[-1] for r in rows]) ** (self._q + 1))
        classes = self._trace_classes
        return [row + (a,) for row, t in zip(rows, norms) for a in classes.get(int(t), [])]

    def affine_rows(self, line: Sequence[int]) -> List[Tuple[int, ...]]:
        """
        Pull back a set of line points to this level.
        """
        rows = [(int(x),) for x in sorted(line)]
        for _ in range(self._level):
            rows = self.lift(rows)
        return rows

    def enumerate_points(self) -> List[CurvePoint]:
        rows = self.affine_rows(range(self._spec.order))
        return [CurvePoint(self._level, row) for row in rows] + [self.infinity]

    def quotient(self) -> TowerCurve:
        if self._level == 0:
            raise CurveError("Level 0 of the tower has no quotient")
        return TowerCurve(self._spec, self._q, self._level - 1)

    def project_many(self, coords: galois.FieldArray) -> galois.FieldArray:
        return coords[:, :-1]

    def fiber(self, point: CurvePoint) -> List[CurvePoint]:
        if point.level != self._level - 1:
            raise CurveError(f"{point} is not on the quotient of a level {self._level} curve")
        if point.infinity:
            raise CurveError(f"{point} is a ramification point")
        rows = self.lift([point.coords])
        if len(rows) != self._q:
            raise CurveError(f"Fiber over {point} has {len(rows)} points, expected {self._q}")
        return [CurvePoint(self._level, row) for row in rows]

    def check_divisor(self, divisor: Divisor) -> None:
        if divisor.level != self._level:
            raise CurveError(f"Divisor of level {divisor.level} on a level {self._level} curve")
        if not set(divisor.support) <= {INFINITY, ORIGIN}:
            raise CurveError(f"Divisor {divisor} is not supported on Pinf and Porigin")

    def basis(self, divisor: Divisor) -> List[BasisFunction]:
        self.check_divisor(divisor)
        if not divisor.is_one_point:
            raise CurveError(f"Tower bases need a one-point divisor, got {divisor}")
        return tower_basis(self, divisor[INFINITY])

    def valuation_at_infinity(self, k: int) -> int:
        """
        Valuation of ``x_k`` at the point at infinity: ``-q^{i-k} (q+1)^k``.
        """
        if not 0 <= k <= self._level:
            raise CurveError(f"No coordinate x{k} on tower level {self._level}")
        return -(self._q ** (self._level - k)) * (self._q + 1) ** k

    def principal_divisor(self, function: str) -> Divisor:
        """
        Divisor of the last coordinate ``"x<i>"``, ``(q+1)^i (Porigin - Pinf)``.

        Lower coordinates have zeros outside the distinguished support; use
        :py:meth:`valuation_at_infinity` for their poles.
        """
        if function != f"x{self._level}":
            raise CurveError(f"Unsupported function {function!r} on tower level {self._level}")
        order = (self._q + 1) ** self._level
        return Divisor.of(self._level, {ORIGIN: order, INFINITY: -order})

    def split_divisor(self, divisor: Divisor, j: int) -> Divisor:
        # The origin of the quotient is unramified, only the pole part at infinity survives.
        q = self._q
        return Divisor.at_infinity(
            self._level - 1, (divisor[INFINITY] - j * (q + 1) ** self._level) // q
        )

    def pole_divisor(self, function: BasisFunction) -> Divisor:
        return Divisor.at_infinity(
            self._level, tower_weight(self._q, self._level, function.exponents)
        )

    def evaluate_many(
        self, function: BasisFunction, coords: galois.FieldArray
    ) -> galois.FieldArray:
        out = self._spec.field.Ones(len(coords))
        for k, e in enumerate(function.exponents):
            if e:
                out = out * coords[:, k] ** e
        return out
