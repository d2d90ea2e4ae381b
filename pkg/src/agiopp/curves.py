# Evaluation domains of agiopp.
# (C) 2026 The agiopp authors

# SPDX-License-Identifier: BSD-3-Clause

"""
Evaluation domains: ordered point sets on which codes are evaluated, and the helpers that
choose them for each curve family.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence

import galois
import numpy as np

from .abstract import AbstractCurve, CurvePoint
from .algebra import FieldSpec, as_ints, primitive_root_of_unity
from .errors import CurveError
from .kummer import KummerCurve
from .line import LineCurve
from .tower import TowerCurve

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EvalDomain:
    """
    Ordered list of affine points at one level.
    """

    #: Curve the points lie on
    curve: AbstractCurve

    #: Points in canonical order
    points: tuple

    def __len__(self) -> int:
        return len(self.points)

    @cached_property
    def index(self) -> Dict[CurvePoint, int]:
        """
        Position of every point.
        """
        return {point: k for k, point in enumerate(self.points)}

    @cached_property
    def coordinates(self) -> galois.FieldArray:
        """
        Coordinate matrix, one row per point.
        """
        return self.curve.coordinates(self.points)

    def position(self, point: CurvePoint) -> int:
        """
        Position of a point.

        Raises:
            CurveError: If the point is not in the domain.
        """
        try:
            return self.index[point]
        except KeyError as ex:
            raise CurveError(f"{point} is not in the evaluation domain") from ex

    @classmethod
    def from_coordinates(cls, curve: AbstractCurve, coords: galois.FieldArray) -> EvalDomain:
        """
        Domain from a coordinate matrix whose rows are already sorted and distinct.
        """
        rows = as_ints(coords).reshape(len(coords), -1).tolist()
        points = tuple(CurvePoint(curve.level, tuple(int(c) for c in r)) for r in rows)
        domain = cls(curve, points)
        domain.__dict__["coordinates"] = coords
        return domain


def _sorted_domain(curve: AbstractCurve, points: Iterable[CurvePoint]) -> EvalDomain:
    return EvalDomain(curve, tuple(sorted(set(points), key=lambda p: p.sort_key)))


def fiber(curve: AbstractCurve, point: CurvePoint) -> List[CurvePoint]:
    """
    Preimages under the quotient map of ``curve`` of a point one level down.

    Raises:
        CurveError: If the point is a ramification point.
    """
    return curve.fiber(point)


def kummer_domain(
    curve: KummerCurve,
    exclude: Sequence[CurvePoint] = (),
    size: Optional[int] = None,
) -> EvalDomain:
    """
    Union of full orbits of the cyclic action among the non-fixed points.

    Args:
        curve: Kummer curve
        exclude: Points to leave out in addition to the fixed points
        size: Number of points to keep, taking the lexicographically first orbits

    Raises:
        CurveError: If orbits are incomplete (N does not divide |F| - 1) or the size is not a
            multiple of the orbit size.
    """
    n = curve.exponent
    dropped = set(curve.fixed_points()) | set(exclude)
    orbits: Dict[int, List[CurvePoint]] = {}
    for point in curve.enumerate_points():
        if point not in dropped:
            orbits.setdefault(point.coords[0], []).append(point)

    selected = []
    for x in sorted(orbits):
        if len(orbits[x]) != n:
            raise CurveError(f"Orbit over x = {x} has {len(orbits[x])} points, expected {n}")
        selected.append(orbits[x])

    if size is not None:
        if size % n:
            raise CurveError(f"Requested size {size} is not a multiple of the orbit size {n}")
        if size // n > len(selected):
            raise CurveError(
                f"Requested size {size} exceeds the {len(selected) * n} free points"
            )
        selected = selected[: size // n]

    domain = _sorted_domain(curve, (p for orbit in selected for p in orbit))
    logger.debug("Kummer domain with %d points in %d orbits", len(domain), len(selected))
    return domain


def tower_domain(
    curve: TowerCurve, line: Optional[Iterable[int]] = None, size: Optional[int] = None
) -> EvalDomain:
    """
    Preimage of a set of affine line points under the projection to level 0.

    Args:
        curve: Tower level
        line: Line points, all affine points by default
        size: Optional expected size, a multiple of ``q^i``
    """
    line = sorted(set(int(x) for x in (range(curve.spec.order) if line is None else line)))
    if size is not None:
        fiber_size = curve.q ** curve.level
        if size % fiber_size:
            raise CurveError(f"Requested size {size} is not a multiple of {fiber_size}")
        line = line[: size // fiber_size]
    rows = curve.affine_rows(line)
    return EvalDomain(curve, tuple(CurvePoint(curve.level, row) for row in rows))


def line_domain(curve: LineCurve, xs: Iterable[int]) -> EvalDomain:
    """
    Domain of explicitly given line points.
    """
    return _sorted_domain(curve, (CurvePoint(curve.level, (int(x),)) for x in xs))


def coset_domain(spec: FieldSpec, size: int, shift: int = 1, level: int = 0) -> EvalDomain:
    """
    Multiplicative coset ``shift * <w>`` with ``w`` of order ``size``, on the line.

    Raises:
        FieldError: If ``size`` does not divide |F| - 1.
        CurveError: If ``shift`` is zero.
    """
    if shift % spec.order == 0:
        raise CurveError("Coset shift must be nonzero")
    field = spec.field
    omega = primitive_root_of_unity(spec, size)
    powers = field(shift) * omega ** np.arange(size, dtype=np.int64)
    xs = field(sorted(as_ints(powers).tolist()))
    return EvalDomain.from_coordinates(LineCurve(spec, level), xs.reshape(-1, 1))


def build_eval_domain(
    curve: AbstractCurve,
    exclude: Sequence[CurvePoint] = (),
    size: Optional[int] = None,
    line: Optional[Iterable[int]] = None,
) -> EvalDomain:
    """
    Default evaluation domain of a curve.

    Kummer curves keep full orbits of non-fixed points, tower levels pull back line points
    (the whole affine line by default), the line takes the given points or all affine points.
    """
    if isinstance(curve, KummerCurve):
        return kummer_domain(curve, exclude, size)
    if isinstance(curve, TowerCurve):
        return tower_domain(curve, line, size)
    if isinstance(curve, LineCurve):
        xs = range(curve.spec.order) if line is None else line
        domain = line_domain(curve, xs)
        if size is not None:
            domain = EvalDomain(curve, domain.points[:size])
        return domain
    raise CurveError(f"Unsupported curve {curve!r}")
