# Projective line of agiopp.
# (C) 2026 The agiopp authors

# SPDX-License-Identifier: BSD-3-Clause

"""
The projective line as the carrier of Reed-Solomon levels, together with the polynomial fold
maps of the Reed-Solomon tail.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum, auto
from typing import List, Optional

import galois
import numpy as np

from .abstract import AbstractCurve, CurvePoint, Family
from .algebra import FieldSpec, as_ints, prime_factors, primitive_root_of_unity
from .errors import CurveError
from .rrbasis import INFINITY, ORIGIN, BasisFunction, Divisor, line_basis

#: Largest field whose line is enumerated point by point
MAX_ENUMERATION = 2 ** 20


class FoldKind(Enum):
    """
    Enumeration of Reed-Solomon fold maps.
    """

    #: ``x -> x^p - c^{p-1} x`` in characteristic p, fibers are cosets of ``F_p * c``
    ADDITIVE = auto()

    #: ``x -> x^p`` for ``p | |F| - 1``, fibers are cosets of the p-th roots of unity
    MULTIPLICATIVE = auto()


@dataclass(frozen=True)
class FoldMap:
    """
    Degree ``p`` polynomial map of the line to itself.
    """

    #: Kind of map
    kind: FoldKind

    #: Degree p
    arity: int

    #: Translation c of additive maps, as integer
    shift: int = 0

    def apply(self, xs: galois.FieldArray) -> galois.FieldArray:
        """
        Image of every element.
        """
        if self.kind is FoldKind.MULTIPLICATIVE:
            return xs ** self.arity
        c = type(xs)(self.shift)
        return xs ** self.arity - c ** (self.arity - 1) * xs

    def polynomial(self, field, image) -> galois.Poly:
        """
        ``phi(x) - image``, whose roots form the fiber over ``image``.
        """
        coeffs = field.Zeros(self.arity + 1)
        coeffs[0] = 1
        if self.kind is FoldKind.ADDITIVE:
            coeffs[self.arity - 1] = -(field(self.shift) ** (self.arity - 1))
        coeffs[self.arity] = -field(image)
        return galois.Poly(coeffs)

    def __str__(self) -> str:
        if self.kind is FoldKind.MULTIPLICATIVE:
            return f"x^{self.arity}"
        return f"x^{self.arity} - {self.shift}^{self.arity - 1} x"


class LineCurve(AbstractCurve):
    """
    Projective line at some plan level, optionally equipped with a fold map to the next line.

    Args:
        spec: Field
        level: Level tag of the points
        fold_map: Quotient map to the next level
    """

    # Quotient map, if any
    _fold_map: Optional[FoldMap]

    def __init__(self, spec: FieldSpec, level: int, fold_map: Optional[FoldMap] = None) -> None:
        super().__init__(spec, level)
        self._fold_map = fold_map

    @property
    def family(self) -> Family:
        return Family.LINE

    @property
    def fold_map(self) -> Optional[FoldMap]:
        return self._fold_map

    @property
    def quotient_degree(self) -> int:
        if self._fold_map is None:
            raise CurveError("Line without fold map has no quotient")
        return self._fold_map.arity

    @property
    def mu_index(self) -> int:
        return 0

    def genus(self) -> int:
        return 0

    def enumerate_points(self) -> List[CurvePoint]:
        if self._spec.order > MAX_ENUMERATION:
            raise CurveError(f"Refusing to enumerate the line over {self._spec}")
        points = [CurvePoint(self._level, (x,)) for x in range(self._spec.order)]
        return points + [self.infinity]

    def quotient(self) -> LineCurve:
        if self._fold_map is None:
            raise CurveError("Line without fold map has no quotient")
        return LineCurve(self._spec, self._level + 1)

    def project_many(self, coords: galois.FieldArray) -> galois.FieldArray:
        if self._fold_map is None:
            raise CurveError("Line without fold map has no quotient")
        return self._fold_map.apply(coords[:, 0]).reshape(-1, 1)

    def fiber(self, point: CurvePoint) -> List[CurvePoint]:
        p = self.quotient_degree
        if point.level != self._level + 1:
            raise CurveError(f"{point} is not on the quotient of a level {self._level} line")
        if point.infinity:
            raise CurveError(f"{point} is a ramification point")
        field = self._spec.field
        poly = self._fold_map.polynomial(field, point.coords[0])
        roots = sorted(int(r) for r in poly.roots())
        if len(roots) != p:
            raise CurveError(f"Fiber over {point} has {len(roots)} points, expected {p}")
        return [CurvePoint(self._level, (r,)) for r in roots]

    def check_divisor(self, divisor: Divisor) -> None:
        if divisor.level != self._level:
            raise CurveError(f"Divisor of level {divisor.level} on a level {self._level} line")
        if not set(divisor.support) <= {INFINITY, ORIGIN}:
            raise CurveError(f"Divisor {divisor} is not supported on Pinf and Porigin")

    def basis(self, divisor: Divisor) -> List[BasisFunction]:
        self.check_divisor(divisor)
        if not divisor.is_one_point:
            raise CurveError(f"Line bases need a one-point divisor, got {divisor}")
        return line_basis(divisor[INFINITY])

    def principal_divisor(self, function: str) -> Divisor:
        if function != "x":
            raise CurveError(f"Unsupported function {function!r} on the line")
        return Divisor.of(self._level, {ORIGIN: 1, INFINITY: -1})

    def split_divisor(self, divisor: Divisor, j: int) -> Divisor:
        degree = (divisor[INFINITY] - j) // self.quotient_degree
        return Divisor.at_infinity(self._level + 1, degree)

    def pole_divisor(self, function: BasisFunction) -> Divisor:
        return Divisor.at_infinity(self._level, function.exponents[0])

    def evaluate_many(
        self, function: BasisFunction, coords: galois.FieldArray
    ) -> galois.FieldArray:
        return coords[:, 0] ** function.exponents[0]


def find_fold_map(spec: FieldSpec, xs: galois.FieldArray) -> Optional[FoldMap]:
    """
    Find a fold map under which the set ``xs`` splits into full fibers.

    Primes dividing ``len(xs)`` are tried in ascending order. For the characteristic the set
    must be invariant under a translation ``x -> x + c`` (smallest such c is used); for other
    primes it must avoid zero and be invariant under the p-th roots of unity.

    Returns:
        The map, or ``None`` if the set has no such structure
    """
    values = as_ints(xs)
    members = set(int(v) for v in values)
    if len(members) != len(values) or len(values) < 2:
        return None

    field = spec.field
    base = field(int(values[0]))
    for p in sorted(set(prime_factors(len(values)))):
        if p == spec.characteristic:
            candidates = sorted(set(int(v) for v in as_ints(xs - base)) - {0})
            for c in candidates:
                if np.isin(as_ints(xs + field(c)), values).all():
                    return FoldMap(FoldKind.ADDITIVE, p, c)
        elif (spec.order - 1) % p == 0 and 0 not in members:
            zeta = primitive_root_of_unity(spec, p)
            if np.isin(as_ints(xs * zeta), values).all():
                return FoldMap(FoldKind.MULTIPLICATIVE, p)
    return None
