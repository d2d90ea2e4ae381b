# Public interface of agiopp curves.
# (C) 2026 The agiopp authors

# SPDX-License-Identifier: BSD-3-Clause

"""
Curve independent interface. The modules :py:mod:`agiopp.kummer`, :py:mod:`agiopp.tower` and
:py:mod:`agiopp.line` implement the family specific parts.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum, auto
from typing import TYPE_CHECKING, List, Tuple

import galois

from .algebra import FieldSpec
from .errors import CurveError, PoleError

if TYPE_CHECKING:
    from .rrbasis import BasisFunction, Divisor


class Family(Enum):
    """
    Enumeration of curve families.
    """

    #: Kummer curve y^N = f(x)
    KUMMER = auto()

    #: Level of the Hermitian tower x_i^q + x_i = x_{i-1}^{q+1}
    TOWER = auto()

    #: Projective line, i.e. Reed-Solomon levels
    LINE = auto()


class Mode(Enum):
    """
    Enumeration of final tests.
    """

    #: Fold down to dimension one and compare against a committed constant
    FOLD_TO_CONSTANT = auto()

    #: Read the last oracle in full and test code membership
    MEMBERSHIP = auto()


class CoinMode(Enum):
    """
    Enumeration of public coin sources.
    """

    #: Seeded generator, prover and verifier as interacting tasks
    INTERACTIVE = auto()

    #: Challenges hashed from the transcript so far
    FIAT_SHAMIR = auto()


class TestKind(Enum):
    """
    Enumeration of verifier tests a proof can fail.
    """

    #: Folded value disagrees with the next oracle
    ROUND_CONSISTENCY = auto()

    #: Last value differs from the committed constant, or the last oracle is not a codeword
    FINAL = auto()

    #: An opening does not match its commitment
    COMMITMENT = auto()

    #: Challenges or query points differ from the recomputed ones
    CHALLENGE = auto()


@dataclass(frozen=True)
class CurvePoint:
    """
    Rational point of a curve at some level.
    """

    #: Level of the curve the point lies on
    level: int

    #: Affine coordinates as integer element representations. Empty for the point at infinity.
    coords: Tuple[int, ...]

    #: Point at infinity
    infinity: bool = False

    @property
    def sort_key(self) -> Tuple[bool, Tuple[int, ...]]:
        """
        Lexicographic by coordinates, infinity last.
        """
        return (self.infinity, self.coords)

    def __str__(self) -> str:
        if self.infinity:
            return f"P_inf@{self.level}"
        return f"{self.coords}@{self.level}"


class AbstractCurve(ABC):
    """
    Curve independent interface of the curves a folding plan walks through.
    """

    # Field of definition
    _spec: FieldSpec

    # Level of the curve inside its quotient chain
    _level: int

    def __init__(self, spec: FieldSpec, level: int) -> None:
        if level < 0:
            raise CurveError(f"Negative level {level}")
        self._spec = spec
        self._level = level

    @property
    def spec(self) -> FieldSpec:
        """
        Field of definition.
        """
        return self._spec

    @property
    def level(self) -> int:
        """
        Level inside the quotient chain.
        """
        return self._level

    @property
    def infinity(self) -> CurvePoint:
        """
        The unique point at infinity.
        """
        return CurvePoint(self._level, (), True)

    @property
    @abstractmethod
    def family(self) -> Family:
        """
        Curve family.
        """

    @property
    @abstractmethod
    def quotient_degree(self) -> int:
        """
        Degree p_i of the projection to the next level.

        Raises:
            CurveError: If the curve has no quotient.
        """

    @property
    @abstractmethod
    def mu_index(self) -> int:
        """
        Coordinate that serves as partition function for the curve's own quotient.
        """

    @abstractmethod
    def genus(self) -> int:
        """
        Genus by closed formula.
        """

    @abstractmethod
    def enumerate_points(self) -> List[CurvePoint]:
        """
        All rational points, sorted, infinity last.
        """

    @abstractmethod
    def quotient(self) -> AbstractCurve:
        """
        The curve one level down.

        Raises:
            CurveError: If the curve has no quotient.
        """

    @abstractmethod
    def project_many(self, coords: galois.FieldArray) -> galois.FieldArray:
        """
        Apply the quotient map to a matrix of affine coordinates, one point per row.
        """

    @abstractmethod
    def fiber(self, point: CurvePoint) -> List[CurvePoint]:
        """
        Preimages of a point of the quotient curve.

        Raises:
            CurveError: If the point is a ramification point.
        """

    @abstractmethod
    def check_divisor(self, divisor: Divisor) -> None:
        """
        Refuse divisors outside the distinguished support.

        Raises:
            CurveError: On foreign support or level.
        """

    @abstractmethod
    def basis(self, divisor: Divisor) -> List[BasisFunction]:
        """
        Explicit basis of the Riemann-Roch space L(D).
        """

    @abstractmethod
    def principal_divisor(self, function: str) -> Divisor:
        """
        Divisor of one of the curve's elementary functions.

        Raises:
            CurveError: If the function is not supported.
        """

    @abstractmethod
    def split_divisor(self, divisor: Divisor, j: int) -> Divisor:
        """
        Divisor E_j on the quotient curve with L(D) = sum of mu^j L(E_j).
        """

    @abstractmethod
    def pole_divisor(self, function: BasisFunction) -> Divisor:
        """
        Pole divisor of a basis or balancing function.
        """

    @abstractmethod
    def evaluate_many(
        self, function: BasisFunction, coords: galois.FieldArray
    ) -> galois.FieldArray:
        """
        Evaluate a function on a matrix of affine coordinates, one point per row.

        Raises:
            PoleError: If a point is a pole.
        """

    def coordinates(self, points) -> galois.FieldArray:
        """
        Matrix of affine coordinates, one point per row.

        Raises:
            CurveError: If a point is at infinity.
        """
        if any(point.infinity for point in points):
            raise CurveError("Point at infinity has no affine coordinates")
        return self._spec.field([list(point.coords) for point in points])

    def project(self, point: CurvePoint) -> CurvePoint:
        """
        Image of a point under the quotient map.

        Raises:
            CurveError: If the curve has no quotient.
        """
        target = self.quotient()
        if point.infinity:
            return target.infinity
        image = self.project_many(self.coordinates([point]))[0]
        return CurvePoint(target.level, tuple(int(c) for c in image))

    def evaluate(self, function: BasisFunction, point: CurvePoint) -> galois.FieldArray:
        """
        Value of a function at one point.

        Raises:
            PoleError: If the point is a pole.
        """
        if point.infinity:
            if any(function.exponents) or function.shift:
                raise PoleError(f"{function} has a pole at infinity")
            return self._spec.field(1)
        return self.evaluate_many(function, self.coordinates([point]))[0]

    def _check_point(self, point: CurvePoint) -> None:
        if point.level != self._level:
            raise CurveError(f"Point {point} is not on a level {self._level} curve")
