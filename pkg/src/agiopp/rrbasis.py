# Divisors and Riemann-Roch bases of agiopp.
# (C) 2026 The agiopp authors

# SPDX-License-Identifier: BSD-3-Clause

"""
Divisor arithmetic, explicit Riemann-Roch bases and the evaluation encoder.

Divisors only carry the distinguished points the folding plans need: the roots ``P1..Pm``
and ``Pinf`` on Kummer curves, ``Pinf`` and the origin ``Porigin`` on tower levels and on
the line.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Dict, List, Mapping, Sequence, Tuple

import galois
import numpy as np

from .abstract import AbstractCurve, CurvePoint, Family
from .errors import CodeError

if TYPE_CHECKING:
    from .curves import EvalDomain
    from .kummer import KummerCurve
    from .tower import TowerCurve

logger = logging.getLogger(__name__)

#: Label of the point at infinity
INFINITY = "Pinf"

#: Label of the common zero of the coordinates on tower levels and the line
ORIGIN = "Porigin"

#: Exhaustive code enumeration limit, in codewords
MAX_CODEWORDS = 2 ** 24

Codeword = galois.FieldArray


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


@dataclass(frozen=True)
class Divisor:
    """
    Formal integer combination of distinguished points.
    """

    #: Level of the curve the divisor lives on
    level: int

    #: Sorted ``(label, coefficient)`` pairs with nonzero coefficients
    terms: Tuple[Tuple[str, int], ...] = ()

    @classmethod
    def of(cls, level: int, coefficients: Mapping[str, int]) -> Divisor:
        """
        Build a divisor from a label to coefficient mapping.
        """
        return cls(level, tuple(sorted((k, int(v)) for k, v in coefficients.items() if v)))

    @classmethod
    def at_infinity(cls, level: int, degree: int) -> Divisor:
        """
        The one-point divisor ``degree * Pinf``.
        """
        return cls.of(level, {INFINITY: degree})

    def __getitem__(self, label: str) -> int:
        return dict(self.terms).get(label, 0)

    @property
    def degree(self) -> int:
        """
        Sum of the coefficients (all distinguished points are rational).
        """
        return sum(v for _, v in self.terms)

    @property
    def support(self) -> Tuple[str, ...]:
        return tuple(k for k, _ in self.terms)

    @property
    def is_one_point(self) -> bool:
        """
        Supported on the point at infinity only.
        """
        return self.support in ((), (INFINITY,))

    def _combine(self, other: Divisor, sign: int) -> Divisor:
        if other.level != self.level:
            raise ValueError(
                f"Cannot combine divisors of levels {self.level} and {other.level}"
            )
        coefficients: Dict[str, int] = dict(self.terms)
        for k, v in other.terms:
            coefficients[k] = coefficients.get(k, 0) + sign * v
        return Divisor.of(self.level, coefficients)

    def __add__(self, other: Divisor) -> Divisor:
        return self._combine(other, 1)

    def __sub__(self, other: Divisor) -> Divisor:
        return self._combine(other, -1)

    def __mul__(self, factor: int) -> Divisor:
        return Divisor.of(self.level, {k: v * factor for k, v in self.terms})

    __rmul__ = __mul__

    def __le__(self, other: Divisor) -> bool:
        diff = other - self
        return all(v >= 0 for _, v in diff.terms)

    def negative_part(self) -> Divisor:
        """
        Minus the negative coefficients, i.e. the pole divisor of a principal divisor.
        """
        return Divisor.of(self.level, {k: -v for k, v in self.terms if v < 0})

    def pushforward(self, level: int) -> Divisor:
        """
        Push forward under a quotient map that fixes every distinguished point.
        """
        return Divisor(level, self.terms)

    def divide_exact(self, n: int) -> Divisor:
        """
        Divide every coefficient by ``n``.

        Raises:
            ValueError: If a coefficient is not divisible.
        """
        if any(v % n for _, v in self.terms):
            raise ValueError(f"{self} is not divisible by {n}")
        return Divisor.of(self.level, {k: v // n for k, v in self.terms})

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{v}*{k}" for k, v in self.terms)


def floor_divisor(divisor: Divisor, n: int) -> Divisor:
    """
    Coefficient-wise floor division, rounding toward minus infinity.

    Args:
        divisor: Divisor to divide
        n: Positive divisor

    Returns:
        The floor divisor
    """
    if n < 1:
        raise ValueError(f"Floor divisor by {n}")
    return Divisor.of(divisor.level, {k: v // n for k, v in divisor.terms})


@dataclass(frozen=True)
class BasisFunction:
    """
    Exponent description of a basis or balancing function.

    Kummer: ``(j, j_2, ..., j_m)`` for ``y^j * prod_{l>=2} (x - a_l)^{j_l}``.
    Tower: ``(a_0, ..., a_i)`` for ``x_0^{a_0} * ... * x_i^{a_i}``.
    Line: ``(e,)`` for ``x^e``.
    """

    #: Family of the curve the function lives on
    family: Family

    #: Exponent tuple
    exponents: Tuple[int, ...]

    #: Extra power of ``x - a_1`` on Kummer curves, used by balancing functions
    shift: int = 0

    def __str__(self) -> str:
        if self.family is Family.KUMMER:
            parts = [f"y^{self.exponents[0]}"] if self.exponents[0] else []
            if self.shift:
                parts.append(f"(x-a1)^{self.shift}")
            parts += [f"(x-a{l + 2})^{e}" for l, e in enumerate(self.exponents[1:]) if e]
        elif self.family is Family.TOWER:
            parts = [f"x{k}^{e}" for k, e in enumerate(self.exponents) if e]
        else:
            parts = [f"x^{self.exponents[0]}"] if self.exponents[0] else []
        return "*".join(parts) or "1"


def hu_yang_basis(curve: KummerCurve, divisor: Divisor) -> List[BasisFunction]:
    """
    Basis of L(D) on a Kummer curve, D supported on the roots and infinity.

    The index set holds every ``j >= -a_1`` with ``j_l = ceil((-j - a_l) / N)`` for the other
    roots and ``m*j + N*sum(j_l) <= b``. Since the left hand side is at least
    ``j - sum(a_l)``, ``j`` is bounded.

    Args:
        curve: Kummer curve at some level
        divisor: ``sum a_l P_l + b Pinf``

    Returns:
        Basis functions ordered lexicographically by exponents
    """
    curve.check_divisor(divisor)
    n = curve.exponent
    m = curve.m
    a = [divisor[f"P{l}"] for l in range(1, m + 1)]
    b = divisor[INFINITY]

    out = []
    j_max = b + sum(abs(x) for x in a[1:]) + n * m
    for j in range(-a[0], j_max + 1):
        shifts = tuple(_ceil_div(-j - a_l, n) for a_l in a[1:])
        if m * j + n * sum(shifts) <= b:
            out.append(BasisFunction(Family.KUMMER, (j,) + shifts))
    return out


def tower_weight(q: int, level: int, exponents: Sequence[int]) -> int:
    """
    Pole order at infinity of ``x_0^{a_0} * ... * x_i^{a_i}`` on tower level ``i``.
    """
    return sum(a * q ** (level - k) * (q + 1) ** k for k, a in enumerate(exponents))


def tower_basis(curve: TowerCurve, m: int) -> List[BasisFunction]:
    """
    Monomial basis of L(m * Pinf) on a tower level.

    Args:
        curve: Tower level ``i``
        m: Degree

    Returns:
        All ``(a_0, ..., a_i)`` with ``a_k < q`` for ``k >= 1`` and weight at most ``m``,
        ordered lexicographically
    """
    q = curve.q
    level = curve.level
    out = []
    if m < 0:
        return out
    top = q ** level
    for tail in itertools.product(range(q), repeat=level):
        rest = tower_weight(q, level, (0,) + tail)
        if rest > m:
            continue
        for a0 in range((m - rest) // top + 1):
            out.append(BasisFunction(Family.TOWER, (a0,) + tail))
    return sorted(out, key=lambda b: b.exponents)


def line_basis(degree: int) -> List[BasisFunction]:
    """
    Monomials ``1, x, ..., x^degree``. Empty for negative degree.
    """
    return [BasisFunction(Family.LINE, (e,)) for e in range(degree + 1)]


def evaluate_basis_function(
    curve: AbstractCurve, function: BasisFunction, point: CurvePoint
) -> galois.FieldArray:
    """
    Value of a basis function at a point.

    Raises:
        PoleError: If the point is a pole.
    """
    return curve.evaluate(function, point)


def evaluation_matrix(
    curve: AbstractCurve, functions: Sequence[BasisFunction], coords: galois.FieldArray
) -> galois.FieldArray:
    """
    Matrix with one row per function and one column per point.
    """
    field = curve.spec.field
    out = field.Zeros((len(functions), len(coords)))
    for row, function in enumerate(functions):
        out[row] = curve.evaluate_many(function, coords)
    return out


def generator_matrix(basis: Sequence[BasisFunction], domain: EvalDomain) -> galois.FieldArray:
    """
    Generator matrix ``G[k, P] = basis[k](P)`` of the evaluation code.
    """
    return evaluation_matrix(domain.curve, basis, domain.coordinates)


def export_generator(matrix: galois.FieldArray) -> List[int]:
    """
    Row-major flat integer export of a generator matrix.
    """
    return [int(v) for v in np.asarray(matrix.view(np.ndarray)).reshape(-1)]


def encode(message, basis: Sequence[BasisFunction], domain: EvalDomain) -> Codeword:
    """
    Evaluate ``sum message[k] * basis[k]`` on the domain.

    Args:
        message: One field element per basis function
        basis: Basis of L(D)
        domain: Evaluation domain

    Returns:
        Codeword aligned with the domain order

    Raises:
        CodeError: If the message length does not match the basis.
    """
    field = domain.curve.spec.field
    message = field(message)
    if len(message) != len(basis):
        raise CodeError(f"Message of length {len(message)} for a basis of size {len(basis)}")
    if not basis:
        return field.Zeros(len(domain))
    return message @ generator_matrix(basis, domain)


def rank(matrix: galois.FieldArray) -> int:
    """
    Rank over the field.
    """
    if matrix.shape[0] == 0:
        return 0
    return int(np.linalg.matrix_rank(matrix))


def in_code(word: galois.FieldArray, generator: galois.FieldArray, generator_rank: int) -> bool:
    """
    Membership by rank: the word lies in the row space of the generator.
    """
    if generator.shape[0] == 0:
        return not np.any(word.view(np.ndarray))
    stacked = np.vstack([generator.view(np.ndarray), word.view(np.ndarray).reshape(1, -1)])
    return rank(type(generator)(stacked)) == generator_rank


def _codewords(generator: galois.FieldArray, chunk: int = 1 << 14):
    field = type(generator)
    k = generator.shape[0]
    order = field.order
    total = order ** k
    if total > MAX_CODEWORDS:
        raise CodeError(f"Exhaustive enumeration of {total} codewords exceeds the limit")
    messages = itertools.product(range(order), repeat=k)
    while True:
        block = list(itertools.islice(messages, chunk))
        if not block:
            return
        yield field(block) @ generator


def min_distance_exhaustive(generator: galois.FieldArray) -> Fraction:
    """
    Exact relative minimum distance by enumerating all codewords.

    Raises:
        CodeError: If the code is too large.
    """
    n = generator.shape[1]
    best = n
    for block in _codewords(generator):
        weights = np.count_nonzero(block.view(np.ndarray), axis=1)
        nonzero = weights[weights > 0]
        if len(nonzero):
            best = min(best, int(nonzero.min()))
    return Fraction(best, n)


def distance_to_code(word: galois.FieldArray, generator: galois.FieldArray) -> Fraction:
    """
    Exact relative distance from a word to the nearest codeword.

    Raises:
        CodeError: If the code is too large.
    """
    n = generator.shape[1]
    target = word.view(np.ndarray)
    best = n
    for block in _codewords(generator):
        distances = np.count_nonzero(block.view(np.ndarray) != target, axis=1)
        best = min(best, int(distances.min()))
    return Fraction(best, n)
