# Kummer curves of agiopp.
# (C) 2026 The agiopp authors

# SPDX-License-Identifier: BSD-3-Clause

"""
Kummer curves ``y^N = f(x) = prod (x - a_l)`` and their cyclic quotient chain.

Level ``i`` of the chain is the curve ``y^{N_i} = f(x)`` with ``N_i`` the product of the prime
factors ``p_i, p_{i+1}, ...`` of ``N`` (ascending order). The quotient map is
``(x, y) -> (x, y^{p_i})``.
"""

from __future__ import annotations

import math
from typing import List, Sequence, Tuple

import galois
import numpy as np

from .abstract import AbstractCurve, CurvePoint, Family
from .algebra import FieldSpec, as_ints, prime_factors
from .errors import CurveError, PoleError
from .rrbasis import INFINITY, BasisFunction, Divisor, floor_divisor, hu_yang_basis


class KummerCurve(AbstractCurve):
    """
    Level ``i`` of the quotient chain of ``y^N = f(x)``.

    Args:
        spec: Field of definition
        n: Exponent N of the top curve
        roots: The distinct roots of f. Stored in ascending order, ``a_1`` is the smallest.
        level: Position in the quotient chain
    """

    # Exponent of the top curve
    _top_exponent: int

    # Roots of f as integers, ascending
    _roots: Tuple[int, ...]

    # Prime factors of the top exponent, ascending
    _primes: Tuple[int, ...]

    def __init__(self, spec: FieldSpec, n: int, roots: Sequence[int], level: int = 0) -> None:
        super().__init__(spec, level)
        roots = tuple(sorted(int(r) for r in roots))
        if n < 1:
            raise CurveError(f"Exponent must be positive, got {n}")
        if n % spec.characteristic == 0:
            raise CurveError(f"gcd(N, |F|) != 1 for N = {n} over {spec}")
        if not roots:
            raise CurveError("f needs at least one root")
        if len(set(roots)) != len(roots):
            raise CurveError(f"Roots of f are not distinct: {roots}")
        if any(r < 0 or r >= spec.order for r in roots):
            raise CurveError(f"Roots {roots} are not elements of {spec}")
        if math.gcd(n, len(roots)) != 1:
            raise CurveError(f"gcd(N, m) != 1 for N = {n}, m = {len(roots)}")

        self._top_exponent = n
        self._roots = roots
        self._primes = tuple(prime_factors(n))
        if level > len(self._primes):
            raise CurveError(f"Level {level} beyond the end of the chain of N = {n}")

    @property
    def family(self) -> Family:
        return Family.KUMMER

    @property
    def top_exponent(self) -> int:
        """
        Exponent N of the top curve.
        """
        return self._top_exponent

    @property
    def exponent(self) -> int:
        """
        Exponent N_i of this level.
        """
        return math.prod(self._primes[self._level :])

    @property
    def primes(self) -> Tuple[int, ...]:
        """
        Prime factors of N, ascending.
        """
        return self._primes

    @property
    def roots(self) -> Tuple[int, ...]:
        return self._roots

    @property
    def m(self) -> int:
        """
        Degree of f.
        """
        return len(self._roots)

    @property
    def quotient_degree(self) -> int:
        if self._level >= len(self._primes):
            raise CurveError("Last Kummer level has no cyclic quotient")
        return self._primes[self._level]

    @property
    def mu_index(self) -> int:
        return 1

    @property
    def kappa(self) -> int:
        """
        ``(m + 1) / N_i``, an integer when ``m = -1 mod N``.
        """
        return (self.m + 1) // self.exponent

    def genus(self) -> int:
        return (self.exponent - 1) * (self.m - 1) // 2

    def f_values(self, xs: galois.FieldArray) -> galois.FieldArray:
        """
        Evaluate f.
        """
        field = self._spec.field
        out = field.Ones(len(xs))
        for root in self._roots:
            out = out * (xs - field(root))
        return out

    def enumerate_points(self) -> List[CurvePoint]:
        field = self._spec.field
        xs = field.elements
        xs_int = as_ints(xs)
        powers = as_ints(xs ** self.exponent)
        values = as_ints(self.f_values(xs))

        points = []
        for x, value in zip(xs_int, values):
            for y in xs_int[np.nonzero(powers == value)[0]]:
                points.append(CurvePoint(self._level, (int(x), int(y))))
        points.append(self.infinity)
        return points

    def fixed_points(self) -> List[CurvePoint]:
        """
        Points fixed by the cyclic action: ``(a_l, 0)`` and infinity.
        """
        return [CurvePoint(self._level, (r, 0)) for r in self._roots] + [self.infinity]

    def quotient(self) -> KummerCurve:
        if self._level >= len(self._primes):
            raise CurveError("Last Kummer level has no cyclic quotient")
        return KummerCurve(self._spec, self._top_exponent, self._roots, self._level + 1)

    def project_many(self, coords: galois.FieldArray) -> galois.FieldArray:
        out = coords.copy()
        out[:, 1] = coords[:, 1] ** self.quotient_degree
        return out

    def fiber(self, point: CurvePoint) -> List[CurvePoint]:
        p = self.quotient_degree
        if point.level != self._level + 1:
            raise CurveError(f"{point} is not on the quotient of a level {self._level} curve")
        if point.infinity or point.coords[1] == 0:
            raise CurveError(f"{point} is a ramification point")

        x, image = point.coords
        field = self._spec.field
        ys = field.elements
        hits = as_ints(ys)[np.nonzero(as_ints(ys ** p) == image)[0]]
        if len(hits) != p:
            raise CurveError(f"Fiber over {point} has {len(hits)} points, expected {p}")
        return [CurvePoint(self._level, (x, int(y))) for y in hits]

    def check_divisor(self, divisor: Divisor) -> None:
        allowed = {INFINITY} | {f"P{l}" for l in range(1, self.m + 1)}
        if divisor.level != self._level:
            raise CurveError(f"Divisor of level {divisor.level} on a level {self._level} curve")
        if not set(divisor.support) <= allowed:
            raise CurveError(f"Divisor {divisor} is not supported on roots and infinity")

    def basis(self, divisor: Divisor) -> List[BasisFunction]:
        return hu_yang_basis(self, divisor)

    def principal_divisor(self, function: str) -> Divisor:
        """
        Divisor of ``"y"`` or of ``"x-a<l>"`` (the factor ``x - a_l`` of f).
        """
        if function == "y":
            terms = {f"P{l}": 1 for l in range(1, self.m + 1)}
            terms[INFINITY] = -self.m
            return Divisor.of(self._level, terms)
        if function.startswith("x-a"):
            try:
                l = int(function[3:])
            except ValueError:
                l = 0
            if 1 <= l <= self.m:
                n = self.exponent
                return Divisor.of(self._level, {f"P{l}": n, INFINITY: -n})
        raise CurveError(f"Unsupported function {function!r} on a Kummer curve")

    def function_divisor(self, function: BasisFunction) -> Divisor:
        """
        Principal divisor of a basis or balancing function.
        """
        out = self.principal_divisor("y") * function.exponents[0]
        out = out + self.principal_divisor("x-a1") * function.shift
        for l, e in enumerate(function.exponents[1:], start=2):
            out = out + self.principal_divisor(f"x-a{l}") * e
        return out

    def pole_divisor(self, function: BasisFunction) -> Divisor:
        return self.function_divisor(function).negative_part()

    def split_divisor(self, divisor: Divisor, j: int) -> Divisor:
        p = self.quotient_degree
        moved = (divisor + self.principal_divisor("y") * j).pushforward(self._level + 1)
        return floor_divisor(moved, p)

    def evaluate_many(
        self, function: BasisFunction, coords: galois.FieldArray
    ) -> galois.FieldArray:
        field = self._spec.field
        xs = coords[:, 0]
        factors = [
            (coords[:, 1], function.exponents[0]),
            (xs - field(self._roots[0]), function.shift),
        ]
        factors += [(xs - field(r), e) for r, e in zip(self._roots[1:], function.exponents[1:])]

        numerator = field.Ones(len(coords))
        denominator = field.Ones(len(coords))
        for base, e in factors:
            if e > 0:
                numerator = numerator * base ** e
            elif e < 0:
                denominator = denominator * base ** (-e)
        if np.any(denominator == 0):
            raise PoleError(f"{function} has a pole on the given points")
        return numerator / denominator
