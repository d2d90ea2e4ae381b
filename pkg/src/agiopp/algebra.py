# Finite field layer of agiopp.
# (C) 2026 The agiopp authors

# SPDX-License-Identifier: BSD-3-Clause

"""
Finite fields, roots of unity and small-degree interpolation.

All arithmetic is delegated to :py:mod:`galois`. A :py:class:`FieldSpec` is the portable
description of a field (it is what proof files store); :py:attr:`FieldSpec.field` returns the
matching :py:mod:`galois` array class.
"""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass
from functools import lru_cache
from struct import pack, unpack_from
from typing import Iterable, Sequence, Tuple, Type

import galois
import numpy as np

from .errors import FieldError, ProofFormatError

logger = logging.getLogger(__name__)

#: Field elements and arrays of them are :py:class:`galois.FieldArray` instances.
FieldElement = galois.FieldArray

#: Univariate polynomials over a field.
Poly = galois.Poly

#: Largest supported field order. Elements must serialize into at most 16 bytes.
MAX_FIELD_ORDER = 2 ** 128


@lru_cache(maxsize=None)
def _galois_field(p: int, k: int, modulus: Tuple[int, ...]) -> Type[galois.FieldArray]:
    if k == 1:
        return galois.GF(p)
    prime_field = galois.GF(p)
    irreducible = galois.Poly(list(reversed(modulus)), field=prime_field)
    return galois.GF(p ** k, irreducible_poly=irreducible)


@dataclass(frozen=True)
class FieldSpec:
    """
    Portable description of a finite field F_{p^k}.
    """

    #: Characteristic
    characteristic: int

    #: Extension degree over the prime field
    degree: int

    #: Coefficients of the monic irreducible modulus, low to high. Empty for prime fields.
    modulus: Tuple[int, ...] = ()

    @property
    def order(self) -> int:
        """
        Number of field elements.
        """
        return self.characteristic ** self.degree

    @property
    def element_size(self) -> int:
        """
        Number of bytes of one serialized element.
        """
        return ((self.order - 1).bit_length() + 7) // 8

    @property
    def field(self) -> Type[galois.FieldArray]:
        """
        The :py:mod:`galois` field class. Built once per process and cached.
        """
        return _galois_field(self.characteristic, self.degree, self.modulus)

    def __call__(self, values) -> galois.FieldArray:
        """
        Convert integers (or nested lists of them) to field elements.
        """
        return self.field(values)

    def __str__(self) -> str:
        if self.degree == 1:
            return f"GF({self.characteristic})"
        return f"GF({self.characteristic}^{self.degree})"


def make_field(p: int, k: int = 1) -> FieldSpec:
    """
    Build the description of F_{p^k} with a deterministic modulus.

    The modulus is the lexicographically smallest monic irreducible polynomial of degree k, so
    that serialized elements mean the same thing in every run.

    Args:
        p: Characteristic
        k: Extension degree

    Returns:
        Field description

    Raises:
        FieldError: If p is not prime, k < 1 or the field is too large.
    """
    if k < 1:
        raise FieldError(f"Extension degree must be positive, got {k}")
    if p < 2 or not galois.is_prime(p):
        raise FieldError(f"{p} is not prime")
    if p ** k > MAX_FIELD_ORDER:
        raise FieldError(f"Field of order {p}^{k} exceeds the representation budget")

    if k == 1:
        modulus: Tuple[int, ...] = ()
    else:
        poly = galois.irreducible_poly(p, k, method="min")
        modulus = tuple(int(c) for c in reversed(poly.coeffs))

    spec = FieldSpec(p, k, modulus)
    logger.debug("Field %s with modulus %s", spec, modulus)
    return spec


def primitive_root_of_unity(spec: FieldSpec, n: int) -> galois.FieldArray:
    """
    Get an element of multiplicative order exactly ``n``.

    Args:
        spec: Field
        n: Order of the root

    Raises:
        FieldError: If n does not divide |F| - 1.
    """
    if n < 1 or (spec.order - 1) % n:
        raise FieldError(f"{n} does not divide |F| - 1 = {spec.order - 1}")
    field = spec.field
    return field.primitive_element ** ((spec.order - 1) // n)


def interpolate(xs: galois.FieldArray, ys: galois.FieldArray) -> galois.Poly:
    """
    Lagrange interpolation of a polynomial of degree < len(xs).

    Args:
        xs: Pairwise distinct abscissae
        ys: Values

    Returns:
        The unique interpolating polynomial

    Raises:
        FieldError: If abscissae repeat or the lengths differ.
    """
    if len(xs) != len(ys) or len(xs) == 0:
        raise FieldError(f"Cannot interpolate {len(xs)} abscissae with {len(ys)} values")
    if len(set(int(x) for x in xs)) != len(xs):
        raise FieldError("Duplicate abscissae in interpolation")
    if len(xs) == 1:
        return galois.Poly([ys[0]], field=type(ys))
    return galois.lagrange_poly(xs, ys)


def coefficients(poly: galois.Poly, size: int) -> galois.FieldArray:
    """
    Coefficients of ``poly`` from low to high degree, zero padded to ``size`` entries.
    """
    low_to_high = poly.coeffs[::-1]
    if len(low_to_high) > size:
        raise FieldError(
            f"Polynomial of degree {poly.degree} has more than {size} coefficients"
        )
    out = poly.field.Zeros(size)
    out[: len(low_to_high)] = low_to_high
    return out


def as_ints(values: galois.FieldArray) -> np.ndarray:
    """
    Integer representation of field elements.
    """
    return np.asarray(values.view(np.ndarray))


def random_elements(spec: FieldSpec, shape, rng: np.random.Generator) -> galois.FieldArray:
    """
    Uniform random field elements drawn from a seeded generator.
    """
    return spec.field.Random(shape, seed=rng)


def element_to_bytes(spec: FieldSpec, value) -> bytes:
    """
    Serialize one element little-endian into :py:attr:`FieldSpec.element_size` bytes.
    """
    return int(value).to_bytes(spec.element_size, "little")


def elements_to_bytes(spec: FieldSpec, values: Iterable) -> bytes:
    """
    Serialize a sequence of elements back to back.
    """
    size = spec.element_size
    return b"".join(int(v).to_bytes(size, "little") for v in values)


def elements_from_bytes(
    spec: FieldSpec, data: bytes, count: int, offset: int = 0
) -> Tuple[int, ...]:
    """
    Parse ``count`` serialized elements starting at ``offset``.

    Raises:
        ProofFormatError: If the data is truncated or an element is out of range.
    """
    size = spec.element_size
    end = offset + size * count
    if end > len(data):
        raise ProofFormatError(f"Truncated element data: need {end} bytes, have {len(data)}")
    out = []
    for pos in range(offset, end, size):
        value = int.from_bytes(data[pos : pos + size], "little")
        if value >= spec.order:
            raise ProofFormatError(f"Element {value} out of range for {spec}")
        out.append(value)
    return tuple(out)


def spec_to_bytes(spec: FieldSpec) -> bytes:
    """
    Serialize a field description as (p, k, modulus coefficients).
    """
    p = spec.characteristic
    p_bytes = p.to_bytes((p.bit_length() + 7) // 8, "little")
    out = pack("<B", len(p_bytes)) + p_bytes + pack("<BB", spec.degree, len(spec.modulus))
    return out + b"".join(c.to_bytes(len(p_bytes), "little") for c in spec.modulus)


def spec_from_bytes(data: bytes, offset: int = 0) -> Tuple[FieldSpec, int]:
    """
    Parse a field description.

    Returns:
        The description and the offset just behind it

    Raises:
        ProofFormatError: If the data is malformed.
    """
    try:
        (p_len,) = unpack_from("<B", data, offset)
        offset += 1
        p = int.from_bytes(data[offset : offset + p_len], "little")
        offset += p_len
        k, count = unpack_from("<BB", data, offset)
        offset += 2
        modulus = []
        for _ in range(count):
            chunk = data[offset : offset + p_len]
            if len(chunk) != p_len:
                raise ProofFormatError("Truncated field modulus")
            modulus.append(int.from_bytes(chunk, "little"))
            offset += p_len
    except Exception as ex:
        if isinstance(ex, ProofFormatError):
            raise
        raise ProofFormatError(f"Malformed field description: {ex}") from ex

    spec = FieldSpec(p, k, tuple(modulus))
    if k == 1 and modulus or k > 1 and len(modulus) != k + 1:
        raise ProofFormatError(f"Inconsistent modulus for {spec}")
    return spec, offset


def field_id(spec: FieldSpec) -> int:
    """
    32 bit identifier of a field, used in word file headers.
    """
    return int.from_bytes(hashlib.sha256(spec_to_bytes(spec)).digest()[:4], "little")


def vandermonde_inverse(xs: galois.FieldArray) -> galois.FieldArray:
    """
    Inverse of the matrix ``V[a, k] = xs[a] ** k``.

    Multiplying it with values at ``xs`` gives the low-to-high coefficients of the interpolant.
    """
    field = type(xs)
    size = len(xs)
    matrix = field.Zeros((size, size))
    for k in range(size):
        matrix[:, k] = xs ** k
    try:
        return np.linalg.inv(matrix)
    except np.linalg.LinAlgError as ex:
        raise FieldError("Duplicate abscissae in interpolation") from ex


def prime_factors(n: int) -> Sequence[int]:
    """
    Prime factors of ``n`` in ascending order, repeated by multiplicity.
    """
    if n == 1:
        return []
    primes, multiplicities = galois.factors(n)
    return [p for p, e in zip(primes, multiplicities) for _ in range(e)]
