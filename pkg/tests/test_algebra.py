import numpy as np
import pytest

from agiopp.algebra import (
    FieldSpec,
    coefficients,
    elements_from_bytes,
    elements_to_bytes,
    field_id,
    interpolate,
    make_field,
    prime_factors,
    primitive_root_of_unity,
    spec_from_bytes,
    spec_to_bytes,
    vandermonde_inverse,
)
from agiopp.errors import FieldError, ProofFormatError


def test_make_field_modulus_is_deterministic():
    spec = make_field(2, 4)
    assert spec.order == 16
    assert spec.modulus == (1, 1, 0, 0, 1)
    assert make_field(2, 4) == spec
    assert str(spec) == "GF(2^4)"
    assert make_field(7).modulus == ()


@pytest.mark.parametrize("p, k", [(4, 1), (1, 1), (2, 0), (2, 200)])
def test_make_field_rejects(p, k):
    with pytest.raises(FieldError):
        make_field(p, k)


def test_primitive_root_of_unity():
    spec = make_field(2, 4)
    for n in (1, 3, 5, 15):
        w = primitive_root_of_unity(spec, n)
        powers = [int(w ** k) for k in range(1, n + 1)]
        assert powers[-1] == 1
        assert 1 not in powers[:-1]
    with pytest.raises(FieldError):
        primitive_root_of_unity(spec, 4)


def test_interpolate_recovers_polynomial():
    gf = make_field(17).field
    xs = gf([1, 2, 3, 5])
    poly_coeffs = gf([3, 0, 7, 1])
    ys = gf([int(sum((poly_coeffs[k] * x ** k for k in range(4)), gf(0))) for x in xs])
    got = coefficients(interpolate(xs, ys), 4)
    assert np.array_equal(got, poly_coeffs)


def test_interpolate_rejects_duplicates():
    gf = make_field(17).field
    with pytest.raises(FieldError):
        interpolate(gf([1, 1]), gf([2, 3]))
    with pytest.raises(FieldError):
        interpolate(gf([1, 2]), gf([2]))


def test_coefficients_pads_and_rejects():
    gf = make_field(5).field
    poly = interpolate(gf([0, 1]), gf([2, 2]))
    assert coefficients(poly, 3).tolist() == [2, 0, 0]
    with pytest.raises(FieldError):
        coefficients(interpolate(gf([0, 1, 2]), gf([0, 1, 4])), 2)


def test_vandermonde_inverse():
    gf = make_field(2, 4).field
    xs = gf([1, 2, 7])
    inverse = vandermonde_inverse(xs)
    matrix = gf.Zeros((3, 3))
    for k in range(3):
        matrix[:, k] = xs ** k
    assert np.array_equal(inverse @ matrix, gf.Identity(3))


def test_elements_serialization():
    spec = make_field(2, 4)
    data = elements_to_bytes(spec, [0, 15, 7])
    assert data == bytes([0, 15, 7])
    assert elements_from_bytes(spec, data, 3) == (0, 15, 7)
    assert elements_from_bytes(spec, b"\xff" + data, 2, 1) == (0, 15)
    with pytest.raises(ProofFormatError):
        elements_from_bytes(spec, data, 4)
    with pytest.raises(ProofFormatError):
        elements_from_bytes(spec, bytes([16]), 1)


def test_large_element_size():
    spec = FieldSpec(2 ** 61 - 1, 2, (1, 0, 1))
    assert spec.element_size == 16
    value = spec.order - 1
    assert elements_from_bytes(spec, elements_to_bytes(spec, [value]), 1) == (value,)


def test_spec_serialization():
    spec = make_field(3, 2)
    data = b"x" + spec_to_bytes(spec)
    parsed, offset = spec_from_bytes(data, 1)
    assert parsed == spec
    assert offset == len(data)
    assert field_id(spec) != field_id(make_field(2, 3))


def test_prime_factors():
    assert prime_factors(1) == []
    assert prime_factors(2 ** 16) == [2] * 16
    assert prime_factors(60) == [2, 2, 3, 5]
