from fractions import Fraction

import pytest

from agiopp.abstract import Family
from agiopp.algebra import make_field
from agiopp.curves import kummer_domain, tower_domain
from agiopp.errors import CodeError, CurveError
from agiopp.kummer import KummerCurve
from agiopp.line import LineCurve
from agiopp.presets import preset
from agiopp.rrbasis import (
    BasisFunction,
    Divisor,
    distance_to_code,
    encode,
    floor_divisor,
    generator_matrix,
    hu_yang_basis,
    in_code,
    min_distance_exhaustive,
    rank,
    tower_weight,
)
from agiopp.tower import TowerCurve


@pytest.fixture(scope="module")
def f4_curve():
    return KummerCurve(make_field(2, 2), 3, [0, 1])


@pytest.fixture(scope="module")
def hermitian_curve():
    config = preset("hermitian")
    spec = config.spec
    return KummerCurve(spec, 5, config.kummer_roots(spec))


def test_divisor_arithmetic():
    a = Divisor.of(0, {"Pinf": 3, "P1": 1})
    b = Divisor.of(0, {"P1": 1, "P2": -2})
    assert (a + b).terms == (("P1", 2), ("P2", -2), ("Pinf", 3))
    assert (a - a).terms == ()
    assert (2 * a).degree == 8
    assert Divisor(0) <= a
    assert not a <= b
    assert b.negative_part() == Divisor.of(0, {"P2": 2})
    assert floor_divisor(Divisor.of(0, {"Pinf": -1, "P1": 5}), 3) == Divisor.of(
        0, {"Pinf": -1, "P1": 1}
    )
    assert Divisor.at_infinity(0, 4).is_one_point
    assert not a.is_one_point
    with pytest.raises(ValueError):
        a + Divisor.at_infinity(1, 1)
    with pytest.raises(ValueError):
        a.divide_exact(3)


def _check_riemann_roch(curve, divisor):
    basis = curve.basis(divisor)
    if divisor.degree >= 2 * curve.genus() - 1:
        assert len(basis) == divisor.degree - curve.genus() + 1
    for function in basis:
        assert Divisor(curve.level) <= curve.function_divisor(function) + divisor
    return basis


@pytest.mark.parametrize(
    "terms", [{"Pinf": 3}, {"Pinf": 2, "P1": 1}, {"Pinf": 5, "P2": -1}, {"P1": 2, "P2": 2}]
)
def test_kummer_basis_dimension(f4_curve, terms):
    _check_riemann_roch(f4_curve, Divisor.of(0, terms))


@pytest.mark.parametrize("degree", [11, 15, 20, 26])
def test_hermitian_basis_dimension(hermitian_curve, degree):
    basis = _check_riemann_roch(hermitian_curve, Divisor.at_infinity(0, degree))
    assert all(function.shift == 0 for function in basis)


def test_hermitian_basis_below_genus_bound(hermitian_curve):
    # Weierstrass semigroup <4, 5> at infinity: 0, 4, 5, 8, 9, 10
    assert len(hermitian_curve.basis(Divisor.at_infinity(0, 10))) == 6


def test_kummer_basis_refuses_foreign_support(f4_curve):
    with pytest.raises(CurveError):
        f4_curve.basis(Divisor.of(0, {"P3": 1}))
    with pytest.raises(CurveError):
        f4_curve.basis(Divisor.at_infinity(1, 1))


def test_split_divisors_decompose_the_space(hermitian_curve):
    divisor = Divisor.at_infinity(0, 15)
    quotient = hermitian_curve.quotient()
    dims = [
        len(quotient.basis(hermitian_curve.split_divisor(divisor, j)))
        for j in range(hermitian_curve.quotient_degree)
    ]
    assert dims == [4, 3, 2, 1, 0]
    assert sum(dims) == len(hermitian_curve.basis(divisor))


@pytest.mark.parametrize("q, level, degree", [(2, 1, 5), (2, 2, 11), (4, 1, 12), (4, 2, 120)])
def test_tower_basis_dimension(q, level, degree):
    spec = make_field(2, {2: 2, 4: 4}[q])
    curve = TowerCurve(spec, q, level)
    basis = curve.basis(Divisor.at_infinity(level, degree))
    assert degree >= 2 * curve.genus() - 1
    assert len(basis) == degree - curve.genus() + 1
    assert all(tower_weight(q, level, f.exponents) <= degree for f in basis)
    assert all(f.exponents[k] < q for f in basis for k in range(1, level + 1))


def test_tower_basis_refuses_origin():
    curve = TowerCurve(make_field(2, 2), 2, 1)
    with pytest.raises(CurveError):
        curve.basis(Divisor.of(1, {"Pinf": 4, "Porigin": 1}))


def test_line_basis():
    curve = LineCurve(make_field(7), 0)
    basis = curve.basis(Divisor.at_infinity(0, 3))
    assert [f.exponents for f in basis] == [(0,), (1,), (2,), (3,)]
    assert curve.basis(Divisor.at_infinity(0, -1)) == []


def test_encode_matches_pointwise_evaluation(f4_curve):
    domain = kummer_domain(f4_curve)
    basis = f4_curve.basis(Divisor.at_infinity(0, 3))
    field = f4_curve.spec.field
    message = field([1, 2, 3])
    word = encode(message, basis, domain)
    for k, point in enumerate(domain.points):
        expected = field(0)
        for coefficient, function in zip(message, basis):
            expected += coefficient * f4_curve.evaluate(function, point)
        assert word[k] == expected
    with pytest.raises(CodeError):
        encode(field([1, 2]), basis, domain)


def test_code_membership_and_distance(f4_curve):
    domain = kummer_domain(f4_curve)
    generator = generator_matrix(f4_curve.basis(Divisor.at_infinity(0, 3)), domain)
    assert rank(generator) == 3
    assert min_distance_exhaustive(generator) == Fraction(1, 2)

    field = f4_curve.spec.field
    word = field([1, 0, 2, 3, 1, 1])
    codeword = field([1, 1, 0]) @ generator
    assert in_code(codeword, generator, 3)
    assert distance_to_code(codeword, generator) == 0
    noisy = codeword.copy()
    noisy[0] += field(1)
    assert not in_code(noisy, generator, 3)
    assert distance_to_code(noisy, generator) == Fraction(1, 6)
    assert distance_to_code(word, generator) <= Fraction(1, 2)


def test_exhaustive_enumeration_is_bounded(hermitian_curve):
    domain = kummer_domain(hermitian_curve)
    generator = generator_matrix(hermitian_curve.basis(Divisor.at_infinity(0, 15)), domain)
    with pytest.raises(CodeError):
        min_distance_exhaustive(generator)


def test_tower_code_on_full_domain():
    curve = TowerCurve(make_field(2, 2), 2, 1)
    domain = tower_domain(curve)
    basis = curve.basis(Divisor.at_infinity(1, 5))
    generator = generator_matrix(basis, domain)
    assert generator.shape == (5, 8)
    assert rank(generator) == 5
    assert BasisFunction(Family.TOWER, (1, 1)) in basis


def test_hu_yang_basis(f4_curve):
    basis = hu_yang_basis(f4_curve, Divisor.at_infinity(0, 3))
    assert basis == f4_curve.basis(Divisor.at_infinity(0, 3))
    assert len(basis) == 3
    assert len(hu_yang_basis(f4_curve, Divisor.at_infinity(0, 1))) == 1
