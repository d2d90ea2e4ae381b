import math
from fractions import Fraction

import pytest

from agiopp.errors import ConfigError
from agiopp.foldplan import constant_rate_degree
from agiopp.presets import (
    MERSENNE,
    RATE_ROWS,
    RateRow,
    mersenne_curve,
    preset,
    rate_row_report,
    rate_table,
    rs_bench_config,
    worked_example,
)


def test_unknown_preset():
    with pytest.raises(ConfigError) as info:
        preset("elliptic")
    assert "f4-kummer" in str(info.value)


def test_preset_overrides():
    config = preset("tower-q2", degree=9, seed=4)
    assert (config.degree, config.seed) == (9, 4)
    assert preset("tower-q2").degree == 8


def test_bench_config():
    config = rs_bench_config(10)
    assert config.domain == ("subgroup", 1024)
    assert config.degree == 127
    assert rs_bench_config(10, Fraction(1, 4)).degree == 255


def test_mersenne_curve():
    curve = mersenne_curve()
    assert curve.spec.order == MERSENNE ** 2
    assert curve.genus() == 2 ** 16 - 1


def test_worked_example():
    report = worked_example()
    assert report["genus"] == 2 ** 16 - 1
    assert report["dimension"] == 2 ** 16 + 2
    assert report["degree"] == 2 ** 17
    assert report["n"] == 2 ** 20
    assert report["lambda"] == "7/8"
    assert math.isclose(float(report["err_query"]), 0.72728, abs_tol=1e-5)
    assert float(report["log2_err_commit"]) < -91
    assert report["t"] == 199
    assert float(report["log2_total_err"]) <= -90


def test_worked_example_smaller_target():
    assert worked_example(kappa=40)["t"] < 199


def test_rate_table():
    rows = rate_table()
    assert len(rows) == len(RATE_ROWS)
    assert all(row["certified"] for row in rows)
    first = rows[0]
    assert (first["q"], first["level"], first["rate"]) == (16, 3, "1/8")
    assert first["degrees"][-1] == constant_rate_degree(16, 3, Fraction(1, 8))


def test_rate_row_properties():
    row = RateRow(16, 3, Fraction(1, 8), Fraction(1, 3))
    assert row.rho == Fraction(2, 3)
    assert row.alpha == Fraction(2, 3)
    report = rate_row_report(row)
    assert Fraction(report["rs_rate"]) <= Fraction(report["rs_rate_bound"])
