import math
from fractions import Fraction

import pytest

from agiopp.errors import SoundnessError
from agiopp.soundness import (
    SoundnessParams,
    choose_epsilon,
    closed_form_radius,
    err_commit,
    err_query,
    gamma,
    johnson,
    johnson_iter,
    lower,
    min_repetitions,
    parse_real,
    precision,
    query_repetitions,
    soundness_report,
    total_err,
    upper,
)


def _close(x, value, tol=1e-12):
    return lower(x) - tol <= value <= upper(x) + tol


def test_parse_real():
    with precision():
        assert _close(parse_real("2^-3"), 0.125)
        assert _close(parse_real("2^(-1/2)"), 2 ** -0.5)
        assert _close(parse_real("3/4"), 0.75)
        assert _close(parse_real(Fraction(1, 3)), 1 / 3)
        assert _close(parse_real(5), 5)
        with pytest.raises(SoundnessError):
            parse_real("two")


def test_intervals_are_tight():
    x = johnson("2^-6.55", "7/8")
    assert upper(x) - lower(x) < 1e-30


def test_johnson():
    assert _close(johnson(0, "3/4"), 0.5)
    assert _close(johnson(0, 0), 0)
    assert _close(johnson_iter("1/8", "3/4", 0), 0.75)
    once = johnson("1/8", "3/4")
    assert _close(johnson_iter("1/8", "3/4", 2), upper(johnson("1/8", upper(once))), 1e-9)
    with pytest.raises(SoundnessError):
        johnson("2", "1/2")
    with pytest.raises(SoundnessError):
        johnson_iter(0, "1/2", -1)


def test_gamma_and_radius():
    assert _close(gamma("3/4", 0, 1), 0.375)
    assert _close(closed_form_radius("3/4", 0, 1), 0.5)
    # The iterated Johnson bound shrinks with every quotient.
    assert upper(gamma("1/2", "2^-8", 3)) < upper(gamma("1/2", "2^-8", 1))
    with pytest.raises(SoundnessError):
        closed_form_radius(1, 0, 2)


def test_error_terms():
    assert _close(err_commit(4, 16, 1, "1/2"), 8)
    assert _close(err_query("1/4", "3/8", 0, 16), 0.75)
    assert _close(err_query("1/2", "3/8", "1/8", 16), 1.125)
    total = total_err(err_commit(4, 16, 1, "1/2"), err_query("1/2", "1/2", 0, 4), 2)
    assert _close(total, 8.25)
    with pytest.raises(SoundnessError):
        err_commit(1, 16, 1, "1/2")
    with pytest.raises(SoundnessError):
        err_commit(4, 16, 1, 0)


def test_repetitions():
    commit = err_commit(4, 2 ** 40, 1, "1/2")
    assert _close(commit, 2.0 ** -33)
    query = err_query("1/2", "1/2", 0, 4)
    assert min_repetitions(commit, query, 10) == 11
    assert query_repetitions(query, 10) == 10
    with pytest.raises(SoundnessError):
        min_repetitions(commit, query, 0)
    with pytest.raises(SoundnessError):
        min_repetitions(err_commit(4, 16, 1, "1/2"), query, 10)
    with pytest.raises(SoundnessError):
        min_repetitions(commit, err_query(0, "1/2", 0, 4), 10)


def test_params_from_plan(hermitian_plan):
    params = SoundnessParams.from_plan(hermitian_plan, "2^-10")
    assert (params.n, params.field_size, params.p_max) == (60, 16, 5)
    assert params.lam == Fraction(3, 4)
    # A 16 element field cannot reach any sensible target.
    assert upper(params.commit()) > 1
    report = soundness_report(params, t=4)
    assert report["t"] == 4
    assert report["lambda"] == "3/4"
    assert report["delta"] is None


def test_choose_epsilon_and_report():
    params = SoundnessParams(2 ** 20, 2 ** 122, 2, Fraction(7, 8), "2^-6", closed_form=True)
    eps = choose_epsilon(params, 90)
    assert eps.startswith("2^")
    report = soundness_report(params.with_eps(eps), kappa=90)
    assert float(report["log2_total_err"]) <= -90
    assert math.isclose(float(report["log2_epsilon"]), float(Fraction(eps[2:])), abs_tol=1e-4)
    with pytest.raises(SoundnessError):
        choose_epsilon(SoundnessParams(2 ** 20, 17, 2, Fraction(7, 8), "2^-6"), 90)


def test_given_distance_enters_err_query():
    base = SoundnessParams(1024, 2 ** 64, 2, Fraction(1, 2), "2^-20")
    near = SoundnessParams(1024, 2 ** 64, 2, Fraction(1, 2), "2^-20", delta="1/100")
    assert upper(near.query()) > upper(base.query())
