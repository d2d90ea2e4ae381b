# Soundness bounds of agiopp.
# (C) 2026 The agiopp authors

# SPDX-License-Identifier: BSD-3-Clause

"""
Soundness bounds of the folding proximity test, evaluated in interval arithmetic.

Every bound is computed with :py:mod:`mpmath.iv` at :py:data:`PRECISION` bits or more. Reported
values are upper endpoints, so rounding never makes a bound look better than it is. Decisions
(e.g. the number of repetitions) are taken on upper endpoints as well.

Real inputs are :py:class:`fractions.Fraction` values, integers, decimal strings such as
``"0.01"``, fractions such as ``"1/64"`` or powers of two such as ``"2^-6.55"``.
"""

from __future__ import annotations

import logging
import math
import re
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, Optional, Sequence, Union

from mpmath import iv, nstr

from .errors import SoundnessError
from .foldplan import FoldingPlan

logger = logging.getLogger(__name__)

#: Minimum working precision in bits
PRECISION = 128

Real = Union[Fraction, int, str]

_POWER_OF_TWO = re.compile(r"^\s*2\s*\^\s*\(?\s*([-+]?[0-9./]+)\s*\)?\s*$")

#: Grid of log2(epsilon) values scanned by :py:func:`choose_epsilon`
EPSILON_GRID = tuple(Fraction(-k, 20) for k in range(20, 241))


@contextmanager
def precision(bits: int = PRECISION) -> Iterator[None]:
    """
    Run a block at no less than ``bits`` bits of interval precision.
    """
    orig = iv.prec
    try:
        iv.prec = max(bits, orig)
        yield
    finally:
        iv.prec = orig


def parse_real(value: Real):
    """
    Convert a real input into an interval. Must be called inside :py:func:`precision`.

    Raises:
        SoundnessError: If the value cannot be parsed.
    """
    if isinstance(value, str):
        match = _POWER_OF_TWO.match(value)
        if match:
            try:
                exponent = Fraction(match.group(1))
            except ValueError as ex:
                raise SoundnessError(f"Bad exponent in {value!r}") from ex
            return iv.exp(iv.log(2) * _rational(exponent))
        try:
            value = Fraction(value.strip())
        except ValueError as ex:
            raise SoundnessError(f"Cannot parse {value!r} as a real number") from ex
    return _rational(Fraction(value))


def _rational(value: Fraction):
    return iv.mpf(value.numerator) / iv.mpf(value.denominator)


def upper(x) -> float:
    """
    Upper endpoint as float.
    """
    return float(x.b)


def lower(x) -> float:
    return float(x.a)


def _leq(x, y) -> bool:
    # Interval comparisons are True, False or None when undecided.
    return (x <= y) is True


def _min(x, y):
    if _leq(x, y):
        return x
    if _leq(y, x):
        return y
    low = x.a if x.a <= y.a else y.a
    high = x.b if x.b <= y.b else y.b
    return iv.mpf([low, high])


def _check_unit(name: str, x, closed: bool = True) -> None:
    lo, hi = lower(x), upper(x)
    if lo < 0 or hi > 1 or not closed and (hi <= 0 or lo >= 1):
        raise SoundnessError(f"{name} = {nstr(x.mid, 8)} is outside the unit interval")


def _log2(n):
    return iv.log(n) / iv.log(2)


def johnson(eps: Real, lam: Real):
    """
    ``J_eps(lambda) = 1 - sqrt(1 - (1 - eps) lambda)``.

    Raises:
        SoundnessError: If eps or lambda are outside [0, 1].
    """
    with precision():
        e, l = parse_real(eps), parse_real(lam)
        _check_unit("epsilon", e)
        _check_unit("lambda", l)
        return _johnson(e, l)


def _johnson(e, l):
    inner = 1 - (1 - e) * l
    if inner.a < 0:
        # Rounding noise around a zero radicand.
        inner = iv.mpf([0, inner.b if inner.b > 0 else 0])
    return 1 - iv.sqrt(inner)


def johnson_iter(eps: Real, lam: Real, times: int):
    """
    ``J_eps`` applied ``times`` times to lambda.
    """
    if times < 0:
        raise SoundnessError(f"Negative iteration count {times}")
    with precision():
        e, value = parse_real(eps), parse_real(lam)
        _check_unit("epsilon", e)
        _check_unit("lambda", value)
        for _ in range(times):
            value = _johnson(e, value)
        return value


def gamma(lam: Real, eps: Real, p_max: int):
    """
    ``min(J_eps^p_max(lambda), (lambda + eps / 2) / 2)``.
    """
    with precision():
        e, l = parse_real(eps), parse_real(lam)
        return _min(johnson_iter(eps, lam, p_max), (l + e / 2) / 2)


def closed_form_radius(lam: Real, eps: Real, p_max: int):
    """
    ``delta = 1 - (1 - lambda + eps)^(1 / (p_max + 1))``, the closed form estimate of the
    iterated Johnson radius used for quick parameter sizing.
    """
    with precision():
        e, l = parse_real(eps), parse_real(lam)
        base = 1 - l + e
        if lower(base) <= 0:
            raise SoundnessError("1 - lambda + epsilon must be positive")
        return 1 - iv.exp(iv.log(base) / (p_max + 1))


def err_commit(n: int, field_size: int, p_max: int, eps: Real):
    """
    ``(log2 n / |F|) (p_max + 4/eps - 1) (4/eps)^p_max``.

    Raises:
        SoundnessError: If an input is not positive.
    """
    if n < 2 or field_size < 2 or p_max < 1:
        raise SoundnessError(f"Bad inputs n = {n}, |F| = {field_size}, p_max = {p_max}")
    with precision():
        e = parse_real(eps)
        _check_unit("epsilon", e, closed=False)
        ratio = 4 / e
        return _log2(iv.mpf(n)) / iv.mpf(field_size) * (p_max + ratio - 1) * ratio ** p_max


def err_query(delta: Real, gamma_value, eps: Real, n: int):
    """
    ``1 - min(delta, gamma) + eps * log2 n``.

    Args:
        delta: Distance of the word from the top code
        gamma_value: Value of :py:func:`gamma`, an interval or a real input
        eps: Epsilon
        n: Length of the top code
    """
    with precision():
        d, e = parse_real(delta), parse_real(eps)
        g = gamma_value if hasattr(gamma_value, "_mpi_") else parse_real(gamma_value)
        _check_unit("delta", d)
        return 1 - _min(d, g) + e * _log2(iv.mpf(n))


def total_err(commit, query, t: int):
    """
    ``err_commit + err_query^t``.
    """
    if t < 0:
        raise SoundnessError(f"Negative repetition count {t}")
    with precision():
        return commit + query ** t


def _repetitions(query, budget) -> int:
    # Smallest t with query^t <= budget on upper endpoints.
    q = upper(query)
    if q >= 1:
        raise SoundnessError(f"err_query = {q:.6f} >= 1, no number of repetitions suffices")
    if q <= 0:
        return 1
    t = max(1, math.ceil(math.log(upper(budget)) / math.log(q)))
    while t > 1 and _leq(query.b ** (t - 1), budget):
        t -= 1
    while not _leq(query.b ** t, budget):
        t += 1
    return t


def min_repetitions(commit, query, kappa: int) -> int:
    """
    Smallest t with ``err_query^t <= 2^-(kappa+1)``, requiring ``err_commit <= 2^-(kappa+1)``;
    their sum is then at most ``2^-kappa``.

    Raises:
        SoundnessError: If kappa is not positive, err_query >= 1 or err_commit is above its
            share of the budget.
    """
    if kappa <= 0:
        raise SoundnessError(f"Security target kappa = {kappa} must be positive")
    with precision():
        budget = iv.ldexp(iv.mpf(1), -(kappa + 1))
        if not _leq(commit, budget):
            raise SoundnessError(
                f"err_commit = 2^{math.log2(upper(commit)):.2f} "
                f"exceeds the budget 2^-{kappa + 1}"
            )
        return _repetitions(query, budget)


def query_repetitions(query, kappa: int) -> int:
    """
    Smallest t with ``err_query^t <= 2^-kappa``, ignoring err_commit.
    """
    if kappa <= 0:
        raise SoundnessError(f"Security target kappa = {kappa} must be positive")
    with precision():
        return _repetitions(query, iv.ldexp(iv.mpf(1), -kappa))


@dataclass(frozen=True)
class SoundnessParams:
    """
    Inputs of the soundness bounds.
    """

    #: Length of the top code
    n: int

    #: Size of the challenge alphabet
    field_size: int

    #: Largest quotient degree
    p_max: int

    #: Minimum relative distance over the levels
    lam: Fraction

    #: Epsilon
    eps: Real

    #: Distance of the word, the radius gamma when not given
    delta: Optional[Real] = None

    #: Use the closed form radius in place of gamma
    closed_form: bool = False

    @classmethod
    def from_plan(
        cls,
        plan: FoldingPlan,
        eps: Real,
        delta: Optional[Real] = None,
        closed_form: bool = False,
    ) -> SoundnessParams:
        return cls(plan.length, plan.spec.order, plan.p_max, plan.lam, eps, delta, closed_form)

    def radius(self):
        """
        The radius entering err_query in place of gamma.
        """
        if self.closed_form:
            return closed_form_radius(self.lam, self.eps, self.p_max)
        return gamma(self.lam, self.eps, self.p_max)

    def commit(self):
        return err_commit(self.n, self.field_size, self.p_max, self.eps)

    def query(self):
        radius = self.radius()
        return err_query(radius if self.delta is None else self.delta, radius, self.eps, self.n)

    def with_eps(self, eps: Real) -> SoundnessParams:
        return SoundnessParams(
            self.n, self.field_size, self.p_max, self.lam, eps, self.delta, self.closed_form
        )


def choose_epsilon(
    params: SoundnessParams, kappa: int, grid: Sequence[Fraction] = EPSILON_GRID
) -> str:
    """
    Scan ``log2 eps`` over ``grid`` and keep the epsilon with the fewest repetitions.

    Returns:
        Epsilon as ``"2^<exponent>"``

    Raises:
        SoundnessError: If no grid point reaches the target.
    """
    best = None
    for exponent in grid:
        eps = f"2^{exponent}"
        candidate = params.with_eps(eps)
        try:
            t = min_repetitions(candidate.commit(), candidate.query(), kappa)
        except SoundnessError:
            continue
        if best is None or t < best[0]:
            best = (t, eps)
    if best is None:
        raise SoundnessError(f"No epsilon on the grid reaches 2^-{kappa}")
    logger.debug("Chose epsilon %s with t = %d", best[1], best[0])
    return best[1]


def _fmt(x, digits: int = 8) -> str:
    return nstr(x.b, digits)


def soundness_report(
    params: SoundnessParams, kappa: Optional[int] = None, t: Optional[int] = None
) -> Dict[str, object]:
    """
    All formula values of a parameter set, upper endpoints, plus the repetition count.

    Args:
        params: Inputs
        kappa: Security target; chooses t by :py:func:`min_repetitions`
        t: Fixed number of repetitions, used when kappa is not given

    Raises:
        SoundnessError: On out of range inputs or unreachable targets.
    """
    with precision():
        eps = parse_real(params.eps)
        gam = gamma(params.lam, params.eps, params.p_max)
        radius = params.radius()
        commit = params.commit()
        query = params.query()
        report: Dict[str, object] = {
            "n": params.n,
            "field_size": params.field_size,
            "p_max": params.p_max,
            "lambda": str(params.lam),
            "epsilon": _fmt(eps),
            "log2_epsilon": nstr(_log2(eps).mid, 6),
            "johnson_iterate": _fmt(johnson_iter(params.eps, params.lam, params.p_max)),
            "gamma": _fmt(gam),
            "radius": _fmt(radius) if params.closed_form else _fmt(gam),
            "one_minus_radius": nstr((1 - radius).b, 8),
            "delta": None if params.delta is None else str(params.delta),
            "err_commit": _fmt(commit),
            "log2_err_commit": nstr(_log2(commit).b, 6),
            "err_query": _fmt(query),
        }
        if kappa is not None:
            t = min_repetitions(commit, query, kappa)
            report["kappa"] = kappa
        if t is not None:
            total = total_err(commit, query, t)
            report["t"] = t
            report["total_err"] = _fmt(total)
            report["log2_total_err"] = nstr(_log2(total).b, 6)
        return report
