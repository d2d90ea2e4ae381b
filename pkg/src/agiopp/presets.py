# Named configurations of agiopp.
# (C) 2026 The agiopp authors

# SPDX-License-Identifier: BSD-3-Clause

"""
Ready made plan configurations, the large field soundness example and the tower rate rows.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional

from .algebra import FieldSpec
from .config import PlanConfig
from .errors import ConfigError
from .foldplan import constant_rate_degree, rate_polynomial, tower_parameters
from .kummer import KummerCurve
from .soundness import SoundnessParams, soundness_report

logger = logging.getLogger(__name__)

#: Named configurations
PRESETS: Mapping[str, Mapping[str, Any]] = {
    # y^3 = x^2 + x over F_4, [6, 3] with a two point Reed-Solomon tail.
    "f4-kummer": {
        "family": "kummer",
        "field": {"p": 2, "k": 2},
        "N": 3,
        "roots": [0, 1],
        "divisor": {"Pinf": 3},
    },
    # Hermitian curve over F_16 in Kummer form y^5 = x^4 + x, [60, 10].
    "hermitian": {
        "family": "kummer",
        "field": {"p": 2, "k": 4},
        "N": 5,
        "f": [0, 1, 0, 0, 1],
        "divisor": {"Pinf": 15},
    },
    "tower-q2": {"family": "tower", "q": 2, "level": 2, "degree": 8},
    # deg f = 5 is not -1 mod 9; f is not separable either.
    "non-congruent": {
        "family": "kummer",
        "field": {"p": 2, "k": 3},
        "N": 9,
        "f": [0, 1, 0, 0, 0, 1],
        "divisor": {"Pinf": 18},
    },
    # Degree recursion without the genus term.
    "naive-tower": {"family": "tower", "q": 3, "level": 2, "degree": 16, "bump": False},
}

#: Prime with 2^16 | p - 1 for the Reed-Solomon benchmark plans
BENCH_PRIME = 65537

#: Mersenne prime of the large field example
MERSENNE = 2 ** 61 - 1


def preset(name: str, **overrides: Any) -> PlanConfig:
    """
    Configuration of a named preset.

    Raises:
        ConfigError: If there is no such preset.
    """
    try:
        data = dict(PRESETS[name])
    except KeyError as ex:
        raise ConfigError(f"Unknown preset {name!r}, choose from {', '.join(PRESETS)}") from ex
    data.update(overrides)
    return PlanConfig.from_dict(data)


def rs_bench_config(log_n: int, rate: Fraction = Fraction(1, 8)) -> PlanConfig:
    """
    Reed-Solomon plan on the multiplicative subgroup of order ``2^log_n`` of F_65537.
    """
    n = 2 ** log_n
    return PlanConfig.from_dict(
        {
            "family": "rs",
            "field": {"p": BENCH_PRIME, "k": 1},
            "degree": int(n * rate) - 1,
            "domain": {"subgroup": n},
        }
    )


def mersenne_curve() -> KummerCurve:
    """
    ``y^(2^16) = x^3 + x`` over F_{q^2}, q = 2^61 - 1.

    q is 3 mod 4, so F_{q^2} = F_q[i] with ``i^2 = -1`` and the roots of f are 0 and +-i. No
    field arithmetic is needed; the curve only supplies its genus.
    """
    spec = FieldSpec(MERSENNE, 2, (1, 0, 1))
    return KummerCurve(spec, 2 ** 16, (0, MERSENNE, (MERSENNE - 1) * MERSENNE))


def worked_example(kappa: int = 90, eps: str = "2^-6.55") -> Dict[str, object]:
    """
    Soundness of a length 2^20 code over F_{q^2} with q the Mersenne prime 2^61 - 1.

    D_0 = 2^17 Pinf on the Kummer curve of :py:func:`mersenne_curve`, evaluated on 16 full
    orbits. Every quotient has degree 2, and so has the Reed-Solomon tail. The radius is the
    closed form ``1 - (1 - lambda + eps)^(1/3)``.
    """
    curve = mersenne_curve()
    n = 2 ** 20
    degree = 2 ** 17
    genus = curve.genus()
    # deg D_0 >= 2g - 1, so Riemann-Roch is exact.
    dimension = degree - genus + 1
    lam = 1 - Fraction(degree, n)
    params = SoundnessParams(n, curve.spec.order, 2, lam, eps, closed_form=True)
    report = soundness_report(params, kappa=kappa)
    report.update(genus=genus, dimension=dimension, degree=degree)
    return report


@dataclass(frozen=True)
class RateRow:
    """
    Constant rate tower family: top rate ``rate`` at level ``level``, claimed line code
    bound ``1 - rho``.
    """

    q: int
    level: int
    rate: Fraction
    one_minus_rho: Fraction

    @property
    def rho(self) -> Fraction:
        return 1 - self.one_minus_rho

    @property
    def alpha(self) -> Fraction:
        return self.rate * self.q / self.level


#: Rows (q, top level, top rate, 1 - rho)
RATE_ROWS = (
    RateRow(16, 3, Fraction(1, 8), Fraction(1, 3)),
    RateRow(32, 5, Fraction(1, 8), Fraction(1, 3)),
    RateRow(16, 4, Fraction(1, 16), Fraction(1, 3)),
    RateRow(32, 3, Fraction(1, 16), Fraction(3, 4)),
    RateRow(32, 5, Fraction(1, 16), Fraction(1, 2)),
    RateRow(64, 4, Fraction(1, 16), Fraction(3, 4)),
    RateRow(64, 5, Fraction(1, 16), Fraction(2, 3)),
    RateRow(64, 7, Fraction(1, 16), Fraction(1, 2)),
    RateRow(16, 3, Fraction(1, 32), Fraction(1, 2)),
)


def rate_row_report(row: RateRow) -> Dict[str, object]:
    """
    Degree recursion and line code rate bounds of one constant rate row.
    """
    degree = constant_rate_degree(row.q, row.level, row.rate)
    params = tower_parameters(row.q, row.level, degree)
    bound = params.corollary_bound + 1
    return {
        "q": row.q,
        "level": row.level,
        "rate": str(row.rate),
        "one_minus_rho": str(row.one_minus_rho),
        "degrees": list(params.degrees),
        "top_rate": str(params.top_rate),
        "rs_rate": str(params.rs_rate),
        "rs_rate_bound": str(bound / row.q ** 2),
        "polynomial": str(rate_polynomial(row.q, row.level, row.alpha, row.rho)),
        "certified": params.certifies(row.rho),
    }


def rate_table(rows: Optional[List[RateRow]] = None) -> List[Dict[str, object]]:
    """
    Report every row of :py:data:`RATE_ROWS`.
    """
    out = [rate_row_report(row) for row in (RATE_ROWS if rows is None else rows)]
    logger.info("%d of %d rate rows certified", sum(r["certified"] for r in out), len(out))
    return out
