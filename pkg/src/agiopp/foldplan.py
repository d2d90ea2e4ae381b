# Folding plans of agiopp.
# (C) 2026 The agiopp authors

# SPDX-License-Identifier: BSD-3-Clause

"""
Folding plans: the per-level ledger of curves, evaluation domains, divisors, split divisors,
partition and balancing functions that the folding operator and the protocol walk through.

Plans are built by :py:func:`plan_kummer`, :py:func:`plan_tower` and :py:func:`plan_rs`.
Every fiber, interpolation matrix and balancing value the protocol needs is computed here,
once, so that folding itself is pure table lookups and field arithmetic.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

import galois
import numpy as np

from .abstract import AbstractCurve, Family
from .algebra import (
    FieldSpec,
    as_ints,
    elements_to_bytes,
    make_field,
    spec_to_bytes,
    vandermonde_inverse,
)
from .curves import EvalDomain, build_eval_domain, line_domain, tower_domain
from .errors import CurveError, PlanError, PoleError
from .kummer import KummerCurve
from .line import FoldMap, LineCurve, find_fold_map
from .rrbasis import (
    INFINITY,
    BasisFunction,
    Divisor,
    generator_matrix,
    in_code,
    rank,
)
from .tower import TowerCurve, tower_genus

logger = logging.getLogger(__name__)

#: Default exponent e of the group size requirement |G| > n^e
DEFAULT_E = Fraction(1, 2)

#: Levels with more points skip the rank based partition check
MAX_VALIDATION_POINTS = 1024


@dataclass(eq=False)
class LevelData:
    """
    Everything the protocol needs to know about one level of a plan.

    Levels that fold carry the fiber tables towards the next level; the last level of a plan
    has ``arity == 0`` and no tables.
    """

    #: Position of the level inside the plan
    index: int

    #: Curve of the level
    curve: AbstractCurve

    #: Evaluation domain P_i
    domain: EvalDomain

    #: Divisor D_i
    divisor: Divisor

    #: Basis of L(D_i), lexicographic
    basis: List[BasisFunction]

    #: Degree p_i of the quotient map, 0 on the last level
    arity: int = 0

    #: Fold map of Reed-Solomon levels
    fold_map: Optional[FoldMap] = None

    #: Image domain, on the quotient curve
    target: Optional[EvalDomain] = None

    #: Split divisors E_{i,j} on the quotient curve
    split: Tuple[Divisor, ...] = ()

    #: Balancing functions nu_{i+1,j}, ``None`` where no compatible function exists
    balancing: Tuple[Optional[BasisFunction], ...] = ()

    #: Position in the target of the image of every domain point
    images: Optional[np.ndarray] = None

    #: ``fibers[k]`` are the positions in P_i of the fiber over target point ``k``, ascending
    fibers: Optional[np.ndarray] = None

    #: Partition function values on the fibers, same shape as ``fibers``
    mu_values: Optional[galois.FieldArray] = None

    #: ``nu_table[j, k]`` is nu_{i+1,j} at target point ``k``
    nu_table: Optional[galois.FieldArray] = None

    #: Inverse Vandermonde matrix of every fiber, shape ``(n_{i+1}, p, p)``, for ``p > 2``
    fiber_inverse: Optional[galois.FieldArray] = None

    #: ``1 / (mu_1 - mu_0)`` per fiber, for ``p == 2``
    inv_diff: Optional[galois.FieldArray] = None

    @property
    def length(self) -> int:
        """
        Block length n_i.
        """
        return len(self.domain)

    @property
    def dimension(self) -> int:
        """
        Dimension k_i, the size of the basis (evaluation is injective for deg D_i < n_i).
        """
        return len(self.basis)

    @property
    def quotient(self) -> Optional[AbstractCurve]:
        """
        Quotient curve the level folds onto.
        """
        return self.target.curve if self.target is not None else None

    @property
    def distance(self) -> Fraction:
        """
        Goppa bound ``1 - deg D_i / n_i`` on the relative minimum distance.
        """
        return 1 - Fraction(self.divisor.degree, self.length)

    @property
    def exact(self) -> bool:
        """
        Whether :py:attr:`distance` is the exact minimum distance.
        """
        return self.curve.family is not Family.TOWER

    @property
    def rate(self) -> Fraction:
        return Fraction(self.dimension, self.length)

    @cached_property
    def generator(self) -> galois.FieldArray:
        """
        Generator matrix of the level's code.
        """
        return generator_matrix(self.basis, self.domain)

    @cached_property
    def generator_rank(self) -> int:
        return rank(self.generator)

    def contains(self, word: galois.FieldArray) -> bool:
        """
        Code membership by rank.
        """
        return in_code(word, self.generator, self.generator_rank)

    def describe(self) -> Dict[str, object]:
        """
        Parameter row of the level.
        """
        return {
            "level": self.index,
            "family": self.curve.family.name.lower(),
            "curve_level": self.curve.level,
            "n": self.length,
            "k": self.dimension,
            "divisor": str(self.divisor),
            "distance": str(self.distance),
            "exact": self.exact,
            "arity": self.arity,
            "fold_map": str(self.fold_map) if self.fold_map else None,
            "split": [str(e) for e in self.split],
            "balancing": [str(b) if b is not None else None for b in self.balancing],
        }


@dataclass(eq=False)
class FoldingPlan:
    """
    Sequence of foldable codes C_0, ..., C_r.
    """

    #: Family of the top curve
    family: Family

    #: Alphabet
    spec: FieldSpec

    #: Levels 0..r
    levels: Tuple[LevelData, ...]

    #: Exponent of the group size requirement
    e: Fraction = DEFAULT_E

    #: Human readable origin of the plan
    description: str = ""

    #: Whether the plan folds down to a constant
    tail: bool = True

    @property
    def rounds(self) -> int:
        return len(self.levels) - 1

    @property
    def length(self) -> int:
        """
        Block length n of the top code.
        """
        return self.levels[0].length

    @property
    def p_max(self) -> int:
        return max((level.arity for level in self.levels), default=0)

    @property
    def lam(self) -> Fraction:
        """
        Minimum over the levels of the distance bounds.
        """
        return min(level.distance for level in self.levels)

    @property
    def group_order(self) -> int:
        """
        Order of the group the whole fold sequence quotients by.
        """
        return math.prod(level.arity for level in self.levels[:-1])

    @property
    def final_dimension(self) -> int:
        return self.levels[-1].dimension

    @property
    def proof_length(self) -> int:
        """
        Number of field elements of all oracles but the first.
        """
        return sum(level.length for level in self.levels[1:])

    def describe(self) -> List[Dict[str, object]]:
        return [level.describe() for level in self.levels]

    @cached_property
    def digest(self) -> bytes:
        """
        SHA-256 binding the field, the parameter rows and the top evaluation domain.
        """
        header = {
            "family": self.family.name,
            "e": str(self.e),
            "tail": self.tail,
            "levels": self.describe(),
        }
        hasher = hashlib.sha256()
        hasher.update(spec_to_bytes(self.spec))
        hasher.update(json.dumps(header, sort_keys=True).encode())
        hasher.update(
            elements_to_bytes(self.spec, as_ints(self.levels[0].domain.coordinates).reshape(-1))
        )
        return hasher.digest()


@dataclass
class ValidationReport:
    """
    Result of :py:func:`validate_plan`.
    """

    #: ``(level, clause, message)`` of every failed check
    failures: List[Tuple[int, str, str]] = field(default_factory=list)

    #: Number of checks run
    checks: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures

    def check(self, condition: bool, level: int, clause: str, message: str) -> bool:
        self.checks += 1
        if not condition:
            self.failures.append((level, clause, message))
        return condition

    def clauses(self) -> List[str]:
        return sorted(set(clause for _, clause, _ in self.failures))

    def raise_for_failures(self) -> None:
        """
        Raises:
            PlanError: Naming the first failed clause and listing all failures.
        """
        if self.failures:
            level, clause, message = self.failures[0]
            raise PlanError(
                f"level {level}: {message}",
                clause,
                [(c, f"level {l}: {m}") for l, c, m in self.failures],
            )


def principal_divisor(curve: AbstractCurve, function: str) -> Divisor:
    """
    Divisor of an elementary function: ``"y"`` or ``"x-a<l>"`` on Kummer curves, the last
    coordinate ``"x<i>"`` on tower levels, ``"x"`` on the line.

    Raises:
        CurveError: If the function is not supported.
    """
    return curve.principal_divisor(function)


def _fold_level(
    index: int,
    curve: AbstractCurve,
    domain: EvalDomain,
    divisor: Divisor,
    quotient: AbstractCurve,
    split: Sequence[Divisor],
    balancing: Sequence[Optional[BasisFunction]],
    fold_map: Optional[FoldMap] = None,
) -> LevelData:
    spec = curve.spec
    fld = spec.field
    p = len(split)
    coords = domain.coordinates

    rows = as_ints(curve.project_many(coords)).reshape(len(coords), -1)
    unique, inverse = np.unique(rows, axis=0, return_inverse=True)
    inverse = np.asarray(inverse).reshape(-1)
    target = EvalDomain.from_coordinates(quotient, fld(unique))

    counts = np.bincount(inverse, minlength=len(unique))
    if not np.all(counts == p):
        raise PlanError(
            f"Fibers of sizes {sorted(set(counts.tolist()))} on level {index}, expected {p}",
            "free action",
        )
    fibers = np.argsort(inverse, kind="stable").reshape(-1, p)

    mu_values = coords[:, curve.mu_index][fibers]
    ordered = np.sort(as_ints(mu_values), axis=1)
    if np.any(ordered[:, 1:] == ordered[:, :-1]):
        raise PlanError(
            f"Partition function repeats a value on a fiber of level {index}", "mu injective"
        )

    nu_table = fld.Zeros((p, len(target)))
    for j, nu in enumerate(balancing):
        if nu is not None:
            nu_table[j] = quotient.evaluate_many(nu, target.coordinates)

    fiber_inverse = None
    inv_diff = None
    if p == 2:
        inv_diff = (mu_values[:, 1] - mu_values[:, 0]) ** -1
    else:
        fiber_inverse = fld.Zeros((len(target), p, p))
        for k in range(len(target)):
            fiber_inverse[k] = vandermonde_inverse(mu_values[k])

    logger.debug(
        "Level %d: %d points fold %d:1 onto %d points", index, len(domain), p, len(target)
    )
    return LevelData(
        index=index,
        curve=curve,
        domain=domain,
        divisor=divisor,
        basis=curve.basis(divisor),
        arity=p,
        fold_map=fold_map,
        target=target,
        split=tuple(split),
        balancing=tuple(balancing),
        images=inverse,
        fibers=fibers,
        mu_values=mu_values,
        nu_table=nu_table,
        fiber_inverse=fiber_inverse,
        inv_diff=inv_diff,
    )


def _final_level(
    index: int, curve: AbstractCurve, domain: EvalDomain, divisor: Divisor
) -> LevelData:
    return LevelData(index, curve, domain, divisor, curve.basis(divisor))


def rs_tail(
    spec: FieldSpec, xs: galois.FieldArray, degree: int, start: int = 0, index: int = 0
) -> List[LevelData]:
    """
    Reed-Solomon levels folding polynomials of degree at most ``degree`` down to constants.

    A level of degree d and arity p folds onto degree ``d // p``; the split degrees are
    ``(d - j) // p`` and the balancing functions ``x^(d//p - (d-j)//p)``. For ``p = 2`` this is
    the even/odd split with ``nu = 1`` for odd d and ``nu = x`` at ``j = 1`` for even d.

    Args:
        spec: Field
        xs: Line points of the first level
        degree: Degree bound of the first level
        start: Level tag of the first line
        index: Plan position of the first level

    Returns:
        The levels, the first one being the line over ``xs`` and the last one of degree 0

    Raises:
        PlanError: If a level of positive degree has no fold map (clause ``"rs structure"``).
    """
    if degree < 0:
        raise PlanError(f"Negative degree {degree}", "degree")
    curve = LineCurve(spec, start)
    domain = line_domain(curve, as_ints(xs).reshape(-1).tolist())
    levels = []
    d = degree
    while d > 0:
        fold_map = find_fold_map(spec, domain.coordinates[:, 0])
        if fold_map is None:
            raise PlanError(
                f"Line domain of size {len(domain)} at degree {d} has no fold structure",
                "rs structure",
            )
        p = fold_map.arity
        level = curve.level
        curve = LineCurve(spec, level, fold_map)
        domain = EvalDomain.from_coordinates(curve, domain.coordinates)
        d_next = d // p
        split = [Divisor.at_infinity(level + 1, (d - j) // p) for j in range(p)]
        balancing = [BasisFunction(Family.LINE, (d_next - (d - j) // p,)) for j in range(p)]
        quotient = LineCurve(spec, level + 1)
        folded = _fold_level(
            index,
            curve,
            domain,
            Divisor.at_infinity(level, d),
            quotient,
            split,
            balancing,
            fold_map,
        )
        levels.append(folded)
        curve, domain, d = quotient, folded.target, d_next
        index += 1
    levels.append(_final_level(index, curve, domain, Divisor.at_infinity(curve.level, d)))
    return levels


def _finish(plan: FoldingPlan, validate: bool) -> FoldingPlan:
    logger.info(
        "Plan %s: n = %d, %d rounds, lambda = %s, final dimension %d",
        plan.description,
        plan.length,
        plan.rounds,
        plan.lam,
        plan.final_dimension,
    )
    if validate:
        validate_plan(plan).raise_for_failures()
    return plan


def plan_kummer(
    curve: KummerCurve,
    divisor: Divisor,
    domain: Optional[EvalDomain] = None,
    e: Fraction = DEFAULT_E,
    tail: bool = True,
    validate: bool = True,
) -> FoldingPlan:
    """
    Plan of the cyclic quotient chain of a Kummer curve, followed by a Reed-Solomon tail.

    ``D_{i+1} = D_i / p_i``, ``E_{i,j} = D_{i+1} - j kappa_i N_{i+1} Pinf`` and
    ``nu_{i+1,j} = (x - a_1)^(kappa_i j)`` with ``kappa_i = (m + 1) / N_i``.

    Args:
        curve: Top curve, level 0
        divisor: D_0, supported on the roots and infinity
        domain: Evaluation domain, all free orbits by default
        e: Exponent of the group size requirement
        tail: Append the Reed-Solomon tail down to dimension one
        validate: Run :py:func:`validate_plan` and raise on failure

    Raises:
        PlanError: With clause ``"congruence"``, ``"divisibility"``, ``"degree"`` or the
            clause of the first failed validation.
    """
    n = curve.top_exponent
    m = curve.m
    if curve.level != 0:
        raise PlanError(f"Plans start at level 0, got level {curve.level}")
    if (m + 1) % n:
        raise PlanError(f"m = {m} is not -1 mod N = {n}", "congruence")
    curve.check_divisor(divisor)
    if any(v % n for _, v in divisor.terms):
        raise PlanError(
            f"Coefficients of {divisor} are not divisible by N = {n}", "divisibility"
        )
    if domain is None:
        domain = build_eval_domain(curve)
    if divisor.degree >= len(domain):
        raise PlanError(f"deg D_0 = {divisor.degree} is not below n = {len(domain)}", "degree")

    levels: List[LevelData] = []
    level_curve: AbstractCurve = curve
    level_domain = domain
    current = divisor
    for i in range(len(curve.primes)):
        p = level_curve.quotient_degree
        quotient = level_curve.quotient()
        kappa = level_curve.kappa
        split = [level_curve.split_divisor(current, j) for j in range(p)]
        balancing = [BasisFunction(Family.KUMMER, (0,) * m, shift=kappa * j) for j in range(p)]
        folded = _fold_level(i, level_curve, level_domain, current, quotient, split, balancing)
        levels.append(folded)
        level_curve, level_domain = quotient, folded.target
        current = current.pushforward(i + 1).divide_exact(p)

    if tail:
        if not current.is_one_point:
            raise PlanError(
                f"Last Kummer divisor {current} is not a one-point divisor", "rs structure"
            )
        levels += rs_tail(
            curve.spec,
            level_domain.coordinates[:, 0],
            current[INFINITY],
            start=level_curve.level,
            index=len(levels),
        )
    else:
        levels.append(_final_level(len(levels), level_curve, level_domain, current))

    f_text = " * ".join(f"(x - {a})" for a in curve.roots)
    plan = FoldingPlan(
        Family.KUMMER,
        curve.spec,
        tuple(levels),
        e,
        f"kummer y^{n} = {f_text} over {curve.spec}, D_0 = {divisor}",
        tail,
    )
    return _finish(plan, validate)


def tower_degrees(q: int, top: int, degree: int, bump: bool = True) -> Tuple[int, ...]:
    """
    Degrees ``d_i`` indexed by tower level: ``d_{i-1} = d_i // q + 2 g_{i-1}``.

    Args:
        q: Tower parameter
        top: Top level
        degree: d_top
        bump: Add ``2 g_{i-1}``; without it the rule is the naive ``d_i // q``
    """
    degrees = [0] * (top + 1)
    degrees[top] = degree
    for i in range(top, 0, -1):
        degrees[i - 1] = degrees[i] // q + (2 * tower_genus(q, i - 1) if bump else 0)
    return tuple(degrees)


def balancing_exponents(q: int, i: int, j: int, d_i: int, d_prev: int) -> Tuple[int, ...]:
    """
    Exponents ``(a_0, ..., a_{i-1})`` of a monomial on level ``i - 1`` whose pole order is
    ``d_{i-1} - (d_i - j (q+1)^i) // q``.

    The weights of the coordinates are ``q^(i-1-k) (q+1)^k``. Largest weights are used first,
    backtracking when the remainder cannot be completed.

    Raises:
        PlanError: If the pole order is not in the semigroup (clause ``"compatibility"``).
    """
    target = d_prev - (d_i - j * (q + 1) ** i) // q
    weights = [q ** (i - 1 - k) * (q + 1) ** k for k in range(i)]

    def search(k: int, rest: int) -> Optional[List[int]]:
        if k == 0:
            return [rest // weights[0]] if rest % weights[0] == 0 else None
        for a in range(rest // weights[k], -1, -1):
            found = search(k - 1, rest - a * weights[k])
            if found is not None:
                return found + [a]
        return None

    found = search(i - 1, target) if target >= 0 else None
    if found is None:
        raise PlanError(
            f"Pole order {target} is not generated by {weights} (level {i}, j = {j})",
            "compatibility",
        )
    return tuple(found)


def _tower_spec(q: int) -> FieldSpec:
    primes, exponents = galois.factors(q)
    if len(primes) != 1:
        raise PlanError(f"q = {q} is not a prime power", "field")
    return make_field(int(primes[0]), 2 * int(exponents[0]))


def plan_tower(
    q: int,
    top: int,
    degree: int,
    line: Optional[Sequence[int]] = None,
    bump: bool = True,
    e: Fraction = DEFAULT_E,
    tail: bool = True,
    validate: bool = True,
) -> FoldingPlan:
    """
    Plan of the Hermitian tower from level ``top`` down to the line, followed by a
    Reed-Solomon tail.

    Args:
        q: Tower parameter, the alphabet is F_{q^2}
        top: Level of the top curve, at least 1
        degree: d_top, at least 1
        line: Line points the evaluation domain is pulled back from, all by default
        bump: Use the genus bump in the degree recursion
        e: Exponent of the group size requirement
        tail: Append the Reed-Solomon tail
        validate: Run :py:func:`validate_plan` and raise on failure

    Raises:
        PlanError: ``"degenerate"`` if the line code has rate above one, otherwise the clause
            of the first failed validation.
    """
    if top < 1 or degree < 1:
        raise PlanError(f"Tower plans need level >= 1 and degree >= 1, got {top}, {degree}")
    spec = _tower_spec(q)
    degrees = tower_degrees(q, top, degree, bump)
    curve = TowerCurve(spec, q, top)
    domain = tower_domain(curve, line)
    line_size = len(domain) // q ** top

    if degrees[0] + 1 > line_size:
        bound = tower_parameters(q, top, degree, bump).corollary_bound
        raise PlanError(
            f"Line code of degree {degrees[0]} on {line_size} points has rate above one "
            f"(rate bound {bound + 1}/{line_size})",
            "degenerate",
        )
    if degrees[0] + 1 == line_size:
        logger.warning(
            "Line code of degree %d on %d points has rate one", degrees[0], line_size
        )
    if degree >= len(domain):
        raise PlanError(f"d = {degree} is not below n = {len(domain)}", "degree")

    levels: List[LevelData] = []
    level_curve: AbstractCurve = curve
    level_domain = domain
    for index, i in enumerate(range(top, 0, -1)):
        current = Divisor.at_infinity(i, degrees[i])
        quotient = level_curve.quotient()
        split = [level_curve.split_divisor(current, j) for j in range(q)]
        balancing: List[Optional[BasisFunction]] = []
        for j in range(q):
            try:
                exponents = balancing_exponents(q, i, j, degrees[i], degrees[i - 1])
            except PlanError as ex:
                logger.debug("No balancing function: %s", ex)
                balancing.append(None)
            else:
                balancing.append(BasisFunction(Family.TOWER, exponents))
        folded = _fold_level(
            index, level_curve, level_domain, current, quotient, split, balancing
        )
        levels.append(folded)
        level_curve, level_domain = quotient, folded.target

    if tail:
        levels += rs_tail(spec, level_domain.coordinates[:, 0], degrees[0], 0, top)
    else:
        final = Divisor.at_infinity(0, degrees[0])
        levels.append(_final_level(top, level_curve, level_domain, final))

    plan = FoldingPlan(
        Family.TOWER,
        spec,
        tuple(levels),
        e,
        f"tower q = {q}, level {top}, d = {degree}{'' if bump else ' (no genus bump)'}",
        tail,
    )
    return _finish(plan, validate)


def plan_rs(
    spec: FieldSpec,
    xs: galois.FieldArray,
    degree: int,
    e: Fraction = DEFAULT_E,
    validate: bool = True,
) -> FoldingPlan:
    """
    Plan of a Reed-Solomon code of polynomials of degree at most ``degree`` on ``xs``.

    Raises:
        PlanError: If the degree is not below the length, or on missing fold structure.
    """
    if degree >= len(xs):
        raise PlanError(f"Degree {degree} is not below n = {len(xs)}", "degree")
    levels = rs_tail(spec, xs, degree)
    plan = FoldingPlan(
        Family.LINE, spec, tuple(levels), e, f"rs n = {len(xs)}, d = {degree} over {spec}"
    )
    return _finish(plan, validate)


@dataclass(frozen=True)
class TowerParameters:
    """
    Degree recursion and rate bounds of a tower plan, without building any domain.
    """

    #: Tower parameter
    q: int

    #: Top level
    top: int

    #: d_i indexed by tower level
    degrees: Tuple[int, ...]

    #: g_i indexed by tower level
    genera: Tuple[int, ...]

    @property
    def length(self) -> int:
        """
        Length ``q^(top+2)`` of the top code on all affine points.
        """
        return self.q ** (self.top + 2)

    @property
    def top_dimension(self) -> int:
        return self.degrees[self.top] - self.genera[self.top] + 1

    @property
    def top_rate(self) -> Fraction:
        return Fraction(self.top_dimension, self.length)

    @property
    def rs_rate(self) -> Fraction:
        """
        Rate ``(d_0 + 1) / q^2`` of the line code.
        """
        return Fraction(self.degrees[0] + 1, self.q ** 2)

    def lemma_bound(self, j: int) -> int:
        """
        ``d_top // q^j + sum_k (2 g_{top-k}) // q^(j-k) + (j - 1)``, an upper bound on
        ``d_{top-j}``.
        """
        q, top = self.q, self.top
        total = self.degrees[top] // q ** j + (j - 1)
        return total + sum(2 * self.genera[top - k] // q ** (j - k) for k in range(1, j + 1))

    @property
    def corollary_bound(self) -> Fraction:
        """
        ``d_top // q^top + (top - 1)(1 + top (3q - 4 + 2 top) / 6)``, valid when
        ``2 (top - 1) < q``.
        """
        q, top = self.q, self.top
        tail = (top - 1) * (1 + Fraction(top * (3 * q - 4 + 2 * top), 6))
        return self.degrees[top] // q ** top + tail

    def certifies(self, rho: Fraction) -> bool:
        """
        Whether the corollary bound proves a line code rate below ``rho``.
        """
        return self.corollary_bound + 1 < rho * self.q ** 2


def tower_parameters(q: int, top: int, degree: int, bump: bool = True) -> TowerParameters:
    """
    Parameters of the tower plan with top degree ``degree``.
    """
    degrees = tower_degrees(q, top, degree, bump)
    genera = tuple(tower_genus(q, i) for i in range(top + 1))
    return TowerParameters(q, top, degrees, genera)


def constant_rate_degree(q: int, top: int, rate: Fraction) -> int:
    """
    ``d = floor((2 alpha + 1) g_top)`` with ``alpha = rate * q / top``, the degree of the
    constant rate family on the whole tower level.
    """
    alpha = Fraction(rate) * q / top
    return math.floor((2 * alpha + 1) * tower_genus(q, top))


def rate_polynomial(q: int, top: int, alpha: Fraction, rho: Fraction) -> Fraction:
    """
    ``2 i^3 + 3 i^2 (2 alpha + q - 1) + i (6 alpha (q - 1) + 7) - 6 rho q^2``; a negative value
    certifies a line code rate below ``rho`` for the constant rate family.
    """
    i = top
    alpha = Fraction(alpha)
    cubic = 2 * i ** 3 + 3 * i ** 2 * (2 * alpha + q - 1) + i * (6 * alpha * (q - 1) + 7)
    return cubic - 6 * Fraction(rho) * q * q


def _check_partition(report: ValidationReport, level: LevelData) -> None:
    quotient = level.quotient
    dims = []
    for e_div in level.split:
        try:
            dims.append(len(quotient.basis(e_div)))
        except CurveError as ex:
            report.check(False, level.index, "partition", f"No basis for {e_div}: {ex}")
            return
    report.check(
        sum(dims) == level.dimension,
        level.index,
        "partition",
        f"Split dimensions {dims} do not add up to {level.dimension}",
    )
    if level.length > MAX_VALIDATION_POINTS:
        logger.debug("Level %d: skipping rank checks on %d points", level.index, level.length)
        return

    coords = level.domain.coordinates
    images = level.curve.project_many(coords)
    mu = coords[:, level.curve.mu_index]
    words, labels = [], []
    for j, e_div in enumerate(level.split):
        for function in quotient.basis(e_div):
            try:
                words.append(mu ** j * quotient.evaluate_many(function, images))
            except PoleError as ex:
                report.check(False, level.index, "partition", str(ex))
                continue
            labels.append(f"mu^{j} * ({function})")
    if not words:
        return
    # One rank computation for all words; single words only to name the culprits.
    rows = [level.generator.view(np.ndarray)] + [w.view(np.ndarray) for w in words]
    stacked = np.vstack(rows)
    if rank(type(level.generator)(stacked)) == level.generator_rank:
        report.check(True, level.index, "partition", "")
        return
    for word, label in zip(words, labels):
        report.check(
            level.contains(word),
            level.index,
            "partition",
            f"{label} is not in L({level.divisor})",
        )


def _check_kummer(report: ValidationReport, plan: FoldingPlan) -> None:
    top = plan.levels[0]
    curve = top.curve
    n = curve.top_exponent
    report.check(
        (curve.m + 1) % n == 0, 0, "congruence", f"m = {curve.m} is not -1 mod N = {n}"
    )
    report.check(
        all(v % n == 0 for _, v in top.divisor.terms),
        0,
        "divisibility",
        f"Coefficients of {top.divisor} are not divisible by N = {n}",
    )
    for level in plan.levels[:-1]:
        if level.curve.family is not Family.KUMMER:
            break
        next_divisor = plan.levels[level.index + 1].divisor
        quotient = level.quotient
        step = level.curve.kappa * quotient.exponent
        for j, e_div in enumerate(level.split):
            expected = next_divisor - Divisor.at_infinity(next_divisor.level, j * step)
            report.check(
                e_div == expected,
                level.index,
                "compatibility",
                f"E_{j} = {e_div}, expected {expected}",
            )


def validate_plan(plan: FoldingPlan) -> ValidationReport:
    """
    Check the foldability requirements on every level.

    Checks: group size ``|G| > n^e``, free action (all fibers of size p_i), injectivity of the
    partition function on fibers, ``E_{i,j} <= D_{i+1}``, exact pole divisors of the balancing
    functions, the partition property (dimensions and, on desk scale levels, membership of every
    ``mu^j * (b o pi)`` by rank), ``deg D_i < n_i``, the Kummer hypotheses and dimension one at
    the end of a tail.
    """
    report = ValidationReport()
    e = plan.e
    report.check(
        plan.group_order ** e.denominator > plan.length ** e.numerator,
        0,
        "group size",
        f"|G| = {plan.group_order} is not above n^{e} for n = {plan.length}",
    )
    if plan.family is Family.KUMMER:
        _check_kummer(report, plan)

    for level in plan.levels:
        report.check(
            level.divisor.degree < level.length,
            level.index,
            "degree",
            f"deg D = {level.divisor.degree} is not below n = {level.length}",
        )
        if not level.arity:
            continue
        nxt = plan.levels[level.index + 1]
        counts = np.bincount(level.images, minlength=len(level.target))
        report.check(
            bool(np.all(counts == level.arity)),
            level.index,
            "free action",
            f"Fiber sizes {sorted(set(counts.tolist()))}, expected {level.arity}",
        )
        ordered = np.sort(as_ints(level.mu_values), axis=1)
        report.check(
            not np.any(ordered[:, 1:] == ordered[:, :-1]),
            level.index,
            "mu injective",
            "Partition function repeats a value on a fiber",
        )
        for j, (e_div, nu) in enumerate(zip(level.split, level.balancing)):
            report.check(
                e_div <= nxt.divisor,
                level.index,
                "compatibility",
                f"E_{j} = {e_div} > {nxt.divisor}",
            )
            if not report.check(
                nu is not None,
                level.index,
                "compatibility",
                f"No balancing function for j = {j}",
            ):
                continue
            expected = nxt.divisor - e_div
            poles = level.quotient.pole_divisor(nu)
            report.check(
                poles == expected,
                level.index,
                "compatibility",
                f"Poles of nu_{j} = {nu} are {poles}, expected {expected}",
            )
        _check_partition(report, level)

    if plan.tail:
        report.check(
            plan.final_dimension == 1,
            plan.rounds,
            "rs structure",
            f"Final dimension {plan.final_dimension}, expected 1",
        )
    for level, clause, message in report.failures:
        logger.info("Plan check failed on level %d [%s]: %s", level, clause, message)
    return report
