# Plan configuration of agiopp.
# (C) 2026 The agiopp authors

# SPDX-License-Identifier: BSD-3-Clause

"""
JSON plan configurations, plan files and word files.

A configuration names a curve family and its parameters together with the protocol settings::

    {"family": "kummer", "field": {"p": 2, "k": 2}, "N": 3, "roots": [0, 1],
     "divisor": {"Pinf": 3}, "mode": "fold-to-constant", "t": 4, "seed": 1}
"""

from __future__ import annotations

import dataclasses
import json
import logging
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from struct import pack, unpack_from
from typing import Any, Dict, Mapping, Optional, Tuple, Union

import galois

from .abstract import Family, Mode
from .algebra import (
    FieldSpec,
    elements_from_bytes,
    elements_to_bytes,
    field_id,
    make_field,
)
from .curves import build_eval_domain, coset_domain
from .errors import ConfigError, CurveError, PlanError, ProofFormatError
from .foldplan import DEFAULT_E, FoldingPlan, plan_kummer, plan_rs, plan_tower
from .kummer import KummerCurve
from .rrbasis import Divisor

logger = logging.getLogger(__name__)

#: Magic of word and message files
WORD_MAGIC = b"AGWD"

#: Final test names
MODES = {"fold-to-constant": Mode.FOLD_TO_CONSTANT, "membership": Mode.MEMBERSHIP}
_SAMPLING = ("independent", "distinct")


def _get(data: Mapping[str, Any], key: str, kind, default: Any = dataclasses.MISSING) -> Any:
    if key not in data:
        if default is dataclasses.MISSING:
            raise ConfigError(f"Missing key {key!r}")
        return default
    value = data[key]
    if value is None and default is None:
        return None
    if kind is int and isinstance(value, bool) or not isinstance(value, kind):
        raise ConfigError(f"Key {key!r} has the wrong type {type(value).__name__}")
    return value


def _int_list(data: Mapping[str, Any], key: str) -> Optional[Tuple[int, ...]]:
    value = _get(data, key, list, None)
    if value is None:
        return None
    if not all(isinstance(v, int) and not isinstance(v, bool) for v in value):
        raise ConfigError(f"Key {key!r} must be a list of integers")
    return tuple(value)


@dataclass(frozen=True)
class PlanConfig:
    """
    Validated plan configuration.
    """

    #: Curve family
    family: Family

    #: Characteristic of the alphabet (kummer, rs)
    p: Optional[int] = None

    #: Extension degree of the alphabet (kummer, rs)
    k: int = 1

    #: Kummer exponent
    n_exp: Optional[int] = None

    #: Roots of f (kummer)
    roots: Optional[Tuple[int, ...]] = None

    #: Coefficients of f, low to high (kummer, alternative to roots)
    f: Optional[Tuple[int, ...]] = None

    #: D_0 as (label, coefficient) pairs (kummer)
    divisor: Tuple[Tuple[str, int], ...] = ()

    #: Number of orbits kept in the evaluation domain (kummer)
    orbits: Optional[int] = None

    #: Tower parameter
    q: Optional[int] = None

    #: Top tower level
    level: Optional[int] = None

    #: Top degree (tower, rs)
    degree: Optional[int] = None

    #: Line points (tower, rs)
    line: Optional[Tuple[int, ...]] = None

    #: Genus bump in the tower degree recursion
    bump: bool = True

    #: Reed-Solomon domain, ("subgroup", n) or ("coset", shift, n)
    domain: Optional[Tuple[Any, ...]] = None

    #: Exponent of the group size requirement
    e: Fraction = DEFAULT_E

    #: Epsilon of the soundness bounds, chosen by search when missing
    epsilon: Optional[str] = None

    #: Final test
    mode: Mode = Mode.FOLD_TO_CONSTANT

    #: Number of query tests
    t: Optional[int] = None

    #: Security target in bits
    kappa: Optional[int] = None

    #: Seed of seeded coins and random words
    seed: int = 0

    #: Start point sampling, "independent" or "distinct"
    sampling: str = "independent"

    #: Worker threads
    threads: int = 1

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> PlanConfig:
        """
        Parse and validate a configuration mapping.

        Raises:
            ConfigError: On unknown family, missing keys or wrong types.
        """
        if not isinstance(data, Mapping):
            raise ConfigError("Configuration must be a JSON object")
        try:
            family = Family[_get(data, "family", str).upper().replace("RS", "LINE")]
        except KeyError as ex:
            raise ConfigError(f"Unknown family {data.get('family')!r}") from ex

        mode_name = _get(data, "mode", str, "fold-to-constant")
        if mode_name not in MODES:
            raise ConfigError(f"Unknown mode {mode_name!r}")
        sampling = _get(data, "sampling", str, "independent")
        if sampling not in _SAMPLING:
            raise ConfigError(f"Unknown sampling {sampling!r}")
        try:
            e = Fraction(str(data.get("e", DEFAULT_E)))
        except ValueError as ex:
            raise ConfigError(f"Bad exponent e = {data.get('e')!r}") from ex
        epsilon = data.get("epsilon")
        if epsilon is not None and not isinstance(epsilon, (str, int, float)):
            raise ConfigError("Key 'epsilon' must be a string or a number")

        common = dict(
            family=family,
            e=e,
            epsilon=None if epsilon is None else str(epsilon),
            mode=MODES[mode_name],
            t=_get(data, "t", int, None),
            kappa=_get(data, "kappa", int, None),
            seed=_get(data, "seed", int, 0),
            sampling=sampling,
            threads=_get(data, "threads", int, 1),
        )

        if family is Family.TOWER:
            return cls(
                q=_get(data, "q", int),
                level=_get(data, "level", int),
                degree=_get(data, "degree", int),
                line=_int_list(data, "line"),
                bump=_get(data, "bump", bool, True),
                **common,
            )

        fld = _get(data, "field", dict)
        p, k = _get(fld, "p", int), _get(fld, "k", int, 1)
        if family is Family.LINE:
            domain = _get(data, "domain", dict, None)
            parsed = None
            if domain is not None:
                if "subgroup" in domain:
                    parsed = ("subgroup", _get(domain, "subgroup", int))
                elif "coset" in domain:
                    coset = _int_list(domain, "coset")
                    if coset is None or len(coset) != 2:
                        raise ConfigError("Coset domains are given as [shift, size]")
                    parsed = ("coset",) + coset
                else:
                    raise ConfigError(f"Unknown domain {domain!r}")
            line = _int_list(data, "line")
            if parsed is None and line is None:
                raise ConfigError("Reed-Solomon configurations need a domain or line points")
            degree = _get(data, "degree", int)
            return cls(p=p, k=k, degree=degree, domain=parsed, line=line, **common)

        divisor = _get(data, "divisor", dict)
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in divisor.values()):
            raise ConfigError("Divisor coefficients must be integers")
        roots, f = _int_list(data, "roots"), _int_list(data, "f")
        if (roots is None) == (f is None):
            raise ConfigError("Kummer configurations need exactly one of 'roots' and 'f'")
        return cls(
            p=p,
            k=k,
            n_exp=_get(data, "N", int),
            roots=roots,
            f=f,
            divisor=tuple(sorted(divisor.items())),
            orbits=_get(data, "orbits", int, None),
            **common,
        )

    @classmethod
    def from_json(cls, text: Union[str, bytes]) -> PlanConfig:
        try:
            data = json.loads(text)
        except ValueError as ex:
            raise ConfigError(f"Malformed JSON: {ex}") from ex
        return cls.from_dict(data)

    @classmethod
    def load(cls, path: Union[str, Path]) -> PlanConfig:
        try:
            text = Path(path).read_text()
        except OSError as ex:
            raise ConfigError(f"Cannot read {path}: {ex}") from ex
        return cls.from_json(text)

    def to_dict(self) -> Dict[str, Any]:
        """
        Mapping that :py:meth:`from_dict` parses back into this configuration.
        """
        out: Dict[str, Any] = {
            "family": "rs" if self.family is Family.LINE else self.family.name.lower(),
            "e": str(self.e),
            "mode": next(k for k, v in MODES.items() if v is self.mode),
            "seed": self.seed,
            "sampling": self.sampling,
            "threads": self.threads,
        }
        for key in ("epsilon", "t", "kappa"):
            if getattr(self, key) is not None:
                out[key] = getattr(self, key)
        if self.family is Family.TOWER:
            out.update(q=self.q, level=self.level, degree=self.degree, bump=self.bump)
            if self.line is not None:
                out["line"] = list(self.line)
            return out
        out["field"] = {"p": self.p, "k": self.k}
        if self.family is Family.LINE:
            out["degree"] = self.degree
            if self.domain is not None:
                kind, *rest = self.domain
                out["domain"] = {kind: rest[0] if kind == "subgroup" else list(rest)}
            if self.line is not None:
                out["line"] = list(self.line)
            return out
        out.update(N=self.n_exp, divisor=dict(self.divisor))
        if self.roots is not None:
            out["roots"] = list(self.roots)
        if self.f is not None:
            out["f"] = list(self.f)
        if self.orbits is not None:
            out["orbits"] = self.orbits
        return out

    def replace(self, **changes: Any) -> PlanConfig:
        """
        Copy with the given entries replaced; ``None`` values are ignored.
        """
        return dataclasses.replace(self, **{k: v for k, v in changes.items() if v is not None})

    @property
    def spec(self) -> FieldSpec:
        if self.family is Family.TOWER:
            primes, exponents = galois.factors(self.q)
            if len(primes) != 1:
                raise PlanError(f"q = {self.q} is not a prime power", "field")
            return make_field(int(primes[0]), 2 * int(exponents[0]))
        return make_field(self.p, self.k)

    def kummer_roots(self, spec: FieldSpec) -> Tuple[int, ...]:
        """
        Roots of f, checking the congruence on the degree before any root finding.

        Raises:
            PlanError: If ``deg f`` is not -1 mod N (clause ``"congruence"``).
            CurveError: If f is not monic or does not split into distinct linear factors.
        """
        if self.roots is not None:
            return self.roots
        m = len(self.f) - 1
        if (m + 1) % self.n_exp:
            raise PlanError(f"m = {m} is not -1 mod N = {self.n_exp}", "congruence")
        if m < 1 or self.f[-1] != 1:
            raise CurveError(f"f = {self.f} is not a monic polynomial of positive degree")
        poly = galois.Poly(list(reversed(self.f)), field=spec.field)
        roots = sorted(int(r) for r in poly.roots())
        if len(roots) != m:
            raise CurveError(f"f = {poly} does not split into distinct linear factors")
        return tuple(roots)


def build_plan(config: PlanConfig, validate: bool = True) -> FoldingPlan:
    """
    Folding plan described by a configuration.

    Raises:
        PlanError: With the clause of the failed foldability requirement.
        CurveError: On invalid curve data.
    """
    spec = config.spec
    if config.family is Family.TOWER:
        return plan_tower(
            config.q,
            config.level,
            config.degree,
            config.line,
            config.bump,
            config.e,
            validate=validate,
        )
    if config.family is Family.LINE:
        if config.domain is None:
            xs = spec.field(list(config.line))
        else:
            kind, *rest = config.domain
            size, shift = (rest[0], 1) if kind == "subgroup" else (rest[1], rest[0])
            xs = coset_domain(spec, size, shift).coordinates[:, 0]
        return plan_rs(spec, xs, config.degree, config.e, validate)

    roots = config.kummer_roots(spec)
    curve = KummerCurve(spec, config.n_exp, roots)
    size = None if config.orbits is None else config.orbits * config.n_exp
    domain = build_eval_domain(curve, size=size)
    divisor = Divisor.of(0, dict(config.divisor))
    return plan_kummer(curve, divisor, domain, config.e, validate=validate)


def save_plan(path: Union[str, Path], config: PlanConfig, plan: FoldingPlan) -> None:
    """
    Write a plan file: the configuration, the digest and the parameter rows.
    """
    document = {
        "config": config.to_dict(),
        "digest": plan.digest.hex(),
        "levels": plan.describe(),
    }
    Path(path).write_text(json.dumps(document, indent=2) + "\n")


def read_config(path: Union[str, Path]) -> Tuple[PlanConfig, Optional[bytes]]:
    """
    Read a configuration or a plan file.

    Returns:
        The configuration and, for plan files, the recorded digest

    Raises:
        ConfigError: If the file cannot be read or is malformed.
    """
    try:
        document = json.loads(Path(path).read_text())
    except (OSError, ValueError) as ex:
        raise ConfigError(f"Cannot read {path}: {ex}") from ex
    if not (isinstance(document, dict) and "config" in document):
        return PlanConfig.from_dict(document), None
    try:
        digest = bytes.fromhex(document["digest"])
    except (KeyError, TypeError, ValueError) as ex:
        raise ConfigError(f"Malformed plan file {path}: {ex}") from ex
    return PlanConfig.from_dict(document["config"]), digest


def check_digest(plan: FoldingPlan, digest: Optional[bytes]) -> FoldingPlan:
    """
    Refuse a rebuilt plan whose digest differs from the recorded one.
    """
    if digest is not None and plan.digest != digest:
        raise ConfigError("Plan file does not match the plan rebuilt from its config")
    return plan


def load_plan(path: Union[str, Path]) -> Tuple[PlanConfig, FoldingPlan]:
    """
    Rebuild the plan of a configuration or plan file.

    Raises:
        ConfigError: If the file is malformed or the rebuilt plan has another digest.
    """
    config, digest = read_config(path)
    return config, check_digest(build_plan(config), digest)


def word_to_bytes(spec: FieldSpec, values) -> bytes:
    """
    Word file contents: magic, u32 field id, little-endian elements.
    """
    return WORD_MAGIC + pack("<I", field_id(spec)) + elements_to_bytes(spec, values)


def word_from_bytes(spec: FieldSpec, data: bytes) -> Tuple[int, ...]:
    """
    Parse a word file.

    Raises:
        ProofFormatError: On bad magic, another field or a truncated body.
    """
    if len(data) < 8 or data[:4] != WORD_MAGIC:
        raise ProofFormatError("Not a word file")
    (ident,) = unpack_from("<I", data, 4)
    if ident != field_id(spec):
        raise ProofFormatError(f"Word file over another field than {spec}")
    size = spec.element_size
    if (len(data) - 8) % size:
        raise ProofFormatError("Word file body is not a whole number of elements")
    return elements_from_bytes(spec, data, (len(data) - 8) // size, 8)
