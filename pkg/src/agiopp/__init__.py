# Entrypoint of agiopp.
# (C) 2026 The agiopp authors

# SPDX-License-Identifier: BSD-3-Clause

"""
Proximity proofs for algebraic geometry codes by iterated folding along curve quotients.
"""

from __future__ import annotations

from .abstract import CoinMode, Family, Mode, TestKind
from .algebra import FieldSpec, make_field
from .config import PlanConfig, build_plan
from .errors import (
    AgIoppError,
    CodeError,
    CommitmentError,
    ConfigError,
    CurveError,
    FieldError,
    PlanError,
    PoleError,
    ProofFormatError,
    SoundnessError,
)
from .folding import Challenge, OpCounter, OracleTable, fold, fold_at_point
from .foldplan import FoldingPlan, plan_kummer, plan_rs, plan_tower, validate_plan
from .interactive import simulate
from .iopp import VerifierDecision, prove, verify
from .kummer import KummerCurve
from .line import LineCurve
from .rrbasis import Divisor, encode
from .soundness import SoundnessParams, min_repetitions, soundness_report
from .tower import TowerCurve
from .transcript import ProofTranscript

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "AgIoppError",
    "Challenge",
    "CodeError",
    "CoinMode",
    "CommitmentError",
    "ConfigError",
    "CurveError",
    "Divisor",
    "Family",
    "FieldError",
    "FieldSpec",
    "FoldingPlan",
    "KummerCurve",
    "LineCurve",
    "Mode",
    "OpCounter",
    "OracleTable",
    "PlanConfig",
    "PlanError",
    "PoleError",
    "ProofFormatError",
    "ProofTranscript",
    "SoundnessError",
    "SoundnessParams",
    "TestKind",
    "TowerCurve",
    "VerifierDecision",
    "build_plan",
    "encode",
    "fold",
    "fold_at_point",
    "make_field",
    "min_repetitions",
    "plan_kummer",
    "plan_rs",
    "plan_tower",
    "prove",
    "simulate",
    "soundness_report",
    "validate_plan",
    "verify",
]
