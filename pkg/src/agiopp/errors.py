# Exceptions of agiopp.
# (C) 2026 The agiopp authors

# SPDX-License-Identifier: BSD-3-Clause

"""
Exception hierarchy. Each exception also derives from the builtin a caller would catch
for the same mistake, so ``except ValueError`` keeps working.
"""

from __future__ import annotations

from typing import Optional, Sequence, Tuple


class AgIoppError(Exception):
    """
    Base class of all errors raised by agiopp.
    """


class FieldError(AgIoppError, ValueError):
    """
    Invalid field parameters, missing roots of unity or bad interpolation input.
    """


class CurveError(AgIoppError, ValueError):
    """
    Invalid curve data, ramified fibers or a badly sized evaluation domain.
    """


class PoleError(CurveError):
    """
    A rational function was evaluated at one of its poles.
    """


class CodeError(AgIoppError, ValueError):
    """
    Encoding or exhaustive code computations with bad arguments.
    """


class PlanError(AgIoppError, ValueError):
    """
    A folding plan could not be built or failed validation.

    Args:
        message: Human readable description
        clause: Name of the foldability requirement that failed
        failures: All failed checks, as ``(clause, message)`` pairs
    """

    #: Name of the first failed requirement, e.g. ``"congruence"``
    clause: str

    #: Every failed check of a validation run
    failures: Tuple[Tuple[str, str], ...]

    def __init__(
        self,
        message: str,
        clause: str = "plan",
        failures: Optional[Sequence[Tuple[str, str]]] = None,
    ) -> None:
        super().__init__(f"[{clause}] {message}")
        self.clause = clause
        self.failures = tuple(failures) if failures else ((clause, message),)


class ProofFormatError(AgIoppError, ValueError):
    """
    A proof, word or plan file is structurally malformed.
    """


class CommitmentError(AgIoppError, IndexError):
    """
    Opening of a committed oracle outside its index range.
    """


class SoundnessError(AgIoppError, ValueError):
    """
    Soundness parameters out of range, or a security target that cannot be reached.
    """


class ConfigError(AgIoppError, ValueError):
    """
    Malformed plan configuration.
    """
