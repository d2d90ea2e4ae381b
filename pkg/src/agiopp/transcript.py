# Proof transcripts of agiopp.
# (C) 2026 The agiopp authors

# SPDX-License-Identifier: BSD-3-Clause

"""
Public coins and the binary proof format.

Proof layout, all integers little-endian::

    "AGIP" | u16 version | plan digest (32) | field spec | u8 mode | u16 r | u16 t
    r times:     u8 arity | u32 oracle size | root (32)
    r times:     z1 | z2
    t times:     u32 start | r times: arity times (value | u8 depth | depth * 32 path)
    trailer:     beta, or u32 count | count values

The mode byte holds the final test in the low nibble and the coin source in the high nibble.
"""

from __future__ import annotations

import hashlib
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from struct import error as StructError
from struct import pack, unpack_from
from typing import List, Optional, Tuple

import numpy as np

from .abstract import CoinMode, Mode
from .algebra import (
    FieldSpec,
    elements_from_bytes,
    elements_to_bytes,
    random_elements,
    spec_from_bytes,
    spec_to_bytes,
)
from .errors import ConfigError, ProofFormatError
from .folding import Challenge
from .merkle import HASH_SIZE

logger = logging.getLogger(__name__)

#: First bytes of every proof file
MAGIC = b"AGIP"

#: Current format version
VERSION = 1


class Coins(ABC):
    """
    Source of the verifier's public randomness.
    """

    # Alphabet of the challenges
    _spec: FieldSpec

    def __init__(self, spec: FieldSpec) -> None:
        self._spec = spec

    @abstractmethod
    def absorb(self, data: bytes) -> None:
        """
        Feed a prover message.
        """

    @abstractmethod
    def challenge(self) -> Challenge:
        """
        Draw a folding challenge.
        """

    @abstractmethod
    def _indices(self, size: int, t: int, distinct: bool) -> List[int]:
        pass

    def positions(self, size: int, t: int, distinct: bool = False) -> List[int]:
        """
        Draw ``t`` query points of a domain of ``size`` points.

        Args:
            size: Domain size
            t: Number of repetitions
            distinct: Sample without replacement. Ignored when ``t > size``.
        """
        if distinct and t > size:
            logger.info("%d repetitions exceed %d points, sampling independently", t, size)
            distinct = False
        return self._indices(size, t, distinct)


class SeededCoins(Coins):
    """
    Coins from a seeded :py:func:`numpy.random.default_rng` generator; messages are ignored.
    """

    # Generator
    _rng: np.random.Generator

    def __init__(self, spec: FieldSpec, seed: int) -> None:
        super().__init__(spec)
        self._rng = np.random.default_rng(seed)

    def absorb(self, data: bytes) -> None:
        pass

    def challenge(self) -> Challenge:
        z1, z2 = (int(v) for v in random_elements(self._spec, 2, self._rng))
        return Challenge(z1, z2)

    def _indices(self, size: int, t: int, distinct: bool) -> List[int]:
        if distinct:
            return [int(k) for k in self._rng.choice(size, t, replace=False)]
        return [int(k) for k in self._rng.integers(0, size, t)]


class FiatShamirCoins(Coins):
    """
    Coins hashed from everything absorbed so far with SHA-256.
    """

    # Running state
    _state: bytes

    def __init__(self, spec: FieldSpec) -> None:
        super().__init__(spec)
        self._state = hashlib.sha256(b"agiopp fiat-shamir" + spec_to_bytes(spec)).digest()

    def absorb(self, data: bytes) -> None:
        self._state = hashlib.sha256(self._state + data).digest()

    def _squeeze(self, label: bytes, counter: int) -> bytes:
        return hashlib.sha256(self._state + label + pack("<I", counter)).digest()

    def challenge(self) -> Challenge:
        order = self._spec.order
        # 512 bits per element keep the reduction bias negligible.
        z1 = int.from_bytes(self._squeeze(b"z", 0) + self._squeeze(b"z", 1), "little") % order
        z2 = int.from_bytes(self._squeeze(b"z", 2) + self._squeeze(b"z", 3), "little") % order
        self.absorb(b"z" + elements_to_bytes(self._spec, (z1, z2)))
        return Challenge(z1, z2)

    def _indices(self, size: int, t: int, distinct: bool) -> List[int]:
        out: List[int] = []
        seen = set()
        counter = 0
        while len(out) < t:
            index = int.from_bytes(self._squeeze(b"q", counter)[:8], "little") % size
            counter += 1
            if distinct:
                if index in seen:
                    continue
                seen.add(index)
            out.append(index)
        self.absorb(b"q" + pack("<I", t))
        return out


def make_coins(mode: CoinMode, spec: FieldSpec, seed: Optional[int] = None) -> Coins:
    """
    Coin source for a coin mode.

    Raises:
        ConfigError: If a seeded source is requested without seed.
    """
    if mode is CoinMode.FIAT_SHAMIR:
        return FiatShamirCoins(spec)
    if seed is None:
        raise ConfigError("Interactive coins need a seed")
    return SeededCoins(spec, seed)


@dataclass(frozen=True)
class FiberOpening:
    """
    Opened values of one fiber with one authentication path per value.
    """

    values: Tuple[int, ...]
    paths: Tuple[Tuple[bytes, ...], ...]


@dataclass(frozen=True)
class QueryTranscript:
    """
    One query test: the sampled start point and the fiber openings along its path.
    """

    start: int
    rounds: Tuple[FiberOpening, ...]


@dataclass(frozen=True)
class ProofTranscript:
    """
    Self-contained proof.
    """

    #: Digest of the plan the proof is for
    digest: bytes

    #: Alphabet
    spec: FieldSpec

    #: Final test
    mode: Mode

    #: Coin source
    coins: CoinMode

    #: Degree of every folding round
    arities: Tuple[int, ...]

    #: Length of every committed oracle
    sizes: Tuple[int, ...]

    #: Commitment root of f^(0) ... f^(r-1)
    roots: Tuple[bytes, ...]

    #: Challenge of every round
    challenges: Tuple[Challenge, ...]

    #: Query tests
    queries: Tuple[QueryTranscript, ...]

    #: Committed constant, fold to constant mode
    beta: Optional[int] = None

    #: Last oracle in full, membership mode
    final: Optional[Tuple[int, ...]] = None

    @property
    def rounds(self) -> int:
        return len(self.roots)

    @property
    def repetitions(self) -> int:
        return len(self.queries)

    def to_bytes(self) -> bytes:
        """
        Serialize.
        """
        spec = self.spec
        out = [pack("<4sH", MAGIC, VERSION), self.digest, spec_to_bytes(spec)]
        mode = self.mode.value | self.coins.value << 4
        out.append(pack("<BHH", mode, self.rounds, self.repetitions))
        for arity, size, root in zip(self.arities, self.sizes, self.roots):
            out.append(pack("<BI", arity, size) + root)
        for z in self.challenges:
            out.append(elements_to_bytes(spec, (z.z1, z.z2)))
        for query in self.queries:
            out.append(pack("<I", query.start))
            for opening in query.rounds:
                for value, path in zip(opening.values, opening.paths):
                    out.append(elements_to_bytes(spec, (value,)) + pack("<B", len(path)))
                    out.append(b"".join(path))
        if self.mode is Mode.FOLD_TO_CONSTANT:
            out.append(elements_to_bytes(spec, (self.beta,)))
        else:
            out.append(pack("<I", len(self.final)) + elements_to_bytes(spec, self.final))
        return b"".join(out)

    @classmethod
    def from_bytes(cls, data: bytes) -> ProofTranscript:
        """
        Parse a proof.

        Raises:
            ProofFormatError: If the data is malformed, truncated or followed by garbage.
        """
        try:
            return _parse(data)
        except StructError as ex:
            raise ProofFormatError(f"Truncated proof: {ex}") from ex


def _take(data: bytes, offset: int, size: int) -> bytes:
    chunk = data[offset : offset + size]
    if len(chunk) != size:
        raise ProofFormatError(f"Truncated proof at offset {offset}")
    return chunk


def _parse(data: bytes) -> ProofTranscript:
    magic, version = unpack_from("<4sH", data, 0)
    if magic != MAGIC:
        raise ProofFormatError(f"Bad magic {magic!r}")
    if version != VERSION:
        raise ProofFormatError(f"Unsupported proof version {version}")
    offset = 6
    digest = _take(data, offset, HASH_SIZE)
    spec, offset = spec_from_bytes(data, offset + HASH_SIZE)
    mode_byte, r, t = unpack_from("<BHH", data, offset)
    offset += 5
    try:
        mode = Mode(mode_byte & 0x0F)
        coins = CoinMode(mode_byte >> 4)
    except ValueError as ex:
        raise ProofFormatError(f"Bad mode byte {mode_byte:#04x}") from ex

    arities, sizes, roots = [], [], []
    for _ in range(r):
        arity, size = unpack_from("<BI", data, offset)
        if arity < 2:
            raise ProofFormatError(f"Round arity {arity}")
        arities.append(arity)
        sizes.append(size)
        roots.append(_take(data, offset + 5, HASH_SIZE))
        offset += 5 + HASH_SIZE

    size = spec.element_size
    challenges = []
    for _ in range(r):
        z1, z2 = elements_from_bytes(spec, data, 2, offset)
        challenges.append(Challenge(z1, z2))
        offset += 2 * size

    queries = []
    for _ in range(t):
        (start,) = unpack_from("<I", data, offset)
        offset += 4
        rounds = []
        for arity in arities:
            values, paths = [], []
            for _ in range(arity):
                (value,) = elements_from_bytes(spec, data, 1, offset)
                (depth,) = unpack_from("<B", data, offset + size)
                offset += size + 1
                path = _take(data, offset, depth * HASH_SIZE)
                offset += depth * HASH_SIZE
                values.append(value)
                chunks = range(0, len(path), HASH_SIZE)
                paths.append(tuple(path[k : k + HASH_SIZE] for k in chunks))
            rounds.append(FiberOpening(tuple(values), tuple(paths)))
        queries.append(QueryTranscript(start, tuple(rounds)))

    beta = final = None
    if mode is Mode.FOLD_TO_CONSTANT:
        (beta,) = elements_from_bytes(spec, data, 1, offset)
        offset += size
    else:
        (count,) = unpack_from("<I", data, offset)
        final = elements_from_bytes(spec, data, count, offset + 4)
        offset += 4 + count * size
    if offset != len(data):
        raise ProofFormatError(f"{len(data) - offset} trailing bytes after the proof")

    return ProofTranscript(
        digest,
        spec,
        mode,
        coins,
        tuple(arities),
        tuple(sizes),
        tuple(roots),
        tuple(challenges),
        tuple(queries),
        beta,
        final,
    )
