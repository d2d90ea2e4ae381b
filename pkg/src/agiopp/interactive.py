# Interactive protocol simulation of agiopp.
# (C) 2026 The agiopp authors

# SPDX-License-Identifier: BSD-3-Clause

"""
Prover and verifier as two trio tasks exchanging messages over memory channels.

The verifier draws its public coins from a seeded generator. The exchange is recorded as a
:py:class:`~agiopp.transcript.ProofTranscript`, which is then checked with
:py:func:`~agiopp.iopp.verify` under the same seed.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import trio
from trio._util import ConflictDetector

from .abstract import CoinMode, Mode
from .algebra import as_ints
from .folding import Challenge, OpCounter, OracleTable, fold_async
from .foldplan import FoldingPlan
from .iopp import ProverState, VerifierDecision, _check_input, verify
from .merkle import MerkleTree
from .transcript import ProofTranscript, QueryTranscript, SeededCoins

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Commitment:
    """
    Root of f^(round).
    """

    round: int
    root: bytes


@dataclass(frozen=True)
class FinalMessage:
    """
    Last prover message of the COMMIT phase.
    """

    beta: Optional[int]
    final: Optional[Tuple[int, ...]]


@dataclass(frozen=True)
class Query:
    """
    Request for the openings along the path of ``start``.
    """

    start: int


class InteractiveProver:
    """
    Honest prover endpoint.

    Args:
        word: f^(0)
        plan: Folding plan
        mode: Final test
        threads: Worker threads for folding
    """

    # Prover state, filled while the COMMIT phase runs
    _state: ProverState

    # Guard against two tasks driving the same prover.
    _conflict_detector: ConflictDetector

    def __init__(
        self, word, plan: FoldingPlan, mode: Mode = Mode.FOLD_TO_CONSTANT, threads: int = 1
    ) -> None:
        values = _check_input(word, plan, mode)
        self._state = ProverState(plan, mode, [OracleTable(0, values)], [], [])
        self._threads = threads
        self._conflict_detector = ConflictDetector(
            "Another task is currently talking to this prover"
        )

    @property
    def state(self) -> ProverState:
        return self._state

    @property
    def counter(self) -> OpCounter:
        return self._state.counter

    async def serve(
        self, outbox: trio.MemorySendChannel, inbox: trio.MemoryReceiveChannel
    ) -> None:
        """
        Answer a verifier until it closes its channel.
        """
        state = self._state
        plan = state.plan
        with self._conflict_detector:
            async with outbox, inbox:
                for i in range(plan.rounds):
                    tree = MerkleTree(plan.spec, state.tables[i].values, i)
                    state.trees.append(tree)
                    await outbox.send(Commitment(i, tree.root))
                    z = await inbox.receive()
                    state.challenges.append(z)
                    table = await fold_async(
                        state.tables[i], z, plan, self._threads, state.counter
                    )
                    state.tables.append(table)

                final = None
                if state.mode is Mode.FOLD_TO_CONSTANT:
                    state.beta = int(state.final.values[0])
                else:
                    final = tuple(int(v) for v in as_ints(state.final.values).tolist())
                await outbox.send(FinalMessage(state.beta, final))

                async for query in inbox:
                    await outbox.send(state.open_query(query.start))
        logger.debug("Prover done, %d field operations", state.counter.total)


class InteractiveVerifier:
    """
    Verifier endpoint with seeded public coins.

    Args:
        plan: Folding plan
        t: Number of query tests
        seed: Seed of the public coins
        mode: Final test
        distinct: Sample start points without replacement
    """

    def __init__(
        self,
        plan: FoldingPlan,
        t: int,
        seed: int,
        mode: Mode = Mode.FOLD_TO_CONSTANT,
        distinct: bool = False,
    ) -> None:
        self._plan = plan
        self._t = t
        self._seed = seed
        self._mode = mode
        self._distinct = distinct
        self._conflict_detector = ConflictDetector(
            "Another task is currently talking to this verifier"
        )

    async def run(
        self, outbox: trio.MemorySendChannel, inbox: trio.MemoryReceiveChannel
    ) -> ProofTranscript:
        """
        Drive the exchange and record it.
        """
        plan = self._plan
        coins = SeededCoins(plan.spec, self._seed)
        roots: List[bytes] = []
        challenges: List[Challenge] = []
        queries: List[QueryTranscript] = []
        with self._conflict_detector:
            async with outbox, inbox:
                coins.absorb(plan.digest)
                for i in range(plan.rounds):
                    commitment = await inbox.receive()
                    roots.append(commitment.root)
                    coins.absorb(commitment.root)
                    z = coins.challenge()
                    challenges.append(z)
                    await outbox.send(z)
                final = await inbox.receive()

                for start in coins.positions(plan.length, self._t, self._distinct):
                    await outbox.send(Query(start))
                    queries.append(await inbox.receive())

        return ProofTranscript(
            digest=plan.digest,
            spec=plan.spec,
            mode=self._mode,
            coins=CoinMode.INTERACTIVE,
            arities=tuple(level.arity for level in plan.levels[:-1]),
            sizes=tuple(level.length for level in plan.levels[:-1]),
            roots=tuple(roots),
            challenges=tuple(challenges),
            queries=tuple(queries),
            beta=final.beta,
            final=final.final,
        )


async def run_interactive(
    prover: InteractiveProver, verifier: InteractiveVerifier
) -> ProofTranscript:
    """
    Connect both endpoints and run them to completion.
    """
    to_verifier, from_prover = trio.open_memory_channel(0)
    to_prover, from_verifier = trio.open_memory_channel(0)
    transcript = None

    async def drive() -> None:
        nonlocal transcript
        transcript = await verifier.run(to_prover, from_prover)

    async with trio.open_nursery() as nursery:
        nursery.start_soon(prover.serve, to_verifier, from_verifier)
        nursery.start_soon(drive)
    return transcript


def simulate(
    word,
    plan: FoldingPlan,
    t: int,
    seed: int,
    mode: Mode = Mode.FOLD_TO_CONSTANT,
    distinct: bool = False,
    threads: int = 1,
) -> Tuple[ProofTranscript, VerifierDecision]:
    """
    Run the interactive protocol with an honest prover and return the recorded transcript
    with the verifier's decision.
    """
    prover = InteractiveProver(word, plan, mode, threads)
    verifier = InteractiveVerifier(plan, t, seed, mode, distinct)
    transcript = trio.run(run_interactive, prover, verifier)
    decision = verify(transcript, plan, seed=seed, distinct=distinct)
    logger.info("Interactive run with seed %d: %s", seed, decision)
    return transcript, decision
