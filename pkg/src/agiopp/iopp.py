# Prover and verifier of agiopp.
# (C) 2026 The agiopp authors

# SPDX-License-Identifier: BSD-3-Clause

"""
The folding proximity test.

COMMIT: the prover commits to f^(0), receives z^(0), folds, commits to f^(1) and so on.
In fold to constant mode the last oracle is a constant and only ``beta`` is sent; in
membership mode the last oracle is sent in full.

QUERY: ``t`` times, a point Q_0 of the top domain is sampled and projected down the plan. In
round i the verifier reads the ``p_i`` values of f^(i) on the fiber over Q_{i+1}, folds them
and compares with f^(i+1)(Q_{i+1}), which is one of the values read in the next round.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

import galois
import numpy as np

from .abstract import CoinMode, Mode, TestKind
from .algebra import as_ints, element_to_bytes
from .errors import CodeError, PlanError, ProofFormatError
from .folding import Challenge, OpCounter, OracleTable, fold, fold_at_point
from .foldplan import FoldingPlan
from .merkle import MerkleTree, Opening, verify_opening
from .transcript import (
    Coins,
    FiberOpening,
    ProofTranscript,
    QueryTranscript,
    make_coins,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VerifierDecision:
    """
    Outcome of a verification. Truthy when accepted.
    """

    #: Accepted
    accept: bool

    #: Failed test
    kind: Optional[TestKind] = None

    #: Round of the failed test
    round: Optional[int] = None

    #: Repetition of the failed test
    repetition: Optional[int] = None

    #: Human readable reason
    reason: str = ""

    def __bool__(self) -> bool:
        return self.accept

    def __str__(self) -> str:
        if self.accept:
            return "accept"
        where = f"round {self.round}" if self.round is not None else "final"
        if self.repetition is not None:
            where += f", repetition {self.repetition}"
        return f"reject ({self.kind.name.lower()}, {where}): {self.reason}"


ACCEPT = VerifierDecision(True)


class _Rejected(Exception):
    def __init__(self, decision: VerifierDecision) -> None:
        super().__init__(str(decision))
        self.decision = decision


def _reject(
    kind: TestKind, round: Optional[int], reason: str, repetition: Optional[int] = None
):
    return _Rejected(VerifierDecision(False, kind, round, repetition, reason))


class CountingOracle:
    """
    Direct oracle access to a table that counts every read.
    """

    # Values as integers
    _values: Sequence[int]

    #: Number of entries read so far
    reads: int

    def __init__(self, values) -> None:
        self._values = [int(v) for v in np.asarray(values).reshape(-1).tolist()]
        self.reads = 0

    def __len__(self) -> int:
        return len(self._values)

    def __getitem__(self, index: int) -> int:
        self.reads += 1
        return self._values[index]

    def read_all(self) -> List[int]:
        self.reads += len(self._values)
        return list(self._values)


@dataclass
class ProverState:
    """
    Everything the prover holds after the COMMIT phase.
    """

    #: Plan
    plan: FoldingPlan

    #: Final test
    mode: Mode

    #: f^(0) ... f^(r)
    tables: List[OracleTable]

    #: z^(0) ... z^(r-1)
    challenges: List[Challenge]

    #: Commitments of f^(0) ... f^(r-1)
    trees: List[MerkleTree]

    #: Committed constant
    beta: Optional[int] = None

    #: Prover field operations
    counter: OpCounter = field(default_factory=OpCounter)

    @property
    def final(self) -> OracleTable:
        return self.tables[-1]

    def final_message(self) -> bytes:
        """
        What the prover sends after the last round, as absorbed by the coins.
        """
        spec = self.plan.spec
        if self.mode is Mode.FOLD_TO_CONSTANT:
            return element_to_bytes(spec, self.beta)
        return final_root(self.plan, as_ints(self.final.values).tolist())

    def open_fiber(self, round: int, position: int) -> FiberOpening:
        """
        Open f^(round) on the fiber over target ``position``.
        """
        fiber = self.plan.levels[round].fibers[position]
        openings = [self.trees[round].open(int(k)) for k in fiber]
        return FiberOpening(tuple(o.value for o in openings), tuple(o.path for o in openings))

    def open_query(self, start: int) -> QueryTranscript:
        """
        Openings along the projection path of ``start``.
        """
        rounds = []
        position = start
        for i in range(self.plan.rounds):
            target = int(self.plan.levels[i].images[position])
            rounds.append(self.open_fiber(i, target))
            position = target
        return QueryTranscript(start, tuple(rounds))


def final_root(plan: FoldingPlan, values: Sequence[int]) -> bytes:
    """
    Root of the last oracle, oracle index r.
    """
    return MerkleTree(plan.spec, values, plan.rounds).root


def _check_input(word, plan: FoldingPlan, mode: Mode) -> galois.FieldArray:
    if plan.rounds < 1:
        raise PlanError("Plan has no folding rounds")
    if mode is Mode.FOLD_TO_CONSTANT and plan.final_dimension != 1:
        raise PlanError(
            f"Fold to constant needs a final dimension of 1, got {plan.final_dimension}",
            "rs structure",
        )
    values = plan.spec.field(word)
    if values.shape != (plan.length,):
        raise CodeError(f"Word of shape {values.shape} for a plan of length {plan.length}")
    return values


def commit_phase(
    word,
    plan: FoldingPlan,
    coins: Coins,
    mode: Mode = Mode.FOLD_TO_CONSTANT,
    threads: int = 1,
    counter: Optional[OpCounter] = None,
) -> ProverState:
    """
    Run the COMMIT phase of the honest prover.

    Args:
        word: f^(0), aligned with the top domain
        plan: Folding plan
        coins: Challenge source
        mode: Final test
        threads: Worker threads for folding and hashing
        counter: Prover operation counter

    Raises:
        CodeError: If the word does not match the plan.
        PlanError: If the plan cannot be used in the requested mode.
    """
    values = _check_input(word, plan, mode)
    counter = counter if counter is not None else OpCounter()
    state = ProverState(plan, mode, [OracleTable(0, values)], [], [], counter=counter)
    coins.absorb(plan.digest)
    for i in range(plan.rounds):
        tree = MerkleTree(plan.spec, state.tables[i].values, i, threads)
        state.trees.append(tree)
        coins.absorb(tree.root)
        z = coins.challenge()
        state.challenges.append(z)
        state.tables.append(fold(state.tables[i], z, plan, threads, counter))
    if mode is Mode.FOLD_TO_CONSTANT:
        state.beta = int(state.final.values[0])
    coins.absorb(state.final_message())
    logger.info("Committed %d oracles, %d prover field operations", plan.rounds, counter.total)
    return state


def _query_test(
    plan: FoldingPlan,
    challenges: Sequence[Challenge],
    start: int,
    fetch: Callable[[int, int, np.ndarray], Sequence[int]],
    final: Callable[[int, galois.FieldArray], None],
    counter: Optional[OpCounter],
) -> None:
    # Raises _Rejected on the first failed check.
    gf = plan.spec.field
    position = start
    expected = None
    for i in range(plan.rounds):
        level = plan.levels[i]
        target = int(level.images[position])
        fiber = level.fibers[target]
        values = fetch(i, target, fiber)
        if expected is not None:
            claimed = values[int(np.nonzero(fiber == position)[0][0])]
            if gf(claimed) != expected:
                reason = f"f^({i}) at {position} != fold"
                raise _reject(TestKind.ROUND_CONSISTENCY, i - 1, reason)
        expected = fold_at_point(values, challenges[i], level, target, counter)
        position = target
    final(position, expected)


def _final_check(plan: FoldingPlan, mode: Mode, beta, final_table) -> Callable:
    gf = plan.spec.field
    last = plan.rounds - 1

    def check(position: int, expected) -> None:
        if mode is Mode.FOLD_TO_CONSTANT:
            if gf(beta) != expected:
                raise _reject(TestKind.FINAL, None, f"fold {int(expected)} != beta {beta}")
        elif gf(final_table[position]) != expected:
            reason = f"f^({last + 1}) at {position} != fold"
            raise _reject(TestKind.ROUND_CONSISTENCY, last, reason)

    return check


def _membership(plan: FoldingPlan, values: Sequence[int]) -> None:
    level = plan.levels[-1]
    if len(values) != level.length:
        raise ProofFormatError(f"Final oracle of length {len(values)}, expected {level.length}")
    if not level.contains(plan.spec.field(list(values))):
        raise _reject(TestKind.FINAL, None, "last oracle is not a codeword")


def query_phase(
    state: ProverState,
    t: int,
    coins: Coins,
    distinct: bool = False,
    counter: Optional[OpCounter] = None,
    oracles: Optional[Sequence[CountingOracle]] = None,
) -> VerifierDecision:
    """
    Run the QUERY phase against the prover's oracles by direct access.

    Args:
        state: Prover state after the COMMIT phase
        t: Number of query tests
        coins: The coin source used for the COMMIT phase
        distinct: Sample start points without replacement
        counter: Verifier operation counter
        oracles: Access counting wrappers of f^(0) ... f^(r), created when not given

    Returns:
        The decision
    """
    plan = state.plan
    if oracles is None:
        oracles = [CountingOracle(table.values) for table in state.tables]
    starts = coins.positions(plan.length, t, distinct)

    def fetch(i: int, target: int, fiber: np.ndarray) -> List[int]:
        return [oracles[i][int(k)] for k in fiber]

    try:
        final_table = None
        if state.mode is Mode.MEMBERSHIP:
            final_table = oracles[-1].read_all()
            _membership(plan, final_table)
        check = _final_check(plan, state.mode, state.beta, final_table)
        for repetition, start in enumerate(starts):
            try:
                _query_test(plan, state.challenges, start, fetch, check, counter)
            except _Rejected as ex:
                raise _reject(
                    ex.decision.kind, ex.decision.round, ex.decision.reason, repetition
                ) from None
    except _Rejected as ex:
        logger.info("Query phase: %s", ex.decision)
        return ex.decision
    return ACCEPT


def prove(
    word,
    plan: FoldingPlan,
    t: int,
    coin_mode: CoinMode = CoinMode.FIAT_SHAMIR,
    mode: Mode = Mode.FOLD_TO_CONSTANT,
    seed: Optional[int] = None,
    distinct: bool = False,
    threads: int = 1,
    counter: Optional[OpCounter] = None,
) -> ProofTranscript:
    """
    Produce a self-contained proof that ``word`` is close to the top code of ``plan``.

    Args:
        word: f^(0)
        plan: Folding plan
        t: Number of query tests
        coin_mode: Hash derived or seeded challenges
        mode: Final test
        seed: Verifier seed, required for seeded challenges
        distinct: Sample start points without replacement
        threads: Worker threads
        counter: Prover operation counter

    Raises:
        ConfigError: Seeded challenges without seed.
        CodeError: If the word does not match the plan.
        PlanError: If the plan cannot be used in the requested mode.
    """
    if t < 1:
        raise CodeError(f"Need at least one query test, got t = {t}")
    coins = make_coins(coin_mode, plan.spec, seed)
    state = commit_phase(word, plan, coins, mode, threads, counter)
    starts = coins.positions(plan.length, t, distinct)
    return assemble_transcript(state, coin_mode, [state.open_query(s) for s in starts])


def assemble_transcript(
    state: ProverState, coin_mode: CoinMode, queries: Sequence[QueryTranscript]
) -> ProofTranscript:
    """
    Transcript from a prover state and the answered query tests.
    """
    plan = state.plan
    final = None
    if state.mode is Mode.MEMBERSHIP:
        final = tuple(int(v) for v in as_ints(state.final.values).tolist())
    return ProofTranscript(
        digest=plan.digest,
        spec=plan.spec,
        mode=state.mode,
        coins=coin_mode,
        arities=tuple(level.arity for level in plan.levels[:-1]),
        sizes=tuple(level.length for level in plan.levels[:-1]),
        roots=tuple(tree.root for tree in state.trees),
        challenges=tuple(state.challenges),
        queries=tuple(queries),
        beta=state.beta,
        final=final,
    )


def _check_structure(transcript: ProofTranscript, plan: FoldingPlan) -> None:
    if transcript.digest != plan.digest:
        raise ProofFormatError("Proof is for a different plan")
    if transcript.spec != plan.spec:
        raise ProofFormatError(f"Proof over {transcript.spec}, plan over {plan.spec}")
    arities = tuple(level.arity for level in plan.levels[:-1])
    sizes = tuple(level.length for level in plan.levels[:-1])
    if transcript.arities != arities or transcript.sizes != sizes:
        raise ProofFormatError("Round structure of the proof does not match the plan")
    if len(transcript.challenges) != transcript.rounds:
        raise ProofFormatError("Number of challenges does not match the number of rounds")
    if (transcript.beta is None) != (transcript.mode is Mode.MEMBERSHIP):
        raise ProofFormatError("Final message does not match the mode")
    for query in transcript.queries:
        if not 0 <= query.start < plan.length or len(query.rounds) != transcript.rounds:
            raise ProofFormatError(f"Malformed query test starting at {query.start}")


def verify(
    transcript: ProofTranscript,
    plan: FoldingPlan,
    word=None,
    seed: Optional[int] = None,
    distinct: bool = False,
    counter: Optional[OpCounter] = None,
) -> VerifierDecision:
    """
    Verify a proof.

    Args:
        transcript: Proof
        plan: Plan the proof claims to be for
        word: f^(0), or a :py:class:`CountingOracle` of it. When given, the opened top values
            must agree with it.
        seed: Verifier seed of seeded challenges
        distinct: Start points were sampled without replacement
        counter: Verifier operation counter

    Returns:
        The decision

    Raises:
        ProofFormatError: If the proof does not structurally fit the plan.
        ConfigError: Seeded challenges without seed.
    """
    _check_structure(transcript, plan)
    spec = plan.spec
    coins = make_coins(transcript.coins, spec, seed)
    oracle = word
    if word is not None and not isinstance(word, CountingOracle):
        oracle = CountingOracle(spec.field(word))
    if oracle is not None and len(oracle) != plan.length:
        raise ProofFormatError(
            f"Word of length {len(oracle)} for a plan of length {plan.length}"
        )

    try:
        coins.absorb(plan.digest)
        for i, root in enumerate(transcript.roots):
            coins.absorb(root)
            if coins.challenge() != transcript.challenges[i]:
                raise _reject(
                    TestKind.CHALLENGE, i, "challenge differs from the recomputed one"
                )
        if transcript.mode is Mode.FOLD_TO_CONSTANT:
            coins.absorb(element_to_bytes(spec, transcript.beta))
        else:
            _membership(plan, transcript.final)
            coins.absorb(final_root(plan, transcript.final))

        starts = coins.positions(plan.length, transcript.repetitions, distinct)
        if starts != [query.start for query in transcript.queries]:
            raise _reject(
                TestKind.CHALLENGE, None, "query points differ from the recomputed ones"
            )

        check = _final_check(plan, transcript.mode, transcript.beta, transcript.final)
        for repetition, query in enumerate(transcript.queries):
            fetch = _opened_values(plan, transcript, query, oracle, repetition)
            try:
                _query_test(plan, transcript.challenges, query.start, fetch, check, counter)
            except _Rejected as ex:
                raise _reject(
                    ex.decision.kind, ex.decision.round, ex.decision.reason, repetition
                ) from None
    except _Rejected as ex:
        logger.info("Verifier: %s", ex.decision)
        return ex.decision
    logger.debug("Verifier accepted %d query tests", transcript.repetitions)
    return ACCEPT


def _opened_values(
    plan: FoldingPlan,
    transcript: ProofTranscript,
    query: QueryTranscript,
    oracle: Optional[CountingOracle],
    repetition: int,
) -> Callable[[int, int, np.ndarray], Sequence[int]]:
    spec = plan.spec

    def fetch(i: int, target: int, fiber: np.ndarray) -> Sequence[int]:
        opening = query.rounds[i]
        if len(opening.values) != len(fiber):
            raise ProofFormatError(f"Round {i} opens {len(opening.values)} values")
        for index, value, path in zip(fiber, opening.values, opening.paths):
            leaf = Opening(int(index), value, path)
            if not verify_opening(spec, transcript.roots[i], i, transcript.sizes[i], leaf):
                reason = f"opening of f^({i}) at {int(index)}"
                raise _reject(TestKind.COMMITMENT, i, reason, repetition)
        if i == 0 and oracle is not None:
            direct = [oracle[int(k)] for k in fiber]
            if list(opening.values) != direct:
                raise _reject(
                    TestKind.COMMITMENT, 0, "opened values differ from the word", repetition
                )
        return opening.values

    return fetch
