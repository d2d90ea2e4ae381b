import copy
import math
from dataclasses import replace
from fractions import Fraction

import numpy as np
import pytest

from agiopp.abstract import CoinMode, Mode, TestKind
from agiopp.errors import CodeError, ConfigError, ProofFormatError
from agiopp.folding import Challenge, OpCounter, OracleTable
from agiopp.iopp import CountingOracle, commit_phase, prove, query_phase, verify
from agiopp.soundness import SoundnessParams, err_query, query_repetitions, total_err, upper
from agiopp.transcript import SeededCoins

from .conftest import corrupt, random_codeword

PLANS = ["f4_plan", "hermitian_plan", "tower_plan"]


@pytest.mark.parametrize("name", PLANS)
@pytest.mark.parametrize("mode", [Mode.FOLD_TO_CONSTANT, Mode.MEMBERSHIP])
@pytest.mark.parametrize("coin_mode", [CoinMode.FIAT_SHAMIR, CoinMode.INTERACTIVE])
def test_honest_prover_is_accepted(request, rng, name, mode, coin_mode):
    plan = request.getfixturevalue(name)
    word = random_codeword(plan, rng)
    proof = prove(word, plan, 4, coin_mode, mode, seed=11)
    assert verify(proof, plan, word, seed=11)
    assert verify(proof, plan, seed=11)


@pytest.mark.parametrize("name", PLANS)
def test_perfect_completeness(request, name):
    plan = request.getfixturevalue(name)
    rng = np.random.default_rng(100)
    for seed in range(100):
        word = random_codeword(plan, rng)
        proof = prove(word, plan, 2, CoinMode.INTERACTIVE, seed=seed)
        decision = verify(proof, plan, word, seed=seed)
        assert decision, (seed, str(decision))


def test_distinct_start_points(hermitian_plan, rng):
    word = random_codeword(hermitian_plan, rng)
    proof = prove(word, hermitian_plan, 30, distinct=True)
    assert len({query.start for query in proof.queries}) == 30
    assert verify(proof, hermitian_plan, word, distinct=True)


def test_query_complexity(hermitian_plan, rng):
    word = random_codeword(hermitian_plan, rng)
    proof = prove(word, hermitian_plan, 6)
    oracle = CountingOracle(word)
    prover_ops, verifier_ops = OpCounter(), OpCounter()
    prove(word, hermitian_plan, 6, counter=prover_ops)
    assert verify(proof, hermitian_plan, oracle, counter=verifier_ops)
    assert oracle.reads == 6 * hermitian_plan.levels[0].arity
    assert 0 < verifier_ops.total < prover_ops.total


@pytest.fixture
def seeded_proof(f4_plan, rng):
    word = random_codeword(f4_plan, rng)
    return word, prove(word, f4_plan, 3, CoinMode.INTERACTIVE, seed=5)


def test_tampered_challenge(f4_plan, seeded_proof):
    word, proof = seeded_proof
    z = proof.challenges[1]
    bad = Challenge((z.z1 + 1) % 4, z.z2)
    decision = verify(replace(proof, challenges=(proof.challenges[0], bad)), f4_plan, seed=5)
    assert not decision
    assert decision.kind is TestKind.CHALLENGE
    assert decision.round == 1


def test_tampered_root(f4_plan, seeded_proof):
    word, proof = seeded_proof
    roots = (bytes(32),) + proof.roots[1:]
    decision = verify(replace(proof, roots=roots), f4_plan, seed=5)
    assert decision.kind is TestKind.COMMITMENT
    assert (decision.round, decision.repetition) == (0, 0)

    fs_proof = prove(word, f4_plan, 3)
    assert not verify(replace(fs_proof, roots=roots), f4_plan)


def test_tampered_opening(f4_plan, seeded_proof):
    word, proof = seeded_proof
    query = proof.queries[1]
    opening = query.rounds[0]
    values = ((opening.values[0] + 1) % 4,) + opening.values[1:]
    query = replace(query, rounds=(replace(opening, values=values),) + query.rounds[1:])
    queries = (proof.queries[0], query) + proof.queries[2:]
    decision = verify(replace(proof, queries=queries), f4_plan, seed=5)
    assert decision.kind is TestKind.COMMITMENT
    assert decision.repetition == 1
    assert "reject (commitment, round 0, repetition 1)" in str(decision)


def test_tampered_beta(f4_plan, seeded_proof):
    word, proof = seeded_proof
    decision = verify(replace(proof, beta=(proof.beta + 1) % 4), f4_plan, seed=5)
    assert decision.kind is TestKind.FINAL
    assert decision.round is None


def test_final_oracle_must_be_a_codeword(hermitian_plan, rng):
    word = random_codeword(hermitian_plan, rng)
    proof = prove(word, hermitian_plan, 2, mode=Mode.MEMBERSHIP)
    final = (proof.final[0], proof.final[0] ^ 1) + proof.final[2:]
    decision = verify(replace(proof, final=final), hermitian_plan)
    assert decision.kind is TestKind.FINAL


def test_word_must_match_the_openings(tower_plan, rng):
    word = random_codeword(tower_plan, rng)
    proof = prove(word, tower_plan, 2)
    other = word + tower_plan.spec.field(1)
    decision = verify(proof, tower_plan, other)
    assert decision.kind is TestKind.COMMITMENT
    assert (decision.round, decision.repetition) == (0, 0)


def test_inconsistent_fold_is_caught(f4_plan, rng):
    word = random_codeword(f4_plan, rng)
    coins = SeededCoins(f4_plan.spec, 9)
    state = commit_phase(word, f4_plan, coins)
    table = state.tables[1]
    state.tables[1] = OracleTable(1, table.values + f4_plan.spec.field(1))
    decision = query_phase(state, 1, coins)
    assert decision.kind is TestKind.ROUND_CONSISTENCY
    assert decision.round == 0


def test_query_phase_reads(hermitian_plan, rng):
    word = random_codeword(hermitian_plan, rng)
    coins = SeededCoins(hermitian_plan.spec, 2)
    state = commit_phase(word, hermitian_plan, coins, Mode.MEMBERSHIP)
    oracles = [CountingOracle(table.values) for table in state.tables]
    assert query_phase(state, 3, coins, oracles=oracles)
    arities = [level.arity for level in hermitian_plan.levels[:-1]]
    assert [oracle.reads for oracle in oracles] == [3 * a for a in arities] + [3]


def test_rejects_on_exactly_the_bad_paths(hermitian_plan, rng):
    plan = hermitian_plan
    word = corrupt(random_codeword(plan, rng), range(0, 60, 4), rng)
    outcomes = set()
    for seed in range(40):
        coins = SeededCoins(plan.spec, seed)
        state = commit_phase(word, plan, coins)
        start = copy.deepcopy(coins).positions(plan.length, 1)[0]
        position = start
        for level in plan.levels[:-1]:
            position = int(level.images[position])
        expected = int(state.final.values[position]) == state.beta
        decision = query_phase(state, 1, coins)
        assert bool(decision) == expected
        if not decision:
            assert decision.kind is TestKind.FINAL
        outcomes.add(expected)
    assert False in outcomes


def test_far_word_is_rejected(hermitian_plan):
    rng = np.random.default_rng(3)
    field = hermitian_plan.spec.field
    rejected = 0
    for seed in range(20):
        word = field.Random(hermitian_plan.length, seed=rng)
        proof = prove(word, hermitian_plan, 8, CoinMode.INTERACTIVE, Mode.MEMBERSHIP, seed)
        decision = verify(proof, hermitian_plan, word, seed=seed)
        if not decision:
            assert decision.kind is TestKind.FINAL
            rejected += 1
    assert rejected >= 17


def test_far_words_stay_below_the_soundness_bound(hermitian_plan):
    plan = hermitian_plan
    n = plan.length
    eps = "2^-10"
    rng = np.random.default_rng(31)
    params = SoundnessParams.from_plan(plan, eps)
    radius = params.radius()
    # Sixteen elements leave err_commit above one, so t bounds the query error alone.
    t = query_repetitions(params.query(), 20)
    # Below half the minimum distance the number of errors is the distance.
    low, high = math.ceil(n / 5), math.ceil(plan.lam * n / 2) - 1
    assert Fraction(high, n) <= Fraction(1, 2)

    trials = 200
    accepted = escaped = 0
    bounds = []
    for seed in range(trials):
        errors = int(rng.integers(low, high + 1))
        word = corrupt(random_codeword(plan, rng), rng.choice(n, errors, replace=False), rng)
        query = err_query(Fraction(errors, n), radius, eps, n)
        bounds.append(min(1.0, upper(total_err(params.commit(), query, t))))
        coins = SeededCoins(plan.spec, seed)
        state = commit_phase(word, plan, coins)
        decision = query_phase(state, t, coins)
        if decision:
            accepted += 1
            if not plan.levels[-1].contains(state.final.values):
                escaped += 1
        else:
            assert decision.kind is TestKind.FINAL

    bound = sum(bounds) / trials
    assert accepted / trials <= bound + 3 * math.sqrt(bound * (1 - bound) / trials)
    # Once the last oracle is off the final code, every query test passes w.p. <= err_query.
    query = upper(params.query()) ** t
    assert escaped / trials <= query + 3 * math.sqrt(query * (1 - query) / trials)


def _surviving_corruption(plan, word):
    for seed in range(50):
        state = commit_phase(word, plan, SeededCoins(plan.spec, seed))
        if len({int(v) for v in state.final.values}) > 1:
            return state
    pytest.fail("The corruption never reached the last oracle")


def test_single_corruption_detection_rate(hermitian_plan):
    plan = hermitian_plan
    rng = np.random.default_rng(47)
    word = corrupt(random_codeword(plan, rng), [int(rng.integers(plan.length))], rng)
    state = _surviving_corruption(plan, word)

    hits = 0
    for start in range(plan.length):
        position = start
        for level in plan.levels[:-1]:
            position = int(level.images[position])
        hits += int(state.final.values[position]) != state.beta
    p = hits / plan.length
    assert 0 < p < 1

    trials = 10_000
    coins = SeededCoins(plan.spec, 1)
    detected = 0
    for _ in range(trials):
        decision = query_phase(state, 1, coins)
        if not decision:
            assert decision.kind is TestKind.FINAL
            detected += 1
    assert abs(detected - trials * p) <= 3 * math.sqrt(trials * p * (1 - p))


def test_structural_mismatch(f4_plan, tower_plan, rng):
    word = random_codeword(f4_plan, rng)
    proof = prove(word, f4_plan, 2)
    with pytest.raises(ProofFormatError):
        verify(proof, tower_plan)
    with pytest.raises(ProofFormatError):
        verify(proof, f4_plan, word[:5])
    with pytest.raises(ProofFormatError):
        verify(replace(proof, sizes=(6, 3)), f4_plan)
    with pytest.raises(ProofFormatError):
        verify(replace(proof, beta=None), f4_plan)
    bad_start = replace(proof.queries[0], start=6)
    with pytest.raises(ProofFormatError):
        verify(replace(proof, queries=(bad_start,) + proof.queries[1:]), f4_plan)


def test_prove_rejects_bad_input(f4_plan, rng):
    word = random_codeword(f4_plan, rng)
    with pytest.raises(CodeError):
        prove(word, f4_plan, 0)
    with pytest.raises(CodeError):
        prove(word[:4], f4_plan, 1)
    with pytest.raises(ConfigError):
        prove(word, f4_plan, 1, CoinMode.INTERACTIVE)
    proof = prove(word, f4_plan, 1, CoinMode.INTERACTIVE, seed=1)
    with pytest.raises(ConfigError):
        verify(proof, f4_plan)
