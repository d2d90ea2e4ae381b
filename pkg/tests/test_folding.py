import itertools

import numpy as np
import pytest
import trio

from agiopp.config import build_plan
from agiopp.errors import CodeError, PlanError
from agiopp.folding import (
    Challenge,
    OpCounter,
    OracleTable,
    fiber_coefficients,
    fold,
    fold_async,
    fold_at_point,
)
from agiopp.presets import rs_bench_config
from agiopp.workers import map_partitioned, partition

from .conftest import corrupt, random_codeword


def _all_codewords(plan):
    top = plan.levels[0]
    field = plan.spec.field
    for message in itertools.product(range(field.order), repeat=top.dimension):
        yield field(message) @ top.generator


def test_f4_every_fold_is_a_codeword(f4_plan):
    field = f4_plan.spec.field
    level = f4_plan.levels[1]
    challenges = [Challenge(a, b) for a in range(4) for b in range(4)]
    for word in _all_codewords(f4_plan):
        for z in challenges:
            folded = fold(OracleTable(0, word), z, f4_plan)
            assert folded.level == 1
            assert level.contains(folded.values)
    assert len(challenges) == field.order ** 2


@pytest.mark.parametrize("name", ["hermitian_plan", "tower_plan"])
def test_fold_chain_ends_in_a_constant(request, rng, name):
    plan = request.getfixturevalue(name)
    field = plan.spec.field
    table = OracleTable(0, random_codeword(plan, rng))
    for i in range(plan.rounds):
        z = Challenge(int(field.Random(seed=rng)), int(field.Random(seed=rng)))
        table = fold(table, z, plan)
        assert plan.levels[i + 1].contains(table.values)
    assert len(set(int(v) for v in table.values)) == 1


def test_fold_at_point_matches_fold(hermitian_plan, rng):
    level = hermitian_plan.levels[0]
    word = corrupt(random_codeword(hermitian_plan, rng), range(0, 60, 7), rng)
    z = Challenge(3, 11)
    folded = fold(OracleTable(0, word), z, hermitian_plan)
    field = hermitian_plan.spec.field
    z1, z2 = z.elements(field)
    for position in range(len(level.target)):
        fiber_values = word[level.fibers[position]]
        value = fold_at_point(fiber_values, z, level, position)
        assert value == folded.values[position]

        coeffs = fiber_coefficients(OracleTable(0, word), position, hermitian_plan)
        expected = field(0)
        for j in range(level.arity):
            expected += coeffs[j] * (z1 ** j + z2 ** (j + 1) * level.nu_table[j, position])
        assert value == expected


def test_interpolant_recovers_fiber_values(f4_plan, rng):
    level = f4_plan.levels[0]
    word = f4_plan.spec.field.Random(6, seed=rng)
    for position in range(len(level.target)):
        coeffs = fiber_coefficients(OracleTable(0, word), position, f4_plan)
        mu = level.mu_values[position]
        for k, index in enumerate(level.fibers[position]):
            value = sum((coeffs[j] * mu[k] ** j for j in range(3)), f4_plan.spec.field(0))
            assert value == word[index]


def test_fold_is_linear(tower_plan, rng):
    field = tower_plan.spec.field
    a = field.Random(16, seed=rng)
    b = field.Random(16, seed=rng)
    z = Challenge(1, 2)
    left = fold(OracleTable(0, a + b), z, tower_plan).values
    right_a = fold(OracleTable(0, a), z, tower_plan).values
    right_b = fold(OracleTable(0, b), z, tower_plan).values
    assert np.array_equal(left, right_a + right_b)


def test_fold_rejects_bad_input(f4_plan):
    field = f4_plan.spec.field
    with pytest.raises(CodeError):
        fold(OracleTable(0, field.Zeros(5)), Challenge(0, 0), f4_plan)
    with pytest.raises(PlanError):
        fold(OracleTable(2, field.Zeros(1)), Challenge(0, 0), f4_plan)


def test_fold_counts_operations(hermitian_plan):
    counter = OpCounter()
    field = hermitian_plan.spec.field
    fold(OracleTable(0, field.Zeros(60)), Challenge(1, 1), hermitian_plan, counter=counter)
    assert counter.mul > 0
    assert counter.add > 0
    assert counter.total == counter.mul + counter.add + counter.inv


def test_threads_do_not_change_the_result():
    plan = build_plan(rs_bench_config(12))
    field = plan.spec.field
    rng = np.random.default_rng(5)
    word = field.Random(plan.length, seed=rng)
    z = Challenge(12345, 678)
    single = fold(OracleTable(0, word), z, plan, threads=1)
    multi = fold(OracleTable(0, word), z, plan, threads=4)
    assert np.array_equal(single.values, multi.values)
    inside = trio.run(fold_async, OracleTable(0, word), z, plan, 3)
    assert np.array_equal(single.values, inside.values)


def test_partition():
    assert partition(0, 4) == [(0, 0)]
    assert partition(100, 4) == [(0, 100)]
    chunks = partition(1024, 4)
    assert len(chunks) == 4
    assert chunks[0][0] == 0 and chunks[-1][1] == 1024
    assert all(a[1] == b[0] for a, b in zip(chunks, chunks[1:]))


def test_map_partitioned_keeps_order():
    parts = map_partitioned(lambda start, stop: list(range(start, stop)), 2000, threads=3)
    assert [x for part in parts for x in part] == list(range(2000))
