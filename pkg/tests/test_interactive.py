import pytest
import trio
import trio.testing

from agiopp.abstract import CoinMode, Mode
from agiopp.interactive import (
    InteractiveProver,
    InteractiveVerifier,
    run_interactive,
    simulate,
)
from agiopp.iopp import prove, verify

from .conftest import random_codeword


@pytest.mark.parametrize("mode", [Mode.FOLD_TO_CONSTANT, Mode.MEMBERSHIP])
def test_simulate_accepts_honest_prover(hermitian_plan, rng, mode):
    word = random_codeword(hermitian_plan, rng)
    transcript, decision = simulate(word, hermitian_plan, 5, seed=17, mode=mode)
    assert decision
    assert transcript.coins is CoinMode.INTERACTIVE
    assert transcript.repetitions == 5
    assert verify(transcript, hermitian_plan, word, seed=17)


def test_interactive_matches_seeded_proof(tower_plan, rng):
    word = random_codeword(tower_plan, rng)
    transcript, decision = simulate(word, tower_plan, 3, seed=4, threads=2)
    assert decision
    assert transcript == prove(word, tower_plan, 3, CoinMode.INTERACTIVE, seed=4)


def test_prover_state_after_run(f4_plan, rng):
    word = random_codeword(f4_plan, rng)
    prover = InteractiveProver(word, f4_plan)
    verifier = InteractiveVerifier(f4_plan, 2, seed=1)
    transcript = trio.run(run_interactive, prover, verifier)
    assert len(prover.state.tables) == f4_plan.rounds + 1
    assert prover.state.challenges == list(transcript.challenges)
    assert prover.counter.total > 0


def test_prover_serves_one_verifier(f4_plan, rng):
    word = random_codeword(f4_plan, rng)
    prover = InteractiveProver(word, f4_plan)

    async def main():
        first = trio.open_memory_channel(0)
        second = trio.open_memory_channel(0)
        async with trio.open_nursery() as nursery:
            nursery.start_soon(prover.serve, first[0], second[1])
            await trio.testing.wait_all_tasks_blocked()
            with pytest.raises(trio.BusyResourceError):
                await prover.serve(*trio.open_memory_channel(0))
            nursery.cancel_scope.cancel()

    trio.run(main)
