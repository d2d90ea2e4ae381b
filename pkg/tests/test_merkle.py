from dataclasses import replace

import pytest

from agiopp.algebra import make_field
from agiopp.errors import CommitmentError
from agiopp.merkle import (
    HASH_SIZE,
    commit_oracle,
    leaf_hash,
    open_oracle,
    pad_hash,
    tree_depth,
    verify_opening,
)


@pytest.fixture
def spec():
    return make_field(2, 4)


def test_tree_depth():
    assert [tree_depth(n) for n in (1, 2, 3, 4, 5, 60, 64, 65)] == [0, 1, 2, 2, 3, 6, 6, 7]


@pytest.mark.parametrize("size", [1, 2, 3, 12, 60])
def test_every_opening_verifies(spec, size):
    values = [(7 * k + 3) % 16 for k in range(size)]
    tree = commit_oracle(spec, values, oracle=2)
    assert len(tree.root) == HASH_SIZE
    assert len(tree) == size
    for index in range(size):
        opening = open_oracle(tree, index)
        assert opening.value == values[index]
        assert verify_opening(spec, tree.root, 2, size, opening)


def test_tampered_openings_fail(spec):
    values = list(range(12))
    tree = commit_oracle(spec, values, oracle=1)
    opening = tree.open(5)
    assert not verify_opening(spec, tree.root, 1, 12, replace(opening, value=6))
    assert not verify_opening(spec, tree.root, 1, 12, replace(opening, index=4))
    assert not verify_opening(spec, tree.root, 0, 12, opening)
    assert not verify_opening(spec, tree.root, 1, 13, replace(opening, index=12))
    assert not verify_opening(spec, tree.root, 1, 12, replace(opening, value=16))
    bad_path = (b"\x00" * HASH_SIZE,) + opening.path[1:]
    assert not verify_opening(spec, tree.root, 1, 12, replace(opening, path=bad_path))
    assert not verify_opening(spec, tree.root, 1, 12, replace(opening, path=opening.path[:-1]))


def test_domain_separation(spec):
    assert leaf_hash(spec, 0, 3, 5) != leaf_hash(spec, 1, 3, 5)
    assert leaf_hash(spec, 0, 3, 5) != leaf_hash(spec, 0, 4, 5)
    assert pad_hash(0, 3) != pad_hash(1, 3)
    assert commit_oracle(spec, [1, 2, 3], 0).root != commit_oracle(spec, [1, 2, 3], 1).root
    # A padded table differs from the same table with explicit zeros.
    assert commit_oracle(spec, [1, 2, 3]).root != commit_oracle(spec, [1, 2, 3, 0]).root


def test_threads_do_not_change_the_root(spec):
    values = [k % 16 for k in range(3000)]
    single = commit_oracle(spec, values, threads=1)
    assert single.root == commit_oracle(spec, values, threads=4).root


def test_open_out_of_range(spec):
    tree = commit_oracle(spec, [1, 2, 3])
    with pytest.raises(CommitmentError):
        tree.open(3)
    with pytest.raises(CommitmentError):
        open_oracle(tree, -1)
    with pytest.raises(CommitmentError):
        commit_oracle(spec, [])
    assert isinstance(CommitmentError("x"), IndexError)
