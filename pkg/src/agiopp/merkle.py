# Oracle commitments of agiopp.
# (C) 2026 The agiopp authors

# SPDX-License-Identifier: BSD-3-Clause

"""
SHA-256 hash trees over oracle tables.

Leaves, inner nodes and padding are domain separated by a tag byte and the oracle index, so
that a path of one oracle never verifies against the root of another one.
"""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass
from struct import pack
from typing import List, Sequence, Tuple

import numpy as np

from .algebra import FieldSpec, element_to_bytes
from .errors import CommitmentError
from .workers import map_partitioned

logger = logging.getLogger(__name__)

#: Size of a root or path node
HASH_SIZE = 32

_LEAF = b"\x00"
_NODE = b"\x01"
_PAD = b"\x02"


def leaf_hash(spec: FieldSpec, oracle: int, index: int, value) -> bytes:
    data = _LEAF + pack("<II", oracle, index) + element_to_bytes(spec, value)
    return hashlib.sha256(data).digest()


def node_hash(oracle: int, left: bytes, right: bytes) -> bytes:
    return hashlib.sha256(_NODE + pack("<I", oracle) + left + right).digest()


def pad_hash(oracle: int, index: int) -> bytes:
    return hashlib.sha256(_PAD + pack("<II", oracle, index)).digest()


def tree_depth(size: int) -> int:
    """
    Number of levels above the leaves for ``size`` leaves.
    """
    return max(0, (size - 1).bit_length())


@dataclass(frozen=True)
class Opening:
    """
    Value at an index together with its authentication path, leaf level first.
    """

    index: int
    value: int
    path: Tuple[bytes, ...]


class MerkleTree:
    """
    Hash tree over one oracle table, padded to a power of two.

    Args:
        spec: Field of the values
        values: Table values
        oracle: Oracle index used for domain separation
        threads: Worker threads for hashing
    """

    # Oracle index
    _oracle: int

    # Number of real leaves
    _size: int

    # Levels of the tree, leaves first, root last
    _layers: List[List[bytes]]

    # Table values as integers
    _values: Sequence[int]

    def __init__(self, spec: FieldSpec, values, oracle: int = 0, threads: int = 1) -> None:
        ints = [int(v) for v in np.asarray(values).reshape(-1).tolist()]
        if not ints:
            raise CommitmentError("Cannot commit to an empty table")
        self._oracle = oracle
        self._size = len(ints)
        self._values = ints

        width = 1 << tree_depth(self._size)

        def leaves(start: int, stop: int) -> List[bytes]:
            return [
                leaf_hash(spec, oracle, k, ints[k]) if k < self._size else pad_hash(oracle, k)
                for k in range(start, stop)
            ]

        layer = [h for part in map_partitioned(leaves, width, threads) for h in part]
        self._layers = [layer]
        while len(layer) > 1:
            below = layer

            def parents(start: int, stop: int) -> List[bytes]:
                return [
                    node_hash(oracle, below[2 * k], below[2 * k + 1])
                    for k in range(start, stop)
                ]

            parts = map_partitioned(parents, len(below) // 2, threads)
            layer = [h for part in parts for h in part]
            self._layers.append(layer)
        logger.debug("Committed oracle %d with %d leaves", oracle, self._size)

    @property
    def root(self) -> bytes:
        return self._layers[-1][0]

    @property
    def depth(self) -> int:
        return len(self._layers) - 1

    @property
    def oracle(self) -> int:
        return self._oracle

    def __len__(self) -> int:
        return self._size

    def open(self, index: int) -> Opening:
        """
        Open one index.

        Raises:
            CommitmentError: If the index is out of range.
        """
        if not 0 <= index < self._size:
            raise CommitmentError(
                f"Index {index} outside oracle {self._oracle} of size {self._size}"
            )
        path = []
        position = index
        for layer in self._layers[:-1]:
            path.append(layer[position ^ 1])
            position >>= 1
        return Opening(index, self._values[index], tuple(path))


def commit_oracle(spec: FieldSpec, values, oracle: int = 0, threads: int = 1) -> MerkleTree:
    """
    Commit to a table.
    """
    return MerkleTree(spec, values, oracle, threads)


def open_oracle(tree: MerkleTree, index: int) -> Opening:
    """
    Open a committed table at ``index``.

    Raises:
        CommitmentError: If the index is out of range.
    """
    return tree.open(index)


def verify_opening(
    spec: FieldSpec, root: bytes, oracle: int, size: int, opening: Opening
) -> bool:
    """
    Check an opening of oracle ``oracle`` of ``size`` entries against ``root``.
    """
    if not 0 <= opening.index < size or len(opening.path) != tree_depth(size):
        return False
    if not 0 <= opening.value < spec.order:
        return False
    node = leaf_hash(spec, oracle, opening.index, opening.value)
    position = opening.index
    for sibling in opening.path:
        if position & 1:
            node = node_hash(oracle, sibling, node)
        else:
            node = node_hash(oracle, node, sibling)
        position >>= 1
    return node == root
