"""Breadth-first closure of a seed set under a generator set.

Starting from the seeds, each layer applies every generator to the current
frontier; images not yet seen form the next frontier.  The loop stops at
the fixed point, where the set is closed under the generators.

Deduplication is exact: states are compared through order-preserving
33-byte keys (see :func:`clifford4.exact_state.rows_to_keys`), kept sorted
so membership is a binary search.  Within a layer the first discovery of a
state wins, with generators taking precedence in their canonical order and
frontier states in canonical order after that, which makes the recorded
BFS tree (and every word derived from it) deterministic.
"""

from __future__ import annotations

import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .exact_state import (RECORD_SIZE, ExactState, decode,
                          keys_to_rows, rows_from_states, rows_normalized,
                          rows_to_keys)
from .gates import (Circuit, Gate, GeneratorSet, apply_gate_rows,
                    generator_set)

DEFAULT_CAPACITY = 2 ** 20

MAGIC = b"C4SSET"
FORMAT_VERSION = 1


class ClosureError(Exception):
    pass


class CapacityExceeded(ClosureError):
    pass


class NotInSet(ClosureError, KeyError):
    pass


class NotClosed(ClosureError):
    pass


class StateSetFormatError(ClosureError, ValueError):
    pass


@dataclass
class StateSet:
    """A deduplicated set of canonical states in canonical order.

    ``rows[i]`` is the byte record of state ``i``; ``keys`` holds the
    matching sort keys and is strictly increasing.  When built by
    :func:`closure` with ``record_tree=True``, ``parent[i]`` and
    ``parent_gate[i]`` give the BFS edge that first reached state ``i``
    (``-1`` for seeds).
    """

    rows: np.ndarray
    generators: GeneratorSet
    seeds: tuple[ExactState, ...]
    parent: np.ndarray | None = None
    parent_gate: np.ndarray | None = None
    depth: np.ndarray | None = None
    keys: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.rows = np.ascontiguousarray(self.rows, dtype=np.int8)
        self.keys = rows_to_keys(self.rows)
        if not _strictly_sorted(self.keys):
            raise ValueError("rows must be strictly increasing in canonical order")

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return (self.state(i) for i in range(len(self)))

    def state(self, i: int) -> ExactState:
        return ExactState.from_row(self.rows[i])

    def __contains__(self, s: ExactState) -> bool:
        return self.index(s) >= 0

    def index(self, s: ExactState) -> int:
        """Position of ``s`` in canonical order, or -1."""
        return int(self.lookup_rows(s.to_row()[None, :])[0])

    def lookup_rows(self, rows: np.ndarray) -> np.ndarray:
        """Vectorized :meth:`index`; returns -1 for rows not in the set."""
        return lookup(self.keys, rows_to_keys(rows))

    def image_table(self, g: Gate) -> np.ndarray:
        """``out[i]`` = index of ``g`` applied to state ``i`` (or -1)."""
        return self.lookup_rows(apply_gate_rows(self.rows, g))

    @property
    def has_tree(self) -> bool:
        return self.parent is not None

    def word_to(self, target: ExactState | int) -> Circuit:
        """Generator word taking the seed that roots ``target``'s BFS branch to it."""
        if not self.has_tree:
            raise ClosureError("this StateSet was built without a BFS tree")
        i = target if isinstance(target, (int, np.integer)) else self.index(target)
        if i < 0:
            raise NotInSet(f"state not in set: {target}")
        gates = self.generators.gates
        word = []
        while self.parent[i] >= 0:
            word.append(gates[self.parent_gate[i]])
            i = int(self.parent[i])
        return Circuit(reversed(word))

    def root_of(self, i: int) -> int:
        while self.parent[i] >= 0:
            i = int(self.parent[i])
        return i


def _strictly_sorted(keys: np.ndarray) -> bool:
    if len(keys) < 2:
        return True
    order = np.argsort(keys, kind="stable")
    return bool((order == np.arange(len(keys))).all() and (keys[1:] != keys[:-1]).all())


def lookup(sorted_keys: np.ndarray, keys: np.ndarray) -> np.ndarray:
    if len(sorted_keys) == 0:
        return np.full(len(keys), -1, dtype=np.int64)
    pos = np.searchsorted(sorted_keys, keys)
    pos_c = np.minimum(pos, len(sorted_keys) - 1)
    found = sorted_keys[pos_c] == keys
    return np.where(found, pos_c, -1).astype(np.int64)


def closure(seeds: Sequence[ExactState], G: GeneratorSet, *,
            capacity: int = DEFAULT_CAPACITY, record_tree: bool = True,
            workers: int = 1) -> StateSet:
    """Smallest set containing ``seeds`` and closed under every gate in ``G``."""
    seeds = tuple(seeds)
    seed_rows = rows_from_states(seeds)
    if len(seed_rows) and not rows_normalized(seed_rows).all():
        raise ValueError("seeds must be normalized")
    gates = G.gates

    # discovery-order storage
    frontier_keys = np.unique(rows_to_keys(seed_rows))
    all_keys = [frontier_keys]
    parents = [np.full(len(frontier_keys), -1, dtype=np.int64)]
    pgates = [np.full(len(frontier_keys), -1, dtype=np.int16)]
    depths = [np.zeros(len(frontier_keys), dtype=np.int32)]
    seen = frontier_keys.copy()          # sorted
    n_total = len(seen)
    frontier_ids = np.arange(len(seen))
    depth = 0
    if n_total > capacity:
        raise CapacityExceeded(f"closure exceeded capacity {capacity}")

    pool = ThreadPoolExecutor(workers) if workers > 1 else None
    try:
        while len(frontier_keys):
            depth += 1
            frontier_rows = keys_to_rows(frontier_keys)
            if pool is not None:
                images = list(pool.map(lambda g: apply_gate_rows(frontier_rows, g), gates))
            else:
                images = [apply_gate_rows(frontier_rows, g) for g in gates]
            if not images:
                break
            cand = rows_to_keys(np.concatenate(images))
            n_f = len(frontier_keys)
            cand_gate = np.repeat(np.arange(len(gates), dtype=np.int16), n_f)
            cand_parent = np.tile(frontier_ids, len(gates))

            fresh = lookup(seen, cand) < 0
            cand, cand_gate, cand_parent = cand[fresh], cand_gate[fresh], cand_parent[fresh]
            # np.unique keeps the first occurrence: lowest gate, then lowest frontier slot
            new_keys, first = np.unique(cand, return_index=True)
            if n_total + len(new_keys) > capacity:
                raise CapacityExceeded(
                    f"closure exceeded capacity {capacity} at depth {depth}")
            new_ids = np.arange(n_total, n_total + len(new_keys))
            n_total += len(new_keys)
            all_keys.append(new_keys)
            parents.append(cand_parent[first])
            pgates.append(cand_gate[first])
            depths.append(np.full(len(new_keys), depth, dtype=np.int32))

            seen = np.sort(np.concatenate([seen, new_keys]))
            frontier_keys, frontier_ids = new_keys, new_ids
    finally:
        if pool is not None:
            pool.shutdown()

    # re-index from discovery order to canonical order
    disc_keys = np.concatenate(all_keys)
    order = np.argsort(disc_keys, kind="stable")
    rank = np.empty_like(order)
    rank[order] = np.arange(len(order))
    rows = keys_to_rows(disc_keys[order])
    result = StateSet(rows, G, seeds)
    if record_tree:
        par = np.concatenate(parents)[order]
        result.parent = np.where(par >= 0, rank[np.maximum(par, 0)], -1)
        result.parent_gate = np.concatenate(pgates)[order]
        result.depth = np.concatenate(depths)[order]
    return result


def check_closed(S: StateSet, G: GeneratorSet) -> dict[Gate, int]:
    """Number of images leaving ``S``, per generator (all zero iff closed)."""
    return {g: int((S.image_table(g) < 0).sum()) for g in G}


# ---------------------------------------------------------------------------
# Persistence
#
# header: MAGIC, u16 version, u16 len + generator-set name (utf-8),
#         u32 number of seeds, seed records, u32 count; then records.


def save(S: StateSet, path: str | Path) -> None:
    name = S.generators.name.encode()
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<HH", FORMAT_VERSION, len(name)))
        fh.write(name)
        fh.write(struct.pack("<I", len(S.seeds)))
        for s in S.seeds:
            fh.write(s.encode())
        fh.write(struct.pack("<I", len(S)))
        fh.write(S.rows.tobytes())


def load(path: str | Path) -> StateSet:
    data = Path(path).read_bytes()
    try:
        if not data.startswith(MAGIC):
            raise StateSetFormatError("bad magic")
        off = len(MAGIC)
        version, nlen = struct.unpack_from("<HH", data, off)
        if version != FORMAT_VERSION:
            raise StateSetFormatError(f"unsupported version {version}")
        off += 4
        name = data[off:off + nlen].decode()
        off += nlen
        (nseeds,) = struct.unpack_from("<I", data, off)
        off += 4
        seeds = tuple(decode(data[off + i * RECORD_SIZE: off + (i + 1) * RECORD_SIZE])
                      for i in range(nseeds))
        off += nseeds * RECORD_SIZE
        (count,) = struct.unpack_from("<I", data, off)
        off += 4
        body = data[off:]
    except struct.error as exc:
        raise StateSetFormatError(f"truncated header: {exc}") from None
    if len(body) != count * RECORD_SIZE:
        raise StateSetFormatError(
            f"expected {count} records ({count * RECORD_SIZE} bytes), found {len(body)} bytes")
    rows = np.frombuffer(body, dtype=np.int8).reshape(count, RECORD_SIZE).copy()
    return StateSet(rows, generator_set(name), seeds)


