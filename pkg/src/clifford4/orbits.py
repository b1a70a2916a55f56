"""Partition of a state set into local-gate orbits.

Orbits are found by repeatedly taking the smallest unassigned state (in
canonical order) and closing it under the local generators, so orbit ids
follow the canonical order of each orbit's minimal state.  Each closure's
BFS tree is kept, which gives a local word from the orbit root to any
member and hence between any two members of the same orbit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .closure import CapacityExceeded, NotClosed, StateSet, closure
from .entropy import Fingerprint, entropy_table
from .exact_state import ExactState
from .gates import Circuit, GeneratorSet


@dataclass
class Orbit:
    id: int
    size: int
    root: int
    fingerprint: Fingerprint
    entropy: Fraction
    label: str | None = None
    representative: ExactState | None = None

    def to_record(self) -> dict:
        rep = self.representative
        return {
            "label": self.label,
            "size": self.size,
            "entropy": f"{self.entropy.numerator}/{self.entropy.denominator}",
            "fingerprint": self.fingerprint.to_dict(),
            "representative": rep.encode().hex() if rep is not None else None,
        }


@dataclass
class OrbitPartition:
    states: StateSet
    generators: GeneratorSet
    orbit_of: np.ndarray
    parent: np.ndarray
    parent_gate: np.ndarray
    orbits: list[Orbit]
    single_entropies: np.ndarray = field(repr=False)
    cut_entropies: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.orbits)

    def sizes(self) -> list[int]:
        return [o.size for o in self.orbits]

    def labels(self) -> list[str | None]:
        return [o.label for o in self.orbits]

    def by_label(self, label: str) -> Orbit:
        for o in self.orbits:
            if o.label == label:
                return o
        raise KeyError(label)

    def orbit_of_state(self, s: ExactState) -> Orbit:
        i = self.states.index(s)
        if i < 0:
            raise KeyError(f"state not in the partitioned set: {s}")
        return self.orbits[int(self.orbit_of[i])]

    def members(self, orbit_id: int) -> np.ndarray:
        return np.flatnonzero(self.orbit_of == orbit_id)

    def word_from_root(self, i: int) -> Circuit:
        gates = self.generators.gates
        word = []
        while self.parent[i] >= 0:
            word.append(gates[self.parent_gate[i]])
            i = int(self.parent[i])
        return Circuit(reversed(word))

    def local_word(self, i: int, j: int) -> Circuit:
        """Local circuit mapping state ``i`` exactly onto state ``j`` (same orbit)."""
        if self.orbit_of[i] != self.orbit_of[j]:
            raise ValueError("states lie in different orbits")
        if i == j:
            return Circuit()
        return self.word_from_root(i).inverse() + self.word_from_root(j)

    def report_lines(self) -> list[str]:
        """JSON-lines orbit report, one record per orbit in id order."""
        return [json.dumps(o.to_record(), sort_keys=True) for o in self.orbits]


def partition(S: StateSet, locals_: GeneratorSet) -> OrbitPartition:
    """Connected components of ``S`` under ``locals_`` (with BFS trees)."""
    n = len(S)
    orbit_of = np.full(n, -1, dtype=np.int64)
    parent = np.full(n, -1, dtype=np.int64)
    parent_gate = np.full(n, -1, dtype=np.int16)
    roots = []
    while True:
        todo = np.flatnonzero(orbit_of < 0)
        if len(todo) == 0:
            break
        root = int(todo[0])
        try:
            orb = closure([S.state(root)], locals_, capacity=max(n, 1))
        except CapacityExceeded:
            raise NotClosed(f"local closure of state {root} is larger than the set") from None
        idx = S.lookup_rows(orb.rows)
        if (idx < 0).any():
            raise NotClosed(
                f"{int((idx < 0).sum())} local images of state {root} leave the set")
        if (orbit_of[idx] >= 0).any():
            raise NotClosed("local closure overlaps an existing orbit")
        orbit_of[idx] = len(roots)
        parent[idx] = np.where(orb.parent >= 0, idx[np.maximum(orb.parent, 0)], -1)
        parent_gate[idx] = orb.parent_gate
        roots.append(root)

    single, cuts = entropy_table(S.rows) if n else (np.zeros((0, 4), int), np.zeros((0, 3), int))
    return from_arrays(S, locals_, orbit_of, parent, parent_gate, single, cuts)


def from_arrays(S: StateSet, locals_: GeneratorSet, orbit_of, parent, parent_gate,
                single, cuts) -> OrbitPartition:
    """Rebuild a partition from its per-state arrays (e.g. loaded from a cache)."""
    orbit_of = np.asarray(orbit_of, dtype=np.int64)
    n_orbits = int(orbit_of.max()) + 1 if len(orbit_of) else 0
    # the root of each orbit is its smallest member
    roots = np.full(n_orbits, len(orbit_of), dtype=np.int64)
    np.minimum.at(roots, orbit_of, np.arange(len(orbit_of)))
    sizes = np.bincount(orbit_of, minlength=n_orbits)
    orbits = []
    for oid, root in enumerate(roots.tolist()):
        mask = orbit_of == oid
        fp_single = single[root]
        fp_cuts = cuts[root]
        if not ((single[mask] == fp_single).all() and (cuts[mask] == fp_cuts).all()):
            raise AssertionError(f"entropy fingerprint not constant on orbit {oid}")
        fp = Fingerprint(tuple(int(x) for x in fp_single), tuple(int(x) for x in fp_cuts))
        orbits.append(Orbit(oid, int(sizes[oid]), root, fp, fp.entropy,
                            representative=S.state(root)))
    return OrbitPartition(S, locals_, orbit_of, np.asarray(parent), np.asarray(parent_gate),
                          orbits, np.asarray(single), np.asarray(cuts))
