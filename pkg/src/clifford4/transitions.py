"""Orbit-to-orbit transition counts under entangling gates, the orbit graph,
and circuit synthesis between arbitrary states.

The census tallies, for every orbit and every gate, where the orbit's
members land.  Because each CZ is a CNOT conjugated by local gates and
orbits are closed under local gates, the tallies for ``CZ(i,j)``,
``CNOT(i,j)`` and ``CNOT(j,i)`` coincide; :func:`gate_form_mismatches`
checks this exhaustively.

Synthesis walks a shortest path in the orbit graph.  Each hop uses a
stored witness: the smallest state of the source orbit (canonical order)
that some gate sends into the target orbit, with the earliest such gate.
Local words from the orbit BFS trees move the running state onto each
witness and finally onto the target, so the circuit's entangling-gate
count equals the graph distance.
"""

from __future__ import annotations

import json
import warnings
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import reference
from .closure import NotClosed, StateSet
from .exact_state import ExactState
from .gates import ALL_CZS, CNOT, CZ, Circuit, Gate, H, apply_circuit
from .orbits import OrbitPartition


class Disconnected(Exception):
    pass


class NotEnumerated(KeyError):
    pass


class RealModeViolation(ValueError):
    pass


class DiscrepancyWarning(UserWarning):
    """A computed census cell differs from the published table."""


@dataclass
class TransitionCensus:
    """``counts[g][A, B]`` = members of orbit ``A`` that gate ``g`` sends into ``B``."""

    partition: OrbitPartition
    gates: tuple[Gate, ...]
    counts: dict[Gate, np.ndarray]
    # (A, B) -> (state index in A, gate, image index in B), A != B
    witnesses: dict[tuple[int, int], tuple[int, Gate, int]] = field(default_factory=dict, repr=False)

    def row(self, orbit: int, g: Gate) -> dict[int, int]:
        c = self.counts[g][orbit]
        return {int(t): int(c[t]) for t in np.flatnonzero(c)}

    def labelled(self) -> dict[tuple[str, tuple[int, ...]], dict[str, int]]:
        """``{(source label, gate qubits): {target label: count}}``."""
        labels = self.partition.labels()
        return {(labels[a], g.qubits): {labels[t]: n for t, n in self.row(a, g).items()}
                for g in self.gates for a in range(len(labels))}

    def row_sums_ok(self) -> bool:
        sizes = np.array(self.partition.sizes())
        return all((c.sum(axis=1) == sizes).all() for c in self.counts.values())

    def symmetric(self) -> bool:
        """Involutive gates move as many states A -> B as B -> A."""
        return all((c == c.T).all() for c in self.counts.values())

    def to_tsv(self) -> str:
        labels = self.partition.labels()
        lines = ["orbit\tgate\ttarget\tcount"]
        for a in range(len(labels)):
            for g in self.gates:
                for t, n in self.row(a, g).items():
                    lines.append(f"{labels[a]}\t{g}\t{labels[t]}\t{n}")
        return "\n".join(lines) + "\n"


def image_orbits(S: StateSet, p: OrbitPartition, g: Gate) -> tuple[np.ndarray, np.ndarray]:
    """``(image index, image orbit)`` per state of ``S`` under ``g``."""
    img = S.image_table(g)
    if (img < 0).any():
        raise NotClosed(f"{int((img < 0).sum())} images under {g} leave the set")
    return img, p.orbit_of[img]


def census(S: StateSet, p: OrbitPartition, gates=ALL_CZS, *, witnesses: bool = True) -> TransitionCensus:
    n = len(p.orbits)
    src = p.orbit_of
    counts = {}
    best: dict[tuple[int, int], tuple[int, int, int]] = {}
    for gi, g in enumerate(gates):
        img, tgt = image_orbits(S, p, g)
        code = src * n + tgt
        counts[g] = np.bincount(code, minlength=n * n).reshape(n, n)
        if not witnesses:
            continue
        cross = np.flatnonzero(src != tgt)
        # states are in canonical order, so the first index per code is the least
        codes, first = np.unique(code[cross], return_index=True)
        for c, i in zip(codes.tolist(), cross[first].tolist()):
            key = divmod(c, n)
            if key not in best or i < best[key][0]:
                best[key] = (i, gi, int(img[i]))
    wit = {k: (i, gates[gi], j) for k, (i, gi, j) in best.items()}
    return TransitionCensus(p, tuple(gates), counts, wit)


def gate_form_mismatches(S: StateSet, p: OrbitPartition) -> list[tuple[Gate, Gate]]:
    """Pairs (CZ, CNOT) whose per-orbit censuses differ (empty when all agree)."""
    out = []
    n = len(p.orbits)
    for i, j in combinations(range(1, 5), 2):
        ref = census(S, p, [CZ(i, j)], witnesses=False).counts[CZ(i, j)]
        for g in (CNOT(i, j), CNOT(j, i)):
            _, tgt = image_orbits(S, p, g)
            c = np.bincount(p.orbit_of * n + tgt, minlength=n * n).reshape(n, n)
            if not (c == ref).all():
                out.append((CZ(i, j), g))
    return out


# ---------------------------------------------------------------------------
# comparison with the published tables


@dataclass(frozen=True)
class Discrepancy:
    source: str
    pair: tuple[int, int]
    target: str
    published: int
    computed: int

    def __str__(self) -> str:
        return (f"row {self.source}, CZ{self.pair}, column {self.target}: "
                f"published {self.published}, computed {self.computed}")


def compare_with_reference(c: TransitionCensus, *, warn: bool = True) -> list[Discrepancy]:
    """Every cell where the census differs from the published table."""
    real = c.partition.generators.name == "LOCAL_R"
    got = c.labelled()
    out = []
    for (src, pair), exp in reference.expected_table(real).items():
        have = got[(src, pair)]
        for tgt in sorted(set(exp) | set(have)):
            e, h = exp.get(tgt, 0), have.get(tgt, 0)
            if e != h:
                d = Discrepancy(src, pair, tgt, e, h)
                out.append(d)
                if warn:
                    warnings.warn(str(d), DiscrepancyWarning, stacklevel=2)
    return out


# ---------------------------------------------------------------------------
# orbit graph


@dataclass
class OrbitGraph:
    labels: list[str]
    edges: dict[frozenset, set[tuple[int, int]]]      # {A, B} -> CZ pairs
    self_loops: dict[int, set[tuple[int, int]]]

    def __len__(self) -> int:
        return len(self.labels)

    def neighbors(self, a: int) -> list[int]:
        return sorted(b for e in self.edges if a in e for b in e if b != a)

    def edge_labels(self) -> set[frozenset[str]]:
        return {frozenset(self.labels[x] for x in e) for e in self.edges}

    def distances_from(self, a: int) -> list[int]:
        dist = [-1] * len(self)
        dist[a] = 0
        q = deque([a])
        while q:
            u = q.popleft()
            for v in self.neighbors(u):
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    q.append(v)
        return dist

    def distance(self, a: int, b: int) -> int:
        d = self.distances_from(a)[b]
        if d < 0:
            raise Disconnected(f"no path {self.labels[a]} -> {self.labels[b]}")
        return d

    def shortest_path(self, a: int, b: int) -> list[int]:
        """Orbit ids from ``a`` to ``b``; ties go to the smaller next orbit id."""
        dist = self.distances_from(b)
        if dist[a] < 0:
            raise Disconnected(f"no path {self.labels[a]} -> {self.labels[b]}")
        path = [a]
        while path[-1] != b:
            u = path[-1]
            path.append(min(v for v in self.neighbors(u) if dist[v] == dist[u] - 1))
        return path

    def to_dot(self) -> str:
        lines = ["graph orbits {"]
        for i, lab in enumerate(self.labels):
            lines.append(f'  n{i} [label="{lab}"];')
        for e in sorted(self.edges, key=sorted):
            a, b = sorted(e)
            pairs = " ".join(f"{i}{j}" for i, j in sorted(self.edges[e]))
            lines.append(f'  n{a} -- n{b} [label="{pairs}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        doc = {
            "nodes": [{"id": i, "label": lab} for i, lab in enumerate(self.labels)],
            "edges": [{"a": sorted(e)[0], "b": sorted(e)[1],
                       "pairs": [list(p) for p in sorted(self.edges[e])]}
                      for e in sorted(self.edges, key=sorted)],
            "self_loops": {str(a): [list(p) for p in sorted(ps)]
                           for a, ps in sorted(self.self_loops.items())},
        }
        return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def build_graph(c: TransitionCensus) -> OrbitGraph:
    n = len(c.partition.orbits)
    edges: dict[frozenset, set] = {}
    loops: dict[int, set] = {}
    for g, m in c.counts.items():
        for a, b in zip(*np.nonzero(m)):
            a, b = int(a), int(b)
            if a == b:
                loops.setdefault(a, set()).add(g.qubits)
            else:
                edges.setdefault(frozenset((a, b)), set()).add(g.qubits)
    return OrbitGraph([o.label or str(o.id) for o in c.partition.orbits][:n], edges, loops)


def diameter(g: OrbitGraph) -> int:
    if len(g) == 0:
        return 0
    best = 0
    for a in range(len(g)):
        d = g.distances_from(a)
        if min(d) < 0:
            raise Disconnected("orbit graph is not connected")
        best = max(best, max(d))
    return best


# ---------------------------------------------------------------------------
# synthesis


def _simplify(gates: list[Gate]) -> list[Gate]:
    """Cancel self-inverse pairs and P^4 runs, looking past gates on other qubits."""
    out: list[Gate] = []
    for g in gates:
        qs = set(g.qubits)
        # gates acting only on other qubits commute with g
        run = []
        for pos in range(len(out) - 1, -1, -1):
            if not qs & set(out[pos].qubits):
                continue
            if out[pos] != g:
                break
            run.append(pos)
            if g.kind != "P" or len(run) == 3:
                break
        if g.kind != "P" and run:
            del out[run[0]]
        elif g.kind == "P" and len(run) == 3:
            for pos in run:                  # descending, so indices stay valid
                del out[pos]
        else:
            out.append(g)
    return out


@dataclass
class Connector:
    """Precomputed indices for state-to-state synthesis in one mode."""

    states: StateSet
    partition: OrbitPartition
    census: TransitionCensus
    graph: OrbitGraph
    entangler: str = "cnot"          # emit CNOTs (with H conjugation) or bare CZs

    @property
    def real(self) -> bool:
        return self.partition.generators.name == "LOCAL_R"

    def _index(self, s: ExactState) -> int:
        if self.real and not s.is_real():
            raise RealModeViolation(f"state has non-real amplitudes: {s}")
        i = self.states.index(s)
        if i < 0:
            raise NotEnumerated(f"state is not in the enumerated set: {s}")
        return i

    def _gate(self, g: Gate) -> list[Gate]:
        if g.kind == "CZ" and self.entangler == "cnot":
            i, j = g.qubits
            return [H(j), CNOT(i, j), H(j)]
        return [g]

    def connect(self, a: ExactState, b: ExactState) -> Circuit:
        ia, ib = self._index(a), self._index(b)
        p = self.partition
        path = self.graph.shortest_path(int(p.orbit_of[ia]), int(p.orbit_of[ib]))
        word: list[Gate] = []
        cur = ia
        for u, v in zip(path, path[1:]):
            w, g, w2 = self.census.witnesses[(u, v)]
            word += p.local_word(cur, w).gates
            word += self._gate(g)
            cur = w2
        word += p.local_word(cur, ib).gates
        circ = Circuit(_simplify(word))
        if apply_circuit(a, circ) != b:
            raise AssertionError("synthesized circuit failed exact replay")
        return circ

    def distance(self, a: ExactState, b: ExactState) -> int:
        p = self.partition
        return self.graph.distance(int(p.orbit_of[self._index(a)]),
                                   int(p.orbit_of[self._index(b)]))


def connect(a: ExactState, b: ExactState, connector: Connector) -> Circuit:
    return connector.connect(a, b)
