"""Symbolic gates and their exact action on states.

Every gate is compiled once into a small "program" on the 16 basis
indices: an index permutation, a per-index power of ``i`` and, for ``H``,
the bit mask of the butterfly.  The same program drives both the single
:class:`ExactState` path and the vectorized row path.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .exact_state import (DIM, NQUBITS, ExactState, canonicalize_arrays,
                          join_rows, split_rows)

KINDS = ("H", "P", "Z", "X", "CNOT", "CZ")
LOCAL_KINDS = ("H", "P", "Z", "X")
ENTANGLING_KINDS = ("CNOT", "CZ")


class GateSyntaxError(ValueError):
    pass


def bit(q: int) -> int:
    """Bit mask of qubit ``q`` (qubit 1 is the most significant bit)."""
    return 1 << (NQUBITS - q)


@dataclass(frozen=True, order=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        qs = tuple(int(q) for q in self.qubits)
        if any(not 1 <= q <= NQUBITS for q in qs):
            raise ValueError(f"qubit index out of range in {self.kind}{qs}")
        if self.kind in LOCAL_KINDS:
            if len(qs) != 1:
                raise ValueError(f"{self.kind} acts on one qubit")
        else:
            if len(qs) != 2 or qs[0] == qs[1]:
                raise ValueError(f"{self.kind} needs two distinct qubits")
            if self.kind == "CZ":
                qs = tuple(sorted(qs))  # CZ is symmetric
        object.__setattr__(self, "qubits", qs)

    @property
    def is_local(self) -> bool:
        return self.kind in LOCAL_KINDS

    def __str__(self) -> str:
        if self.is_local:
            return f"{self.kind}{self.qubits[0]}"
        return f"{self.kind}({self.qubits[0]},{self.qubits[1]})"

    def __repr__(self) -> str:
        return f"Gate({self})"

    def inverse(self) -> list[Gate]:
        """Inverse as a gate list (only P is not an involution)."""
        if self.kind == "P":
            return [self] * 3
        return [self]


def H(q): return Gate("H", (q,))
def P(q): return Gate("P", (q,))
def Z(q): return Gate("Z", (q,))
def X(q): return Gate("X", (q,))
def CNOT(c, t): return Gate("CNOT", (c, t))
def CZ(i, j): return Gate("CZ", (i, j))


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list, applied left to right."""

    gates: tuple[Gate, ...] = ()

    def __init__(self, gates: Iterable[Gate] = ()):
        object.__setattr__(self, "gates", tuple(gates))

    def __len__(self):
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def __add__(self, other: Circuit) -> Circuit:
        return Circuit(self.gates + tuple(other))

    def cnot_count(self) -> int:
        return sum(1 for g in self.gates if g.kind in ENTANGLING_KINDS)

    def inverse(self) -> Circuit:
        return Circuit(h for g in reversed(self.gates) for h in g.inverse())

    def __str__(self) -> str:
        return ", ".join(str(g) for g in self.gates)


@dataclass(frozen=True)
class GeneratorSet:
    name: str
    gates: tuple[Gate, ...]

    def __len__(self):
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)


QUBITS = tuple(range(1, NQUBITS + 1))
CNOT_PAIRS = tuple((c, t) for c in QUBITS for t in QUBITS if c != t)
CZ_PAIRS = tuple((i, j) for i in QUBITS for j in QUBITS if i < j)

# canonical gate order: H1..H4, then P/Z, then CNOTs
LOCAL_C = GeneratorSet("LOCAL_C", tuple([H(q) for q in QUBITS] + [P(q) for q in QUBITS]))
LOCAL_R = GeneratorSet("LOCAL_R", tuple([H(q) for q in QUBITS] + [Z(q) for q in QUBITS]))
ALL_CNOTS = tuple(CNOT(c, t) for c, t in CNOT_PAIRS)
ALL_CZS = tuple(CZ(i, j) for i, j in CZ_PAIRS)
FULL_C = GeneratorSet("FULL_C", LOCAL_C.gates + ALL_CNOTS)
FULL_R = GeneratorSet("FULL_R", LOCAL_R.gates + ALL_CNOTS)

GENERATOR_SETS = {g.name: g for g in (LOCAL_C, LOCAL_R, FULL_C, FULL_R)}


def generator_set(name: str) -> GeneratorSet:
    try:
        return GENERATOR_SETS[name]
    except KeyError:
        raise ValueError(f"unknown generator set {name!r}") from None


# ---------------------------------------------------------------------------
# Exact action


@dataclass(frozen=True)
class _Program:
    perm: np.ndarray        # new[:, b] = old[:, perm[b]]
    phase: np.ndarray       # multiply new[:, b] by i**phase[b]
    h_mask: int             # 0, or the bit mask of the Hadamard butterfly


@lru_cache(maxsize=None)
def _program(g: Gate) -> _Program:
    idx = np.arange(DIM)
    perm = idx.copy()
    phase = np.zeros(DIM, dtype=np.int8)
    h_mask = 0
    if g.kind == "H":
        h_mask = bit(g.qubits[0])
    elif g.kind == "P":
        phase[(idx & bit(g.qubits[0])) != 0] = 1
    elif g.kind == "Z":
        phase[(idx & bit(g.qubits[0])) != 0] = 2
    elif g.kind == "X":
        perm = idx ^ bit(g.qubits[0])
    elif g.kind == "CNOT":
        c, t = (bit(q) for q in g.qubits)
        perm = np.where(idx & c, idx ^ t, idx)
    elif g.kind == "CZ":
        a, b = (bit(q) for q in g.qubits)
        phase[((idx & a) != 0) & ((idx & b) != 0)] = 2
    return _Program(perm, phase, h_mask)


def _apply_arrays(re, im, k, g: Gate):
    prog = _program(g)
    if prog.h_mask:
        m = prog.h_mask
        lo = np.array([b for b in range(DIM) if not b & m])
        hi = lo | m
        nre, nim = np.empty_like(re), np.empty_like(im)
        nre[:, lo] = re[:, lo] + re[:, hi]
        nre[:, hi] = re[:, lo] - re[:, hi]
        nim[:, lo] = im[:, lo] + im[:, hi]
        nim[:, hi] = im[:, lo] - im[:, hi]
        return canonicalize_arrays(nre, nim, k + 1)
    re, im = re[:, prog.perm], im[:, prog.perm]
    if prog.phase.any():
        p = prog.phase
        i1, i2, i3 = (p == 1), (p == 2), (p == 3)
        nre, nim = re.copy(), im.copy()
        nre[:, i1], nim[:, i1] = -im[:, i1], re[:, i1]
        nre[:, i2], nim[:, i2] = -re[:, i2], -im[:, i2]
        nre[:, i3], nim[:, i3] = im[:, i3], -re[:, i3]
        re, im = nre, nim
    return re, im, k.copy()


def apply_gate_rows(rows: np.ndarray, g: Gate) -> np.ndarray:
    """Apply ``g`` to every row of an ``(n, 33)`` row array."""
    re, im, k = split_rows(rows)
    return join_rows(*_apply_arrays(re, im, k, g))


def apply_circuit_rows(rows: np.ndarray, circuit: Iterable[Gate]) -> np.ndarray:
    re, im, k = split_rows(rows)
    for g in circuit:
        re, im, k = _apply_arrays(re, im, k, g)
    return join_rows(re, im, k)


def apply_gate(s: ExactState, g: Gate) -> ExactState:
    return ExactState.from_row(apply_gate_rows(s.to_row()[None, :], g)[0])


def apply_circuit(s: ExactState, circuit: Circuit | Sequence[Gate]) -> ExactState:
    gates = tuple(circuit)
    if not gates:
        return s
    return ExactState.from_row(apply_circuit_rows(s.to_row()[None, :], gates)[0])


# ---------------------------------------------------------------------------
# Text syntax: H1, P3, Z2, X4, CNOT(1,2), CZ(1,2)

_GATE_RE = re.compile(
    r"^\s*(?:(?P<k1>[HPZX])\s*(?P<q>\d)|(?P<k2>CNOT|CZ)\s*\(\s*(?P<a>\d)\s*,\s*(?P<b>\d)\s*\))\s*$")


def parse_gate(text: str) -> Gate:
    m = _GATE_RE.match(text)
    if not m:
        raise GateSyntaxError(f"cannot parse gate {text!r}")
    try:
        if m["k1"]:
            return Gate(m["k1"], (int(m["q"]),))
        return Gate(m["k2"], (int(m["a"]), int(m["b"])))
    except ValueError as exc:
        raise GateSyntaxError(str(exc)) from None


def parse_circuit(text: str) -> Circuit:
    """Parse a comma-separated gate list (commas inside parentheses allowed)."""
    text = text.strip()
    if not text:
        return Circuit()
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return Circuit(parse_gate(p) for p in parts)
