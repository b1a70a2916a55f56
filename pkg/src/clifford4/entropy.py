"""Exact Schmidt ranks, bipartite entropies and entropy fingerprints.

The amplitude vector is reshaped along a bipartition into a
``2^|A| x 2^(4-|A|)`` matrix over the Gaussian integers and its rank is
found by fraction-free (Bareiss) elimination with full pivoting, run on
a whole batch of matrices at once.  Stabilizer states have a flat reduced
spectrum, so the von Neumann entropy across the cut is exactly
``log2(rank)`` bits.  Flatness is asserted on every call: with
``rho = M M^dagger`` we require ``tr(rho) * rho^2 == tr(rho^2) * rho`` in
exact integers, which also yields the rank a second way,
``tr(rho)^2 / tr(rho^2)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .exact_state import NQUBITS, ExactState
from .gates import bit


class FlatSpectrumViolation(RuntimeError):
    """Internal error: a reduced density matrix is not proportional to a projector."""


@dataclass(frozen=True, order=True)
class Bipartition:
    side_a: tuple[int, ...]

    def __post_init__(self):
        side = tuple(sorted(set(self.side_a)))
        if not side or len(side) >= NQUBITS or any(not 1 <= q <= NQUBITS for q in side):
            raise ValueError(f"invalid bipartition side {self.side_a}")
        object.__setattr__(self, "side_a", side)

    @property
    def side_b(self) -> tuple[int, ...]:
        return tuple(q for q in range(1, NQUBITS + 1) if q not in self.side_a)

    def __str__(self) -> str:
        return "".join(map(str, self.side_a)) + "|" + "".join(map(str, self.side_b))


SINGLE_CUTS = tuple(Bipartition((q,)) for q in range(1, NQUBITS + 1))
# 2|2 cuts in fixed order 12|34, 13|24, 14|23
PAIR_CUTS = tuple(Bipartition((1, q)) for q in range(2, NQUBITS + 1))


def complement(qubits) -> tuple[int, ...]:
    return tuple(q for q in range(1, NQUBITS + 1) if q not in set(qubits))


@lru_cache(maxsize=None)
def _reshape_index(cut: Bipartition) -> np.ndarray:
    """``idx[r, c]`` = basis index whose A-bits spell ``r`` and B-bits spell ``c``."""
    a, b = cut.side_a, cut.side_b
    idx = np.zeros((2 ** len(a), 2 ** len(b)), dtype=np.intp)
    for r in range(2 ** len(a)):
        for c in range(2 ** len(b)):
            val = 0
            for pos, q in enumerate(a):
                if r >> (len(a) - 1 - pos) & 1:
                    val |= bit(q)
            for pos, q in enumerate(b):
                if c >> (len(b) - 1 - pos) & 1:
                    val |= bit(q)
            idx[r, c] = val
    return idx


def _gauss_divexact(xr, xi, dr, di):
    """Exact Gaussian-integer division, elementwise; asserts no remainder."""
    n = dr * dr + di * di
    qr = xr * dr + xi * di
    qi = xi * dr - xr * di
    if (n == 1).all():
        return qr, qi
    if (qr % n).any() or (qi % n).any():
        raise ArithmeticError("inexact division in fraction-free elimination")
    return qr // n, qi // n


def gaussian_rank_batch(mr: np.ndarray, mi: np.ndarray) -> np.ndarray:
    """Ranks of a batch of Gaussian-integer matrices, shape ``(N, m, n)``.

    Bareiss elimination with full pivoting.  Rather than swapping, pivot
    rows are masked as used; after step ``t`` every unused entry is a
    ``(t+1)``-minor of the input, so dividing by the previous pivot is
    exact and entries stay small.
    """
    # Entries become minors of the input.  For |components| <= 1 (every
    # Clifford state) 4x4 minors are <= 64 by Hadamard's bound and all
    # intermediates fit int32; otherwise fall back to int64.
    small = max(np.abs(mr).max(initial=0), np.abs(mi).max(initial=0)) <= 1
    dtype = np.int32 if small and max(mr.shape[1:]) <= 8 else np.int64
    A = np.array(mr, dtype=dtype)
    B = np.array(mi, dtype=dtype)
    N, m, n = A.shape
    rank = np.zeros(N, dtype=np.int64)
    prev_r = np.ones((N, 1, 1), dtype=dtype)
    prev_i = np.zeros((N, 1, 1), dtype=dtype)
    used = np.zeros((N, m), dtype=bool)
    rows = np.arange(N)
    for _ in range(min(m, n)):
        nz = ((A != 0) | (B != 0)) & ~used[:, :, None]
        flat = nz.reshape(N, -1)
        has = flat.any(axis=1)
        if not has.any():
            break
        pos = flat.argmax(axis=1)
        pr, pc = pos // n, pos % n
        rank += has
        p_r = np.where(has, A[rows, pr, pc], 1)[:, None, None]
        p_i = np.where(has, B[rows, pr, pc], 0)[:, None, None]
        row_r, row_i = A[rows, pr][:, None, :], B[rows, pr][:, None, :]
        col_r, col_i = A[rows, :, pc][:, :, None], B[rows, :, pc][:, :, None]
        used[rows[has], pr[has]] = True
        keep = np.broadcast_to(used[:, :, None] | ~has[:, None, None], A.shape)
        num_r = p_r * A - p_i * B - (col_r * row_r - col_i * row_i)
        num_i = p_r * B + p_i * A - (col_r * row_i + col_i * row_r)
        num_r[keep] = 0
        num_i[keep] = 0
        new_r, new_i = _gauss_divexact(num_r, num_i, prev_r, prev_i)
        A = np.where(keep, A, new_r)
        B = np.where(keep, B, new_i)
        prev_r = np.where(has[:, None, None], p_r, prev_r)
        prev_i = np.where(has[:, None, None], p_i, prev_i)
    return rank


def _check_flat(mr: np.ndarray, mi: np.ndarray, rank: np.ndarray):
    mm = lambda x, y: np.einsum("nik,njk->nij", x, y)
    rho_r = mm(mr, mr) + mm(mi, mi)
    rho_i = mm(mi, mr) - mm(mr, mi)
    sq_r = mm(rho_r, rho_r) - mm(rho_i, -rho_i)
    sq_i = mm(rho_r, -rho_i) + mm(rho_i, rho_r)
    t1 = np.trace(rho_r, axis1=1, axis2=2)
    t2 = (rho_r ** 2 + rho_i ** 2).sum(axis=(1, 2))
    flat = ((t1[:, None, None] * sq_r == t2[:, None, None] * rho_r).all(axis=(1, 2))
            & (t1[:, None, None] * sq_i == t2[:, None, None] * rho_i).all(axis=(1, 2)))
    if not flat.all():
        raise FlatSpectrumViolation(f"{int((~flat).sum())} matrices with non-flat spectrum")
    if not (t1 * t1 == rank * t2).all():
        raise FlatSpectrumViolation("purity-derived rank disagrees with elimination rank")


CHUNK = 8192


def schmidt_ranks_rows(rows: np.ndarray, cut: Bipartition) -> np.ndarray:
    """Schmidt rank across ``cut`` for every row of a row array."""
    rows = np.asarray(rows)
    idx = _reshape_index(cut)
    out = np.empty(len(rows), dtype=np.int64)
    for start in range(0, len(rows), CHUNK):
        chunk = rows[start:start + CHUNK]
        re = chunk[:, 1::2].astype(np.int64)[:, idx]
        im = chunk[:, 2::2].astype(np.int64)[:, idx]
        rank = gaussian_rank_batch(re, im)
        _check_flat(re, im, rank)
        out[start:start + CHUNK] = rank
    return out


def schmidt_rank(s: ExactState, cut: Bipartition | tuple[int, ...]) -> int:
    if not isinstance(cut, Bipartition):
        cut = Bipartition(tuple(cut))
    return int(schmidt_ranks_rows(s.to_row()[None, :], cut)[0])


def log2_exact(r: np.ndarray) -> np.ndarray:
    r = np.asarray(r, dtype=np.int64)
    if ((r <= 0) | (r & (r - 1)) != 0).any():
        raise FlatSpectrumViolation("Schmidt rank is not a power of two")
    return np.log2(r).round().astype(np.int64)


@dataclass(frozen=True)
class Fingerprint:
    """Per-qubit and per-2|2-cut entropies in bits, plus support size."""

    single_entropies: tuple[int, int, int, int]
    cut_entropies: tuple[int, int, int]
    support_size: int | None = None

    @property
    def entropy(self) -> Fraction:
        return Fraction(sum(self.cut_entropies), len(self.cut_entropies))

    def local_part(self) -> Fingerprint:
        """The local-gate-invariant part (support size dropped)."""
        return Fingerprint(self.single_entropies, self.cut_entropies)

    def to_dict(self) -> dict:
        d = {"single": list(self.single_entropies), "cuts": list(self.cut_entropies)}
        if self.support_size is not None:
            d["support"] = self.support_size
        return d


def entropy_table(rows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``(single, cuts)`` entropy arrays of shape ``(N, 4)`` and ``(N, 3)``."""
    single = np.stack([log2_exact(schmidt_ranks_rows(rows, c)) for c in SINGLE_CUTS], axis=1)
    cuts = np.stack([log2_exact(schmidt_ranks_rows(rows, c)) for c in PAIR_CUTS], axis=1)
    return single, cuts


def entanglement_entropy(s: ExactState) -> Fraction:
    """Mean entropy (bits) over the three 2|2 cuts 12|34, 13|24, 14|23."""
    total = sum(int(log2_exact(schmidt_rank(s, c))) for c in PAIR_CUTS)
    return Fraction(total, len(PAIR_CUTS))


def entropies_rows(rows: np.ndarray) -> list[Fraction]:
    _, cuts = entropy_table(rows)
    return [Fraction(int(t), 3) for t in cuts.sum(axis=1)]


def fingerprint(s: ExactState) -> Fingerprint:
    single, cuts = entropy_table(s.to_row()[None, :])
    support = sum(1 for z in s.amps if z)
    return Fingerprint(tuple(int(x) for x in single[0]), tuple(int(x) for x in cuts[0]), support)
