"""Supports (populations) of enumerated states.

A state's support is the set of basis indices with nonzero amplitude.
Every Clifford state has a uniform distribution over its support, and each
support is an affine subspace of GF(2)^4; both facts are checked here
rather than assumed.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .exact_state import DIM, ExactState, split_rows


class NonUniform(RuntimeError):
    """Internal error: a state's probabilities differ across its support."""


@dataclass(frozen=True, order=True)
class Support:
    basis_indices: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.basis_indices)

    @property
    def mask(self) -> int:
        return sum(1 << b for b in self.basis_indices)

    @classmethod
    def from_mask(cls, mask: int) -> Support:
        return cls(tuple(b for b in range(DIM) if mask >> b & 1))


def support(s: ExactState) -> Support:
    """Nonzero basis indices of ``s``; asserts the distribution is uniform."""
    idx = tuple(b for b, z in enumerate(s.amps) if z)
    weights = {s.amps[b].norm() for b in idx}
    if len(weights) != 1 or weights.pop() * len(idx) != 2 ** s.k:
        raise NonUniform(f"non-uniform populations in {s}")
    return Support(idx)


def support_masks(rows: np.ndarray) -> np.ndarray:
    """16-bit support mask per row, checking uniformity for every row."""
    re, im, k = split_rows(rows)
    w = re.astype(np.int64) ** 2 + im.astype(np.int64) ** 2
    nz = w != 0
    size = nz.sum(axis=1)
    top = w.max(axis=1)
    uniform = ((w == top[:, None]) | ~nz).all(axis=1) & (top * size == 2 ** k.astype(np.int64))
    if not uniform.all():
        raise NonUniform(f"{int((~uniform).sum())} states with non-uniform populations")
    return (nz.astype(np.int64) << np.arange(DIM)).sum(axis=1)


def population_census(rows: np.ndarray) -> dict[int, int]:
    """Support size -> number of distinct supports over ``rows``."""
    masks = np.unique(support_masks(rows))
    sizes = Counter(bin(int(m)).count("1") for m in masks)
    return dict(sorted(sizes.items()))


def distinct_supports(rows: np.ndarray) -> list[Support]:
    return sorted(Support.from_mask(int(m)) for m in np.unique(support_masks(rows)))


def is_affine(sup: Support) -> bool:
    """True iff the support is a coset of a linear subspace of GF(2)^4."""
    pts = sup.basis_indices
    base = pts[0]
    diffs = {p ^ base for p in pts}
    return all((x ^ y) in diffs for x, y in combinations(diffs, 2))


def affine_subspace_count(dim: int, n: int = 4) -> int:
    """Number of ``dim``-dimensional affine subspaces of GF(2)^n (Gaussian binomial)."""
    num = den = 1
    for i in range(dim):
        num *= 2 ** (n - i) - 1
        den *= 2 ** (dim - i) - 1
    return (num // den) * 2 ** (n - dim)
