"""Exact 4-qubit state vectors over the Gaussian integers.

A state is stored as 16 Gaussian-integer numerators and a single exponent
``k`` so that ``amplitude[b] = amps[b] / sqrt(2)**k``.  Basis index ``b`` is
``8*i1 + 4*i2 + 2*i3 + i4`` for the ket ``|i1 i2 i3 i4>``, i.e. qubit 1 is
the most significant bit.

Two representations live side by side:

* :class:`ExactState`, an immutable value object for single states, and
* "rows": ``int8`` arrays of shape ``(n, 33)`` laid out exactly like the
  byte encoding (``k`` then ``re, im`` per basis index).  All bulk work
  (closure, partitioning, census) happens on rows.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

NQUBITS = 4
DIM = 16
RECORD_SIZE = 1 + 2 * DIM

# Empirical bounds for every state reachable from |0000> (checked at runtime).
MAX_COMPONENT = 16
MAX_K = 8


class StateError(Exception):
    pass


class NormalizationViolation(StateError, ValueError):
    pass


class DecodeError(StateError, ValueError):
    pass


class BoundViolation(StateError, RuntimeError):
    """Internal error: a component or exponent left the asserted range."""


@dataclass(frozen=True, slots=True)
class GaussianInt:
    re: int
    im: int

    def __add__(self, other: GaussianInt) -> GaussianInt:
        return GaussianInt(self.re + other.re, self.im + other.im)

    def __sub__(self, other: GaussianInt) -> GaussianInt:
        return GaussianInt(self.re - other.re, self.im - other.im)

    def __neg__(self) -> GaussianInt:
        return GaussianInt(-self.re, -self.im)

    def __mul__(self, other: GaussianInt | int) -> GaussianInt:
        if isinstance(other, int):
            return GaussianInt(self.re * other, self.im * other)
        return GaussianInt(self.re * other.re - self.im * other.im,
                           self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def times_i(self) -> GaussianInt:
        return GaussianInt(-self.im, self.re)

    def conj(self) -> GaussianInt:
        return GaussianInt(self.re, -self.im)

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def __bool__(self) -> bool:
        return bool(self.re or self.im)

    def __complex__(self) -> complex:
        return complex(self.re, self.im)

    def __repr__(self) -> str:
        return f"GaussianInt({self.re}, {self.im})"


ZERO = GaussianInt(0, 0)
ONE = GaussianInt(1, 0)


def _gauss(z) -> GaussianInt:
    if isinstance(z, GaussianInt):
        return z
    if isinstance(z, (tuple, list)):
        return GaussianInt(int(z[0]), int(z[1]))
    if isinstance(z, complex):
        if z.real != int(z.real) or z.imag != int(z.imag):
            raise ValueError(f"not a Gaussian integer: {z!r}")
        return GaussianInt(int(z.real), int(z.imag))
    return GaussianInt(int(z), 0)


@dataclass(frozen=True, slots=True)
class ExactState:
    """A 4-qubit vector ``amps / sqrt(2)**k``.

    Instances are not required to be canonical; use :func:`canonicalize`
    (or the constructors below, which always return canonical states).
    Equality is structural, so it coincides with vector equality only
    between canonical states.  Global phases are *not* quotiented out.
    """

    amps: tuple[GaussianInt, ...]
    k: int

    def __post_init__(self):
        if len(self.amps) != DIM:
            raise ValueError(f"expected {DIM} amplitudes, got {len(self.amps)}")
        if self.k < 0:
            raise ValueError("k must be non-negative")
        object.__setattr__(self, "amps", tuple(_gauss(z) for z in self.amps))

    @classmethod
    def from_amps(cls, amps: Iterable, k: int) -> ExactState:
        return canonicalize(cls(tuple(amps), k))

    @classmethod
    def basis(cls, b: int) -> ExactState:
        if not 0 <= b < DIM:
            raise ValueError(f"basis index out of range: {b}")
        amps = [ZERO] * DIM
        amps[b] = ONE
        return cls(tuple(amps), 0)

    @classmethod
    def zero(cls) -> ExactState:
        """The all-zeros ket ``|0000>``."""
        return cls.basis(0)

    def norm2(self) -> int:
        return sum(z.norm() for z in self.amps)

    def is_normalized(self) -> bool:
        return self.norm2() == 2 ** self.k

    def is_canonical(self) -> bool:
        return self.k <= 1 or any(z.re % 2 or z.im % 2 for z in self.amps)

    def is_real(self) -> bool:
        return all(z.im == 0 for z in self.amps)

    def scaled(self, unit: GaussianInt) -> ExactState:
        """Multiply by a Gaussian unit (a global phase in {1, i, -1, -i})."""
        if unit.norm() != 1:
            raise ValueError("scaled() only accepts units")
        return ExactState(tuple(z * unit for z in self.amps), self.k)

    def to_complex(self) -> np.ndarray:
        """Floating-point view, for display and cross-checks only."""
        vec = np.array([complex(z) for z in self.amps])
        return vec / np.sqrt(2.0) ** self.k

    def to_row(self) -> np.ndarray:
        return encode_array(self)

    @classmethod
    def from_row(cls, row: np.ndarray) -> ExactState:
        row = np.asarray(row, dtype=np.int64)
        amps = tuple(GaussianInt(int(row[1 + 2 * b]), int(row[2 + 2 * b]))
                     for b in range(DIM))
        return cls(amps, int(row[0]))

    def encode(self) -> bytes:
        return encode(self)

    def __str__(self) -> str:
        from .kets import format_state
        return format_state(self)


def canonicalize(raw: ExactState) -> ExactState:
    """Return the unique canonical representative of ``raw``'s vector.

    Divides every numerator by 2 (and ``k`` by 2) while that is possible and
    ``k >= 2``.  Division by a lone sqrt(2) is never attempted because
    ``(a + bi)/sqrt(2)`` is not a Gaussian integer unless ``a = b = 0``.
    """
    if raw.norm2() != 2 ** raw.k:
        raise NormalizationViolation(
            f"sum |amps|^2 = {raw.norm2()} but 2^k = {2 ** raw.k}")
    amps, k = list(raw.amps), raw.k
    while k >= 2 and all(z.re % 2 == 0 and z.im % 2 == 0 for z in amps):
        amps = [GaussianInt(z.re // 2, z.im // 2) for z in amps]
        k -= 2
    if k == raw.k:
        return raw
    return ExactState(tuple(amps), k)


def equals(a: ExactState, b: ExactState) -> bool:
    """Exact vector equality for canonical states (phases included)."""
    return a.k == b.k and a.amps == b.amps


def _check_bounds(k: int, comps: Sequence[int]):
    if not 0 <= k <= MAX_K:
        raise BoundViolation(f"denominator exponent {k} exceeds {MAX_K}")
    if any(abs(c) > MAX_COMPONENT for c in comps):
        raise BoundViolation(f"component magnitude exceeds {MAX_COMPONENT}")


def encode_array(s: ExactState) -> np.ndarray:
    comps = [c for z in s.amps for c in (z.re, z.im)]
    _check_bounds(s.k, comps)
    return np.array([s.k, *comps], dtype=np.int8)


def encode(s: ExactState) -> bytes:
    """33-byte record: ``k`` then signed 8-bit ``(re, im)`` for b = 0..15."""
    return encode_array(s).tobytes()


def decode(data: bytes) -> ExactState:
    if not isinstance(data, (bytes, bytearray, memoryview)):
        raise DecodeError(f"expected bytes, got {type(data).__name__}")
    data = bytes(data)
    if len(data) != RECORD_SIZE:
        raise DecodeError(f"record must be {RECORD_SIZE} bytes, got {len(data)}")
    row = np.frombuffer(data, dtype=np.int8)
    if row[0] < 0 or row[0] > MAX_K:
        raise DecodeError(f"bad exponent byte {int(row[0])}")
    if np.abs(row[1:].astype(np.int16)).max() > MAX_COMPONENT:
        raise DecodeError("component out of range")
    s = ExactState.from_row(row)
    if not s.is_normalized():
        raise DecodeError("record is not normalized")
    if not s.is_canonical():
        raise DecodeError("record is not in canonical form")
    return s


def sort_key(data: bytes) -> bytes:
    """Byte string whose unsigned lexicographic order is the canonical order.

    Canonical order: ascending ``k``, then components compared in record
    order with *larger* values first.  With this choice the basis kets sort
    as ``|0000>, |0001>, ..., |1111>``.
    """
    return rows_to_keys(np.frombuffer(bytes(data), dtype=np.int8)[None, :])[0].tobytes()


# ---------------------------------------------------------------------------
# Bulk representation

KEY_DTYPE = np.dtype(("V", RECORD_SIZE))


def rows_from_states(states: Iterable[ExactState]) -> np.ndarray:
    rows = [encode_array(s) for s in states]
    if not rows:
        return np.zeros((0, RECORD_SIZE), dtype=np.int8)
    return np.stack(rows)


def states_from_rows(rows: np.ndarray) -> list[ExactState]:
    return [ExactState.from_row(r) for r in rows]


def split_rows(rows: np.ndarray):
    """``(n, 33)`` int8 rows -> ``(re, im, k)`` as int16/int16/int16 arrays."""
    rows = np.asarray(rows)
    k = rows[:, 0].astype(np.int16)
    re = rows[:, 1::2].astype(np.int16)
    im = rows[:, 2::2].astype(np.int16)
    return re, im, k


def join_rows(re: np.ndarray, im: np.ndarray, k: np.ndarray) -> np.ndarray:
    if re.size and (np.abs(re).max() > MAX_COMPONENT or np.abs(im).max() > MAX_COMPONENT):
        raise BoundViolation(f"component magnitude exceeds {MAX_COMPONENT}")
    if k.size and k.max() > MAX_K:
        raise BoundViolation(f"denominator exponent exceeds {MAX_K}")
    out = np.empty((re.shape[0], RECORD_SIZE), dtype=np.int8)
    out[:, 0] = k
    out[:, 1::2] = re
    out[:, 2::2] = im
    return out


def canonicalize_arrays(re: np.ndarray, im: np.ndarray, k: np.ndarray):
    """Vectorized :func:`canonicalize` (arrays are modified in place)."""
    while True:
        even = (k >= 2) & ~((re & 1).any(axis=1) | (im & 1).any(axis=1))
        if not even.any():
            return re, im, k
        re[even] >>= 1
        im[even] >>= 1
        k[even] -= 2


def row_norms(rows: np.ndarray) -> np.ndarray:
    re, im, _ = split_rows(rows)
    return (re.astype(np.int64) ** 2 + im.astype(np.int64) ** 2).sum(axis=1)


def rows_normalized(rows: np.ndarray) -> np.ndarray:
    k = rows[:, 0].astype(np.int64)
    return row_norms(rows) == (np.int64(1) << k)


def rows_to_keys(rows: np.ndarray) -> np.ndarray:
    """Order-preserving fixed-width keys (one ``V33`` scalar per row)."""
    rows = np.asarray(rows, dtype=np.int8)
    buf = np.empty(rows.shape, dtype=np.uint8)
    buf[:, 0] = rows[:, 0].view(np.uint8)
    buf[:, 1:] = (127 - rows[:, 1:].astype(np.int16)).astype(np.uint8)
    return np.ascontiguousarray(buf).view(KEY_DTYPE).ravel()


def keys_to_rows(keys: np.ndarray) -> np.ndarray:
    buf = np.ascontiguousarray(keys).view(np.uint8).reshape(-1, RECORD_SIZE)
    rows = np.empty(buf.shape, dtype=np.int8)
    rows[:, 0] = buf[:, 0].view(np.int8)
    rows[:, 1:] = (127 - buf[:, 1:].astype(np.int16)).astype(np.int8)
    return rows
