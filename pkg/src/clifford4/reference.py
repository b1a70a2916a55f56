"""Published reference values the computations are checked against.

Transition rows are written in pattern form (``ij = ab``, ``ij = ac``, ...)
in the source tables; :func:`expected_row` expands a pattern row for one
concrete source orbit and one concrete CZ pair.  Cells known to be wrong
in the source are listed in :data:`ERRATA`; they are compared and
reported like every other cell, never silently corrected.
"""

from __future__ import annotations

from fractions import Fraction
from importlib import resources
from itertools import combinations

from . import labels as L
from .entropy import complement

PAIRS = tuple(combinations(range(1, 5), 2))

# ---------------------------------------------------------------------------
# orbit tables: label -> (size, entropy)

def _orbit_table(real: bool) -> dict[str, tuple[int, Fraction]]:
    r = real
    f = Fraction
    if not real:
        sizes = dict(S=10368, T=6912, U=4608, V=20736, W=20736, X=41472)
    else:
        sizes = dict(S=512, T=256, U=128, V=512, W=512, X=512, hV=128, hW=64, hX=256)
    out = {L.S0(r): (sizes["S"], f(0))}
    for i, j in PAIRS:
        out[L.T(i, j, r)] = (sizes["T"], f(2, 3))
    for i, j in PAIRS[:3]:
        out[L.U(i, j, r)] = (sizes["U"], f(4, 3))
    for a in range(1, 5):
        out[L.V(a, r)] = (sizes["V"], f(1))
    out[L.W(r)] = (sizes["W"], f(1))
    for i, j in PAIRS[:3]:
        out[L.X(i, j, r)] = (sizes["X"], f(5, 3))
    if real:
        for a in range(1, 5):
            out[L.V(a, r, hat=True)] = (sizes["hV"], f(1))
        out[L.W(r, hat=True)] = (sizes["hW"], f(1))
        for i, j in PAIRS:
            out[L.hatX(i, j)] = (sizes["hX"], f(5, 3))
    return out


ORBITS_COMPLEX = _orbit_table(False)
ORBITS_REAL = _orbit_table(True)

STATE_COUNT = {"complex": 293760, "real": 8640}
ENTROPY_VALUES = frozenset(Fraction(x, 3) for x in (0, 2, 3, 4, 5))
POPULATIONS = {1: 16, 2: 120, 4: 140, 8: 30, 16: 1}
DIAMETER = {"complex": 3, "real": 5}

# ---------------------------------------------------------------------------
# transition tables


def _parse(label: str):
    """``(family, hat, qubits)`` for a label; qubits as a tuple of ints."""
    hat = L.is_hat(label)
    base = label[3:] if hat else label
    base = base.replace("^r", "")
    fam = base[0]
    digits = tuple(int(ch) for ch in base[1:] if ch.isdigit())
    if fam == "S":
        digits = ()
    return fam, hat, digits


def expected_row(source: str, i: int, j: int) -> dict[str, int]:
    """Tabulated ``{target label: count}`` for ``source`` under ``CZ(i, j)``."""
    real = source.endswith("^r")
    fam, hat, q = _parse(source)
    ij = {i, j}
    ov = lambda *xs: complement(xs)          # noqa: E731  (overline)
    if not real:
        if fam == "S":
            return {L.S0(): 5760, L.T(i, j): 4608}
        if fam == "T":
            a, b = q
            if ij == {a, b}:
                return {source: 2304, L.S0(): 4608}
            if len(ij & {a, b}) == 1:
                c = (ij - {a, b}).pop()
                return {source: 2304, L.V(*ov(a, b, c)): 4608}
            return {source: 3840, L.U(a, b): 3072}
        if fam == "U":
            a, b = q[:2]
            if ij in ({a, b}, set(ov(a, b))):
                return {L.T(*ov(i, j)): 3072, source: 1526}
            return {L.X(a, b): 4608}
        if fam == "V":
            (a,) = q
            if a in ij:
                c = (ij - {a}).pop()
                return {source: 6912, L.W(): 4608, L.X(a, c): 9216}
            return {source: 11520, L.T(*ov(a, i)): 4608, L.T(*ov(a, j)): 4608}
        if fam == "W":
            return {source: 2304, L.X(i, j): 9216, L.V(i): 4608, L.V(j): 4608}
        if fam == "X":
            a, b = q[:2]
            if ij in ({a, b}, set(ov(a, b))):
                return {source: 13824, L.V(i): 9216, L.V(j): 9216, L.W(): 9216}
            row = {L.X(*p): 18432 for p in ((1, 2), (1, 3), (1, 4)) if L.X(*p) != L.X(i, j)}
            row[L.U(a, b, False)] = 4608
            return row
        raise KeyError(source)

    R = True
    if fam == "S":
        return {source: 384, L.T(i, j, R): 128}
    if fam == "T":
        a, b = q
        if ij == {a, b}:
            return {source: 128, L.S0(R): 128}
        if len(ij & {a, b}) == 1:
            c = (ij - {a, b}).pop()
            return {source: 128, L.V(*ov(a, b, c), R): 128}
        return {source: 192, L.U(a, b, R): 64}
    if fam == "U":
        a, b = q[:2]
        if ij in ({a, b}, set(ov(a, b))):
            # the source writes T_{overline{ab}} here; with ij ranging over
            # both pairs of the split it is read as T_{overline{ij}}
            return {L.T(*ov(i, j), R): 64, source: 64}
        return {L.X(a, b, R): 128}
    if fam == "V" and not hat:
        (a,) = q
        if a in ij:
            c = (ij - {a}).pop()
            return {source: 256, L.W(R): 128, L.X(a, c, R): 128}
        return {source: 128, L.T(*ov(a, i), R): 128, L.T(*ov(a, j), R): 128,
                L.V(a, R, hat=True): 128}
    if fam == "V":
        (a,) = q
        if a in ij:
            c = (ij - {a}).pop()
            return {source: 64, L.hatX(a, c): 64}
        return {L.V(a, R): 128}
    if fam == "W" and not hat:
        return {source: 128, L.hatX(*ov(i, j)): 128, L.V(i, R): 128, L.V(j, R): 128}
    if fam == "W":
        return {L.hatX(*ov(i, j)): 64}
    if fam == "X" and not hat:
        a, b = q[:2]
        if ij in ({a, b}, set(ov(a, b))):
            return {L.V(i, R): 128, L.V(j, R): 128, L.hatX(*ov(i, j)): 128, source: 128}
        # ij = ac: a from the first pair, c from the other, b is a's partner
        p, pb = q[:2], ov(*q[:2])
        a = i if i in p else j
        c = (ij - {a}).pop()
        b = (set(p) - {a}).pop()
        return {L.U(*p, R): 128, L.X(b, c, R): 128, L.hatX(*p): 128, L.hatX(*pb): 128}
    if fam == "X":
        a, b = q
        if ij == {a, b}:
            return {L.W(R, hat=True): 64, source: 64, L.V(a, R, hat=True): 64,
                    L.V(b, R, hat=True): 64}
        if len(ij & {a, b}) == 1:
            shared = (ij & {a, b}).pop()
            other = ({a, b} - {shared}).pop()
            c = (ij - {a, b}).pop()
            return {L.hatX(*ov(other, c)): 128, L.X(a, b, R): 128}
        return {L.W(R): 128, L.X(a, b, R): 128}
    raise KeyError(source)


def expected_table(real: bool) -> dict[tuple[str, tuple[int, int]], dict[str, int]]:
    labels = ORBITS_REAL if real else ORBITS_COMPLEX
    return {(lab, p): expected_row(lab, *p) for lab in labels for p in PAIRS}


# Cells whose published value is inconsistent with the rest of the source.
# Each entry: (mode, source-label family, note).  ``erratum`` matches a
# discrepancy against these; anything unmatched is a genuine failure.
ERRATA = {
    "U-1526": ("complex", "U",
               "U_ab/cd under CZ(ab) or CZ(cd): published 1526 to U_ab/cd, but the row "
               "must sum to 4608, so the cell is 1536"),
    "hatW-row": ("real", "hatW",
                 "hatW^r under CZ(ij): published 64 to hatX of the complementary pair; "
                 "the hatX_ab row (CZ(ab) sends 64 to hatW^r) forces hatX_ij by CZ^2 = 1"),
}


def erratum(source: str, target: str, published: int) -> str | None:
    """Key of the documented erratum explaining a cell mismatch, if any."""
    if not source.endswith("^r") and source.startswith("U") and target == source \
            and published == 1526:
        return "U-1526"
    if source == "hatW^r" and target.startswith("hatX"):
        return "hatW-row"
    return None


# ---------------------------------------------------------------------------
# diagrams: drawn edges, straight lines plus arcs (decoded by endpoint)


def diagram_edges(mode: str) -> set[frozenset[str]]:
    """Edge set of the published connectivity diagram for ``mode``."""
    name = f"diagram_{mode}.txt"
    text = resources.files("clifford4").joinpath("data", name).read_text()
    edges = set()
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            a, b = line.split()
            edges.add(frozenset((a, b)))
    return edges


# ---------------------------------------------------------------------------
# representatives.  Ket strings are kept verbatim; they are written with
# qubit 1 as the rightmost character (see ANCHOR_REVERSED).

ANCHOR_REVERSED = True

_ANCHORS_BASE = (
    ("S0", "|0000>"),
    ("T12", "(1/sqrt2)(|1110> - |1101>)"),
    ("T13", "(1/sqrt2)(|1110> - |1011>)"),
    ("T14", "(1/sqrt2)(|1101> - |1011>)"),
    ("T23", "(1/sqrt2)(|1101> - |1011>)"),
    ("T24", "(1/sqrt2)(|1101> - |0111>)"),
    ("T34", "(1/sqrt2)(|1011> - |0111>)"),
    ("U12/34", "1/2(|1111> + |1100> - |0011> - |0000>)"),
    ("U13/24", "1/2(|1111> + |1010> - |0101> - |0000>)"),
    ("U14/23", "1/2(|1111> + |1001> - |0110> - |0000>)"),
    ("V1", "(1/sqrt2)(|1001> - |0111>)"),
    ("V2", "(1/sqrt2)(|1010> - |0111>)"),
    ("V3", "(1/sqrt2)(|1100> - |0111>)"),
    ("V4", "(1/sqrt2)(|1100> - |1011>)"),
    ("W", "(1/sqrt2)(|1000> - |0111>)"),
    ("X12/34", "1/2(|1111> + |1100> - |0011> - |0000>)"),
    ("X13/24", "1/2(|1111> - |1010> - |0101> - |0000>)"),
    ("X14/23", "1/2(|1111> - |1001> - |0110> - |0000>)"),
)

_ANCHORS_REAL_ONLY = (
    ("hatV1^r", "1/2(|1100> - |1010> - |0110> - |0000>)"),
    ("hatV2^r", "1/2(|1100> - |1001> - |0101> - |0000>)"),
    ("hatV3^r", "1/2(|1010> + |1001> - |0011> - |0000>)"),
    ("hatV4^r", "1/2(|0101> + |0101> - |0011> - |0000>)"),
    ("hatW^r", "1/(2sqrt2)(|1110> + |1101> + |1011> - |1000>"
               " + |0111> - |0100> - |0010> - |0001>)"),
    ("hatX12^r", "1/2(|1100> - |1011> - |0111> - |0000>)"),
    ("hatX34^r", "1/2(|1110> - |1101> - |0011> - |0000>)"),
    ("hatX24^r", "1/2(|1110> - |1011> - |0101> - |0000>)"),
    ("hatX14^r", "1/2(|1101> - |1011> - |0110> - |0000>)"),
    ("hatX13^r", "1/2(|1101> - |1010> - |0111> - |0000>)"),
    ("hatX23^r", "1/2(|1110> - |1001> - |0111> - |0000>)"),
)


def anchors(mode: str) -> tuple[tuple[str, str], ...]:
    """``(label, ket text)`` pairs; real-mode labels carry ``^r``."""
    if mode == "complex":
        return _ANCHORS_BASE
    return tuple((lab + "^r", txt) for lab, txt in _ANCHORS_BASE) + _ANCHORS_REAL_ONLY


# Anchors the source itself shows to be defective (real-mode copies of the
# complex anchors inherit the defect).
KNOWN_BAD_ANCHORS = {
    "T14": "same ket sum as T23",
    "X12/34": "same ket sum as U12/34",
    "hatV4^r": "repeats a ket; not normalized",
    "hatV3^r": "lies in the 512-element V3^r orbit, together with the V3 anchor",
}


def bad_anchor_note(label: str) -> str | None:
    return KNOWN_BAD_ANCHORS.get(label) or KNOWN_BAD_ANCHORS.get(label.removesuffix("^r"))
