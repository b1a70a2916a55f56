"""Orbit labels and the rules that assign them.

Label strings (ASCII):

========  ===========================  ==================================
family    complex                      real
========  ===========================  ==================================
product   ``S0``                       ``S0^r``
one pair  ``T12``                      ``T12^r``
two pairs ``U12/34``                   ``U12/34^r``
GHZ on 3  ``V1`` (qubit 1 unentangled) ``V1^r``, ``hatV1^r``
GHZ on 4  ``W``                        ``W^r``, ``hatW^r``
cluster   ``X12/34``                   ``X12/34^r``, ``hatX12^r``
========  ===========================  ==================================

Subscripts name qubits in the gate-index convention (qubit 1 is the
most significant basis bit).  Pair splits are written with the pair
containing qubit 1 first.
"""

from __future__ import annotations

from dataclasses import dataclass

from .entropy import Fingerprint, complement
from .exact_state import NormalizationViolation
from .kets import KetSyntaxError, parse_state

SPLITS = ("12/34", "13/24", "14/23")


class AmbiguousLabel(Exception):
    pass


def _pair(i, j) -> str:
    a, b = sorted((i, j))
    return f"{a}{b}"


def split(i, j) -> str:
    """The 2|2 split containing the pair {i, j}, e.g. split(3, 4) == '12/34'."""
    p = tuple(sorted((i, j)))
    q = complement(p)
    first, second = (p, q) if 1 in p else (q, p)
    return f"{first[0]}{first[1]}/{second[0]}{second[1]}"


def _r(label: str, real: bool) -> str:
    return label + "^r" if real else label


def S0(real=False): return _r("S0", real)
def T(i, j, real=False): return _r("T" + _pair(i, j), real)
def U(i, j, real=False): return _r("U" + split(i, j), real)
def V(a, real=False, hat=False): return ("hat" if hat else "") + _r(f"V{a}", real)
def W(real=False, hat=False): return ("hat" if hat else "") + _r("W", real)
def X(i, j, real=False): return _r("X" + split(i, j), real)
def hatX(i, j): return "hatX" + _pair(i, j) + "^r"


def family(label: str) -> str:
    """Family letter of a label, ignoring hats and the real marker."""
    base = label[3:] if label.startswith("hat") else label
    return base[0]


def is_hat(label: str) -> bool:
    return label.startswith("hat")


def structural_label(fp: Fingerprint, real: bool = False) -> str:
    """Label of the complex family from the entropy fingerprint alone.

    T_ab: exactly qubits a, b carry one bit of single-qubit entropy.
    V_a: exactly qubit a is unentangled, every 2|2 cut carries one bit.
    U_ab/cd: cut ab|cd carries nothing, the other cuts two bits each.
    X_ab/cd: cut ab|cd carries one bit, the other cuts two bits each.
    W: every single qubit and every cut carries one bit.
    """
    s, c = fp.single_entropies, fp.cut_entropies
    ones = [q + 1 for q in range(4) if s[q] == 1]
    if not any(s) and not any(c):
        return S0(real)
    if len(ones) == 2:
        a, b = ones
        expect = tuple(0 if split(a, b) == SPLITS[k] else 1 for k in range(3))
        if c == expect:
            return T(a, b, real)
    if len(ones) == 3 and c == (1, 1, 1):
        (a,) = complement(ones)
        return V(a, real)
    if len(ones) == 4:
        if c == (1, 1, 1):
            return W(real)
        if sorted(c) == [0, 2, 2]:
            i, j = (int(x) for x in SPLITS[c.index(0)][:2])
            return U(i, j, real)
        if sorted(c) == [1, 2, 2]:
            i, j = (int(x) for x in SPLITS[c.index(1)][:2])
            return X(i, j, real)
    raise AmbiguousLabel(f"no label matches fingerprint {fp}")


def assign_labels(partition, cz_tables: dict | None = None) -> list[str]:
    """Label every orbit of ``partition`` structurally; returns the labels.

    For real orbits, hats within a family are decided by orbit size (the
    smaller orbit is hatted), and a hatted X orbit is ``hatX_ab`` when
    ``CZ(a, b)`` is the unique CZ mapping some of it into ``hatW^r``.
    ``cz_tables`` maps each CZ gate to its image-index table; it is only
    needed for real partitions.
    """
    real = partition.generators.name == "LOCAL_R"
    labels = [structural_label(o.fingerprint, real) for o in partition.orbits]
    if real:
        by_base: dict[str, list[int]] = {}
        for oid, lab in enumerate(labels):
            by_base.setdefault(lab, []).append(oid)
        for lab, ids in by_base.items():
            if len(ids) == 1:
                continue
            fam = family(lab)
            sizes = [partition.orbits[i].size for i in ids]
            big = max(sizes)
            if fam not in "VWX" or sizes.count(big) != 1:
                raise AmbiguousLabel(f"cannot split orbits {ids} sharing label {lab}")
            for i in ids:
                if partition.orbits[i].size != big:
                    labels[i] = "hat" + lab
        if "hatW^r" in labels and any(l.startswith("hatX") for l in labels):
            if cz_tables is None:
                raise AmbiguousLabel("hatX orbits need CZ image tables to be named")
            _name_hat_x(partition, labels, cz_tables)
    if len(set(labels)) != len(labels):
        dup = sorted({l for l in labels if labels.count(l) > 1})
        raise AmbiguousLabel(f"duplicate labels {dup}")
    for o, lab in zip(partition.orbits, labels):
        o.label = lab
    return labels


def _name_hat_x(partition, labels, cz_tables):
    what = labels.index("hatW^r")
    for oid, lab in enumerate(labels):
        if not lab.startswith("hatX"):
            continue
        members = partition.members(oid)
        hits = [g for g, img in cz_tables.items()
                if (partition.orbit_of[img[members]] == what).any()]
        if len(hits) != 1:
            raise AmbiguousLabel(f"orbit {oid}: {len(hits)} CZ gates reach hatW^r")
        i, j = hits[0].qubits
        if split(i, j) != lab[4:].replace("^r", ""):
            raise AmbiguousLabel(f"orbit {oid}: CZ{hits[0].qubits} not inside split {lab}")
        labels[oid] = hatX(i, j)


@dataclass
class AnchorCheck:
    label: str
    text: str
    status: str                  # ok | mismatch | unnormalized | syntax | absent
    found: str | None = None     # label of the orbit the anchor lies in
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.status == "ok"


def audit_anchors(partition, anchors, *, reverse_kets: bool = True) -> list[AnchorCheck]:
    """Check that each ``(label, ket text)`` anchor lies in the orbit so labelled.

    Labels not present in this partition are skipped.
    """
    labels = set(partition.labels())
    out = []
    for label, text in anchors:
        if label not in labels:
            continue
        try:
            s = parse_state(text, reverse_kets=reverse_kets)
        except NormalizationViolation as exc:
            out.append(AnchorCheck(label, text, "unnormalized", detail=str(exc)))
            continue
        except KetSyntaxError as exc:
            out.append(AnchorCheck(label, text, "syntax", detail=str(exc)))
            continue
        i = partition.states.index(s)
        if i < 0:
            out.append(AnchorCheck(label, text, "absent", detail="not in the enumerated set"))
            continue
        found = partition.orbits[int(partition.orbit_of[i])].label
        status = "ok" if found == label else "mismatch"
        out.append(AnchorCheck(label, text, status, found))
    return out


def label_orbits(partition, anchors=(), cz_tables=None, *, reverse_kets=True):
    """Assign labels (structural rules) and audit the anchors against them.

    Anchors that disagree with the structural label are reported, never
    used: structural rules are unambiguous on both enumerated sets, and the
    anchor audit is what exposes corrupted representatives.
    """
    assign_labels(partition, cz_tables)
    audit = audit_anchors(partition, anchors, reverse_kets=reverse_kets)
    for chk in audit:
        if chk.ok:
            o = partition.by_label(chk.label)
            o.representative = parse_state(chk.text, reverse_kets=reverse_kets)
    return partition, audit
