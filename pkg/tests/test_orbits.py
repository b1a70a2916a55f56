import json
from collections import Counter
from fractions import Fraction

import pytest

from clifford4 import labels as L
from clifford4 import reference
from clifford4.closure import NotClosed, closure
from clifford4.entropy import Fingerprint, entropy_table
from clifford4.exact_state import ExactState
from clifford4.gates import LOCAL_C, GeneratorSet, H, apply_circuit
from clifford4.kets import parse_state
from clifford4.orbits import partition


def test_complex_sizes(complex_atlas):
    p = complex_atlas.partition
    assert len(p) == 18
    assert Counter(p.sizes()) == {10368: 1, 6912: 6, 4608: 3, 20736: 5, 41472: 3}
    assert sum(p.sizes()) == 293760


def test_real_sizes(real_atlas):
    p = real_atlas.partition
    assert len(p) == 29
    assert Counter(p.sizes()) == {512: 9, 256: 12, 128: 7, 64: 1}


def test_single_state_partition():
    S = closure([ExactState.zero()], GeneratorSet("LOCAL_C", ()))
    p = partition(S, GeneratorSet("LOCAL_C", ()))
    assert len(p) == 1 and p.sizes() == [1]


def test_not_closed():
    S = closure([ExactState.zero()], GeneratorSet("LOCAL_C", (H(1),)))
    with pytest.raises(NotClosed):
        partition(S, LOCAL_C)


@pytest.mark.parametrize("mode", ["complex", "real"])
def test_entropy_constant_per_orbit(atlases, mode):
    a = atlases[mode]
    single, cuts = entropy_table(a.states.rows)     # recomputed independently of the partition
    for o in a.partition.orbits:
        m = a.partition.members(o.id)
        assert (single[m] == single[m[0]]).all() and (cuts[m] == cuts[m[0]]).all()
        assert Fraction(int(cuts[m[0]].sum()), 3) == o.entropy


def test_entropy_spectrum(complex_atlas):
    values = {o.entropy for o in complex_atlas.partition.orbits}
    assert values == {Fraction(0), Fraction(2, 3), Fraction(1), Fraction(4, 3), Fraction(5, 3)}
    assert max(values) == Fraction(5, 3) < 2


def test_fingerprints_separate_orbits(complex_atlas):
    fps = [o.fingerprint for o in complex_atlas.partition.orbits]
    assert len(set(fps)) == 18


@pytest.mark.parametrize("mode", ["complex", "real"])
def test_labels_match_table(atlases, mode):
    table = reference.ORBITS_REAL if mode == "real" else reference.ORBITS_COMPLEX
    got = {o.label: (o.size, o.entropy) for o in atlases[mode].partition.orbits}
    assert got == table


@pytest.mark.parametrize("text, label", [
    ("|0000>", "S0"),
    ("(|1011> - |0111>)/sqrt2", "T34"),
    ("(|1100> - |1011>)/sqrt2", "V4"),
])
def test_label_examples(complex_atlas, text, label):
    s = parse_state(text, reverse_kets=True)
    assert complex_atlas.partition.orbit_of_state(s).label == label


def test_fingerprint_rules():
    assert L.structural_label(Fingerprint((0, 0, 0, 0), (0, 0, 0))) == "S0"
    assert L.structural_label(Fingerprint((1, 1, 0, 0), (0, 1, 1))) == "T12"
    assert L.structural_label(Fingerprint((0, 1, 1, 1), (1, 1, 1))) == "V1"
    assert L.structural_label(Fingerprint((1, 1, 1, 1), (2, 0, 2))) == "U13/24"
    assert L.structural_label(Fingerprint((1, 1, 1, 1), (2, 2, 1)), real=True) == "X14/23^r"
    assert L.structural_label(Fingerprint((1, 1, 1, 1), (1, 1, 1))) == "W"
    with pytest.raises(L.AmbiguousLabel):
        L.structural_label(Fingerprint((1, 0, 0, 0), (1, 1, 1)))


def test_hat_x_rule(real_atlas):
    """CZ(a,b) is the only CZ sending hatX_ab into hatW^r."""
    p, c = real_atlas.partition, real_atlas.census
    w = p.by_label("hatW^r").id
    for o in p.orbits:
        if o.label.startswith("hatX"):
            hits = [g.qubits for g in c.gates if c.counts[g][o.id, w]]
            assert hits == [tuple(int(x) for x in o.label[4:6])]


def test_hat_v_adjacent_to_matching_hat_x(real_atlas):
    g = real_atlas.graph
    labels = g.labels
    for a in range(1, 5):
        nb = {labels[n] for n in g.neighbors(labels.index(f"hatV{a}^r"))}
        assert {l for l in nb if l.startswith("hatX")} == {
            L.hatX(a, b) for b in range(1, 5) if b != a}


def test_refinement(complex_atlas, real_atlas):
    P, R = complex_atlas.partition, real_atlas.partition
    parent = {}
    for o in R.orbits:
        idx = complex_atlas.states.lookup_rows(real_atlas.states.rows[R.members(o.id)])
        cids = set(P.orbit_of[idx].tolist())
        assert len(cids) == 1
        parent[o.label] = P.orbits[cids.pop()].label
    split = Counter(parent.values())
    for lab, n in split.items():
        assert n == {"S": 1, "T": 1, "U": 1, "V": 2, "W": 2, "X": 3}[lab[0]], lab
    assert len(split) == 18


def test_report_lines(real_atlas):
    lines = real_atlas.partition.report_lines()
    assert len(lines) == 29
    rec = json.loads(lines[0])
    assert set(rec) == {"label", "size", "entropy", "fingerprint", "representative"}
    assert rec["label"] == "S0^r" and rec["entropy"] == "0/1"
    assert bytes.fromhex(rec["representative"]) == ExactState.zero().encode()


def test_local_words(complex_atlas, rng):
    p = complex_atlas.partition
    S = complex_atlas.states
    for _ in range(30):
        o = p.orbits[rng.randrange(18)]
        m = p.members(o.id)
        i, j = int(m[rng.randrange(len(m))]), int(m[rng.randrange(len(m))])
        w = p.local_word(i, j)
        assert all(g.is_local for g in w)
        assert apply_circuit(S.state(i), w) == S.state(j)


def test_duplicate_labels_are_ambiguous(real_atlas):
    import copy
    p = copy.copy(real_atlas.partition)
    p.orbits = [copy.copy(o) for o in p.orbits]
    # drop the CZ information needed to name the hatX orbits
    with pytest.raises(L.AmbiguousLabel):
        L.assign_labels(p, None)
