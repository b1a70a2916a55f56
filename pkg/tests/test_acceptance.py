"""Acceptance criteria 1-10.

Each test records its outcome through the ``criterion`` fixture and then
asserts it; the terminal summary prints one PASS/FAIL line per criterion
with its sub-checks.  Values are compared with independent oracles where
one exists and with the transcribed published tables otherwise.
"""

import random
import warnings
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from clifford4 import reference
from clifford4.entropy import FlatSpectrumViolation, entropy_table
from clifford4.exact_state import ExactState, rows_normalized, rows_to_keys
from clifford4.gates import FULL_C, FULL_R, H, P, Z, apply_circuit_rows, apply_gate_rows
from clifford4.populations import distinct_supports, population_census, support_masks
from clifford4.transitions import (DiscrepancyWarning, compare_with_reference, diameter,
                                   gate_form_mismatches)

from oracles import real_stabilizer_state_count, stabilizer_state_count


# 1 -------------------------------------------------------------------------

@pytest.mark.parametrize("mode, oracle", [
    ("complex", lambda: 8 * stabilizer_state_count(4)),
    ("real", lambda: 2 * real_stabilizer_state_count(4)),
])
def test_1_enumeration_counts(atlases, criterion, mode, oracle):
    n = len(atlases[mode].states)
    ok = n == reference.STATE_COUNT[mode] == oracle()
    assert criterion(1, f"{mode}: {n} states", ok, f"expected {reference.STATE_COUNT[mode]}")


# 2 -------------------------------------------------------------------------

@pytest.mark.parametrize("mode, n, sizes", [
    ("complex", 18, {10368: 1, 6912: 6, 4608: 3, 20736: 5, 41472: 3}),
    ("real", 29, {512: 9, 256: 12, 128: 7, 64: 1}),
])
def test_2_orbit_sizes(atlases, criterion, mode, n, sizes):
    p = atlases[mode].partition
    table = reference.ORBITS_REAL if mode == "real" else reference.ORBITS_COMPLEX
    got = {o.label: o.size for o in p.orbits}
    ok = (len(p.orbits) == n and Counter(got.values()) == sizes
          and got == {lab: size for lab, (size, _) in table.items()})
    assert criterion(2, f"{mode}: {len(p.orbits)} orbits, sizes per label", ok)


# 3 -------------------------------------------------------------------------

@pytest.mark.parametrize("mode", ["complex", "real"])
def test_3_entropy_spectrum(atlases, criterion, mode):
    a = atlases[mode]
    p = a.partition
    _, cuts = entropy_table(a.states.rows)          # recomputed for every state
    ent = cuts.sum(axis=1)
    constant = all(len(np.unique(ent[p.members(o.id)])) == 1 for o in p.orbits)
    table = reference.ORBITS_REAL if mode == "real" else reference.ORBITS_COMPLEX
    per_orbit = {o.label: Fraction(int(ent[o.root]), 3) for o in p.orbits}
    matches = per_orbit == {lab: e for lab, (_, e) in table.items()}
    values = set(per_orbit.values())
    ok = constant and matches and values == reference.ENTROPY_VALUES and max(values) == Fraction(5, 3)
    assert criterion(3, f"{mode}: constant per orbit, table column, values {{0,2/3,1,4/3,5/3}}", ok,
                     f"constant={constant} table={matches} values={sorted(map(str, values))}")


# 4 -------------------------------------------------------------------------

def _discrepancies(atlas):
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        found = compare_with_reference(atlas.census)
    return found, [str(x.message) for x in w if issubclass(x.category, DiscrepancyWarning)]


def test_4_cells_match_or_are_documented_errata(atlases, criterion):
    """Every differing cell is a documented erratum, and each one is warned about."""
    details, ok = [], True
    for mode, a in atlases.items():
        found, warned = _discrepancies(a)
        ok &= all(reference.erratum(d.source, d.target, d.published) for d in found)
        ok &= warned == [str(d) for d in found]
        ok &= a.census.row_sums_ok()
        details.append(f"{mode}: {len(found)} differing cells")
    u = atlases["complex"].census.labelled()[("U12/34", (1, 2))]
    ok &= u.get("U12/34") == 1536 and sum(u.values()) == 4608
    assert criterion(4, "all cells reproduced or explained, with warnings", ok, "; ".join(details))


def test_4_only_exception_is_the_1526_cell(atlases, criterion):
    """The criterion allows a single exception; the real table has a second one."""
    found = [d for a in atlases.values() for d in _discrepancies(a)[0]]
    other = [d for d in found if reference.erratum(d.source, d.target, d.published) != "U-1526"]
    detail = (f"{len(found) - len(other)} '1526' cells, {len(other)} other cells: "
              + "; ".join(str(d) for d in other[:2]) + (" ..." if len(other) > 2 else ""))
    assert criterion(4, "no differing cell besides '1526'", not other, detail)


# 5 -------------------------------------------------------------------------

@pytest.mark.parametrize("mode", ["complex", "real"])
def test_5_diagrams_and_diameter(atlases, criterion, mode):
    g = atlases[mode].graph
    ref = reference.diagram_edges(mode)
    got = g.edge_labels()
    d = diameter(g)
    ok = got == ref and d == reference.DIAMETER[mode]
    assert criterion(5, f"{mode}: {len(got)} edges equal golden file, diameter {d}", ok,
                     f"missing {len(ref - got)}, extra {len(got - ref)}")


# 6 -------------------------------------------------------------------------

@pytest.mark.parametrize("mode, target, need", [("complex", "X13/24", 3), ("real", "hatW^r", 5)])
def test_6_circuit_synthesis(atlases, criterion, mode, target, need):
    a = atlases[mode]
    con = a.connector()
    S, p = a.states, a.partition
    r = random.Random(6)
    bad = 0
    for _ in range(1000):
        i, j = r.randrange(len(S)), r.randrange(len(S))
        x, y = S.state(i), S.state(j)
        c = con.connect(x, y)                       # replays exactly or raises
        bad += c.cnot_count() > p_dist(a, i, j)
    s0 = ExactState.zero()
    far = S.state(int(p.members(p.by_label(target).id)[0]))
    n = con.connect(s0, far).cnot_count()
    ok = bad == 0 and n == need
    assert criterion(6, f"{mode}: 1000 random pairs replay, count <= distance; S0 -> {target}: {n}",
                     ok, f"{bad} pairs over distance")


def p_dist(atlas, i, j):
    o = atlas.partition.orbit_of
    return atlas.graph.distance(int(o[i]), int(o[j]))


# 7 -------------------------------------------------------------------------

def test_7_population_census(complex_atlas, criterion):
    rows = complex_atlas.states.rows
    support_masks(rows)                              # raises NonUniform on any state
    counts = population_census(rows)
    total = len(distinct_supports(rows))
    ok = counts == {1: 16, 2: 120, 4: 140, 8: 30, 16: 1} and total == 307
    assert criterion(7, f"uniform on all {len(rows)} states; supports {counts}, total {total}", ok)


# 8 -------------------------------------------------------------------------

def test_8_norm_preservation(atlases, criterion):
    real = atlases["real"].states.rows
    ok_r = all(rows_normalized(apply_gate_rows(real, g)).all() for g in FULL_R)
    cx = atlases["complex"].states.rows
    idx = np.random.default_rng(8).choice(len(cx), 12000, replace=False)
    ok_c = all(rows_normalized(apply_gate_rows(cx[idx], g)).all() for g in FULL_C)
    assert criterion(8, "norm preserved (all real states, 12000 complex samples)", ok_r and ok_c)


def test_8_cz_cnot_census(atlases, criterion):
    ok = all(not gate_form_mismatches(a.states, a.partition) for a in atlases.values())
    assert criterion(8, "CZ(i,j), CNOT(i,j), CNOT(j,i) censuses equal per orbit", ok)


def test_8_involutions(complex_atlas, criterion):
    rows = complex_atlas.states.rows
    inv = [g for g in FULL_C if g.kind != "P"] + [Z(q) for q in range(1, 5)]
    ok = all((apply_circuit_rows(rows, [g, g]) == rows).all() for g in inv)
    ok &= all((apply_circuit_rows(rows, [P(q)] * 4) == rows).all() for q in range(1, 5))
    ok &= all((apply_circuit_rows(rows, [H(q), Z(q), H(q)] * 2) == rows).all() for q in range(1, 5))
    assert criterion(8, "gate involutions and P^4 = 1 on all states", ok)


def test_8_flat_spectrum_and_injectivity(atlases, criterion):
    try:
        for a in atlases.values():
            entropy_table(a.states.rows)
        flat = True
    except FlatSpectrumViolation:
        flat = False
    injective = all(len(np.unique(rows_to_keys(a.states.rows))) == len(a.states)
                    for a in atlases.values())
    assert criterion(8, "flat-spectrum assertion silent; encoding injective", flat and injective)


# 9 -------------------------------------------------------------------------

CORRUPT = {"T14", "X12/34", "hatV4^r"}


def test_9_corrupt_anchors_detected(atlases, criterion):
    statuses = {}
    for a in atlases.values():
        for chk in a.anchors:
            statuses[chk.label] = chk
    ok = (statuses["T14"].status == "mismatch" and statuses["T14"].found == "T23"
          and statuses["X12/34"].status == "mismatch" and statuses["X12/34"].found == "U12/34"
          and statuses["hatV4^r"].status == "unnormalized"
          and all(reference.bad_anchor_note(lab) for lab in CORRUPT))
    assert criterion(9, "T14, X12/34, hatV4^r detected and reported", ok)


def test_9_all_other_anchors_match(atlases, criterion):
    bad = [f"{chk.label} lies in {chk.found}" for a in atlases.values() for chk in a.anchors
           if not chk.ok and chk.label.removesuffix("^r") not in CORRUPT and chk.label not in CORRUPT]
    assert criterion(9, "every other anchor parses and lands in its orbit", not bad, "; ".join(bad))


# 10 ------------------------------------------------------------------------

def test_10_real_complex_splitting(complex_atlas, real_atlas, criterion):
    P_, R = complex_atlas.partition, real_atlas.partition
    parent = {}
    for o in R.orbits:
        idx = complex_atlas.states.lookup_rows(real_atlas.states.rows[R.members(o.id)])
        cids = set(P_.orbit_of[idx].tolist())
        assert len(cids) == 1, o.label
        parent[o.label] = P_.orbits[cids.pop()].label
    split = Counter(parent.values())
    want = {"S": 1, "T": 1, "U": 1, "V": 2, "W": 2, "X": 3}
    ok = len(split) == 18 and all(split[lab] == want[lab[0]] for lab in split)
    assert criterion(10, "S0, T, U unsplit; V, W split in two; X split in three", ok,
                     ", ".join(f"{k}:{v}" for k, v in sorted(split.items()) if v > 1))
