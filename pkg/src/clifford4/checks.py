"""Invariant checks behind the CLI's ``--verify`` flag.

Each function returns a :class:`Report`: failed checks make the command
exit nonzero, while documented inconsistencies in the published data are
collected as warnings.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import reference
from .atlas import FULL, Atlas
from .closure import check_closed
from .exact_state import rows_normalized
from .gates import apply_gate_rows
from .populations import (affine_subspace_count, distinct_supports, is_affine,
                          population_census)
from .transitions import compare_with_reference, diameter, gate_form_mismatches


@dataclass
class Report:
    results: list[tuple[str, bool, str]] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def check(self, name: str, ok: bool, detail: str = "") -> bool:
        self.results.append((name, bool(ok), detail))
        return bool(ok)

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.results)

    def lines(self) -> list[str]:
        out = [f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  ({d})" if d else "")
               for name, ok, d in self.results]
        out += [f"WARNING  {w}" for w in self.warnings]
        return out


def verify_states(atlas: Atlas, rep: Report | None = None, *, sample: int = 20000,
                  seed: int = 0) -> Report:
    rep = rep or Report()
    S = atlas.states
    n = reference.STATE_COUNT[atlas.mode]
    rep.check("state count", len(S) == n, f"{len(S)} vs {n}")
    rep.check("all states normalized", rows_normalized(S.rows).all())
    rep.check("encoding injective", len(np.unique(S.keys)) == len(S))
    G = FULL[atlas.mode]
    if len(S) <= sample:
        leaks = check_closed(S, G)
        rep.check("closed under generators (exhaustive)", not any(leaks.values()))
    else:
        idx = np.sort(random.Random(seed).sample(range(len(S)), sample))
        rows = S.rows[idx]
        bad = sum(int((S.lookup_rows(apply_gate_rows(rows, g)) < 0).sum()) for g in G)
        rep.check(f"closed under generators ({sample} sampled states)", bad == 0)
        rep.check("sampled gate images normalized",
                  all(rows_normalized(apply_gate_rows(rows, g)).all() for g in G))
    return rep


def verify_orbits(atlas: Atlas, rep: Report | None = None) -> Report:
    rep = rep or Report()
    p = atlas.partition
    table = reference.ORBITS_REAL if atlas.mode == "real" else reference.ORBITS_COMPLEX
    got = {o.label: (o.size, o.entropy) for o in p.orbits}
    rep.check("orbit count", len(got) == len(table), f"{len(got)} vs {len(table)}")
    wrong = sorted(lab for lab in table if got.get(lab) != table[lab])
    rep.check("orbit sizes and entropies", not wrong, ", ".join(wrong))
    values = {o.entropy for o in p.orbits}
    rep.check("entropy values", values <= reference.ENTROPY_VALUES)
    for chk in atlas.anchors:
        if chk.ok:
            continue
        note = reference.bad_anchor_note(chk.label)
        msg = f"anchor {chk.label}: {chk.status}" + (f", lies in {chk.found}" if chk.found else "")
        if note:
            rep.warnings.append(f"{msg} ({note})")
        else:
            rep.check(f"anchor {chk.label}", False, msg)
    rep.check("anchors audited", bool(atlas.anchors))
    return rep


def verify_transitions(atlas: Atlas, rep: Report | None = None) -> Report:
    rep = rep or Report()
    c = atlas.census
    rep.check("census rows sum to orbit sizes", c.row_sums_ok())
    rep.check("census symmetric under involutions", c.symmetric())
    mism = gate_form_mismatches(atlas.states, atlas.partition)
    rep.check("CZ(i,j) = CNOT(i,j) = CNOT(j,i) per orbit", not mism,
              ", ".join(f"{a} vs {b}" for a, b in mism))
    unexplained = []
    for d in compare_with_reference(c, warn=False):
        key = reference.erratum(d.source, d.target, d.published)
        if key:
            rep.warnings.append(f"table cell {d} [{key}]")
        else:
            unexplained.append(str(d))
    rep.check("transition table cells", not unexplained, "; ".join(unexplained))
    ref = reference.diagram_edges(atlas.mode)
    got = atlas.graph.edge_labels()
    rep.check("diagram edges", got == ref,
              f"missing {sorted(map(sorted, ref - got))}, extra {sorted(map(sorted, got - ref))}")
    d = diameter(atlas.graph)
    rep.check("diameter", d == reference.DIAMETER[atlas.mode], str(d))
    return rep


def verify_populations(atlas: Atlas, rep: Report | None = None) -> Report:
    rep = rep or Report()
    counts = population_census(atlas.states.rows)     # raises on non-uniformity
    rep.check("uniform populations", True)
    if atlas.mode == "complex":
        rep.check("support census", counts == reference.POPULATIONS, str(counts))
    sups = distinct_supports(atlas.states.rows)
    rep.check("supports are affine subspaces", all(is_affine(s) for s in sups))
    by_dim = Counter(len(s).bit_length() - 1 for s in sups)
    if atlas.mode == "complex":
        rep.check("supports = all affine subspaces",
                  all(by_dim[d] == affine_subspace_count(d) for d in range(5)))
    return rep
