"""One-stop construction of everything known about a mode, with a disk cache.

An :class:`Atlas` bundles the enumerated states, the labelled orbit
partition, the CZ census, the orbit graph, the anchor audit and a
:class:`~clifford4.transitions.Connector`.  The expensive pieces (state
set and partition arrays) can be cached on disk under a key made of the
mode and the package version.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__, reference
from .closure import DEFAULT_CAPACITY, StateSet, StateSetFormatError, closure, load, save
from .exact_state import ExactState
from .gates import ALL_CZS, FULL_C, FULL_R, LOCAL_C, LOCAL_R
from .labels import AnchorCheck, label_orbits
from .orbits import OrbitPartition, from_arrays, partition
from .transitions import Connector, OrbitGraph, TransitionCensus, build_graph, census

log = logging.getLogger(__name__)

MODES = ("complex", "real")
FULL = {"complex": FULL_C, "real": FULL_R}
LOCAL = {"complex": LOCAL_C, "real": LOCAL_R}


def default_cache_dir() -> Path:
    env = os.environ.get("CLIFFORD4_CACHE")
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "clifford4"


@dataclass
class Atlas:
    mode: str
    states: StateSet
    partition: OrbitPartition
    census: TransitionCensus
    graph: OrbitGraph
    anchors: list[AnchorCheck]

    def connector(self, entangler: str = "cnot") -> Connector:
        return Connector(self.states, self.partition, self.census, self.graph, entangler)


def _key(mode: str) -> str:
    return f"{mode}-v{__version__}"


def enumerate_states(mode: str, *, seed: ExactState | None = None, workers: int = 1,
                     capacity: int = DEFAULT_CAPACITY, cache_dir: Path | None = None) -> StateSet:
    """Closure of ``seed`` (default ``|0000>``) under the mode's full generator set."""
    seed = seed or ExactState.zero()
    default_seed = seed == ExactState.zero()
    path = cache_dir / f"{_key(mode)}.states" if cache_dir and default_seed else None
    if path is not None and path.exists():
        try:
            S = load(path)
            if S.generators == FULL[mode]:
                log.info("loaded %s", path)
                return S
        except StateSetFormatError as exc:
            log.warning("ignoring unreadable cache %s: %s", path, exc)
    S = closure([seed], FULL[mode], capacity=capacity, record_tree=False, workers=workers)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        save(S, path)
    return S


def _save_partition(p: OrbitPartition, path: Path):
    path.parent.mkdir(parents=True, exist_ok=True)
    np.savez(path, orbit_of=p.orbit_of, parent=p.parent, parent_gate=p.parent_gate,
             single=p.single_entropies, cuts=p.cut_entropies)


def write_cache(atlas: Atlas, cache_dir: Path) -> None:
    """Store an already-built atlas so later :func:`build` calls load it."""
    cache_dir.mkdir(parents=True, exist_ok=True)
    save(atlas.states, cache_dir / f"{_key(atlas.mode)}.states")
    _save_partition(atlas.partition, cache_dir / f"{_key(atlas.mode)}.orbits.npz")


def partition_states(S: StateSet, mode: str, *, cache_dir: Path | None = None) -> OrbitPartition:
    path = cache_dir / f"{_key(mode)}.orbits.npz" if cache_dir else None
    if path is not None and path.exists():
        with np.load(path) as z:
            if len(z["orbit_of"]) == len(S):
                return from_arrays(S, LOCAL[mode], z["orbit_of"], z["parent"],
                                   z["parent_gate"], z["single"], z["cuts"])
    p = partition(S, LOCAL[mode])
    if path is not None:
        _save_partition(p, path)
    return p


def build(mode: str, *, workers: int = 1, cache_dir: Path | None = None) -> Atlas:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    S = enumerate_states(mode, workers=workers, cache_dir=cache_dir)
    p = partition_states(S, mode, cache_dir=cache_dir)
    cz = {g: S.image_table(g) for g in ALL_CZS}
    p, audit = label_orbits(p, reference.anchors(mode), cz,
                            reverse_kets=reference.ANCHOR_REVERSED)
    c = census(S, p, ALL_CZS)
    return Atlas(mode, S, p, c, build_graph(c), audit)
