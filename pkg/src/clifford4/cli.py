"""Command-line interface: ``clifford4 <command> [options]``.

Exit status: 0 success, 1 verification failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .atlas import MODES, Atlas, build, default_cache_dir, enumerate_states
from .checks import Report, verify_orbits, verify_populations, verify_states, verify_transitions
from .closure import save
from .exact_state import ExactState
from .gates import GateSyntaxError
from .kets import KetSyntaxError, parse_state
from .labels import AmbiguousLabel
from .exact_state import NormalizationViolation
from .populations import distinct_supports, population_census
from .transitions import NotEnumerated, RealModeViolation, compare_with_reference, diameter

EXIT_OK, EXIT_VERIFY, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _state(text: str, reverse: bool) -> ExactState:
    text = text.strip()
    if len(text) == 4 and set(text) <= {"0", "1"}:
        text = f"|{text}>"
    try:
        return parse_state(text, reverse_kets=reverse)
    except (KetSyntaxError, NormalizationViolation) as exc:
        raise UsageError(f"cannot parse state {text!r}: {exc}") from None


def _write(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _cache(args) -> Path | None:
    return None if args.no_cache else (args.cache_dir or default_cache_dir())


def _atlas(args) -> Atlas:
    return build(args.mode, workers=args.workers, cache_dir=_cache(args))


def _finish(args, rep: Report | None) -> int:
    if rep is None:
        return EXIT_OK
    for line in rep.lines():
        print(line, file=sys.stderr)
    return EXIT_OK if rep.ok else EXIT_VERIFY


def cmd_enumerate(args) -> int:
    seed = _state(args.seed, args.reverse_kets) if args.seed else None
    S = enumerate_states(args.mode, seed=seed, workers=args.workers,
                         capacity=args.capacity, cache_dir=_cache(args))
    if args.out:
        save(S, args.out)
    print(len(S))
    rep = None
    if args.verify:
        rep = verify_states(_atlas(args)) if seed is None or seed == ExactState.zero() else Report()
    return _finish(args, rep)


def cmd_orbits(args) -> int:
    atlas = _atlas(args)
    p = atlas.partition
    for o in p.orbits:
        print(f"{o.id:3d}  {o.label:12s} {o.size:7d}  {o.entropy}")
    if args.out:
        Path(args.out).write_text("\n".join(p.report_lines()) + "\n")
    for chk in atlas.anchors:
        if not chk.ok:
            where = f" (lies in {chk.found})" if chk.found else ""
            print(f"warning: anchor {chk.label} {chk.status}{where}", file=sys.stderr)
    return _finish(args, verify_orbits(atlas) if args.verify else None)


def cmd_transitions(args) -> int:
    atlas = _atlas(args)
    if args.out:
        Path(args.out).write_text(atlas.census.to_tsv())
    if args.graph_out:
        g = atlas.graph
        Path(args.graph_out).write_text(g.to_json() if args.format == "json" else g.to_dot())
    if not args.verify:          # --verify reports these itself
        for d in compare_with_reference(atlas.census, warn=False):
            print(f"warning: discrepancy with published table: {d}", file=sys.stderr)
    print(f"diameter: {diameter(atlas.graph)}")
    return _finish(args, verify_transitions(atlas) if args.verify else None)


def cmd_connect(args) -> int:
    a = _state(args.state_a, args.reverse_kets)
    b = _state(args.state_b, args.reverse_kets)
    atlas = _atlas(args)
    con = atlas.connector(args.entangler)
    try:
        circ = con.connect(a, b)
        dist = con.distance(a, b)
    except (NotEnumerated, RealModeViolation) as exc:
        raise UsageError(str(exc)) from None
    print(str(circ) if len(circ) else "(empty circuit)")
    print(f"cnot count: {circ.cnot_count()} (orbit distance {dist})")
    print("verified")           # connect() raises unless the replay is exact
    return EXIT_OK


def cmd_census(args) -> int:
    atlas = _atlas(args)
    counts = population_census(atlas.states.rows)
    if atlas.mode == "real":
        print("# supplementary: real-amplitude states (not tabulated in the source)")
    print("size\tcount")
    for size, n in counts.items():
        print(f"{size}\t{n}")
    print(f"total\t{sum(counts.values())}")
    if args.supports:
        doc = [list(s.basis_indices) for s in distinct_supports(atlas.states.rows)]
        _write(json.dumps(doc) + "\n", args.out)
    return _finish(args, verify_populations(atlas) if args.verify else None)


def cmd_export(args) -> int:
    atlas = _atlas(args)
    if args.format == "tsv":
        text = atlas.census.to_tsv()
    elif args.format == "json":
        text = atlas.graph.to_json()
    else:
        text = atlas.graph.to_dot()
    _write(text, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=MODES, default="complex")
    common.add_argument("--out", help="output file (default: stdout where applicable)")
    common.add_argument("--format", choices=("dot", "json", "tsv"), default="dot")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--capacity", type=int, default=2 ** 20)
    common.add_argument("--verify", action="store_true",
                        help="run the invariant checks; exit 1 on any failure")
    common.add_argument("--cache-dir", type=Path, default=None)
    common.add_argument("--no-cache", action="store_true")
    common.add_argument("--reverse-kets", action="store_true",
                        help="read ket strings right to left (qubit 1 rightmost)")
    common.add_argument("-v", "--verbose", action="store_true")

    ap = argparse.ArgumentParser(prog="clifford4", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", parents=[common], help="enumerate all states")
    p.add_argument("--seed", help="seed state (ket sum or 4 bits); default 0000")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("orbits", parents=[common], help="orbit table and JSON-lines report")
    p.set_defaults(func=cmd_orbits)

    p = sub.add_parser("transitions", parents=[common], help="CZ census, graph and diameter")
    p.add_argument("--graph-out", help="write the orbit graph (DOT or JSON per --format)")
    p.set_defaults(func=cmd_transitions)

    p = sub.add_parser("connect", parents=[common], help="circuit mapping one state to another")
    p.add_argument("state_a")
    p.add_argument("state_b")
    p.add_argument("--entangler", choices=("cnot", "cz"), default="cnot")
    p.set_defaults(func=cmd_connect)

    p = sub.add_parser("census", parents=[common], help="population (support) census")
    p.add_argument("--supports", action="store_true", help="also emit every support as JSON")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("export", parents=[common], help="export graph (dot/json) or census (tsv)")
    p.set_defaults(func=cmd_export)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.workers < 1:
        print("error: --workers must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, GateSyntaxError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AmbiguousLabel as exc:          # e.g. a tampered cache
        print(f"error: orbit labelling failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
