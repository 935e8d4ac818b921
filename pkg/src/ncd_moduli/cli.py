"""Command-line frontend.

Subcommands cover the whole pipeline: divisor stratification, building
enumeration, map-type validation, dimension calculus, level systems, and
gluing problems.  ``--json`` switches to a machine envelope
{"version": "ncd-moduli/1", "command": ..., "result": ...}; file arguments
accept ``-`` for standard input.  Exit codes: 0 success, 1 validation
failure, 2 malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import building as bd
from . import dimension as dm
from . import divisor as dv
from . import levelsys as ls
from . import maptype as mp
from .fixtures import CATALOG

FORMAT_VERSION = "ncd-moduli/1"


class InputError(Exception):
    pass


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e}") from e


def _parse_json(text: str, what: str) -> dict:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"malformed {what}: {e}") from e


def _load_divisor(path: str) -> dv.CombinatorialDivisor:
    obj = _parse_json(_read_text(path), "divisor file")
    try:
        return dv.divisor_from_dict(obj)
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"malformed divisor file: {e}") from e


def _load_maptype(path: str) -> mp.MapType:
    obj = _parse_json(_read_text(path), "map-type file")
    try:
        return mp.maptype_from_dict(obj)
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"malformed map-type file: {e}") from e


def _emit(args, command: str, result, human_lines) -> None:
    if args.json:
        print(json.dumps(
            {"version": FORMAT_VERSION, "command": command, "result": result},
            indent=2,
            sort_keys=True,
        ))
    else:
        for line in human_lines:
            print(line)


# -- subcommands -----------------------------------------------------------------


def _cmd_validate(args) -> int:
    mt = _load_maptype(args.file)
    report = {}
    report["structure"] = mp.validate_structure(mt)
    report["naive"] = mp.check_naive(mt) if not report["structure"] else None
    report["broken_cylinders"] = (
        mp.check_broken_cylinders(mt) if not report["structure"] else None
    )
    enhanced_ok = None
    enhanced_failure = None
    stable = None
    if not report["structure"] and not report["naive"] and not report["broken_cylinders"]:
        try:
            res = mp.check_enhanced(mt)
            enhanced_ok = res.satisfiable
            enhanced_failure = res.failure
        except ValueError as e:
            enhanced_ok = False
            enhanced_failure = str(e)
        stable = mp.check_relative_stability(mt)
    ok = (
        not report["structure"]
        and not report["naive"]
        and not report["broken_cylinders"]
        and enhanced_ok is not False
        and stable is not False
    )
    result = {
        "valid": ok,
        "structure": report["structure"],
        "naive": report["naive"],
        "broken_cylinders": report["broken_cylinders"],
        "enhanced": enhanced_ok,
        "enhanced_failure": enhanced_failure,
        "relatively_stable": stable,
        "degree_ok": None if report["structure"] else mp.degree_check(mt),
    }
    lines = [f"valid: {ok}"]
    for key in ("structure", "naive", "broken_cylinders"):
        if report[key]:
            lines += [f"{key} violations:"] + [f"  - {v}" for v in report[key]]
    if enhanced_ok is not None:
        lines.append(f"enhanced matching: {'satisfiable' if enhanced_ok else enhanced_failure}")
    if stable is not None:
        lines.append(f"relatively stable: {stable}")
    _emit(args, "validate", result, lines)
    return 0 if ok else 1


def _cmd_strata(args) -> int:
    d = _load_divisor(args.file)
    problems = dv.validate(d)
    if problems:
        _emit(args, "strata", {"valid": False, "violations": problems},
              ["invalid divisor:"] + [f"  - {v}" for v in problems])
        return 1
    depths = [args.k] if args.k is not None else sorted({s.depth for s in d.strata if s.depth >= 1})
    table = {}
    lines = []
    for k in depths:
        try:
            c = dv.stratum_counts(d, k)
        except ValueError as e:
            raise InputError(str(e)) from e
        table[str(k)] = {
            "resolution_of_Vk": c.resolution_of_vk,
            "double_resolution": c.double_resolution,
            "resolution_of_Wk1": c.resolution_of_wk1,
        }
        lines.append(
            f"depth {k}: resolution {c.resolution_of_vk}, cover {c.double_resolution}, "
            f"next divisor {c.resolution_of_wk1}"
        )
    _emit(args, "strata", {"valid": True, "counts": table}, lines)
    return 0


def _cmd_building(args) -> int:
    d = _load_divisor(args.file)
    problems = dv.validate(d)
    if problems:
        raise InputError("invalid divisor: " + "; ".join(problems))
    try:
        if args.multi:
            levels = [int(x) for x in args.multi.split(",")]
            b = bd.build_multi(d, levels)
        else:
            b = bd.build(d, args.m)
    except ValueError as e:
        raise InputError(str(e)) from e
    classes = b.piece_classes()
    lines = [
        f"mode: {b.mode}, m = {b.m}",
        f"pieces: {b.connected_piece_count()} connected "
        f"({len(b.pieces)} orbit records, {len(classes)} classes)",
    ]
    for c in classes:
        lines.append(
            f"  depth {c.depth} levels {list(c.levels)}: {c.connected_pieces} piece(s) "
            f"over {', '.join(c.strata)}"
        )
    lines.append(f"divisor strata: {len(b.divisor_strata)}, attaching pairs: {len(b.attaching)}")
    _emit(args, "building", bd.building_to_dict(b), lines)
    return 0


def _cmd_dim(args) -> int:
    if args.file:
        mt = _load_maptype(args.file)
        if args.dimX is None:
            raise InputError("--dimX is required with a map-type file")
        inp = dm.maptype_dimension_input(mt, args.dimX)
        node_depths = [
            mt.record(f.start_point).depth
            for f in mp.contraction(mt)
            if f.kind == "node"
        ]
        gap = dm.naive_gap(node_depths) if node_depths else 0
        try:
            codim = dm.stratum_codim(mt)
        except ls.LevelSystemError as e:
            raise InputError(str(e)) from e
        result = {
            "expected_dim": dm.expected_dim(inp),
            "naive_gap": gap,
            "stratum_codim": codim,
        }
        lines = [
            f"expected dimension: {result['expected_dim']}",
            f"naive matching gap: {gap}",
            f"stratum codimension: {codim}",
        ]
    else:
        missing = [k for k in ("c1A", "dimX", "chi", "ell", "AV") if getattr(args, k) is None]
        if missing:
            raise InputError(f"missing {', '.join('--' + k for k in missing)} (or give a map-type file)")
        inp = dm.DimensionInput(args.c1A, args.dimX, args.chi, args.ell, args.AV)
        result = {"expected_dim": dm.expected_dim(inp)}
        lines = [f"expected dimension: {result['expected_dim']}"]
    _emit(args, "dim", result, lines)
    return 0


def _beta_label(key) -> str:
    return f"b{key}" if isinstance(key, int) else f"b({key[0]},{key[1]})"


def _cmd_levels(args) -> int:
    mt = _load_maptype(args.file)
    try:
        sys_ = ls.build_system(mt)
    except ls.LevelSystemError as e:
        print(f"level system cannot be built: {e}", file=sys.stderr)
        return 1
    witness = ls.feasible_positive(sys_)
    dim = ls.torus_dim(sys_)
    rels = ls.beta_relations(sys_)
    result = {
        "alphas": list(sys_.alphas),
        "betas": [b if isinstance(b, int) else list(b) for b in sys_.betas],
        "equations": [
            {
                "base": eq.base,
                "direction": eq.direction,
                "level": eq.level,
                "nodes": list(eq.nodes),
                "multiplicity": eq.multiplicity,
            }
            for eq in sys_.equations
        ],
        "feasible": witness is not None,
        "witness": None
        if witness is None
        else {str(k): str(v) for k, v in witness.items()},
        "torus_dim": dim,
        "beta_relations": [[str(x) for x in rel] for rel in rels],
    }
    lines = ["level system:"] + [f"  {line}" for line in sys_.describe()]
    if witness is None:
        lines.append("no strictly positive solution")
    else:
        lines.append("positive witness: " + ", ".join(f"{k}={v}" for k, v in witness.items()))
    lines.append(f"torus dimension: {dim}")
    for rel in rels:
        terms = " + ".join(
            f"{c}*{_beta_label(b)}" for c, b in zip(rel, sys_.betas) if c
        )
        lines.append(f"relation: {terms} = 0")
    _emit(args, "levels", result, lines)
    return 0 if witness is not None else 1


def _cmd_glue(args) -> int:
    obj = _parse_json(_read_text(args.file), "gluing file")
    try:
        gp = ls.gluing_from_dict(obj)
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"malformed gluing file: {e}") from e
    try:
        sol = ls.solve_gluing(gp)
    except KeyError as e:
        raise InputError(str(e)) from e
    result = {
        "consistent": sol.consistent,
        "total_count": sol.total_count,
        "nodes": [
            {
                "id": n.node,
                "count": n.count,
                "solutions": [
                    {"primes": {str(p): str(e) for p, e in mu.mag}, "arg": str(mu.arg)}
                    for mu in n.solutions
                ],
                "failure": n.failure,
            }
            for n in sol.nodes
        ],
    }
    lines = []
    for n in sol.nodes:
        if n.failure:
            lines.append(f"{n.node}: inconsistent ({n.failure})")
        else:
            lines.append(f"{n.node}: {n.count} solution(s)")
            for mu in n.solutions:
                lines.append(f"  {mu}")
    lines.append(f"total branches: {sol.total_count}")
    _emit(args, "glue", result, lines)
    return 0 if sol.consistent else 1


def _cmd_example(args) -> int:
    if args.name not in CATALOG:
        raise InputError(
            f"unknown fixture {args.name!r}; available: {', '.join(sorted(CATALOG))}"
        )
    entry = CATALOG[args.name]
    text = entry.text()
    if args.emit and args.emit != "-":
        with open(args.emit, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {entry.kind} fixture {args.name} to {args.emit}", file=sys.stderr)
    elif args.json:
        print(json.dumps(
            {"version": FORMAT_VERSION, "command": "example", "result": json.loads(text)},
            indent=2,
            sort_keys=True,
        ))
    else:
        sys.stdout.write(text)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ncd-moduli",
        description="combinatorics of relatively stable maps over a normal crossings divisor",
    )
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="run all map-type validators")
    p.add_argument("file")
    p.set_defaults(fn=_cmd_validate)

    p = sub.add_parser("strata", help="stratification counts of a divisor")
    p.add_argument("file")
    p.add_argument("--k", type=int, default=None)
    p.set_defaults(fn=_cmd_strata)

    p = sub.add_parser("building", help="enumerate a level building")
    p.add_argument("file")
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--multi", default=None, help="comma-separated levels per component")
    p.set_defaults(fn=_cmd_building)

    p = sub.add_parser("dim", help="expected dimension and codimension")
    p.add_argument("file", nargs="?", default=None)
    p.add_argument("--c1A", type=int, default=None)
    p.add_argument("--dimX", type=int, default=None)
    p.add_argument("--chi", type=int, default=None)
    p.add_argument("--ell", type=int, default=None)
    p.add_argument("--AV", type=int, default=None)
    p.set_defaults(fn=_cmd_dim)

    p = sub.add_parser("levels", help="level system, feasibility, torus dimension")
    p.add_argument("file")
    p.set_defaults(fn=_cmd_levels)

    p = sub.add_parser("glue", help="solve a gluing problem")
    p.add_argument("file")
    p.set_defaults(fn=_cmd_glue)

    p = sub.add_parser("example", help="print or write a built-in fixture")
    p.add_argument("name")
    p.add_argument("--emit", default=None, help="write to a file instead of stdout")
    p.set_defaults(fn=_cmd_example)

    return parser


def run(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    try:
        return args.fn(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
