"""Command-line interface.

Exit codes: 0 success, 1 I/O error, 2 malformed document, 3 invalid forest
or weights, 4 analysis failure, 5 support is forkless (no counterexample),
6 counterexample search failed, 7 harness falsification.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys

from . import __version__
from .documents import dump_document, forest_to_dict, jsonable, load_document, vertex_name
from .errors import (
    CycleError,
    DocumentError,
    ForestShiftError,
    NonzeroRootWeight,
    SearchFailed,
    SupportForkless,
    ValidationError,
)
from .harness import FAMILIES, MODES, theorem_harness
from .hyponormal import (
    DEFAULT_TOL,
    classify,
    construct_counterexample,
    is_hyponormal,
    is_power_hyponormal,
    local_vs_oracle_check,
)
from .order import forest_power, leafless_support, strictly_thicker
from .shift import (
    bound_norm_sq,
    depth_window,
    is_proper,
    materialize,
    power_weights,
    prune_zero_weights,
    validate_weights,
)

log = logging.getLogger("forestshift")

EXIT_OK, EXIT_IO, EXIT_PARSE, EXIT_INVALID, EXIT_ANALYSIS = 0, 1, 2, 3, 4
EXIT_FORKLESS, EXIT_SEARCH, EXIT_FALSIFIED = 5, 6, 7


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(jsonable(obj), indent=2) + "\n")
    sys.stdout.flush()


def _fail(code: int, exc: Exception) -> int:
    report = {"ok": False, "error": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, CycleError):
        report["cycle"] = [vertex_name(v) for v in exc.cycle]
    if isinstance(exc, NonzeroRootWeight):
        report["vertex"] = vertex_name(exc.vertex)
    if isinstance(exc, SearchFailed):
        report["tried"] = exc.tried
    _emit(report)
    print(f"error: {exc}", file=sys.stderr)
    return code


def _load(path: str):
    if path == "-":
        text = sys.stdin.read()
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return load_document(text)


def _verdict_json(v):
    return {
        "hyponormal": v.hyponormal,
        "method": v.method,
        "exact": v.exact,
        "witnesses": [{"parent": w.parent, "lhs": w.lhs, "kind": w.kind} for w in v.witnesses],
    }


def counterexample_json(rep) -> dict:
    return {
        "fork_vertex": rep.fork_vertex,
        "fork_children": list(rep.fork_children),
        "params": {"t": rep.params[0], "a": rep.params[1], "b": rep.params[2]},
        "ratios": rep.ratios,
        "hypo_check": _verdict_json(rep.hypo_check),
        "square_check": _verdict_json(rep.square_check),
        "square_min_eigenvalue": rep.square_min_eigenvalue,
        "document": forest_to_dict(rep.forest, rep.weights),
    }


# -- subcommands --------------------------------------------------------------

def cmd_validate(args) -> int:
    forest, lam = _load(args.path)
    _emit({
        "ok": True,
        "explicit_vertices": len(forest.explicit),
        "rays": len(forest.ray_ids),
        "roots": sorted(map(str, forest.roots())),
        "weights": lam is not None,
    })
    return EXIT_OK


def cmd_analyze(args) -> int:
    forest, lam = _load(args.path)
    cls = classify(forest)
    report = {
        "ok": True,
        "support_forkless": cls.support_forkless,
        "fork_witness": cls.fork_witness,
        "leafless": forest.is_leafless(),
        "forkless": forest.is_forkless(),
        "hyponormal": None,
        "powers": [],
        "witnesses": [],
        "counterexample": None,
    }
    if lam is not None:
        if args.proper_only:
            forest, lam = prune_zero_weights(forest, lam)
            report["pruned"] = True
        verdict = is_hyponormal(forest, lam, args.tol)
        powers = is_power_hyponormal(forest, lam, args.max_power, args.tol)
        report.update(
            bounded=True,
            bound_norm_sq=bound_norm_sq(forest, lam),
            proper=is_proper(forest, lam),
            exact=lam.is_exact,
            hyponormal=verdict.hyponormal,
            witnesses=_verdict_json(verdict)["witnesses"],
            powers=[p.hyponormal for p in powers],
            power_witnesses={k + 1: _verdict_json(p)["witnesses"]
                             for k, p in enumerate(powers) if not p.hyponormal},
            oracle_agrees=local_vs_oracle_check(forest, lam, args.window_depth, args.tol),
        )
    if not cls.support_forkless:
        try:
            report["counterexample"] = counterexample_json(
                construct_counterexample(forest, window_depth=args.window_depth, tol=args.tol))
        except SearchFailed as exc:
            report["counterexample"] = {"error": str(exc)}
    _emit(report)
    return EXIT_OK


def cmd_transform(args) -> int:
    forest, lam = _load(args.path)
    op = args.op
    if op == "power":
        if lam is not None:
            forest, lam = power_weights(forest, lam, args.k)
        else:
            forest = forest_power(forest, args.k)
    elif op == "support":
        forest = leafless_support(forest)
        if lam is not None:
            try:
                lam = validate_weights(forest, lam)
            except ValidationError as exc:
                log.warning("dropping weights: %s", exc)
                lam = None
    elif op == "prune":
        if lam is None:
            raise ValidationError("prune needs a weight system")
        forest, lam = prune_zero_weights(forest, lam)
    elif op == "thicker":
        thicker = strictly_thicker(forest)
        if thicker is None:
            log.warning("forest is a single tree; no strictly thicker forest exists")
        else:
            forest = thicker
            if lam is not None:
                lam = validate_weights(forest, lam)
    sys.stdout.write(dump_document(forest, lam) + "\n")
    return EXIT_OK


def cmd_counterexample(args) -> int:
    forest, _ = _load(args.path)
    rep = construct_counterexample(forest, window_depth=args.window_depth, tol=args.tol)
    _emit({"ok": True, **counterexample_json(rep)})
    return EXIT_OK


def cmd_harness(args) -> int:
    seed = args.seed
    env = os.environ.get("FOREST_SHIFT_SEED")
    if env is not None:
        try:
            seed = int(env)
        except ValueError:
            raise ValidationError(f"FOREST_SHIFT_SEED={env!r} is not an integer") from None
    summary = theorem_harness({
        "family": args.family,
        "samples": args.samples,
        "weights_per_forest": args.weights_per_forest,
        "max_power": args.max_power,
        "seed": seed,
        "mode": args.mode,
        "tol": args.tol,
    })
    _emit(summary)
    return EXIT_OK if summary["ok"] else EXIT_FALSIFIED


def cmd_matrix(args) -> int:
    forest, lam = _load(args.path)
    if lam is None:
        raise ValidationError("matrix export needs a weight system")
    if args.power > 1:
        forest, lam = power_weights(forest, lam, args.power)
    window = depth_window(forest, lam, args.window_depth)
    m = materialize(forest, lam, window)
    labels = [str(vertex_name(v)) for v in window.vertices]
    rows = [[jsonable(complex(x)) if m.dtype.kind == "c" else float(x) for x in row] for row in m]
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow([""] + labels)
        for lab, row in zip(labels, m):
            w.writerow([lab] + [str(x) for x in row])
        sys.stdout.write(buf.getvalue())
    else:
        _emit({"vertices": labels, "ragged": sorted(map(str, window.ragged)), "matrix": rows})
    return EXIT_OK


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="forestshift", description="Directed forests and weighted shifts.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def analysis_opts(sp):
        sp.add_argument("--tol", type=float, default=DEFAULT_TOL, help="numerical tolerance (default 1e-9)")
        sp.add_argument("--window-depth", type=int, default=8, help="periods of each ray in oracle windows")

    sp = sub.add_parser("validate", help="check a forest document")
    sp.add_argument("path", help="JSON document, or - for stdin")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("analyze", help="hyponormality and power report")
    sp.add_argument("path")
    sp.add_argument("--max-power", type=int, default=4)
    sp.add_argument("--proper-only", action="store_true", help="analyze after pruning zero weights")
    analysis_opts(sp)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("transform", help="emit a transformed document")
    sp.add_argument("path")
    tsub = sp.add_subparsers(dest="op", required=True)
    pw = tsub.add_parser("power", help="k-th power of forest and weights")
    pw.add_argument("k", type=int)
    tsub.add_parser("support", help="leafless support")
    tsub.add_parser("prune", help="turn zero-weight vertices into roots")
    tsub.add_parser("thicker", help="a strictly thicker forest")
    sp.set_defaults(func=cmd_transform)

    sp = sub.add_parser("counterexample", help="hyponormal shift with non-hyponormal square")
    sp.add_argument("path")
    analysis_opts(sp)
    sp.set_defaults(func=cmd_counterexample)

    sp = sub.add_parser("harness", help="randomized theorem check")
    sp.add_argument("--family", choices=FAMILIES, default="forkless")
    sp.add_argument("--samples", type=int, default=10)
    sp.add_argument("--weights-per-forest", type=int, default=5)
    sp.add_argument("--max-power", type=int, default=4)
    sp.add_argument("--seed", type=int, default=0, help="overridden by FOREST_SHIFT_SEED")
    sp.add_argument("--mode", choices=MODES, default="both")
    sp.add_argument("--tol", type=float, default=DEFAULT_TOL)
    sp.set_defaults(func=cmd_harness)

    sp = sub.add_parser("matrix", help="export the shift matrix on a depth window")
    sp.add_argument("path")
    sp.add_argument("--power", type=int, default=1)
    sp.add_argument("--window-depth", type=int, default=2)
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.set_defaults(func=cmd_matrix)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    for name in ("k", "max_power", "power"):
        if getattr(args, name, 1) < 1:
            return _fail(EXIT_ANALYSIS, ValueError(f"--{name.replace('_', '-')} must be at least 1"))
    if getattr(args, "samples", 0) < 0:
        return _fail(EXIT_ANALYSIS, ValueError("--samples must be non-negative"))
    try:
        return args.func(args)
    except OSError as exc:
        return _fail(EXIT_IO, exc)
    except DocumentError as exc:
        return _fail(EXIT_PARSE, exc)
    except ValidationError as exc:
        return _fail(EXIT_INVALID, exc)
    except SupportForkless as exc:
        return _fail(EXIT_FORKLESS, exc)
    except SearchFailed as exc:
        return _fail(EXIT_SEARCH, exc)
    except ForestShiftError as exc:
        return _fail(EXIT_ANALYSIS, exc)


if __name__ == "__main__":
    sys.exit(main())
