"""Command-line front end.

Exit codes: 0 HOLDS, 1 COUNTEREXAMPLE (or invalid lasso for ``validate``),
2 usage or input error, 3 MODEL_ERROR.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from parcheck.algorithms import ALGORITHMS, ExprPredicate, run
from parcheck.automaton import product
from parcheck.counterexample import (
    ExtractionError,
    lasso_from_json,
    lasso_to_json,
    trace_to_json,
    validate_lasso,
)
from parcheck.engine import ConfigError, Driver, EngineConfig
from parcheck.graph import GraphFormatError, dump_explicit_graph, generate_random_graph, load_explicit_graph
from parcheck.lang import ModelError, ModelSource, parse_model, parse_property
from parcheck.lang.parser import parse_expression
from parcheck.partition import FNV_OFFSET_BASIS, SliceError, SliceSpec
from parcheck.scc import tarjan_oracle
from parcheck.verdict import Result

EXIT = {Result.HOLDS: 0, Result.COUNTEREXAMPLE: 1, Result.MODEL_ERROR: 3}
EXIT_USAGE = 2

DRIVERS = {"det": Driver.DETERMINISTIC, "deterministic": Driver.DETERMINISTIC,
           "par": Driver.PARALLEL, "parallel": Driver.PARALLEL}


class UsageError(Exception):
    pass


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError(f"{text} is not a 64-bit unsigned value")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _worker_list(text: str) -> list:
    try:
        out = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad worker list {text!r}") from None
    if not out or min(out) < 1:
        raise argparse.ArgumentTypeError("worker counts must be positive")
    return out


def _add_engine_flags(p):
    p.add_argument("--workers", type=_positive, default=None,
                   help="worker count (default: $PARCHECK_WORKERS or 1)")
    p.add_argument("--buffer", type=_positive, default=1024, help="states per outgoing buffer")
    p.add_argument("--poll", type=_positive, default=64, help="states processed between inbox polls")
    p.add_argument("--slice", default="", help="descriptor bytes to hash, off:len[,off:len...]")
    p.add_argument("--hash-seed", type=_u64, default=FNV_OFFSET_BASIS, help="FNV-1a offset basis")
    p.add_argument("--driver", choices=sorted(DRIVERS), default="det")
    p.add_argument("--det-seed", type=int, default=0,
                   help="deterministic driver: 0 is round-robin, other values randomise interleavings")


def _add_input(p):
    p.add_argument("input", help=".model or .graph file")
    p.add_argument("--kind", choices=("model", "graph"), help="override the extension-based input kind")
    p.add_argument("--property", help="property section file replacing the model's own (models only)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="parcheck", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check a model or explicit graph")
    _add_input(p)
    p.add_argument("--algorithm", choices=list(ALGORITHMS), default="map-owcty")
    _add_engine_flags(p)
    p.add_argument("--error", dest="error_expr",
                   help="reach only: boolean model expression marking error states")
    p.add_argument("--stats-out", help="write the stats JSON here (default: stdout)")
    p.add_argument("--lasso-out", help="write the lasso or error trace JSON here")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="write a random explicit graph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--deg", type=float, required=True)
    p.add_argument("--pacc", type=float, required=True)
    p.add_argument("--seed", type=_u64, required=True)
    p.add_argument("-o", "--output", help="output file (default: stdout)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("oracle", help="sequential SCC-based ground truth")
    _add_input(p)
    p.add_argument("--lasso-out")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("validate", help="re-check a lasso JSON file against an input")
    _add_input(p)
    p.add_argument("lasso", help="lasso JSON file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("bench", help="time one instance under several worker counts")
    _add_input(p)
    p.add_argument("--algorithm", choices=list(ALGORITHMS), default="reach")
    p.add_argument("--workers-list", type=_worker_list, default=[1, 2, 4])
    p.add_argument("--repeat", type=_positive, default=1, help="runs per worker count; best is kept")
    p.add_argument("--buffer", type=_positive, default=1024)
    p.add_argument("--poll", type=_positive, default=64)
    p.add_argument("--json-out", help="also write the report as JSON")
    p.set_defaults(func=cmd_bench)
    return parser


def input_kind(path: str, override: str | None) -> str:
    if override:
        return override
    suffix = Path(path).suffix
    if suffix == ".model":
        return "model"
    if suffix == ".graph":
        return "graph"
    raise UsageError(f"cannot infer input kind of {path!r}; pass --kind")


def load_source(path: str, kind: str | None = None, property_path: str | None = None):
    """Return ``(source, model)``; ``model`` is None for graph inputs."""
    kind = input_kind(path, kind)
    text = Path(path).read_text(encoding="utf-8")
    if kind == "graph":
        if property_path:
            raise UsageError("--property applies to model inputs only")
        return load_explicit_graph(text), None
    model = parse_model(text)
    prop = model.property
    if property_path:
        prop = parse_property(Path(property_path).read_text(encoding="utf-8"), model)
    return product(ModelSource(model), prop), model


def engine_config(args) -> EngineConfig:
    kwargs = dict(buffer_capacity=args.buffer, poll_interval=args.poll,
                  driver=DRIVERS[args.driver], det_seed=args.det_seed,
                  slice=SliceSpec.parse(args.slice), hash_seed=args.hash_seed)
    if args.workers is not None:
        kwargs["workers"] = args.workers
    return EngineConfig(**kwargs)


def _write_json(path: str | None, obj) -> None:
    text = json.dumps(obj, indent=None if path is None else 2)
    if path is None:
        print(text)
    else:
        Path(path).write_text(text + "\n", encoding="utf-8")


def _error_predicate(args, model):
    if not args.error_expr:
        return None
    if args.algorithm != "reach":
        raise UsageError("--error only applies to --algorithm reach")
    if model is None:
        raise UsageError("--error needs a model input")
    return ExprPredicate(parse_expression(args.error_expr, model))


def cmd_verify(args) -> int:
    source, model = load_source(args.input, args.kind, args.property)
    config = engine_config(args)
    if args.algorithm == "ndfs" and config.workers != 1:
        raise UsageError("ndfs is sequential and requires --workers 1")
    verdict = run(source, args.algorithm, config, _error_predicate(args, model))
    print(f"{verdict.result.value} ({args.algorithm}, {config.workers} worker(s))")
    if verdict.lasso is not None:
        print(f"lasso: prefix {len(verdict.lasso.prefix)}, cycle {len(verdict.lasso.cycle)}")
        if args.lasso_out:
            _write_json(args.lasso_out, lasso_to_json(verdict.lasso, source))
    elif verdict.trace is not None:
        if verdict.error is not None:
            print(f"error: {verdict.error}")
        print(f"trace: {len(verdict.trace)} state(s)")
        if args.lasso_out:
            _write_json(args.lasso_out, trace_to_json(verdict.trace, source, verdict.error))
    _write_json(args.stats_out, verdict.stats.to_dict(verdict.result))
    return EXIT[verdict.result]


def cmd_gen(args) -> int:
    if args.n < 1 or args.deg < 0 or not 0 <= args.pacc <= 1:
        raise UsageError("need n >= 1, deg >= 0 and 0 <= pacc <= 1")
    text = dump_explicit_graph(generate_random_graph(args.n, args.deg, args.pacc, args.seed))
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_oracle(args) -> int:
    source, _ = load_source(args.input, args.kind, args.property)
    verdict = tarjan_oracle(source)
    print(verdict.result.value)
    if verdict.lasso is not None and args.lasso_out:
        _write_json(args.lasso_out, lasso_to_json(verdict.lasso, source))
    return EXIT[verdict.result]


def cmd_validate(args) -> int:
    source, _ = load_source(args.input, args.kind, args.property)
    try:
        lasso = lasso_from_json(json.loads(Path(args.lasso).read_text(encoding="utf-8")))
    except (KeyError, TypeError, ValueError) as err:
        raise UsageError(f"unreadable lasso file: {err}") from None
    problem = validate_lasso(lasso, source)
    print("VALID" if problem is None else f"INVALID: {problem}")
    return 0 if problem is None else 1


def efficiency(t1: float, tk: float, workers: int) -> tuple[float, float]:
    """Speedup over the single-worker time and efficiency in percent."""
    speedup = t1 / tk if tk > 0 else float("inf")
    return speedup, 100.0 * speedup / workers


def cmd_bench(args) -> int:
    source, _ = load_source(args.input, args.kind, args.property)
    rows = []
    base = None
    for k in args.workers_list:
        config = EngineConfig(workers=k, buffer_capacity=args.buffer, poll_interval=args.poll,
                              driver=Driver.PARALLEL)
        best = None
        for _ in range(args.repeat):
            verdict = run(source, args.algorithm, config)
            t = verdict.stats.wall_time_ms / 1000.0
            best = t if best is None else min(best, t)
        if base is None:
            # speedup is relative to the first entry, normally 1 worker
            base = best * args.workers_list[0]
        speedup, eff = efficiency(base, best, k)
        rows.append({"workers": k, "seconds": best, "speedup": speedup, "efficiency": eff,
                     "verdict": verdict.result.value, "states": verdict.stats.states_visited})
    print(f"{'Workers':>7} | {'Runtime (sec)':>13} | {'Speedup':>7} | {'Efficiency':>10}")
    for r in rows:
        print(f"{r['workers']:>7} | {r['seconds']:>13.3f} | {r['speedup']:>7.2f} | {r['efficiency']:>9.0f}%")
    print(f"states: {rows[-1]['states']}, cpus available: {len(os.sched_getaffinity(0))}")
    if args.json_out:
        _write_json(args.json_out, rows)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ConfigError, SliceError, ModelError, GraphFormatError, OSError) as err:
        print(f"parcheck: error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as err:
        # bad numeric environment or parameter values
        print(f"parcheck: error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except ExtractionError as err:
        print(f"parcheck: internal fault: {err}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
