"""Verification procedures and the common entry point ``run``."""
from __future__ import annotations

import time

from parcheck.algorithms.bledge import bledge_procedure
from parcheck.algorithms.common import InternalDiagnostic, Outcome
from parcheck.algorithms.maxacc import map_owcty_procedure, map_procedure
from parcheck.algorithms.ndfs import nested_dfs_procedure
from parcheck.algorithms.negc import negc_procedure
from parcheck.algorithms.owcty import owcty_procedure
from parcheck.algorithms.reach import AcceptingPredicate, ExprPredicate, reach_procedure
from parcheck.counterexample import ExtractionError, bfs_path, validate_lasso
from parcheck.engine import ConfigError, Engine, EngineConfig, ModelErrorFound
from parcheck.verdict import Result, Stats, Verdict

ALGORITHMS = {
    "reach": reach_procedure,
    "ndfs": nested_dfs_procedure,
    "owcty": owcty_procedure,
    "map": map_procedure,
    "map-owcty": map_owcty_procedure,
    "negc": negc_procedure,
    "bledge": bledge_procedure,
}
CYCLE_ALGORITHMS = tuple(a for a in ALGORITHMS if a != "reach")
DISTRIBUTED_CYCLE_ALGORITHMS = tuple(a for a in CYCLE_ALGORITHMS if a != "ndfs")


def run(source, algorithm: str, config: EngineConfig | None = None,
        error_predicate=None) -> Verdict:
    """Run ``algorithm`` over ``source``.

    Cycle detectors answer whether an accepting cycle is reachable; ``reach``
    answers whether a state satisfying ``error_predicate`` is reachable (with
    no predicate it only explores). Model errors met during exploration end
    the run with a MODEL_ERROR verdict whatever the algorithm.
    """
    if algorithm not in ALGORITHMS:
        raise ConfigError(f"unknown algorithm {algorithm!r}; choose from {', '.join(ALGORITHMS)}")
    config = config or EngineConfig()
    if algorithm == "ndfs" and config.workers != 1:
        raise ConfigError("ndfs is sequential; it needs exactly one worker")
    t0 = time.perf_counter()
    if algorithm != "reach" and not source.has_accepting():
        # no accepting state at all: nothing to explore
        stats = Stats()
        stats.wall_time_ms = (time.perf_counter() - t0) * 1000.0
        return Verdict(Result.HOLDS, stats)

    if algorithm == "ndfs":
        stats = Stats()
        try:
            outcome = nested_dfs_procedure(source, stats)
        except ModelErrorFound as err:
            outcome = _model_error(source, err)
    else:
        engine = Engine(source, config)
        try:
            try:
                if algorithm == "reach":
                    outcome = reach_procedure(engine, source, error_predicate)
                else:
                    outcome = ALGORITHMS[algorithm](engine, source)
            except ModelErrorFound as err:
                outcome = _model_error(source, err)
            stats = engine.stats()
        finally:
            engine.close()

    stats.outer_iterations = outcome.iterations
    for key, value in outcome.extra.items():
        setattr(stats, key, value)
    if outcome.lasso is not None:
        problem = validate_lasso(outcome.lasso, source)
        if problem is not None:
            raise ExtractionError(f"{algorithm} produced an invalid lasso: {problem}")
    stats.wall_time_ms = (time.perf_counter() - t0) * 1000.0
    return Verdict(outcome.result, stats, lasso=outcome.lasso, trace=outcome.trace,
                   error=outcome.error)


def _model_error(source, err: ModelErrorFound) -> Outcome:
    state = err.state
    trace = bfs_path(source, source.initial(), lambda v: v == state) or [state]
    return Outcome(Result.MODEL_ERROR, trace=trace, error=err.marker)


def reachability(source, config=None, error_predicate=None) -> Verdict:
    return run(source, "reach", config, error_predicate)


def nested_dfs(source, config=None) -> Verdict:
    return run(source, "ndfs", config)


def owcty(source, config=None) -> Verdict:
    return run(source, "owcty", config)


def maximal_accepting_predecessors(source, config=None) -> Verdict:
    return run(source, "map", config)


def map_owcty(source, config=None) -> Verdict:
    return run(source, "map-owcty", config)


def negc(source, config=None) -> Verdict:
    return run(source, "negc", config)


def bledge(source, config=None) -> Verdict:
    return run(source, "bledge", config)


__all__ = [
    "ALGORITHMS", "AcceptingPredicate", "CYCLE_ALGORITHMS", "DISTRIBUTED_CYCLE_ALGORITHMS",
    "ExprPredicate", "InternalDiagnostic", "Outcome", "bledge", "map_owcty",
    "maximal_accepting_predecessors", "negc", "nested_dfs", "owcty", "reachability", "run",
]
