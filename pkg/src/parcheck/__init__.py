"""Explicit-state LTL model checking over hash-partitioned workers."""
from parcheck.algorithms import ALGORITHMS, reachability, run
from parcheck.automaton import PropertyAutomaton, ProductSource, classify_weak, product
from parcheck.counterexample import Lasso, validate_lasso
from parcheck.engine import Driver, Engine, EngineConfig
from parcheck.graph import ExplicitGraph, generate_random_graph, load_explicit_graph
from parcheck.lang import ModelSource, parse_model, parse_property
from parcheck.partition import SliceSpec, fnv1a64, make_partition
from parcheck.scc import tarjan_oracle
from parcheck.verdict import Result, Stats, Verdict

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS", "Driver", "Engine", "EngineConfig", "ExplicitGraph", "Lasso", "ModelSource",
    "ProductSource", "PropertyAutomaton", "Result", "SliceSpec", "Stats", "Verdict",
    "classify_weak", "fnv1a64", "generate_random_graph", "load_explicit_graph", "make_partition",
    "parse_model", "parse_property", "product", "reachability", "run", "tarjan_oracle",
    "validate_lasso",
]
