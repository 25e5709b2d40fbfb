"""Guarded-command modelling language: syntax, static checks and state space."""
from parcheck.lang.ast import Binary, Lit, Model, Process, Transition, Unary, Var, VarDecl, variables_of
from parcheck.lang.interp import Layout, ModelErrorMarker, ModelSource, evaluate, initial_state, successors
from parcheck.lang.parser import (
    DomainError,
    DuplicateDeclaration,
    ModelError,
    ModelSyntaxError,
    ModelTypeError,
    UndeclaredIdentifier,
    parse_expression,
    parse_model,
    parse_property,
)
from parcheck.lang.printer import format_expr, format_model

__all__ = [
    "Binary", "DomainError", "DuplicateDeclaration", "Layout", "Lit", "Model", "ModelError",
    "ModelErrorMarker", "ModelSource", "ModelSyntaxError", "ModelTypeError", "Process",
    "Transition", "UndeclaredIdentifier", "Unary", "Var", "VarDecl", "evaluate", "format_expr",
    "format_model", "initial_state", "parse_expression", "parse_model", "parse_property", "successors", "variables_of",
]
