"""Indentation-sensitive parsing expression grammars.

A reference interpreter, static analyses (approximation, well-formedness)
and a pipeline that rewrites grammars to remove alignment and
token-position operators.
"""
from .analysis import (
    ALWAYS, BASELINE, CLAUSE0, MIXED, NEVER, ApproxTable, WfTable, approximate,
    consumption_class, well_formed,
)
from .dsl import (
    expr_from_json, expr_to_json, format_expr, grammar_from_json, grammar_to_json,
    parse_expr_text, parse_grammar_text, pretty_print,
)
from .errors import (
    AmbiguousConsumptionError, GrammarError, GrammarSyntaxError, IndentPegError,
    LexError, NotWellFormedError, PreconditionError, UndefinedNonterminalError,
)
from .expr import (
    EPS, FAIL, Align, Choice, Empty, Expr, Indent, Loc, NonTerminal, Not, Opt, Plus,
    Seq, Star, Terminal, choice, seq,
)
from .fuzz import EquivReport, check_equivalence
from .grammar import Grammar, desugar, validate
from .interpreter import (
    FAILURE, Failure, FuelExhausted, ParseState, Success, Token, initial_state, lex,
    parse, parse_std, parse_strict,
)
from .relations import (
    ANY, EQ, GE, GT, INF, DiffRel, IndentSet, OverApproximationWarning, parse_relation,
)
from .transform import (
    STAGES, eliminate_alignment, eliminate_position, make_disjoint,
    normalize_negations, run_pipeline, simplify, split,
)

__version__ = "0.1.0"
