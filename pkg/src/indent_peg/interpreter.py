"""Reference interpreter for indentation-sensitive PEGs.

A parse threads an operation state ``(rest, indents, align)`` through the
expression: the remaining tokens, the set of indentation-baseline
candidates, and the alignment flag.  The token mode (a :class:`DiffRel`)
says how a token's column must relate to the baseline while the flag is
down.

Evaluation runs on an explicit stack of generator frames: each semantic
rule is a generator that yields sub-parse requests and receives their
outcomes.  Every rule application costs one unit of fuel; running out of
fuel is reported as :class:`FuelExhausted`, the executable stand-in for
divergence.
"""
from __future__ import annotations

import os
import re
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple, Union

from .errors import LexError
from .expr import (
    Align, Choice, Empty, Expr, Indent, Loc, NonTerminal, Not, Opt, Plus, Seq,
    Star, Terminal,
)
from .grammar import Grammar
from .relations import ANY, NATURALS, DiffRel, IndentSet

DEFAULT_FUEL = 10 ** 6


def default_fuel() -> int:
    value = os.environ.get("INDENT_PEG_FUEL")
    return int(value) if value else DEFAULT_FUEL


@dataclass(frozen=True)
class Token:
    name: str
    col: int

    def __post_init__(self):
        if not self.name:
            raise ValueError("empty token name")
        if self.col < 0:
            raise ValueError(f"negative column {self.col}")

    def __str__(self) -> str:
        return f"{self.name}@{self.col}"


@dataclass(frozen=True)
class ParseState:
    rest: Tuple[Token, ...]
    indents: IndentSet = NATURALS
    align: bool = False

    def __post_init__(self):
        if not isinstance(self.rest, tuple):
            object.__setattr__(self, "rest", tuple(self.rest))

    def dominates(self, other: ParseState) -> bool:
        """Pointwise order: ``self >= other``.

        ``other.rest`` is a suffix of ``self.rest``, ``other.indents`` is a
        subset of ``self.indents``, and ``other.align`` implies ``self.align``.
        """
        n, k = len(self.rest), len(other.rest)
        return (k <= n and self.rest[n - k:] == other.rest
                and other.indents.issubset(self.indents)
                and (self.align or not other.align))

    def __str__(self) -> str:
        toks = " ".join(map(str, self.rest)) or "eps"
        return f"({toks}, {self.indents}, {str(self.align).lower()})"


@dataclass(frozen=True)
class Success:
    state: ParseState


@dataclass(frozen=True)
class Failure:
    pass


@dataclass(frozen=True)
class FuelExhausted:
    spent: int


Outcome = Union[Success, Failure, FuelExhausted]
FAILURE = Failure()


def initial_state(tokens: Iterable[Token]) -> ParseState:
    return ParseState(tuple(tokens), NATURALS, False)


_ANNOTATED_RE = re.compile(r"(.+)@(\d+)\Z")


def lex(text: str, terminals: Optional[Iterable[str]] = None,
        mode: str = "raw") -> Tuple[Token, ...]:
    """Split input text into tokens.

    ``raw``: whitespace-separated words, each at its 0-based column within
    its line; every word must be one of ``terminals`` (if given).
    ``annotated``: whitespace-separated ``name@col`` items.
    """
    known = None if terminals is None else set(terminals)
    out = []
    if mode == "annotated":
        for item in text.split():
            m = _ANNOTATED_RE.match(item)
            if m is None:
                raise LexError(f"malformed token annotation {item!r} (expected name@col)")
            out.append(Token(m.group(1), int(m.group(2))))
        return tuple(out)
    if mode != "raw":
        raise ValueError(f"unknown lexing mode {mode!r}")
    for lineno, line in enumerate(text.splitlines(), start=1):
        for m in re.finditer(r"\S+", line):
            word = m.group()
            if known is not None and word not in known:
                raise LexError(f"unknown token {word!r} at line {lineno}, column {m.start()}")
            out.append(Token(word, m.start()))
    return tuple(out)


class _Interpreter:
    def __init__(self, grammar: Grammar, approx=None):
        self.rules = grammar.rules
        self.approx = approx
        self.handlers = {
            NonTerminal: self._nonterminal,
            Seq: self._seq,
            Choice: self._choice if approx is None else self._strict_choice,
            Not: self._not,
            Star: self._star,
            Plus: self._plus,
            Opt: self._opt,
            Indent: self._indent,
            Loc: self._loc,
            Align: self._align,
        }

    def run(self, e: Expr, mode: DiffRel, state: ParseState, fuel: int) -> Outcome:
        # internally a state is (tokens, pos, indents, align) over the full
        # token tuple, so consuming a token does not copy the input
        tokens = state.rest
        out = self._run(e, mode, (tokens, 0, state.indents, state.align), fuel)
        if out is FAILURE or isinstance(out, FuelExhausted):
            return out
        _, pos, indents, align = out
        return Success(ParseState(tokens[pos:], indents, align))

    def _run(self, e, mode, state, fuel):
        budget = fuel
        stack = []
        request = (e, mode, state)
        value = None
        while True:
            if request is not None:
                if budget <= 0:
                    return FuelExhausted(fuel)
                budget -= 1
                expr, tau, st = request
                kind = type(expr)
                if kind is Terminal:
                    value = _terminal(expr, tau, st)
                elif kind is Empty:
                    value = st
                else:
                    stack.append(self.handlers[kind](expr, tau, st))
                    value = None
                request = None
            if not stack:
                return value
            try:
                request = stack[-1].send(value)
            except StopIteration as stop:
                stack.pop()
                value = stop.value

    # each handler is a generator: ``yield (expr, mode, state)`` runs a
    # sub-parse and evaluates to its result, a state or FAILURE

    def _nonterminal(self, e, tau, st):
        return (yield (self.rules[e.name], tau, st))

    def _seq(self, e, tau, st):
        r = yield (e.left, tau, st)
        if r is FAILURE:
            return r
        return (yield (e.right, tau, r))

    def _choice(self, e, tau, st):
        r = yield (e.first, tau, st)
        if r is not FAILURE:
            return r
        return (yield (e.second, tau, st))

    def _strict_choice(self, e, tau, st):
        r = yield (e.first, tau, st)
        if r is FAILURE:
            return (yield (e.second, tau, st))
        if -1 in self.approx[e.first]:
            yield (e.second, tau, st)
        return r

    def _not(self, e, tau, st):
        r = yield (e.inner, tau, st)
        return st if r is FAILURE else FAILURE

    def _star(self, e, tau, st):
        while True:
            r = yield (e.inner, tau, st)
            if r is FAILURE:
                return st
            st = r

    def _plus(self, e, tau, st):
        r = yield (e.inner, tau, st)
        if r is FAILURE:
            return r
        return (yield (Star(e.inner), tau, r))

    def _opt(self, e, tau, st):
        r = yield (e.inner, tau, st)
        return st if r is FAILURE else r

    def _indent(self, e, tau, st):
        rel = e.rel
        toks, pos, indents, align = st
        r = yield (e.inner, tau, (toks, pos, rel.preimage(indents), align))
        if r is FAILURE:
            return r
        return (toks, r[1], indents & rel.image(r[2]), r[3])

    def _loc(self, e, tau, st):
        return (yield (e.inner, e.rel, st))

    def _align(self, e, tau, st):
        toks, pos, indents, align = st
        r = yield (e.inner, tau, (toks, pos, indents, True))
        if r is FAILURE:
            return r
        return (toks, r[1], r[2], align and r[3])


def _terminal(e: Terminal, tau: DiffRel, st) -> object:
    toks, pos, indents, align = st
    if pos >= len(toks) or toks[pos].name != e.name:
        return FAILURE
    i = toks[pos].col
    if align:
        if i not in indents:
            return FAILURE
        return (toks, pos + 1, IndentSet(((i, i),)), False)
    # i must be tau-related to some candidate baseline
    if i not in tau.preimage(indents):
        return FAILURE
    return (toks, pos + 1, indents & tau.image(IndentSet(((i, i),))), False)


def parse_std(g: Grammar, e: Expr, mode: DiffRel, state: ParseState,
              fuel: Optional[int] = None) -> Outcome:
    """Parse ``e`` (an expression over ``g``) from ``state`` in token mode ``mode``."""
    if fuel is None:
        fuel = default_fuel()
    return _Interpreter(g).run(e, mode, state, fuel)


def parse_strict(g: Grammar, e: Expr, mode: DiffRel, state: ParseState,
                 approx, fuel: Optional[int] = None) -> Outcome:
    """Like :func:`parse_std` but with the strict choice rule.

    When the first alternative succeeds and ``approx`` says it may fail,
    the second alternative is parsed as well (and its result discarded).
    """
    if fuel is None:
        fuel = default_fuel()
    return _Interpreter(g, approx).run(e, mode, state, fuel)


def parse(g: Grammar, tokens: Sequence[Token], mode: DiffRel = ANY,
          fuel: Optional[int] = None, strict: bool = False, approx=None) -> Outcome:
    """Parse a token sequence from the start expression with state ``(tokens, N, false)``."""
    st = initial_state(tokens)
    if strict:
        if approx is None:
            from .analysis import approximate
            approx = approximate(g)
        return parse_strict(g, g.start, mode, st, approx, fuel)
    return parse_std(g, g.start, mode, st, fuel)


def outcome_code(before: ParseState, outcome: Outcome) -> Optional[int]:
    """0 / 1 / -1 for unchanged success, consuming success, failure."""
    if isinstance(outcome, Success):
        return 0 if outcome.state == before else 1
    if isinstance(outcome, Failure):
        return -1
    return None


def outcome_to_json(outcome: Outcome) -> dict:
    if isinstance(outcome, Success):
        st = outcome.state
        return {
            "outcome": "success",
            "remaining": [{"t": t.name, "col": t.col} for t in st.rest],
            "indents": st.indents.to_json(),
            "align": st.align,
        }
    if isinstance(outcome, Failure):
        return {"outcome": "failure"}
    return {"outcome": "fuel_exhausted", "fuel": outcome.spent}


def outcome_from_json(data: dict) -> Outcome:
    kind = data["outcome"]
    if kind == "success":
        return Success(ParseState(
            tuple(Token(t["t"], t["col"]) for t in data["remaining"]),
            IndentSet.from_json(data["indents"]),
            data["align"]))
    if kind == "failure":
        return FAILURE
    return FuelExhausted(data["fuel"])


def format_outcome(outcome: Outcome) -> str:
    if isinstance(outcome, Success):
        return f"success {outcome.state}"
    if isinstance(outcome, Failure):
        return "failure"
    return f"fuel exhausted after {outcome.spent} steps"
