"""Random grammars, states and token streams; bounded equivalence checking.

Everything takes an explicit :class:`random.Random` so runs are
reproducible from a seed.  The distributions are heuristics chosen to make
small grammars exercise every construct, not derived from anything deeper.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .expr import (
    EPS, Align, Choice, Expr, Indent, Loc, NonTerminal, Not, Opt, Plus,
    Seq, Star, Terminal,
)
from .grammar import Grammar
from .interpreter import (
    FuelExhausted, Outcome, ParseState, Token, format_outcome,
    initial_state, outcome_to_json, parse_std,
)
from .relations import ANY, EQ, GE, GT, INF, DiffRel, IndentSet

CORE = ("seq", "choice", "not")
LAYOUT = ("ind", "loc", "aln")

_NAMED_TOTAL = (EQ, GT, GE, ANY)


def random_relation(rng: random.Random, nonnegative: bool = False) -> DiffRel:
    """A relation in Rel+ (total); optionally with only nonnegative differences."""
    if rng.random() < 0.6:
        if nonnegative:
            return rng.choice((EQ, GT, GE))
        return rng.choice(_NAMED_TOTAL)
    hi = rng.choice((0, 1, 2, 3, INF))
    if nonnegative:
        lo = rng.randint(0, 2 if hi == INF else int(hi))
    else:
        lo = rng.choice((-INF, -2, -1, 0, 1))
        if lo > hi:
            lo = 0
    return DiffRel(lo, hi)


def random_expr(rng: random.Random, depth: int, terminals: Sequence[str],
                nonterminals: Sequence[str] = (), features=CORE + LAYOUT,
                p_leaf: float = 0.3) -> Expr:
    if depth <= 0 or rng.random() < p_leaf:
        r = rng.random()
        if r < 0.12:
            return EPS
        if nonterminals and r < 0.45:
            return NonTerminal(rng.choice(nonterminals))
        return Terminal(rng.choice(terminals))
    kind = rng.choice(features)

    def sub():
        return random_expr(rng, depth - 1, terminals, nonterminals, features, p_leaf)

    if kind == "seq":
        return Seq(sub(), sub())
    if kind == "choice":
        return Choice(sub(), sub())
    if kind == "not":
        return Not(sub())
    if kind == "star":
        return Star(sub())
    if kind == "plus":
        return Plus(sub())
    if kind == "opt":
        return Opt(sub())
    if kind == "ind":
        return Indent(random_relation(rng), sub())
    if kind == "loc":
        return Loc(random_relation(rng), sub())
    if kind == "aln":
        return Align(sub())
    raise ValueError(f"unknown feature {kind!r}")


def random_grammar(rng: random.Random, n_rules: int = 2, depth: int = 3,
                   terminals: Sequence[str] = ("a", "b"), features=CORE + LAYOUT,
                   start_depth: Optional[int] = None) -> Grammar:
    names = [chr(ord("A") + i) for i in range(n_rules)]
    rules = {n: random_expr(rng, depth, terminals, names, features) for n in names}
    start = random_expr(rng, depth if start_depth is None else start_depth,
                        terminals, names, features)
    return Grammar(rules, start)


def random_indents(rng: random.Random, max_col: int = 6) -> IndentSet:
    r = rng.random()
    if r < 0.35:
        return IndentSet.naturals()
    if r < 0.45:
        return IndentSet.empty()
    if r < 0.65:
        return IndentSet.from_intervals([(rng.randint(0, max_col), INF)])
    cols = rng.sample(range(max_col + 1), rng.randint(1, 3))
    return IndentSet.of(*cols)


def random_tokens(rng: random.Random, alphabet: Sequence[str], max_len: int = 5,
                  max_col: int = 6) -> Tuple[Token, ...]:
    n = rng.randint(0, max_len)
    return tuple(Token(rng.choice(alphabet), rng.randint(0, max_col)) for _ in range(n))


def random_state(rng: random.Random, alphabet: Sequence[str], max_len: int = 5,
                 max_col: int = 6) -> ParseState:
    return ParseState(random_tokens(rng, alphabet, max_len, max_col),
                      random_indents(rng, max_col), rng.random() < 0.3)


def walk_tokens(rng: random.Random, g: Grammar, max_len: int = 5, max_col: int = 6,
                max_depth: int = 12) -> Tuple[Token, ...]:
    """Token stream from a random walk over the grammar's structure.

    Such streams are often at least partially accepted, which keeps
    differential testing away from the all-failure regime.
    """
    names: List[str] = []

    def walk(e: Expr, depth: int):
        if len(names) >= max_len or depth > max_depth:
            return
        t = type(e)
        if t is Terminal:
            names.append(e.name)
        elif t is NonTerminal:
            walk(g.rules[e.name], depth + 1)
        elif t is Seq:
            walk(e.left, depth + 1)
            walk(e.right, depth + 1)
        elif t is Choice:
            walk(e.first if rng.random() < 0.5 else e.second, depth + 1)
        elif t in (Star, Plus, Opt):
            reps = rng.randint(1 if t is Plus else 0, 1 if t is Opt else 2)
            for _ in range(reps):
                walk(e.inner, depth + 1)
        elif t in (Indent, Loc, Align):
            walk(e.inner, depth + 1)
        # negations and eps emit nothing

    walk(g.start, 0)
    cols: List[int] = []
    for _ in names:
        if cols and rng.random() < 0.4:
            cols.append(rng.choice(cols))
        else:
            cols.append(rng.randint(0, max_col))
    return tuple(Token(n, c) for n, c in zip(names, cols))


def same_outcome(a: Outcome, b: Outcome) -> bool:
    """Equal results, or both out of fuel (both treated as divergence)."""
    if isinstance(a, FuelExhausted) or isinstance(b, FuelExhausted):
        return isinstance(a, FuelExhausted) and isinstance(b, FuelExhausted)
    return a == b


@dataclass
class Disagreement:
    tokens: Tuple[Token, ...]
    mode: DiffRel
    outcome_a: Outcome
    outcome_b: Outcome

    def to_json(self) -> dict:
        return {
            "input": " ".join(map(str, self.tokens)),
            "mode": str(self.mode),
            "a": outcome_to_json(self.outcome_a),
            "b": outcome_to_json(self.outcome_b),
        }

    def __str__(self) -> str:
        toks = " ".join(map(str, self.tokens)) or "(empty)"
        return (f"input {toks} in mode {self.mode}: "
                f"A {format_outcome(self.outcome_a)}, B {format_outcome(self.outcome_b)}")


@dataclass
class EquivReport:
    trials: int
    seed: int
    disagreements: List[Disagreement] = field(default_factory=list)
    exhausted: int = 0

    @property
    def equivalent(self) -> bool:
        return not self.disagreements

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "trials": self.trials,
            "seed": self.seed,
            "exhausted_both": self.exhausted,
            "disagreements": [d.to_json() for d in self.disagreements],
        }


def check_equivalence(ga: Grammar, gb: Grammar, trials: int = 1000, seed: int = 0,
                      max_len: int = 5, max_col: int = 6, mode: DiffRel = ANY,
                      fuel: Optional[int] = None, walk_fraction: float = 0.3,
                      alphabet: Optional[Sequence[str]] = None) -> EquivReport:
    """Parse random token streams with both grammars' start expressions and compare.

    A bounded empirical check of equivalence, not a proof.  Roughly
    ``walk_fraction`` of the streams come from random walks over one of the
    two grammars.  Deterministic for a given seed.
    """
    rng = random.Random(seed)
    if alphabet is None:
        alphabet = sorted(ga.terminals | gb.terminals)
    alphabet = list(alphabet) or ["a"]
    report = EquivReport(trials, seed)
    seen = set()
    for _ in range(trials):
        if rng.random() < walk_fraction:
            tokens = walk_tokens(rng, ga if rng.random() < 0.5 else gb, max_len, max_col)
        else:
            tokens = random_tokens(rng, alphabet, max_len, max_col)
        st = initial_state(tokens)
        oa = parse_std(ga, ga.start, mode, st, fuel)
        ob = parse_std(gb, gb.start, mode, st, fuel)
        if not same_outcome(oa, ob):
            if tokens not in seen:
                seen.add(tokens)
                report.disagreements.append(Disagreement(tokens, mode, oa, ob))
        elif isinstance(oa, FuelExhausted):
            report.exhausted += 1
    report.disagreements.sort(key=lambda d: (len(d.tokens), [(t.name, t.col) for t in d.tokens]))
    return report
