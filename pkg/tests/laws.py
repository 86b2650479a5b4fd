"""Equivalence laws of the layout operators, as randomized checks.

Each law builds a pair of expressions from random ingredients; the check
parses both from the same random state and token mode and compares the
outcomes exactly.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

from indent_peg import (
    EPS, EQ, Align, Choice, FuelExhausted, Indent, Loc, Not, ParseState, Seq, Star,
    Terminal, approximate, consumption_class, parse_std, well_formed,
)
from indent_peg.analysis import ALWAYS, NEVER
from indent_peg.fuzz import CORE, LAYOUT, random_expr, random_grammar, random_relation, random_state

TERMINALS = ("a", "b")
FEATURES = CORE + LAYOUT + ("star",)


@dataclass
class Ctx:
    rng: random.Random
    grammar: object
    approx: object
    wf: object

    def expr(self, depth=2):
        # well-formed ingredients keep most trials conclusive
        for _ in range(20):
            e = random_expr(self.rng, depth, TERMINALS, sorted(self.grammar.rules), FEATURES)
            if self.wf.verdict(e):
                return e
        return e

    def rel(self, nonnegative=False):
        return random_relation(self.rng, nonnegative)

    def term(self):
        return Terminal(self.rng.choice(TERMINALS))

    def expr_of_class(self, cls, tries=50):
        for _ in range(tries):
            e = self.expr()
            if consumption_class(e, self.approx) == cls:
                return e
        return None


Pair = Optional[Tuple[object, object]]


@dataclass
class Law:
    name: str
    build: Callable[[Ctx], Pair]
    fixed_mode: object = None
    align_false: bool = False


def _loc_star(c):
    # a repeated expression that can succeed without consuming loops forever
    p = c.expr_of_class(ALWAYS)
    if p is None:
        return None
    s = c.rel()
    return Loc(s, Star(p)), Star(Loc(s, p))


def _loc_laws() -> List[Law]:
    return [
        Law("loc_eps", lambda c: (Loc(c.rel(), EPS), EPS)),
        Law("loc_seq", lambda c: (lambda s, p, q: (Loc(s, Seq(p, q)), Seq(Loc(s, p), Loc(s, q))))(
            c.rel(), c.expr(), c.expr())),
        Law("loc_choice", lambda c: (lambda s, p, q: (
            Loc(s, Choice(p, q)), Choice(Loc(s, p), Loc(s, q))))(c.rel(), c.expr(), c.expr())),
        Law("loc_not", lambda c: (lambda s, p: (Loc(s, Not(p)), Not(Loc(s, p))))(c.rel(), c.expr())),
        Law("loc_star", _loc_star),
        Law("loc_ind", lambda c: (lambda s, r, p: (
            Loc(s, Indent(r, p)), Indent(r, Loc(s, p))))(c.rel(), c.rel(), c.expr())),
        Law("loc_aln", lambda c: (lambda s, p: (Loc(s, Align(p)), Align(Loc(s, p))))(c.rel(), c.expr())),
    ]


def _ind_laws() -> List[Law]:
    return [
        Law("ind_eps", lambda c: (Indent(c.rel(), EPS), EPS)),
        Law("ind_choice", lambda c: (lambda r, p, q: (
            Indent(r, Choice(p, q)), Choice(Indent(r, p), Indent(r, q))))(c.rel(), c.expr(), c.expr())),
        Law("ind_not", lambda c: (lambda r, p: (Indent(r, Not(p)), Not(Indent(r, p))))(c.rel(), c.expr())),
        Law("ind_loc", lambda c: (lambda r, s, p: (
            Indent(r, Loc(s, p)), Loc(s, Indent(r, p))))(c.rel(), c.rel(), c.expr())),
    ]


def _aln_laws() -> List[Law]:
    return [
        Law("aln_eps", lambda c: (Align(EPS), EPS)),
        Law("aln_choice", lambda c: (lambda p, q: (
            Align(Choice(p, q)), Choice(Align(p), Align(q))))(c.expr(), c.expr())),
        Law("aln_not", lambda c: (lambda p: (Align(Not(p)), Not(Align(p))))(c.expr())),
        Law("aln_loc", lambda c: (lambda s, p: (Align(Loc(s, p)), Loc(s, Align(p))))(c.rel(), c.expr())),
    ]


def _absorption_laws() -> List[Law]:
    def compose(c):
        s, r, p = c.rel(True), c.rel(True), c.expr()
        return Indent(s, Indent(r, p)), Indent(s.compose(r), p)

    return [
        Law("ind_identity", lambda c: (lambda p: (Indent(EQ, p), p))(c.expr())),
        Law("ind_composition", compose),
        Law("ind_aln_commute", lambda c: (lambda r, p: (
            Indent(r, Align(p)), Align(Indent(r, p))))(c.rel(), c.expr())),
        Law("aln_idempotent", lambda c: (lambda p: (Align(Align(p)), Align(p)))(c.expr())),
        Law("loc_inner_wins", lambda c: (lambda t, s, p: (
            Loc(t, Loc(s, p)), Loc(s, p)))(c.rel(), c.rel(), c.expr())),
        Law("aln_terminal", lambda c: (lambda a: (Align(a), Loc(EQ, a)))(c.term())),
    ]


def _guarded_laws() -> List[Law]:
    def never(c):
        p = c.expr_of_class(NEVER)
        if p is None:
            return None
        q = c.expr()
        return Align(Seq(p, q)), Seq(Align(p), Align(q))

    def always(c):
        p = c.expr_of_class(ALWAYS)
        if p is None:
            return None
        q = c.expr()
        return Align(Seq(p, q)), Seq(Align(p), q)

    def ind_never(c):
        p = c.expr_of_class(NEVER)
        if p is None:
            return None
        r, q = c.rel(), c.expr()
        return Indent(r, Seq(p, q)), Seq(Indent(r, p), Indent(r, q))

    return [
        Law("aln_seq_nonconsuming_head", never),
        Law("aln_seq_consuming_head", always),
        Law("ind_seq_nonconsuming_head", ind_never),
    ]


def _terminal_position_law() -> List[Law]:
    return [Law("loc_terminal_as_ind", lambda c: (lambda s, a: (Loc(s, a), Indent(s, a)))(
        c.rel(), c.term()), fixed_mode=EQ, align_false=True)]


FAMILIES = {
    "token mode distributes": _loc_laws(),
    "indentation distributes": _ind_laws(),
    "alignment distributes": _aln_laws(),
    "absorption": _absorption_laws(),
    "guarded concatenation": _guarded_laws(),
    "terminal position": _terminal_position_law(),
}
ALL_LAWS = [law for laws in FAMILIES.values() for law in laws]


def _outcomes(g, lhs, rhs, mode, st):
    for fuel in (3000, 30000):
        a = parse_std(g, lhs, mode, st, fuel=fuel)
        b = parse_std(g, rhs, mode, st, fuel=fuel)
        if not isinstance(a, FuelExhausted) and not isinstance(b, FuelExhausted):
            return a, b
    return None


def _wf_grammar(rng):
    while True:
        g = random_grammar(rng, n_rules=2, depth=2, features=FEATURES)
        approx = approximate(g)
        wf = well_formed(g, approx)
        if all(wf.rules.values()):
            return g, approx, wf


def check_law(law: Law, trials: int = 500, seed: int = 0, max_attempts: int = 4000):
    """Run ``trials`` conclusive trials; returns (trials done, list of counterexamples)."""
    rng = random.Random(f"{law.name}/{seed}")
    done, bad, attempts = 0, [], 0
    g = approx = wf = None
    stats = {}
    while done < trials and attempts < max_attempts:
        attempts += 1
        if attempts % 20 == 1:
            g, approx, wf = _wf_grammar(rng)
        pair = law.build(Ctx(rng, g, approx, wf))
        if pair is None:
            continue
        lhs, rhs = pair
        mode = law.fixed_mode or random_relation(rng)
        st = random_state(rng, TERMINALS)
        if law.align_false:
            st = ParseState(st.rest, st.indents, False)
        res = _outcomes(g, lhs, rhs, mode, st)
        if res is None:
            continue
        done += 1
        stats[type(res[0]).__name__] = stats.get(type(res[0]).__name__, 0) + 1
        if res[0] != res[1]:
            bad.append((str(lhs), str(rhs), str(mode), str(st), res))
    check_law.last_stats = stats
    return done, bad
