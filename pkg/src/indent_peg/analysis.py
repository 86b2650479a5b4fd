"""Static analyses: approximation semantics and well-formedness.

The approximation of an expression is the set of outcome codes it may
produce: ``0`` (succeed without consuming), ``1`` (succeed consuming input)
and ``-1`` (fail).  Well-formedness conservatively guarantees that parsing
terminates; it rejects left recursion.

Both are least fixpoints.  Nonterminal entries are iterated to stability
starting from the empty table; the entry of any other expression is then
a structural function of its children and of the nonterminal entries, so
tables answer queries for arbitrary expressions over the grammar, not only
for nodes that occur in it.
"""
from __future__ import annotations

from typing import Dict, List, Optional, Tuple

from .expr import (
    Align, Choice, Empty, Expr, Indent, Loc, NonTerminal, Not, Opt, Plus, Seq,
    Star, Terminal, subexpressions,
)
from .grammar import Grammar

BASELINE = "baseline"
CLAUSE0 = "clause0"
VARIANTS = (BASELINE, CLAUSE0)

NEVER = "never"
ALWAYS = "always"
MIXED = "mixed"

_EPS = frozenset({0})
_TERM = frozenset({1, -1})
_NONE = frozenset()


def _seq(p: frozenset, q: frozenset) -> frozenset:
    out = set()
    p_ok = p - {-1}
    q_ok = q - {-1}
    if 0 in p and 0 in q:
        out.add(0)
    if p_ok and q_ok and (1 in p_ok or 1 in q_ok):
        out.add(1)
    if (p_ok and -1 in q) or -1 in p:
        out.add(-1)
    return frozenset(out)


def _choice(p: frozenset, q: frozenset) -> frozenset:
    out = p - {-1}
    if -1 in p:
        out |= q
    return frozenset(out)


def _not(p: frozenset) -> frozenset:
    out = set()
    if -1 in p:
        out.add(0)
    if 0 in p or 1 in p:
        out.add(-1)
    return frozenset(out)


def _star(p: frozenset) -> frozenset:
    if -1 not in p:
        return _NONE
    return frozenset({0, 1}) if 1 in p else _EPS


class ApproxTable:
    """Least-fixpoint approximation table of a grammar.

    ``table[e]`` is the frozenset of codes for any expression ``e`` over
    the grammar; ``table.rule(name)`` the entry of a nonterminal.  With
    ``variant="clause0"``, ``-1`` is added to every nonempty entry.
    """

    def __init__(self, grammar: Grammar, variant: str = BASELINE):
        if variant not in VARIANTS:
            raise ValueError(f"unknown variant {variant!r}")
        self.grammar = grammar
        self.variant = variant
        self._rules: Dict[str, frozenset] = {name: _NONE for name in grammar.rules}
        changed = True
        while changed:
            changed = False
            memo: Dict[Expr, frozenset] = {}
            for name, body in grammar.rules.items():
                new = self._eval(body, memo)
                if new != self._rules[name]:
                    self._rules[name] = new
                    changed = True
                    memo = {}
        self._cache: Dict[Expr, frozenset] = {}

    def rule(self, name: str) -> frozenset:
        return self._rules[name]

    @property
    def rules(self) -> Dict[str, frozenset]:
        return dict(self._rules)

    def __getitem__(self, e: Expr) -> frozenset:
        return self._eval(e, self._cache)

    def _eval(self, e: Expr, memo: Dict[Expr, frozenset]) -> frozenset:
        got = memo.get(e)
        if got is not None:
            return got
        t = type(e)
        if t is Empty:
            out = _EPS
        elif t is Terminal:
            out = _TERM
        elif t is NonTerminal:
            out = self._rules[e.name]
        elif t is Seq:
            out = _seq(self._eval(e.left, memo), self._eval(e.right, memo))
        elif t is Choice:
            out = _choice(self._eval(e.first, memo), self._eval(e.second, memo))
        elif t is Not:
            out = _not(self._eval(e.inner, memo))
        elif t is Star:
            out = _star(self._eval(e.inner, memo))
        elif t is Plus:
            p = self._eval(e.inner, memo)
            out = _seq(p, self._clause0(_star(p)))
        elif t is Opt:
            out = _choice(self._eval(e.inner, memo), _EPS)
        elif t in (Indent, Loc, Align):
            out = self._eval(e.inner, memo)
        else:
            raise TypeError(f"not an expression: {e!r}")
        out = self._clause0(out)
        memo[e] = out
        return out

    def _clause0(self, s: frozenset) -> frozenset:
        if self.variant == CLAUSE0 and s and -1 not in s:
            return s | {-1}
        return s


def approximate(g: Grammar, variant: str = BASELINE) -> ApproxTable:
    return ApproxTable(g, variant)


def consumption_class(e: Expr, approx: ApproxTable) -> str:
    """``never`` if ``e`` cannot consume on success, ``always`` if it cannot
    succeed without consuming, ``mixed`` otherwise."""
    entry = approx[e]
    if 1 not in entry:
        return NEVER
    if 0 not in entry:
        return ALWAYS
    return MIXED


def _short(e: Expr, limit: int = 60) -> str:
    text = str(e)
    return text if len(text) <= limit else text[: limit - 3] + "..."


class WfTable:
    """Least-fixpoint well-formedness verdicts, with explanations."""

    def __init__(self, grammar: Grammar, approx: ApproxTable):
        self.grammar = grammar
        self.approx = approx
        self._rules: Dict[str, bool] = {name: False for name in grammar.rules}
        changed = True
        while changed:
            changed = False
            memo: Dict[Expr, bool] = {}
            for name, body in grammar.rules.items():
                if not self._rules[name] and self._eval(body, memo):
                    self._rules[name] = True
                    changed = True
                    memo = {}
        self._cache: Dict[Expr, bool] = {}

    def rule(self, name: str) -> bool:
        return self._rules[name]

    @property
    def rules(self) -> Dict[str, bool]:
        return dict(self._rules)

    def verdict(self, e: Expr) -> bool:
        return self._eval(e, self._cache)

    __getitem__ = verdict

    def _eval(self, e: Expr, memo: Dict[Expr, bool]) -> bool:
        got = memo.get(e)
        if got is not None:
            return got
        t = type(e)
        if t is Empty or t is Terminal:
            out = True
        elif t is NonTerminal:
            out = self._rules[e.name]
        elif t is Seq:
            out = self._eval(e.left, memo) and (
                0 not in self.approx[e.left] or self._eval(e.right, memo))
        elif t is Choice:
            out = self._eval(e.first, memo) and (
                -1 not in self.approx[e.first] or self._eval(e.second, memo))
        elif t is Star or t is Plus:
            out = 0 not in self.approx[e.inner] and self._eval(e.inner, memo)
        elif t is Indent or t is Loc:
            out = e.rel.is_total and self._eval(e.inner, memo)
        elif t in (Not, Align, Opt):
            out = self._eval(e.inner, memo)
        else:
            raise TypeError(f"not an expression: {e!r}")
        memo[e] = out
        return out

    def failures(self) -> List[Tuple[str, str]]:
        """``(where, witness)`` for every rule body or start with an ill-formed node."""
        out = []
        for where, body in list(self.grammar.rules.items()) + [("start", self.grammar.start)]:
            for node in subexpressions(body):
                if not self.verdict(node):
                    path = (where,) if where in self.grammar.rules else ()
                    out.append((where, self.witness(node, path)))
                    break
        return out

    @property
    def grammar_ok(self) -> bool:
        return all(self.verdict(n) for n in self.grammar.nodes())

    def witness(self, e: Expr, path: Tuple[str, ...] = ()) -> Optional[str]:
        """Why ``e`` is not well-formed; ``path`` lists rules already being explained."""
        if self.verdict(e):
            return None
        return "; ".join(self._explain(e, path))

    def _explain(self, e: Expr, path: Tuple[str, ...]) -> List[str]:
        t = type(e)
        if t is NonTerminal:
            if e.name in path:
                cycle = path[path.index(e.name):] + (e.name,)
                return ["recursion cycle " + " -> ".join(cycle)]
            return [f"rule {e.name} is not well-formed"] + self._explain(
                self.grammar.rules[e.name], path + (e.name,))
        if t is Seq:
            if not self.verdict(e.left):
                return self._explain(e.left, path)
            return [f"{_short(e.left)} may succeed without consuming input, "
                    f"so {_short(e.right)} must be well-formed"] + self._explain(e.right, path)
        if t is Choice:
            if not self.verdict(e.first):
                return self._explain(e.first, path)
            return [f"{_short(e.first)} may fail, so {_short(e.second)} must be well-formed"
                    ] + self._explain(e.second, path)
        if t is Star or t is Plus:
            if 0 in self.approx[e.inner]:
                return [f"{_short(e)} repeats an expression that may succeed "
                        f"without consuming input"]
            return self._explain(e.inner, path)
        if (t is Indent or t is Loc) and not e.rel.is_total:
            return [f"relation {e.rel} in {_short(e)} is not total"]
        return self._explain(e.inner, path)


def well_formed(g: Grammar, approx: Optional[ApproxTable] = None) -> WfTable:
    if approx is None:
        approx = approximate(g)
    return WfTable(g, approx)
