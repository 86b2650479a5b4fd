"""Semantics-preserving grammar transformations.

The pipeline, in order::

    desugar -> disjoint -> negnorm -> (well-formedness check) -> split
            -> dealign -> deloc

``disjoint`` rewrites every ``p / q`` to ``p / !p q``; ``negnorm`` gives
every non-atomic negated expression its own rule; ``split`` separates each
expression into a part that succeeds only without consuming input (g0)
and a part that succeeds only by consuming (g1); ``dealign`` pushes
alignment down to terminals and nonterminals; ``deloc`` does the same for
token-position operators and finally turns ``loc(r, "a")`` into
``ind(r, "a")``.  The result is only meaningful when parsed in token mode
``=`` with the alignment flag initially false, which is recorded in the
grammar's ``requires`` header.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

from .analysis import (
    ALWAYS, BASELINE, NEVER, ApproxTable, approximate, consumption_class,
    well_formed,
)
from .errors import AmbiguousConsumptionError, NotWellFormedError, PreconditionError
from .expr import (
    ATOMS, EPS, FAIL, Align, Choice, Empty, Expr, Indent, Loc, NonTerminal, Not,
    Opt, Plus, Seq, Star, Terminal, contains, map_bottom_up,
)
from .grammar import DELOC_REQUIREMENTS, RESERVED_SEP, Grammar, desugar, fresh_name
from .relations import EQ, DiffRel

STAGES = ("desugar", "disjoint", "negnorm", "split", "dealign", "deloc")


def _map_rules(g: Grammar, fn: Callable[[str], Callable[[Expr], Expr]]) -> Dict[str, Expr]:
    return {name: map_bottom_up(body, fn(name)) for name, body in g.rules.items()}


def _require_desugared(g: Grammar, what: str) -> None:
    for n in g.nodes():
        if isinstance(n, (Star, Plus, Opt)):
            raise PreconditionError(f"{what} needs a repetition-free grammar; "
                                    f"found {n} (run desugar first)")


def make_disjoint(g: Grammar) -> Grammar:
    """Rewrite every choice ``p / q`` into ``p / !p q``."""
    _require_desugared(g, "make_disjoint")

    def fn(e: Expr) -> Expr:
        if isinstance(e, Choice):
            return Choice(e.first, Seq(Not(e.first), e.second))
        return e

    return Grammar(_map_rules(g, lambda _: fn), map_bottom_up(g.start, fn), g.requires)


def negations_atomic(g: Grammar) -> bool:
    return all(isinstance(n.inner, ATOMS) for n in g.nodes() if isinstance(n, Not))


def normalize_negations(g: Grammar) -> Grammar:
    """Give every non-atomic negated expression ``p`` a rule ``N <- p``; ``!p`` becomes ``!N``."""
    _require_desugared(g, "normalize_negations")
    taken = set(g.rules)
    made: Dict[Expr, str] = {}
    extra: Dict[str, Expr] = {}

    def for_owner(owner: str):
        def fn(e: Expr) -> Expr:
            if isinstance(e, Not) and not isinstance(e.inner, ATOMS):
                name = made.get(e.inner)
                if name is None:
                    name = fresh_name(f"{owner}{RESERVED_SEP}neg{len(made) + 1}", taken)
                    taken.add(name)
                    made[e.inner] = name
                    extra[name] = e.inner
                return Not(NonTerminal(name))
            return e
        return fn

    rules = _map_rules(g, for_owner)
    start = map_bottom_up(g.start, for_owner("start"))
    rules.update(extra)
    return Grammar(rules, start, g.requires)


class Splitter:
    """The g0/g1 splitting functions over a prepared grammar.

    ``g0(e)`` succeeds exactly when ``e`` succeeds without consuming input;
    ``g1(e)`` exactly when ``e`` succeeds consuming some.  ``g0`` of a
    nonterminal ``X`` is the companion rule ``X__g0 <- g0(d(X))``, created on
    first use; ``g1(X)`` is ``X`` itself, whose rule becomes ``g1(d(X))``.
    """

    def __init__(self, g: Grammar, approx: ApproxTable):
        self.grammar = g
        self.approx = approx
        self.companions: Dict[str, str] = {}
        self.companion_rules: Dict[str, Expr] = {}
        self._taken = set(g.rules)
        self._pending: List[str] = []

    def companion(self, name: str) -> str:
        comp = self.companions.get(name)
        if comp is None:
            comp = fresh_name(f"{name}{RESERVED_SEP}g0", self._taken)
            self._taken.add(comp)
            self.companions[name] = comp
            self._pending.append(name)
        return comp

    def g0(self, e: Expr) -> Expr:
        t = type(e)
        if t is Empty:
            return EPS
        if t is Terminal:
            return FAIL
        if t is NonTerminal:
            return NonTerminal(self.companion(e.name))
        if t is Seq:
            if 0 in self.approx[e.left]:
                return Seq(self.g0(e.left), self.g0(e.right))
            return FAIL
        if t is Choice:
            if -1 in self.approx[e.first]:
                return Choice(self.g0(e.first), self.g0(e.second))
            return self.g0(e.first)
        if t is Not:
            return Not(Choice(self.g1(e.inner), self.g0(e.inner)))
        if t is Indent or t is Loc:
            return t(e.rel, self.g0(e.inner))
        if t is Align:
            return Align(self.g0(e.inner))
        raise PreconditionError(f"cannot split {e}")

    def g1(self, e: Expr) -> Expr:
        t = type(e)
        if t is Empty:
            return FAIL
        if t is Terminal or t is NonTerminal:
            return e
        if t is Seq:
            p, q = e.left, e.right
            g1p, g1q = self.g1(p), self.g1(q)
            return Choice(Seq(g1p, g1q),
                          Choice(Seq(g1p, self.g0(q)), Seq(self.g0(p), g1q)))
        if t is Choice:
            if -1 in self.approx[e.first]:
                return Choice(self.g1(e.first), self.g1(e.second))
            return self.g1(e.first)
        if t is Not:
            return FAIL
        if t is Indent or t is Loc:
            return t(e.rel, self.g1(e.inner))
        if t is Align:
            return Align(self.g1(e.inner))
        raise PreconditionError(f"cannot split {e}")

    def finish(self) -> Dict[str, Expr]:
        """Define every companion requested so far (and those they request)."""
        while self._pending:
            name = self._pending.pop(0)
            self.companion_rules[self.companions[name]] = self.g0(self.grammar.rules[name])
        return self.companion_rules


def check_well_formed(g: Grammar, approx: ApproxTable, context: str = "grammar") -> None:
    wf = well_formed(g, approx)
    if not wf.grammar_ok:
        where, witness = wf.failures()[0]
        raise NotWellFormedError(f"{context} is not well-formed (in {where})", witness)


def split(g: Grammar, variant: str = BASELINE) -> Grammar:
    """Build the split grammar: ``X <- g1(d(X))``, start ``g1(s) / g0(s)``."""
    _require_desugared(g, "split")
    if not negations_atomic(g):
        raise PreconditionError("split needs negations applied to atoms (run negnorm first)")
    approx = approximate(g, variant)
    check_well_formed(g, approx)
    sp = Splitter(g, approx)
    rules = {name: sp.g1(body) for name, body in g.rules.items()}
    start = Choice(sp.g1(g.start), sp.g0(g.start))
    rules.update(sp.finish())
    return Grammar(rules, start, g.requires)


class _Pusher:
    """Shared machinery of alignment and position elimination."""

    def __init__(self, g: Grammar):
        self.grammar = g
        self.taken = set(g.rules)
        self.companions: Dict[tuple, str] = {}
        self.rules: Dict[str, Expr] = {}
        self.pending: List[tuple] = []
        self._elim_cache: Dict[Expr, Expr] = {}

    def companion(self, key: tuple, base: str) -> NonTerminal:
        name = self.companions.get(key)
        if name is None:
            name = fresh_name(base, self.taken)
            self.taken.add(name)
            self.companions[key] = name
            self.pending.append(key)
        return NonTerminal(name)

    def elim(self, e: Expr) -> Expr:
        got = self._elim_cache.get(e)
        if got is None:
            got = self._elim(e)
            self._elim_cache[e] = got
        return got

    def _elim(self, e: Expr) -> Expr:
        t = type(e)
        if t in ATOMS:
            return e
        if t is Seq:
            return Seq(self.elim(e.left), self.elim(e.right))
        if t is Choice:
            return Choice(self.elim(e.first), self.elim(e.second))
        if t is Not:
            return Not(self.elim(e.inner))
        if t is Indent:
            return Indent(e.rel, self.elim(e.inner))
        return self.push_from(e)

    def run(self) -> Grammar:
        g = self.grammar
        rules = {name: self.elim(body) for name, body in g.rules.items()}
        start = self.elim(g.start)
        while self.pending:
            key = self.pending.pop(0)
            self.rules[self.companions[key]] = self.define(key)
        rules.update(self.rules)
        return Grammar(rules, start, self.requires())

    def requires(self):
        return self.grammar.requires


class _Dealigner(_Pusher):
    def __init__(self, g: Grammar, approx: ApproxTable):
        super().__init__(g)
        self.approx = approx
        self._push_cache: Dict[Expr, Expr] = {}

    def _elim(self, e: Expr) -> Expr:
        if type(e) is Loc:
            return Loc(e.rel, self.elim(e.inner))
        return super()._elim(e)

    def push_from(self, e: Expr) -> Expr:
        if isinstance(e, Align):
            return self.push(e.inner)
        raise PreconditionError(f"dealign cannot handle {e}")

    def push(self, e: Expr) -> Expr:
        """An alignment-free expression equivalent to ``aln(e)``."""
        got = self._push_cache.get(e)
        if got is None:
            got = self._push(e)
            self._push_cache[e] = got
        return got

    def _push(self, e: Expr) -> Expr:
        t = type(e)
        if t is Empty:
            return e
        if t is Terminal:
            return Loc(EQ, e)
        if t is NonTerminal:
            return self.companion((e.name,), f"{e.name}{RESERVED_SEP}aln")
        if t is Choice:
            return Choice(self.push(e.first), self.push(e.second))
        if t is Not:
            return Not(self.push(e.inner))
        if t is Indent or t is Loc:
            return t(e.rel, self.push(e.inner))
        if t is Align:
            return self.push(e.inner)
        if t is Seq:
            cls = consumption_class(e.left, self.approx)
            if cls == NEVER:
                return Seq(self.push(e.left), self.push(e.right))
            if cls == ALWAYS:
                return Seq(self.push(e.left), self.elim(e.right))
            raise AmbiguousConsumptionError(
                f"left factor of {e} may succeed both with and without consuming "
                f"input; split the grammar before eliminating alignment")
        raise PreconditionError(f"dealign cannot handle {e} (desugar first)")

    def define(self, key: tuple) -> Expr:
        return self.push(self.grammar.rules[key[0]])


def eliminate_alignment(g: Grammar, approx: Optional[ApproxTable] = None) -> Grammar:
    """Remove every ``aln(...)`` from a split grammar.

    Alignment is distributed over choice, negation, indentation and
    position; over a concatenation ``p q`` it goes to both factors when
    ``p`` never consumes and to ``p`` alone when ``p`` always consumes.
    ``aln("a")`` becomes ``loc(=, "a")`` and ``aln(X)`` the companion
    ``X__aln <- aln(d(X))`` (itself pushed down).
    """
    _require_desugared(g, "eliminate_alignment")
    if approx is None:
        approx = approximate(g)
    return _Dealigner(g, approx).run()


class _Delocator(_Pusher):
    def __init__(self, g: Grammar):
        super().__init__(g)
        self._push_cache: Dict[tuple, Expr] = {}

    def push_from(self, e: Expr) -> Expr:
        if isinstance(e, Loc):
            return self.push(e.rel, e.inner)
        raise PreconditionError(f"deloc needs an alignment-free grammar; found {e}")

    def push(self, rel: DiffRel, e: Expr) -> Expr:
        """A position-free expression equivalent to ``loc(rel, e)``."""
        key = (rel, e)
        got = self._push_cache.get(key)
        if got is None:
            got = self._push(rel, e)
            self._push_cache[key] = got
        return got

    def _push(self, rel: DiffRel, e: Expr) -> Expr:
        t = type(e)
        if t is Empty:
            return e
        if t is Terminal:
            return Indent(rel, e)
        if t is NonTerminal:
            return self.companion((e.name, rel), f"{e.name}{RESERVED_SEP}loc_{rel.slug}")
        if t is Seq:
            return Seq(self.push(rel, e.left), self.push(rel, e.right))
        if t is Choice:
            return Choice(self.push(rel, e.first), self.push(rel, e.second))
        if t is Not:
            return Not(self.push(rel, e.inner))
        if t is Indent:
            return Indent(e.rel, self.push(rel, e.inner))
        if t is Loc:
            # the inner token mode overrides the outer one
            return self.push(e.rel, e.inner)
        raise PreconditionError(f"deloc cannot handle {e}")

    def define(self, key: tuple) -> Expr:
        name, rel = key
        return self.push(rel, self.grammar.rules[name])

    def requires(self):
        merged = dict(self.grammar.requires)
        merged.update(DELOC_REQUIREMENTS)
        return tuple(merged.items())


def eliminate_position(g: Grammar) -> Grammar:
    """Remove every ``loc(...)`` from an alignment-free grammar.

    The result must be parsed in token mode ``=`` with the alignment flag
    false; this is recorded in its ``requires`` header.
    """
    _require_desugared(g, "eliminate_position")
    return _Delocator(g).run()


def simplify(g: Grammar) -> Grammar:
    """Prune always-failing alternatives (``!eps``) and redundant ``eps``.

    ``p !eps`` is only dropped when ``p`` cannot loop (no nonterminals or
    repetition), so divergence is never turned into failure.
    """

    def fn(e: Expr) -> Expr:
        t = type(e)
        if t is Choice:
            if e.first == FAIL:
                return e.second
            if e.second == FAIL:
                return e.first
        elif t is Seq:
            if e.left == FAIL:
                return FAIL
            if e.right == FAIL and not contains(e.left, (NonTerminal, Star, Plus)):
                return FAIL
            if e.left == EPS:
                return e.right
            if e.right == EPS:
                return e.left
        elif t is Not:
            if e.inner == FAIL:
                return EPS
        elif t in (Indent, Loc, Align):
            if e.inner == FAIL:
                return FAIL
        return e

    return Grammar(_map_rules(g, lambda _: fn), map_bottom_up(g.start, fn), g.requires)


@dataclass
class StageReport:
    stage: str
    rules: int
    nodes: int
    well_formed: Optional[bool] = None
    witness: Optional[str] = None

    def to_json(self) -> dict:
        out = {"stage": self.stage, "rules": self.rules, "nodes": self.nodes}
        if self.well_formed is not None:
            out["well_formed"] = self.well_formed
        if self.witness:
            out["witness"] = self.witness
        return out


@dataclass
class PipelineResult:
    grammar: Grammar
    variant: str
    stages: List[StageReport] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"schema": 1, "variant": self.variant,
                "stages": [s.to_json() for s in self.stages]}


def _report(stage: str, g: Grammar, variant: Optional[str] = None) -> StageReport:
    size = g.size
    rep = StageReport(stage, size["rules"], size["nodes"])
    if variant is not None:
        wf = well_formed(g, approximate(g, variant))
        rep.well_formed = wf.grammar_ok
        if not rep.well_formed:
            rep.witness = "; ".join(f"{w}: {x}" for w, x in wf.failures())
    return rep


def run_pipeline(g: Grammar, upto: str = "deloc", variant: str = BASELINE,
                 simplify_output: bool = False) -> PipelineResult:
    """Run the transformation stages in order, stopping after ``upto``.

    Raises :class:`NotWellFormedError` (with the stage reports attached as
    ``.stages``) if the grammar is not well-formed when splitting starts.
    """
    if upto not in STAGES:
        raise ValueError(f"unknown stage {upto!r}; expected one of {', '.join(STAGES)}")
    g.check_defined()
    result = PipelineResult(g, variant)
    last = STAGES.index(upto)
    for stage in STAGES[: last + 1]:
        if stage == "desugar":
            g = desugar(g)
            result.stages.append(_report(stage, g, variant))
        elif stage == "disjoint":
            g = make_disjoint(g)
            result.stages.append(_report(stage, g, variant))
        elif stage == "negnorm":
            g = normalize_negations(g)
            result.stages.append(_report(stage, g, variant))
        elif stage == "split":
            approx = approximate(g, variant)
            wf = well_formed(g, approx)
            if not wf.grammar_ok:
                broke = next((s.stage for s in result.stages if s.well_formed is False), None)
                where, witness = wf.failures()[0]
                msg = f"grammar is not well-formed before split (in {where})"
                if broke and broke != "desugar":
                    msg += f"; well-formedness was lost at stage {broke!r}"
                err = NotWellFormedError(msg, witness)
                err.stages = result.stages
                raise err
            g = split(g, variant)
            result.stages.append(_report(stage, g))
        elif stage == "dealign":
            g = eliminate_alignment(g, approximate(g, variant))
            result.stages.append(_report(stage, g))
        elif stage == "deloc":
            g = eliminate_position(g)
            result.stages.append(_report(stage, g))
    if simplify_output:
        g = simplify(g)
        result.stages.append(_report("simplify", g))
    result.grammar = g
    return result
