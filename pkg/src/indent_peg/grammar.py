"""Grammar container, structural validation and sugar elimination."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple

from .errors import UndefinedNonterminalError
from .expr import (
    EPS, Align, Choice, Expr, Indent, Loc, NonTerminal, Opt, Plus, Seq, Star,
    Terminal, map_bottom_up, node_count, referenced, subexpressions,
)

RESERVED_SEP = "__"

#: Header attached to grammars that are only valid under token mode ``=``
#: with the alignment flag initially false.
DELOC_REQUIREMENTS = (("token-mode", "eq"), ("initial-align", "false"))


@dataclass(frozen=True, eq=True)
class Grammar:
    """A grammar ``(N, T, d, s)``: rules map names to bodies, ``start`` is ``s``.

    ``requires`` holds header metadata (key/value pairs) recording the
    conditions under which a transformed grammar is meaningful.
    """

    rules: Mapping[str, Expr]
    start: Expr
    requires: Tuple[Tuple[str, str], ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "rules", dict(self.rules))

    def __hash__(self):
        return hash((tuple(sorted(self.rules.items(), key=lambda kv: kv[0])),
                     self.start, self.requires))

    @property
    def nonterminals(self) -> frozenset:
        return frozenset(self.rules)

    @property
    def terminals(self) -> frozenset:
        return frozenset(n.name for e in self.bodies()
                         for n in subexpressions(e) if isinstance(n, Terminal))

    def bodies(self):
        yield from self.rules.values()
        yield self.start

    def nodes(self):
        for body in self.bodies():
            yield from subexpressions(body)

    def undefined(self) -> set:
        names = set()
        for body in self.bodies():
            names |= referenced(body)
        return names - set(self.rules)

    def check_defined(self) -> None:
        missing = self.undefined()
        if missing:
            raise UndefinedNonterminalError(missing)

    def reachable(self) -> set:
        seen = set()
        todo = list(referenced(self.start))
        while todo:
            name = todo.pop()
            if name in seen or name not in self.rules:
                continue
            seen.add(name)
            todo.extend(referenced(self.rules[name]))
        return seen

    def with_rules(self, rules: Mapping[str, Expr], start: Optional[Expr] = None,
                   requires=None) -> Grammar:
        return Grammar(rules, self.start if start is None else start,
                       self.requires if requires is None else requires)

    @property
    def size(self) -> Dict[str, int]:
        return {"rules": len(self.rules),
                "nodes": sum(node_count(b) for b in self.bodies())}

    def __str__(self) -> str:
        from .dsl import pretty_print
        return pretty_print(self)


def fresh_name(base: str, taken) -> str:
    if base not in taken:
        return base
    k = 2
    while f"{base}_{k}" in taken:
        k += 1
    return f"{base}_{k}"


@dataclass
class ValidationReport:
    undefined: List[str]
    unreachable: List[str]
    non_total: List[Tuple[str, str]]  # (rule or "start", relation)
    reserved_names: List[str]
    repetition_free: bool
    alignment_free: bool
    position_free: bool

    @property
    def ok(self) -> bool:
        return not self.undefined

    @property
    def warnings(self) -> List[str]:
        out = [f"relation {rel} used under ind/loc in {where} is not total (not in Rel+)"
               for where, rel in self.non_total]
        out += [f"rule {name} is unreachable from start" for name in self.unreachable]
        out += [f"rule name {name} contains reserved separator '__'"
                for name in self.reserved_names]
        return out

    @property
    def errors(self) -> List[str]:
        return [f"undefined nonterminal {name}" for name in self.undefined]

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "errors": self.errors,
            "warnings": self.warnings,
            "repetition_free": self.repetition_free,
            "alignment_free": self.alignment_free,
            "position_free": self.position_free,
        }


def validate(g: Grammar, generated_names_ok: bool = False) -> ValidationReport:
    non_total = []
    for where, body in list(g.rules.items()) + [("start", g.start)]:
        for n in subexpressions(body):
            if isinstance(n, (Indent, Loc)) and not n.rel.is_total:
                non_total.append((where, str(n.rel)))
    nodes = list(g.nodes())
    reserved = [] if generated_names_ok else [
        n for n in g.rules if RESERVED_SEP in n]
    return ValidationReport(
        undefined=sorted(g.undefined()),
        unreachable=sorted(set(g.rules) - g.reachable()),
        non_total=non_total,
        reserved_names=reserved,
        repetition_free=not any(isinstance(n, (Star, Plus, Opt)) for n in nodes),
        alignment_free=not any(isinstance(n, Align) for n in nodes),
        position_free=not any(isinstance(n, Loc) for n in nodes),
    )


def is_desugared(g: Grammar) -> bool:
    return not any(isinstance(n, (Star, Plus, Opt)) for n in g.nodes())


def desugar(g: Grammar) -> Grammar:
    """Eliminate ``e+``, ``e?`` and ``e*``.

    ``e+`` becomes ``e e*`` and ``e?`` becomes ``e / eps``; then every
    distinct starred subexpression ``e*`` is replaced by a fresh
    nonterminal ``A`` with ``A <- e A / eps``.
    """
    rules: Dict[str, Expr] = {}
    taken = set(g.rules)
    starred: Dict[Expr, str] = {}
    counter = [0]

    def rewrite(owner: str):
        def fn(e: Expr) -> Expr:
            if isinstance(e, Plus):
                return Seq(e.inner, fn(Star(e.inner)))
            if isinstance(e, Opt):
                return Choice(e.inner, EPS)
            if isinstance(e, Star):
                name = starred.get(e.inner)
                if name is None:
                    counter[0] += 1
                    name = fresh_name(f"{owner}{RESERVED_SEP}star{counter[0]}", taken)
                    taken.add(name)
                    starred[e.inner] = name
                    rules[name] = Choice(Seq(e.inner, NonTerminal(name)), EPS)
                return NonTerminal(name)
            return e
        return fn

    for name, body in g.rules.items():
        rules[name] = map_bottom_up(body, rewrite(name))
    start = map_bottom_up(g.start, rewrite("start"))
    # keep original rules first, generated ones after, in creation order
    ordered = {name: rules[name] for name in g.rules}
    ordered.update((k, v) for k, v in rules.items() if k not in ordered)
    return Grammar(ordered, start, g.requires)
