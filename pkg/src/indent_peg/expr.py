"""Parsing expression AST.

Ten core constructors plus the surface sugar ``Plus`` and ``Opt``.
Sequences and choices are binary; ``p q r`` reads as ``Seq(p, Seq(q, r))``.
Nodes are immutable and hash structurally (hashes are cached, since the
analyses key tables by expression).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

from .relations import DiffRel


def _node(cls):
    cls = dataclass(frozen=True)(cls)
    field_hash = cls.__hash__
    field_eq = cls.__eq__

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = field_hash(self)
            object.__setattr__(self, "_hash", h)
        return h

    def __eq__(self, other):
        if self is other:
            return True
        if other.__class__ is not self.__class__:
            return NotImplemented
        if hash(self) != hash(other):
            return False
        return field_eq(self, other)

    cls.__hash__ = __hash__
    cls.__eq__ = __eq__
    return cls


class Expr:
    __slots__ = ()

    def __str__(self) -> str:
        from .dsl import format_expr
        return format_expr(self)


@_node
class Empty(Expr):
    pass


@_node
class Terminal(Expr):
    name: str


@_node
class NonTerminal(Expr):
    name: str


@_node
class Seq(Expr):
    left: Expr
    right: Expr


@_node
class Choice(Expr):
    first: Expr
    second: Expr


@_node
class Not(Expr):
    inner: Expr


@_node
class Star(Expr):
    inner: Expr


@_node
class Indent(Expr):
    rel: DiffRel
    inner: Expr


@_node
class Loc(Expr):
    rel: DiffRel
    inner: Expr


@_node
class Align(Expr):
    inner: Expr


@_node
class Plus(Expr):
    inner: Expr


@_node
class Opt(Expr):
    inner: Expr


EPS = Empty()
#: An expression that fails in every state.
FAIL = Not(EPS)

ATOMS = (Empty, Terminal, NonTerminal)
UNARY = (Not, Star, Plus, Opt, Align)
RELATIONAL = (Indent, Loc)


def seq(*items: Expr) -> Expr:
    """Right-nested concatenation; ``seq()`` is the empty expression."""
    if not items:
        return EPS
    out = items[-1]
    for e in reversed(items[:-1]):
        out = Seq(e, out)
    return out


def choice(*items: Expr) -> Expr:
    if not items:
        return FAIL
    out = items[-1]
    for e in reversed(items[:-1]):
        out = Choice(e, out)
    return out


def children(e: Expr) -> tuple:
    if isinstance(e, Seq):
        return (e.left, e.right)
    if isinstance(e, Choice):
        return (e.first, e.second)
    if isinstance(e, ATOMS):
        return ()
    return (e.inner,)


def rebuild(e: Expr, kids) -> Expr:
    """Copy ``e`` with its children replaced by ``kids``."""
    if isinstance(e, Seq):
        return Seq(*kids)
    if isinstance(e, Choice):
        return Choice(*kids)
    if isinstance(e, RELATIONAL):
        return type(e)(e.rel, kids[0])
    if isinstance(e, UNARY):
        return type(e)(kids[0])
    return e


def subexpressions(e: Expr) -> Iterator[Expr]:
    """All nodes of ``e`` in pre-order (with repetitions)."""
    stack = [e]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


def node_count(e: Expr) -> int:
    return sum(1 for _ in subexpressions(e))


def map_bottom_up(e: Expr, fn: Callable[[Expr], Expr]) -> Expr:
    """Rebuild ``e`` applying ``fn`` to every node after its children."""
    kids = children(e)
    if kids:
        e = rebuild(e, [map_bottom_up(k, fn) for k in kids])
    return fn(e)


def contains(e: Expr, kinds) -> bool:
    return any(isinstance(n, kinds) for n in subexpressions(e))


def referenced(e: Expr) -> set:
    return {n.name for n in subexpressions(e) if isinstance(n, NonTerminal)}
