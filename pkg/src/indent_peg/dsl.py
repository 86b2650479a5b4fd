"""Concrete syntax for grammars.

::

    # comment
    Name  <- expr ;
    start <- expr ;

    expr  := seq ('/' seq)*                      (right-nested choice)
    seq   := prefix+                             (right-nested sequence)
    prefix:= '!' prefix | postfix
    postfix := atom ('*' | '+' | '?')*
    atom  := 'eps' | '"token"' | Name | '(' expr ')'
           | 'ind' '(' REL ',' expr ')' | 'loc' '(' REL ',' expr ')'
           | 'aln' '(' expr ')'
    REL   := '=' | '>' | '>=' | 'any' | 'diff[' lo? '..' hi? ']'

A ``# requires: key = value, ...`` comment line is read back into
:attr:`Grammar.requires`.
"""
from __future__ import annotations

import re
from typing import Dict, List, Optional, Tuple

from .errors import GrammarSyntaxError
from .expr import (
    Align, Choice, Empty, Expr, Indent, Loc, NonTerminal, Not, Opt, Plus, Seq,
    Star, Terminal,
)
from .grammar import Grammar
from .relations import parse_relation

KEYWORDS = {"eps", "ind", "loc", "aln", "any", "start"}

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<arrow><-)
  | (?P<diff>diff\[[^\]\n]*\])
  | (?P<rel>>=|>|=)
  | (?P<string>"[^"\s]+")
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[;/!*+?(),])
""", re.VERBOSE)

_REQUIRES_RE = re.compile(r"#\s*requires:\s*(.*)")


class _Tok:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind, self.text, self.line, self.col = kind, text, line, col

    def __repr__(self):
        return f"{self.kind}:{self.text!r}@{self.line}:{self.col}"


def _tokenize(text: str) -> Tuple[List[_Tok], Tuple[Tuple[str, str], ...]]:
    toks = []
    requires: List[Tuple[str, str]] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise GrammarSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        chunk = m.group()
        if kind == "comment":
            req = _REQUIRES_RE.match(chunk)
            if req:
                for item in req.group(1).split(","):
                    if not item.strip():
                        continue
                    key, sep, value = item.partition("=")
                    if not sep:
                        raise GrammarSyntaxError("malformed requires header", line, col)
                    requires.append((key.strip(), value.strip()))
        elif kind != "ws":
            toks.append(_Tok(kind, chunk, line, col))
        nl = chunk.count("\n")
        if nl:
            line += nl
            line_start = pos + chunk.rfind("\n") + 1
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks, tuple(requires)


class _Parser:
    def __init__(self, toks: List[_Tok]):
        self.toks = toks
        self.i = 0

    @property
    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, message: str, tok: Optional[_Tok] = None):
        tok = tok or self.peek
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise GrammarSyntaxError(f"{message}, found {found}", tok.line, tok.col)

    def expect(self, text: str) -> _Tok:
        if self.peek.text != text or self.peek.kind in ("string",):
            self.error(f"expected {text!r}")
        return self.next()

    def grammar(self, requires) -> Grammar:
        rules: Dict[str, Expr] = {}
        start = None
        while self.peek.kind != "eof":
            head = self.next()
            if head.kind != "name":
                self.error("expected rule name", head)
            if head.text in KEYWORDS - {"start"}:
                self.error("reserved word used as rule name", head)
            self.expect("<-")
            body = self.expr()
            self.expect(";")
            if head.text == "start":
                if start is not None:
                    self.error("duplicate start expression", head)
                start = body
            else:
                if head.text in rules:
                    self.error(f"duplicate rule {head.text}", head)
                rules[head.text] = body
        if start is None:
            tok = self.peek
            raise GrammarSyntaxError("missing start expression", tok.line, tok.col)
        return Grammar(rules, start, requires)

    def expr(self) -> Expr:
        items = [self.sequence()]
        while self.peek.text == "/" and self.peek.kind == "punct":
            self.next()
            items.append(self.sequence())
        out = items[-1]
        for e in reversed(items[:-1]):
            out = Choice(e, out)
        return out

    def _starts_prefix(self) -> bool:
        tok = self.peek
        if tok.kind in ("string", "name"):
            return tok.text != "start"
        return tok.kind == "punct" and tok.text in ("!", "(")

    def sequence(self) -> Expr:
        if not self._starts_prefix():
            self.error("expected expression")
        items = [self.prefix()]
        while self._starts_prefix():
            items.append(self.prefix())
        out = items[-1]
        for e in reversed(items[:-1]):
            out = Seq(e, out)
        return out

    def prefix(self) -> Expr:
        if self.peek.kind == "punct" and self.peek.text == "!":
            self.next()
            return Not(self.prefix())
        return self.postfix()

    def postfix(self) -> Expr:
        e = self.atom()
        while self.peek.kind == "punct" and self.peek.text in "*+?":
            op = self.next().text
            e = {"*": Star, "+": Plus, "?": Opt}[op](e)
        return e

    def relation(self):
        tok = self.next()
        if tok.kind in ("rel", "diff") or (tok.kind == "name" and tok.text == "any"):
            try:
                return parse_relation(tok.text)
            except ValueError as exc:
                raise GrammarSyntaxError(str(exc), tok.line, tok.col) from None
        self.error("expected relation", tok)

    def atom(self) -> Expr:
        tok = self.next()
        if tok.kind == "string":
            return Terminal(tok.text[1:-1])
        if tok.kind == "punct" and tok.text == "(":
            e = self.expr()
            self.expect(")")
            return e
        if tok.kind == "name":
            if tok.text == "eps":
                return Empty()
            if tok.text in ("ind", "loc"):
                self.expect("(")
                rel = self.relation()
                self.expect(",")
                e = self.expr()
                self.expect(")")
                return (Indent if tok.text == "ind" else Loc)(rel, e)
            if tok.text == "aln":
                self.expect("(")
                e = self.expr()
                self.expect(")")
                return Align(e)
            if tok.text in KEYWORDS:
                self.error("unexpected keyword", tok)
            return NonTerminal(tok.text)
        self.error("expected expression", tok)


def parse_grammar_text(text: str, check: bool = True) -> Grammar:
    """Read a grammar from DSL text.

    Sugar (``*``, ``+``, ``?``) is kept as-is.  With ``check`` (the default),
    references to undefined nonterminals raise
    :class:`~indent_peg.errors.UndefinedNonterminalError`.
    """
    toks, requires = _tokenize(text)
    g = _Parser(toks).grammar(requires)
    if check:
        g.check_defined()
    return g


def parse_expr_text(text: str) -> Expr:
    toks, _ = _tokenize(text)
    p = _Parser(toks)
    e = p.expr()
    if p.peek.kind != "eof":
        p.error("trailing input")
    return e


# precedence levels: choice < sequence < prefix < postfix < atom
_CHOICE, _SEQ, _PREFIX, _POSTFIX, _ATOM = range(5)


def _level(e: Expr) -> int:
    if isinstance(e, Choice):
        return _CHOICE
    if isinstance(e, Seq):
        return _SEQ
    if isinstance(e, Not):
        return _PREFIX
    if isinstance(e, (Star, Plus, Opt)):
        return _POSTFIX
    return _ATOM


def format_expr(e: Expr, need: int = _CHOICE) -> str:
    if _level(e) < need:
        return "(" + format_expr(e) + ")"
    if isinstance(e, Empty):
        return "eps"
    if isinstance(e, Terminal):
        return f'"{e.name}"'
    if isinstance(e, NonTerminal):
        return e.name
    if isinstance(e, Choice):
        return f"{format_expr(e.first, _SEQ)} / {format_expr(e.second, _CHOICE)}"
    if isinstance(e, Seq):
        return f"{format_expr(e.left, _PREFIX)} {format_expr(e.right, _SEQ)}"
    if isinstance(e, Not):
        return "!" + format_expr(e.inner, _PREFIX)
    if isinstance(e, (Star, Plus, Opt)):
        op = {Star: "*", Plus: "+", Opt: "?"}[type(e)]
        return format_expr(e.inner, _POSTFIX) + op
    if isinstance(e, Indent):
        return f"ind({e.rel}, {format_expr(e.inner)})"
    if isinstance(e, Loc):
        return f"loc({e.rel}, {format_expr(e.inner)})"
    if isinstance(e, Align):
        return f"aln({format_expr(e.inner)})"
    raise TypeError(f"not an expression: {e!r}")


def pretty_print(g: Grammar) -> str:
    lines = []
    if g.requires:
        lines.append("# requires: " + ", ".join(f"{k} = {v}" for k, v in g.requires))
    for name, body in g.rules.items():
        lines.append(f"{name} <- {format_expr(body)};")
    lines.append(f"start <- {format_expr(g.start)};")
    return "\n".join(lines) + "\n"


def expr_to_json(e: Expr) -> dict:
    if isinstance(e, Empty):
        return {"kind": "eps"}
    if isinstance(e, Terminal):
        return {"kind": "terminal", "name": e.name}
    if isinstance(e, NonTerminal):
        return {"kind": "nonterminal", "name": e.name}
    if isinstance(e, Seq):
        return {"kind": "seq", "left": expr_to_json(e.left), "right": expr_to_json(e.right)}
    if isinstance(e, Choice):
        return {"kind": "choice", "first": expr_to_json(e.first),
                "second": expr_to_json(e.second)}
    if isinstance(e, (Indent, Loc)):
        kind = "ind" if isinstance(e, Indent) else "loc"
        return {"kind": kind, "rel": str(e.rel), "inner": expr_to_json(e.inner)}
    kind = {Not: "not", Star: "star", Plus: "plus", Opt: "opt", Align: "aln"}[type(e)]
    return {"kind": kind, "inner": expr_to_json(e.inner)}


def expr_from_json(data: dict) -> Expr:
    kind = data["kind"]
    if kind == "eps":
        return Empty()
    if kind == "terminal":
        return Terminal(data["name"])
    if kind == "nonterminal":
        return NonTerminal(data["name"])
    if kind == "seq":
        return Seq(expr_from_json(data["left"]), expr_from_json(data["right"]))
    if kind == "choice":
        return Choice(expr_from_json(data["first"]), expr_from_json(data["second"]))
    if kind in ("ind", "loc"):
        return (Indent if kind == "ind" else Loc)(
            parse_relation(data["rel"]), expr_from_json(data["inner"]))
    cls = {"not": Not, "star": Star, "plus": Plus, "opt": Opt, "aln": Align}[kind]
    return cls(expr_from_json(data["inner"]))


def grammar_to_json(g: Grammar) -> dict:
    return {
        "schema": 1,
        "requires": {k: v for k, v in g.requires},
        "rules": {name: expr_to_json(body) for name, body in g.rules.items()},
        "start": expr_to_json(g.start),
    }


def grammar_from_json(data: dict) -> Grammar:
    return Grammar({name: expr_from_json(b) for name, b in data["rules"].items()},
                   expr_from_json(data["start"]),
                   tuple(data.get("requires", {}).items()))
