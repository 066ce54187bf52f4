"""ASCII syntax for formulas.

Grammar (loosest binding first)::

    formula := 'down' VAR '.' formula | disj
    disj    := conj ('|' conj)*
    conj    := unary ('&' unary)*
    unary   := '!' unary | '<' R '>' unary | '<' R '>>=' k unary
             | '[' R ']' unary | '<~' R '>' unary | '<~' R '>>=' k unary
             | 'E' unary | 'E>=' k unary | '@' VAR unary | atom
    atom    := 'true' | 'false' | NAME | '(' formula ')'

A binder extends as far right as possible.  A name is a world variable when
a surrounding binder (or the ``variables`` argument) declares it, and a
proposition otherwise.  Binders whose variable clashes with a proposition
of the signature are renamed to a fresh ``x<i>``.
"""

from __future__ import annotations

import re
from typing import Iterable, Optional

from ..structures import Signature
from .formulas import (
    And,
    At,
    BackDia,
    Bind,
    Bot,
    Box,
    Dia,
    Formula,
    FormulaError,
    Global,
    Not,
    Or,
    Prop,
    Top,
    Var,
    subformulas,
)


class ParseError(FormulaError):
    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        self.text = text
        where = f" at position {pos}"
        if text:
            where += f": {text[:pos]}<<HERE>>{text[pos:]}"
        super().__init__(message + where)


NAME = r"[A-Za-z_][A-Za-z0-9_']*"
TOKEN = re.compile(
    rf"""
    (?P<ws>\s+)
  | (?P<dia><(?P<back>~)?(?P<dact>{NAME})>(?:>=(?P<dgrade>\d+))?)
  | (?P<box>\[(?P<bact>{NAME})\])
  | (?P<glob>E(?:>=(?P<ggrade>\d+))?(?![A-Za-z0-9_']))
  | (?P<name>{NAME})
  | (?P<punct>[()!&|.@])
    """,
    re.VERBOSE,
)

KEYWORDS = {"true", "false", "down"}


def tokenize(text: str) -> list[tuple]:
    out, pos = [], 0
    while pos < len(text):
        m = TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        if m.group("ws"):
            pass
        elif m.group("dia"):
            grade = int(m.group("dgrade")) if m.group("dgrade") else 1
            out.append(("back" if m.group("back") else "dia", (m.group("dact"), grade), pos))
        elif m.group("box"):
            out.append(("box", m.group("bact"), pos))
        elif m.group("glob"):
            grade = int(m.group("ggrade")) if m.group("ggrade") else 1
            out.append(("glob", grade, pos))
        elif m.group("name"):
            out.append(("name", m.group("name"), pos))
        else:
            out.append((m.group("punct"), None, pos))
        pos = m.end()
    out.append(("eof", None, len(text)))
    return out


class _Parser:
    def __init__(self, text: str, signature: Optional[Signature], variables: Iterable[str]):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        self.sig = signature
        self.scope: list[tuple[str, str]] = [(v, v) for v in variables]
        self.used_vars = set(variables)
        self.counter = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[0]!r}", tok[2], self.text)
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ParseError(msg, tok[2], self.text)

    def fresh(self) -> str:
        while True:
            name = f"x{self.counter}"
            self.counter += 1
            if name not in self.used_vars and (self.sig is None or name not in self.sig.props):
                self.used_vars.add(name)
                return name

    def check_action(self, action, tok):
        if self.sig is not None and action not in self.sig.actions:
            raise self.error(f"unknown action {action!r}", tok)

    def parse(self) -> Formula:
        phi = self.formula()
        if self.peek()[0] != "eof":
            raise self.error(f"unexpected token {self.peek()[1] or self.peek()[0]!r}")
        return phi

    def formula(self) -> Formula:
        tok = self.peek()
        if tok[0] == "name" and tok[1] == "down":
            self.take()
            vtok = self.take("name")
            if vtok[1] in KEYWORDS:
                raise self.error("a keyword cannot be bound", vtok)
            self.take(".")
            var = vtok[1]
            clash = self.sig is not None and var in self.sig.props
            internal = self.fresh() if clash else var
            self.used_vars.add(internal)
            self.scope.append((var, internal))
            body = self.formula()
            self.scope.pop()
            return Bind(internal, body)
        return self.disj()

    def disj(self) -> Formula:
        phi = self.conj()
        while self.peek()[0] == "|":
            self.take()
            phi = Or(phi, self.conj_or_binder())
        return phi

    def conj(self) -> Formula:
        phi = self.unary()
        while self.peek()[0] == "&":
            self.take()
            phi = And(phi, self.unary_or_binder())
        return phi

    def conj_or_binder(self) -> Formula:
        if self._at_binder():
            return self.formula()
        return self.conj()

    def unary_or_binder(self) -> Formula:
        if self._at_binder():
            return self.formula()
        return self.unary()

    def _at_binder(self) -> bool:
        tok = self.peek()
        return tok[0] == "name" and tok[1] == "down"

    def operand(self) -> Formula:
        return self.formula() if self._at_binder() else self.unary()

    def unary(self) -> Formula:
        tok = self.peek()
        kind = tok[0]
        if kind == "!":
            self.take()
            return Not(self.operand())
        if kind in ("dia", "back"):
            self.take()
            action, grade = tok[1]
            if grade < 1:
                raise self.error("modal grades start at 1", tok)
            self.check_action(action, tok)
            sub = self.operand()
            return Dia(action, sub, grade) if kind == "dia" else BackDia(action, sub, grade)
        if kind == "box":
            self.take()
            self.check_action(tok[1], tok)
            return Box(tok[1], self.operand())
        if kind == "glob":
            self.take()
            if tok[1] < 1:
                raise self.error("modal grades start at 1", tok)
            return Global(self.operand(), tok[1])
        if kind == "@":
            self.take()
            vtok = self.take("name")
            return At(self.resolve_var(vtok), self.operand())
        return self.atom()

    def resolve_var(self, tok) -> str:
        for name, internal in reversed(self.scope):
            if name == tok[1]:
                return internal
        raise self.error(f"unbound world variable {tok[1]!r}", tok)

    def atom(self) -> Formula:
        tok = self.take()
        kind, val = tok[0], tok[1]
        if kind == "(":
            phi = self.formula()
            self.take(")")
            return phi
        if kind == "name":
            if val == "true":
                return Top()
            if val == "false":
                return Bot()
            if val == "down":
                raise self.error("misplaced binder", tok)
            for name, internal in reversed(self.scope):
                if name == val:
                    return Var(internal)
            if self.sig is not None and val not in self.sig.props:
                raise self.error(f"unknown proposition {val!r}", tok)
            return Prop(val)
        raise self.error(f"unexpected {val or kind!r}", tok)


def parse(text: str, signature: Optional[Signature] = None, variables: Iterable[str] = ()) -> Formula:
    """Parse ``text``; names are checked against ``signature`` when given."""
    return _Parser(text, signature, variables).parse()


def to_text(phi: Formula) -> str:
    """Fully parenthesized canonical form; ``parse(to_text(phi)) == phi``."""
    if isinstance(phi, Top):
        return "true"
    if isinstance(phi, Bot):
        return "false"
    if isinstance(phi, (Prop, Var)):
        return phi.name
    if isinstance(phi, Not):
        return f"!{_wrap(phi.sub)}"
    if isinstance(phi, And):
        return f"({to_text(phi.left)} & {to_text(phi.right)})"
    if isinstance(phi, Or):
        return f"({to_text(phi.left)} | {to_text(phi.right)})"
    if isinstance(phi, Dia):
        g = f">={phi.grade}" if phi.grade != 1 else ""
        return f"<{phi.action}>{g} {_wrap(phi.sub)}"
    if isinstance(phi, BackDia):
        g = f">={phi.grade}" if phi.grade != 1 else ""
        return f"<~{phi.action}>{g} {_wrap(phi.sub)}"
    if isinstance(phi, Box):
        return f"[{phi.action}] {_wrap(phi.sub)}"
    if isinstance(phi, Global):
        g = f">={phi.grade}" if phi.grade != 1 else ""
        return f"E{g} {_wrap(phi.sub)}"
    if isinstance(phi, At):
        return f"@{phi.var} {_wrap(phi.sub)}"
    if isinstance(phi, Bind):
        return f"(down {phi.var}. {to_text(phi.sub)})"
    raise FormulaError(f"not a formula: {phi!r}")


def _wrap(phi: Formula) -> str:
    s = to_text(phi)
    if isinstance(phi, (Not, Dia, BackDia, Box, Global, At)):
        return f"({s})"
    return s


def check_names(phi: Formula, signature: Signature) -> None:
    """Raise if ``phi`` mentions symbols outside ``signature``."""
    for f in subformulas(phi):
        if isinstance(f, Prop) and f.name not in signature.props:
            raise FormulaError(f"unknown proposition {f.name!r}")
        if isinstance(f, (Dia, Box, BackDia)) and f.action not in signature.actions:
            raise FormulaError(f"unknown action {f.action!r}")
