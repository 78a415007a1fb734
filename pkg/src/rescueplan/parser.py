"""Parser for the fact/rule language and its extension grammars.

Two layers share one tokenizer. The program layer reads flat clauses
(facts and rules) and enforces rule safety. The generic layer reads
period-terminated nested terms (structs, lists, name/arity indicators)
and is what the action, event and goal file formats are built on; the
program layer deliberately rejects nesting.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .errors import KbSyntaxError, RuleSafetyError
from .terms import (
    ANON,
    Anonymous,
    Atom,
    Constant,
    Literal,
    NumberConstant,
    Program,
    Rule,
    Term,
    Variable,
    atom_variables,
)


# ==== tokens ================================================================

@dataclass(frozen=True)
class Token:
    kind: str  # ident | var | int | quoted | implies | punct | eof
    text: str
    line: int
    column: int


_TOKEN_RE = re.compile(
    r"""
      (?P<ws>[ \t\r]+)
    | (?P<nl>\n)
    | (?P<comment>%[^\n]*)
    | (?P<implies>:-)
    | (?P<int>-?[0-9]+)
    | (?P<ident>[a-z][A-Za-z0-9_]*)
    | (?P<var>[A-Z_][A-Za-z0-9_]*)
    | (?P<quoted>'(?:[^'\n]|'')*')
    | (?P<punct>[()\[\],./])
    """,
    re.VERBOSE,
)


def _tokenize(text: str, source: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    line = 1
    line_start = 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            col = pos - line_start + 1
            if text[pos] == "'":
                raise KbSyntaxError("unterminated quoted constant", source, line, col)
            raise KbSyntaxError(f"unexpected character {text[pos]!r}", source, line, col)
        kind = m.lastgroup or ""
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), line, m.start() - line_start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, n - line_start + 1))
    return tokens


# ==== nested term nodes (extension grammars) ================================

@dataclass(frozen=True)
class GStruct:
    functor: str
    args: "tuple[GNode, ...]"
    line: int = 0
    column: int = 0


@dataclass(frozen=True)
class GList:
    items: "tuple[GNode, ...]"


@dataclass(frozen=True)
class GPredIndicator:
    name: str
    arity: int


@dataclass(frozen=True)
class GNeg:
    item: "GNode"


GNode = Union[Term, GStruct, GList, GPredIndicator, GNeg]


# ==== parser ================================================================

class _Parser:
    def __init__(self, text: str, source: str):
        self.source = source
        self.tokens = _tokenize(text, source)
        self.pos = 0

    def peek(self, ahead: int = 0) -> Token:
        i = min(self.pos + ahead, len(self.tokens) - 1)
        return self.tokens[i]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def fail(self, message: str, tok: Token | None = None):
        tok = tok or self.peek()
        raise KbSyntaxError(message, self.source, tok.line, tok.column)

    def expect_punct(self, char: str) -> Token:
        tok = self.peek()
        if tok.kind != "punct" or tok.text != char:
            self.fail(f"expected '{char}', found {tok.text!r}" if tok.kind != "eof"
                      else f"expected '{char}', found end of input")
        return self.next()

    # ---- flat layer ----

    def parse_flat_term(self) -> Term:
        tok = self.next()
        if tok.kind == "ident":
            nxt = self.peek()
            if nxt.kind == "punct" and nxt.text == "(":
                self.fail("nested terms are not allowed here", nxt)
            return Constant(tok.text)
        if tok.kind == "quoted":
            return Constant(tok.text[1:-1].replace("''", "'"))
        if tok.kind == "int":
            return NumberConstant(int(tok.text))
        if tok.kind == "var":
            return ANON if tok.text == "_" else Variable(tok.text)
        self.fail(f"expected a term, found {tok.text!r}" if tok.kind != "eof"
                  else "expected a term, found end of input", tok)
        raise AssertionError  # unreachable

    def parse_flat_atom(self) -> Atom:
        tok = self.peek()
        if tok.kind != "ident":
            self.fail(f"expected a predicate name, found {tok.text!r}" if tok.kind != "eof"
                      else "expected a predicate name, found end of input")
        self.next()
        name = tok.text
        if not (self.peek().kind == "punct" and self.peek().text == "("):
            return Atom(name)
        self.next()
        args = [self.parse_flat_term()]
        while self.peek().kind == "punct" and self.peek().text == ",":
            self.next()
            args.append(self.parse_flat_term())
        self.expect_punct(")")
        return Atom(name, tuple(args))

    def parse_body_literal(self) -> Literal:
        tok = self.peek()
        # `not ` negates the following atom; `not(` would be an atom named not
        if tok.kind == "ident" and tok.text == "not" and self.peek(1).kind == "ident":
            self.next()
            return Literal(self.parse_flat_atom(), positive=False)
        return Literal(self.parse_flat_atom(), positive=True)

    def parse_body(self) -> list[Literal]:
        literals = [self.parse_body_literal()]
        while self.peek().kind == "punct" and self.peek().text == ",":
            self.next()
            literals.append(self.parse_body_literal())
        return literals

    # ---- nested layer ----

    def parse_gterm(self, allow_neg: bool = False) -> GNode:
        tok = self.peek()
        if allow_neg and tok.kind == "ident" and tok.text == "not" \
                and self.peek(1).kind == "ident":
            self.next()
            return GNeg(self.parse_gterm())
        if tok.kind == "ident":
            self.next()
            nxt = self.peek()
            if nxt.kind == "punct" and nxt.text == "(":
                self.next()
                if self.peek().kind == "punct" and self.peek().text == ")":
                    self.fail("empty argument list")
                args = [self.parse_gterm()]
                while self.peek().kind == "punct" and self.peek().text == ",":
                    self.next()
                    args.append(self.parse_gterm())
                self.expect_punct(")")
                return GStruct(tok.text, tuple(args), tok.line, tok.column)
            if nxt.kind == "punct" and nxt.text == "/":
                self.next()
                arity = self.next()
                if arity.kind != "int" or int(arity.text) < 0:
                    self.fail("expected an arity after '/'", arity)
                return GPredIndicator(tok.text, int(arity.text))
            return Constant(tok.text)
        if tok.kind == "punct" and tok.text == "[":
            self.next()
            items: list[GNode] = []
            if not (self.peek().kind == "punct" and self.peek().text == "]"):
                items.append(self.parse_gterm(allow_neg=True))
                while self.peek().kind == "punct" and self.peek().text == ",":
                    self.next()
                    items.append(self.parse_gterm(allow_neg=True))
            self.expect_punct("]")
            return GList(tuple(items))
        return self.parse_flat_term()


# ==== safety ================================================================

def _check_clause_safety(head: Atom, body: tuple[Literal, ...],
                         source: str, line: int, column: int) -> None:
    def unsafe(message: str):
        raise RuleSafetyError(message, source, line, column)

    if any(isinstance(t, Anonymous) for t in head.args):
        unsafe("anonymous marker is not allowed in a clause head")
    positive_vars: set[str] = set()
    for lit in body:
        if lit.positive:
            positive_vars |= atom_variables(lit.atom)
    if not body:
        if atom_variables(head):
            name = sorted(atom_variables(head))[0]
            unsafe(f"fact contains variable {name}")
        return
    loose = atom_variables(head) - positive_vars
    if loose:
        unsafe(f"head variable {sorted(loose)[0]} does not occur in a positive body literal")
    for lit in body:
        if lit.positive:
            continue
        if any(isinstance(t, Anonymous) for t in lit.atom.args):
            unsafe("anonymous marker is not allowed under negation")
        loose = atom_variables(lit.atom) - positive_vars
        if loose:
            unsafe(f"variable {sorted(loose)[0]} in negative literal "
                   f"does not occur in a positive body literal")


# ==== entry points ==========================================================

def parse_program(text: str, source: str = "<string>") -> Program:
    """Parse fact and rule clauses; raises KbSyntaxError / RuleSafetyError."""
    p = _Parser(text, source)
    facts: list[Atom] = []
    rules: list[Rule] = []
    while p.peek().kind != "eof":
        start = p.peek()
        head = p.parse_flat_atom()
        body: list[Literal] = []
        if p.peek().kind == "implies":
            p.next()
            body = p.parse_body()
        p.expect_punct(".")
        _check_clause_safety(head, tuple(body), p.source, start.line, start.column)
        if body:
            rules.append(Rule(head, tuple(body)))
        else:
            facts.append(head)
    return Program(tuple(facts), tuple(rules))


def parse_literals(text: str, source: str = "<query>") -> tuple[Literal, ...]:
    """Parse a comma-separated literal list (query or goal surface syntax).

    A trailing period is accepted and ignored. Anonymous markers under
    negation are rejected here; other safety is dynamic, checked at
    query evaluation time.
    """
    p = _Parser(text, source)
    if p.peek().kind == "eof":
        p.fail("empty literal list")
    literals = p.parse_body()
    if p.peek().kind == "punct" and p.peek().text == ".":
        p.next()
    if p.peek().kind != "eof":
        p.fail(f"unexpected trailing input {p.peek().text!r}")
    for lit in literals:
        if not lit.positive and any(isinstance(t, Anonymous) for t in lit.atom.args):
            p.fail("anonymous marker is not allowed under negation")
    return tuple(literals)


def parse_fact(text: str, source: str = "<fact>") -> Atom:
    """Parse a single ground atom; a trailing period is optional."""
    p = _Parser(text, source)
    atom = p.parse_flat_atom()
    if p.peek().kind == "punct" and p.peek().text == ".":
        p.next()
    if p.peek().kind != "eof":
        p.fail(f"unexpected trailing input {p.peek().text!r}")
    if not atom.is_ground():
        p.fail("fact is not ground")
    return atom


def lower_flat_atom(node: GNode, source: str, context: str) -> Atom:
    """Turn a parsed nested node into a flat atom, rejecting real nesting."""
    if isinstance(node, Constant):
        return Atom(node.name)
    if not isinstance(node, GStruct):
        raise KbSyntaxError(f"expected an atom in {context}", source)
    args: list[Term] = []
    for arg in node.args:
        if not isinstance(arg, (Constant, NumberConstant, Variable, Anonymous)):
            raise KbSyntaxError(f"nested terms are not allowed in {context}",
                                source, node.line, node.column)
        args.append(arg)
    return Atom(node.functor, tuple(args))


def lower_literal_list(node: GNode, source: str, context: str) -> tuple[Literal, ...]:
    """Turn a parsed [lit, not lit, ...] list into Literal objects."""
    if not isinstance(node, GList):
        raise KbSyntaxError(f"expected a list of literals for {context}", source)
    out = []
    for item in node.items:
        if isinstance(item, GNeg):
            out.append(Literal(lower_flat_atom(item.item, source, context), positive=False))
        else:
            out.append(Literal(lower_flat_atom(item, source, context), positive=True))
    return tuple(out)


def read_structs(text: str, source: str = "<string>") -> list[GStruct]:
    """Read period-terminated nested clauses for the extension file formats.

    Every clause must be a struct (or a bare name, read as a 0-ary
    struct); rule syntax is rejected.
    """
    p = _Parser(text, source)
    out: list[GStruct] = []
    while p.peek().kind != "eof":
        start = p.peek()
        node = p.parse_gterm()
        if p.peek().kind == "implies":
            p.fail("rules are not allowed in this file")
        p.expect_punct(".")
        if isinstance(node, Constant):
            node = GStruct(node.name, (), start.line, start.column)
        if not isinstance(node, GStruct):
            raise KbSyntaxError("expected a clause like name(...)",
                                source, start.line, start.column)
        out.append(node)
    return out
