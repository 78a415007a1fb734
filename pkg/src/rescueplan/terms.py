"""Term and clause model for the fact/rule language.

Terms are flat: constants, integer constants, variables and the anonymous
marker `_`. Atoms pair a predicate name with a tuple of terms; predicate
identity includes the arity, so fire/2 and fire/3 never collide.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Union


# ==== terms =================================================================

@dataclass(frozen=True)
class Constant:
    name: str


@dataclass(frozen=True)
class NumberConstant:
    value: int


@dataclass(frozen=True)
class Variable:
    name: str


@dataclass(frozen=True)
class Anonymous:
    """The `_` marker: fresh, unnamed, never bound."""


Term = Union[Constant, NumberConstant, Variable, Anonymous]

ANON = Anonymous()

PredKey = "tuple[str, int]"


@dataclass(frozen=True)
class Atom:
    predicate: str
    args: tuple[Term, ...] = ()

    @property
    def key(self) -> tuple[str, int]:
        return (self.predicate, len(self.args))

    def is_ground(self) -> bool:
        return all(isinstance(t, (Constant, NumberConstant)) for t in self.args)


@dataclass(frozen=True)
class Literal:
    atom: Atom
    positive: bool = True


@dataclass(frozen=True)
class Rule:
    head: Atom
    body: tuple[Literal, ...] = ()


@dataclass(frozen=True)
class Program:
    facts: tuple[Atom, ...] = ()
    rules: tuple[Rule, ...] = ()


def atom_variables(atom: Atom) -> set[str]:
    return {t.name for t in atom.args if isinstance(t, Variable)}


# ==== substitutions =========================================================

class Substitution:
    """Immutable map from variable name to term.

    Kept idempotent: no stored value contains a variable that is itself
    bound, so applying a substitution twice equals applying it once.
    """

    __slots__ = ("_bindings",)

    def __init__(self, bindings: Mapping[str, Term] | Iterable[tuple[str, Term]] = ()):
        object.__setattr__(self, "_bindings", dict(bindings))

    def get(self, name: str) -> Term | None:
        return self._bindings.get(name)

    def items(self) -> Iterator[tuple[str, Term]]:
        return iter(self._bindings.items())

    def __contains__(self, name: str) -> bool:
        return name in self._bindings

    def __len__(self) -> int:
        return len(self._bindings)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Substitution):
            return NotImplemented
        return self._bindings == other._bindings

    def __hash__(self) -> int:
        return hash(frozenset(self._bindings.items()))

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}={format_term(v)}" for k, v in sorted(self._bindings.items()))
        return f"Substitution({inner})"


EMPTY_SUBSTITUTION = Substitution()


def apply_substitution(atom: Atom, subst: Substitution) -> Atom:
    """Replace bound variables in `atom`; anonymous markers pass through."""
    out = []
    for t in atom.args:
        if isinstance(t, Variable):
            bound = subst.get(t.name)
            out.append(bound if bound is not None else t)
        else:
            out.append(t)
    return Atom(atom.predicate, tuple(out))


def unify(a: Atom, b: Atom) -> Substitution | None:
    """Most general unifier of two flat atoms, or None.

    Anonymous markers are rejected: callers rename them to fresh variables
    first, otherwise the result could not reproduce both inputs.
    """
    if a.predicate != b.predicate or len(a.args) != len(b.args):
        return None

    bindings: dict[str, Term] = {}

    def resolve(t: Term) -> Term:
        while isinstance(t, Variable) and t.name in bindings:
            t = bindings[t.name]
        return t

    for x, y in zip(a.args, b.args):
        x = resolve(x)
        y = resolve(y)
        if isinstance(x, Anonymous) or isinstance(y, Anonymous):
            raise ValueError("cannot unify over an anonymous marker, rename it first")
        if x == y:
            continue
        if isinstance(x, Variable):
            bindings[x.name] = y
        elif isinstance(y, Variable):
            bindings[y.name] = x
        else:
            return None
    # flatten chains so the substitution is idempotent
    return Substitution({k: resolve(v) for k, v in bindings.items()})


# ==== formatting ============================================================

_UNQUOTED = re.compile(r"[a-z][A-Za-z0-9_]*\Z")

# identifiers that would change meaning if printed bare in a body
_RESERVED = {"not"}


def format_term(t: Term) -> str:
    if isinstance(t, Constant):
        if _UNQUOTED.match(t.name) and t.name not in _RESERVED:
            return t.name
        return "'" + t.name.replace("'", "''") + "'"
    if isinstance(t, NumberConstant):
        return str(t.value)
    if isinstance(t, Variable):
        return t.name
    return "_"


def format_atom(a: Atom) -> str:
    if not a.args:
        return a.predicate
    return a.predicate + "(" + ",".join(format_term(t) for t in a.args) + ")"


def format_literal(lit: Literal) -> str:
    text = format_atom(lit.atom)
    return text if lit.positive else "not " + text


def format_rule(rule: Rule) -> str:
    if not rule.body:
        return format_atom(rule.head) + "."
    body = ", ".join(format_literal(lit) for lit in rule.body)
    return f"{format_atom(rule.head)} :- {body}."


def format_program(program: Program) -> str:
    """Canonical text: facts then rules, one clause per line."""
    lines = [format_atom(f) + "." for f in program.facts]
    lines += [format_rule(r) for r in program.rules]
    return "".join(line + "\n" for line in lines)
