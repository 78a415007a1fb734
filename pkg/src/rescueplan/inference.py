"""Stratified evaluation with negation as failure.

Rules are split into strata so that a predicate is fully computed before
any rule reads its negation. Within a stratum, evaluation is semi-naive:
after an initial pass, a rule re-fires only through a delta of facts new
in the previous round, one delta literal per in-stratum positive body
occurrence, which avoids rediscovering the same joins every round.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import NotStratifiableError, UnsafeQueryError
from .terms import (
    Anonymous,
    Atom,
    Constant,
    Literal,
    NumberConstant,
    Rule,
    Substitution,
    Term,
    Variable,
    format_literal,
)

PredKey = tuple[str, int]


@dataclass(frozen=True)
class Stratification:
    """Predicate level assignment plus the grouped evaluation order."""

    levels: Mapping[PredKey, int]
    strata: tuple[tuple[PredKey, ...], ...]


@dataclass(frozen=True)
class DerivedModel:
    derived: frozenset[Atom]
    strata_order: tuple[tuple[PredKey, ...], ...]


@dataclass(frozen=True)
class QueryResult:
    answers: frozenset[Substitution]
    grounded: bool


# ==== stratification ========================================================

def stratify(rules: Sequence[Rule]) -> Stratification:
    """Assign minimal stratum levels; raises NotStratifiableError on a
    cycle through negation."""
    preds: set[PredKey] = set()
    for rule in rules:
        preds.add(rule.head.key)
        for lit in rule.body:
            preds.add(lit.atom.key)

    levels: dict[PredKey, int] = {p: 0 for p in preds}
    bound = max(len(preds), 1)
    for _ in range(bound + 1):
        changed = False
        for rule in rules:
            h = rule.head.key
            for lit in rule.body:
                need = levels[lit.atom.key] + (0 if lit.positive else 1)
                if levels[h] < need:
                    levels[h] = need
                    changed = True
        if not changed:
            break
    else:
        raise NotStratifiableError(_negative_cycle(rules))

    grouped: dict[int, list[PredKey]] = {}
    for p, lv in levels.items():
        grouped.setdefault(lv, []).append(p)
    strata = tuple(tuple(sorted(grouped[lv])) for lv in sorted(grouped))
    return Stratification(levels, strata)


def _negative_cycle(rules: Sequence[Rule]) -> tuple[PredKey, ...]:
    """Find one head-to-body dependency cycle that crosses a negative edge."""
    pos_edges: dict[PredKey, set[PredKey]] = {}
    neg_edges: dict[PredKey, set[PredKey]] = {}
    for rule in rules:
        h = rule.head.key
        for lit in rule.body:
            store = pos_edges if lit.positive else neg_edges
            store.setdefault(h, set()).add(lit.atom.key)

    def reachable_path(src: PredKey, dst: PredKey) -> list[PredKey] | None:
        # BFS over both edge kinds, returns node path src..dst
        frontier = [[src]]
        seen = {src}
        while frontier:
            path = frontier.pop(0)
            node = path[-1]
            if node == dst:
                return path
            for nxt in sorted(pos_edges.get(node, ()) | neg_edges.get(node, ())):
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(path + [nxt])
        return None

    for h in sorted(neg_edges):
        for dep in sorted(neg_edges[h]):
            back = reachable_path(dep, h)
            if back is not None:
                return tuple([h] + back)
    raise AssertionError("no negative cycle found in non-stratifiable rules")


# ==== evaluation ============================================================

def _index(facts: Iterable[Atom]) -> dict[PredKey, set[Atom]]:
    out: dict[PredKey, set[Atom]] = {}
    for fact in facts:
        out.setdefault(fact.key, set()).add(fact)
    return out


def _match(pattern: Atom, fact: Atom, bindings: dict[str, Term]) -> dict[str, Term] | None:
    """Match a possibly open atom against a ground fact, extending bindings."""
    new = bindings
    for p, f in zip(pattern.args, fact.args):
        if isinstance(p, Anonymous):
            continue
        if isinstance(p, Variable):
            bound = new.get(p.name)
            if bound is None:
                if new is bindings:
                    new = dict(bindings)
                new[p.name] = f
            elif bound != f:
                return None
        elif p != f:
            return None
    return new


def _ground(atom: Atom, bindings: dict[str, Term]) -> Atom:
    return Atom(atom.predicate,
                tuple(bindings[t.name] if isinstance(t, Variable) else t
                      for t in atom.args))


def _apply_rule(rule: Rule, index: dict[PredKey, set[Atom]],
                delta_at: int | None, delta: set[Atom]) -> set[Atom]:
    """All head instances derivable from the body.

    Positive literals are joined in source order, negatives are checked
    afterwards (safety guarantees they are ground by then). When
    delta_at is given, that positive occurrence ranges over the delta
    set only.
    """
    positives = [(i, lit.atom) for i, lit in enumerate(rule.body) if lit.positive]
    negatives = [lit.atom for lit in rule.body if not lit.positive]
    derived: set[Atom] = set()

    def extend(k: int, bindings: dict[str, Term]):
        if k == len(positives):
            for neg in negatives:
                grounded = _ground(neg, bindings)
                if grounded in index.get(grounded.key, ()):
                    return
            derived.add(_ground(rule.head, bindings))
            return
        body_idx, pattern = positives[k]
        facts = delta if body_idx == delta_at else index.get(pattern.key, set())
        for fact in facts:
            nb = _match(pattern, fact, bindings)
            if nb is not None:
                extend(k + 1, nb)

    extend(0, {})
    return derived


def evaluate(base: Iterable[Atom], rules: Sequence[Rule]) -> DerivedModel:
    """Bottom-up model of the rules over a base fact set.

    Returns only derived atoms (instances of rule head predicates),
    including any that restate base facts of those predicates.
    """
    strat = stratify(rules)
    index = _index(base)
    head_keys = {rule.head.key for rule in rules}

    for level in range(len(strat.strata)):
        stratum_rules = [r for r in rules if strat.levels[r.head.key] == level]
        if not stratum_rules:
            continue
        stratum_heads = {r.head.key for r in stratum_rules}

        def known(atom: Atom) -> bool:
            return atom in index.get(atom.key, ())

        delta: set[Atom] = set()
        for rule in stratum_rules:
            delta |= {a for a in _apply_rule(rule, index, None, set()) if not known(a)}
        while delta:
            for atom in delta:
                index.setdefault(atom.key, set()).add(atom)
            by_pred: dict[PredKey, set[Atom]] = {}
            for atom in delta:
                by_pred.setdefault(atom.key, set()).add(atom)
            next_delta: set[Atom] = set()
            for rule in stratum_rules:
                for i, lit in enumerate(rule.body):
                    if not lit.positive or lit.atom.key not in stratum_heads:
                        continue
                    pred_delta = by_pred.get(lit.atom.key)
                    if not pred_delta:
                        continue
                    out = _apply_rule(rule, index, i, pred_delta)
                    next_delta |= {a for a in out if not known(a)}
            delta = next_delta

    derived = {atom for key in head_keys for atom in index.get(key, ())}
    return DerivedModel(frozenset(derived), strat.strata)


# ==== queries ===============================================================

def query(base: Iterable[Atom], model: DerivedModel | None,
          goal: Sequence[Literal]) -> QueryResult:
    """Evaluate a literal conjunction left to right against base + derived.

    A negative literal must be ground once earlier bindings are applied,
    otherwise UnsafeQueryError is raised.
    """
    facts: set[Atom] = set(base)
    if model is not None:
        facts |= model.derived
    index = _index(facts)

    answers: set[Substitution] = set()

    def step(k: int, bindings: dict[str, Term]):
        if k == len(goal):
            answers.add(Substitution(bindings))
            return
        lit = goal[k]
        if lit.positive:
            for fact in index.get(lit.atom.key, ()):
                nb = _match(lit.atom, fact, bindings)
                if nb is not None:
                    step(k + 1, nb)
            return
        open_vars = [t for t in lit.atom.args
                     if isinstance(t, Anonymous)
                     or (isinstance(t, Variable) and t.name not in bindings)]
        if open_vars:
            raise UnsafeQueryError(
                f"negative literal {format_literal(lit)} is not ground at "
                f"position {k + 1}; bind its variables in an earlier positive literal")
        grounded = _ground(lit.atom, bindings)
        if grounded not in index.get(grounded.key, ()):
            step(k + 1, bindings)

    step(0, {})
    grounded_query = all(
        all(isinstance(t, (Constant, NumberConstant)) for t in lit.atom.args)
        for lit in goal)
    return QueryResult(frozenset(answers), grounded_query)
