"""Breadth-first forward search over ground action applications.

Plans are optimal in step count: the frontier is expanded one depth
layer at a time, so the first state satisfying the goal yields a
shortest plan. State identity for duplicate pruning is the snapshot
digest of the mutable facts only (predicates any schema effect can
touch); everything else is invariant during search.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Iterable, Sequence

from collections import deque

from .actions import ActionSchema, GroundAction, apply_action, ground_applicable, validate_plan
from .inference import DerivedModel, evaluate, query
from .terms import Atom, Literal, Rule
from .worldmodel import snapshot

STATUS_PLAN = "plan"
STATUS_UNSOLVABLE = "unsolvable"
STATUS_EXHAUSTED = "exhausted"
STATUS_KEEP = "keep"


@dataclass(frozen=True)
class PlannerConfig:
    max_depth: int = 64
    max_expansions: int = 1_000_000
    time_budget_ms: int = 30_000


DEFAULT_CONFIG = PlannerConfig()


@dataclass(frozen=True)
class SearchStats:
    expanded: int
    generated: int
    duplicates_pruned: int
    max_frontier: int
    elapsed_ms: int


@dataclass(frozen=True)
class Plan:
    steps: tuple[GroundAction, ...]
    proven_minimal: bool = True


@dataclass(frozen=True)
class PlanResult:
    status: str  # plan | unsolvable | exhausted
    plan: Plan | None
    stats: SearchStats


@dataclass(frozen=True)
class ReplanResult:
    status: str  # keep | plan | unsolvable | exhausted
    plan: Plan | None = None
    stats: SearchStats | None = None


class _ModelCache:
    """Derived models per search, keyed by the rule-relevant fact subset."""

    def __init__(self, rules: Sequence[Rule]):
        self.rules = tuple(rules)
        relevant: set[tuple[str, int]] = set()
        for rule in rules:
            relevant.add(rule.head.key)
            for lit in rule.body:
                relevant.add(lit.atom.key)
        self.relevant = relevant
        self.cache: dict[frozenset[Atom], DerivedModel] = {}

    def model(self, state: frozenset[Atom]) -> DerivedModel:
        key = frozenset(a for a in state if a.key in self.relevant)
        hit = self.cache.get(key)
        if hit is None:
            hit = evaluate(state, self.rules)
            self.cache[key] = hit
        return hit


def plan(initial: Iterable[Atom], rules: Sequence[Rule],
         schemas: Sequence[ActionSchema], goal: Sequence[Literal],
         config: PlannerConfig = DEFAULT_CONFIG) -> PlanResult:
    """Search for a shortest plan reaching the goal.

    Unsolvable is only reported when the reachable space was fully
    enumerated inside the budgets; any tripped budget (depth, expansion
    count, wall clock) downgrades the verdict to exhausted.
    """
    t0 = time.monotonic()
    start = frozenset(initial)
    models = _ModelCache(rules)

    mutable = {atom.key for s in schemas for atom in s.deletes + s.adds}

    def identity(state: frozenset[Atom]) -> int:
        return snapshot(a for a in state if a.key in mutable).digest

    def satisfied(state: frozenset[Atom]) -> bool:
        return bool(query(state, models.model(state), goal).answers)

    frontier: deque[tuple[frozenset[Atom], int]] = deque([(start, 0)])
    parents: dict[int, tuple[int, GroundAction] | None] = {identity(start): None}
    expanded = 0
    generated = 0
    pruned = 0
    max_frontier = 1
    truncated = False

    def stats() -> SearchStats:
        return SearchStats(expanded, generated, pruned, max_frontier,
                           int((time.monotonic() - t0) * 1000))

    def unwind(key: int) -> Plan:
        steps: list[GroundAction] = []
        link = parents[key]
        while link is not None:
            parent_key, action = link
            steps.append(action)
            link = parents[parent_key]
        return Plan(tuple(reversed(steps)))

    while frontier:
        if expanded >= config.max_expansions:
            truncated = True
            break
        if (time.monotonic() - t0) * 1000 >= config.time_budget_ms:
            truncated = True
            break
        state, depth = frontier.popleft()
        expanded += 1
        key = identity(state)
        if satisfied(state):
            return PlanResult(STATUS_PLAN, unwind(key), stats())
        at_depth_limit = depth >= config.max_depth
        for action in ground_applicable(state, models.model(state), schemas):
            generated += 1
            successor = apply_action(state, action)
            skey = identity(successor)
            if skey in parents:
                pruned += 1
                continue
            if at_depth_limit:
                # a reachable state goes unexplored, so absence of a plan
                # can no longer be proven
                truncated = True
                continue
            parents[skey] = (key, action)
            frontier.append((successor, depth + 1))
            if len(frontier) > max_frontier:
                max_frontier = len(frontier)

    status = STATUS_EXHAUSTED if (truncated or frontier) else STATUS_UNSOLVABLE
    return PlanResult(status, None, stats())


def replan(current: Iterable[Atom], rules: Sequence[Rule],
           schemas: Sequence[ActionSchema], remaining: Sequence[GroundAction],
           goal: Sequence[Literal],
           config: PlannerConfig = DEFAULT_CONFIG) -> ReplanResult:
    """Keep the remaining plan when it still validates, else search fresh."""
    check = validate_plan(current, rules, schemas, remaining, goal)
    if check.ok:
        return ReplanResult(STATUS_KEEP)
    result = plan(current, rules, schemas, goal, config)
    return ReplanResult(result.status, result.plan, result.stats)
