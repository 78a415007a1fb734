"""Scenario sessions: one mutable fact set, a clock and an active plan.

A session is loaded from a scenario bundle directory:

    site.facts      map and initial placements (required)
    domain.rules    derivation rules (required)
    domain.actions  fluent declarations and action schemas (required)
    events.facts    optional scripted timeline
    goal.facts      optional default goal, one goal([...]) clause

All mutation goes through post_event and execute_step, both journaled,
so replaying the journal over the initial facts reproduces the state.
Any state-changing event while a plan is active marks the plan dirty;
execution is then blocked until replan decides the plan's fate.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Sequence

from .actions import ActionDomain, GroundAction, apply_action, parse_actions
from .errors import ScenarioLoadError, TimestampRegressionError, DirtyPlanError, \
    NoActivePlanError, PlanCompleteError
from .inference import DerivedModel, QueryResult, evaluate, query, stratify
from .parser import lower_literal_list, parse_program, read_structs
from .planner import (
    DEFAULT_CONFIG,
    Plan,
    PlannerConfig,
    PlanResult,
    ReplanResult,
    STATUS_KEEP,
    STATUS_PLAN,
    plan as search_plan,
    replan as search_replan,
)
from .terms import Atom, Literal, Program, Rule
from .worldmodel import EventRecord, Snapshot, apply_event, parse_events, snapshot

BUNDLE_REQUIRED = ("site.facts", "domain.rules", "domain.actions")


@dataclass(frozen=True)
class ScenarioBundle:
    path: str
    site: Program
    rules: tuple[Rule, ...]
    extra_facts: tuple[Atom, ...]  # facts found in domain.rules
    domain: ActionDomain
    timeline: tuple[EventRecord, ...]
    default_goal: tuple[Literal, ...] | None


@dataclass(frozen=True)
class Resource:
    id: str
    kind: str
    subtype: str
    location: str | None


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def read_bundle(path: str) -> ScenarioBundle:
    """Load and parse the bundle files; semantic checks happen in Session."""
    for name in BUNDLE_REQUIRED:
        if not os.path.isfile(os.path.join(path, name)):
            raise ScenarioLoadError(f"scenario bundle at {path!r} is missing {name}")

    site = parse_program(_read(os.path.join(path, "site.facts")), "site.facts")
    if site.rules:
        raise ScenarioLoadError("site.facts must contain facts only, found a rule")
    rules_prog = parse_program(_read(os.path.join(path, "domain.rules")), "domain.rules")
    domain = parse_actions(_read(os.path.join(path, "domain.actions")), "domain.actions")

    timeline: tuple[EventRecord, ...] = ()
    events_path = os.path.join(path, "events.facts")
    if os.path.isfile(events_path):
        records = parse_events(_read(events_path), "events.facts")
        timeline = tuple(sorted(records, key=lambda r: r.timestamp))

    default_goal = None
    goal_path = os.path.join(path, "goal.facts")
    if os.path.isfile(goal_path):
        structs = read_structs(_read(goal_path), "goal.facts")
        if len(structs) != 1 or structs[0].functor != "goal" or len(structs[0].args) != 1:
            raise ScenarioLoadError("goal.facts must hold exactly one goal([...]) clause")
        default_goal = lower_literal_list(structs[0].args[0], "goal.facts", "the goal")
        if not default_goal:
            raise ScenarioLoadError("goal.facts holds an empty goal")

    return ScenarioBundle(path, site, rules_prog.rules, rules_prog.facts,
                          domain, timeline, default_goal)


class Session:
    """Mutable scenario state plus planning bookkeeping."""

    def __init__(self, bundle: ScenarioBundle):
        self.bundle = bundle
        self.rules = bundle.rules
        self.domain = bundle.domain
        self.initial_facts = frozenset(bundle.site.facts) | frozenset(bundle.extra_facts)
        self.facts: frozenset[Atom] = self.initial_facts
        self.clock = 0
        self.journal: list[tuple[str, object]] = []
        self.goal: tuple[Literal, ...] | None = None
        self.plan: Plan | None = None
        self.cursor = 0
        self.dirty = False
        self._model_for: tuple[frozenset[Atom], DerivedModel] | None = None

        stratify(self.rules)  # reject unstratifiable domains at load time
        heads = {r.head.key for r in self.rules}
        clash = sorted(self.domain.fluents & heads)
        if clash:
            name, arity = clash[0]
            raise ScenarioLoadError(
                f"fluent {name}/{arity} is also the head of a rule; "
                f"fluents and derived predicates must not overlap")

    # ---- read side ----

    def derived(self) -> DerivedModel:
        if self._model_for is None or self._model_for[0] is not self.facts:
            self._model_for = (self.facts, evaluate(self.facts, self.rules))
        return self._model_for[1]

    def snapshot(self) -> Snapshot:
        return snapshot(self.facts)

    def query(self, goal: Sequence[Literal]) -> QueryResult:
        return query(self.facts, self.derived(), goal)

    def resources(self) -> list[Resource]:
        locations = {}
        for atom in self.facts:
            if atom.key == ("at", 2):
                locations[atom.args[0]] = atom.args[1].name
        out = []
        for atom in self.facts:
            if atom.key in (("crane", 2), ("truck", 2)):
                out.append(Resource(atom.args[0].name, atom.predicate,
                                    atom.args[1].name,
                                    locations.get(atom.args[0])))
        return sorted(out, key=lambda r: r.id)

    @property
    def plan_active(self) -> bool:
        return self.plan is not None and self.cursor < len(self.plan.steps)

    @property
    def remaining_steps(self) -> tuple[GroundAction, ...]:
        if self.plan is None:
            return ()
        return self.plan.steps[self.cursor:]

    # ---- mutation side ----

    def post_event(self, event: EventRecord) -> bool:
        """Apply one timestamped event; returns whether the state changed."""
        if event.timestamp < self.clock:
            raise TimestampRegressionError(
                f"event at t={event.timestamp} is older than the session "
                f"clock t={self.clock}")
        self.facts, changed = apply_event(self.facts, event)
        self.clock = event.timestamp
        self.journal.append(("event", event))
        if changed and self.plan_active:
            self.dirty = True
        return changed

    def request_plan(self, goal: Sequence[Literal],
                     config: PlannerConfig = DEFAULT_CONFIG) -> PlanResult:
        """Plan for a goal; installs the plan only when one is found."""
        result = search_plan(self.facts, self.rules, self.domain.schemas,
                             goal, config)
        if result.status == STATUS_PLAN:
            self.goal = tuple(goal)
            self.plan = result.plan
            self.cursor = 0
            self.dirty = False
        return result

    def replan(self, config: PlannerConfig = DEFAULT_CONFIG) -> ReplanResult:
        """Re-validate the remaining plan, search again if it broke."""
        if self.plan is None or self.goal is None:
            raise NoActivePlanError("no plan to revalidate")
        result = search_replan(self.facts, self.rules, self.domain.schemas,
                               self.remaining_steps, self.goal, config)
        if result.status == STATUS_KEEP:
            self.dirty = False
        elif result.status == STATUS_PLAN:
            self.plan = result.plan
            self.cursor = 0
            self.dirty = False
        # on unsolvable/exhausted the stale plan stays blocked behind dirty
        return result

    def execute_step(self) -> tuple[GroundAction, int, bool]:
        """Apply the next plan step; returns (action, new cursor, done)."""
        if self.plan is None:
            raise NoActivePlanError("no active plan")
        if self.cursor >= len(self.plan.steps):
            raise PlanCompleteError("plan already fully executed")
        if self.dirty:
            raise DirtyPlanError("plan was invalidated by events; replan first")
        step = self.plan.steps[self.cursor]
        self.facts = apply_action(self.facts, step)
        self.cursor += 1
        self.journal.append(("action", step))
        return step, self.cursor, self.cursor == len(self.plan.steps)

    # ---- hypotheticals ----

    def what_if(self, events: Sequence[EventRecord], goal: Sequence[Literal],
                config: PlannerConfig = DEFAULT_CONFIG) -> PlanResult:
        """Plan against a hypothetical state; the live session is untouched."""
        state = self.facts
        for event in events:
            state, _ = apply_event(state, event)
        return search_plan(state, self.rules, self.domain.schemas, goal, config)

    def replay(self) -> frozenset[Atom]:
        """Re-fold the journal over the initial facts (determinism check)."""
        state = self.initial_facts
        for kind, payload in self.journal:
            if kind == "event":
                state, _ = apply_event(state, payload)
            else:
                state = apply_action(state, payload)
        return state


def load_scenario(path: str) -> Session:
    """Bundle directory to ready session; all load-time checks apply."""
    return Session(read_bundle(path))
