"""Rule-based planning engine for rescue resource dispatch.

A scenario is a fact base describing a damaged road network, a set of
derivation rules, and action schemas for moving resources. The package
parses the fact/rule language, evaluates rules with stratified negation
as failure, grounds and applies actions, searches for shortest plans,
and exposes the whole loop through a CLI and an HTTP service.
"""

from .terms import (
    Anonymous,
    Atom,
    Constant,
    Literal,
    NumberConstant,
    Program,
    Rule,
    Substitution,
    Term,
    Variable,
    apply_substitution,
    format_atom,
    format_program,
    format_rule,
    unify,
)
from .parser import parse_fact, parse_literals, parse_program
from .inference import DerivedModel, QueryResult, Stratification, evaluate, query, stratify
from .worldmodel import (
    EventRecord,
    Snapshot,
    apply_event,
    canonical_facts,
    ingest_site,
    load_tables,
    parse_events,
    snapshot,
)
from .actions import (
    ActionDomain,
    ActionSchema,
    GroundAction,
    PlanValidation,
    apply_action,
    format_ground_action,
    ground_applicable,
    parse_actions,
    validate_plan,
)
from .planner import Plan, PlanResult, PlannerConfig, ReplanResult, SearchStats, plan, replan
from .session import Session, load_scenario

__version__ = "0.1.0"
