"""Action schemas: parsing, grounding, application and plan validation.

An action file declares fluent predicates and schemas of the shape

    action(head(Params...), [agent guards], [preconditions],
           [del(...), add(...)]).

Guards and preconditions are flat literals evaluated against the state
plus the derived model. Effects may only touch declared fluents, and
deletes are applied before adds.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    ActionModelError,
    EffectOnDerivedPredicateError,
    KbSyntaxError,
    UnboundEffectVariableError,
    UnsafeSchemaError,
)
from .inference import DerivedModel, evaluate, query
from .parser import GList, GStruct, lower_flat_atom, lower_literal_list, read_structs
from .terms import (
    Anonymous,
    Atom,
    Literal,
    Rule,
    Substitution,
    Term,
    Variable,
    apply_substitution,
    atom_variables,
    format_atom,
    format_literal,
    format_term,
    unify,
)

PredKey = tuple[str, int]

# topology predicates are never mutable
RESERVED_STATIC: frozenset[PredKey] = frozenset({("node", 1), ("link", 2)})


@dataclass(frozen=True)
class ActionSchema:
    name: str
    params: tuple[Term, ...]
    agent_guard: tuple[Literal, ...]
    preconditions: tuple[Literal, ...]
    deletes: tuple[Atom, ...]
    adds: tuple[Atom, ...]

    @property
    def head(self) -> Atom:
        return Atom(self.name, self.params)


@dataclass(frozen=True)
class GroundAction:
    name: str
    args: tuple[Term, ...]
    deletes: tuple[Atom, ...]
    adds: tuple[Atom, ...]


@dataclass(frozen=True)
class ActionDomain:
    fluents: frozenset[PredKey]
    schemas: tuple[ActionSchema, ...]


@dataclass(frozen=True)
class PlanValidation:
    ok: bool
    failed_index: int | None = None
    reason: str | None = None


def format_ground_action(action: GroundAction) -> str:
    return format_atom(Atom(action.name, action.args))


# ==== parsing ===============================================================

def _parse_schema(struct: GStruct, source: str,
                  fluents: frozenset[PredKey]) -> ActionSchema:
    if len(struct.args) != 4:
        raise KbSyntaxError("expected action(Head, [Guards], [Pres], [Effects])",
                            source, struct.line, struct.column)
    head_node, guard_node, pre_node, eff_node = struct.args
    head = lower_flat_atom(head_node, source, "an action head")
    if any(isinstance(t, Anonymous) for t in head.args):
        raise UnsafeSchemaError(
            f"{head.predicate}: anonymous marker is not allowed in an action head")
    guard = lower_literal_list(guard_node, source, f"{head.predicate} guards")
    pre = lower_literal_list(pre_node, source, f"{head.predicate} preconditions")

    if not isinstance(eff_node, GList):
        raise KbSyntaxError("expected a list of del/add effects", source,
                            struct.line, struct.column)
    deletes: list[Atom] = []
    adds: list[Atom] = []
    for item in eff_node.items:
        if not (isinstance(item, GStruct) and item.functor in ("del", "add")
                and len(item.args) == 1):
            raise KbSyntaxError(f"{head.predicate}: effects must be del(Fact) or add(Fact)",
                                source, struct.line, struct.column)
        atom = lower_flat_atom(item.args[0], source, f"{head.predicate} effects")
        (deletes if item.functor == "del" else adds).append(atom)

    # scoping: negatives need earlier binders, effects need any binder
    bound = atom_variables(head)
    for lit in guard + pre:
        if lit.positive:
            bound |= atom_variables(lit.atom)
            continue
        if any(isinstance(t, Anonymous) for t in lit.atom.args):
            raise UnsafeSchemaError(
                f"{head.predicate}: anonymous marker is not allowed under negation")
        loose = atom_variables(lit.atom) - bound
        if loose:
            raise UnsafeSchemaError(
                f"{head.predicate}: variable {sorted(loose)[0]} in negative literal "
                f"{format_literal(lit)} has no earlier positive binder")
    positive_vars = set()
    for lit in guard + pre:
        if lit.positive:
            positive_vars |= atom_variables(lit.atom)
    loose = atom_variables(head) - positive_vars
    if loose:
        raise UnsafeSchemaError(
            f"{head.predicate}: head variable {sorted(loose)[0]} is not bound by "
            f"any positive guard or precondition, instances cannot be enumerated")
    for atom in deletes + adds:
        if any(isinstance(t, Anonymous) for t in atom.args):
            raise UnboundEffectVariableError(
                f"{head.predicate}: anonymous marker in effect {format_atom(atom)}")
        loose = atom_variables(atom) - atom_variables(head) - positive_vars
        if loose:
            raise UnboundEffectVariableError(
                f"{head.predicate}: effect variable {sorted(loose)[0]} in "
                f"{format_atom(atom)} is not bound by the head or a positive literal")
        if atom.key not in fluents:
            raise EffectOnDerivedPredicateError(
                f"{head.predicate}: effect touches {atom.key[0]}/{atom.key[1]}, "
                f"which is not a declared fluent")

    return ActionSchema(head.predicate, head.args, guard, pre,
                        tuple(deletes), tuple(adds))


def parse_actions(text: str, source: str = "<actions>") -> ActionDomain:
    """Parse fluent declarations and action schemas from one file."""
    from .parser import GPredIndicator

    fluents: set[PredKey] = set()
    schema_structs: list[GStruct] = []
    for struct in read_structs(text, source):
        if struct.functor == "fluent" and len(struct.args) == 1:
            ind = struct.args[0]
            if not isinstance(ind, GPredIndicator):
                raise KbSyntaxError("expected fluent(name/arity)", source,
                                    struct.line, struct.column)
            key = (ind.name, ind.arity)
            if key in RESERVED_STATIC:
                raise ActionModelError(
                    f"fluent declaration may not name static topology "
                    f"predicate {key[0]}/{key[1]}")
            fluents.add(key)
        elif struct.functor == "action":
            schema_structs.append(struct)
        else:
            raise KbSyntaxError(
                f"expected fluent(...) or action(...), found {struct.functor}(...)",
                source, struct.line, struct.column)

    frozen = frozenset(fluents)
    schemas = tuple(_parse_schema(s, source, frozen) for s in schema_structs)
    return ActionDomain(frozen, schemas)


# ==== grounding and application =============================================

def ground_applicable(state: Iterable[Atom], model: DerivedModel | None,
                      schemas: Sequence[ActionSchema]) -> list[GroundAction]:
    """Every applicable ground instance, in a deterministic order.

    Order: schemas as written, then instances sorted by printed
    arguments. del/add overlaps collapse into add (deletes run first,
    so deleting an atom that is also added is a no-op).
    """
    facts = set(state)
    if model is not None:
        facts |= model.derived

    out: list[GroundAction] = []
    for schema in schemas:
        res = query(facts, None, schema.agent_guard + schema.preconditions)
        instances: set[GroundAction] = set()
        for sub in res.answers:
            args = tuple(_bind(t, sub) for t in schema.params)
            adds = tuple(apply_substitution(a, sub) for a in schema.adds)
            add_set = set(adds)
            deletes = tuple(d for d in (apply_substitution(a, sub) for a in schema.deletes)
                            if d not in add_set)
            instances.add(GroundAction(schema.name, args, deletes, adds))
        out.extend(sorted(instances, key=_instance_sort_key))
    return out


def _bind(term: Term, sub: Substitution) -> Term:
    if isinstance(term, Variable):
        bound = sub.get(term.name)
        if bound is None:
            raise ActionModelError(f"parameter {term.name} left unbound")
        return bound
    return term


def _instance_sort_key(action: GroundAction):
    return (tuple(format_term(t) for t in action.args),
            tuple(format_atom(a) for a in action.deletes),
            tuple(format_atom(a) for a in action.adds))


def apply_action(state: Iterable[Atom], action: GroundAction) -> frozenset[Atom]:
    """Successor state: deletes applied before adds, all else untouched."""
    after = set(state)
    after.difference_update(action.deletes)
    after.update(action.adds)
    return frozenset(after)


# ==== plan validation =======================================================

def validate_plan(initial: Iterable[Atom], rules: Sequence[Rule],
                  schemas: Sequence[ActionSchema], plan: Sequence[GroundAction],
                  goal: Sequence[Literal]) -> PlanValidation:
    """Replay a plan step by step, then check the goal query.

    Each step must be exactly reproducible by ground_applicable in its
    state; the first failure is reported with the failing index and a
    reason, goal failure uses index len(plan).
    """
    state = frozenset(initial)
    for i, step in enumerate(plan):
        model = evaluate(state, rules)
        if step not in ground_applicable(state, model, schemas):
            return PlanValidation(False, i, _diagnose(state, model, schemas, step))
        state = apply_action(state, step)
    model = evaluate(state, rules)
    if not query(state, model, goal).answers:
        return PlanValidation(False, len(plan), "goal not satisfied")
    return PlanValidation(True)


def _diagnose(state: frozenset[Atom], model: DerivedModel,
              schemas: Sequence[ActionSchema], step: GroundAction) -> str:
    """Name the first guard or precondition that rules the step out."""
    named = [s for s in schemas
             if s.name == step.name and len(s.params) == len(step.args)]
    if not named:
        return f"no schema named {step.name}/{len(step.args)}"
    facts = set(state) | model.derived
    reason = f"{format_ground_action(step)} is not applicable"
    for schema in named:
        seed = unify(schema.head, Atom(step.name, step.args))
        if seed is None:
            continue
        conj = [("guard", lit) for lit in schema.agent_guard]
        conj += [("precondition", lit) for lit in schema.preconditions]
        seeded = [(kind, Literal(apply_substitution(lit.atom, seed), lit.positive))
                  for kind, lit in conj]
        for k in range(len(seeded)):
            if not query(facts, None, [lit for _, lit in seeded[:k + 1]]).answers:
                kind, lit = seeded[k]
                return f"{kind} {format_literal(lit)} failed"
        return f"effects of {format_ground_action(step)} do not match the schema"
    return reason
