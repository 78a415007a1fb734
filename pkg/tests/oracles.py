"""Reference implementations the engine must agree with.

Everything here is deliberately naive: blind substitution enumeration
over the constant universe, full recomputation every round, no indexes,
no deltas, no shared code with the engine beyond the term dataclasses.
Slow but auditable by eye. Expected values frozen into the test suite
were produced by these functions.
"""

from __future__ import annotations

import itertools

from rescueplan.terms import Anonymous, Atom, Literal, Rule, Variable


def constants_of(atoms):
    """Every constant term appearing in the given atoms, deduplicated."""
    seen = {}
    for atom in atoms:
        for term in atom.args:
            if not isinstance(term, (Variable, Anonymous)):
                seen[term] = None
    return list(seen)


def _rename_blanks(atoms):
    """Each `_` becomes its own fresh variable so blind enumeration works."""
    counter = itertools.count()
    out = []
    for atom in atoms:
        args = tuple(Variable(f" blank{next(counter)}") if isinstance(t, Anonymous) else t
                     for t in atom.args)
        out.append(Atom(atom.predicate, args))
    return out


def _var_names(atoms):
    names = {}
    for atom in atoms:
        for term in atom.args:
            if isinstance(term, Variable):
                names[term.name] = None
    return list(names)


def _plug(atom, binding):
    return Atom(atom.predicate,
                tuple(binding[t.name] if isinstance(t, Variable) else t
                      for t in atom.args))


def rule_consequences(rule, known, universe):
    """Head atoms derivable from one rule by trying every substitution."""
    body_atoms = _rename_blanks([lit.atom for lit in rule.body])
    signs = [lit.positive for lit in rule.body]
    names = _var_names(body_atoms + [rule.head])
    out = set()
    for combo in itertools.product(universe, repeat=len(names)):
        binding = dict(zip(names, combo))
        if all((_plug(a, binding) in known) == sign
               for a, sign in zip(body_atoms, signs)):
            out.add(_plug(rule.head, binding))
    return out


def naive_model(facts, rules, levels):
    """Full fact set (base plus derived) under stratified negation.

    `levels` is any stratification of `rules`; callers supply one known
    by construction rather than computing it with engine code.
    """
    universe = constants_of(
        list(facts) + [r.head for r in rules]
        + [lit.atom for r in rules for lit in r.body])
    known = set(facts)
    for level in sorted(set(levels.values())):
        layer = [r for r in rules if levels[r.head.key] == level]
        while True:
            new = set()
            for rule in layer:
                new |= rule_consequences(rule, known, universe)
            if new <= known:
                break
            known |= new
    return known


def derived_of(facts, rules, levels):
    """The derived model alone: every atom whose predicate heads a rule."""
    heads = {r.head.key for r in rules}
    return frozenset(a for a in naive_model(facts, rules, levels)
                     if a.key in heads)


# ==== action grounding and planning =========================================

def schema_transitions(full_state, schema, universe):
    """(name, args, dels, adds) for every binding satisfying guard + pre."""
    checks = list(schema.agent_guard) + list(schema.preconditions)
    atoms = _rename_blanks([lit.atom for lit in checks])
    signs = [lit.positive for lit in checks]
    names = _var_names(atoms + [schema.head])
    out = []
    for combo in itertools.product(universe, repeat=len(names)):
        binding = dict(zip(names, combo))
        if all((_plug(a, binding) in full_state) == sign
               for a, sign in zip(atoms, signs)):
            out.append((schema.name,
                        tuple(binding[t.name] if isinstance(t, Variable) else t
                              for t in schema.head.args),
                        frozenset(_plug(a, binding) for a in schema.deletes),
                        frozenset(_plug(a, binding) for a in schema.adds)))
    return out


def ground_actions(state, rules, levels, schemas):
    """Applicable ground actions as a set of (name, args, dels, adds)."""
    full = naive_model(state, rules, levels)
    universe = constants_of(full)
    out = set()
    for schema in schemas:
        out.update(schema_transitions(full, schema, universe))
    return out


def bfs_plan_length(initial, rules, levels, schemas, goal_atoms, depth_cap=40):
    """Minimal plan length by layer-by-layer exploration.

    Returns ("plan", length) or ("unsolvable", None). Goal atoms must be
    ground; they are checked against base plus derived facts. Raises if
    the depth cap trips before the space is exhausted, so callers know
    the verdict would have been unreliable.
    """
    goal_atoms = list(goal_atoms)

    def satisfied(state):
        full = naive_model(state, rules, levels)
        return all(g in full for g in goal_atoms)

    start = frozenset(initial)
    if satisfied(start):
        return ("plan", 0)
    seen = {start}
    frontier = [start]
    for depth in range(1, depth_cap + 1):
        layer = []
        for state in frontier:
            full = naive_model(state, rules, levels)
            universe = constants_of(full)
            for schema in schemas:
                for _name, _args, dels, adds in schema_transitions(
                        full, schema, universe):
                    succ = frozenset((state - dels) | adds)
                    if succ in seen:
                        continue
                    seen.add(succ)
                    if satisfied(succ):
                        return ("plan", depth)
                    layer.append(succ)
        if not layer:
            return ("unsolvable", None)
        frontier = layer
    raise RuntimeError("depth cap hit; oracle verdict unreliable")


# hand-checked stratification of the bundled movement rules
TEHRAN_LEVELS = {
    ("edge", 2): 0,
    ("fire_either", 2): 0,
    ("police_block_either", 2): 0,
    ("scape_path", 2): 1,
    ("safe_area", 1): 1,
    ("passable_fire", 2): 1,
}
