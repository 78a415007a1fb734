"""Random input generators for property tests.

Programs come with the stratification that witnessed their construction
so the naive oracle can layer its fixpoint without borrowing engine
code. Scenarios reuse the bundled movement domain over small random
road networks.
"""

from __future__ import annotations

from pathlib import Path

from rescueplan.actions import parse_actions
from rescueplan.parser import parse_program
from rescueplan.terms import Atom, Constant, Literal, Rule, Variable

_VARS = ("X", "Y", "Z")
_CONSTS = tuple(Constant(c) for c in "abcde")


def random_program(rng):
    """(facts, rules, levels): a safe stratified program.

    Negative literals only mention predicates strictly below the head's
    level and head/negative variables are drawn from the positive ones,
    so safety and stratifiability hold by construction.
    """
    preds = []
    levels = {}
    for i in range(rng.randint(3, 8)):
        key = (f"p{i}", rng.choice((1, 2)))
        preds.append(key)
        levels[key] = rng.randint(0, 2)

    facts = set()
    for _ in range(rng.randint(1, 30)):
        name, arity = rng.choice(preds)
        facts.add(Atom(name, tuple(rng.choice(_CONSTS) for _ in range(arity))))

    rules = []
    for _ in range(rng.randint(1, 10)):
        head_name, head_arity = rng.choice(preds)
        head_level = levels[(head_name, head_arity)]
        below = [p for p in preds if levels[p] < head_level]

        body = []
        pos_vars = []
        for _ in range(rng.randint(1, 3)):
            name, arity = rng.choice(
                [p for p in preds if levels[p] <= head_level])
            args = []
            for _ in range(arity):
                if rng.random() < 0.7:
                    var = rng.choice(_VARS)
                    args.append(Variable(var))
                    if var not in pos_vars:
                        pos_vars.append(var)
                else:
                    args.append(rng.choice(_CONSTS))
            body.append(Literal(Atom(name, tuple(args)), True))

        bound = tuple(Variable(v) for v in pos_vars) + _CONSTS
        if below:
            for _ in range(rng.randint(0, 2)):
                name, arity = rng.choice(below)
                args = tuple(rng.choice(bound) for _ in range(arity))
                body.append(Literal(Atom(name, args), False))

        head = Atom(head_name, tuple(rng.choice(bound)
                                     for _ in range(head_arity)))
        rules.append(Rule(head, tuple(body)))
    return frozenset(facts), rules, levels


# ==== rescue scenarios ======================================================

_DOMAIN = None


def movement_domain():
    """(rules, schemas) of the bundled movement domain, parsed once."""
    global _DOMAIN
    if _DOMAIN is None:
        root = Path(__file__).resolve().parents[1] / "scenarios" / "tehran"
        rules = parse_program((root / "domain.rules").read_text(),
                              "domain.rules").rules
        domain = parse_actions((root / "domain.actions").read_text(),
                               "domain.actions")
        _DOMAIN = (tuple(rules), domain.schemas)
    return _DOMAIN


def random_scenario(rng):
    """(facts, goal_atom): a small road network with hazards and resources.

    3 to 5 nodes keeps every reachable state space tiny enough for the
    blind-enumeration oracle. Roughly a third of the goals come out
    unsolvable thanks to the hazard density.
    """
    n_nodes = rng.randint(3, 5)
    fancy = rng.random() < 0.3
    names = [f"Zone {i} N." if fancy else f"r{i}" for i in range(n_nodes)]
    nodes = [Constant(n) for n in names]

    order = nodes[:]
    rng.shuffle(order)
    pairs = {(order[i], order[i + 1]) for i in range(len(order) - 1)}
    for i in range(n_nodes):
        for j in range(i + 1, n_nodes):
            a, b = nodes[i], nodes[j]
            if (a, b) not in pairs and (b, a) not in pairs \
                    and rng.random() < 0.3:
                pairs.add((a, b))

    facts = {Atom("node", (n,)) for n in nodes}
    for a, b in pairs:
        if rng.random() < 0.5:
            a, b = b, a
        facts.add(Atom("link", (a, b)))
        if rng.random() < 0.35:
            facts.add(Atom("fire", (a, b) if rng.random() < 0.5 else (b, a)))
        if rng.random() < 0.2:
            facts.add(Atom("police_block",
                           (a, b) if rng.random() < 0.5 else (b, a)))

    subtype = Constant("std")
    agents = [(Constant("c1"), "crane")]
    if rng.random() < 0.4:
        agents.append((Constant("t1"), "truck"))
    for ident, kind in agents:
        facts.add(Atom(kind, (ident, subtype)))
        facts.add(Atom("at", (ident, rng.choice(nodes))))

    mover, _kind = rng.choice(agents)
    goal = Atom("at", (mover, rng.choice(nodes)))
    return frozenset(facts), goal
