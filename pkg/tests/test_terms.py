import random

import pytest

from rescueplan.terms import (
    ANON,
    Atom,
    Constant,
    NumberConstant,
    Substitution,
    Variable,
    apply_substitution,
    format_atom,
    format_term,
    unify,
)

HORR = Constant("Horr Sq.")
HASSAN = Constant("Hassanabad Sq.")
SAADI = Constant("Saadi Sq.")


def test_unify_binds_both_variables():
    got = unify(Atom("link", (Variable("X"), Variable("Y"))),
                Atom("link", (HORR, HASSAN)))
    assert got == Substitution({"X": HORR, "Y": HASSAN})


def test_unify_identical_ground_atoms_gives_empty_substitution():
    got = unify(Atom("p", (Constant("a"),)), Atom("p", (Constant("a"),)))
    assert got == Substitution()
    assert len(got) == 0


def test_unify_repeated_variable_clash_fails():
    assert unify(Atom("fire", (Variable("X"), Variable("X"))),
                 Atom("fire", (SAADI, HASSAN))) is None


def test_unify_mismatched_predicate_or_arity_fails():
    assert unify(Atom("p", (Constant("a"),)), Atom("q", (Constant("a"),))) is None
    assert unify(Atom("p", (Constant("a"),)),
                 Atom("p", (Constant("a"), Constant("b")))) is None


def test_unify_rejects_anonymous():
    with pytest.raises(ValueError):
        unify(Atom("p", (ANON,)), Atom("p", (Constant("a"),)))


def test_unify_chains_flatten_to_idempotent_result():
    # X=Y then Y=a must leave X bound to a, not to Y
    got = unify(Atom("p", (Variable("X"), Variable("Y"))),
                Atom("p", (Variable("Y"), Constant("a"))))
    assert got.get("X") == Constant("a")
    assert got.get("Y") == Constant("a")


def _random_term(rng, vars_ok=True):
    kind = rng.randrange(4 if vars_ok else 2)
    if kind == 0:
        return Constant(rng.choice(["a", "b", "horr sq", "n't"]))
    if kind == 1:
        return NumberConstant(rng.randint(-5, 5))
    return Variable(rng.choice("XYZW"))


def _random_atom(rng, vars_ok=True):
    name = rng.choice(["p", "q", "link"])
    return Atom(name, tuple(_random_term(rng, vars_ok)
                            for _ in range(rng.randint(0, 3))))


def test_unify_symmetry_and_mgu_on_random_pairs():
    rng = random.Random(7)
    unified = 0
    for _ in range(2000):
        a, b = _random_atom(rng), _random_atom(rng)
        fwd = unify(a, b)
        back = unify(b, a)
        assert (fwd is None) == (back is None)
        if fwd is None:
            continue
        unified += 1
        # an mgu must actually unify, in both orientations
        assert apply_substitution(a, fwd) == apply_substitution(b, fwd)
        assert apply_substitution(a, back) == apply_substitution(b, back)
    assert unified > 100  # the generator must exercise the success path


def test_mgu_factors_any_other_unifier():
    rng = random.Random(21)
    checked = 0
    for _ in range(2000):
        a, b = _random_atom(rng), _random_atom(rng)
        sigma = unify(a, b)
        if sigma is None:
            continue
        # build some other unifier by grounding the joint image
        ground = Substitution(
            {v.name: Constant("g") for atom in (a, b) for v in atom.args
             if isinstance(v, Variable)})
        u = {}
        for atom in (a, b):
            for pat, val in zip(atom.args,
                                apply_substitution(
                                    apply_substitution(atom, sigma),
                                    ground).args):
                if isinstance(pat, Variable):
                    u[pat.name] = val
        other = Substitution(u)
        if apply_substitution(a, other) != apply_substitution(b, other):
            continue
        checked += 1
        # u factors through sigma: applying u after sigma equals u alone
        for atom in (a, b):
            assert apply_substitution(apply_substitution(atom, sigma), other) \
                == apply_substitution(atom, other)
    assert checked > 100


def test_apply_substitution_examples():
    assert apply_substitution(Atom("node", (Variable("X"),)),
                              Substitution({"X": HORR})) == Atom("node", (HORR,))
    atom = Atom("link", (Variable("X"), Variable("Y")))
    assert apply_substitution(atom, Substitution()) == atom


def test_apply_substitution_idempotent_on_random_pairs():
    rng = random.Random(3)
    for _ in range(1000):
        atom = _random_atom(rng)
        subst = Substitution(
            {v: _random_term(rng, vars_ok=False) for v in "XYZW"
             if rng.random() < 0.5})
        once = apply_substitution(atom, subst)
        assert apply_substitution(once, subst) == once


def test_substitutions_hash_by_content():
    a = Substitution({"X": HORR})
    b = Substitution({"X": HORR})
    assert a == b and hash(a) == hash(b)
    assert len({a, b}) == 1


def test_format_term_quotes_only_when_needed():
    assert format_term(Constant("horr")) == "horr"
    assert format_term(Constant("big_crane2")) == "big_crane2"
    assert format_term(Constant("Horr Sq.")) == "'Horr Sq.'"
    assert format_term(Constant("1st")) == "'1st'"
    assert format_term(Constant("not")) == "'not'"  # would read as negation
    assert format_term(Constant("it's")) == "'it''s'"
    assert format_term(NumberConstant(-3)) == "-3"
    assert format_term(Variable("Who")) == "Who"
    assert format_term(ANON) == "_"


def test_format_atom_zero_arity_has_no_parens():
    assert format_atom(Atom("alarm")) == "alarm"
