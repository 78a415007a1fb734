import random

import pytest

from conftest import CORPUS
from gen import random_program
from rescueplan.errors import KbSyntaxError, RuleSafetyError
from rescueplan.parser import parse_fact, parse_literals, parse_program
from rescueplan.terms import (
    ANON,
    Atom,
    Constant,
    Literal,
    NumberConstant,
    Program,
    Variable,
    format_program,
)


def test_single_quoted_fact():
    got = parse_program("node('Horr Sq.').")
    assert got == Program(facts=(Atom("node", (Constant("Horr Sq."),)),))


def test_empty_text_gives_empty_program():
    assert parse_program("") == Program()
    assert parse_program("  % only a comment\n") == Program()


def test_rule_with_anonymous_argument():
    got = parse_program("safe_area(X) :- scape_path(X,_).")
    assert len(got.rules) == 1
    rule = got.rules[0]
    assert rule.head == Atom("safe_area", (Variable("X"),))
    assert rule.body == (
        Literal(Atom("scape_path", (Variable("X"), ANON)), True),)


def test_negation_and_numbers_round_trip():
    text = "reading(sensor_1,-40).\nalert(X) :- reading(X,Y), not muted(X).\n"
    got = parse_program(text)
    assert got.facts[0].args[1] == NumberConstant(-40)
    assert got.rules[0].body[1] == Literal(Atom("muted", (Variable("X"),)), False)
    assert format_program(got) == text


def test_not_followed_by_paren_is_an_atom_named_not():
    # `not q(X)` negates; `not(X)` is a regular predicate spelled not/1
    got = parse_program("p(X) :- q(X), not(X).")
    assert got.rules[0].body[1] == Literal(Atom("not", (Variable("X"),)), True)


def test_quote_escaping_round_trips():
    got = parse_program("owner('it''s fine').")
    assert got.facts[0].args[0] == Constant("it's fine")
    assert format_program(got) == "owner('it''s fine').\n"


def test_corpus_files_parse_to_expected_counts():
    network = parse_program((CORPUS / "network.facts").read_text())
    hazards = parse_program((CORPUS / "hazards.facts").read_text())
    safety = parse_program((CORPUS / "safety.rules").read_text())
    assert len(network.facts) == 11 and not network.rules
    assert len(hazards.facts) == 4 and not hazards.rules
    assert len(safety.rules) == 3 and not safety.facts
    preds = [r.head.key for r in safety.rules]
    assert preds == [("scape_path", 2), ("scape_path", 2), ("safe_area", 1)]


def test_corpus_round_trip_is_byte_stable():
    for name in ("network.facts", "hazards.facts", "safety.rules"):
        first = parse_program((CORPUS / name).read_text(), name)
        canon = format_program(first)
        assert parse_program(canon, name) == first
        assert format_program(parse_program(canon, name)) == canon


def test_random_programs_round_trip():
    rng = random.Random(11)
    for _ in range(200):
        facts, rules, _levels = random_program(rng)
        program = Program(tuple(sorted(facts, key=repr)), tuple(rules))
        assert parse_program(format_program(program)) == program


@pytest.mark.parametrize("text,line,column,fragment", [
    ("p(a)", 1, 5, "expected '.'"),
    ("p('unterminated", 1, 3, "unterminated quoted constant"),
    ("p(a) :- q(a,).", 1, 13, "expected a term"),
    ("p(X) :- q(X,\n  not r(X).", 2, 7, "expected ')'"),
    ("p(a) :- q(a). q(b) :-", 1, 22, "expected a predicate name"),
    ("p(a)?", 1, 5, "unexpected character '?'"),
])
def test_syntax_errors_carry_location(text, line, column, fragment):
    with pytest.raises(KbSyntaxError) as err:
        parse_program(text, "bad.rules")
    assert err.value.line == line
    assert err.value.column == column
    assert fragment in str(err.value)
    assert str(err.value).startswith(f"bad.rules:{line}:{column}:")


@pytest.mark.parametrize("text,fragment", [
    ("p(X) :- not q(X).", "head variable X"),
    ("p(X,Y) :- q(X).", "head variable Y"),
    ("node(X).", "fact contains variable"),
    ("p(_) :- q(a).", "anonymous marker is not allowed in a clause head"),
    ("p(X) :- q(X), not r(_).", "anonymous marker is not allowed under negation"),
    ("p(X) :- q(X), not r(Y).", "variable Y"),
])
def test_safety_violations_are_rejected(text, fragment):
    with pytest.raises(RuleSafetyError) as err:
        parse_program(text)
    assert fragment in str(err.value)


def test_parse_literals_goal_syntax():
    got = parse_literals("at(crane_1,'Saadi Sq.')", "goal")
    assert got == (Literal(Atom("at", (Constant("crane_1"),
                                       Constant("Saadi Sq."))), True),)
    # trailing period tolerated, negation allowed after a binder
    got = parse_literals("link(X,Y), not fire(X,Y).", "goal")
    assert [lit.positive for lit in got] == [True, False]
    with pytest.raises(KbSyntaxError):
        parse_literals("", "goal")
    with pytest.raises(KbSyntaxError):
        parse_literals("scape_path(X,_), not fire(_,X)", "goal")


def test_parse_fact_requires_ground_atom():
    assert parse_fact("fire('A','B')", "fact") == \
        Atom("fire", (Constant("A"), Constant("B")))
    with pytest.raises(KbSyntaxError) as err:
        parse_fact("at(crane_1, X)", "fact")
    assert "fact is not ground" in str(err.value)
