import json
import warnings

import pytest
from hypothesis import given, settings

from dhtf import (
    FALSE, STEP, TRUE, Atom, Box, Choice, Converse, Diamond, HTTrace, ParseError, Seq, Star, Test,
    UnsupportedConstruct, derived, emit_del, parse_formula, parse_ht_trace, parse_program,
    parse_theory, print_formula, print_ht_trace, print_program, translate,
)
from dhtf.parser import UnsupportedSurfaceWarning, parse_path, print_path, trace_from_json, trace_to_json
from dhtf.translate import Literal, Rule, RuleKind, TemporalProgram

from strategies import formulas, paths, traces

p, q = Atom("p"), Atom("q")
UNTIL = Diamond(Star(Seq(Test(p), STEP)), q)


@pytest.mark.parametrize("text,expected", [
    ("<(p? ; step)*> q", UNTIL),
    ("p until q", UNTIL),
    ("<p*> q", UNTIL),
    ("true", TRUE),
    ("false", FALSE),
    ("final", Box(STEP, FALSE)),
    ("initial", Box(Converse(STEP), FALSE)),
    ("<true> p", Diamond(STEP, p)),
    ("<true?> p", Diamond(Test(TRUE), p)),
    ("[step*] p", Box(Star(STEP), p)),
    ("<step^-> p", Diamond(Converse(STEP), p)),
    ("<(step ; step)^-> p", Diamond(Converse(Seq(STEP, STEP)), p)),
    ("<step + p?> q", Diamond(Choice(STEP, Test(p)), q)),
    ("<(p && q)?> p", Diamond(Test(derived("and", p, q)), p)),
    ("<(p && q)> p", Diamond(Seq(Test(derived("and", p, q)), STEP), p)),
    ("alw (!h -> s)", derived("always", derived("implies", derived("neg", Atom("h")), Atom("s")))),
    ("[(!h)*] (!h -> s)", Box(Star(Seq(Test(derived("neg", Atom("h"))), STEP)),
                              derived("implies", derived("neg", Atom("h")), Atom("s")))),
])
def test_parse_examples(text, expected):
    assert parse_formula(text) == expected


@pytest.mark.parametrize("text,expected", [
    ("p -> q -> p", derived("implies", p, derived("implies", q, p))),
    ("p || q && p", derived("or", p, derived("and", q, p))),
    ("p && q until p", derived("until", derived("and", p, q), p)),
    ("p until q -> p", derived("implies", derived("until", p, q), p)),
    ("!p && q", derived("and", derived("neg", p), q)),
    ("next p && q", derived("and", derived("next", p), q)),
])
def test_precedence(text, expected):
    assert parse_formula(text) == expected


@pytest.mark.parametrize("text,expected", [
    ("step ; step + p?", Choice(Seq(STEP, STEP), Test(p))),
    ("step ; step*", Seq(STEP, Star(STEP))),
    ("step*^-", Converse(Star(STEP))),
    ("(step + step) ; p?", Seq(Choice(STEP, STEP), Test(p))),
])
def test_path_precedence(text, expected):
    assert parse_path(text) == expected


@pytest.mark.parametrize("text", ["p ->", "p &&& q", "<step p", "(p", "P", "step", "until", "<<step> p> q", "p q"])
def test_syntax_errors_have_spans(text):
    with pytest.raises(ParseError) as info:
        parse_formula(text)
    span = info.value.span
    assert 0 <= span.start <= span.end <= len(text)


def test_error_at_end_of_input():
    with pytest.raises(ParseError) as info:
        parse_formula("p ->")
    assert info.value.span.start == 4
    assert "end of input" in info.value.message


def test_print_examples():
    assert print_formula(Diamond(STEP, p)) == "<step> p"
    assert print_formula(Box(Star(STEP), p)) == "[step*] p"


@given(formulas())
@settings(max_examples=500, deadline=None)
def test_formula_round_trip(phi):
    assert parse_formula(print_formula(phi)) == phi


@given(paths(3))
@settings(max_examples=200, deadline=None)
def test_path_round_trip(rho):
    assert parse_path(print_path(rho)) == rho


def test_theory_comments_and_spans():
    text = "p  # first\n\n# only a comment\nnext q\n"
    assert parse_theory(text) == [p, derived("next", q)]
    bad = "p\nq &&\n"
    with pytest.raises(ParseError) as info:
        parse_theory(bad)
    assert info.value.span.start >= 2
    assert info.value.span.end <= len(bad)


# -- &del emission

def test_emit_del_examples():
    assert emit_del(UNTIL) == "&del{ * (?p ;; &true) . >? q }"
    assert emit_del(Box(Star(STEP), p)) == "&del{ * &true . >* p }"


def test_emit_del_rejects_converse():
    with pytest.raises(UnsupportedConstruct):
        emit_del(Diamond(Converse(STEP), p))
    with pytest.raises(UnsupportedConstruct):
        emit_del(p)


def test_emit_del_warns_on_choice():
    with pytest.warns(UnsupportedSurfaceWarning):
        out = emit_del(Diamond(Choice(STEP, Test(p)), q))
    assert "+" in out


def test_emit_del_no_warning_on_witnessed_constructs():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        emit_del(UNTIL)


# -- traces

def test_trace_examples():
    t = parse_ht_trace("H: | T: p\np q")
    assert t.here == (frozenset(), frozenset({"p", "q"}))
    assert t.there == (frozenset({"p"}), frozenset({"p", "q"}))


@pytest.mark.parametrize("text", ["H: p | T:", "", "# nothing\n\n", "H: p | T: P", "a | b", '{"states": []}', "{bad json"])
def test_trace_errors(text):
    with pytest.raises(ParseError) as info:
        parse_ht_trace(text)
    span = info.value.span
    assert 0 <= span.start <= span.end <= len(text)


def test_trace_duplicates_comments_and_crlf():
    t = parse_ht_trace("p p q  # state 0\r\nH: q q | T: q\r\n")
    assert t == HTTrace((frozenset("pq"), frozenset("q")), (frozenset("pq"), frozenset("q")))


def test_trace_json():
    doc = {"states": [{"h": [], "t": ["p"]}, {"h": ["q"], "t": ["q"]}]}
    t = parse_ht_trace(json.dumps(doc))
    assert t.there == (frozenset({"p"}), frozenset({"q"}))
    assert trace_to_json(t) == doc
    assert trace_from_json(trace_to_json(t)) == t


@given(traces())
@settings(max_examples=200, deadline=None)
def test_trace_round_trip(trace):
    assert parse_ht_trace(print_ht_trace(trace)) == trace


# -- programs

def test_print_program_examples():
    g = Rule(RuleKind.GLOBAL, (Literal("q"),), (Literal("l_gamma"),))
    d = Rule(RuleKind.DYNAMIC, (Literal("l_beta", prev=True),), (Literal("l_gamma"),))
    f = Rule(RuleKind.FINAL, (), (Literal("l"),))
    assert str(g) == "global: q -> l_gamma"
    assert str(d) == "dynamic: 'l_beta -> l_gamma"
    assert str(f) == "final: -> l"


def test_program_round_trip():
    program = translate(parse_formula("<(p? ; step)*> q"))
    again = parse_program(print_program(program))
    assert again.rules == program.rules


def test_program_with_negated_heads_round_trip():
    text = "global: l0 & p -> q | l1 | !p\ndynamic: !'a -> b\n"
    program = parse_program(text)
    assert print_program(program) == text


@pytest.mark.parametrize("text", ["global q -> p", "weird: p -> q", "global: p", "initial: 'p -> q", "global: P -> q"])
def test_program_errors(text):
    with pytest.raises(ParseError) as info:
        parse_program(text)
    span = info.value.span
    assert 0 <= span.start <= span.end <= len(text)


def test_program_inferred_alphabet():
    program = parse_program("global: p -> q\n")
    assert isinstance(program, TemporalProgram)
    assert set(program.extended) == {"p", "q"}
