import pytest
from hypothesis import given, settings

from dhtf import (
    FALSE, STEP, TRUE, Atom, Box, Choice, Converse, Diamond, Seq, Star, Test,
    converse_normal_form, derived, path_of_formula, power, size,
)
from dhtf.ast import DERIVED_ARITY, atoms, is_converse_normal, path_converse_normal_form, subterms
from dhtf.errors import DHTError
from dhtf.semantics import accessibility

from strategies import formulas, paths, traces

p, q = Atom("p"), Atom("q")
CORE = (type(TRUE), type(FALSE), Atom, Diamond, Box, type(STEP), Test, Choice, Seq, Star, Converse)


def test_until_expansion():
    assert derived("until", p, q) == Diamond(Star(Seq(Test(p), STEP)), q)


def test_final_and_neg():
    assert derived("final") == Box(STEP, FALSE)
    assert derived("neg", p) == Box(Test(p), FALSE)


@pytest.mark.parametrize("op,expected", [
    ("and", Diamond(Test(p), q)),
    ("or", Diamond(Choice(Test(p), Test(q)), TRUE)),
    ("implies", Box(Test(p), q)),
    ("since", Diamond(Converse(Star(Seq(Test(p), STEP))), q)),
])
def test_binary_expansions(op, expected):
    assert derived(op, p, q) == expected


@pytest.mark.parametrize("op,expected", [
    ("next", Diamond(STEP, p)),
    ("wnext", Box(STEP, p)),
    ("prev", Diamond(Converse(STEP), p)),
    ("wprev", Box(Converse(STEP), p)),
    ("eventually", Diamond(Star(STEP), p)),
    ("always", Box(Star(STEP), p)),
    ("once", Diamond(Converse(Star(STEP)), p)),
    ("historically", Box(Converse(Star(STEP)), p)),
])
def test_unary_expansions(op, expected):
    assert derived(op, p) == expected


def test_release_and_trigger_reuse_until_and_since():
    assert derived("release", p, q) == derived("or", derived("until", q, derived("and", p, q)),
                                               derived("always", q))
    assert derived("trigger", p, q) == derived("or", derived("since", q, derived("and", p, q)),
                                               derived("historically", q))


@pytest.mark.parametrize("op", sorted(DERIVED_ARITY))
def test_derived_outputs_are_core(op):
    phi = derived(op, *[p, q][:DERIVED_ARITY[op]])
    assert all(isinstance(node, CORE) for node in subterms(phi))


def test_derived_errors():
    with pytest.raises(DHTError):
        derived("frobnicate", p)
    with pytest.raises(DHTError):
        derived("until", p)
    with pytest.raises(DHTError):
        derived("neg", STEP)


def test_path_of_formula():
    assert path_of_formula(p) == Seq(Test(p), STEP)
    assert path_of_formula(TRUE) == Seq(Test(TRUE), STEP)
    assert path_of_formula(derived("and", p, derived("neg", q))) == Seq(Test(derived("and", p, derived("neg", q))), STEP)
    with pytest.raises(DHTError):
        path_of_formula(Diamond(STEP, p))


def test_power():
    rho = Choice(STEP, Test(p))
    assert power(rho, 0) == Test(TRUE)
    assert power(STEP, 1) == Seq(STEP, Test(TRUE))
    assert power(STEP, 2) == Seq(STEP, Seq(STEP, Test(TRUE)))
    sizes = [size(power(STEP, n)) for n in range(6)]
    assert len({b - a for a, b in zip(sizes, sizes[1:])}) == 1
    with pytest.raises(DHTError):
        power(STEP, -1)


@pytest.mark.parametrize("phi,expected", [
    (Diamond(Converse(Seq(STEP, STEP)), p), Diamond(Seq(Converse(STEP), Converse(STEP)), p)),
    (Diamond(Converse(Converse(STEP)), p), Diamond(STEP, p)),
    (Diamond(Converse(Test(p)), q), Diamond(Test(p), q)),
    (Box(Converse(Star(STEP)), p), Box(Star(Converse(STEP)), p)),
    (Diamond(Converse(Choice(STEP, Test(p))), q), Diamond(Choice(Converse(STEP), Test(p)), q)),
    (Diamond(Test(Diamond(Converse(Converse(STEP)), p)), q), Diamond(Test(Diamond(STEP, p)), q)),
])
def test_converse_normal_form_rewrites(phi, expected):
    assert converse_normal_form(phi) == expected


@given(formulas())
@settings(max_examples=200, deadline=None)
def test_cnf_idempotent_and_normal(phi):
    once = converse_normal_form(phi)
    assert is_converse_normal(once)
    assert converse_normal_form(once) == once


@given(paths(3), traces())
@settings(max_examples=100, deadline=None)
def test_cnf_preserves_accessibility(rho, trace):
    assert accessibility(path_converse_normal_form(rho), trace) == accessibility(rho, trace)


@pytest.mark.parametrize("node,expected", [
    (p, 1),
    (Diamond(STEP, p), 3),
    # Diamond, Star, Seq, Test, p, Step, q
    (Diamond(Star(Seq(Test(p), STEP)), q), 7),
])
def test_size(node, expected):
    assert size(node) == expected


def test_atoms_sorted_unique():
    assert atoms(derived("until", q, derived("and", p, q))) == ("p", "q")
    assert atoms(Diamond(STEP, TRUE)) == ()


def test_atom_name_validation():
    with pytest.raises(DHTError):
        Atom("")


def test_structural_identity():
    assert derived("until", p, q) == derived("until", Atom("p"), Atom("q"))
    assert hash(derived("always", p)) == hash(Box(Star(STEP), Atom("p")))
