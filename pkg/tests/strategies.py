"""Hypothesis strategies for formulas, paths and HT-traces."""

import hypothesis.strategies as st

from dhtf import FALSE, STEP, TRUE, Atom, Box, Choice, Converse, Diamond, HTTrace, Seq, Star, Test

ATOMS = ("p", "q")


def leaves(atoms=ATOMS):
    return st.one_of(st.just(TRUE), st.just(FALSE), st.sampled_from(atoms).map(Atom))


def formulas(depth=3, atoms=ATOMS, converse=True):
    if depth == 0:
        return leaves(atoms)
    sub = formulas(depth - 1, atoms, converse)
    return st.one_of(
        leaves(atoms),
        st.builds(Diamond, paths(depth - 1, atoms, converse), sub),
        st.builds(Box, paths(depth - 1, atoms, converse), sub),
    )


def paths(depth=2, atoms=ATOMS, converse=True):
    base = st.one_of(st.just(STEP), st.just(Converse(STEP))) if converse and depth > 0 else st.just(STEP)
    if depth == 0:
        return base
    sub = paths(depth - 1, atoms, converse)
    options = [
        base,
        st.builds(Test, formulas(depth - 1, atoms, converse)),
        st.builds(Seq, sub, sub),
        st.builds(Choice, sub, sub),
        st.builds(Star, sub),
    ]
    if converse:
        options.append(st.builds(Converse, sub))
    return st.one_of(*options)


@st.composite
def traces(draw, atoms=ATOMS, min_length=1, max_length=4, total=False):
    n = draw(st.integers(min_length, max_length))
    there = [frozenset(draw(st.sets(st.sampled_from(atoms)))) for _ in range(n)]
    if total:
        here = there
    else:
        here = [frozenset(draw(st.sets(st.sampled_from(sorted(t))))) if t else frozenset() for t in there]
    return HTTrace(tuple(here), tuple(there))
