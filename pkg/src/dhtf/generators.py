"""Seeded random formulas, paths and traces for property checks.

Depth counts nested constructors: atoms, constants and ``step`` have depth 0,
a modality has depth one more than the deeper of its path and body, and a
compound path one more than its deepest operand.
"""

from __future__ import annotations

import random
from typing import Sequence

from .ast import FALSE, STEP, TRUE, Atom, Box, Choice, Converse, Diamond, Formula, Path, Seq, Star, Test
from .semantics import HTTrace


class FormulaGenerator:
    def __init__(self, seed: int = 0, atoms: Sequence[str] = ("p", "q"),
                 converse: bool = True):
        self.rng = random.Random(seed)
        self.atoms = tuple(atoms)
        self.converse = converse

    def leaf(self) -> Formula:
        r = self.rng.random()
        if r < 0.1:
            return TRUE
        if r < 0.2:
            return FALSE
        return Atom(self.rng.choice(self.atoms))

    def formula(self, depth: int = 3, modal: bool = False) -> Formula:
        """Random formula; ``modal`` forces a modality at the root."""
        if depth <= 0 or (not modal and self.rng.random() < 0.25):
            return self.leaf()
        mod = self.rng.choice((Diamond, Box))
        return mod(self.path(depth - 1), self.formula(depth - 1))

    def path(self, depth: int = 2) -> Path:
        if depth <= 0 or self.rng.random() < 0.3:
            if self.converse and self.rng.random() < 0.2:
                return Converse(STEP) if depth > 0 else STEP
            return STEP
        kind = self.rng.choice(("test", "seq", "choice", "star", "converse" if self.converse else "seq"))
        if kind == "test":
            return Test(self.formula(depth - 1))
        if kind == "seq":
            return Seq(self.path(depth - 1), self.path(depth - 1))
        if kind == "choice":
            return Choice(self.path(depth - 1), self.path(depth - 1))
        if kind == "star":
            return Star(self.path(depth - 1))
        return Converse(self.path(depth - 1))

    def trace(self, length: int, total: bool = False) -> HTTrace:
        here, there = [], []
        for _ in range(length):
            t = frozenset(a for a in self.atoms if self.rng.random() < 0.5)
            h = t if total else frozenset(a for a in t if self.rng.random() < 0.6)
            here.append(h)
            there.append(t)
        return HTTrace(tuple(here), tuple(there))


def random_formulas(count: int, seed: int = 0, depth: int = 3, atoms: Sequence[str] = ("p", "q"),
                    converse: bool = True, modal: bool = False) -> list[Formula]:
    gen = FormulaGenerator(seed, atoms, converse)
    return [gen.formula(depth, modal) for _ in range(count)]
