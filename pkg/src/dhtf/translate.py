"""Translation of dynamic formulas into temporal logic programs.

Every modal formula in the Fisher-Ladner closure of the input gets a fresh
label atom.  :func:`eta` produces the defining biconditionals for one label,
:func:`sigma` collects them for a whole formula, and :func:`unfold` splits each
biconditional into rules.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Union

from .ast import (
    FALSE, TRUE, Atom, Box, Choice, Converse, Diamond, Falsity, Formula, Seq,
    Star, Step, Test, Truth, atoms, converse_normal_form, derived,
)
from .closure import fl_closure
from .errors import DHTError, PreconditionError


class RuleKind(str, enum.Enum):
    INITIAL = "initial"
    DYNAMIC = "dynamic"
    FINAL = "final"
    GLOBAL = "global"


@dataclass(frozen=True)
class Literal:
    """One of ``a``, ``not a``, ``prev a``, ``not prev a``."""

    atom: str
    negated: bool = False
    prev: bool = False

    def __str__(self) -> str:
        return ("!" if self.negated else "") + ("'" if self.prev else "") + self.atom

    def negate(self) -> "Literal":
        return Literal(self.atom, not self.negated, self.prev)


@dataclass(frozen=True)
class Constant:
    value: bool

    def __str__(self) -> str:
        return "true" if self.value else "false"

    def negate(self) -> "Constant":
        return Constant(not self.value)


TOP = Constant(True)
BOTTOM = Constant(False)
Term = Union[Literal, Constant]


@dataclass(frozen=True)
class Rule:
    kind: RuleKind
    body: tuple[Literal, ...] = ()
    head: tuple[Literal, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "kind", RuleKind(self.kind))
        object.__setattr__(self, "body", tuple(self.body))
        object.__setattr__(self, "head", tuple(self.head))
        if self.kind is not RuleKind.DYNAMIC:
            for lit in self.body + self.head:
                if lit.prev:
                    raise DHTError(f"{self.kind.value} rules cannot use previous-state literals")

    def atoms(self) -> set[str]:
        return {lit.atom for lit in self.body + self.head}

    def __str__(self) -> str:
        body = " & ".join(map(str, self.body))
        head = " | ".join(map(str, self.head))
        return f"{self.kind.value}: {body} -> {head}".replace("  ", " ").rstrip()


@dataclass(frozen=True)
class TemporalProgram:
    rules: tuple[Rule, ...]
    alphabet: tuple[str, ...] = ()
    extended: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        alphabet = tuple(self.alphabet)
        if not alphabet and not self.extended:
            alphabet = tuple(sorted(set().union(*(r.atoms() for r in self.rules))))
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "extended", tuple(self.extended) or alphabet)
        known = set(self.extended)
        for r in self.rules:
            missing = r.atoms() - known
            if missing:
                raise DHTError(f"rule {r} mentions atoms outside the alphabet: {sorted(missing)}")

    def __len__(self) -> int:
        return len(self.rules)


# -- intermediate formulas ---------------------------------------------------

@dataclass(frozen=True)
class Iff:
    left: object
    right: object


@dataclass(frozen=True)
class Conj:
    left: Term
    right: Term


@dataclass(frozen=True)
class Disj:
    left: Term
    right: Term


@dataclass(frozen=True)
class Impl:
    left: Term
    right: Term


@dataclass(frozen=True)
class Neg:
    arg: Term


@dataclass(frozen=True)
class IntermediateFormula:
    """A propositional core over temporal literals inside one of four shells."""

    shell: RuleKind
    core: object

    def __str__(self) -> str:
        core = _core_str(self.core)
        if self.shell is RuleKind.INITIAL:
            return core
        if self.shell is RuleKind.GLOBAL:
            return f"alw ({core})"
        if self.shell is RuleKind.DYNAMIC:
            return f"wnext alw ({core})"
        return f"alw (final -> ({core}))"


def _core_str(c) -> str:
    if isinstance(c, Iff):
        return f"{_core_str(c.left)} <-> {_core_str(c.right)}"
    if isinstance(c, Conj):
        return f"{c.left} & {c.right}"
    if isinstance(c, Disj):
        return f"{c.left} | {c.right}"
    if isinstance(c, Impl):
        return f"({c.left} -> {c.right})"
    if isinstance(c, Neg):
        return f"!{c.arg}"
    return str(c)


# -- labels ------------------------------------------------------------------

def _unroll(mu: Formula) -> Formula:
    """``<a;b>phi`` -> ``<a><b>phi``, repeatedly on the outer path."""
    while isinstance(mu, (Diamond, Box)) and isinstance(mu.path, Seq):
        mod = type(mu)
        mu = mod(mu.path.left, mod(mu.path.right, mu.body))
    return mu


class LabelRegistry:
    """Label atoms for the modal members of a closure.

    Constants and atoms are their own labels.  A formula over a sequence path
    shares its label with its unrolled form.
    """

    def __init__(self, closure: Iterable[Formula], user_atoms: Iterable[str],
                 reserved: Iterable[str] = (), prefix: str = "l"):
        self.closure = tuple(closure)
        self.alphabet = tuple(sorted(set(user_atoms)))
        taken = set(self.alphabet) | set(reserved)
        self._names: dict[Formula, str] = {}
        self._by_key: dict[Formula, str] = {}
        counter = 0
        for mu in self.closure:
            if not isinstance(mu, (Diamond, Box)):
                continue
            key = _unroll(mu)
            name = self._by_key.get(key)
            if name is None:
                while f"{prefix}{counter}" in taken:
                    counter += 1
                name = f"{prefix}{counter}"
                counter += 1
                self._by_key[key] = name
            self._names[mu] = name
        self.labels = tuple(dict.fromkeys(self._names.values()))

    @property
    def extended(self) -> tuple[str, ...]:
        return self.alphabet + self.labels

    def __contains__(self, mu) -> bool:
        return mu in self._names or isinstance(mu, (Truth, Falsity, Atom))

    def label(self, phi: Formula) -> Term:
        if isinstance(phi, Truth):
            return TOP
        if isinstance(phi, Falsity):
            return BOTTOM
        if isinstance(phi, Atom):
            return Literal(phi.name)
        try:
            return Literal(self._names[phi])
        except KeyError:
            raise DHTError(f"formula has no label: {phi!r}") from None

    def name(self, phi: Formula) -> str:
        lab = self.label(phi)
        if not isinstance(lab, Literal):
            raise DHTError("constants have no label atom")
        return lab.atom

    def labelled(self) -> list[tuple[Formula, str]]:
        return list(self._names.items())


def _prev(x: Term) -> Term:
    # only used under the dynamic shell, where a previous state exists
    return x if isinstance(x, Constant) else Literal(x.atom, x.negated, True)


def eta(mu: Formula, reg: LabelRegistry) -> list[IntermediateFormula]:
    """Defining formulas for the label of the modal formula ``mu``."""
    if not isinstance(mu, (Diamond, Box)):
        raise DHTError(f"only modal formulas are defined by labels, got {mu!r}")
    if mu not in reg:
        raise DHTError(f"formula is not in the closure: {mu!r}")
    mu = _unroll(mu)
    dia = isinstance(mu, Diamond)
    mod = type(mu)
    rho, phi = mu.path, mu.body
    L = reg.label(mu)
    G, D, F, I = RuleKind.GLOBAL, RuleKind.DYNAMIC, RuleKind.FINAL, RuleKind.INITIAL
    if isinstance(rho, Step):
        return [IntermediateFormula(D, Iff(_prev(L), reg.label(phi))),
                IntermediateFormula(F, Neg(L) if dia else L)]
    if isinstance(rho, Converse) and isinstance(rho.inner, Step):
        return [IntermediateFormula(D, Iff(L, _prev(reg.label(phi)))),
                IntermediateFormula(I, Neg(L) if dia else L)]
    if isinstance(rho, Test):
        a, b = reg.label(rho.body), reg.label(phi)
        return [IntermediateFormula(G, Iff(L, Conj(a, b) if dia else Impl(a, b)))]
    if isinstance(rho, Choice):
        a, b = reg.label(mod(rho.left, phi)), reg.label(mod(rho.right, phi))
        return [IntermediateFormula(G, Iff(L, Disj(a, b) if dia else Conj(a, b)))]
    if isinstance(rho, Star):
        a, f = reg.label(mod(rho.inner, mu)), reg.label(phi)
        return [IntermediateFormula(G, Iff(L, Disj(f, a) if dia else Conj(f, a))),
                IntermediateFormula(F, Iff(L, f))]
    raise PreconditionError(f"path not in converse normal form: {rho!r}")


def sigma(gamma: Formula, printed_rule12: bool = False, as_constraint: bool = False,
          reserved: Iterable[str] = ()) -> tuple[list[IntermediateFormula], LabelRegistry]:
    """The label of ``gamma`` plus the definitions of every closure label.

    ``reserved`` names atoms (besides those of ``gamma``) that labels must avoid.
    """
    closure = fl_closure(gamma, printed_rule12=printed_rule12)
    reg = LabelRegistry(closure, atoms(gamma), reserved)
    top = reg.label(gamma)
    out = [IntermediateFormula(RuleKind.INITIAL, Neg(top) if as_constraint else top)]
    done: set[str] = set()
    for mu in closure:
        if isinstance(mu, (Diamond, Box)):
            name = reg.name(mu)
            if name not in done:
                done.add(name)
                out.extend(eta(mu, reg))
    return out, reg


# -- unfolding into rules ----------------------------------------------------

def _rule(kind: RuleKind, body, head) -> Rule | None:
    b, h = [], []
    for x in body:
        if isinstance(x, Constant):
            if not x.value:
                return None
            continue
        if x not in b:
            b.append(x)
    for x in head:
        if isinstance(x, Constant):
            if x.value:
                return None
            continue
        if x not in h:
            h.append(x)
    return Rule(kind, tuple(b), tuple(h))


# A negated literal cannot be negated again, but in HT ``not not not a`` is
# ``not a`` and ``B -> A | not c`` is ``B & not not c -> A``, so a doubly
# negated literal moves to the other side of the arrow instead.

def _not_in_body(x: Term, body, head):
    if isinstance(x, Literal) and x.negated:
        return body, head + (x,)
    return body + (x.negate(),), head


def _not_in_head(y: Term, body, head):
    if isinstance(y, Literal) and y.negated:
        return body + (y,), head
    return body, head + (y.negate(),)


def unfold(f: IntermediateFormula) -> list[Rule]:
    """Split an intermediate formula into rules of the matching kind."""
    kind, c = f.shell, f.core
    if isinstance(c, (Literal, Constant)):
        raw = [((), (c,))]
    elif isinstance(c, Neg) and isinstance(c.arg, (Literal, Constant)):
        raw = [((c.arg,), ())]
    elif isinstance(c, Iff) and isinstance(c.left, (Literal, Constant)):
        L, r = c.left, c.right
        if isinstance(r, (Literal, Constant)):
            raw = [((L,), (r,)), ((r,), (L,))]
        elif isinstance(r, Disj):
            x, y = r.left, r.right
            raw = [((L,), (x, y)), ((x,), (L,)), ((y,), (L,))]
        elif isinstance(r, Conj):
            x, y = r.left, r.right
            raw = [((L,), (x,)), ((L,), (y,)), ((x, y), (L,))]
        elif isinstance(r, Impl):
            x, y = r.left, r.right
            raw = [((L, x), (y,)), ((y,), (L,)), _not_in_body(x, (), (L,)), _not_in_head(y, (), (L, x))]
        else:
            raise DHTError(f"cannot unfold core {c!r}")
    else:
        raise DHTError(f"cannot unfold core {c!r}")
    rules = []
    for body, head in raw:
        r = _rule(kind, body, head)
        if r is not None and r not in rules:
            rules.append(r)
    return rules


def translate(gamma: Formula, as_constraint: bool = False, printed_rule12: bool = False,
              reserved: Iterable[str] = ()) -> TemporalProgram:
    """Temporal logic program equivalent to ``gamma`` over the extended alphabet."""
    gamma = converse_normal_form(gamma)
    formulas, reg = sigma(gamma, printed_rule12, as_constraint, reserved)
    rules: list[Rule] = []
    seen: set[Rule] = set()
    for f in formulas:
        for r in unfold(f):
            if r not in seen:
                seen.add(r)
                rules.append(r)
    return TemporalProgram(tuple(rules), reg.alphabet, reg.extended)


def translate_with_registry(gamma: Formula, as_constraint: bool = False, printed_rule12: bool = False,
                            reserved: Iterable[str] = ()) -> tuple[TemporalProgram, LabelRegistry]:
    gamma = converse_normal_form(gamma)
    _, reg = sigma(gamma, printed_rule12, reserved=reserved)
    return translate(gamma, as_constraint, printed_rule12, reserved), reg


# -- back to dynamic formulas ------------------------------------------------

def _lit_formula(x: Term) -> Formula:
    if isinstance(x, Constant):
        return TRUE if x.value else FALSE
    f: Formula = Atom(x.atom)
    if x.prev:
        f = derived("prev", f)
    if x.negated:
        f = derived("neg", f)
    return f


def _conjunction(items: list[Formula]) -> Formula:
    if not items:
        return TRUE
    out = items[-1]
    for f in reversed(items[:-1]):
        out = derived("and", f, out)
    return out


def _disjunction(items: list[Formula]) -> Formula:
    if not items:
        return FALSE
    out = items[-1]
    for f in reversed(items[:-1]):
        out = derived("or", f, out)
    return out


def _shell(kind: RuleKind, core: Formula) -> list[Formula]:
    if kind is RuleKind.INITIAL:
        return [core]
    if kind is RuleKind.DYNAMIC:
        return [derived("wnext", derived("always", core))]
    if kind is RuleKind.FINAL:
        return [derived("always", derived("implies", derived("final"), core))]
    return [core, derived("wnext", derived("always", core))]


def rule_as_formulas(rule: Rule) -> list[Formula]:
    core = derived("implies",
                   _conjunction([_lit_formula(b) for b in rule.body]),
                   _disjunction([_lit_formula(a) for a in rule.head]))
    return _shell(rule.kind, core)


def program_as_formulas(program: TemporalProgram) -> list[Formula]:
    """Dynamic formulas whose conjunction is the program; global rules expand in two."""
    return [f for r in program.rules for f in rule_as_formulas(r)]


def _core_formula(c) -> Formula:
    if isinstance(c, (Literal, Constant)):
        return _lit_formula(c)
    if isinstance(c, Neg):
        return derived("neg", _core_formula(c.arg))
    if isinstance(c, Conj):
        return derived("and", _core_formula(c.left), _core_formula(c.right))
    if isinstance(c, Disj):
        return derived("or", _core_formula(c.left), _core_formula(c.right))
    if isinstance(c, Impl):
        return derived("implies", _core_formula(c.left), _core_formula(c.right))
    if isinstance(c, Iff):
        a, b = _core_formula(c.left), _core_formula(c.right)
        return derived("and", derived("implies", a, b), derived("implies", b, a))
    raise DHTError(f"unknown core {c!r}")


def intermediate_as_formula(f: IntermediateFormula) -> Formula:
    core = _core_formula(f.core)
    if f.shell is RuleKind.GLOBAL:
        return derived("always", core)
    return _shell(f.shell, core)[0]
