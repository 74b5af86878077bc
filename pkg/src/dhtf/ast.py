"""Dynamic formulas and path expressions.

The core syntax has five formula variants (``Truth``, ``Falsity``, ``Atom``,
``Diamond``, ``Box``) and six path variants (``Step``, ``Test``, ``Choice``,
``Seq``, ``Star``, ``Converse``).  Every other connective is expanded into
these by :func:`derived` at construction time.

Nodes are frozen dataclasses, so structural equality and hashing come for
free and values can be shared across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

from .errors import DHTError

__all__ = [
    "Truth", "Falsity", "Atom", "Diamond", "Box",
    "Step", "Test", "Choice", "Seq", "Star", "Converse",
    "Formula", "Path", "TRUE", "FALSE", "STEP",
    "derived", "DERIVED_ARITY", "path_of_formula", "power",
    "converse_normal_form", "path_converse_normal_form", "is_converse_normal",
    "is_propositional", "size", "atoms", "subterms", "looping_stars", "backward_stars",
]


@dataclass(frozen=True)
class Truth:
    def __repr__(self) -> str:
        return "Truth()"


@dataclass(frozen=True)
class Falsity:
    def __repr__(self) -> str:
        return "Falsity()"


@dataclass(frozen=True)
class Atom:
    name: str

    def __post_init__(self):
        if not isinstance(self.name, str) or not self.name:
            raise DHTError(f"atom name must be a nonempty string, got {self.name!r}")


@dataclass(frozen=True)
class Diamond:
    path: "Path"
    body: "Formula"


@dataclass(frozen=True)
class Box:
    path: "Path"
    body: "Formula"


@dataclass(frozen=True)
class Step:
    def __repr__(self) -> str:
        return "Step()"


@dataclass(frozen=True)
class Test:
    body: "Formula"


@dataclass(frozen=True)
class Choice:
    left: "Path"
    right: "Path"


@dataclass(frozen=True)
class Seq:
    left: "Path"
    right: "Path"


@dataclass(frozen=True)
class Star:
    inner: "Path"


@dataclass(frozen=True)
class Converse:
    inner: "Path"


Formula = Union[Truth, Falsity, Atom, Diamond, Box]
Path = Union[Step, Test, Choice, Seq, Star, Converse]

TRUE = Truth()
FALSE = Falsity()
STEP = Step()

_FORMULA_TYPES = (Truth, Falsity, Atom, Diamond, Box)
_PATH_TYPES = (Step, Test, Choice, Seq, Star, Converse)


def _check_formula(x) -> None:
    if not isinstance(x, _FORMULA_TYPES):
        raise DHTError(f"expected a dynamic formula, got {x!r}")


# -- derived operators -------------------------------------------------------

def _and(a, b):
    return Diamond(Test(a), b)


def _or(a, b):
    return Diamond(Choice(Test(a), Test(b)), TRUE)


def _implies(a, b):
    return Box(Test(a), b)


def _neg(a):
    return _implies(a, FALSE)


def _until(a, b):
    return Diamond(Star(Seq(Test(a), STEP)), b)


def _since(a, b):
    return Diamond(Converse(Star(Seq(Test(a), STEP))), b)


def _always(a):
    return Box(Star(STEP), a)


def _historically(a):
    return Box(Converse(Star(STEP)), a)


_DERIVED = {
    "and": (2, _and),
    "or": (2, _or),
    "implies": (2, _implies),
    "neg": (1, _neg),
    "final": (0, lambda: Box(STEP, FALSE)),
    "initial": (0, lambda: Box(Converse(STEP), FALSE)),
    "next": (1, lambda a: Diamond(STEP, a)),
    "wnext": (1, lambda a: Box(STEP, a)),
    "prev": (1, lambda a: Diamond(Converse(STEP), a)),
    "wprev": (1, lambda a: Box(Converse(STEP), a)),
    "eventually": (1, lambda a: Diamond(Star(STEP), a)),
    "always": (1, _always),
    "once": (1, lambda a: Diamond(Converse(Star(STEP)), a)),
    "historically": (1, _historically),
    "until": (2, _until),
    "since": (2, _since),
    "release": (2, lambda a, b: _or(_until(b, _and(a, b)), _always(b))),
    "trigger": (2, lambda a, b: _or(_since(b, _and(a, b)), _historically(b))),
}

_ALIASES = {
    "ev": "eventually", "alw": "always", "palw": "historically",
    "not": "neg", "->": "implies", "&&": "and", "||": "or",
}

DERIVED_ARITY = {name: arity for name, (arity, _) in _DERIVED.items()}


def derived(op: str, *args: Formula) -> Formula:
    """Build the core-syntax expansion of a derived connective.

    >>> derived("until", Atom("p"), Atom("q"))
    Diamond(path=Star(inner=Seq(left=Test(body=Atom(name='p')), right=Step())), body=Atom(name='q'))
    """
    name = _ALIASES.get(op, op)
    try:
        arity, build = _DERIVED[name]
    except KeyError:
        raise DHTError(f"unknown derived operator {op!r}") from None
    if len(args) != arity:
        raise DHTError(f"operator {op!r} takes {arity} argument(s), got {len(args)}")
    for a in args:
        _check_formula(a)
    return build(*args)


def is_propositional(phi: Formula) -> bool:
    """True when ``phi`` only uses Boolean structure (tests, choice, sequence of tests)."""
    if isinstance(phi, (Truth, Falsity, Atom)):
        return True
    if isinstance(phi, (Diamond, Box)):
        return _static_path(phi.path) and is_propositional(phi.body)
    return False


def _static_path(rho: Path) -> bool:
    if isinstance(rho, Test):
        return is_propositional(rho.body)
    if isinstance(rho, (Choice, Seq)):
        return _static_path(rho.left) and _static_path(rho.right)
    return False


def path_of_formula(phi: Formula) -> Path:
    """Read a propositional formula as the path ``phi? ; step``."""
    _check_formula(phi)
    if not is_propositional(phi):
        raise DHTError("only propositional formulas can be used as path expressions")
    return Seq(Test(phi), STEP)


def power(rho: Path, n: int) -> Path:
    """``rho`` repeated ``n`` times, terminated by ``true?``."""
    if n < 0:
        raise DHTError("power exponent must be nonnegative")
    result: Path = Test(TRUE)
    for _ in range(n):
        result = Seq(rho, result)
    return result


# -- converse normal form ----------------------------------------------------

def converse_normal_form(phi: Formula) -> Formula:
    """Push every converse down until it only wraps ``Step``."""
    if isinstance(phi, Diamond):
        return Diamond(path_converse_normal_form(phi.path), converse_normal_form(phi.body))
    if isinstance(phi, Box):
        return Box(path_converse_normal_form(phi.path), converse_normal_form(phi.body))
    _check_formula(phi)
    return phi


def path_converse_normal_form(rho: Path) -> Path:
    if isinstance(rho, Step):
        return rho
    if isinstance(rho, Test):
        return Test(converse_normal_form(rho.body))
    if isinstance(rho, Choice):
        return Choice(path_converse_normal_form(rho.left), path_converse_normal_form(rho.right))
    if isinstance(rho, Seq):
        return Seq(path_converse_normal_form(rho.left), path_converse_normal_form(rho.right))
    if isinstance(rho, Star):
        return Star(path_converse_normal_form(rho.inner))
    if isinstance(rho, Converse):
        return _push_converse(rho.inner)
    raise DHTError(f"expected a path expression, got {rho!r}")


def _push_converse(rho: Path) -> Path:
    # normal form of Converse(rho)
    if isinstance(rho, Step):
        return Converse(STEP)
    if isinstance(rho, Converse):
        return path_converse_normal_form(rho.inner)
    if isinstance(rho, Test):
        return Test(converse_normal_form(rho.body))
    if isinstance(rho, Star):
        return Star(_push_converse(rho.inner))
    if isinstance(rho, Choice):
        return Choice(_push_converse(rho.left), _push_converse(rho.right))
    if isinstance(rho, Seq):
        return Seq(_push_converse(rho.right), _push_converse(rho.left))
    raise DHTError(f"expected a path expression, got {rho!r}")


def is_converse_normal(node: Formula | Path) -> bool:
    return all(not isinstance(n, Converse) or isinstance(n.inner, Step) for n in subterms(node))


# -- traversal and metrics ---------------------------------------------------

def _children(node):
    if isinstance(node, (Diamond, Box)):
        return (node.path, node.body)
    if isinstance(node, Test):
        return (node.body,)
    if isinstance(node, (Choice, Seq)):
        return (node.left, node.right)
    if isinstance(node, (Star, Converse)):
        return (node.inner,)
    return ()


def subterms(node: Formula | Path) -> Iterator[Formula | Path]:
    """Preorder walk over formula and path nodes."""
    stack = [node]
    while stack:
        n = stack.pop()
        yield n
        stack.extend(reversed(_children(n)))


def size(node: Formula | Path) -> int:
    """Number of formula and path nodes."""
    return sum(1 for _ in subterms(node))


def atoms(node: Formula | Path) -> tuple[str, ...]:
    """Atom names occurring in ``node``, sorted."""
    return tuple(sorted({n.name for n in subterms(node) if isinstance(n, Atom)}))



def _nullable(rho: Path) -> bool:
    """Whether ``rho`` can be traversed without moving."""
    if isinstance(rho, (Test, Star)):
        return True
    if isinstance(rho, Seq):
        return _nullable(rho.left) and _nullable(rho.right)
    if isinstance(rho, Choice):
        return _nullable(rho.left) or _nullable(rho.right)
    return False


def _moves(rho: Path) -> set[int]:
    """Directions of the steps in a converse-normal path, ignoring tests."""
    if isinstance(rho, Step):
        return {1}
    if isinstance(rho, Converse):
        return {-1}
    if isinstance(rho, (Seq, Choice)):
        return _moves(rho.left) | _moves(rho.right)
    if isinstance(rho, Star):
        return _moves(rho.inner)
    return set()


def looping_stars(node: Formula | Path) -> list[Star]:
    """Starred paths whose body may return to the point it started from.

    A conservative syntactic check after converse normalization: the body can
    be traversed without moving, or it steps both forwards and backwards.
    """
    if isinstance(node, _FORMULA_TYPES):
        node = converse_normal_form(node)
    else:
        node = path_converse_normal_form(node)
    return [n for n in subterms(node)
            if isinstance(n, Star) and (_nullable(n.inner) or _moves(n.inner) == {1, -1})]


def backward_stars(node: Formula | Path) -> list[Star]:
    """Starred paths whose body contains a backward step (after normalization)."""
    if isinstance(node, _FORMULA_TYPES):
        node = converse_normal_form(node)
    else:
        node = path_converse_normal_form(node)
    return [n for n in subterms(node) if isinstance(n, Star) and -1 in _moves(n.inner)]
