"""Reference semantics over finite Here-and-There traces.

Three evaluators live here and are deliberately kept independent of each
other so they can be cross-checked:

* :func:`satisfies` / :func:`accessibility` follow the relational definition,
  where ``[rho] phi`` quantifies over both the trace and its total "there"
  component;
* :func:`satisfies_classical` is a plain LDLf evaluator over a single trace,
  computing reachable sets instead of relations;
* :func:`trivalue` / :func:`trivalue_path` implement the valuation into
  ``{0, 1, 2}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .ast import (
    Atom, Box, Choice, Converse, Diamond, Falsity, Formula, Path, Seq, Star,
    Step, Test, Truth,
)
from .errors import DHTError

Relation = frozenset  # of (k, i) pairs with 0 <= k, i < length


@dataclass(frozen=True)
class HTTrace:
    """A sequence of states ``(H_i, T_i)`` with ``H_i`` a subset of ``T_i``."""

    here: tuple[frozenset[str], ...]
    there: tuple[frozenset[str], ...]

    def __post_init__(self):
        here = tuple(frozenset(s) for s in self.here)
        there = tuple(frozenset(s) for s in self.there)
        object.__setattr__(self, "here", here)
        object.__setattr__(self, "there", there)
        if len(here) != len(there):
            raise DHTError("here and there components differ in length")
        if not here:
            raise DHTError("traces must have at least one state")
        for i, (h, t) in enumerate(zip(here, there)):
            if not h <= t:
                raise DHTError(f"state {i}: H is not a subset of T ({sorted(h - t)} missing)")

    @classmethod
    def total_trace(cls, states: Sequence[Iterable[str]]) -> "HTTrace":
        states = tuple(frozenset(s) for s in states)
        return cls(states, states)

    def __len__(self) -> int:
        return len(self.here)

    @property
    def length(self) -> int:
        return len(self.here)

    def is_total(self) -> bool:
        return self.here == self.there

    def total(self) -> "HTTrace":
        """The trace ``<T, T>``."""
        return HTTrace(self.there, self.there)

    def alphabet(self) -> frozenset[str]:
        return frozenset().union(*self.there)

    def restrict(self, alphabet: Iterable[str]) -> "HTTrace":
        keep = frozenset(alphabet)
        return HTTrace(tuple(h & keep for h in self.here), tuple(t & keep for t in self.there))

    def sort_key(self):
        return tuple((tuple(sorted(h)), tuple(sorted(t))) for h, t in zip(self.here, self.there))


def _check_point(trace: HTTrace, k: int) -> None:
    if not 0 <= k < len(trace):
        raise DHTError(f"time point {k} outside [0, {len(trace)})")


# -- relational semantics ----------------------------------------------------

class _Relational:
    """Memo tables for one trace; ``total`` selects ``<T,T>`` over ``<H,T>``."""

    def __init__(self, trace: HTTrace):
        self.trace = trace
        self.n = len(trace)
        self._rel: dict[tuple[Path, bool], frozenset] = {}
        self._sat: dict[tuple[Formula, bool, int], bool] = {}

    def sat(self, phi: Formula, k: int, total: bool) -> bool:
        key = (phi, total, k)
        cached = self._sat.get(key)
        if cached is not None:
            return cached
        if isinstance(phi, Truth):
            result = True
        elif isinstance(phi, Falsity):
            result = False
        elif isinstance(phi, Atom):
            states = self.trace.there if total else self.trace.here
            result = phi.name in states[k]
        elif isinstance(phi, Diamond):
            result = any(self.sat(phi.body, i, total)
                         for (j, i) in self.rel(phi.path, total) if j == k)
        elif isinstance(phi, Box):
            worlds = (True,) if total else (False, True)
            result = all(self.sat(phi.body, i, w)
                         for w in worlds
                         for (j, i) in self.rel(phi.path, w) if j == k)
        else:
            raise DHTError(f"expected a dynamic formula, got {phi!r}")
        self._sat[key] = result
        return result

    def rel(self, rho: Path, total: bool) -> frozenset:
        key = (rho, total)
        cached = self._rel.get(key)
        if cached is not None:
            return cached
        n = self.n
        if isinstance(rho, Step):
            result = frozenset((k, k + 1) for k in range(n - 1))
        elif isinstance(rho, Test):
            result = frozenset((k, k) for k in range(n) if self.sat(rho.body, k, total))
        elif isinstance(rho, Choice):
            result = self.rel(rho.left, total) | self.rel(rho.right, total)
        elif isinstance(rho, Seq):
            result = _compose(self.rel(rho.left, total), self.rel(rho.right, total))
        elif isinstance(rho, Star):
            step = self.rel(rho.inner, total)
            result = frozenset((k, k) for k in range(n))
            while True:
                grown = result | _compose(result, step)
                if grown == result:
                    break
                result = grown
        elif isinstance(rho, Converse):
            result = frozenset((i, k) for (k, i) in self.rel(rho.inner, total))
        else:
            raise DHTError(f"expected a path expression, got {rho!r}")
        self._rel[key] = result
        return result


def _compose(r1: frozenset, r2: frozenset) -> frozenset:
    succ: dict[int, list[int]] = {}
    for j, i in r2:
        succ.setdefault(j, []).append(i)
    return frozenset((k, i) for (k, j) in r1 for i in succ.get(j, ()))


def accessibility(rho: Path, trace: HTTrace) -> Relation:
    """The relation of time-point pairs reachable through ``rho`` in ``trace``."""
    return _Relational(trace).rel(rho, trace.is_total())


def satisfies(trace: HTTrace, k: int, phi: Formula) -> bool:
    """``trace, k |= phi`` in the here-and-there sense."""
    _check_point(trace, k)
    return _Relational(trace).sat(phi, k, trace.is_total())


# -- classical evaluator -----------------------------------------------------

def satisfies_classical(states: HTTrace | Sequence[Iterable[str]], k: int, phi: Formula) -> bool:
    """Plain LDLf truth of ``phi`` at ``k`` on a single (total) trace."""
    if isinstance(states, HTTrace):
        if not states.is_total():
            raise DHTError("classical evaluation needs a total trace")
        states = states.there
    states = [frozenset(s) for s in states]
    if not 0 <= k < len(states):
        raise DHTError(f"time point {k} outside [0, {len(states)})")
    return _holds(states, k, phi)


def _holds(states, k, phi) -> bool:
    if isinstance(phi, Truth):
        return True
    if isinstance(phi, Falsity):
        return False
    if isinstance(phi, Atom):
        return phi.name in states[k]
    if isinstance(phi, Diamond):
        return any(_holds(states, j, phi.body) for j in _reach(states, phi.path, k))
    if isinstance(phi, Box):
        return all(_holds(states, j, phi.body) for j in _reach(states, phi.path, k))
    raise DHTError(f"expected a dynamic formula, got {phi!r}")


def _reach(states, rho, k) -> set[int]:
    """Points reachable from ``k`` by one traversal of ``rho``."""
    if isinstance(rho, Step):
        return {k + 1} if k + 1 < len(states) else set()
    if isinstance(rho, Test):
        return {k} if _holds(states, k, rho.body) else set()
    if isinstance(rho, Choice):
        return _reach(states, rho.left, k) | _reach(states, rho.right, k)
    if isinstance(rho, Seq):
        out: set[int] = set()
        for j in _reach(states, rho.left, k):
            out |= _reach(states, rho.right, j)
        return out
    if isinstance(rho, Star):
        seen = {k}
        frontier = [k]
        while frontier:
            j = frontier.pop()
            for i in _reach(states, rho.inner, j):
                if i not in seen:
                    seen.add(i)
                    frontier.append(i)
        return seen
    if isinstance(rho, Converse):
        return {j for j in range(len(states)) if k in _reach(states, rho.inner, j)}
    raise DHTError(f"expected a path expression, got {rho!r}")


# -- three-valued valuation --------------------------------------------------

def imp(x: int, y: int) -> int:
    return 2 if x <= y else y


class _Valuation:
    def __init__(self, trace: HTTrace):
        self.trace = trace
        self.n = len(trace)
        self._f: dict[Formula, list[int]] = {}
        self._p: dict[Path, list[list[int]]] = {}

    def formula(self, phi: Formula) -> list[int]:
        cached = self._f.get(phi)
        if cached is not None:
            return cached
        n = self.n
        if isinstance(phi, Truth):
            out = [2] * n
        elif isinstance(phi, Falsity):
            out = [0] * n
        elif isinstance(phi, Atom):
            h, t = self.trace.here, self.trace.there
            out = [2 if phi.name in h[k] else 1 if phi.name in t[k] else 0 for k in range(n)]
        elif isinstance(phi, Box):
            m, v = self.path(phi.path), self.formula(phi.body)
            out = [min(imp(m[k][i], v[i]) for i in range(n)) for k in range(n)]
        elif isinstance(phi, Diamond):
            m, v = self.path(phi.path), self.formula(phi.body)
            out = [max(min(m[k][i], v[i]) for i in range(n)) for k in range(n)]
        else:
            raise DHTError(f"expected a dynamic formula, got {phi!r}")
        self._f[phi] = out
        return out

    def path(self, rho: Path) -> list[list[int]]:
        cached = self._p.get(rho)
        if cached is not None:
            return cached
        n = self.n
        if isinstance(rho, Step):
            out = [[2 if j == k + 1 else 0 for j in range(n)] for k in range(n)]
        elif isinstance(rho, Test):
            v = self.formula(rho.body)
            out = [[v[k] if j == k else 0 for j in range(n)] for k in range(n)]
        elif isinstance(rho, Choice):
            a, b = self.path(rho.left), self.path(rho.right)
            out = [[max(a[k][j], b[k][j]) for j in range(n)] for k in range(n)]
        elif isinstance(rho, Seq):
            out = _maxmin(self.path(rho.left), self.path(rho.right))
        elif isinstance(rho, Star):
            step = self.path(rho.inner)
            out = [[2 if j == k else 0 for j in range(n)] for k in range(n)]
            while True:
                nxt = _maxmin(out, step)
                grown = [[max(out[k][j], nxt[k][j]) for j in range(n)] for k in range(n)]
                if grown == out:
                    break
                out = grown
        elif isinstance(rho, Converse):
            m = self.path(rho.inner)
            out = [[m[j][k] for j in range(n)] for k in range(n)]
        else:
            raise DHTError(f"expected a path expression, got {rho!r}")
        self._p[rho] = out
        return out


def _maxmin(a, b):
    n = len(a)
    return [[max(min(a[k][i], b[i][j]) for i in range(n)) for j in range(n)] for k in range(n)]


def trivalue(trace: HTTrace, k: int, phi: Formula) -> int:
    """Truth value of ``phi`` at ``k``: 2 proved, 1 assumed, 0 false."""
    _check_point(trace, k)
    return _Valuation(trace).formula(phi)[k]


def trivalue_path(trace: HTTrace, k: int, j: int, rho: Path) -> int:
    _check_point(trace, k)
    _check_point(trace, j)
    return _Valuation(trace).path(rho)[k][j]


def trivalues(trace: HTTrace, phi: Formula) -> list[int]:
    """Values of ``phi`` at every time point of ``trace``."""
    return list(_Valuation(trace).formula(phi))
