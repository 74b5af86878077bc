"""Three-valued evaluation over many traces at once.

A batch of ``N`` HT-traces of length ``n`` over an ordered alphabet is an
``int8`` array of shape ``(N, len(alphabet), n)`` holding, per atom and time
point, 0 (not in T), 1 (in T only) or 2 (in H).  Formulas evaluate to
``(N, n)`` arrays and paths to ``(N, n, n)`` arrays; satisfaction is
``value == 2``.
"""

from __future__ import annotations

import numpy as np

from .ast import Atom, Box, Choice, Converse, Diamond, Falsity, Seq, Star, Step, Test, Truth
from .errors import DHTError
from .semantics import HTTrace


def encode(traces, alphabet) -> np.ndarray:
    index = {a: i for i, a in enumerate(alphabet)}
    traces = list(traces)
    if not traces:
        return np.zeros((0, len(alphabet), 0), dtype=np.int8)
    n = len(traces[0])
    out = np.zeros((len(traces), len(alphabet), n), dtype=np.int8)
    for r, tr in enumerate(traces):
        for k in range(n):
            for a in tr.there[k]:
                out[r, index[a], k] = 1
            for a in tr.here[k]:
                out[r, index[a], k] = 2
    return out


def decode(values: np.ndarray, alphabet) -> list[HTTrace]:
    alphabet = list(alphabet)
    out = []
    for row in values:
        here = tuple(frozenset(alphabet[a] for a in np.flatnonzero(row[:, k] == 2))
                     for k in range(row.shape[1]))
        there = tuple(frozenset(alphabet[a] for a in np.flatnonzero(row[:, k] >= 1))
                      for k in range(row.shape[1]))
        out.append(HTTrace(here, there))
    return out


def all_candidates(n_atoms: int, length: int, start: int, stop: int, total: bool = False) -> np.ndarray:
    """Rows ``start..stop`` of the mixed-radix enumeration of all traces.

    Each (atom, time) cell is one digit; total enumeration uses digits {0, 2}.
    """
    cells = n_atoms * length
    idx = np.arange(start, stop, dtype=np.int64)
    radix = 2 if total else 3
    digits = (idx[:, None] // radix ** np.arange(cells, dtype=np.int64)) % radix
    if total:
        digits = digits * 2
    return digits.astype(np.int8).reshape(len(idx), length, n_atoms).transpose(0, 2, 1).copy()


class BatchEvaluator:
    """Evaluates formulas on a fixed batch; memoizes shared subterms."""

    def __init__(self, values: np.ndarray, alphabet):
        self.values = values
        self.index = {a: i for i, a in enumerate(alphabet)}
        self.count, _, self.length = values.shape
        self._memo: dict = {}

    def formula(self, phi) -> np.ndarray:
        cached = self._memo.get(phi)
        if cached is not None:
            return cached
        N, n = self.count, self.length
        if isinstance(phi, Truth):
            out = np.full((N, n), 2, dtype=np.int8)
        elif isinstance(phi, Falsity):
            out = np.zeros((N, n), dtype=np.int8)
        elif isinstance(phi, Atom):
            i = self.index.get(phi.name)
            out = self.values[:, i, :] if i is not None else np.zeros((N, n), dtype=np.int8)
        elif isinstance(phi, (Box, Diamond)):
            out = self._modal(phi)
        else:
            raise DHTError(f"expected a dynamic formula, got {phi!r}")
        self._memo[phi] = out
        return out

    def _modal(self, phi) -> np.ndarray:
        box = isinstance(phi, Box)
        rho = phi.path
        v = self.formula(phi.body)
        edge = np.int8(2 if box else 0)
        if isinstance(rho, Step):
            out = np.full_like(v, edge)
            out[:, :-1] = v[:, 1:]
            return out
        if isinstance(rho, Converse) and isinstance(rho.inner, Step):
            out = np.full_like(v, edge)
            out[:, 1:] = v[:, :-1]
            return out
        if isinstance(rho, Test):
            a = self.formula(rho.body)
            return np.where(a <= v, np.int8(2), v) if box else np.minimum(a, v)
        if isinstance(rho, Star) and isinstance(rho.inner, Step):
            acc = np.minimum if box else np.maximum
            return acc.accumulate(v[:, ::-1], axis=1)[:, ::-1]
        m = self.path(rho)
        if box:
            return np.where(m <= v[:, None, :], np.int8(2), v[:, None, :]).min(axis=2)
        return np.minimum(m, v[:, None, :]).max(axis=2)

    def _compose(self, a: np.ndarray, rho) -> np.ndarray:
        """``a`` followed by the path ``rho``."""
        if isinstance(rho, Step):
            out = np.zeros_like(a)
            out[:, :, 1:] = a[:, :, :-1]
            return out
        if isinstance(rho, Converse) and isinstance(rho.inner, Step):
            out = np.zeros_like(a)
            out[:, :, :-1] = a[:, :, 1:]
            return out
        if isinstance(rho, Test):
            return np.minimum(a, self.formula(rho.body)[:, None, :])
        if isinstance(rho, Seq):
            return self._compose(self._compose(a, rho.left), rho.right)
        if isinstance(rho, Choice):
            return np.maximum(self._compose(a, rho.left), self._compose(a, rho.right))
        return maxmin(a, self.path(rho))

    def path(self, rho) -> np.ndarray:
        cached = self._memo.get(rho)
        if cached is not None:
            return cached
        N, n = self.count, self.length
        if isinstance(rho, Step):
            base = np.zeros((n, n), dtype=np.int8)
            base[np.arange(n - 1), np.arange(1, n)] = 2
            out = np.broadcast_to(base, (N, n, n))
        elif isinstance(rho, Test):
            v = self.formula(rho.body)
            out = np.zeros((N, n, n), dtype=np.int8)
            out[:, np.arange(n), np.arange(n)] = v
        elif isinstance(rho, Choice):
            out = np.maximum(self.path(rho.left), self.path(rho.right))
        elif isinstance(rho, Seq):
            out = self._compose(np.ascontiguousarray(self.path(rho.left)), rho.right)
        elif isinstance(rho, Star):
            out = np.zeros((N, n, n), dtype=np.int8)
            out[:, np.arange(n), np.arange(n)] = 2
            while True:
                grown = np.maximum(out, self._compose(out, rho.inner))
                if np.array_equal(grown, out):
                    break
                out = grown
        elif isinstance(rho, Converse):
            out = self.path(rho.inner).transpose(0, 2, 1)
        else:
            raise DHTError(f"expected a path expression, got {rho!r}")
        self._memo[rho] = out
        return out


def maxmin(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """(max, min) matrix product, batched over the first axis."""
    n = a.shape[-1]
    out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=np.int8)
    for i in range(n):
        np.maximum(out, np.minimum(a[:, :, i, None], b[:, None, i, :]), out=out)
    return out


def holds_at_zero(formulas, values: np.ndarray, alphabet) -> np.ndarray:
    """Boolean mask of rows satisfying every formula at time point 0."""
    mask = np.ones(values.shape[0], dtype=bool)
    rows = np.arange(values.shape[0])
    for phi in formulas:
        if not rows.size:
            break
        ev = BatchEvaluator(values[rows], alphabet)
        ok = ev.formula(phi)[:, 0] == 2
        mask[rows[~ok]] = False
        rows = rows[ok]
    return mask
