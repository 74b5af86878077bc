"""Bounded enumeration of here-and-there models and temporal equilibrium models.

All searches are exhaustive over traces of one fixed length.  Each (atom, time)
cell takes one of three values (absent, assumed, proved), so a search over
``n`` atoms and length ``lam`` visits ``3 ** (n * lam)`` candidates; that number
is checked against an explicit budget before any work starts.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .ast import Formula, atoms, converse_normal_form
from .errors import BudgetExceeded, DHTError
from .semantics import HTTrace, trivalues
from .translate import LabelRegistry, TemporalProgram, program_as_formulas, sigma, translate
from .vectorized import all_candidates, decode, encode, holds_at_zero

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 10 ** 7


def default_budget() -> int:
    return int(os.environ.get("DHTF_BUDGET", DEFAULT_BUDGET))


@dataclass(frozen=True)
class ModelSet:
    alphabet: tuple[str, ...]
    length: int
    traces: frozenset[HTTrace] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "traces", frozenset(self.traces))
        for t in self.traces:
            if len(t) != self.length:
                raise DHTError("all traces in a model set must share one length")
            if not t.alphabet() <= set(self.alphabet):
                raise DHTError("trace uses atoms outside the model set alphabet")

    def __len__(self) -> int:
        return len(self.traces)

    def __iter__(self):
        return iter(self.sorted())

    def __contains__(self, trace) -> bool:
        return trace in self.traces

    def sorted(self) -> list[HTTrace]:
        return sorted(self.traces, key=HTTrace.sort_key)


def _candidates(n_atoms: int, length: int, total: bool = False) -> int:
    return (2 if total else 3) ** (n_atoms * length)


def _check(n_atoms: int, length: int, budget: int | None) -> int:
    if length < 1:
        raise DHTError("trace length must be at least 1")
    budget = default_budget() if budget is None else budget
    if budget <= 0:
        raise DHTError("budget must be positive")
    need = _candidates(n_atoms, length)
    if need > budget:
        raise BudgetExceeded(need, budget)
    return budget


def _chunk_rows(length: int) -> int:
    return max(1024, 4_000_000 // (length * length))


def model_array(formulas: Sequence[Formula], length: int, alphabet: Sequence[str],
                total: bool = False, jobs: int = 1) -> np.ndarray:
    """All (total) traces satisfying ``formulas`` at point 0, as value rows."""
    n = len(alphabet)
    count = _candidates(n, length, total)
    step = _chunk_rows(length)

    def work(start):
        values = all_candidates(n, length, start, min(start + step, count), total=total)
        return values[holds_at_zero(formulas, values, alphabet)]

    starts = range(0, count, step)
    if jobs > 1:
        with ThreadPoolExecutor(jobs) as pool:
            parts = list(pool.map(work, starts))
    else:
        parts = [work(s) for s in starts]
    return np.concatenate(parts) if parts else np.zeros((0, n, length), dtype=np.int8)


def _alphabet(formulas, alphabet) -> tuple[str, ...]:
    if alphabet is None:
        found: set[str] = set()
        for f in formulas:
            found.update(atoms(f))
        return tuple(sorted(found))
    return tuple(dict.fromkeys(alphabet))


def dht_models(formulas: Iterable[Formula], length: int, alphabet: Iterable[str] | None = None,
               budget: int | None = None, jobs: int = 1) -> ModelSet:
    """Every HT-trace of the given length that satisfies all formulas at point 0."""
    formulas = list(formulas)
    alphabet = _alphabet(formulas, alphabet)
    _check(len(alphabet), length, budget)
    rows = model_array(formulas, length, alphabet, jobs=jobs)
    return ModelSet(alphabet, length, decode(rows, alphabet))


def _demotions(row: np.ndarray) -> np.ndarray:
    """All rows strictly below a total row: some proved cells become assumed."""
    cells = np.flatnonzero(row.ravel() == 2)
    m = len(cells)
    if m == 0:
        return np.zeros((0,) + row.shape, dtype=np.int8)
    idx = np.arange(1, 2 ** m, dtype=np.int64)
    bits = (idx[:, None] >> np.arange(m)) & 1
    flat = np.repeat(row.ravel()[None, :], len(idx), axis=0)
    flat[:, cells] -= bits.astype(np.int8)
    return flat.reshape((len(idx),) + row.shape)


def equilibrium_mask(formulas, totals: np.ndarray, alphabet, batch_rows: int = 200_000) -> np.ndarray:
    """For total model rows, whether no strictly smaller H is also a model."""
    stable = np.ones(len(totals), dtype=bool)
    pending: list[np.ndarray] = []
    owners: list[np.ndarray] = []
    size = 0

    def flush():
        nonlocal pending, owners, size
        if not pending:
            return
        rows = np.concatenate(pending)
        who = np.concatenate(owners)
        ok = holds_at_zero(formulas, rows, alphabet)
        stable[np.unique(who[ok])] = False
        pending, owners, size = [], [], 0

    for i, row in enumerate(totals):
        below = _demotions(row)
        if not len(below):
            continue
        pending.append(below)
        owners.append(np.full(len(below), i))
        size += len(below)
        if size >= batch_rows:
            flush()
    flush()
    return stable


def del_models(formulas: Iterable[Formula], length: int, alphabet: Iterable[str] | None = None,
               budget: int | None = None, jobs: int = 1) -> ModelSet:
    """Temporal equilibrium (stable) models of the given length."""
    formulas = list(formulas)
    alphabet = _alphabet(formulas, alphabet)
    _check(len(alphabet), length, budget)
    totals = model_array(formulas, length, alphabet, total=True, jobs=jobs)
    stable = totals[equilibrium_mask(formulas, totals, alphabet)]
    return ModelSet(alphabet, length, decode(stable, alphabet))


def restrict(models: ModelSet, alphabet: Iterable[str]) -> ModelSet:
    alphabet = tuple(dict.fromkeys(alphabet))
    if not set(alphabet) <= set(models.alphabet):
        raise DHTError("restriction alphabet must be a subset of the model set alphabet")
    return ModelSet(alphabet, models.length, {t.restrict(alphabet) for t in models.traces})


def _restrict_rows(rows: np.ndarray, src: Sequence[str], dst: Sequence[str]) -> np.ndarray:
    pos = [list(src).index(a) for a in dst]
    sub = rows[:, pos, :]
    if not len(sub):
        return sub
    return np.unique(sub, axis=0)


def _row_set(rows: np.ndarray) -> set[bytes]:
    return {r.tobytes() for r in rows}


# -- labels ------------------------------------------------------------------

def registry_for(gamma: Formula, reserved: Iterable[str] = ()) -> LabelRegistry:
    _, reg = sigma(converse_normal_form(gamma), reserved=reserved)
    return reg


def label_extension(trace: HTTrace, gamma: Formula, reg: LabelRegistry | None = None) -> HTTrace:
    """Add every label atom with the three-valued value of its closure formula."""
    reg = reg or registry_for(gamma)
    here = [set(h) for h in trace.here]
    there = [set(t) for t in trace.there]
    done: set[str] = set()
    for mu, name in reg.labelled():
        if name in done:
            continue
        done.add(name)
        for k, v in enumerate(trivalues(trace, mu)):
            if v == 2:
                here[k].add(name)
            if v:
                there[k].add(name)
    return HTTrace(tuple(here), tuple(there))


# -- theorem checks ----------------------------------------------------------

@dataclass
class NormalFormReport:
    formula: Formula
    length: int
    mode: str
    alphabet: tuple[str, ...]
    extended: tuple[str, ...]
    models: int = 0
    rules: int = 0
    missing: list[HTTrace] = field(default_factory=list)
    extra: list[HTTrace] = field(default_factory=list)
    unforced: list[HTTrace] = field(default_factory=list)
    note: str = ""

    @property
    def passed(self) -> bool:
        return not self.missing and not self.extra

    def to_dict(self) -> dict:
        from .parser import print_formula, trace_to_json
        return {
            "formula": print_formula(self.formula),
            "length": self.length,
            "mode": self.mode,
            "passed": self.passed,
            "alphabet": list(self.alphabet),
            "extended": list(self.extended),
            "models": self.models,
            "rules": self.rules,
            "missing": [trace_to_json(t) for t in self.missing],
            "extra": [trace_to_json(t) for t in self.extra],
            "unforced": [trace_to_json(t) for t in self.unforced],
            "note": self.note,
        }


def verify_normal_form(gamma: Formula, length: int, mode: str = "forced",
                       budget: int | None = None) -> NormalFormReport:
    """Compare the models of ``gamma`` with those of its translation.

    ``forced``: every model of ``gamma``, extended with forced label values,
    must satisfy the program (``missing`` lists failures).  ``full``: both
    model sets are enumerated and compared after restriction; ``extra`` lists
    restricted program models that are not models of ``gamma`` and
    ``unforced`` lists program models whose labels differ from the forced ones.
    """
    if mode not in ("forced", "full"):
        raise DHTError(f"unknown mode {mode!r}")
    cnf = converse_normal_form(gamma)
    program = translate(cnf)
    reg = registry_for(cnf)
    A, Aplus = reg.alphabet, reg.extended
    _check(len(A), length, budget)
    if mode == "full":
        _check(len(Aplus), length, budget)
    rules = program_as_formulas(program)
    base = model_array([gamma], length, A)
    report = NormalFormReport(gamma, length, mode, A, Aplus, models=len(base), rules=len(program))
    extended = [label_extension(t, cnf, reg) for t in decode(base, A)]
    ext_rows = encode(extended, Aplus) if extended else np.zeros((0, len(Aplus), length), np.int8)
    ok = holds_at_zero(rules, ext_rows, Aplus)
    report.missing = [t for t, good in zip(decode(base, A), ok) if not good]
    if mode == "forced":
        report.note = "forced mode: inclusion of models of the formula only"
        return report
    prog_rows = model_array(rules, length, Aplus)
    restricted = _restrict_rows(prog_rows, Aplus, A)
    base_set = _row_set(base)
    report.extra = [t for t, r in zip(decode(restricted, A), restricted) if r.tobytes() not in base_set]
    forced = _row_set(ext_rows)
    report.unforced = [t for t, r in zip(decode(prog_rows, Aplus), prog_rows) if r.tobytes() not in forced]
    report.note = "full mode: exact set comparison after restriction"
    return report


@dataclass
class EquivalenceResult:
    equivalent: bool
    lambda_max: int
    trace: HTTrace | None = None
    point: int | None = None
    left_holds: bool | None = None

    def to_dict(self) -> dict:
        from .parser import trace_to_json
        return {
            "equivalent": self.equivalent,
            "lambda_max": self.lambda_max,
            "counterexample": None if self.trace is None else {
                "trace": trace_to_json(self.trace), "k": self.point, "left_holds": self.left_holds,
            },
        }


def check_dht_equivalence(phi: Formula, psi: Formula, lambda_max: int,
                          alphabet: Iterable[str] | None = None,
                          budget: int | None = None) -> EquivalenceResult:
    """Look for a trace and time point where exactly one formula holds."""
    from .vectorized import BatchEvaluator
    alphabet = _alphabet([phi, psi], alphabet)
    n = len(alphabet)
    for length in range(1, lambda_max + 1):
        _check(n, length, budget)
    for length in range(1, lambda_max + 1):
        count = _candidates(n, length)
        step = _chunk_rows(length)
        for start in range(0, count, step):
            values = all_candidates(n, length, start, min(start + step, count))
            ev = BatchEvaluator(values, alphabet)
            a = ev.formula(phi) == 2
            b = ev.formula(psi) == 2
            diff = np.argwhere(a != b)
            if len(diff):
                r, k = diff[0]
                trace = decode(values[r:r + 1], alphabet)[0]
                return EquivalenceResult(False, lambda_max, trace, int(k), bool(a[r, k]))
    return EquivalenceResult(True, lambda_max)


@dataclass
class FaithfulnessReport:
    formula: Formula
    context: Formula
    length: int
    mode: str
    original: ModelSet
    translated: ModelSet | None
    missing: list[HTTrace] = field(default_factory=list)
    extra: list[HTTrace] = field(default_factory=list)
    note: str = ""

    @property
    def passed(self) -> bool:
        return not self.missing and not self.extra

    def to_dict(self) -> dict:
        from .parser import print_formula, trace_to_json
        return {
            "formula": print_formula(self.formula),
            "context": print_formula(self.context),
            "length": self.length,
            "mode": self.mode,
            "passed": self.passed,
            "original": [trace_to_json(t) for t in self.original],
            "translated": None if self.translated is None else [trace_to_json(t) for t in self.translated],
            "missing": [trace_to_json(t) for t in self.missing],
            "extra": [trace_to_json(t) for t in self.extra],
            "note": self.note,
        }


def check_strong_faithfulness(gamma: Formula, context: Formula, length: int,
                              budget: int | None = None) -> FaithfulnessReport:
    """Compare stable models of ``gamma & context`` with those of the translation.

    With enough budget both sides are enumerated (``full``).  Otherwise only
    the forced-label extension of each original stable model is checked for
    stability on the translated side (``forced``).
    """
    A = _alphabet([gamma, context], None)
    cnf = converse_normal_form(gamma)
    program = translate(cnf, reserved=A)
    reg = registry_for(cnf, reserved=A)
    Aplus = A + reg.labels
    left = del_models([gamma, context], length, A, budget=budget)
    right_formulas = program_as_formulas(program) + [context]
    try:
        _check(len(Aplus), length, budget)
    except BudgetExceeded:
        missing = []
        for t in left:
            row = encode([label_extension(t, cnf, reg)], Aplus)
            if not (holds_at_zero(right_formulas, row, Aplus)[0]
                    and equilibrium_mask(right_formulas, row, Aplus)[0]):
                missing.append(t)
        return FaithfulnessReport(gamma, context, length, "forced", left, None, missing,
                                  note="forced mode: only original stable models were checked")
    right = restrict(del_models(right_formulas, length, Aplus, budget=budget), A)
    return FaithfulnessReport(
        gamma, context, length, "full", left, right,
        missing=sorted(left.traces - right.traces, key=HTTrace.sort_key),
        extra=sorted(right.traces - left.traces, key=HTTrace.sort_key),
        note="full mode: both sides enumerated",
    )


def translated_program(gamma: Formula) -> TemporalProgram:
    return translate(converse_normal_form(gamma))
