"""Concrete syntax: formulas, theories, HT-traces and temporal programs.

Formula grammar (ASCII, keywords reserved)::

    formula := "true" | "false" | ident | "(" formula ")" | "!" formula
             | "<" path ">" formula | "[" path "]" formula
             | "final" | "initial" | prefixop formula | formula infixop formula
    path    := "step" | formula "?" | path ";" path | path "+" path
             | path "*" | path "^-" | "(" path ")" | formula

Binding, tightest first: unary operators and modalities, ``&&``, ``||``,
``until``/``since``/``release``/``trigger``, ``->``.  ``->`` and the temporal
infixes associate to the right.  In paths, postfix ``*`` and ``^-`` bind
tighter than ``;``, which binds tighter than ``+``.  A bare formula in path
position abbreviates ``formula? ; step``; ``true`` there is just ``step``.
"""

from __future__ import annotations

import json
import re
import warnings
from dataclasses import dataclass

from .ast import (
    STEP, TRUE, FALSE, Atom, Box, Choice, Converse, Diamond, Falsity, Formula, Path,
    Seq, Star, Step, Test, Truth, derived, path_of_formula,
)
from .errors import DHTError, ParseError, SourceSpan, UnsupportedConstruct
from .semantics import HTTrace
from .translate import Literal, Rule, RuleKind, TemporalProgram

KEYWORDS = frozenset({
    "true", "false", "step", "final", "initial",
    "next", "wnext", "prev", "wprev", "ev", "alw", "once", "palw",
    "until", "since", "release", "trigger",
})
PREFIX_OPS = {"next": "next", "wnext": "wnext", "prev": "prev", "wprev": "wprev",
              "ev": "eventually", "alw": "always", "once": "once", "palw": "historically"}
TEMPORAL_INFIX = {"until", "since", "release", "trigger"}

IDENT = re.compile(r"[a-z][a-z0-9_]*")
_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<word>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>&&|\|\||->|\^-|[<>\[\]()!?;+*])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str  # "word", "op" or "eof"
    text: str
    start: int
    end: int

    @property
    def span(self) -> SourceSpan:
        return SourceSpan(self.start, self.end)


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", SourceSpan(pos, pos + 1), text)
        if m.lastgroup == "word":
            if not IDENT.fullmatch(m.group()):
                raise ParseError(f"invalid identifier {m.group()!r} (lowercase letters, digits, _)",
                                 SourceSpan(m.start(), m.end()), text)
            tokens.append(Token("word", m.group(), m.start(), m.end()))
        elif m.lastgroup == "op":
            tokens.append(Token("op", m.group(), m.start(), m.end()))
        pos = m.end()
    tokens.append(Token("eof", "", len(text), len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0
        self._memo: dict[tuple[str, int], tuple[object, int] | ParseError] = {}

    # -- helpers
    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.tok
        where = "end of input" if tok.kind == "eof" else repr(tok.text)
        return ParseError(f"{message}, found {where}", tok.span, self.text)

    def at(self, text: str) -> bool:
        return self.tok.kind != "eof" and self.tok.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(f"expected {text!r}")
        tok = self.tok
        self.pos += 1
        return tok

    def memo(self, rule: str, fn):
        key = (rule, self.pos)
        hit = self._memo.get(key)
        if hit is None:
            start = self.pos
            try:
                hit = (fn(), self.pos)
            except ParseError as e:
                hit = e
            self.pos = start
            self._memo[key] = hit
        if isinstance(hit, ParseError):
            raise hit
        value, self.pos = hit
        return value

    # -- formulas
    def formula(self) -> Formula:
        return self.memo("formula", self._implication)

    def _implication(self) -> Formula:
        left = self._temporal()
        if self.at("->"):
            self.pos += 1
            return derived("implies", left, self._implication())
        return left

    def _temporal(self) -> Formula:
        left = self._disjunction()
        if self.tok.kind == "word" and self.tok.text in TEMPORAL_INFIX:
            op = self.tok.text
            self.pos += 1
            return derived(op, left, self._temporal())
        return left

    def _disjunction(self) -> Formula:
        left = self._conjunction()
        while self.at("||"):
            self.pos += 1
            left = derived("or", left, self._conjunction())
        return left

    def _conjunction(self) -> Formula:
        left = self._unary()
        while self.at("&&"):
            self.pos += 1
            left = derived("and", left, self._unary())
        return left

    def _unary(self) -> Formula:
        tok = self.tok
        if tok.kind == "op":
            if tok.text == "!":
                self.pos += 1
                return derived("neg", self._unary())
            if tok.text == "<":
                self.pos += 1
                rho = self.path()
                self.expect(">")
                return Diamond(rho, self._unary())
            if tok.text == "[":
                self.pos += 1
                rho = self.path()
                self.expect("]")
                return Box(rho, self._unary())
            if tok.text == "(":
                self.pos += 1
                inner = self.formula()
                self.expect(")")
                return inner
            raise self.error("expected a formula")
        if tok.kind == "word":
            word = tok.text
            if word in PREFIX_OPS:
                self.pos += 1
                return derived(PREFIX_OPS[word], self._unary())
            if word in ("true", "false", "final", "initial"):
                self.pos += 1
                return {"true": TRUE, "false": FALSE}.get(word) or derived(word)
            if word in KEYWORDS:
                raise self.error("expected a formula")
            self.pos += 1
            return Atom(word)
        raise self.error("expected a formula")

    # -- paths
    def path(self) -> Path:
        return self.memo("path", self._choice)

    def _choice(self) -> Path:
        left = self._sequence()
        while self.at("+"):
            self.pos += 1
            left = Choice(left, self._sequence())
        return left

    def _sequence(self) -> Path:
        left = self._postfix()
        while self.at(";"):
            self.pos += 1
            left = Seq(left, self._postfix())
        return left

    def _postfix(self) -> Path:
        rho = self._path_primary()
        while self.at("*") or self.at("^-"):
            rho = Star(rho) if self.tok.text == "*" else Converse(rho)
            self.pos += 1
        return rho

    def _path_primary(self) -> Path:
        tok = self.tok
        if tok.kind == "word" and tok.text == "step":
            self.pos += 1
            return STEP
        start = self.pos
        phi = error = None
        try:
            phi = self.formula()
        except ParseError as e:
            error = e
        if phi is not None and self.at("?"):
            self.pos += 1
            return Test(phi)
        formula_end = self.pos
        rho = None
        if tok.kind == "op" and tok.text == "(":
            self.pos = start + 1
            try:
                rho = self.path()
                self.expect(")")
            except ParseError as e:
                rho = None
                error = e if error is None else self._furthest(e, error)
        if rho is not None and (phi is None or self.pos >= formula_end):
            return rho
        if phi is None:
            raise error
        self.pos = formula_end
        if isinstance(phi, Truth):
            return STEP
        try:
            return path_of_formula(phi)
        except DHTError:
            raise ParseError("only propositional formulas can be read as paths",
                             SourceSpan(tok.start, self.tokens[formula_end - 1].end), self.text) from None

    @staticmethod
    def _furthest(a: ParseError, b: ParseError) -> ParseError:
        return a if a.span.start >= b.span.start else b

    def done(self):
        if self.tok.kind != "eof":
            raise self.error("unexpected input")


def parse_formula(text: str) -> Formula:
    """Parse one formula; derived connectives are expanded on the fly."""
    p = _Parser(text)
    phi = p.formula()
    p.done()
    return phi


def parse_path(text: str) -> Path:
    p = _Parser(text)
    rho = p.path()
    p.done()
    return rho


def parse_theory(text: str) -> list[Formula]:
    """One formula per nonblank line; ``#`` starts a comment."""
    out = []
    offset = 0
    for line in text.splitlines(keepends=True):
        body = line.split("#", 1)[0]
        if body.strip():
            try:
                out.append(parse_formula(body))
            except ParseError as e:
                span = SourceSpan(offset + e.span.start, offset + e.span.end)
                raise ParseError(e.message, span, text) from None
        offset += len(line)
    return out


# -- printing ----------------------------------------------------------------

def print_formula(phi: Formula) -> str:
    """Native syntax for a core formula; ``parse_formula`` inverts it."""
    if isinstance(phi, Truth):
        return "true"
    if isinstance(phi, Falsity):
        return "false"
    if isinstance(phi, Atom):
        return phi.name
    if isinstance(phi, Diamond):
        return f"<{print_path(phi.path)}> {print_formula(phi.body)}"
    if isinstance(phi, Box):
        return f"[{print_path(phi.path)}] {print_formula(phi.body)}"
    raise DHTError(f"expected a dynamic formula, got {phi!r}")


def print_path(rho: Path, level: int = 0) -> str:
    if isinstance(rho, Choice):
        s = f"{print_path(rho.left, 0)} + {print_path(rho.right, 1)}"
        return f"({s})" if level > 0 else s
    if isinstance(rho, Seq):
        s = f"{print_path(rho.left, 1)} ; {print_path(rho.right, 2)}"
        return f"({s})" if level > 1 else s
    if isinstance(rho, Star):
        return f"{print_path(rho.inner, 3)}*"
    if isinstance(rho, Converse):
        return f"{print_path(rho.inner, 3)}^-"
    if isinstance(rho, Step):
        return "step"
    if isinstance(rho, Test):
        body = print_formula(rho.body)
        return f"{body}?" if isinstance(rho.body, (Truth, Falsity, Atom)) else f"({body})?"
    raise DHTError(f"expected a path expression, got {rho!r}")


class UnsupportedSurfaceWarning(UserWarning):
    """Emitted for constructs whose ``&del`` surface form is a best guess."""


def emit_del(phi: Formula) -> str:
    """The ``&del{...}`` theory atom for a converse-free modal formula."""
    if not isinstance(phi, (Diamond, Box)):
        raise UnsupportedConstruct("only diamond or box formulas can be emitted as &del atoms")
    return "&del{ " + _del_formula(phi) + " }"


def _del_formula(phi: Formula) -> str:
    if isinstance(phi, Truth):
        return "&true"
    if isinstance(phi, Falsity):
        return "&false"
    if isinstance(phi, Atom):
        return phi.name
    op = ">?" if isinstance(phi, Diamond) else ">*"
    body = _del_formula(phi.body)
    if isinstance(phi.body, (Diamond, Box)):
        body = f"({body})"
    return f"{_del_path(phi.path)} . {op} {body}"


def _del_path(rho: Path, level: int = 0) -> str:
    if isinstance(rho, Step):
        return "&true"
    if isinstance(rho, Converse):
        raise UnsupportedConstruct("converse has no &del surface form")
    if isinstance(rho, Test):
        inner = _del_formula(rho.body)
        return "?" + (inner if isinstance(rho.body, (Truth, Falsity, Atom)) else f"({inner})")
    if isinstance(rho, Star):
        return "* " + _del_path(rho.inner, 3)
    if isinstance(rho, Seq):
        s = f"{_del_path(rho.left, 1)} ;; {_del_path(rho.right, 2)}"
        return f"({s})" if level > 1 else s
    if isinstance(rho, Choice):
        warnings.warn("choice is emitted as '+', which the &del surface may not accept",
                      UnsupportedSurfaceWarning, stacklevel=3)
        s = f"{_del_path(rho.left, 0)} + {_del_path(rho.right, 1)}"
        return f"({s})" if level > 0 else s
    raise DHTError(f"expected a path expression, got {rho!r}")


# -- traces ------------------------------------------------------------------

def _atoms_of(chunk: str, offset: int, text: str) -> frozenset[str]:
    names = []
    for m in re.finditer(r"\S+", chunk):
        if not IDENT.fullmatch(m.group()) or m.group() in KEYWORDS:
            raise ParseError(f"invalid atom {m.group()!r}",
                             SourceSpan(offset + m.start(), offset + m.end()), text)
        names.append(m.group())
    return frozenset(names)


_STATE = re.compile(r"^\s*H:(?P<h>[^|]*)\|\s*T:(?P<t>.*)$")


def parse_ht_trace(text: str) -> HTTrace:
    """Parse the line format (``H: a | T: a b`` or ``a b``) or the JSON form."""
    if text.lstrip().startswith("{"):
        return _trace_from_json(text)
    here, there = [], []
    offset = 0
    for raw in text.splitlines(keepends=True):
        line = raw.rstrip("\r\n").split("#", 1)[0]
        if line.strip():
            m = _STATE.match(line)
            if m:
                h = _atoms_of(m.group("h"), offset + m.start("h"), text)
                t = _atoms_of(m.group("t"), offset + m.start("t"), text)
                if not h <= t:
                    raise ParseError(f"H is not a subset of T (extra: {' '.join(sorted(h - t))})",
                                     SourceSpan(offset, offset + len(line)), text)
            elif "|" in line or ":" in line:
                raise ParseError("expected 'H: ... | T: ...' or a list of atoms",
                                 SourceSpan(offset, offset + len(line)), text)
            else:
                h = t = _atoms_of(line, offset, text)
            here.append(h)
            there.append(t)
        offset += len(raw)
    if not here:
        raise ParseError("trace has no states", SourceSpan(0, len(text)), text)
    return HTTrace(tuple(here), tuple(there))


def _trace_from_json(text: str) -> HTTrace:
    whole = SourceSpan(0, len(text))
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", SourceSpan(e.pos, min(e.pos + 1, len(text))), text)
    return trace_from_json(doc, text, whole)


def trace_from_json(doc, text: str = "", span: SourceSpan | None = None) -> HTTrace:
    span = span or SourceSpan(0, len(text))
    states = doc.get("states") if isinstance(doc, dict) else None
    if not isinstance(states, list) or not states:
        raise ParseError("expected a nonempty 'states' list", span, text)
    here, there = [], []
    for st in states:
        h = frozenset(st.get("h", ()))
        t = frozenset(st.get("t", h))
        for a in h | t:
            if not isinstance(a, str) or not IDENT.fullmatch(a) or a in KEYWORDS:
                raise ParseError(f"invalid atom {a!r}", span, text)
        if not h <= t:
            raise ParseError("H is not a subset of T", span, text)
        here.append(h)
        there.append(t)
    return HTTrace(tuple(here), tuple(there))


def trace_to_json(trace: HTTrace) -> dict:
    return {"states": [{"h": sorted(h), "t": sorted(t)} for h, t in zip(trace.here, trace.there)]}


def print_ht_trace(trace: HTTrace) -> str:
    lines = []
    for h, t in zip(trace.here, trace.there):
        if h == t and h:
            lines.append(" ".join(sorted(t)))
        else:
            lines.append(" ".join(["H:", *sorted(h), "|", "T:", *sorted(t)]))
    return "\n".join(lines) + "\n"


# -- programs ----------------------------------------------------------------

def print_program(program: TemporalProgram) -> str:
    return "".join(str(r) + "\n" for r in program.rules)


_LIT = re.compile(r"^(?P<neg>!?)(?P<prev>'?)(?P<atom>[a-z][a-z0-9_]*)$")


def _literals(chunk: str, sep: str, offset: int, text: str) -> tuple[Literal, ...]:
    out = []
    if not chunk.strip():
        return ()
    pos = 0
    for part in chunk.split(sep):
        stripped = part.strip()
        m = _LIT.match(stripped)
        if m is None or m.group("atom") in KEYWORDS:
            start = offset + pos + (len(part) - len(part.lstrip()))
            raise ParseError(f"invalid literal {stripped!r}",
                             SourceSpan(start, start + len(stripped)), text)
        out.append(Literal(m.group("atom"), bool(m.group("neg")), bool(m.group("prev"))))
        pos += len(part) + len(sep)
    return tuple(out)


def parse_program(text: str) -> TemporalProgram:
    """Inverse of :func:`print_program`; the alphabet is inferred."""
    rules = []
    offset = 0
    for raw in text.splitlines(keepends=True):
        line = raw.rstrip("\r\n").split("#", 1)[0]
        if line.strip():
            kind, sep, rest = line.partition(":")
            kind = kind.strip()
            if not sep or kind not in {k.value for k in RuleKind}:
                raise ParseError("expected a rule kind (initial, dynamic, final, global)",
                                 SourceSpan(offset, offset + len(line)), text)
            if "->" not in rest:
                raise ParseError("expected '->'", SourceSpan(offset, offset + len(line)), text)
            body, head = rest.split("->", 1)
            base = offset + len(kind) + 1 + (len(line) - len(line.lstrip()))
            try:
                rules.append(Rule(RuleKind(kind),
                                  _literals(body, "&", base, text),
                                  _literals(head, "|", base + len(body) + 2, text)))
            except ParseError:
                raise
            except DHTError as e:
                raise ParseError(str(e), SourceSpan(offset, offset + len(line)), text) from None
        offset += len(raw)
    return TemporalProgram(tuple(rules))
