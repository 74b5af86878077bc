"""Fisher-Ladner closure of dynamic formulas in converse normal form."""

from __future__ import annotations

from collections import deque
from typing import Iterable

from .ast import Box, Choice, Converse, Diamond, Formula, Seq, Star, Step, Test, is_converse_normal
from .errors import PreconditionError


def _successors(phi: Formula, printed_rule12: bool) -> list[Formula]:
    """Formulas that the closure rules require alongside ``phi``, in rule order."""
    if not isinstance(phi, (Diamond, Box)):
        return []
    mod = type(phi)
    rho, body = phi.path, phi.body
    if isinstance(rho, Test):
        return [rho.body, body]
    out = [body]
    if isinstance(rho, Seq):
        out.append(mod(rho.left, mod(rho.right, body)))
    elif isinstance(rho, Choice):
        out.append(mod(rho.left, body))
        out.append(mod(rho.right, body))
    elif isinstance(rho, Star):
        out.append(mod(rho.inner, phi))
        if mod is Box and printed_rule12:
            out.append(Box(rho.inner, Diamond(rho, body)))
    elif not isinstance(rho, (Step, Converse)):
        raise PreconditionError(f"unexpected path {rho!r}")
    return out


def fl_closure(gamma: Formula, printed_rule12: bool = False) -> tuple[Formula, ...]:
    """Least closed set containing ``gamma``, in deterministic insertion order.

    Starred boxes unroll to ``[rho][rho*]phi``.  With ``printed_rule12`` the
    mixed form ``[rho]<rho*>phi`` is added as well.
    """
    if not is_converse_normal(gamma):
        raise PreconditionError("closure needs a formula in converse normal form")
    seen = {gamma: None}
    queue = deque([gamma])
    while queue:
        for nxt in _successors(queue.popleft(), printed_rule12):
            if nxt not in seen:
                seen[nxt] = None
                queue.append(nxt)
    return tuple(seen)


def is_closed(formulas: Iterable[Formula], printed_rule12: bool = False) -> bool:
    s = set(formulas)
    return all(nxt in s for phi in s for nxt in _successors(phi, printed_rule12))
