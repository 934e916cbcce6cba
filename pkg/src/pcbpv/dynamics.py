"""Small-step, substitution-based operational semantics."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Optional, Union

from .core import (
    AnnoC, App, CaseFold, Computation, DefName, ExprDef, FoldMu, FoldNu, Force, Inj, Lam, LetUp,
    Match, Pair, Proj, Record, Return, Signature, SplitPair, SplitUnit, Thunk, Unfold, UnitVal,
    erase_annotations, substitute, subst_many,
)


@dataclass(frozen=True)
class Stepped:
    next: Computation


@dataclass(frozen=True)
class Terminal:
    pass


@dataclass(frozen=True)
class Stuck:
    reason: str


StepResult = Union[Stepped, Terminal, Stuck]
TERMINAL = Terminal()


def is_terminal(e, iso: bool = False) -> bool:
    if isinstance(e, (Lam, Record, Return)):
        return True
    return iso and isinstance(e, FoldNu)


def _kind(e) -> str:
    return {
        Lam: "a function", Record: "a record", Return: "a return", FoldNu: "a fold",
    }.get(type(e), type(e).__name__)


def erase_signature(sig: Signature) -> Signature:
    """``sig`` with annotations erased from every definition body."""
    return Signature(tuple(
        ExprDef(it.name, it.type, erase_annotations(it.body), span=it.span) if isinstance(it, ExprDef) else it
        for it in sig.items))


def step(e, sig: Signature, iso: bool = False) -> StepResult:
    """One reduction step; deterministic, with ``Stuck`` for malformed redexes."""
    if is_terminal(e, iso):
        return TERMINAL
    if isinstance(e, App):
        if isinstance(e.fn, Lam):
            return Stepped(substitute(e.arg, e.fn.var, e.fn.body))
        r = step(e.fn, sig, iso)
        if isinstance(r, Stepped):
            return Stepped(App(r.next, e.arg))
        if isinstance(r, Terminal):
            return Stuck(f"cannot apply {_kind(e.fn)} to an argument")
        return r
    if isinstance(e, LetUp):
        if isinstance(e.bound, Return):
            return Stepped(substitute(e.bound.value, e.var, e.body))
        r = step(e.bound, sig, iso)
        if isinstance(r, Stepped):
            return Stepped(LetUp(e.var, r.next, e.body))
        if isinstance(r, Terminal):
            return Stuck(f"let expects a return but found {_kind(e.bound)}")
        return r
    if isinstance(e, Proj):
        if isinstance(e.body, Record):
            for l, c in e.body.fields:
                if l == e.label:
                    return Stepped(c)
            return Stuck(f"record has no field {e.label}")
        r = step(e.body, sig, iso)
        if isinstance(r, Stepped):
            return Stepped(Proj(r.next, e.label))
        if isinstance(r, Terminal):
            return Stuck(f"cannot project {e.label} from {_kind(e.body)}")
        return r
    if isinstance(e, SplitPair):
        if isinstance(e.value, Pair):
            # [v1/x][v2/y]e: when x = y the inner substitution wins
            mapping = {e.left: e.value.left, e.right: e.value.right}
            return Stepped(subst_many(mapping, e.body))
        return Stuck("split expects a pair")
    if isinstance(e, SplitUnit):
        if isinstance(e.value, UnitVal):
            return Stepped(e.body)
        return Stuck("split expects ()")
    if isinstance(e, Match):
        v = e.value
        if isinstance(v, Inj):
            for l, x, body in e.branches:
                if l == v.label:
                    return Stepped(substitute(v.value, x, body))
            return Stuck(f"match has no branch for '{v.label}")
        return Stuck("match expects an injection")
    if isinstance(e, Force):
        if isinstance(e.value, Thunk):
            return Stepped(e.value.body)
        return Stuck("force expects a thunk")
    if isinstance(e, DefName):
        d = sig.defs.get(e.name)
        if d is None:
            return Stuck(f"undefined name {e.name}")
        return Stepped(d.body)
    if iso and isinstance(e, CaseFold):
        if isinstance(e.value, FoldMu):
            return Stepped(substitute(e.value.value, e.var, e.body))
        return Stuck("match expects a fold")
    if iso and isinstance(e, Unfold):
        if isinstance(e.body, FoldNu):
            return Stepped(e.body.body)
        r = step(e.body, sig, iso)
        if isinstance(r, Stepped):
            return Stepped(Unfold(r.next))
        if isinstance(r, Terminal):
            return Stuck(f"cannot unfold {_kind(e.body)}")
        return r
    if isinstance(e, AnnoC):
        return Stuck("annotations must be erased before evaluation")
    if isinstance(e, (CaseFold, Unfold, FoldNu)):
        return Stuck("fold/unfold require isorecursive mode")
    return Stuck(f"not a computation: {type(e).__name__}")


@dataclass(frozen=True)
class Terminated:
    final: Computation
    steps: int


@dataclass(frozen=True)
class OutOfFuel:
    last: Computation
    steps: int


@dataclass(frozen=True)
class WentStuck:
    at: Computation
    reason: str
    steps: int


EvalResult = Union[Terminated, OutOfFuel, WentStuck]


def evaluate(e, sig: Signature, fuel: int = 100000, iso: bool = False,
             on_step: Optional[Callable] = None) -> EvalResult:
    """Step ``e`` until it is terminal or stuck, or ``fuel`` steps ran (0 = no limit)."""
    steps = 0
    while True:
        if on_step is not None:
            on_step(e)
        r = step(e, sig, iso)
        if isinstance(r, Terminal):
            return Terminated(e, steps)
        if isinstance(r, Stuck):
            return WentStuck(e, r.reason, steps)
        if fuel and steps >= fuel:
            return OutOfFuel(e, steps)
        e = r.next
        steps += 1


def trace(e, sig: Signature, limit: int, iso: bool = False) -> Iterator:
    """The computations ``e = e0, e1, ...`` of an evaluation, at most ``limit + 1`` of them."""
    yield e
    for _ in range(limit):
        r = step(e, sig, iso)
        if not isinstance(r, Stepped):
            return
        e = r.next
        yield e
