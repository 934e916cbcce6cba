"""Bounded step-indexed semantic typing, used as a testing oracle.

Values are typed inductively and computations by observing at most ``k``
reduction steps.  Universally quantified positions (function arguments)
range over an enumeration of values up to a constructor depth, with thunk
positions filled from a pool: a diverging loop plus every definition whose
declared type is a subtype.  Each ``Verdict`` records whether such sampling
or a depth cutoff influenced the outcome.
"""

from __future__ import annotations

import itertools
import sys
from dataclasses import dataclass
from typing import Optional

from .core import (
    App, Arrow, Context, DefName, Down, ExprDef, FoldMu, Inj, Lazy, Mu, Name, Nu, Pair, Proj,
    Return, Signature, Tensor, Thunk, Unfold, Unit, UnitVal, Up, Variant, erase_annotations, subst_tvar,
)
from .dynamics import Stepped, Terminal, erase_signature, step
from .inhabit import with_loops
from .subtype import SubtypeState

HOLDS = "holds"
REFUTED = "refuted"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class Verdict:
    outcome: str
    exact: bool

    @property
    def holds(self) -> bool:
        return self.outcome == HOLDS

    @property
    def refuted(self) -> bool:
        return self.outcome == REFUTED

    def __str__(self) -> str:
        return f"{self.outcome} ({'exact' if self.exact else 'approx'})"


YES = Verdict(HOLDS, True)
NO = Verdict(REFUTED, True)
MAYBE = Verdict(UNKNOWN, False)


def _all(verdicts) -> Verdict:
    """Conjunction: an exact refutation wins; inexact refutations become unknown."""
    exact = True
    unknown = False
    for v in verdicts:
        if v.outcome == REFUTED and v.exact:
            return NO
        if v.outcome != HOLDS:
            unknown = True
        exact = exact and v.exact
    if unknown:
        return MAYBE
    return Verdict(HOLDS, exact)


@dataclass(frozen=True)
class Enumeration:
    """Values of a type up to a depth.

    ``sampled`` is set when thunk positions were filled from the pool;
    ``truncated`` when some value was cut off by the depth or size bound.
    """

    values: tuple
    sampled: bool
    truncated: bool

    @property
    def exact(self) -> bool:
        return not self.sampled

    @property
    def complete(self) -> bool:
        return not self.sampled and not self.truncated


LOOP = "%loop.0"


class _CoreView:
    def __init__(self, oracle: "Oracle", sig: Signature):
        self.state = SubtypeState(sig)
        self.oracle = oracle
        self._eval_for = None

    def handle(self, ty) -> str:
        return self.state.intern(ty, "sem").text

    def child(self, ty) -> str:
        return ty.text

    def body(self, h):
        return self.state.body(h)

    def maybe_empty(self, h) -> bool:
        return self.state.table.is_empty(h)

    def eval_sig(self) -> Signature:
        if self._eval_for is not self.state.sig:
            self._eval_for = self.state.sig
            self._eval = erase_signature(with_loops(self.state.sig, self.state.table))
        return self._eval

    def pool(self, h) -> tuple:
        table = self.state.table
        out = [Thunk(DefName(table.loop_for(h)))]
        if self.oracle.pool_defs:
            user = self.oracle.source.defs
            for f in user:
                if self.state.sub(self.state.intern(user[f].type, f), h):
                    out.append(Thunk(DefName(f)))
        return tuple(out)


class _IsoView:
    """Types are closed isorecursive type expressions; names are abbreviations."""

    def __init__(self, oracle: "Oracle", sig: Signature):
        self.sig = sig
        loop = [] if LOOP in sig.defs else [ExprDef(LOOP, Lazy(()), DefName(LOOP))]
        self._eval = erase_signature(sig.extend(loop))

    def handle(self, ty):
        return ty

    def child(self, ty):
        return ty

    def body(self, h):
        seen = 0
        while isinstance(h, Name):
            h = self.sig.types[h.text].body
            seen += 1
            if seen > 10000:
                raise ValueError("cyclic type abbreviation")
        return h

    def maybe_empty(self, h) -> bool:
        return False

    def eval_sig(self) -> Signature:
        return self._eval

    def pool(self, h) -> tuple:
        return (Thunk(DefName(LOOP)),)


class Oracle:
    """Bounded semantic typing over one signature.

    ``arrow_mode`` selects how the function clause quantifies over indices:
    ``"literal"`` tries every ``i < k`` while ``"shortcut"`` uses ``i = k - 1``
    only, relying on downward closure.
    """

    def __init__(self, sig: Signature, depth: int = 4, iso: bool = False,
                 arrow_mode: str = "shortcut", pool_defs: bool = True, limit: int = 4000):
        if arrow_mode not in ("literal", "shortcut"):
            raise ValueError(f"unknown arrow mode {arrow_mode!r}")
        self.source = sig
        self.depth = depth
        self.iso = iso
        self.arrow_mode = arrow_mode
        self.pool_defs = pool_defs
        self.limit = limit
        self.view = _IsoView(self, sig) if iso else _CoreView(self, sig)
        self._enum: dict = {}
        self._terminal: dict = {}

    # -- enumeration
    def enumerate(self, ty, depth: Optional[int] = None) -> Enumeration:
        return self._enumerate(self.view.handle(ty), self.depth if depth is None else depth)

    def _enumerate(self, h, d: int) -> Enumeration:
        key = (h, d)
        hit = self._enum.get(key)
        if hit is not None:
            return hit
        view = self.view
        b = view.body(h)
        if isinstance(b, Unit):
            res = Enumeration((UnitVal(),), False, False)
        elif isinstance(b, Down):
            res = Enumeration(view.pool(view.child(b.body)), True, False)
        elif view.maybe_empty(h):
            res = Enumeration((), False, False)
        elif d <= 0:
            res = Enumeration((), False, True)
        elif isinstance(b, Tensor):
            left = self._enumerate(view.child(b.left), d - 1)
            right = self._enumerate(view.child(b.right), d - 1)
            vals = tuple(Pair(x, y) for x, y in itertools.islice(
                itertools.product(left.values, right.values), self.limit + 1))
            cut = len(vals) > self.limit
            res = Enumeration(vals[:self.limit], left.sampled or right.sampled,
                              cut or left.truncated or right.truncated)
        elif isinstance(b, Variant):
            vals, sampled, truncated = [], False, False
            for l, c in b.branches:
                sub = self._enumerate(view.child(c), d - 1)
                vals.extend(Inj(l, w) for w in sub.values)
                sampled |= sub.sampled
                truncated |= sub.truncated
            if len(vals) > self.limit:
                vals, truncated = vals[:self.limit], True
            res = Enumeration(tuple(vals), sampled, truncated)
        elif isinstance(b, Mu):
            sub = self._enumerate(subst_tvar(b.body, b.var, b), d - 1)
            res = Enumeration(tuple(FoldMu(w) for w in sub.values), sub.sampled, sub.truncated)
        else:
            raise TypeError(f"cannot enumerate values of {type(b).__name__}")
        self._enum[key] = res
        return res

    # -- judgments
    def value(self, v, ty, k: int) -> Verdict:
        return self._value(erase_annotations(v), self.view.handle(ty), k)

    def comp(self, e, ty, k: int) -> Verdict:
        with _deep():
            return self._comp(erase_annotations(e), self.view.handle(ty), k)

    def terminal(self, e, ty, k: int) -> Verdict:
        if k < 1:
            raise ValueError("terminal typing needs k >= 1")
        with _deep():
            return self._terminal_at(erase_annotations(e), self.view.handle(ty), k)

    def subst(self, theta, ctx: Context, k: int) -> Verdict:
        """``theta`` is a mapping or an ordered list of ``(variable, value)`` pairs."""
        theta = list(theta.items()) if isinstance(theta, dict) else list(theta)
        if [x for x, _ in theta] != [x for x, _ in ctx]:
            raise ValueError("substitution and context have different domains")
        return _all(self.value(v, t, k) for (_, v), (_, t) in zip(theta, ctx))

    def _value(self, v, h, k: int) -> Verdict:
        b = self.view.body(h)
        child = self.view.child
        if isinstance(b, Unit):
            return YES if isinstance(v, UnitVal) else NO
        if isinstance(b, Tensor):
            if not isinstance(v, Pair):
                return NO
            return _all((self._value(v.left, child(b.left), k),
                         self._value(v.right, child(b.right), k)))
        if isinstance(b, Variant):
            if not isinstance(v, Inj):
                return NO
            for l, c in b.branches:
                if l == v.label:
                    return self._value(v.value, child(c), k)
            return NO
        if isinstance(b, Down):
            if not isinstance(v, Thunk):
                return NO
            with _deep():
                return self._comp(v.body, child(b.body), k)
        if isinstance(b, Mu):
            if not isinstance(v, FoldMu):
                return NO
            return self._value(v.value, subst_tvar(b.body, b.var, b), k)
        raise TypeError(f"not a positive type: {type(b).__name__}")

    def _comp(self, e, h, k: int) -> Verdict:
        sig = self.view.eval_sig()
        while True:
            if k == 0:
                return YES
            r = step(e, sig, self.iso)
            if isinstance(r, Stepped):
                e, k = r.next, k - 1
            elif isinstance(r, Terminal):
                return self._terminal_at(e, h, k)
            else:
                return NO

    def _terminal_at(self, e, h, k: int) -> Verdict:
        key = (e, h, k)
        hit = self._terminal.get(key)
        if hit is None:
            hit = self._terminal_clause(e, h, k)
            self._terminal[key] = hit
        return hit

    def _terminal_clause(self, e, h, k: int) -> Verdict:
        b = self.view.body(h)
        child = self.view.child
        if isinstance(b, Up):
            if not isinstance(e, Return):
                return NO
            return self._value(e.value, child(b.body), k - 1)
        if isinstance(b, Lazy):
            return _all(self._comp(Proj(e, l), child(s), k) for l, s in b.fields)
        if isinstance(b, Nu):
            return self._comp(Unfold(e), subst_tvar(b.body, b.var, b), k)
        if isinstance(b, Arrow):
            return self._arrow(e, child(b.arg), child(b.result), k)
        raise TypeError(f"not a negative type: {type(b).__name__}")

    def _arrow(self, e, arg, res, k: int) -> Verdict:
        en = self._enumerate(arg, self.depth)
        indices = range(k) if self.arrow_mode == "literal" else (k - 1,)
        exact = en.complete
        unknown = False
        for i in indices:
            for v in en.values:
                m = self._value(v, arg, i)
                if m.refuted and m.exact:
                    continue
                r = self._comp(App(e, v), res, i + 1)
                if r.holds:
                    exact = exact and r.exact and m.exact
                    continue
                if r.refuted and r.exact and m.holds and m.exact:
                    return NO
                unknown = True
        if unknown:
            return MAYBE
        return Verdict(HOLDS, exact)


class _deep:
    """Temporarily raise the recursion limit for nested judgments."""

    def __enter__(self):
        self.old = sys.getrecursionlimit()
        if self.old < 20000:
            sys.setrecursionlimit(20000)

    def __exit__(self, *exc):
        sys.setrecursionlimit(self.old)
        return False


# -- module-level conveniences


def enumerate_values(ty, sig: Signature, depth: int, oracle: Optional[Oracle] = None) -> Enumeration:
    return (oracle or Oracle(sig, depth)).enumerate(ty, depth)


def sem_value(v, ty, k: int, sig: Signature, depth: int = 4, oracle: Optional[Oracle] = None) -> Verdict:
    return (oracle or Oracle(sig, depth)).value(v, ty, k)


def sem_comp(e, ty, k: int, sig: Signature, depth: int = 4, oracle: Optional[Oracle] = None) -> Verdict:
    return (oracle or Oracle(sig, depth)).comp(e, ty, k)


def sem_terminal(e, ty, k: int, sig: Signature, depth: int = 4, oracle: Optional[Oracle] = None) -> Verdict:
    return (oracle or Oracle(sig, depth)).terminal(e, ty, k)


def sem_subst(theta, ctx: Context, k: int, sig: Signature, depth: int = 4,
              oracle: Optional[Oracle] = None) -> Verdict:
    return (oracle or Oracle(sig, depth)).subst(theta, ctx, k)
