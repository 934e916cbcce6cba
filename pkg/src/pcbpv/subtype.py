"""Circular subtyping between type names, plus an independent fixpoint oracle.

``SubtypeState`` owns a normalized signature that can grow: arbitrary types
are interned as fresh auxiliary names before being compared.  Goals that
recur on the current path close a cycle and succeed.  Failed pairs are
always cached; proven pairs are cached only for queries issued with no
pending assumptions.
"""

from __future__ import annotations

import itertools
import sys
from dataclasses import dataclass, field
from typing import Optional

from .core import (
    NEG, POS, Arrow, Down, Lazy, Name, Normalizer, Signature, Tensor, Unit, Up, Variant,
    display_name, polarity_of,
)
from .inhabit import InhabitTable, compute_inhabited

RULE_TENSOR = "≤⊗"
RULE_UNIT = "≤1"
RULE_PLUS = "≤⊕"
RULE_DOWN = "≤↓"
RULE_ARROW = "≤→"
RULE_UP = "≤↑"
RULE_WITH = "≤&"
RULE_BOT_POS = "⊥⁺"
RULE_BOT_NEG = "⊥⁻"
RULE_TOP = "⊤"
RULE_EMPTY = "empty"


class PolarityMismatch(ValueError):
    """Subtyping was asked between a positive and a negative type."""


@dataclass(eq=False)
class Derivation:
    left: str
    right: str
    rule: Optional[str] = None
    children: list = field(default_factory=list)
    label: Optional[str] = None
    cycle_to: Optional["Derivation"] = None
    mark: Optional[int] = None

    @property
    def is_cycle(self) -> bool:
        return self.cycle_to is not None

    def shape(self):
        """Nested tuple (label, left, right, rule-or-cycle, children) for comparisons."""
        if self.is_cycle:
            return (self.label, self.left, self.right, f"cycle*{self.cycle_to.mark}", ())
        return (self.label, self.left, self.right, self.rule, tuple(c.shape() for c in self.children))


def _n(x) -> str:
    return x.text if isinstance(x, Name) else x


class SubtypeState:
    """Subtyping queries over one signature, with their caches."""

    def __init__(self, sig: Signature, use_proven_cache: bool = True, top_before_bot: bool = False):
        self._norm = Normalizer(sig)
        self.sig = self._norm.signature()
        self._table: Optional[InhabitTable] = None
        self.proven: set = set()
        self.disproven: set = set()
        self.use_proven_cache = use_proven_cache
        self.top_before_bot = top_before_bot
        self._ids = itertools.count()

    # -- signature management
    @property
    def table(self) -> InhabitTable:
        if self._table is None:
            self._table = compute_inhabited(self.sig)
        return self._table

    def intern(self, ty, base: str = "anno") -> Name:
        """A name for ``ty`` in the (possibly extended) signature."""
        before = len(self._norm._items)
        n = self._norm.intern(ty, base)
        if len(self._norm._items) != before:
            self.sig = self._norm.signature()
            self._table = None
        return n

    def add_items(self, items) -> None:
        items = list(items)
        if items:
            self._norm.add_items(items)
            self.sig = self._norm.signature()
            self._table = None

    def polarity(self, name) -> str:
        return self.sig.types[_n(name)].polarity

    def body(self, name):
        return self.sig.types[_n(name)].body

    # -- queries
    def sub(self, a, b) -> bool:
        a, b = _n(a), _n(b)
        self._check(a, b)
        old = sys.getrecursionlimit()
        if old < 20000:
            sys.setrecursionlimit(20000)
        try:
            return self._sub(a, b, {}, False)[0]
        finally:
            sys.setrecursionlimit(old)

    def explain(self, a, b):
        """Decide ``a <= b`` and return the circular derivation (or None)."""
        a, b = _n(a), _n(b)
        self._check(a, b)
        saved = self.use_proven_cache
        self.use_proven_cache = False
        try:
            ok, node = self._sub(a, b, {}, True)
        finally:
            self.use_proven_cache = saved
        if ok:
            _assign_marks(node)
        return ok, (node if ok else None)

    def _check(self, a: str, b: str) -> None:
        for x in (a, b):
            if x not in self.sig.types:
                raise KeyError(f"undefined type name {display_name(x)}")
        pa, pb = self.polarity(a), self.polarity(b)
        if pa != pb:
            raise PolarityMismatch(
                f"cannot compare {display_name(a)} ({'positive' if pa == POS else 'negative'}) "
                f"with {display_name(b)} ({'positive' if pb == POS else 'negative'})")

    def _sub(self, a: str, b: str, path: dict, record: bool):
        key = (a, b)
        hit = path.get(key)
        if hit is not None:
            return True, (Derivation(a, b, cycle_to=hit) if record else None)
        if key in self.disproven:
            return False, None
        if self.use_proven_cache and key in self.proven:
            return True, None
        top = not path
        node = Derivation(a, b) if record else None
        path2 = dict(path)
        path2[key] = node if record else True
        for rule, attempt in self._rules(a, b):
            ok, children = attempt(path2, record)
            if ok:
                if record:
                    node.rule, node.children = rule, children
                if top:
                    self.proven.add(key)
                return True, node
        self.disproven.add(key)
        return False, None

    def _rules(self, a: str, b: str):
        ta, tb = self.body(a), self.body(b)
        table = self.table
        rules = []
        structural = self._structural(ta, tb)
        if structural is not None:
            rules.append(structural)
        if self.polarity(a) == POS:
            if table.is_empty(a):
                rules.append((RULE_BOT_POS, _axiom))
            return rules
        bot = top = None
        if isinstance(ta, Up) and table.is_empty(_n(ta.body)):
            bot = (RULE_BOT_NEG, _axiom)
        if table.is_full(b):
            top = (RULE_TOP, _axiom)
        order = [top, bot] if self.top_before_bot else [bot, top]
        rules.extend(r for r in order if r is not None)
        return rules

    def _structural(self, ta, tb):
        sub = self._sub
        table = self.table

        def pairs(rule, goals):
            def attempt(path, record):
                kids = []
                for label, x, y in goals:
                    ok, d = sub(_n(x), _n(y), path, record)
                    if not ok:
                        return False, None
                    if record:
                        d.label = label
                        kids.append(d)
                return True, kids
            return rule, attempt

        if isinstance(ta, Tensor) and isinstance(tb, Tensor):
            return pairs(RULE_TENSOR, [(None, ta.left, tb.left), (None, ta.right, tb.right)])
        if isinstance(ta, Unit) and isinstance(tb, Unit):
            return RULE_UNIT, _axiom
        if isinstance(ta, Down) and isinstance(tb, Down):
            return pairs(RULE_DOWN, [(None, ta.body, tb.body)])
        if isinstance(ta, Arrow) and isinstance(tb, Arrow):
            return pairs(RULE_ARROW, [(None, tb.arg, ta.arg), (None, ta.result, tb.result)])
        if isinstance(ta, Up) and isinstance(tb, Up):
            return pairs(RULE_UP, [(None, ta.body, tb.body)])
        if isinstance(ta, Lazy) and isinstance(tb, Lazy):
            have = dict(ta.fields)
            if any(j not in have for j, _ in tb.fields):
                return None
            return pairs(RULE_WITH, [(j, have[j], r) for j, r in tb.fields])
        if isinstance(ta, Variant) and isinstance(tb, Variant):
            target = dict(tb.branches)

            def attempt(path, record):
                kids = []
                for l, t in ta.branches:
                    t = _n(t)
                    if table.is_empty(t):
                        if record:
                            kids.append(Derivation(t, "", rule=RULE_EMPTY, label=l))
                        continue
                    if l not in target:
                        return False, None
                    ok, d = sub(t, _n(target[l]), path, record)
                    if not ok:
                        return False, None
                    if record:
                        d.label = l
                        kids.append(d)
                return True, kids
            return RULE_PLUS, attempt
        return None


def _axiom(path, record):
    return True, []


def _assign_marks(root: Derivation) -> None:
    targets = []

    def collect(d):
        if d.is_cycle:
            if d.cycle_to not in targets:
                targets.append(d.cycle_to)
            return
        for c in d.children:
            collect(c)

    collect(root)
    order = []

    def preorder(d):
        if d.is_cycle:
            return
        d.mark = None
        if d in targets:
            order.append(d)
        for c in d.children:
            preorder(c)

    preorder(root)
    for i, d in enumerate(order, 1):
        d.mark = i


def format_derivation(d: Derivation, indent: int = 0) -> str:
    lines = []

    def go(d, depth):
        pad = "  " * depth
        lab = f"[{d.label}] " if d.label is not None else ""
        if d.rule == RULE_EMPTY:
            lines.append(f"{pad}{lab}{display_name(d.left)} empty")
            return
        goal = f"{display_name(d.left)} ≤ {display_name(d.right)}"
        if d.is_cycle:
            lines.append(f"{pad}{lab}{goal}  cycle (*{d.cycle_to.mark})")
            return
        mark = f"  (*{d.mark})" if d.mark is not None else ""
        lines.append(f"{pad}{lab}{goal}  by {d.rule}{mark}")
        for c in d.children:
            go(c, depth + 1)

    go(d, indent)
    return "\n".join(lines)


def sub_names(a, b, state: SubtypeState) -> bool:
    return state.sub(a, b)


def sub_types(t1, t2, sig, state: Optional[SubtypeState] = None) -> bool:
    """Subtyping between arbitrary well-formed types over ``sig``."""
    state = state or SubtypeState(sig)
    p1, p2 = polarity_of(t1), polarity_of(t2)
    if p1 != p2:
        raise PolarityMismatch("cannot compare a positive type with a negative type")
    return state.sub(state.intern(t1, "sub"), state.intern(t2, "sub"))


# ---------------------------------------------------------------------------
# Global greatest fixed point, written independently of the engine


def sub_gfp_table(sig: Signature, table: InhabitTable) -> set:
    """All derivable pairs: delete unjustified pairs until nothing changes."""
    defs = {n: d.body for n, d in sig.types.items()}
    pol = {n: d.polarity for n, d in sig.types.items()}
    names = list(defs)
    rel = {(a, b) for a in names for b in names if pol[a] == pol[b]}

    def nm(x):
        return x.text if isinstance(x, Name) else x

    def justified(a, b) -> bool:
        x, y = defs[a], defs[b]
        if pol[a] == POS and a in table.empty:
            return True
        if pol[a] == NEG:
            if b in table.full:
                return True
            if isinstance(x, Up) and nm(x.body) in table.empty:
                return True
        if type(x) is not type(y):
            return False
        if isinstance(x, Unit):
            return True
        if isinstance(x, Tensor):
            return (nm(x.left), nm(y.left)) in rel and (nm(x.right), nm(y.right)) in rel
        if isinstance(x, Down) or isinstance(x, Up):
            return (nm(x.body), nm(y.body)) in rel
        if isinstance(x, Arrow):
            return (nm(y.arg), nm(x.arg)) in rel and (nm(x.result), nm(y.result)) in rel
        if isinstance(x, Variant):
            ys = {l: nm(t) for l, t in y.branches}
            for l, t in x.branches:
                t = nm(t)
                if t in table.empty:
                    continue
                if l not in ys or (t, ys[l]) not in rel:
                    return False
            return True
        if isinstance(x, Lazy):
            xs = {l: nm(s) for l, s in x.fields}
            return all(l in xs and (xs[l], nm(r)) in rel for l, r in y.fields)
        return False

    changed = True
    while changed:
        changed = False
        for pair in sorted(rel):
            if not justified(*pair):
                rel.discard(pair)
                changed = True
    return rel
