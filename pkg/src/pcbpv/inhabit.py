"""Emptiness of positive type names and fullness of negative ones.

The table is computed as the complement of the least fixed point of the
"inhabited" rules.  ``circular_empty`` is an independent cross-check that
searches for circular emptiness derivations directly, and
``brute_force_empty`` is a depth-bounded search for witnesses that uses
neither.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .core import (
    NEG, POS, Arrow, DefName, Down, ExprDef, Inj, Lazy, Name, Pair, Signature, Tensor, Thunk,
    Unit, UnitVal, Variant,
)

LOOP_PREFIX = "%loop"


@dataclass
class InhabitTable:
    empty: frozenset
    full: frozenset
    witnesses: dict
    loops: dict = field(default_factory=dict)  # negative name -> loop definition name
    loop_defs: tuple = ()

    def is_empty(self, t: str) -> bool:
        return t in self.empty

    def is_full(self, s: str) -> bool:
        return s in self.full

    def witness(self, t: str):
        return self.witnesses.get(t)

    def loop_for(self, s: str) -> str:
        return self.loops[s]


def _name(x) -> str:
    return x.text if isinstance(x, Name) else x


def positive_names(sig: Signature) -> list:
    return [n for n, d in sig.types.items() if d.polarity == POS]


def negative_names(sig: Signature) -> list:
    return [n for n, d in sig.types.items() if d.polarity == NEG]


def loop_definitions(sig: Signature) -> dict:
    """One diverging definition ``%loop.n : s = %loop.n`` per negative name ``s``."""
    out = {}
    used = set(sig.defs)
    n = 0
    for s in negative_names(sig):
        while True:
            n += 1
            name = f"{LOOP_PREFIX}.{n}"
            if name not in used:
                break
        out[s] = ExprDef(name, Name(s, NEG), DefName(name))
    return out


def compute_inhabited(sig: Signature) -> InhabitTable:
    """Inhabitation table for a normalized signature."""
    pos = positive_names(sig)
    loops = loop_definitions(sig)
    # smallest witness size per name, by constructor count; iterate to a fixpoint
    size: dict = {}
    choice: dict = {}
    changed = True
    while changed:
        changed = False
        for t in pos:
            body = sig.body(t)
            best: Optional[tuple] = None
            if isinstance(body, (Unit, Down)):
                best = (1, None)
            elif isinstance(body, Tensor):
                a, b = _name(body.left), _name(body.right)
                if a in size and b in size:
                    best = (1 + size[a] + size[b], None)
            elif isinstance(body, Variant):
                for l, c in body.branches:
                    c = _name(c)
                    if c in size and (best is None or 1 + size[c] < best[0]):
                        best = (1 + size[c], l)
            if best is not None and (t not in size or best[0] < size[t]):
                size[t], choice[t] = best
                changed = True

    # ties go to the first label in source order
    for t in size:
        body = sig.body(t)
        if isinstance(body, Variant):
            choice[t] = next(l for l, c in body.branches
                             if _name(c) in size and 1 + size[_name(c)] == size[t])

    witnesses: dict = {}

    def build(t: str):
        if t in witnesses:
            return witnesses[t]
        body = sig.body(t)
        if isinstance(body, Unit):
            w = UnitVal()
        elif isinstance(body, Down):
            w = Thunk(DefName(loops[_name(body.body)].name))
        elif isinstance(body, Tensor):
            w = Pair(build(_name(body.left)), build(_name(body.right)))
        else:
            l = choice[t]
            c = dict(body.branches)[l]
            w = Inj(l, build(_name(c)))
        witnesses[t] = w
        return w

    for t in pos:
        if t in size:
            build(t)
    empty = frozenset(t for t in pos if t not in size)
    full = set()
    for s in negative_names(sig):
        body = sig.body(s)
        if isinstance(body, Arrow) and _name(body.arg) in empty:
            full.add(s)
        elif isinstance(body, Lazy) and not body.fields:
            full.add(s)
    return InhabitTable(
        empty=empty,
        full=frozenset(full),
        witnesses={t: witnesses[t] for t in pos if t in witnesses},
        loops={s: d.name for s, d in loops.items()},
        loop_defs=tuple(loops.values()),
    )


def is_empty(t, table: InhabitTable) -> bool:
    return table.is_empty(_name(t))


def is_full(s, table: InhabitTable) -> bool:
    return table.is_full(_name(s))


def with_loops(sig: Signature, table: InhabitTable) -> Signature:
    """``sig`` extended with the table's diverging loop definitions."""
    missing = [d for d in table.loop_defs if d.name not in sig.defs]
    return sig.extend(missing) if missing else sig


# ---------------------------------------------------------------------------
# Independent cross-checks


def circular_empty(sig: Signature, t: str) -> bool:
    """Search for a circular emptiness derivation; goals on the path close cycles."""
    failed: set = set()

    def prove(u: str, path: frozenset) -> bool:
        if u in path:
            return True
        if u in failed:
            return False
        body = sig.body(u)
        path2 = path | {u}
        if isinstance(body, Variant):
            ok = all(prove(_name(c), path2) for _, c in body.branches)
        elif isinstance(body, Tensor):
            ok = prove(_name(body.left), path2) or prove(_name(body.right), path2)
        else:
            ok = False
        if not ok:
            failed.add(u)
        return ok

    return prove(_name(t), frozenset())


@dataclass(frozen=True)
class FoundWitness:
    value: object


@dataclass(frozen=True)
class NoneUpTo:
    depth: int


def brute_force_empty(t, sig: Signature, depth: int) -> Union[FoundWitness, NoneUpTo]:
    """Exhaustive existence search for a value of ``t`` with constructor depth <= ``depth``.

    Pairs and injections add one to the depth; ``()`` and thunks add nothing.
    Thunk positions are filled with a canonical diverging definition.
    """
    loops = loop_definitions(sig)
    memo: dict = {}

    def find(u: str, d: int):
        key = (u, d)
        if key in memo:
            return memo[key]
        memo[key] = None
        body = sig.body(u)
        res = None
        if isinstance(body, Unit):
            res = UnitVal()
        elif isinstance(body, Down):
            res = Thunk(DefName(loops[_name(body.body)].name))
        elif d >= 1 and isinstance(body, Tensor):
            a = find(_name(body.left), d - 1)
            if a is not None:
                b = find(_name(body.right), d - 1)
                if b is not None:
                    res = Pair(a, b)
        elif d >= 1 and isinstance(body, Variant):
            for l, c in body.branches:
                w = find(_name(c), d - 1)
                if w is not None:
                    res = Inj(l, w)
                    break
        memo[key] = res
        return res

    w = find(_name(t), depth)
    return FoundWitness(w) if w is not None else NoneUpTo(depth)
