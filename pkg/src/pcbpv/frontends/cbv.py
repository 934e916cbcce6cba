"""Call-by-value subtyping with emptiness, and its translation into positive
call-by-push-value types.

Type translation (names ``t`` become ``t@v``)::

    [[A -> B]]     = down ([[A]] -> up [[B]])
    [[A * B]]      = [[A]] * [[B]]
    [[1]]          = 1
    [[+{l : A}]]   = +{ l : [[A]] }
    [[&{l : B}]]   = down &{ l : up [[B]] }

A definition ``def f : A = t`` becomes ``def f : up [[A]] = [[t]]``, so a
reference to ``f`` is the computation ``f`` itself.
"""

from __future__ import annotations

import itertools

from ..core import (
    App, Arrow, DefName, Down, ExprDef, Force, Lam, LamDef, Lazy, LApp, LetUp, LLam, LName, LVar,
    Name, POS, Return, Signature, Tensor, Thunk, TypeDef, Unit, Up, Var, Variant,
    lambda_free_vars, normalize_signature,
)
from ._lambda import CircularEngine, text

SUFFIX = "@v"

RULE_ARROW = "≤→V"
RULE_TENSOR = "≤⊗V"
RULE_UNIT = "≤1V"
RULE_PLUS = "≤⊕V"
RULE_WITH = "≤&V"
RULE_BOT = "⊥V"
RULE_TOP_ARROW_ARROW = "⊤→→V"
RULE_TOP_WITH_ARROW = "⊤&→V"
RULE_TOP_ARROW_WITH = "⊤→&V"


def cbv_name(name: str) -> str:
    return name + SUFFIX


def cbv_type(ty):
    """The positive type translating a call-by-value type."""
    if isinstance(ty, Name):
        return Name(cbv_name(ty.text), POS)
    if isinstance(ty, Arrow):
        return Down(Arrow(cbv_type(ty.arg), Up(cbv_type(ty.result))))
    if isinstance(ty, Tensor):
        return Tensor(cbv_type(ty.left), cbv_type(ty.right))
    if isinstance(ty, Unit):
        return Unit()
    if isinstance(ty, Variant):
        return Variant(tuple((l, cbv_type(t)) for l, t in ty.branches))
    if isinstance(ty, Lazy):
        return Down(Lazy(tuple((l, Up(cbv_type(s))) for l, s in ty.fields)))
    raise TypeError(f"not a call-by-value type: {type(ty).__name__}")


def _fresh(base: str, avoid) -> str:
    for i in itertools.count():
        cand = f"{base}{i}"
        if cand not in avoid:
            return cand


def cbv_term(t, avoid=frozenset()):
    """Translate a lambda term; ``avoid`` holds names fresh variables must not use."""
    if isinstance(t, LVar):
        return Return(Var(t.name))
    if isinstance(t, LName):
        return DefName(t.name)
    if isinstance(t, LLam):
        return Return(Thunk(Lam(t.var, cbv_term(t.body, avoid | {t.var}))))
    if isinstance(t, LApp):
        used = set(avoid) | lambda_free_vars(t.fn) | lambda_free_vars(t.arg)
        x = _fresh("x", used)
        f = _fresh("f", used | {x})
        inner = avoid | {x, f}
        return LetUp(x, cbv_term(t.arg, inner),
                     LetUp(f, cbv_term(t.fn, inner), App(Force(Var(f)), Var(x))))
    raise TypeError(f"untranslated construct {type(t).__name__}")


def cbv_translate(sig: Signature, normalize: bool = True) -> Signature:
    """The core signature for a call-by-value signature."""
    items = []
    for it in sig.items:
        if isinstance(it, TypeDef):
            items.append(TypeDef(cbv_name(it.name), cbv_type(it.body), span=it.span))
        elif isinstance(it, LamDef):
            items.append(ExprDef(it.name, Up(cbv_type(it.type)), cbv_term(it.body), span=it.span))
    out = Signature(tuple(items))
    return normalize_signature(out) if normalize else out


class CbvSubtyping(CircularEngine):
    """Circular call-by-value subtyping and emptiness."""

    def __init__(self, sig: Signature):
        super().__init__(sig)
        self.empty_set = self._compute_empty()

    def _compute_empty(self) -> frozenset:
        inhabited: set = set()
        changed = True
        while changed:
            changed = False
            for n, d in self.sig.types.items():
                if n in inhabited:
                    continue
                b = d.body
                if isinstance(b, (Unit, Arrow, Lazy)):
                    ok = True
                elif isinstance(b, Tensor):
                    ok = text(b.left) in inhabited and text(b.right) in inhabited
                elif isinstance(b, Variant):
                    ok = any(text(t) in inhabited for _, t in b.branches)
                else:
                    ok = False
                if ok:
                    inhabited.add(n)
                    changed = True
        return frozenset(n for n in self.sig.types if n not in inhabited)

    def empty(self, t: str) -> bool:
        if t not in self.sig.types:
            raise KeyError(f"undefined type name {t}")
        return t in self.empty_set

    def rules(self, a: str, b: str) -> list:
        ta, tb = self.body(a), self.body(b)
        out = []
        if isinstance(ta, Arrow) and isinstance(tb, Arrow):
            out.append((RULE_ARROW, [(text(tb.arg), text(ta.arg)), (text(ta.result), text(tb.result))]))
        elif isinstance(ta, Tensor) and isinstance(tb, Tensor):
            out.append((RULE_TENSOR, [(text(ta.left), text(tb.left)), (text(ta.right), text(tb.right))]))
        elif isinstance(ta, Unit) and isinstance(tb, Unit):
            out.append((RULE_UNIT, []))
        elif isinstance(ta, Variant) and isinstance(tb, Variant):
            target = dict(tb.branches)
            goals = []
            ok = True
            for l, t in ta.branches:
                if l in target:
                    goals.append((text(t), text(target[l])))
                elif text(t) not in self.empty_set:
                    ok = False
                    break
            if ok:
                out.append((RULE_PLUS, goals))
        elif isinstance(ta, Lazy) and isinstance(tb, Lazy):
            have = dict(ta.fields)
            if all(j in have for j, _ in tb.fields):
                out.append((RULE_WITH, [(text(have[j]), text(s)) for j, s in tb.fields]))
        if a in self.empty_set:
            out.append((RULE_BOT, []))
        if isinstance(tb, Arrow) and text(tb.arg) in self.empty_set:
            if isinstance(ta, Arrow):
                out.append((RULE_TOP_ARROW_ARROW, []))
            elif isinstance(ta, Lazy):
                out.append((RULE_TOP_WITH_ARROW, []))
        if isinstance(ta, Arrow) and isinstance(tb, Lazy) and not tb.fields:
            out.append((RULE_TOP_ARROW_WITH, []))
        return out


def cbv_sub(t: str, u: str, sig: Signature, engine: CbvSubtyping = None) -> bool:
    return (engine or CbvSubtyping(sig)).sub(t, u)


def cbv_empty(t: str, sig: Signature, engine: CbvSubtyping = None) -> bool:
    return (engine or CbvSubtyping(sig)).empty(t)
