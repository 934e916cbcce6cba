"""Call-by-name subtyping, and its translation into negative call-by-push-value
types.

Type translation (names ``t`` become ``t@n``)::

    [[A -> B]]     = down [[A]] -> [[B]]
    [[A * B]]      = up (down [[A]] * down [[B]])
    [[1]]          = up 1
    [[+{l : A}]]   = up +{ l : down [[A]] }
    [[&{l : B}]]   = &{ l : [[B]] }

Terms: a variable forces its thunk, and an application passes its argument
as a thunk.
"""

from __future__ import annotations

from ..core import (
    App, Arrow, Down, ExprDef, Force, Lam, LamDef, Lazy, LApp, LLam, LName, LVar, Name, NEG,
    DefName, Signature, Tensor, Thunk, TypeDef, Unit, Up, Var, Variant, normalize_signature,
)
from ._lambda import CircularEngine, text

SUFFIX = "@n"

RULE_ARROW = "≤→N"
RULE_TENSOR = "≤⊗N"
RULE_UNIT = "≤1N"
RULE_PLUS = "≤⊕N"
RULE_WITH = "≤&N"
RULE_BOT = "⊥N"
RULE_TOP = "⊤N"


def cbn_name(name: str) -> str:
    return name + SUFFIX


def cbn_type(ty):
    """The negative type translating a call-by-name type."""
    if isinstance(ty, Name):
        return Name(cbn_name(ty.text), NEG)
    if isinstance(ty, Arrow):
        return Arrow(Down(cbn_type(ty.arg)), cbn_type(ty.result))
    if isinstance(ty, Tensor):
        return Up(Tensor(Down(cbn_type(ty.left)), Down(cbn_type(ty.right))))
    if isinstance(ty, Unit):
        return Up(Unit())
    if isinstance(ty, Variant):
        return Up(Variant(tuple((l, Down(cbn_type(t))) for l, t in ty.branches)))
    if isinstance(ty, Lazy):
        return Lazy(tuple((l, cbn_type(s)) for l, s in ty.fields))
    raise TypeError(f"not a call-by-name type: {type(ty).__name__}")


def cbn_term(t):
    if isinstance(t, LVar):
        return Force(Var(t.name))
    if isinstance(t, LName):
        return DefName(t.name)
    if isinstance(t, LLam):
        return Lam(t.var, cbn_term(t.body))
    if isinstance(t, LApp):
        return App(cbn_term(t.fn), Thunk(cbn_term(t.arg)))
    raise TypeError(f"untranslated construct {type(t).__name__}")


def cbn_translate(sig: Signature, normalize: bool = True) -> Signature:
    """The core signature for a call-by-name signature."""
    items = []
    for it in sig.items:
        if isinstance(it, TypeDef):
            items.append(TypeDef(cbn_name(it.name), cbn_type(it.body), span=it.span))
        elif isinstance(it, LamDef):
            items.append(ExprDef(it.name, cbn_type(it.type), cbn_term(it.body), span=it.span))
    out = Signature(tuple(items))
    return normalize_signature(out) if normalize else out


class CbnSubtyping(CircularEngine):
    """Circular call-by-name subtyping."""

    def full(self, t: str) -> bool:
        b = self.body(t)
        return isinstance(b, Lazy) and not b.fields

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
            if all(l in target for l, _ in ta.branches):
                out.append((RULE_PLUS, [(text(t), text(target[l])) for l, t in ta.branches]))
        elif isinstance(ta, Lazy) and isinstance(tb, Lazy):
            have = dict(ta.fields)
            if all(j in have for j, _ in tb.fields):
                out.append((RULE_WITH, [(text(have[j]), text(s)) for j, s in tb.fields]))
        if isinstance(ta, Variant) and not ta.branches:
            out.append((RULE_BOT, []))
        if self.full(b):
            out.append((RULE_TOP, []))
        return out


def cbn_sub(t: str, u: str, sig: Signature, engine: CbnSubtyping = None) -> bool:
    return (engine or CbnSubtyping(sig)).sub(t, u)


def cbn_full(t: str, sig: Signature, engine: CbnSubtyping = None) -> bool:
    return (engine or CbnSubtyping(sig)).full(t)
