"""Abstract syntax for polarized equirecursive call-by-push-value.

Syntax trees and signatures are immutable dataclasses.  Source
spans ride along on every node but never take part in equality or hashing, so
two terms parsed from differently formatted text compare equal.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Union

POS = "+"
NEG = "-"


@dataclass(frozen=True)
class SourceSpan:
    file: str
    start_line: int
    start_col: int
    end_line: int
    end_col: int

    def __str__(self) -> str:
        return f"{self.file}:{self.start_line}:{self.start_col}-{self.end_line}:{self.end_col}"

    def covers(self, other: "SourceSpan") -> bool:
        return (self.start_line, self.start_col) <= (other.start_line, other.start_col) and (
            other.end_line,
            other.end_col,
        ) <= (self.end_line, self.end_col)


def _span():
    return field(default=None, compare=False, repr=False, kw_only=True)


# ---------------------------------------------------------------------------
# Types


@dataclass(frozen=True)
class Name:
    """A type name; polarity is fixed by the position it occurs in."""

    text: str
    polarity: str
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Tensor:
    left: "PosType"
    right: "PosType"
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Unit:
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Variant:
    branches: tuple  # tuple[(label, PosType)]
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Down:
    body: "NegType"
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Arrow:
    arg: "PosType"
    result: "NegType"
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Lazy:
    fields: tuple  # tuple[(label, NegType)]
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Up:
    body: "PosType"
    span: Optional[SourceSpan] = _span()


# isorecursive extensions


@dataclass(frozen=True)
class TVar:
    name: str
    polarity: str
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Mu:
    var: str
    body: "PosType"
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Nu:
    var: str
    body: "NegType"
    span: Optional[SourceSpan] = _span()


PosType = Union[Tensor, Unit, Variant, Down, Name, TVar, Mu]
NegType = Union[Arrow, Lazy, Up, Name, TVar, Nu]
Type = Union[PosType, NegType]

POS_STRUCTURAL = (Tensor, Unit, Variant, Down)
NEG_STRUCTURAL = (Arrow, Lazy, Up)


def polarity_of(ty: Type) -> str:
    if isinstance(ty, (Name, TVar)):
        return ty.polarity
    if isinstance(ty, POS_STRUCTURAL + (Mu,)):
        return POS
    if isinstance(ty, NEG_STRUCTURAL + (Nu,)):
        return NEG
    raise TypeError(f"not a type: {ty!r}")


def is_structural(ty: Type) -> bool:
    return isinstance(ty, POS_STRUCTURAL + NEG_STRUCTURAL)


def type_children(ty: Type) -> list:
    if isinstance(ty, Tensor):
        return [ty.left, ty.right]
    if isinstance(ty, (Variant,)):
        return [t for _, t in ty.branches]
    if isinstance(ty, Lazy):
        return [t for _, t in ty.fields]
    if isinstance(ty, (Down, Up, Mu, Nu)):
        return [ty.body]
    if isinstance(ty, Arrow):
        return [ty.arg, ty.result]
    return []


def type_names(ty: Type) -> Iterator[Name]:
    """All type names occurring in ``ty`` (pre-order)."""
    if isinstance(ty, Name):
        yield ty
    for child in type_children(ty):
        yield from type_names(child)


def map_children(ty: Type, f) -> Type:
    """Rebuild a structural type with ``f`` applied to each immediate child."""
    if isinstance(ty, Tensor):
        return Tensor(f(ty.left), f(ty.right))
    if isinstance(ty, Variant):
        return Variant(tuple((l, f(t)) for l, t in ty.branches))
    if isinstance(ty, Down):
        return Down(f(ty.body))
    if isinstance(ty, Arrow):
        return Arrow(f(ty.arg), f(ty.result))
    if isinstance(ty, Lazy):
        return Lazy(tuple((l, f(t)) for l, t in ty.fields))
    if isinstance(ty, Up):
        return Up(f(ty.body))
    if isinstance(ty, Mu):
        return Mu(ty.var, f(ty.body))
    if isinstance(ty, Nu):
        return Nu(ty.var, f(ty.body))
    return ty


def subst_tvar(ty: Type, var: str, replacement: Type) -> Type:
    """Replace free occurrences of type variable ``var`` (used to unroll mu/nu)."""
    if isinstance(ty, TVar):
        return replacement if ty.name == var else ty
    if isinstance(ty, (Mu, Nu)) and ty.var == var:
        return ty
    return map_children(ty, lambda c: subst_tvar(c, var, replacement))


def strip_type_spans(ty: Type) -> Type:
    if isinstance(ty, Name):
        return Name(ty.text, ty.polarity)
    if isinstance(ty, TVar):
        return TVar(ty.name, ty.polarity)
    if isinstance(ty, Unit):
        return Unit()
    return map_children(ty, strip_type_spans)


# ---------------------------------------------------------------------------
# Values


@dataclass(frozen=True)
class Var:
    name: str
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Pair:
    left: "Value"
    right: "Value"
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class UnitVal:
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Inj:
    label: str
    value: "Value"
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Thunk:
    body: "Computation"
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class AnnoV:
    value: "Value"
    type: PosType
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class FoldMu:
    value: "Value"
    span: Optional[SourceSpan] = _span()


Value = Union[Var, Pair, UnitVal, Inj, Thunk, AnnoV, FoldMu]

# ---------------------------------------------------------------------------
# Computations


@dataclass(frozen=True)
class Lam:
    var: str
    body: "Computation"
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class App:
    fn: "Computation"
    arg: Value
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Record:
    fields: tuple  # tuple[(label, Computation)]
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Proj:
    body: "Computation"
    label: str
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Return:
    value: Value
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class LetUp:
    var: str
    bound: "Computation"
    body: "Computation"
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class DefName:
    name: str
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class SplitPair:
    value: Value
    left: str
    right: str
    body: "Computation"
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class SplitUnit:
    value: Value
    body: "Computation"
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Match:
    value: Value
    branches: tuple  # tuple[(label, var, Computation)]
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Force:
    value: Value
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class AnnoC:
    body: "Computation"
    type: NegType
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class FoldNu:
    body: "Computation"
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Unfold:
    body: "Computation"
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class CaseFold:
    var: str
    value: Value
    body: "Computation"
    span: Optional[SourceSpan] = _span()


Computation = Union[
    Lam, App, Record, Proj, Return, LetUp, DefName, SplitPair, SplitUnit, Match, Force, AnnoC,
    FoldNu, Unfold, CaseFold,
]
Term = Union[Value, Computation]

VALUE_TYPES = (Var, Pair, UnitVal, Inj, Thunk, AnnoV, FoldMu)
COMP_TYPES = (Lam, App, Record, Proj, Return, LetUp, DefName, SplitPair, SplitUnit, Match, Force,
              AnnoC, FoldNu, Unfold, CaseFold)


def is_value(t) -> bool:
    return isinstance(t, VALUE_TYPES)


# ---------------------------------------------------------------------------
# Signatures


@dataclass(frozen=True)
class TypeDef:
    name: str
    body: Type
    span: Optional[SourceSpan] = _span()

    @property
    def polarity(self) -> str:
        return polarity_of(self.body)


@dataclass(frozen=True)
class ExprDef:
    name: str
    type: NegType
    body: Computation
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Signature:
    """Ordered global signature of type and expression definitions.

    ``items`` keeps source order (and any duplicates, so that validation can
    report them); ``types``/``defs`` are first-wins lookup tables.
    """

    items: tuple = ()

    @property
    def types(self) -> dict:
        d = self.__dict__.get("_types")
        if d is None:
            d = {}
            for it in self.items:
                if isinstance(it, TypeDef):
                    d.setdefault(it.name, it)
            object.__setattr__(self, "_types", d)
        return d

    @property
    def defs(self) -> dict:
        d = self.__dict__.get("_defs")
        if d is None:
            d = {}
            for it in self.items:
                if isinstance(it, (ExprDef, LamDef)):
                    d.setdefault(it.name, it)
            object.__setattr__(self, "_defs", d)
        return d

    def body(self, name: str) -> Type:
        return self.types[name].body

    def extend(self, items: Iterable) -> "Signature":
        return Signature(self.items + tuple(items))

    def type_names(self, polarity: Optional[str] = None) -> list:
        return [n for n, d in self.types.items() if polarity is None or d.polarity == polarity]


def name_ref(sig: Signature, text: str) -> Name:
    """A :class:`Name` for a defined type, with its definition's polarity."""
    return Name(text, sig.types[text].polarity)


@dataclass(frozen=True)
class Context:
    """Ordered variable typing context."""

    bindings: tuple = ()

    def lookup(self, x: str):
        for y, ty in reversed(self.bindings):
            if y == x:
                return ty
        return None

    def extend(self, x: str, ty) -> "Context":
        return Context(tuple((y, t) for y, t in self.bindings if y != x) + ((x, ty),))

    def __iter__(self):
        return iter(self.bindings)


# ---------------------------------------------------------------------------
# Free variables, substitution, erasure


def free_vars(t) -> frozenset:
    if isinstance(t, Var):
        return frozenset([t.name])
    if isinstance(t, (UnitVal, DefName)):
        return frozenset()
    if isinstance(t, Pair):
        return free_vars(t.left) | free_vars(t.right)
    if isinstance(t, (Inj, AnnoV, FoldMu, Return, Force)):
        return free_vars(t.value)
    if isinstance(t, (Thunk, AnnoC, FoldNu, Unfold, Proj)):
        return free_vars(t.body)
    if isinstance(t, Lam):
        return free_vars(t.body) - {t.var}
    if isinstance(t, App):
        return free_vars(t.fn) | free_vars(t.arg)
    if isinstance(t, Record):
        return frozenset().union(*(free_vars(e) for _, e in t.fields))
    if isinstance(t, LetUp):
        return free_vars(t.bound) | (free_vars(t.body) - {t.var})
    if isinstance(t, SplitPair):
        return free_vars(t.value) | (free_vars(t.body) - {t.left, t.right})
    if isinstance(t, SplitUnit):
        return free_vars(t.value) | free_vars(t.body)
    if isinstance(t, Match):
        out = free_vars(t.value)
        for _, x, e in t.branches:
            out |= free_vars(e) - {x}
        return out
    if isinstance(t, CaseFold):
        return free_vars(t.value) | (free_vars(t.body) - {t.var})
    raise TypeError(f"not a term: {t!r}")


def _fresh(base: str, avoid) -> str:
    stem = base.rstrip("'0123456789") or "x"
    for i in itertools.count(1):
        cand = f"{stem}{i}"
        if cand not in avoid:
            return cand
    raise AssertionError


def substitute(v: Value, x: str, target):
    """Capture-avoiding ``[v/x]target`` for a value or computation ``target``."""
    return _subst(target, {x: v})


def subst_many(mapping: dict, target):
    """Simultaneous capture-avoiding substitution of values for variables."""
    return _subst(target, dict(mapping)) if mapping else target


def _binder(x: str, body, env: dict):
    """Drop a shadowed binding and rename ``x`` when it would capture."""
    env = {k: v for k, v in env.items() if k != x}
    if not env:
        return x, body, env
    fv_env = frozenset().union(*(free_vars(v) for v in env.values()))
    if x in fv_env:
        y = _fresh(x, fv_env | free_vars(body) | set(env))
        body = _subst(body, {x: Var(y)})
        return y, body, env
    return x, body, env


def _subst(t, env: dict):
    if not env:
        return t
    if isinstance(t, Var):
        return env.get(t.name, t)
    if isinstance(t, (UnitVal, DefName)):
        return t
    if isinstance(t, Pair):
        return Pair(_subst(t.left, env), _subst(t.right, env), span=t.span)
    if isinstance(t, Inj):
        return Inj(t.label, _subst(t.value, env), span=t.span)
    if isinstance(t, Thunk):
        return Thunk(_subst(t.body, env), span=t.span)
    if isinstance(t, AnnoV):
        return AnnoV(_subst(t.value, env), t.type, span=t.span)
    if isinstance(t, FoldMu):
        return FoldMu(_subst(t.value, env), span=t.span)
    if isinstance(t, Lam):
        x, body, inner = _binder(t.var, t.body, env)
        return Lam(x, _subst(body, inner), span=t.span)
    if isinstance(t, App):
        return App(_subst(t.fn, env), _subst(t.arg, env), span=t.span)
    if isinstance(t, Record):
        return Record(tuple((l, _subst(e, env)) for l, e in t.fields), span=t.span)
    if isinstance(t, Proj):
        return Proj(_subst(t.body, env), t.label, span=t.span)
    if isinstance(t, Return):
        return Return(_subst(t.value, env), span=t.span)
    if isinstance(t, LetUp):
        bound = _subst(t.bound, env)
        x, body, inner = _binder(t.var, t.body, env)
        return LetUp(x, bound, _subst(body, inner), span=t.span)
    if isinstance(t, SplitPair):
        value = _subst(t.value, env)
        x, body, inner = _binder(t.left, t.body, env)
        if t.right == t.left:
            y = x
        else:
            y, body, inner = _binder(t.right, body, inner)
        return SplitPair(value, x, y, _subst(body, inner), span=t.span)
    if isinstance(t, SplitUnit):
        return SplitUnit(_subst(t.value, env), _subst(t.body, env), span=t.span)
    if isinstance(t, Match):
        value = _subst(t.value, env)
        branches = []
        for l, x, e in t.branches:
            y, body, inner = _binder(x, e, env)
            branches.append((l, y, _subst(body, inner)))
        return Match(value, tuple(branches), span=t.span)
    if isinstance(t, Force):
        return Force(_subst(t.value, env), span=t.span)
    if isinstance(t, AnnoC):
        return AnnoC(_subst(t.body, env), t.type, span=t.span)
    if isinstance(t, FoldNu):
        return FoldNu(_subst(t.body, env), span=t.span)
    if isinstance(t, Unfold):
        return Unfold(_subst(t.body, env), span=t.span)
    if isinstance(t, CaseFold):
        value = _subst(t.value, env)
        x, body, inner = _binder(t.var, t.body, env)
        return CaseFold(x, value, _subst(body, inner), span=t.span)
    raise TypeError(f"not a term: {t!r}")


def map_term(t, fv, fc):
    """Bottom-up rebuild: ``fv``/``fc`` post-process each rebuilt value/computation."""
    def go(t):
        if isinstance(t, (Var, UnitVal)):
            return fv(t)
        if isinstance(t, DefName):
            return fc(t)
        if isinstance(t, Pair):
            return fv(Pair(go(t.left), go(t.right), span=t.span))
        if isinstance(t, Inj):
            return fv(Inj(t.label, go(t.value), span=t.span))
        if isinstance(t, Thunk):
            return fv(Thunk(go(t.body), span=t.span))
        if isinstance(t, AnnoV):
            return fv(AnnoV(go(t.value), t.type, span=t.span))
        if isinstance(t, FoldMu):
            return fv(FoldMu(go(t.value), span=t.span))
        if isinstance(t, Lam):
            return fc(Lam(t.var, go(t.body), span=t.span))
        if isinstance(t, App):
            return fc(App(go(t.fn), go(t.arg), span=t.span))
        if isinstance(t, Record):
            return fc(Record(tuple((l, go(e)) for l, e in t.fields), span=t.span))
        if isinstance(t, Proj):
            return fc(Proj(go(t.body), t.label, span=t.span))
        if isinstance(t, Return):
            return fc(Return(go(t.value), span=t.span))
        if isinstance(t, LetUp):
            return fc(LetUp(t.var, go(t.bound), go(t.body), span=t.span))
        if isinstance(t, SplitPair):
            return fc(SplitPair(go(t.value), t.left, t.right, go(t.body), span=t.span))
        if isinstance(t, SplitUnit):
            return fc(SplitUnit(go(t.value), go(t.body), span=t.span))
        if isinstance(t, Match):
            return fc(Match(go(t.value), tuple((l, x, go(e)) for l, x, e in t.branches), span=t.span))
        if isinstance(t, Force):
            return fc(Force(go(t.value), span=t.span))
        if isinstance(t, AnnoC):
            return fc(AnnoC(go(t.body), t.type, span=t.span))
        if isinstance(t, FoldNu):
            return fc(FoldNu(go(t.body), span=t.span))
        if isinstance(t, Unfold):
            return fc(Unfold(go(t.body), span=t.span))
        if isinstance(t, CaseFold):
            return fc(CaseFold(t.var, go(t.value), go(t.body), span=t.span))
        raise TypeError(f"not a term: {t!r}")

    return go(t)


def erase_annotations(t):
    """Remove every ``(v : T)`` / ``(e : S)`` node; idempotent."""
    def strip_v(v):
        return v.value if isinstance(v, AnnoV) else v

    def strip_c(e):
        return e.body if isinstance(e, AnnoC) else e

    return map_term(t, strip_v, strip_c)


def subterms(t) -> Iterator:
    yield t
    if isinstance(t, Pair):
        yield from subterms(t.left)
        yield from subterms(t.right)
    elif isinstance(t, (Inj, AnnoV, FoldMu, Return, Force)):
        yield from subterms(t.value)
    elif isinstance(t, (Thunk, AnnoC, FoldNu, Unfold, Proj, Lam)):
        yield from subterms(t.body)
    elif isinstance(t, App):
        yield from subterms(t.fn)
        yield from subterms(t.arg)
    elif isinstance(t, Record):
        for _, e in t.fields:
            yield from subterms(e)
    elif isinstance(t, LetUp):
        yield from subterms(t.bound)
        yield from subterms(t.body)
    elif isinstance(t, (SplitPair, SplitUnit, CaseFold)):
        yield from subterms(t.value)
        yield from subterms(t.body)
    elif isinstance(t, Match):
        yield from subterms(t.value)
        for _, _, e in t.branches:
            yield from subterms(e)


def annotation_types(t) -> Iterator[Type]:
    for s in subterms(t):
        if isinstance(s, (AnnoV, AnnoC)):
            yield s.type


def value_depth(v: Value) -> int:
    """Constructor depth: pair/injection/fold layers, with leaves at depth 0."""
    if isinstance(v, Pair):
        return 1 + max(value_depth(v.left), value_depth(v.right))
    if isinstance(v, (Inj, FoldMu)):
        return 1 + value_depth(v.value)
    if isinstance(v, AnnoV):
        return value_depth(v.value)
    return 0


def value_size(v: Value) -> int:
    """Constructor count (every node counts one)."""
    if isinstance(v, Pair):
        return 1 + value_size(v.left) + value_size(v.right)
    if isinstance(v, (Inj, FoldMu, AnnoV)):
        return 1 + value_size(v.value)
    return 1


# ---------------------------------------------------------------------------
# Untyped lambda terms (source language of the call-by-name/value front ends)


@dataclass(frozen=True)
class LVar:
    name: str
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class LLam:
    var: str
    body: "LTerm"
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class LApp:
    fn: "LTerm"
    arg: "LTerm"
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class LName:
    name: str
    span: Optional[SourceSpan] = _span()


LTerm = Union[LVar, LLam, LApp, LName]


@dataclass(frozen=True)
class LamDef:
    """``def f : T = t`` in a call-by-name or call-by-value signature."""

    name: str
    type: Type
    body: LTerm
    span: Optional[SourceSpan] = _span()


# ---------------------------------------------------------------------------
# Validation


@dataclass(frozen=True)
class Diagnostic:
    rule: str
    message: str
    span: Optional[SourceSpan] = None

    def __str__(self) -> str:
        where = f"{self.span}: " if self.span else ""
        return f"{where}{self.message} [{self.rule}]"


def display_name(name: str) -> str:
    """User-facing rendering of a type or definition name."""
    return f"{name} (internal)" if name.startswith("%") else name


def _dup_labels(labels) -> list:
    seen, dups = set(), []
    for l in labels:
        if l in seen and l not in dups:
            dups.append(l)
        seen.add(l)
    return dups


def _head_polarity(ty) -> Optional[str]:
    if isinstance(ty, (Name, TVar)):
        return None
    try:
        return polarity_of(ty)
    except TypeError:
        return None


def _type_checker(sig: Signature, out: list, iso: bool, polarized: bool):
    """A well-formedness walk over types that appends diagnostics to ``out``."""

    def check_type(ty, want: Optional[str], bound: dict, where):
        span = ty.span or where
        if isinstance(ty, Name):
            d = sig.types.get(ty.text)
            if d is None:
                out.append(Diagnostic("defined-name", f"type name {display_name(ty.text)} is not defined", span))
            elif polarized:
                dp = _def_polarity(sig, ty.text)
                if dp is not None and want is not None and dp != want:
                    out.append(Diagnostic(
                        "polarity",
                        f"type name {display_name(ty.text)} is {_pol_word(dp)} but a {_pol_word(want)} type is expected here",
                        span))
            return
        if isinstance(ty, TVar):
            if ty.name not in bound:
                out.append(Diagnostic("bound-variable", f"type variable {ty.name} is not bound", span))
            elif polarized and want is not None and bound[ty.name] != want:
                out.append(Diagnostic("polarity", f"type variable {ty.name} used at the wrong polarity", span))
            return
        if isinstance(ty, (Mu, Nu)) and not iso:
            out.append(Diagnostic("iso-only", "mu/nu types are only available in isorecursive mode", span))
        if polarized and want is not None:
            got = polarity_of(ty)
            if got != want:
                out.append(Diagnostic("polarity", f"{_pol_word(got)} type used where a {_pol_word(want)} type is expected", span))
        if isinstance(ty, Variant):
            for l in _dup_labels([l for l, _ in ty.branches]):
                out.append(Diagnostic("distinct-labels", f"label {l} occurs twice in a variant type", span))
        if isinstance(ty, Lazy):
            for l in _dup_labels([l for l, _ in ty.fields]):
                out.append(Diagnostic("distinct-labels", f"label {l} occurs twice in a lazy record type", span))
        if not polarized:
            for c in type_children(ty):
                check_type(c, None, bound, span)
            return
        if isinstance(ty, Tensor):
            check_type(ty.left, POS, bound, span)
            check_type(ty.right, POS, bound, span)
        elif isinstance(ty, Variant):
            for _, t in ty.branches:
                check_type(t, POS, bound, span)
        elif isinstance(ty, Down):
            check_type(ty.body, NEG, bound, span)
        elif isinstance(ty, Arrow):
            check_type(ty.arg, POS, bound, span)
            check_type(ty.result, NEG, bound, span)
        elif isinstance(ty, Lazy):
            for _, s in ty.fields:
                check_type(s, NEG, bound, span)
        elif isinstance(ty, Up):
            check_type(ty.body, POS, bound, span)
        elif isinstance(ty, Mu):
            check_type(ty.body, POS, {**bound, ty.var: POS}, span)
        elif isinstance(ty, Nu):
            check_type(ty.body, NEG, {**bound, ty.var: NEG}, span)

    return check_type


def validate_signature(sig: Signature, iso: bool = False, polarized: bool = True) -> list:
    """Well-formedness diagnostics for ``sig``; the empty list means valid.

    Each diagnostic names the rule it violates, for example ``contractive``
    or ``polarity``.  Bodies of expression definitions are checked for closedness
    and for references to undefined names, but not typechecked.
    """
    out: list = []
    seen_types: dict = {}
    seen_defs: dict = {}
    for it in sig.items:
        table = seen_types if isinstance(it, TypeDef) else seen_defs
        if it.name in table:
            kind = "type" if isinstance(it, TypeDef) else "definition"
            out.append(Diagnostic("unique-name", f"{kind} {display_name(it.name)} is defined more than once", it.span))
        else:
            table[it.name] = it

    check_type = _type_checker(sig, out, iso, polarized)

    for it in sig.items:
        if isinstance(it, TypeDef):
            if isinstance(it.body, (Name, TVar)):
                out.append(Diagnostic(
                    "contractive",
                    f"definition of {display_name(it.name)} is not contractive: its body is a bare name",
                    it.span))
                check_type(it.body, None, {}, it.span)
            else:
                check_type(it.body, None, {}, it.span)
        elif isinstance(it, ExprDef):
            check_type(it.type, NEG, {}, it.span)
            _check_term(sig, it, out, check_type, iso)
        elif isinstance(it, LamDef):
            check_type(it.type, None, {}, it.span)
            _check_lambda(sig, it, out)
    return out


def validate_type(ty: Type, sig: Signature, want: Optional[str] = None, iso: bool = False) -> list:
    """Diagnostics for a standalone type over ``sig``, such as a command-line argument."""
    out: list = []
    _type_checker(sig, out, iso, True)(ty, want, {}, ty.span)
    return out


def _pol_word(p: str) -> str:
    return "positive" if p == POS else "negative"


def _def_polarity(sig: Signature, name: str, seen=None) -> Optional[str]:
    body = sig.types[name].body
    if isinstance(body, Name):
        seen = (seen or set()) | {name}
        if body.text in seen or body.text not in sig.types:
            return None
        return _def_polarity(sig, body.text, seen)
    return _head_polarity(body)


def _check_term(sig: Signature, d: ExprDef, out: list, check_type, iso: bool) -> None:
    for x in sorted(free_vars(d.body)):
        out.append(Diagnostic("closed-definition", f"free variable {x} in definition of {display_name(d.name)}", d.span))
    for s in subterms(d.body):
        span = s.span or d.span
        if isinstance(s, DefName) and s.name not in sig.defs:
            out.append(Diagnostic("defined-name", f"expression name {display_name(s.name)} is not defined", span))
        elif isinstance(s, Record):
            for l in _dup_labels([l for l, _ in s.fields]):
                out.append(Diagnostic("distinct-labels", f"label {l} occurs twice in a record", span))
        elif isinstance(s, Match):
            for l in _dup_labels([l for l, _, _ in s.branches]):
                out.append(Diagnostic("distinct-labels", f"label {l} occurs twice in a match", span))
        elif isinstance(s, AnnoV):
            check_type(s.type, POS, {}, span)
        elif isinstance(s, AnnoC):
            check_type(s.type, NEG, {}, span)
        elif isinstance(s, (FoldMu, FoldNu, Unfold, CaseFold)) and not iso:
            out.append(Diagnostic("iso-only", "fold/unfold are only available in isorecursive mode", span))


def lambda_free_vars(t) -> frozenset:
    if isinstance(t, LVar):
        return frozenset([t.name])
    if isinstance(t, LName):
        return frozenset()
    if isinstance(t, LLam):
        return lambda_free_vars(t.body) - {t.var}
    return lambda_free_vars(t.fn) | lambda_free_vars(t.arg)


def _check_lambda(sig: Signature, d: LamDef, out: list) -> None:
    for x in sorted(lambda_free_vars(d.body)):
        out.append(Diagnostic("closed-definition", f"free variable {x} in definition of {d.name}", d.span))

    def walk(t):
        if isinstance(t, LName) and t.name not in sig.defs:
            out.append(Diagnostic("defined-name", f"expression name {t.name} is not defined", t.span or d.span))
        elif isinstance(t, LLam):
            walk(t.body)
        elif isinstance(t, LApp):
            walk(t.fn)
            walk(t.arg)

    walk(d.body)


# ---------------------------------------------------------------------------
# Normalization


AUX_PREFIX = "%"


def aux_base(name: str) -> str:
    return name.lstrip(AUX_PREFIX)


class Normalizer:
    """Incremental builder for signatures in name/structure alternating form.

    Every argument position of a structural body is replaced by a type name.
    Auxiliary names are ``%<base>.<n>`` with one counter per signature, and
    hash-consing lets equal shallow bodies share a single auxiliary (user
    names are never reused for this).  ``polarized=False`` is used for the
    unpolarized call-by-name/value languages.
    """

    def __init__(self, sig: Signature, polarized: bool = True):
        self.polarized = polarized
        self._items: list = []
        self._defined: dict = {}
        self._shared: dict = {}
        self._counter = 0
        self._added: list = []
        for it in sig.items:
            if isinstance(it, TypeDef) and it.name.startswith(AUX_PREFIX):
                self._shared.setdefault(strip_type_spans(it.body), it.name)
        for it in sig.items:
            if isinstance(it, TypeDef):
                self._defined[it.name] = it
        for it in sig.items:
            if isinstance(it, TypeDef):
                self._items.append(TypeDef(it.name, self._shallow(it.body, it.name), span=it.span))
                self._items.extend(self._drain())
            else:
                self._items.append(it)

    def _drain(self) -> list:
        out, self._added = self._added, []
        return out

    def _polarity(self, ty) -> Optional[str]:
        if not self.polarized:
            return None
        if isinstance(ty, Name):
            return ty.polarity
        return polarity_of(ty)

    def _fresh(self, base: str) -> str:
        while True:
            self._counter += 1
            cand = f"{AUX_PREFIX}{aux_base(base)}.{self._counter}"
            if cand not in self._defined:
                return cand

    def _shallow(self, ty, base: str):
        if isinstance(ty, (Name, TVar)):
            return strip_type_spans(ty)
        return map_children(ty, lambda c: self.name_for(c, base))

    def name_for(self, ty, base: str) -> Name:
        """A name denoting ``ty``; new auxiliary definitions are recorded."""
        if isinstance(ty, Name):
            return Name(ty.text, ty.polarity)
        body = self._shallow(ty, base)
        pol = self._polarity(body)
        hit = self._shared.get(body)
        if hit is not None:
            return Name(hit, pol)
        name = self._fresh(base)
        self._shared[body] = name
        d = TypeDef(name, body)
        self._defined[name] = d
        self._added.append(d)
        return Name(name, pol)

    def intern(self, ty, base: str) -> Name:
        """Like :meth:`name_for`, appending new definitions to the signature."""
        n = self.name_for(ty, base)
        self._items.extend(self._drain())
        return n

    def add_items(self, items: Iterable) -> None:
        for it in items:
            if isinstance(it, TypeDef):
                self._defined[it.name] = it
            self._items.append(it)

    def signature(self) -> Signature:
        return Signature(tuple(self._items))


def normalize_signature(sig: Signature, polarized: bool = True) -> Signature:
    """Bring every type definition into name/structure alternating form."""
    return Normalizer(sig, polarized).signature()


def is_normal(sig: Signature) -> bool:
    for d in sig.types.values():
        if not is_structural(d.body) and not isinstance(d.body, Unit):
            return False
        if any(not isinstance(c, Name) for c in type_children(d.body)):
            return False
    return True
