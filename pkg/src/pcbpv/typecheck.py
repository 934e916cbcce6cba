"""Bidirectional typechecking over a normalized signature.

Every type the checker handles is a name: annotation and declaration types
are interned into the signature first.  Introduction forms are checked,
elimination forms synthesize, and subsumption happens exactly where a
synthesizing form meets a checking position.

A slow declarative checker (``DeclarativeChecker``) serves as a reference:
it tries every candidate name of the right shape and closes with
subsumption, and it can produce an annotated copy of a term that the
bidirectional checker accepts.
"""

from __future__ import annotations

from typing import Optional

from .core import (
    AnnoC, AnnoV, App, Arrow, CaseFold, Context, DefName, Down, FoldMu, FoldNu, Force, Inj,
    Lam, Lazy, LetUp, Match, Name, Pair, Proj, Record, Return, Signature, SplitPair, SplitUnit,
    Tensor, Thunk, Unfold, Unit, UnitVal, Up, Var, Variant, display_name, map_children,
)
from .parser import print_comp, print_type, print_value
from .subtype import SubtypeState


class TypingError(Exception):
    """A located type error; ``mode`` tells whether checking or synthesis failed."""

    def __init__(self, span, mode: str, message: str, expected: Optional[str] = None,
                 found: Optional[str] = None, definition: Optional[str] = None):
        self.span = span
        self.mode = mode
        self.message = message
        self.expected = expected
        self.found = found
        self.definition = definition
        super().__init__(str(self))

    def __str__(self) -> str:
        where = f"{self.span}: " if self.span else ""
        inside = f"in {display_name(self.definition)}: " if self.definition else ""
        return f"{where}{inside}{self.message}"

    def to_json(self) -> dict:
        sp = self.span
        return {
            "definition": self.definition,
            "span": None if sp is None else {
                "file": sp.file, "start_line": sp.start_line, "start_col": sp.start_col,
                "end_line": sp.end_line, "end_col": sp.end_col,
            },
            "mode": self.mode,
            "expected": self.expected,
            "found": self.found,
            "message": self.message,
        }


_SYNTH_VALUES = (Var, AnnoV)
_SYNTH_COMPS = (App, Proj, Force, DefName, AnnoC)


class Checker:
    """Bidirectional checker for one signature."""

    def __init__(self, sig: Signature, state: Optional[SubtypeState] = None):
        self.source = sig
        self.state = state or SubtypeState(sig)
        self.def_types = {f: self.state.intern(d.type, f) for f, d in sig.defs.items()}

    # -- type helpers
    def name(self, ty, base: str = "anno") -> Name:
        return self.state.intern(ty, base)

    def body(self, n: Name):
        return self.state.body(n)

    def sub(self, a: Name, b: Name) -> bool:
        return self.state.sub(a, b)

    def show(self, n, depth: int = 0) -> str:
        """Render a type name; internal names are shown by their definition."""
        text = n.text if isinstance(n, Name) else n
        if not text.startswith("%") or depth > 6:
            return display_name(text) if text.startswith("%") else text
        body = self.state.body(text)
        return print_type(map_children(body, lambda c: Name(self.show(c, depth + 1), None)))

    def _err(self, node, mode, message, expected=None, found=None):
        return TypingError(getattr(node, "span", None), mode, message,
                           None if expected is None else self.show(expected),
                           None if found is None else self.show(found))

    # -- values
    def check_value(self, ctx: Context, v, t: Name) -> None:
        if isinstance(v, _SYNTH_VALUES):
            self._subsume_value(ctx, v, t, v)
            return
        b = self.body(t)
        if isinstance(v, Pair):
            if not isinstance(b, Tensor):
                raise self._err(v, "check", f"a pair cannot have type {self.show(t)}", t)
            self._check_part(ctx, v.left, b.left, v)
            self._check_part(ctx, v.right, b.right, v)
        elif isinstance(v, UnitVal):
            if not isinstance(b, Unit):
                raise self._err(v, "check", f"() cannot have type {self.show(t)}", t)
        elif isinstance(v, Inj):
            if not isinstance(b, Variant):
                raise self._err(v, "check", f"injection '{v.label} cannot have type {self.show(t)}", t)
            branches = dict(b.branches)
            if v.label not in branches:
                raise self._err(v, "check", f"label '{v.label} is not part of {self.show(t)}", t)
            self._check_part(ctx, v.value, branches[v.label], v)
        elif isinstance(v, Thunk):
            if not isinstance(b, Down):
                raise self._err(v, "check", f"a thunk cannot have type {self.show(t)}", t)
            self.check_comp(ctx, v.body, b.body)
        elif isinstance(v, FoldMu):
            raise self._err(v, "check", "fold is only available in isorecursive mode", t)
        else:
            raise self._err(v, "check", f"not a value: {type(v).__name__}", t)

    def _check_part(self, ctx, child, t: Name, site) -> None:
        # subsumption failures on an immediate subterm are reported at the enclosing form
        if isinstance(child, _SYNTH_VALUES):
            self._subsume_value(ctx, child, t, site)
        else:
            self.check_value(ctx, child, t)

    def _subsume_value(self, ctx, v, t: Name, site) -> None:
        found = self.synth_value(ctx, v)
        if not self.sub(found, t):
            what = print_value(v)
            if site is v:
                msg = f"{what} has type {self.show(found)}, which is not a subtype of {self.show(t)}"
            else:
                msg = (f"{print_value(site)} requires {what} to have type {self.show(t)}, "
                       f"but it has type {self.show(found)}")
            raise self._err(site, "check", msg, t, found)

    def synth_value(self, ctx: Context, v) -> Name:
        if isinstance(v, Var):
            t = ctx.lookup(v.name)
            if t is None:
                raise TypingError(v.span, "synth", f"unbound variable {v.name}")
            return t
        if isinstance(v, AnnoV):
            t = self.name(v.type)
            self.check_value(ctx, v.value, t)
            return t
        raise TypingError(getattr(v, "span", None), "synth",
                          f"cannot synthesize a type for {print_value(v)}; add an annotation")

    # -- computations
    def check_comp(self, ctx: Context, e, s: Name) -> None:
        if isinstance(e, _SYNTH_COMPS):
            found = self.synth_comp(ctx, e)
            if not self.sub(found, s):
                raise self._err(e, "check",
                                f"{print_comp(e)} has type {self.show(found)}, which is not a subtype of {self.show(s)}",
                                s, found)
            return
        if isinstance(e, Lam):
            b = self.body(s)
            if not isinstance(b, Arrow):
                raise self._err(e, "check", f"a function cannot have type {self.show(s)}", s)
            self.check_comp(ctx.extend(e.var, b.arg), e.body, b.result)
        elif isinstance(e, Record):
            b = self.body(s)
            if not isinstance(b, Lazy):
                raise self._err(e, "check", f"a record cannot have type {self.show(s)}", s)
            want = dict(b.fields)
            have = [l for l, _ in e.fields]
            if set(have) != set(want):
                raise self._err(e, "check", _label_mismatch("record fields", have, list(want)), s)
            for l, c in e.fields:
                self.check_comp(ctx, c, want[l])
        elif isinstance(e, Return):
            b = self.body(s)
            if not isinstance(b, Up):
                raise self._err(e, "check", f"return cannot have type {self.show(s)}", s)
            if isinstance(e.value, _SYNTH_VALUES):
                self._subsume_value(ctx, e.value, b.body, e.value)
            else:
                self.check_value(ctx, e.value, b.body)
        elif isinstance(e, SplitPair):
            t = self.synth_value(ctx, e.value)
            b = self.body(t)
            if not isinstance(b, Tensor):
                raise self._err(e.value, "synth", f"split expects a pair, but the value has type {self.show(t)}", found=t)
            inner = ctx.extend(e.left, b.left).extend(e.right, b.right)
            self.check_comp(inner, e.body, s)
        elif isinstance(e, SplitUnit):
            t = self.synth_value(ctx, e.value)
            if not isinstance(self.body(t), Unit):
                raise self._err(e.value, "synth", f"split expects (), but the value has type {self.show(t)}", found=t)
            self.check_comp(ctx, e.body, s)
        elif isinstance(e, Match):
            t = self.synth_value(ctx, e.value)
            b = self.body(t)
            if not isinstance(b, Variant):
                raise self._err(e.value, "synth", f"match expects a variant, but the value has type {self.show(t)}", found=t)
            want = dict(b.branches)
            have = [l for l, _, _ in e.branches]
            if set(have) != set(want):
                raise self._err(e, "check", _label_mismatch("match branches", have, list(want)), found=t)
            for l, x, body in e.branches:
                self.check_comp(ctx.extend(x, want[l]), body, s)
        elif isinstance(e, LetUp):
            r = self.synth_comp(ctx, e.bound)
            b = self.body(r)
            if not isinstance(b, Up):
                raise self._err(e.bound, "synth", f"let expects a computation of type up _, found {self.show(r)}", found=r)
            self.check_comp(ctx.extend(e.var, b.body), e.body, s)
        elif isinstance(e, (FoldNu, Unfold, CaseFold)):
            raise self._err(e, "check", "fold/unfold are only available in isorecursive mode", s)
        else:
            raise self._err(e, "check", f"not a computation: {type(e).__name__}", s)

    def synth_comp(self, ctx: Context, e) -> Name:
        if isinstance(e, App):
            f = self.synth_comp(ctx, e.fn)
            b = self.body(f)
            if not isinstance(b, Arrow):
                raise self._err(e.fn, "synth", f"{print_comp(e.fn)} is not a function; it has type {self.show(f)}", found=f)
            self._check_part(ctx, e.arg, b.arg, e)
            return b.result
        if isinstance(e, Proj):
            r = self.synth_comp(ctx, e.body)
            b = self.body(r)
            if not isinstance(b, Lazy):
                raise self._err(e.body, "synth", f"{print_comp(e.body)} is not a record; it has type {self.show(r)}", found=r)
            fields = dict(b.fields)
            if e.label not in fields:
                raise self._err(e, "synth", f"field {e.label} is not part of {self.show(r)}", found=r)
            return fields[e.label]
        if isinstance(e, Force):
            t = self.synth_value(ctx, e.value)
            b = self.body(t)
            if not isinstance(b, Down):
                raise self._err(e, "synth", f"force expects a thunk, but the value has type {self.show(t)}", found=t)
            return b.body
        if isinstance(e, DefName):
            s = self.def_types.get(e.name)
            if s is None:
                raise TypingError(e.span, "synth", f"undefined expression name {display_name(e.name)}")
            return s
        if isinstance(e, AnnoC):
            s = self.name(e.type)
            self.check_comp(ctx, e.body, s)
            return s
        raise TypingError(getattr(e, "span", None), "synth",
                          f"cannot synthesize a type for {print_comp(e)}; add an annotation")

    # -- whole signatures
    def check_definition(self, f: str) -> None:
        d = self.source.defs[f]
        try:
            self.check_comp(Context(), d.body, self.def_types[f])
        except TypingError as err:
            err.definition = f
            if err.span is None:
                err.span = d.span
            raise

    def check_all(self) -> list:
        errors = []
        for f in self.source.defs:
            try:
                self.check_definition(f)
            except TypingError as err:
                errors.append(err)
        return errors


def _label_mismatch(what: str, have, want) -> str:
    missing = [l for l in want if l not in have]
    extra = [l for l in have if l not in want]
    parts = []
    if missing:
        parts.append("missing " + ", ".join(missing))
    if extra:
        parts.append("unexpected " + ", ".join(extra))
    return f"{what} do not match the type ({'; '.join(parts)})"


def check_signature(sig: Signature) -> list:
    """All type errors of a validated signature, at most one per definition."""
    return Checker(sig).check_all()


def check_value(ctx: Context, v, ty, sig: Signature, checker: Optional[Checker] = None) -> None:
    c = checker or Checker(sig)
    c.check_value(_ctx_names(c, ctx), v, c.name(ty))


def synth_value(ctx: Context, v, sig: Signature, checker: Optional[Checker] = None) -> Name:
    c = checker or Checker(sig)
    return c.synth_value(_ctx_names(c, ctx), v)


def check_comp(ctx: Context, e, ty, sig: Signature, checker: Optional[Checker] = None) -> None:
    c = checker or Checker(sig)
    c.check_comp(_ctx_names(c, ctx), e, c.name(ty))


def synth_comp(ctx: Context, e, sig: Signature, checker: Optional[Checker] = None) -> Name:
    c = checker or Checker(sig)
    return c.synth_comp(_ctx_names(c, ctx), e)


def _ctx_names(c: Checker, ctx: Context) -> Context:
    return Context(tuple((x, c.name(t, "ctx")) for x, t in ctx))


# ---------------------------------------------------------------------------
# Declarative reference checker


class DeclarativeChecker:
    """Exhaustive search for declarative derivations, used as a test oracle.

    ``value``/``comp`` return an annotated copy of the (annotation-free) term
    that synthesizes exactly the requested type, or ``None``.
    """

    def __init__(self, state: SubtypeState, def_types: dict):
        self.state = state
        self.def_types = def_types
        self.memo: dict = {}

    def _names(self, shape):
        return [Name(n, d.polarity) for n, d in self.state.sig.types.items() if isinstance(d.body, shape)]

    def _candidates(self, shape, target: Name):
        first = [target] if isinstance(self.state.body(target), shape) else []
        return first + [c for c in self._names(shape) if c.text != target.text]

    def _wrap_v(self, v, c: Name, t: Name):
        inner = AnnoV(v, c)
        return inner if c.text == t.text else AnnoV(inner, t)

    def _wrap_c(self, e, c: Name, s: Name):
        inner = AnnoC(e, c)
        return inner if c.text == s.text else AnnoC(inner, s)

    def accepts_value(self, ctx: Context, v, t: Name) -> bool:
        return self.value(ctx, v, t) is not None

    def accepts_comp(self, ctx: Context, e, s: Name) -> bool:
        return self.comp(ctx, e, s) is not None

    def value(self, ctx: Context, v, t: Name):
        key = ("v", ctx.bindings, v, t.text)
        if key not in self.memo:
            self.memo[key] = None
            self.memo[key] = self._value(ctx, v, t)
        return self.memo[key]

    def comp(self, ctx: Context, e, s: Name):
        key = ("c", ctx.bindings, e, s.text)
        if key not in self.memo:
            self.memo[key] = None
            self.memo[key] = self._comp(ctx, e, s)
        return self.memo[key]

    def _value(self, ctx, v, t):
        sub, body = self.state.sub, self.state.body
        if isinstance(v, Var):
            x = ctx.lookup(v.name)
            return AnnoV(v, t) if x is not None and sub(x, t) else None
        if isinstance(v, AnnoV):
            return self.value(ctx, v.value, t)
        if isinstance(v, UnitVal):
            for c in self._candidates(Unit, t):
                if sub(c, t):
                    return self._wrap_v(v, c, t)
            return None
        if isinstance(v, Pair):
            for c in self._candidates(Tensor, t):
                if not sub(c, t):
                    continue
                b = body(c)
                a1 = self.value(ctx, v.left, b.left)
                a2 = a1 and self.value(ctx, v.right, b.right)
                if a1 is not None and a2 is not None:
                    return self._wrap_v(Pair(a1, a2), c, t)
            return None
        if isinstance(v, Inj):
            for c in self._candidates(Variant, t):
                br = dict(body(c).branches)
                if v.label not in br or not sub(c, t):
                    continue
                a = self.value(ctx, v.value, br[v.label])
                if a is not None:
                    return self._wrap_v(Inj(v.label, a), c, t)
            return None
        if isinstance(v, Thunk):
            for c in self._candidates(Down, t):
                if not sub(c, t):
                    continue
                a = self.comp(ctx, v.body, body(c).body)
                if a is not None:
                    return self._wrap_v(Thunk(a), c, t)
            return None
        return None

    def _comp(self, ctx, e, s):
        sub, body = self.state.sub, self.state.body
        if isinstance(e, AnnoC):
            return self.comp(ctx, e.body, s)
        if isinstance(e, DefName):
            d = self.def_types.get(e.name)
            return AnnoC(e, s) if d is not None and sub(d, s) else None
        if isinstance(e, Lam):
            for c in self._candidates(Arrow, s):
                if not sub(c, s):
                    continue
                b = body(c)
                a = self.comp(ctx.extend(e.var, b.arg), e.body, b.result)
                if a is not None:
                    return self._wrap_c(Lam(e.var, a), c, s)
            return None
        if isinstance(e, Record):
            labels = {l for l, _ in e.fields}
            for c in self._candidates(Lazy, s):
                fs = dict(body(c).fields)
                if set(fs) != labels or len(labels) != len(e.fields) or not sub(c, s):
                    continue
                parts = []
                for l, x in e.fields:
                    a = self.comp(ctx, x, fs[l])
                    if a is None:
                        break
                    parts.append((l, a))
                else:
                    return self._wrap_c(Record(tuple(parts)), c, s)
            return None
        if isinstance(e, Return):
            for c in self._candidates(Up, s):
                if not sub(c, s):
                    continue
                a = self.value(ctx, e.value, body(c).body)
                if a is not None:
                    return self._wrap_c(Return(a), c, s)
            return None
        if isinstance(e, App):
            for c in self._names(Arrow):
                b = body(c)
                if not sub(b.result, s):
                    continue
                f = self.comp(ctx, e.fn, c)
                if f is None:
                    continue
                a = self.value(ctx, e.arg, b.arg)
                if a is not None:
                    return AnnoC(App(f, a), s)
            return None
        if isinstance(e, Proj):
            for c in self._names(Lazy):
                fs = dict(body(c).fields)
                if e.label not in fs or not sub(fs[e.label], s):
                    continue
                a = self.comp(ctx, e.body, c)
                if a is not None:
                    return AnnoC(Proj(a, e.label), s)
            return None
        if isinstance(e, Force):
            for c in self._names(Down):
                if not sub(body(c).body, s):
                    continue
                a = self.value(ctx, e.value, c)
                if a is not None:
                    return AnnoC(Force(a), s)
            return None
        if isinstance(e, LetUp):
            for c in self._names(Up):
                a1 = self.comp(ctx, e.bound, c)
                if a1 is None:
                    continue
                a2 = self.comp(ctx.extend(e.var, body(c).body), e.body, s)
                if a2 is not None:
                    return AnnoC(LetUp(e.var, a1, a2), s)
            return None
        if isinstance(e, SplitPair):
            for c in self._names(Tensor):
                a = self.value(ctx, e.value, c)
                if a is None:
                    continue
                b = body(c)
                a2 = self.comp(ctx.extend(e.left, b.left).extend(e.right, b.right), e.body, s)
                if a2 is not None:
                    return AnnoC(SplitPair(a, e.left, e.right, a2), s)
            return None
        if isinstance(e, SplitUnit):
            for c in self._names(Unit):
                a = self.value(ctx, e.value, c)
                if a is None:
                    continue
                a2 = self.comp(ctx, e.body, s)
                if a2 is not None:
                    return AnnoC(SplitUnit(a, a2), s)
            return None
        if isinstance(e, Match):
            labels = [l for l, _, _ in e.branches]
            for c in self._names(Variant):
                br = dict(body(c).branches)
                if set(br) != set(labels) or len(labels) != len(set(labels)):
                    continue
                a = self.value(ctx, e.value, c)
                if a is None:
                    continue
                parts = []
                for l, x, b in e.branches:
                    ab = self.comp(ctx.extend(x, br[l]), b, s)
                    if ab is None:
                        break
                    parts.append((l, x, ab))
                else:
                    return AnnoC(Match(a, tuple(parts)), s)
            return None
        return None
