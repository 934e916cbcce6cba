"""Isorecursive types and terms, translated into the equirecursive core.

A recursive type ``mu a. T`` becomes a fresh name ``t`` defined as the unary
variant ``+{ fold_mu : [t/a]T }``; ``nu a. S`` becomes ``&{ fold_nu : ... }``.
A definition ``type t = mu a. T`` reuses its own name (as ``t@i``); inner
recursive types get auxiliary names ``%t@i.<n>``.  Other type definitions
are abbreviations and must not be recursive.

With ``fold=False`` the unary records are left out, giving the plain
mapping of recursive types to (possibly non-contractive) type names.
"""

from __future__ import annotations


from ..core import (
    AnnoC, AnnoV, CaseFold, Diagnostic, ExprDef, FoldMu, FoldNu, Inj, Lazy, Match, Mu, Name, NEG,
    Nu, POS, Proj, Record, Signature, TVar, TypeDef, Unfold, Variant, map_children, map_term,
    substitute, type_names, validate_signature,
)

FOLD_MU = "fold_mu"
FOLD_NU = "fold_nu"
SUFFIX = "@i"


def iso_name(name: str) -> str:
    return name + SUFFIX


def validate_iso(sig: Signature) -> list:
    """Core validation in iso mode, plus: abbreviations must not be recursive."""
    out = validate_signature(sig, iso=True)
    if out:
        return out
    abbrev = {n: d.body for n, d in sig.types.items() if not isinstance(d.body, (Mu, Nu))}
    state: dict = {}

    def visit(n, path):
        if state.get(n) == "done" or n not in abbrev:
            return
        if state.get(n) == "active":
            out.append(Diagnostic("iso-abbreviation",
                                  f"type {n} is recursive without mu/nu ({' -> '.join(path + [n])})",
                                  sig.types[n].span))
            return
        state[n] = "active"
        for m in type_names(abbrev[n]):
            visit(m.text, path + [n])
        state[n] = "done"

    for n in abbrev:
        visit(n, [])
    return out


class IsoTranslator:
    """Translates an iso signature; further types and terms can be added later."""

    def __init__(self, sig: Signature, fold: bool = True):
        self.source = sig
        self.fold = fold
        self._items: list = []
        self._inner: dict = {}
        self._counter: dict = {}
        self._pending: list = []
        for it in sig.items:
            if isinstance(it, TypeDef):
                body = self._definition(it.name, it.body)
                self._items.append(TypeDef(iso_name(it.name), body, span=it.span))
                self._flush()
        for it in sig.items:
            if isinstance(it, ExprDef):
                self._items.append(ExprDef(it.name, self.type(it.type), self.term(it.body), span=it.span))

    def _flush(self) -> None:
        self._items.extend(self._pending)
        self._pending = []

    def signature(self) -> Signature:
        return Signature(tuple(self._items))

    # -- types
    def _wrap(self, body, positive: bool):
        if not self.fold:
            return body
        return Variant(((FOLD_MU, body),)) if positive else Lazy(((FOLD_NU, body),))

    def _definition(self, name: str, body):
        if isinstance(body, (Mu, Nu)):
            me = Name(iso_name(name), POS if isinstance(body, Mu) else NEG)
            return self._wrap(self._type(body.body, {body.var: me}, iso_name(name)), isinstance(body, Mu))
        return self._type(body, {}, iso_name(name))

    def type(self, ty, base: str = "anno"):
        """Translate a closed iso type (new recursive types get fresh names)."""
        out = self._type(ty, {}, base)
        self._flush()
        return out

    def _type(self, ty, env: dict, base: str):
        if isinstance(ty, TVar):
            return env[ty.name]
        if isinstance(ty, Name):
            return Name(iso_name(ty.text), ty.polarity)
        if isinstance(ty, (Mu, Nu)):
            key = (ty, tuple(sorted((k, v.text) for k, v in env.items())))
            hit = self._inner.get(key)
            if hit is not None:
                return hit
            n = self._counter.get(base, 0) + 1
            self._counter[base] = n
            pos = isinstance(ty, Mu)
            me = Name(f"%{base}.{n}", POS if pos else NEG)
            self._inner[key] = me
            body = self._wrap(self._type(ty.body, {**env, ty.var: me}, base), pos)
            self._pending.append(TypeDef(me.text, body))
            return me
        return map_children(ty, lambda c: self._type(c, env, base))

    # -- terms
    def term(self, t):
        """Translate a value or computation."""
        fold = self.fold

        def fv(v):
            if isinstance(v, FoldMu):
                return Inj(FOLD_MU, v.value, span=v.span) if fold else v.value
            if isinstance(v, AnnoV):
                return AnnoV(v.value, self.type(v.type), span=v.span)
            return v

        def fc(e):
            if isinstance(e, CaseFold):
                if fold:
                    return Match(e.value, ((FOLD_MU, e.var, e.body),), span=e.span)
                return substitute(e.value, e.var, e.body)
            if isinstance(e, FoldNu):
                return Record(((FOLD_NU, e.body),), span=e.span) if fold else e.body
            if isinstance(e, Unfold):
                return Proj(e.body, FOLD_NU, span=e.span) if fold else e.body
            if isinstance(e, AnnoC):
                return AnnoC(e.body, self.type(e.type), span=e.span)
            return e

        return map_term(t, fv, fc)


def iso_translate(sig: Signature, fold: bool = True) -> Signature:
    """The equirecursive signature for an iso signature (not normalized)."""
    return IsoTranslator(sig, fold).signature()


def iso_translate_term(t, translator: IsoTranslator):
    return translator.term(t)
