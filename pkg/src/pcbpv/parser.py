"""Concrete syntax: a recursive-descent parser and its pretty-printer.

The grammar is documented in ``docs/language.md``.  Types are parsed without
polarity information first; a second pass assigns polarities to type names
from their definitions and turns ``mu``/``nu``-bound names into variables.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .core import (
    NEG, POS, AnnoC, AnnoV, App, Arrow, CaseFold, DefName, Down, ExprDef, FoldMu, FoldNu, Force,
    Inj, Lam, LamDef, LApp, Lazy, LetUp, LLam, LName, LVar, Match, Mu, Name, Nu, Pair, Proj,
    Record, Return, Signature, SourceSpan, SplitPair, SplitUnit, Tensor, Thunk, TVar, TypeDef,
    Unfold, Unit, UnitVal, Up, Var, Variant, map_children, map_term,
)

GRAMMAR_VERSION = "1"

KEYWORDS = frozenset(
    "type def up down return let in match split as force thunk fold unfold mu nu".split()
)


class ParseError(Exception):
    def __init__(self, span: SourceSpan, message: str, expected=()):
        self.span = span
        self.message = message
        self.expected = list(expected)
        super().__init__(str(self))

    def __str__(self) -> str:
        exp = f" (expected {', '.join(self.expected)})" if self.expected else ""
        return f"{self.span}: parse error: {self.message}{exp}"


@dataclass
class Token:
    kind: str  # ident, internal, label, kw, num, sym, eof
    text: str
    span: SourceSpan


_IDENT = r"[A-Za-z_][A-Za-z0-9_'@]*"
_TOKEN_RE = re.compile(
    rf"""
    (?P<ws>[ \t\r\n]+)
  | (?P<internal>%{_IDENT}(?:\.[0-9]+)+)
  | (?P<comment>%[^\n]*)
  | (?P<label>'{_IDENT})
  | (?P<ident>{_IDENT})
  | (?P<num>[0-9]+)
  | (?P<sym>->|=>|[*+&{{}}(),:=|.\\])
    """,
    re.VERBOSE,
)


def tokenize(text: str, file: str = "<input>") -> list:
    toks = []
    pos, line, col = 0, 1, 1
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            sp = SourceSpan(file, line, col, line, col + 1)
            raise ParseError(sp, f"unexpected character {text[pos]!r}")
        kind = m.lastgroup
        s = m.group()
        end_line, end_col = line, col
        for ch in s:
            if ch == "\n":
                end_line += 1
                end_col = 1
            else:
                end_col += 1
        if kind not in ("ws", "comment"):
            if kind == "ident" and s in KEYWORDS:
                kind = "kw"
            toks.append(Token(kind, s, SourceSpan(file, line, col, end_line, end_col)))
        pos = m.end()
        line, col = end_line, end_col
    toks.append(Token("eof", "", SourceSpan(file, line, col, line, col)))
    return toks


def _join(a: SourceSpan, b: SourceSpan) -> SourceSpan:
    return SourceSpan(a.file, a.start_line, a.start_col, b.end_line, b.end_col)


def _describe(tok: Token) -> str:
    return "end of input" if tok.kind == "eof" else repr(tok.text)


class _Parser:
    def __init__(self, text: str, file: str):
        self.toks = tokenize(text, file)
        self.i = 0
        self.last = self.toks[0]

    # -- token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def advance(self) -> Token:
        t = self.toks[self.i]
        if t.kind != "eof":
            self.i += 1
        self.last = t
        return t

    def at(self, kind: str, text: Optional[str] = None) -> bool:
        t = self.tok
        return t.kind == kind and (text is None or t.text == text)

    def at_sym(self, s: str) -> bool:
        return self.at("sym", s)

    def at_kw(self, s: str) -> bool:
        return self.at("kw", s)

    def error(self, message: str, expected=()):
        raise ParseError(self.tok.span, message, expected)

    def expect_sym(self, s: str) -> Token:
        if not self.at_sym(s):
            self.error(f"unexpected {_describe(self.tok)}", [repr(s)])
        return self.advance()

    def expect_kw(self, s: str) -> Token:
        if not self.at_kw(s):
            self.error(f"unexpected {_describe(self.tok)}", [repr(s)])
        return self.advance()

    def ident(self, what: str = "identifier") -> Token:
        if not self.at("ident"):
            self.error(f"unexpected {_describe(self.tok)}", [what])
        return self.advance()

    def name(self, what: str = "name") -> Token:
        if not (self.at("ident") or self.at("internal")):
            self.error(f"unexpected {_describe(self.tok)}", [what])
        return self.advance()

    def label_name(self) -> Token:
        # bare label, as in types and records; keywords allowed
        if not (self.at("ident") or self.at("kw")):
            self.error(f"unexpected {_describe(self.tok)}", ["label"])
        return self.advance()

    def span_from(self, start: Token) -> SourceSpan:
        return _join(start.span, self.last.span)

    # -- signatures
    def signature(self, lambda_terms: bool = False) -> list:
        items = []
        while not self.at("eof"):
            start = self.tok
            if self.at_kw("type"):
                self.advance()
                n = self.name("type name")
                self.expect_sym("=")
                body = self.type_()
                items.append(TypeDef(n.text, body, span=self.span_from(start)))
            elif self.at_kw("def"):
                self.advance()
                n = self.name("definition name")
                self.expect_sym(":")
                ty = self.type_()
                self.expect_sym("=")
                if lambda_terms:
                    body = self.lterm()
                    items.append(LamDef(n.text, ty, body, span=self.span_from(start)))
                else:
                    body = self.comp()
                    items.append(ExprDef(n.text, ty, body, span=self.span_from(start)))
            else:
                self.error(f"unexpected {_describe(self.tok)}", ["'type'", "'def'"])
        return items

    # -- types
    def type_(self):
        start = self.tok
        if self.at_kw("mu") or self.at_kw("nu"):
            kw = self.advance().text
            var = self.ident("type variable").text
            self.expect_sym(".")
            body = self.type_()
            cls = Mu if kw == "mu" else Nu
            return cls(var, body, span=self.span_from(start))
        left = self.prod()
        if self.at_sym("->"):
            self.advance()
            right = self.type_()
            return Arrow(left, right, span=self.span_from(start))
        return left

    def prod(self):
        start = self.tok
        left = self.prefix()
        while self.at_sym("*"):
            self.advance()
            right = self.prefix()
            left = Tensor(left, right, span=self.span_from(start))
        return left

    def prefix(self):
        start = self.tok
        if self.at_kw("down"):
            self.advance()
            return Down(self.prefix(), span=self.span_from(start))
        if self.at_kw("up"):
            self.advance()
            return Up(self.prefix(), span=self.span_from(start))
        return self.type_atom()

    def type_atom(self):
        start = self.tok
        if self.at("num"):
            if self.tok.text != "1":
                self.error(f"unexpected number {self.tok.text}", ["'1'"])
            self.advance()
            return Unit(span=start.span)
        if self.at("ident") or self.at("internal"):
            self.advance()
            return Name(start.text, None, span=start.span)
        if self.at_sym("+") or self.at_sym("&"):
            sym = self.advance().text
            self.expect_sym("{")
            entries = []
            if not self.at_sym("}"):
                while True:
                    l = self.label_name().text
                    self.expect_sym(":")
                    entries.append((l, self.type_()))
                    if self.at_sym(","):
                        self.advance()
                        continue
                    break
            self.expect_sym("}")
            cls = Variant if sym == "+" else Lazy
            return cls(tuple(entries), span=self.span_from(start))
        if self.at_sym("("):
            self.advance()
            t = self.type_()
            self.expect_sym(")")
            return t
        if self.at_kw("mu") or self.at_kw("nu"):
            return self.type_()
        self.error(f"unexpected {_describe(self.tok)}", ["type"])

    # -- values
    def value(self):
        start = self.tok
        if self.at_kw("thunk"):
            self.advance()
            body = self.comp()
            return Thunk(body, span=self.span_from(start))
        if self.at_kw("fold"):
            self.advance()
            v = self.value()
            return FoldMu(v, span=self.span_from(start))
        if self.at("label"):
            self.advance()
            v = self.value()
            return Inj(start.text[1:], v, span=self.span_from(start))
        return self.value_atom()

    def value_atom(self):
        start = self.tok
        if self.at("ident"):
            self.advance()
            return Var(start.text, span=start.span)
        if self.at_sym("("):
            self.advance()
            if self.at_sym(")"):
                self.advance()
                return UnitVal(span=self.span_from(start))
            v = self.value()
            if self.at_sym(","):
                self.advance()
                w = self.value()
                self.expect_sym(")")
                return Pair(v, w, span=self.span_from(start))
            if self.at_sym(":"):
                self.advance()
                t = self.type_()
                self.expect_sym(")")
                return AnnoV(v, t, span=self.span_from(start))
            self.expect_sym(")")
            return v
        self.error(f"unexpected {_describe(self.tok)}", ["value"])

    def starts_arg(self) -> bool:
        t = self.tok
        return (t.kind in ("ident", "label") or (t.kind == "sym" and t.text == "(")
                or (t.kind == "kw" and t.text in ("thunk", "fold")))

    # -- computations
    def comp(self):
        start = self.tok
        if self.at_sym("\\"):
            self.advance()
            x = self.ident("variable").text
            self.expect_sym(".")
            body = self.comp()
            return Lam(x, body, span=self.span_from(start))
        if self.at_kw("let"):
            self.advance()
            x = self.ident("variable").text
            self.expect_sym("=")
            e1 = self.comp()
            self.expect_kw("in")
            e2 = self.comp()
            return LetUp(x, e1, e2, span=self.span_from(start))
        if self.at_kw("split"):
            self.advance()
            v = self.value()
            self.expect_kw("as")
            self.expect_sym("(")
            if self.at_sym(")"):
                self.advance()
                self.expect_kw("in")
                e = self.comp()
                return SplitUnit(v, e, span=self.span_from(start))
            x = self.ident("variable").text
            self.expect_sym(",")
            y = self.ident("variable").text
            self.expect_sym(")")
            self.expect_kw("in")
            e = self.comp()
            return SplitPair(v, x, y, e, span=self.span_from(start))
        if self.at_kw("match"):
            return self.match()
        if self.at_kw("return"):
            self.advance()
            v = self.value()
            return Return(v, span=self.span_from(start))
        if self.at_kw("fold"):
            self.advance()
            e = self.comp()
            return FoldNu(e, span=self.span_from(start))
        if self.at_kw("unfold"):
            self.advance()
            e = self.comp()
            return Unfold(e, span=self.span_from(start))
        return self.app()

    def match(self):
        start = self.advance()
        v = self.value()
        self.expect_sym("{")
        if self.at_kw("fold"):
            self.advance()
            x = self.ident("variable").text
            self.expect_sym("=>")
            e = self.comp()
            self.expect_sym("}")
            return CaseFold(x, v, e, span=self.span_from(start))
        branches = []
        if self.at_sym("|"):
            self.advance()
        if not self.at_sym("}"):
            while True:
                if not self.at("label"):
                    self.error(f"unexpected {_describe(self.tok)}", ["label"])
                l = self.advance().text[1:]
                x = self.ident("variable").text
                self.expect_sym("=>")
                e = self.comp()
                branches.append((l, x, e))
                if self.at_sym("|"):
                    self.advance()
                    continue
                break
        self.expect_sym("}")
        return Match(v, tuple(branches), span=self.span_from(start))

    def app(self):
        start = self.tok
        e = self.postfix()
        while self.starts_arg():
            v = self.value()
            e = App(e, v, span=self.span_from(start))
        return e

    def postfix(self):
        start = self.tok
        e = self.comp_atom()
        while self.at_sym("."):
            self.advance()
            l = self.label_name().text
            e = Proj(e, l, span=self.span_from(start))
        return e

    def comp_atom(self):
        start = self.tok
        if self.at("ident") or self.at("internal"):
            self.advance()
            return DefName(start.text, span=start.span)
        if self.at_kw("force"):
            self.advance()
            v = self.value()
            return Force(v, span=self.span_from(start))
        if self.at_sym("{"):
            self.advance()
            fields = []
            if not self.at_sym("}"):
                while True:
                    l = self.label_name().text
                    self.expect_sym("=")
                    fields.append((l, self.comp()))
                    if self.at_sym(","):
                        self.advance()
                        continue
                    break
            self.expect_sym("}")
            return Record(tuple(fields), span=self.span_from(start))
        if self.at_sym("("):
            self.advance()
            e = self.comp()
            if self.at_sym(":"):
                self.advance()
                t = self.type_()
                self.expect_sym(")")
                return AnnoC(e, t, span=self.span_from(start))
            self.expect_sym(")")
            return e
        self.error(f"unexpected {_describe(self.tok)}", ["computation"])

    # -- untyped lambda terms
    def lterm(self):
        start = self.tok
        if self.at_sym("\\"):
            self.advance()
            x = self.ident("variable").text
            self.expect_sym(".")
            body = self.lterm()
            return LLam(x, body, span=self.span_from(start))
        t = self.latom()
        while self.at("ident") or self.at_sym("("):
            a = self.latom()
            t = LApp(t, a, span=self.span_from(start))
        return t

    def latom(self):
        start = self.tok
        if self.at("ident"):
            self.advance()
            return LVar(start.text, span=start.span)
        if self.at_sym("("):
            self.advance()
            t = self.lterm()
            self.expect_sym(")")
            return t
        self.error(f"unexpected {_describe(self.tok)}", ["term"])

    def finish(self):
        if not self.at("eof"):
            self.error(f"unexpected {_describe(self.tok)}", ["end of input"])


# ---------------------------------------------------------------------------
# Polarity assignment


def _head(ty) -> Optional[str]:
    if isinstance(ty, (Tensor, Unit, Variant, Down, Mu)):
        return POS
    if isinstance(ty, (Arrow, Lazy, Up, Nu)):
        return NEG
    return None


def definition_polarities(items) -> dict:
    """Polarity of each type definition, following bare-name bodies."""
    bodies = {}
    for it in items:
        if isinstance(it, TypeDef):
            bodies.setdefault(it.name, it.body)
    out = {}
    for name in bodies:
        seen, cur = set(), name
        pol = None
        while cur in bodies and cur not in seen:
            seen.add(cur)
            b = bodies[cur]
            pol = _head(b)
            if pol is not None or not isinstance(b, Name):
                break
            cur = b.text
        out[name] = pol if pol is not None else POS
    return out


def polarize_type(ty, pols: dict, want: Optional[str] = None, bound: Optional[dict] = None):
    """Assign polarities to names; names bound by mu/nu become type variables."""
    bound = bound or {}
    if isinstance(ty, Name):
        if ty.text in bound:
            return TVar(ty.text, bound[ty.text], span=ty.span)
        return Name(ty.text, pols.get(ty.text, want or POS), span=ty.span)
    if isinstance(ty, TVar):
        return ty
    if isinstance(ty, Unit):
        return ty
    if isinstance(ty, Tensor):
        return Tensor(polarize_type(ty.left, pols, POS, bound), polarize_type(ty.right, pols, POS, bound), span=ty.span)
    if isinstance(ty, Variant):
        return Variant(tuple((l, polarize_type(t, pols, POS, bound)) for l, t in ty.branches), span=ty.span)
    if isinstance(ty, Down):
        return Down(polarize_type(ty.body, pols, NEG, bound), span=ty.span)
    if isinstance(ty, Arrow):
        return Arrow(polarize_type(ty.arg, pols, POS, bound), polarize_type(ty.result, pols, NEG, bound), span=ty.span)
    if isinstance(ty, Lazy):
        return Lazy(tuple((l, polarize_type(t, pols, NEG, bound)) for l, t in ty.fields), span=ty.span)
    if isinstance(ty, Up):
        return Up(polarize_type(ty.body, pols, POS, bound), span=ty.span)
    if isinstance(ty, Mu):
        return Mu(ty.var, polarize_type(ty.body, pols, POS, {**bound, ty.var: POS}), span=ty.span)
    if isinstance(ty, Nu):
        return Nu(ty.var, polarize_type(ty.body, pols, NEG, {**bound, ty.var: NEG}), span=ty.span)
    raise TypeError(f"not a type: {ty!r}")


def _polarize_term(t, pols: dict):
    def fv(v):
        if isinstance(v, AnnoV):
            return AnnoV(v.value, polarize_type(v.type, pols, POS), span=v.span)
        return v

    def fc(e):
        if isinstance(e, AnnoC):
            return AnnoC(e.body, polarize_type(e.type, pols, NEG), span=e.span)
        return e

    return map_term(t, fv, fc)


def _unpolarized(ty):
    if isinstance(ty, Name):
        return ty
    return map_children(ty, _unpolarized)


def _resolve_lambda(t, defs, bound=frozenset()):
    if isinstance(t, LVar):
        return LName(t.name, span=t.span) if t.name not in bound and t.name in defs else t
    if isinstance(t, LLam):
        return LLam(t.var, _resolve_lambda(t.body, defs, bound | {t.var}), span=t.span)
    if isinstance(t, LApp):
        return LApp(_resolve_lambda(t.fn, defs, bound), _resolve_lambda(t.arg, defs, bound), span=t.span)
    return t


# ---------------------------------------------------------------------------
# Entry points


def parse_signature(text: str, file: str = "<input>") -> Signature:
    """Parse a call-by-push-value signature (iso constructs included)."""
    p = _Parser(text, file)
    items = p.signature()
    p.finish()
    pols = definition_polarities(items)
    out = []
    for it in items:
        if isinstance(it, TypeDef):
            out.append(TypeDef(it.name, polarize_type(it.body, pols, pols.get(it.name)), span=it.span))
        else:
            out.append(ExprDef(it.name, polarize_type(it.type, pols, NEG), _polarize_term(it.body, pols), span=it.span))
    return Signature(tuple(out))


def parse_lambda_signature(text: str, file: str = "<input>") -> Signature:
    """Parse an unpolarized signature for the call-by-name/value front ends."""
    p = _Parser(text, file)
    items = p.signature(lambda_terms=True)
    p.finish()
    defs = {it.name for it in items if isinstance(it, LamDef)}
    out = []
    for it in items:
        if isinstance(it, LamDef):
            out.append(LamDef(it.name, it.type, _resolve_lambda(it.body, defs), span=it.span))
        else:
            out.append(it)
    return Signature(tuple(out))


def parse_type(text: str, sig: Optional[Signature] = None, polarity: Optional[str] = None,
               file: str = "<input>", polarized: bool = True):
    p = _Parser(text, file)
    t = p.type_()
    p.finish()
    if not polarized:
        return t
    pols = definition_polarities(sig.items) if sig is not None else {}
    return polarize_type(t, pols, polarity)


def parse_value(text: str, sig: Optional[Signature] = None, file: str = "<input>"):
    p = _Parser(text, file)
    v = p.value()
    p.finish()
    pols = definition_polarities(sig.items) if sig is not None else {}
    return _polarize_term(v, pols)


def parse_computation(text: str, sig: Optional[Signature] = None, file: str = "<input>"):
    p = _Parser(text, file)
    e = p.comp()
    p.finish()
    pols = definition_polarities(sig.items) if sig is not None else {}
    return _polarize_term(e, pols)


def parse_lambda_term(text: str, sig: Optional[Signature] = None, file: str = "<input>"):
    p = _Parser(text, file)
    t = p.lterm()
    p.finish()
    defs = set(sig.defs) if sig is not None else set()
    return _resolve_lambda(t, defs)


# ---------------------------------------------------------------------------
# Printing

_T_ARROW, _T_PROD, _T_PREFIX, _T_ATOM = range(4)


def print_type(ty, prec: int = 0) -> str:
    def paren(s: str, mine: int) -> str:
        return f"({s})" if mine < prec else s

    if isinstance(ty, (Name, TVar)):
        return ty.text if isinstance(ty, Name) else ty.name
    if isinstance(ty, Unit):
        return "1"
    if isinstance(ty, Variant):
        if not ty.branches:
            return "+{}"
        return "+{ " + ", ".join(f"{l} : {print_type(t)}" for l, t in ty.branches) + " }"
    if isinstance(ty, Lazy):
        if not ty.fields:
            return "&{}"
        return "&{ " + ", ".join(f"{l} : {print_type(t)}" for l, t in ty.fields) + " }"
    if isinstance(ty, Down):
        return paren("down " + print_type(ty.body, _T_PREFIX), _T_PREFIX)
    if isinstance(ty, Up):
        return paren("up " + print_type(ty.body, _T_PREFIX), _T_PREFIX)
    if isinstance(ty, Tensor):
        return paren(f"{print_type(ty.left, _T_PROD)} * {print_type(ty.right, _T_PREFIX)}", _T_PROD)
    if isinstance(ty, Arrow):
        return paren(f"{print_type(ty.arg, _T_PROD)} -> {print_type(ty.result, _T_ARROW)}", _T_ARROW)
    if isinstance(ty, (Mu, Nu)):
        kw = "mu" if isinstance(ty, Mu) else "nu"
        s = f"{kw} {ty.var}. {print_type(ty.body, _T_ARROW)}"
        return f"({s})" if prec > _T_ARROW else s
    raise TypeError(f"not a type: {ty!r}")


_V_FULL, _V_ATOM = 0, 1
_C_LOW, _C_APP, _C_POST, _C_ATOM = range(4)


def print_value(v, prec: int = _V_FULL) -> str:
    if isinstance(v, Var):
        return v.name
    if isinstance(v, UnitVal):
        return "()"
    if isinstance(v, Pair):
        return f"({print_value(v.left)}, {print_value(v.right)})"
    if isinstance(v, AnnoV):
        return f"({print_value(v.value)} : {print_type(v.type)})"
    if isinstance(v, Inj):
        s = f"'{v.label} {print_value(v.value)}"
    elif isinstance(v, Thunk):
        s = f"thunk {print_comp(v.body)}"
    elif isinstance(v, FoldMu):
        s = f"fold {print_value(v.value)}"
    else:
        raise TypeError(f"not a value: {v!r}")
    return f"({s})" if prec > _V_FULL else s


def print_comp(e, prec: int = _C_LOW) -> str:
    def paren(s: str, mine: int) -> str:
        return f"({s})" if mine < prec else s

    if isinstance(e, DefName):
        return e.name
    if isinstance(e, Force):
        return f"force {print_value(e.value, _V_ATOM)}"
    if isinstance(e, Record):
        if not e.fields:
            return "{}"
        return "{ " + ", ".join(f"{l} = {print_comp(c)}" for l, c in e.fields) + " }"
    if isinstance(e, AnnoC):
        return f"({print_comp(e.body)} : {print_type(e.type)})"
    if isinstance(e, Proj):
        return paren(f"{print_comp(e.body, _C_POST)}.{e.label}", _C_POST)
    if isinstance(e, App):
        return paren(f"{print_comp(e.fn, _C_APP)} {print_value(e.arg, _V_ATOM)}", _C_APP)
    if isinstance(e, Lam):
        s = f"\\{e.var}. {print_comp(e.body)}"
    elif isinstance(e, LetUp):
        s = f"let {e.var} = {print_comp(e.bound)} in {print_comp(e.body)}"
    elif isinstance(e, SplitPair):
        s = f"split {print_value(e.value)} as ({e.left}, {e.right}) in {print_comp(e.body)}"
    elif isinstance(e, SplitUnit):
        s = f"split {print_value(e.value)} as () in {print_comp(e.body)}"
    elif isinstance(e, Match):
        if e.branches:
            bs = " | ".join(f"'{l} {x} => {print_comp(b)}" for l, x, b in e.branches)
            s = f"match {print_value(e.value)} {{ {bs} }}"
        else:
            s = f"match {print_value(e.value)} {{}}"
    elif isinstance(e, CaseFold):
        s = f"match {print_value(e.value)} {{ fold {e.var} => {print_comp(e.body)} }}"
    elif isinstance(e, Return):
        s = f"return {print_value(e.value)}"
    elif isinstance(e, FoldNu):
        s = f"fold {print_comp(e.body)}"
    elif isinstance(e, Unfold):
        s = f"unfold {print_comp(e.body)}"
    else:
        raise TypeError(f"not a computation: {e!r}")
    return paren(s, _C_LOW)


def print_term(t) -> str:
    from .core import is_value
    return print_value(t) if is_value(t) else print_comp(t)


def print_lambda(t, prec: int = 0) -> str:
    if isinstance(t, (LVar, LName)):
        return t.name
    if isinstance(t, LLam):
        s = f"\\{t.var}. {print_lambda(t.body)}"
        return f"({s})" if prec > 0 else s
    if isinstance(t, LApp):
        s = f"{print_lambda(t.fn, 1)} {print_lambda(t.arg, 2)}"
        return f"({s})" if prec > 1 else s
    raise TypeError(f"not a lambda term: {t!r}")


def print_item(it) -> str:
    if isinstance(it, TypeDef):
        return f"type {it.name} = {print_type(it.body)}"
    if isinstance(it, ExprDef):
        return f"def {it.name} : {print_type(it.type)} = {print_comp(it.body)}"
    if isinstance(it, LamDef):
        return f"def {it.name} : {print_type(it.type)} = {print_lambda(it.body)}"
    raise TypeError(f"not a signature item: {it!r}")


def print_signature(sig: Signature) -> str:
    return "".join(print_item(it) + "\n" for it in sig.items)
