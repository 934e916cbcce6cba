"""Seeded random generators for signatures and programs.

Everything here takes an explicit ``random.Random`` so that a seed fully
determines the output.
"""

from __future__ import annotations

import random
from typing import Optional

from .core import (
    NEG, POS, AnnoC, AnnoV, App, Arrow, CaseFold, Context, DefName, Down, ExprDef, FoldMu, FoldNu,
    Force, Inj, LamDef, Lam, Lazy, LApp, LetUp, LLam, LName, LVar, Match, Mu, Name, Nu, Pair,
    Proj, Record, Return, Signature, SplitPair, SplitUnit, Tensor, Thunk, TVar, TypeDef, Unfold,
    Unit, UnitVal, Up, Var, Variant,
)
from .inhabit import with_loops
from .subtype import SubtypeState

LABELS = ("a", "b", "c", "d")


def _labels(rng: random.Random, lo: int = 0, hi: int = 3) -> list:
    return rng.sample(LABELS, rng.randint(lo, hi))


# ---------------------------------------------------------------------------
# Polarized type signatures


def random_type(rng: random.Random, pol: str, names: dict, depth: int,
                positive_only: bool = False, structural: bool = False):
    """A random type of polarity ``pol``; ``names`` maps polarity to usable names."""
    pool = names.get(pol, [])
    if not structural and pool and (depth <= 0 or rng.random() < 0.4):
        return Name(rng.choice(pool), pol)
    if depth <= 0:
        if pol == POS:
            return Unit() if positive_only or rng.random() < 0.7 else Variant(())
        return rng.choice([Lazy(()), Up(Unit())])
    d = depth - 1
    if pol == POS:
        forms = ["unit", "tensor", "variant", "variant"] + ([] if positive_only else ["down"])
        form = rng.choice(forms)
        if form == "unit":
            return Unit()
        if form == "tensor":
            return Tensor(random_type(rng, POS, names, d, positive_only),
                          random_type(rng, POS, names, d, positive_only))
        if form == "variant":
            return Variant(tuple((l, random_type(rng, POS, names, d, positive_only)) for l in _labels(rng)))
        return Down(random_type(rng, NEG, names, d))
    form = rng.choice(["arrow", "lazy", "up"])
    if form == "arrow":
        return Arrow(random_type(rng, POS, names, d), random_type(rng, NEG, names, d))
    if form == "lazy":
        return Lazy(tuple((l, random_type(rng, NEG, names, d)) for l in _labels(rng)))
    return Up(random_type(rng, POS, names, d))


def random_signature(rng: random.Random, max_names: int = 6, depth: int = 2,
                     positive_only: bool = False) -> Signature:
    """A valid (contractive, polarity-consistent) signature of type definitions."""
    n = rng.randint(1, max_names)
    pols = [POS if positive_only or rng.random() < 0.55 else NEG for _ in range(n)]
    names = {POS: [], NEG: []}
    for i, p in enumerate(pols):
        names[p].append(f"t{i}")
    items = []
    for i, p in enumerate(pols):
        body = random_type(rng, p, names, rng.randint(1, depth), positive_only, structural=True)
        items.append(TypeDef(f"t{i}", body))
    return Signature(tuple(items))


# ---------------------------------------------------------------------------
# Unpolarized (call-by-name/value) signatures


def random_lambda_type(rng: random.Random, names: list, depth: int, structural: bool = False):
    if not structural and names and (depth <= 0 or rng.random() < 0.4):
        return Name(rng.choice(names), None)
    if depth <= 0:
        return rng.choice([Unit(), Variant(()), Lazy(())])
    d = depth - 1
    form = rng.choice(["arrow", "tensor", "unit", "variant", "lazy"])
    if form == "arrow":
        return Arrow(random_lambda_type(rng, names, d), random_lambda_type(rng, names, d))
    if form == "tensor":
        return Tensor(random_lambda_type(rng, names, d), random_lambda_type(rng, names, d))
    if form == "unit":
        return Unit()
    if form == "variant":
        return Variant(tuple((l, random_lambda_type(rng, names, d)) for l in _labels(rng)))
    return Lazy(tuple((l, random_lambda_type(rng, names, d)) for l in _labels(rng)))


def random_lambda_signature(rng: random.Random, max_names: int = 8, depth: int = 3) -> Signature:
    """A call-by-name/value signature: fan-out at most 3, labels from a-d."""
    n = rng.randint(1, max_names)
    names = [f"t{i}" for i in range(n)]
    items = [TypeDef(x, random_lambda_type(rng, names, rng.randint(1, depth), structural=True)) for x in names]
    return Signature(tuple(items))


# ---------------------------------------------------------------------------
# Syntactic terms (for printing and parsing)


class _Syntax:
    def __init__(self, rng: random.Random, types: dict, defs: list, iso: bool):
        self.rng = rng
        self.types = types
        self.defs = defs
        self.iso = iso
        self.n = 0

    def fresh(self) -> str:
        self.n += 1
        return f"x{self.n}"

    def type_(self, pol: str):
        return random_type(self.rng, pol, self.types, 2)

    def value(self, scope: list, d: int):
        rng = self.rng
        if d <= 0 or rng.random() < 0.2:
            return Var(rng.choice(scope)) if scope and rng.random() < 0.7 else UnitVal()
        k = rng.choice(["pair", "inj", "thunk", "anno", "var"] + (["fold"] if self.iso else []))
        if k == "pair":
            return Pair(self.value(scope, d - 1), self.value(scope, d - 1))
        if k == "inj":
            return Inj(rng.choice(LABELS), self.value(scope, d - 1))
        if k == "thunk":
            return Thunk(self.comp(scope, d - 1))
        if k == "anno":
            return AnnoV(self.value(scope, d - 1), self.type_(POS))
        if k == "fold":
            return FoldMu(self.value(scope, d - 1))
        return Var(rng.choice(scope)) if scope else UnitVal()

    def comp(self, scope: list, d: int):
        rng = self.rng
        if d <= 0:
            if self.defs and rng.random() < 0.5:
                return DefName(rng.choice(self.defs))
            return Return(self.value(scope, 0))
        kinds = ["lam", "app", "record", "proj", "return", "let", "def", "split", "unit", "match",
                 "force", "anno"] + (["foldnu", "unfold", "casefold"] if self.iso else [])
        k = rng.choice(kinds)
        d1 = d - 1
        if k == "lam":
            x = self.fresh()
            return Lam(x, self.comp(scope + [x], d1))
        if k == "app":
            return App(self.comp(scope, d1), self.value(scope, d1))
        if k == "record":
            return Record(tuple((l, self.comp(scope, d1)) for l in _labels(rng)))
        if k == "proj":
            return Proj(self.comp(scope, d1), rng.choice(LABELS))
        if k == "return":
            return Return(self.value(scope, d1))
        if k == "let":
            x = self.fresh()
            return LetUp(x, self.comp(scope, d1), self.comp(scope + [x], d1))
        if k == "def" and self.defs:
            return DefName(rng.choice(self.defs))
        if k == "split":
            x, y = self.fresh(), self.fresh()
            return SplitPair(self.value(scope, d1), x, y, self.comp(scope + [x, y], d1))
        if k == "unit":
            return SplitUnit(self.value(scope, d1), self.comp(scope, d1))
        if k == "match":
            branches = []
            for l in _labels(rng, 1, 3):
                x = self.fresh()
                branches.append((l, x, self.comp(scope + [x], d1)))
            return Match(self.value(scope, d1), tuple(branches))
        if k == "force":
            return Force(self.value(scope, d1))
        if k == "anno":
            return AnnoC(self.comp(scope, d1), self.type_(NEG))
        if k == "foldnu":
            return FoldNu(self.comp(scope, d1))
        if k == "unfold":
            return Unfold(self.comp(scope, d1))
        if k == "casefold":
            x = self.fresh()
            return CaseFold(x, self.value(scope, d1), self.comp(scope + [x], d1))
        return Return(self.value(scope, d1))


def _random_iso_body(rng: random.Random, names: dict, var: str):
    inner = dict(names)
    inner[POS] = []
    body = random_type(rng, POS, inner, 2, positive_only=True, structural=True)
    if isinstance(body, Variant) and body.branches:
        l, _ = body.branches[0]
        body = Variant(((l, TVar(var, POS)),) + body.branches[1:])
    return Mu(var, body)


def random_syntax_signature(rng: random.Random, iso: bool = False) -> Signature:
    """A signature exercising every syntactic form; not necessarily well typed."""
    sig = random_signature(rng, max_names=5, depth=3)
    items = list(sig.items)
    names = {POS: [], NEG: []}
    for it in items:
        names[it.polarity].append(it.name)
    if iso:
        items.append(TypeDef("r0", _random_iso_body(rng, names, "a")))
        items.append(TypeDef("r1", Nu("b", Lazy((("hd", Up(Unit())), ("tl", TVar("b", NEG)))))))
    defs = [f"f{i}" for i in range(rng.randint(0, 3))]
    gen = _Syntax(rng, names, defs, iso)
    for f in defs:
        items.append(ExprDef(f, random_type(rng, NEG, names, 2), gen.comp([], rng.randint(1, 4))))
    return Signature(tuple(items))


def random_lambda_term(rng: random.Random, scope: list, defs: list, depth: int):
    if depth <= 0 or rng.random() < 0.25:
        if scope and (not defs or rng.random() < 0.6):
            return LVar(rng.choice(scope))
        if defs:
            return LName(rng.choice(defs))
        x = f"y{len(scope)}"
        return LLam(x, LVar(x))
    if rng.random() < 0.5:
        x = f"y{len(scope)}"
        return LLam(x, random_lambda_term(rng, scope + [x], defs, depth - 1))
    return LApp(random_lambda_term(rng, scope, defs, depth - 1), random_lambda_term(rng, scope, defs, depth - 1))


def random_lambda_syntax_signature(rng: random.Random) -> Signature:
    sig = random_lambda_signature(rng, max_names=4, depth=2)
    names = [it.name for it in sig.items]
    defs = [f"f{i}" for i in range(rng.randint(0, 3))]
    items = list(sig.items)
    for f in defs:
        items.append(LamDef(f, random_lambda_type(rng, names, 2), random_lambda_term(rng, [], defs, 4)))
    return Signature(tuple(items))


# ---------------------------------------------------------------------------
# Well-typed programs


class ProgramGenerator:
    """Type-directed generation of terms accepted by the bidirectional checker.

    Works over a normalized signature extended with one diverging loop
    definition per negative name, so every negative type has a closed
    inhabitant to fall back on.
    """

    def __init__(self, sig: Signature, rng: random.Random, def_types: Optional[dict] = None):
        self.rng = rng
        self.state = SubtypeState(sig)
        table = self.state.table
        self.sig = with_loops(self.state.sig, table)
        self.def_types = {d.name: Name(d.type.text, NEG) for d in table.loop_defs}
        for f, ty in (def_types or {}).items():
            self.def_types[f] = ty
        self.n = 0

    def fresh(self) -> str:
        self.n += 1
        return f"x{self.n}"

    def body(self, n: Name):
        return self.state.body(n)

    def sub(self, a: Name, b: Name) -> bool:
        return self.state.sub(a, b)

    def value(self, ctx: Context, t: Name, fuel: int):
        """A value checking against ``t``, or None when ``t`` is empty and nothing applies."""
        rng = self.rng
        vars_ = [x for x, u in ctx if self.sub(u, t)]
        if vars_ and rng.random() < 0.3:
            return Var(rng.choice(vars_))
        table = self.state.table
        if table.is_empty(t.text):
            return Var(rng.choice(vars_)) if vars_ else None
        b = self.body(t)
        if fuel <= 0:
            return table.witness(t.text)
        if isinstance(b, Unit):
            return UnitVal()
        if isinstance(b, Tensor):
            return Pair(self.value(ctx, b.left, fuel - 1), self.value(ctx, b.right, fuel - 1))
        if isinstance(b, Variant):
            ok = [(l, c) for l, c in b.branches if not table.is_empty(c.text)]
            l, c = rng.choice(ok)
            return Inj(l, self.value(ctx, c, fuel - 1))
        if isinstance(b, Down):
            return Thunk(self.comp(ctx, b.body, fuel - 1))
        raise TypeError(f"unexpected positive body {b!r}")

    def comp(self, ctx: Context, s: Name, fuel: int):
        rng = self.rng
        b = self.body(s)
        options = ["intro"] * 3 + ["synth"] * 2 + ["elim"] * 2
        if fuel <= 0:
            options = ["synth"]
        for _ in range(4):
            kind = rng.choice(options)
            e = None
            if kind == "intro":
                e = self._intro(ctx, s, b, fuel)
            elif kind == "elim":
                e = self._elim(ctx, s, fuel)
            else:
                e = self._synth_into(ctx, s, fuel)
            if e is not None:
                return e
        return DefName(self.state.table.loop_for(s.text))

    def _intro(self, ctx, s, b, fuel):
        if isinstance(b, Arrow):
            x = self.fresh()
            return Lam(x, self.comp(ctx.extend(x, b.arg), b.result, fuel - 1))
        if isinstance(b, Lazy):
            return Record(tuple((l, self.comp(ctx, r, fuel - 1)) for l, r in b.fields))
        if isinstance(b, Up):
            v = self.value(ctx, b.body, fuel - 1)
            return None if v is None else Return(v)
        return None

    def _elim(self, ctx, s, fuel):
        rng = self.rng
        cands = []
        for x, t in ctx:
            tb = self.body(t)
            if isinstance(tb, (Tensor, Unit, Variant)):
                cands.append((x, t, tb))
        choice = rng.random()
        if cands and choice < 0.7:
            x, t, tb = rng.choice(cands)
            if isinstance(tb, Tensor):
                y, z = self.fresh(), self.fresh()
                inner = ctx.extend(y, tb.left).extend(z, tb.right)
                return SplitPair(Var(x), y, z, self.comp(inner, s, fuel - 1))
            if isinstance(tb, Unit):
                return SplitUnit(Var(x), self.comp(ctx, s, fuel - 1))
            branches = []
            for l, c in tb.branches:
                y = self.fresh()
                branches.append((l, y, self.comp(ctx.extend(y, c), s, fuel - 1)))
            return Match(Var(x), tuple(branches))
        got = self._synth(ctx, fuel - 1, want_up=True)
        if got is None:
            return None
        e1, r = got
        y = self.fresh()
        return LetUp(y, e1, self.comp(ctx.extend(y, self.body(r).body), s, fuel - 1))

    def _synth_into(self, ctx, s, fuel):
        for _ in range(3):
            got = self._synth(ctx, fuel - 1)
            if got is not None and self.sub(got[1], s):
                return got[0]
        fits = [f for f, ty in self.def_types.items() if self.sub(ty, s)]
        return DefName(self.rng.choice(fits)) if fits else None

    def _synth(self, ctx, fuel, want_up: bool = False):
        """A synthesizing computation and its type, built from a head plus eliminations."""
        rng = self.rng
        heads = [(DefName(f), ty) for f, ty in self.def_types.items()]
        for x, t in ctx:
            tb = self.body(t)
            if isinstance(tb, Down):
                heads.append((Force(Var(x)), tb.body))
        e, ty = rng.choice(heads)
        for _ in range(rng.randint(0, 2)):
            tb = self.body(ty)
            if want_up and isinstance(tb, Up):
                break
            if isinstance(tb, Arrow):
                v = self.value(ctx, tb.arg, max(fuel, 0))
                if v is None:
                    break
                e, ty = App(e, v), tb.result
            elif isinstance(tb, Lazy) and tb.fields:
                l, r = rng.choice(tb.fields)
                e, ty = Proj(e, l), r
            else:
                break
        if rng.random() < 0.1:
            e = AnnoC(e, ty)
        if want_up and not isinstance(self.body(ty), Up):
            return None
        return e, ty


def random_program(rng: random.Random, max_names: int = 5, n_defs: int = 3, fuel: int = 4) -> Signature:
    """A random normalized signature with well-typed (mutually recursive) definitions."""
    base = random_signature(rng, max_names=max_names)
    if not any(it.polarity == NEG for it in base.items):
        base = base.extend([TypeDef("r", Up(Name(base.items[0].name, POS)))])
    probe = SubtypeState(base)
    negs = [Name(n, NEG) for n, d in probe.sig.types.items() if d.polarity == NEG]
    decls = {f"f{i}": rng.choice(negs) for i in range(n_defs)}
    gen = ProgramGenerator(base, rng, decls)
    defs = [ExprDef(f, ty, gen.comp(Context(), ty, fuel)) for f, ty in decls.items()]
    return gen.sig.extend(defs)
