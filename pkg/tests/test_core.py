from hypothesis import given, settings

from conftest import SEEDS, rng_for
from pcbpv import corpus
from pcbpv.core import (
    POS, AnnoC, AnnoV, Context, Inj, Lam, Name, Return, Signature, Tensor, TypeDef, Unit, UnitVal, Up, Var,
    display_name, erase_annotations, free_vars, is_normal, is_structural, normalize_signature,
    polarity_of, subst_many, substitute, subterms, type_children, validate_signature,
)
from pcbpv.generators import random_program, random_signature
from pcbpv.parser import parse_computation, parse_signature, parse_value


def rules(text):
    return [d.rule for d in validate_signature(parse_signature(text))]


# -- validation


def test_corpus_is_valid():
    for name in corpus.names():
        if name in corpus.LAMBDA or name.startswith("iso"):
            continue
        assert validate_signature(corpus.load(name)) == [], name


def test_bare_name_is_not_contractive():
    assert rules("type t = t") == ["contractive"]


def test_duplicate_labels_rejected():
    assert rules("type t = +{a : 1, a : 1}") == ["distinct-labels"]
    assert rules("type s = &{a : up 1, a : up 1}") == ["distinct-labels"]


def test_undefined_and_duplicate_names():
    assert rules("type t = +{a : u}") == ["defined-name"]
    assert rules("type t = 1\ntype t = 1") == ["unique-name"]
    assert rules("def f : up 1 = g") == ["defined-name"]


def test_polarity_mismatch_is_reported():
    assert rules("type t = 1 * (up 1)") == ["polarity"]
    assert rules("type s = up 1\ntype t = 1 * s") == ["polarity"]


def test_free_variable_in_definition():
    assert rules("def f : up 1 = return x") == ["closed-definition"]


def test_mu_needs_iso_mode():
    sig = parse_signature("type n = mu a. +{z : 1, s : a}")
    assert [d.rule for d in validate_signature(sig)] == ["iso-only"]
    assert validate_signature(sig, iso=True) == []


def test_diagnostics_carry_spans():
    (d,) = validate_signature(parse_signature("type t = 1\ntype u = +{a : v}"))
    assert d.span.start_line == 2


# -- normalization


def test_normalize_std_introduces_unit_name():
    sig = normalize_signature(corpus.load("bin"))
    std = sig.types["std"].body
    e = dict(std.branches)["e"]
    assert sig.types[e.text].body == Unit()
    assert dict(std.branches)["b0"] == Name("pos", POS)


def test_normalize_t0():
    sig = normalize_signature(parse_signature("type t0 = 1 * t0"))
    body = sig.types["t0"].body
    assert isinstance(body, Tensor) and body.right == Name("t0", POS)
    assert sig.types[body.left.text].body == Unit()


def test_normal_signature_is_fixed_point():
    sig = normalize_signature(corpus.load("streams"))
    assert normalize_signature(sig) == sig


def test_aux_names_are_internal_and_shared():
    sig = normalize_signature(parse_signature("type a = 1 * 1\ntype b = +{x : 1}"))
    aux = [n for n in sig.types if n.startswith("%")]
    assert aux == ["%a.1"]
    assert display_name(aux[0]) == "%a.1 (internal)"


@settings(max_examples=200)
@given(SEEDS)
def test_normalize_is_idempotent_and_normal(seed):
    sig = random_signature(rng_for(seed), max_names=8, depth=3)
    assert validate_signature(sig) == []
    once = normalize_signature(sig)
    assert normalize_signature(once) == once
    assert is_normal(once)
    for d in once.types.values():
        assert is_structural(d.body)
        assert all(isinstance(c, Name) for c in type_children(d.body))


def test_polarity_of():
    assert polarity_of(Unit()) == POS
    assert polarity_of(Up(Unit())) == "-"


# -- substitution and erasure


def test_substitute_examples():
    assert substitute(UnitVal(), "x", Return(Var("x"))) == Return(UnitVal())
    lam = Lam("x", Return(Var("x")))
    assert substitute(UnitVal(), "x", lam) == lam
    inc_branch = parse_computation("return 'b1 'e u")
    assert substitute(UnitVal(), "u", inc_branch) == parse_computation("return 'b1 'e ()")


def test_substitution_avoids_capture():
    # [y/x](\y. return x) must not capture the free y
    e = substitute(Var("y"), "x", Lam("y", Return(Var("x"))))
    assert isinstance(e, Lam) and e.var != "y"
    assert e.body == Return(Var("y"))


def test_simultaneous_substitution():
    e = parse_computation("return (x, y)")
    out = subst_many({"x": Var("y"), "y": UnitVal()}, e)
    assert out == parse_computation("return (y, ())")


def test_erase_annotations():
    v = AnnoV(UnitVal(), Unit())
    assert erase_annotations(v) == UnitVal()
    e = Return(Inj("a", UnitVal()))
    assert erase_annotations(e) == e
    nested = AnnoC(AnnoC(e, Up(Unit())), Up(Unit()))
    assert erase_annotations(nested) == e
    assert erase_annotations(erase_annotations(nested)) == erase_annotations(nested)


@settings(max_examples=100)
@given(SEEDS)
def test_substitution_commutes_with_erasure(seed):
    sig = random_program(rng_for(seed))
    for d in sig.defs.values():
        for t in subterms(d.body):
            fv = sorted(free_vars(t))
            if not fv:
                continue
            theta = {x: UnitVal() for x in fv}
            assert erase_annotations(subst_many(theta, t)) == subst_many(theta, erase_annotations(t))


def test_free_vars():
    assert free_vars(parse_value("(x, thunk \\y. return (y, z))")) == {"x", "z"}


def test_context_shadowing():
    ctx = Context().extend("x", Unit()).extend("x", Name("t", POS))
    assert ctx.lookup("x") == Name("t", POS)
    assert len(ctx.bindings) == 1


def test_signature_lookup_is_first_wins():
    sig = Signature((TypeDef("t", Unit()), TypeDef("t", Up(Unit()))))
    assert sig.types["t"].body == Unit()
