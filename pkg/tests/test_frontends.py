import pytest
from hypothesis import given, settings

from conftest import SEEDS
from pcbpv import corpus
from pcbpv.core import (
    POS, Context, DefName, Down, Lazy, Name, Tensor, Unit, Up, Variant, validate_signature,
)
from pcbpv.dynamics import evaluate
from pcbpv.frontends import (
    CbnSubtyping, CbvSubtyping, Disagreement, cbn_full, cbn_sub, cbn_translate, cbn_type, cbv_empty,
    cbv_sub, cbv_translate, cbv_type, iso_translate, validate_iso, validate_lambda, xcheck,
)
from pcbpv.frontends.cbv import cbv_term
from pcbpv.frontends.iso import IsoTranslator
from pcbpv.parser import (
    parse_lambda_signature, parse_lambda_term, parse_signature, parse_type, parse_value, print_signature,
)
from pcbpv.semantics import Oracle
from pcbpv.subtype import SubtypeState
from pcbpv.typecheck import Checker, DeclarativeChecker, check_signature
import props

ISO_GOLDEN = """\
type nat@i = +{ fold_mu : +{ z : 1, s : nat@i } }
type even@i = +{ fold_mu : +{ z : 1, s : +{ s : even@i } } }
type std@i = +{ e : 1, b0 : 1, b1 : 1 }
type stream@i = &{ fold_nu : &{ hd : up std@i, tl : stream@i } }
"""


def lam(text):
    return parse_lambda_signature(text)


# -- isorecursive


def test_iso_corpus_validates():
    assert validate_iso(corpus.load("iso")) == []


def test_iso_type_translation_golden():
    out = print_signature(iso_translate(corpus.load("iso")))
    assert out.startswith(ISO_GOLDEN)


def test_iso_translation_typechecks():
    tr = iso_translate(corpus.load("iso"))
    assert validate_signature(tr) == []
    assert check_signature(tr) == []


def test_iso_degenerate_is_contractive():
    tr = iso_translate(corpus.load("iso_degenerate"))
    assert validate_signature(tr) == []
    assert print_signature(tr) == "type t@i = +{ fold_mu : t@i }\ntype s@i = &{ fold_nu : s@i }\n"


def test_iso_nested_binders_get_fresh_names():
    sig = parse_signature("type t = mu a. +{ l : mu b. +{ x : a, y : b } }")
    out = print_signature(iso_translate(sig))
    assert out == ("type t@i = +{ fold_mu : +{ l : %t@i.1 } }\n"
                   "type %t@i.1 = +{ fold_mu : +{ x : t@i, y : %t@i.1 } }\n")


def test_iso_rejects_bare_recursion_without_mu():
    sig = parse_signature("type t = +{ a : t }")
    assert [d.rule for d in validate_iso(sig)] == ["iso-abbreviation"]


def test_iso_free_type_variable():
    sig = parse_signature("type t = +{ a : x }")
    assert validate_iso(sig) != []


def test_iso_even_nat_with_and_without_folds():
    sig = corpus.load("iso")
    folded = SubtypeState(iso_translate(sig))
    assert not folded.sub("even@i", "nat@i")
    assert folded.sub("nat@i", "nat@i") and folded.sub("even@i", "even@i")
    plain = SubtypeState(iso_translate(sig, fold=False))
    assert plain.sub("even@i", "nat@i") and not plain.sub("nat@i", "even@i")


def test_iso_terms():
    sig = corpus.load("iso")
    tr = iso_translate(sig)
    assert evaluate(DefName("second"), tr).final == evaluate(DefName("second"), sig, iso=True).final
    t = IsoTranslator(sig)
    assert t.term(parse_value("fold 'z ()", sig)) == parse_value("'fold_mu 'z ()")


SIM_VALUES = [
    ("fold 's fold 'z ()", "nat"), ("fold 's fold 'z ()", "even"), ("fold 's 's fold 'z ()", "even"),
    ("fold 'z ()", "nat"), ("'e ()", "std"), ("'b0 ()", "std"), ("fold 's 'z ()", "nat"),
]


def test_iso_semantic_simulation():
    sig = corpus.load("iso")
    tr = iso_translate(sig)
    iso, core = Oracle(sig, depth=4, iso=True), Oracle(tr, depth=4)
    t = IsoTranslator(sig)
    exact = 0
    for k in range(16):
        for f, d in sig.defs.items():
            a, b = iso.comp(DefName(f), d.type, k), core.comp(DefName(f), tr.defs[f].type, k)
            if a.exact and b.exact:
                exact += 1
                assert a == b, (f, k)
        for v, name in SIM_VALUES:
            vv = parse_value(v, sig)
            a, b = iso.value(vv, parse_type(name, sig), k), core.value(t.term(vv), Name(name + "@i", POS), k)
            if a.exact and b.exact:
                exact += 1
                assert a == b, (v, name, k)
    assert exact > 100


# -- call-by-name


def test_cbn_type_clauses():
    assert cbn_type(Unit()) == Up(Unit())
    assert cbn_type(parse_type("+{ l : 1 }", polarized=False)) == Up(Variant((("l", Down(Up(Unit()))),)))
    assert cbn_type(Lazy(())) == Lazy(())


def test_cbn_bottom_and_full():
    sig = lam("type v = +{}\ntype a = 1 * 1\ntype f = v -> a\ntype top = &{}")
    for u in ("v", "a", "f", "top"):
        assert cbn_sub("v", u, sig)
    assert not cbn_full("f", sig)  # arrows are never full, even from an empty type
    assert cbn_full("top", sig)
    core = SubtypeState(cbn_translate(sig))
    assert not core.table.is_full("f@n")
    for u in ("v", "a", "f", "top"):
        assert core.sub("v@n", f"{u}@n")


def test_cbn_corpus():
    sig = corpus.load("cbn")
    assert validate_lambda(sig) == []
    eng = CbnSubtyping(sig)
    assert eng.sub("pos", "nat") and not eng.sub("nat", "pos")
    assert eng.sub("nstream", "stream") and eng.sub("f", "g")
    assert eng.sub("void", "nat") and eng.sub("nat", "top")
    for t in sig.types:
        assert eng.sub(t, t)
    assert xcheck(sig, "cbn") == []


def test_cbn_terms_typecheck():
    tr = cbn_translate(corpus.load("cbn"))
    assert check_signature(tr) == []


# -- call-by-value


def test_cbv_type_clauses():
    assert cbv_type(Unit()) == Unit()
    assert cbv_type(parse_type("&{ l : 1 }", polarized=False)) == Down(Lazy((("l", Up(Unit())),)))
    assert cbv_type(parse_type("1 * 1", polarized=False)) == Tensor(Unit(), Unit())


def test_cbv_rules():
    sig = corpus.load("cbv")
    eng = CbvSubtyping(sig)
    assert eng.empty("zero") and eng.empty("never") and not eng.empty("opt")
    assert eng.sub("opt", "only") and eng.sub("only", "opt")  # the none branch is empty
    assert not eng.sub("one", "fn")  # no rule relates 1 to an arrow
    assert eng.sub("rec", "top") and eng.sub("fn", "top")
    assert eng.sub("never", "bool")
    assert xcheck(sig, "cbv") == []


def test_cbv_top_arrow_rules():
    sig = lam("type zero = +{}\ntype f = 1 -> 1\ntype g = zero -> 1\ntype r = &{ a : 1 }")
    assert cbv_sub("f", "g", sig)
    assert cbv_sub("r", "g", sig)
    assert not cbv_sub("g", "f", sig)
    assert xcheck(sig, "cbv") == []


def test_barrier_case():
    sig = lam("type zero = +{}\ntype one = 1\ntype fn = zero -> one")
    assert not cbv_sub("one", "fn", sig)
    core = SubtypeState(cbv_translate(sig))
    assert not core.sub("one@v", "fn@v")
    assert cbv_empty("zero", sig) and core.table.is_empty("zero@v")


def test_cbv_terms_check_declaratively():
    tr = cbv_translate(corpus.load("cbv"))
    c = Checker(tr)
    d = DeclarativeChecker(c.state, c.def_types)
    for f, df in tr.defs.items():
        annotated = d.comp(Context(), df.body, c.def_types[f])
        assert annotated is not None, f
        c.check_comp(Context(), annotated, c.def_types[f])


def test_cbv_terms_do_not_check_bidirectionally_as_is():
    tr = cbv_translate(corpus.load("cbv"))
    assert [e.definition for e in check_signature(tr)] == ["apply", "again"]


def test_cbv_application_uses_fresh_names():
    from pcbpv.core import LetUp, free_vars, subterms

    e = cbv_term(parse_lambda_term("\\x0. \\f0. f0 x0"))
    assert free_vars(e) == frozenset()
    bound = {t.var for t in subterms(e) if isinstance(t, LetUp)}
    assert len(bound) == 2 and not bound & {"x0", "f0"}


def test_disagreement_rendering():
    d = Disagreement("sub", "a", "b", True, False)
    assert str(d) == "a ≤ b: source says yes, translation says no"
    assert str(Disagreement("empty", "a", None, False, True)) == "a empty: source says no, translation says yes"


def test_untranslated_constructs():
    from pcbpv.frontends.cbn import cbn_term

    with pytest.raises(TypeError, match="untranslated"):
        cbn_term(object())


def test_lambda_validation():
    assert validate_lambda(lam("type t = t")) != []
    assert validate_lambda(lam("type t = up 1")) != []


@settings(max_examples=150)
@given(SEEDS)
def test_cbn_differential(seed):
    props.check_xcheck(seed, "cbn")


@settings(max_examples=150)
@given(SEEDS)
def test_cbv_differential(seed):
    props.check_xcheck(seed, "cbv")


def test_generator_covers_record_versus_empty_record():
    import random
    from pcbpv.generators import random_lambda_signature

    hits = 0
    for seed in range(200):
        sig = random_lambda_signature(random.Random(seed))
        bodies = {n: d.body for n, d in sig.types.items()}
        if any(isinstance(b, Lazy) and not b.fields for b in bodies.values()) and \
                any(isinstance(b, Lazy) and b.fields for b in bodies.values()):
            hits += 1
    assert hits >= 10
