import pytest
from hypothesis import given, settings

from conftest import SEEDS
from pcbpv import corpus
from pcbpv.core import Context, DefName
from pcbpv.dynamics import Terminated, erase_signature, evaluate
from pcbpv.parser import parse_computation, parse_signature, parse_type, parse_value, print_value
from pcbpv.semantics import (
    HOLDS, REFUTED, Oracle, Verdict, enumerate_values, sem_comp, sem_subst, sem_terminal, sem_value,
)
from pcbpv.typecheck import check_signature
import props


@pytest.fixture(scope="module")
def bin_oracle():
    return Oracle(corpus.load("bin"), depth=4)


def ty(text, sig):
    return parse_type(text, sig)


def test_verdict_rendering():
    assert str(Verdict(HOLDS, True)) == "holds (exact)"
    assert str(Verdict(REFUTED, False)) == "refuted (approx)"


def test_enumerate_std():
    sig = corpus.load("bin")
    e = enumerate_values(ty("std", sig), sig, 3)
    assert sorted(print_value(v) for v in e.values) == sorted(["'e ()", "'b1 'e ()", "'b0 'b1 'e ()", "'b1 'b1 'e ()"])
    assert not e.sampled and e.truncated


def test_enumerate_unit_and_empty():
    sig = corpus.load("empty")
    assert [print_value(v) for v in enumerate_values(ty("1", sig), sig, 1).values] == ["()"]
    e = enumerate_values(ty("t0", sig), sig, 10)
    assert e.values == () and e.complete


def test_enumerate_thunks_are_sampled():
    sig = corpus.load("omega")
    e = enumerate_values(ty("down U", sig), sig, 2)
    assert e.sampled and len(e.values) >= 2  # the loop and at least one user definition


def test_value_clauses(bin_oracle):
    sig = corpus.load("bin")
    assert str(bin_oracle.value(parse_value("()"), ty("1", sig), 3)) == "holds (exact)"
    assert str(bin_oracle.value(parse_value("'b0 'b1 'b1 'e ()"), ty("pos", sig), 10)) == "holds (exact)"
    assert bin_oracle.value(parse_value("'e ()"), ty("pos", sig), 10).refuted
    empty = corpus.load("empty")
    assert str(sem_value(parse_value("()"), ty("t0", empty), 4, empty)) == "refuted (exact)"


def test_index_zero_always_holds():
    sig = corpus.load("bin")
    for text in ("return ()", "dec", "(return ()).l"):
        assert str(sem_comp(parse_computation(text), ty("up 1", sig), 0, sig)) == "holds (exact)"


def test_stuck_is_refuted():
    sig = corpus.load("bin")
    assert str(sem_comp(parse_computation("(return ()).l", sig), ty("up 1", sig), 3, sig)) == "refuted (exact)"


@pytest.mark.parametrize("sigma", ["U", "up 1", "1 -> up 1", "&{}", "down U -> U"])
def test_omega_inhabits_everything(sigma):
    sig = parse_signature(corpus.text("omega") + "\n")
    oracle = Oracle(sig, depth=3)
    omega = sig.defs["Omega"].body
    for k in (0, 1, 5, 13, 25):
        v = oracle.comp(omega, ty(sigma, sig), k)
        assert v.holds and v.exact, (sigma, k, v)


def test_identity_function():
    sig = parse_signature(corpus.text("bin") + corpus.text("bool"))
    oracle = Oracle(sig, depth=4)
    ident = parse_computation("\\x. return x")
    for t in ("1", "bool"):
        for k in range(0, 21, 4):
            assert str(oracle.comp(ident, ty(f"{t} -> up {t}", sig), k)) == "holds (exact)"
    assert oracle.comp(ident, ty("std -> up std", sig), 12).holds


def test_right_recursion():
    sig = corpus.load("empty")
    v = sem_comp(DefName("e0"), ty("s0", sig), 15, sig)
    assert str(v) == "holds (exact)"


def test_terminal_clauses():
    sig = corpus.load("empty")
    assert str(sem_terminal(parse_computation("return ()"), ty("up 1", sig), 2, sig)) == "holds (exact)"
    assert str(sem_terminal(parse_computation("{}"), ty("&{}", sig), 2, sig)) == "holds (exact)"
    lam = parse_computation("\\x. return x")
    assert str(sem_terminal(lam, ty("&{ l : up 1 }", sig), 2, sig)) == "refuted (exact)"


@pytest.mark.parametrize("text", ["{}", "\\x. return x", "return ()", "e0"])
@pytest.mark.parametrize("sigma", ["up 1", "&{ l : up 1 }", "s0"])
def test_vacuous_arrow_from_empty_type(text, sigma):
    sig = corpus.load("empty")
    e = parse_computation(f"\\y. {text}", sig)
    v = sem_comp(e, ty(f"t0 -> {sigma}", sig), 9, sig)
    assert str(v) == "holds (exact)"


def test_substitutions():
    sig = corpus.load("bin")
    assert sem_subst({}, Context(), 3, sig).holds
    c = Context((("x", ty("std", sig)),))
    assert str(sem_subst({"x": parse_value("'e ()")}, c, 5, sig)) == "holds (exact)"
    empty = corpus.load("empty")
    c0 = Context((("x", ty("t0", empty)),))
    assert sem_subst({"x": parse_value("()")}, c0, 5, empty).refuted


def test_inc_is_approximate_dec_refuted(bin_oracle):
    sig = corpus.load("bin")
    inc = bin_oracle.comp(DefName("inc"), ty("std -> up pos", sig), 8)
    assert inc.holds and not inc.exact
    wrong = bin_oracle.comp(DefName("dec"), ty("std -> up std", sig), 8)
    assert str(wrong) == "refuted (exact)"


@pytest.mark.parametrize("name", ["bin", "streams", "omega", "empty"])
def test_checked_corpus_never_refuted(name):
    sig = corpus.load(name)
    assert check_signature(sig) == []
    oracle = Oracle(sig, depth=4)
    for f, d in sig.defs.items():
        for k in (1, 4, 8, 12, 16, 20):
            assert not oracle.comp(DefName(f), d.type, k).refuted, (f, k)


def test_returned_corpus_values_hold():
    sig = corpus.load("bin")
    oracle = Oracle(sig)
    run = erase_signature(sig)
    for f in ("six", "seven"):
        r = evaluate(DefName(f), run)
        assert isinstance(r, Terminated)
        for k in range(21):
            assert str(oracle.value(r.final.value, ty("pos", sig), k)) == "holds (exact)"


@pytest.mark.parametrize("name,entries", [
    ("bin", [("seven", None), ("inc", None), ("dec", None)]),
    ("omega", [("Omega", "up 1"), ("Omega", "U"), ("f", None)]),
    ("empty", [("e0", None), ("id", None)]),
    ("streams", [("compress", None)]),
])
def test_closure_along_traces(name, entries):
    sig = corpus.load(name)
    oracle = Oracle(sig, depth=3)
    for f, t in entries:
        target = ty(t, sig) if t else sig.defs[f].type
        assert props.check_trace_closure(sig, DefName(f), target, 12, oracle, steps=12) > 0


def test_arrow_modes_agree():
    for name, entries in [("bin", ["inc", "dec"]), ("empty", ["e0", "id"]), ("omega", ["omega"])]:
        sig = corpus.load(name)
        lit, short = Oracle(sig, depth=3, arrow_mode="literal"), Oracle(sig, depth=3)
        for f in entries:
            for k in range(0, 9):
                assert lit.comp(DefName(f), sig.defs[f].type, k) == short.comp(DefName(f), sig.defs[f].type, k)


def test_unknown_arrow_mode():
    with pytest.raises(ValueError):
        Oracle(corpus.load("bin"), arrow_mode="lazy")


@settings(max_examples=100)
@given(SEEDS)
def test_generated_programs_never_refuted(seed):
    props.check_oracle_on_program(seed)
