import random

from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import lc1_terms, lc2_terms
from oracles import alpha_eq_oracle, substitute_oracle, to_debruijn
from lceval.syntax import parse1, parse2, print1
from lceval.terms import (
    FalseLit,
    Lam,
    TrueLit,
    Var,
    alpha_eq,
    free_vars,
    is_lc1,
    max_index,
    substitute,
)


def test_free_vars_closed_identity():
    assert free_vars(parse1(r"\x0 -> x0")) == frozenset()


def test_free_vars_bare_variable():
    assert free_vars(Var(3)) == frozenset({3})


def test_free_vars_one_bound_one_free():
    assert free_vars(parse1(r"\x0 -> x0 x1")) == frozenset({1})


def test_substitute_var_hit():
    assert substitute(Var(0), 0, parse1(r"\x1 -> x1")) == parse1(r"\x1 -> x1")


def test_substitute_shadowed_binder_untouched():
    t = parse2(r"\x0 -> x0")
    assert substitute(t, 0, TrueLit()) == t


def test_substitute_capture_renames():
    # x1 is free in the replacement, so the binder moves past every index in scope
    got = substitute(parse1(r"\x1 -> x0 x1"), 0, Var(1))
    assert print1(got) == r"\x2 -> x1 x2"
    assert to_debruijn(got) == substitute_oracle(parse1(r"\x1 -> x0 x1"), 0, Var(1))


@given(t=lc1_terms(), v=st.integers(0, 5), s=lc1_terms(max_leaves=8))
@settings(max_examples=200)
def test_substitute_matches_oracle(t, v, s):
    assert to_debruijn(substitute(t, v, s)) == substitute_oracle(t, v, s)


@given(t=lc2_terms(), v=st.integers(0, 5), s=lc2_terms(max_leaves=8))
@settings(max_examples=200)
def test_substitute_free_var_law(t, v, s):
    got = free_vars(substitute(t, v, s))
    want = free_vars(t) - {v} | (free_vars(s) if v in free_vars(t) else frozenset())
    assert got == want


def test_alpha_eq_renamed_identity():
    assert alpha_eq(parse1(r"\x0 -> x0"), parse1(r"\x7 -> x7"))


def test_alpha_eq_distinguishes_binders():
    assert not alpha_eq(parse1(r"\x0 -> \x1 -> x0"), parse1(r"\x0 -> \x1 -> x1"))


def test_alpha_eq_shifted_golden_row():
    t = parse1(r"\x0 -> \x1 -> \x2 -> \x3 -> \x4 -> x4")
    shifted = parse1(r"\x10 -> \x11 -> \x12 -> \x13 -> \x14 -> x14")
    assert alpha_eq(t, shifted)


@given(t=lc1_terms(), u=lc1_terms())
@settings(max_examples=200)
def test_alpha_eq_matches_debruijn_oracle(t, u):
    assert alpha_eq(t, u) == alpha_eq_oracle(t, u)


@given(t=lc2_terms())
def test_alpha_eq_reflexive(t):
    assert alpha_eq(t, t)


def test_alpha_eq_equivalence_sample():
    rng = random.Random(5)
    pool = [parse1(r"\x0 -> x0"), parse1(r"\x3 -> x3"), parse1(r"\x0 -> \x1 -> x0 x1"),
            parse1(r"\x1 -> \x0 -> x1 x0"), Var(2)]
    for a in pool:
        for b in pool:
            for c in pool:
                if alpha_eq(a, b) and alpha_eq(b, c):
                    assert alpha_eq(a, c)
                assert alpha_eq(a, b) == alpha_eq(b, a)


def test_is_lc1():
    assert is_lc1(parse1(r"(\x0 -> x0) x1"))
    assert not is_lc1(parse2(r"ite True () ()"))


def test_max_index_counts_binders_and_uses():
    assert max_index(parse1(r"\x9 -> x2")) == 9
    assert max_index(FalseLit()) == -1
