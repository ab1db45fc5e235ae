import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hypothesis import strategies as st

from lceval.terms import (
    App,
    Cons,
    FalseLit,
    Foldr,
    Ite,
    Lam,
    Nil,
    TrueLit,
    UnitLit,
    Var,
)


def lc1_terms(max_leaves: int = 25):
    """Hypothesis strategy for (possibly open) pure terms."""
    leaf = st.builds(Var, st.integers(0, 5))
    return st.recursive(
        leaf,
        lambda inner: st.one_of(
            st.builds(Lam, st.integers(0, 5), inner),
            st.builds(App, inner, inner),
        ),
        max_leaves=max_leaves,
    )


def lc2_terms(max_leaves: int = 25):
    """Hypothesis strategy for (possibly open) sugared terms."""
    leaf = st.one_of(
        st.builds(Var, st.integers(0, 5)),
        st.just(UnitLit()),
        st.just(TrueLit()),
        st.just(FalseLit()),
        st.just(Nil()),
    )
    return st.recursive(
        leaf,
        lambda inner: st.one_of(
            st.builds(Lam, st.integers(0, 5), inner),
            st.builds(App, inner, inner),
            st.builds(Ite, inner, inner, inner),
            st.builds(Cons, inner, inner),
            st.builds(Foldr, inner, inner, inner),
        ),
        max_leaves=max_leaves,
    )


@pytest.fixture(scope="session")
def small_corpus():
    """A deterministic 600-record default-config corpus shared across tests."""
    from lceval.generator import GenConfig
    from lceval.pipeline import generate_corpus

    records, stats = generate_corpus(GenConfig(seed=2024), 600)
    return records
