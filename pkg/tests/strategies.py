"""Shared hypothesis strategies."""

from hypothesis import strategies as st

from rrealize.ordinal import Ordinal, ord_of
from rrealize.ordset import OrdSet
from rrealize.setcode import universe

V3 = universe(3)


def small_ordinals(max_exp: int = 3, max_coeff: int = 5):
    """Ordinals below omega^(max_exp+1) in Cantor normal form."""
    def build(coeffs):
        terms = [(ord_of(e), c) for e, c in sorted(enumerate(coeffs), reverse=True) if c]
        return Ordinal(terms)
    return st.lists(st.integers(0, max_coeff), min_size=1, max_size=max_exp + 1).map(build)


def ordsets(max_size: int = 8):
    return st.lists(small_ordinals(2, 4), max_size=max_size).map(OrdSet)


def finite_ordsets(bound: int = 40, max_size: int = 8):
    return st.lists(st.integers(0, bound), max_size=max_size).map(OrdSet)


hf_sets = st.recursive(st.just(frozenset()), lambda inner: st.frozensets(inner, max_size=3), max_leaves=8)
rank3 = st.sampled_from(V3)
