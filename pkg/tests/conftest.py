import itertools
import random

import pytest
from hypothesis import strategies as st

from verikit.perm_core import pid, pmul


def closure(gens, n):
    """Brute-force group closure by breadth-first multiplication."""
    seen = {pid(n)}
    frontier = [pid(n)]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = pmul(g, x)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def perms(n):
    return st.permutations(list(range(n))).map(tuple)


@st.composite
def small_generating_sets(draw, max_degree=6, max_gens=3):
    n = draw(st.integers(2, max_degree))
    k = draw(st.integers(1, max_gens))
    return n, [draw(perms(n)) for _ in range(k)]


@pytest.fixture
def rng():
    return random.Random(12345)


def all_perms(n):
    return [tuple(p) for p in itertools.permutations(range(n))]
