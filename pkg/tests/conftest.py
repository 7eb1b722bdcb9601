import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from rsdkit.preferences import PreferenceRelation, Profile, parse_profile  # noqa: E402
from rsdkit.theorem import load_fixture  # noqa: E402

ABCD = ("a", "b", "c", "d")


@pytest.fixture
def example():
    return load_fixture("example")


def prof(*lines, universe=ABCD):
    """Profile from relation texts, agents numbered from 1."""
    return parse_profile("".join(f"agent {i}: {t}\n" for i, t in enumerate(lines, 1)), universe)


@st.composite
def relations(draw, universe=ABCD):
    order = draw(st.permutations(list(universe)))
    cuts = draw(st.lists(st.booleans(), min_size=len(universe) - 1, max_size=len(universe) - 1))
    classes, cur = [], [order[0]]
    for x, cut in zip(order[1:], cuts):
        if cut:
            classes.append(tuple(cur))
            cur = []
        cur.append(x)
    classes.append(tuple(cur))
    return PreferenceRelation(tuple(universe), tuple(classes))


@st.composite
def profiles(draw, universe=ABCD, min_agents=1, max_agents=4):
    n = draw(st.integers(min_agents, max_agents))
    return Profile.from_relations([draw(relations(universe)) for _ in range(n)])


@st.composite
def lotteries(draw, universe=ABCD, denominator=12):
    from rsdkit.lotteries import Lottery

    weights = draw(st.lists(st.integers(0, denominator), min_size=len(universe), max_size=len(universe)))
    if sum(weights) == 0:
        weights[0] = 1
    total = sum(weights)
    from fractions import Fraction

    return Lottery(tuple(universe), tuple(Fraction(w, total) for w in weights))
