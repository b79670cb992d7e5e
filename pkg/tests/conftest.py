import random

import pytest
from hypothesis import strategies as st

from topoglue import cover, fintop
from topoglue.fixtures import arc3, c4, disc2, pt, sierp, sq9


@pytest.fixture
def spaces():
    return {
        "PT": pt(),
        "SIERP": sierp(),
        "DISC2": disc2(),
        "ARC3": arc3(),
        "SQ9": sq9(),
        "C4": c4(),
    }


@st.composite
def small_spaces(draw, max_points=5):
    n = draw(st.integers(min_value=1, max_value=max_points))
    points = [f"p{i}" for i in range(n)]
    gens = draw(
        st.lists(
            st.sets(st.sampled_from(points), min_size=0, max_size=n),
            min_size=0,
            max_size=6,
        )
    )
    return fintop.from_opens("S", points, gens)


def random_lawful_data(rng: random.Random, max_patches=3, max_points=4):
    """A random valid gluing datum, built as the canonical data of a covering."""
    base = cover.random_space(rng, max_points=max_points, space_id="B")
    points = sorted(base.points)
    k = rng.randint(1, max_patches)
    subsets = [
        set(rng.sample(points, rng.randint(1, len(points)))) for _ in range(k)
    ]
    leftover = set(points) - set().union(*subsets)
    subsets[-1] |= leftover
    family = []
    for s in subsets:
        sp, incl = fintop.subspace(base, s)
        family.append((sp, incl))
    return cover.data_of_covering(cover.Covering(base, family, "gluing"))
