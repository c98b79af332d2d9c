from fractions import Fraction

import numpy as np
import pytest
from hypothesis import strategies as st

from asymdir.charges import random_configuration, validate


@pytest.fixture
def single():
    return validate([(1, 0, 0)])


@pytest.fixture
def dipole():
    return validate([(1, 1, 0), (-1, -1, 0)])


def rng_configs(n, seed, M_max=4, **kw):
    """n reproducible random configurations."""
    out = []
    for k in range(n):
        rng = np.random.default_rng([seed, k])
        out.append(random_configuration(rng, int(rng.integers(1, M_max + 1)), **kw))
    return out


def rng_configs_with_L(n, seed, M_max=3):
    """Random configurations whose moment order is drawn from 0..M-1."""
    out = []
    for k in range(n):
        rng = np.random.default_rng([seed, k])
        M = int(rng.integers(1, M_max + 1))
        out.append(random_configuration(rng, M, target_L=int(rng.integers(0, M))))
    return out


small_fraction = st.builds(Fraction, st.integers(-8, 8), st.integers(1, 4))
nonzero_fraction = small_fraction.filter(lambda q: q != 0)


@st.composite
def configurations(draw, max_M=3):
    M = draw(st.integers(1, max_M))
    pts = draw(st.lists(st.tuples(small_fraction, small_fraction), min_size=M, max_size=M, unique=True))
    amps = draw(st.lists(nonzero_fraction, min_size=M, max_size=M))
    return validate([(a, x, y) for a, (x, y) in zip(amps, pts)])
