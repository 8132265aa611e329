import random
from fractions import Fraction

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return random.Random(20240611)


def rand_frac(rng, lo=-9, hi=9, den=6):
    return Fraction(rng.randint(lo, hi), rng.randint(1, den))
