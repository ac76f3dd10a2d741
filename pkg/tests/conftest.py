import numpy as np
import pytest

from roisolve.optics import OtfSpec, build_psf

# Small well-conditioned configuration used across the unit tests: a 48x48
# field with a cutoff-10 disk keeps 3x3 systems around condition 1e4 and its
# 3x3 kernel window strictly positive, so recoveries are numerically clean.
SMALL_FIELD = (48, 48)
SMALL_CUTOFF = 10.0
SMALL_CROP = 47


@pytest.fixture(scope="session")
def small_spec():
    return OtfSpec(*SMALL_FIELD, SMALL_CUTOFF)


@pytest.fixture(scope="session")
def small_psf(small_spec):
    return build_psf(small_spec, SMALL_CROP)


@pytest.fixture()
def rng():
    return np.random.default_rng(20240811)
