import numpy as np
import pytest

from todahess import build_lie_algebra, build_root_system
from todahess.invariants import invariant_generators
from todahess.mfshift import mf_family, standard_shift
from todahess.slodowy import RegularSlice


@pytest.fixture(scope="session")
def A1():
    return build_lie_algebra(build_root_system("A", 1))


@pytest.fixture(scope="session")
def A2():
    return build_lie_algebra(build_root_system("A", 2))


@pytest.fixture(scope="session")
def A3():
    return build_lie_algebra(build_root_system("A", 3))


@pytest.fixture(scope="session")
def fam2(A2):
    return invariant_generators(A2)


@pytest.fixture(scope="session")
def fam1(A1):
    return invariant_generators(A1)


@pytest.fixture(scope="session")
def sf2(fam2):
    return mf_family(fam2, standard_shift(fam2.algebra))


@pytest.fixture(scope="session")
def slice1(A1):
    return RegularSlice(A1)


@pytest.fixture(scope="session")
def slice2(A2):
    return RegularSlice(A2)


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
