import numpy as np
import pytest

from fracembed import DomainSpec, build_box_basis, load_sample


@pytest.fixture(scope="session")
def box1d():
    """16 cosine modes on (0, 1)."""
    return build_box_basis(DomainSpec(1, 15))


@pytest.fixture(scope="session")
def box1d_small():
    """8 cosine modes on (0, 1)."""
    return build_box_basis(DomainSpec(1, 7))


@pytest.fixture(scope="session")
def box2d():
    return build_box_basis(DomainSpec(2, 4))


@pytest.fixture(scope="session")
def triangle():
    return load_sample("asym_triangle")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[k])
