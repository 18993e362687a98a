"""Shared desk-scale fixtures."""

import numpy as np
import pytest

from gffresist import ResistiveNetwork, build_multigraph


@pytest.fixture
def single_edge():
    g = build_multigraph(["a", "b"], [("a", "b")])
    return ResistiveNetwork(g, np.array([3.0]))


@pytest.fixture
def parallel_pair():
    """Two parallel a-b edges with resistances (1, 2)."""
    g = build_multigraph(["a", "b"], [("a", "b"), ("b", "a")])
    return ResistiveNetwork(g, np.array([1.0, 2.0]))


@pytest.fixture
def series_path():
    """Unit-resistance path a-b-c."""
    g = build_multigraph(["a", "b", "c"], [("a", "b"), ("b", "c")])
    return ResistiveNetwork(g, np.array([1.0, 1.0]))


@pytest.fixture
def triangle():
    """Unit-resistance triangle; edge ids 0=(a,b), 1=(b,c), 2=(a,c)."""
    g = build_multigraph(["a", "b", "c"], [("a", "b"), ("b", "c"), ("c", "a")])
    return ResistiveNetwork(g, np.array([1.0, 1.0, 1.0]))


@pytest.fixture
def bridge():
    """Wheatstone bridge on a,b,c,d: the smallest non-series-parallel case."""
    g = build_multigraph(
        ["a", "b", "c", "d"],
        [("a", "b"), ("a", "c"), ("b", "c"), ("b", "d"), ("c", "d")])
    return ResistiveNetwork(g, np.array([1.0, 2.0, 3.0, 4.0, 5.0]))
