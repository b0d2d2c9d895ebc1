import functools

import pytest

from birkhoff import coorient as co
from birkhoff.surface_map import grid_map, shipped_map


@functools.lru_cache(maxsize=None)
def bundled(name):
    return shipped_map(name)


@functools.lru_cache(maxsize=None)
def eulerian(name):
    return tuple(co.enumerate_eulerian(bundled(name)))


@functools.lru_cache(maxsize=None)
def acyclic(name):
    m = bundled(name)
    return tuple(e for e in eulerian(name) if co.is_acyclic(m, e))


@functools.lru_cache(maxsize=None)
def grid(p, q):
    return grid_map(p, q)


@pytest.fixture(scope="session")
def T1():
    return bundled("T1")


@pytest.fixture(scope="session")
def T6():
    return bundled("T6")


@pytest.fixture(scope="session")
def G2():
    return bundled("G2")
