import functools

import numpy as np
import pytest

from tvo.fusion import builtin_system
from tvo.tube import build_tube, center, modular_data_from_tube

VEC_SPECS = [f"vec:{n}:{k}" for n in range(1, 6) for k in range(n)]
NONPOINTED = ["fibonacci", "ising", "ty:3:1:1", "ty:3:1:-1"]
ALL_SPECS = ["trivial"] + NONPOINTED + VEC_SPECS
# a lighter selection for the slower property tests
CORE_SPECS = ["trivial", "vec:2:0", "vec:3:1", "vec:4:2", "fibonacci", "ising", "ty:3:1:-1"]

ACCEPTANCE_LINES = []


@functools.lru_cache(maxsize=None)
def system(spec):
    return builtin_system(spec)


@functools.lru_cache(maxsize=None)
def pipeline(spec, seed=0):
    """``(fs, tube, center, modular data)`` for a built-in, cached across tests."""
    fs = system(spec)
    t = build_tube(fs)
    c = center(t, seed=seed)
    md = modular_data_from_tube(t, c)
    return fs, t, c, md


def fib_modular():
    phi = (1 + 5 ** 0.5) / 2
    S = np.array([[1, phi], [phi, -1]]) / np.sqrt(2 + phi)
    t = np.array([1, np.exp(4j * np.pi / 5)])
    return S, t


def ising_modular():
    r2 = 2 ** 0.5
    S = np.array([[1, r2, 1], [r2, 0, -r2], [1, -r2, 1]]) / 2
    t = np.array([1, np.exp(2j * np.pi / 16), -1])
    return S, t


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
