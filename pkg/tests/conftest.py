import numpy as np
import pytest

from relucalc import Network

ACCEPTANCE_LINES = []


def random_net(rng, dims, scale=1.0):
    layers = []
    for k in range(1, len(dims)):
        W = rng.normal(0.0, scale, size=(dims[k], dims[k - 1]))
        b = rng.normal(0.0, scale, size=dims[k])
        layers.append((W, b))
    return Network(layers)


def random_dims(rng, d_in=None, d_out=None, max_width=8, max_len=4):
    L = int(rng.integers(1, max_len + 1))
    dims = [int(rng.integers(1, max_width + 1)) for _ in range(L + 1)]
    if d_in is not None:
        dims[0] = d_in
    if d_out is not None:
        dims[-1] = d_out
    return dims


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture
def acceptance_line():
    def record(number, passed, detail):
        line = f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
