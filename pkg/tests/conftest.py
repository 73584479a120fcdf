import numpy as np
import pytest

# Expressions exercised by the jet/fd oracle and parser round-trip tests.
# Every entry is smooth on the box [-1, 1]^3.
CORPUS = [
    "x*y + z",
    "x^2*y",
    "exp(2*z)",
    "exp(2*eps*z)",
    "exp(2*eps*z)*(1 + 0.1*x^2)",
    "exp(2*eps*z)*(1 + x^2)",
    "sin(x)*cos(y) - tanh(z)",
    "log(2 + x*y)",
    "sqrt(3 + x + y*z)",
    "(1 + x^2)^1.5",
    "1/(2 + sin(x*z))",
    "cosh(y)^2 - sinh(y)^2 + tan(0.3*x)",
    "x^3 - 2*x*y*z + 0.5*z^3",
    "(2 + y)^(x/3)",
    "-x^2 + pi*y",
    "2^-x",
]


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def random_points(n, seed=7, lo=-1.0, hi=1.0):
    return np.random.default_rng(seed).uniform(lo, hi, size=(n, 3))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import LINES
    except ImportError:
        return
    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
