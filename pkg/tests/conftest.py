from fractions import Fraction

import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

ACCEPTANCE_LINES = []


def exact_splitting(p, n_max):
    """Coefficients of exp(X + X^p/p) from (n+1) c_{n+1} = c_n + c_{n-p+1}."""
    c = [Fraction(1)]
    for n in range(n_max):
        nxt = c[n] + (c[n - p + 1] if n - p + 1 >= 0 else 0)
        c.append(nxt / (n + 1))
    return c


def naive_count_fp(f, p):
    """Projective count over F_p by plain Python loops (no tables)."""
    import itertools

    total = 0
    for lead in range(f.n):
        for rest in itertools.product(range(p), repeat=f.n - lead - 1):
            pt = (0,) * lead + (1,) + rest
            if f.evaluate(pt, p) % p == 0:
                total += 1
    return total


@pytest.fixture
def splitting_oracle():
    return exact_splitting


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
