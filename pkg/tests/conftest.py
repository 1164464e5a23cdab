"""Shared fixtures and generators for random networks."""
from __future__ import annotations

import random
import re
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from tinopt.netmodel import NetworkSpec, example_spec
from tinopt.region import Inequality


@pytest.fixture
def example():
    return example_spec()


def tenths(lo: int = 0, hi: int = 30):
    return st.integers(lo, hi).map(lambda n: Fraction(n, 10))


@st.composite
def specs(draw, users=(1, 3), states=(1, 3), pi_one=False):
    K = draw(st.integers(*users))
    M = draw(st.integers(*states))
    alpha = [[[draw(tenths()) for _ in range(K)] for _ in range(K)] for _ in range(M)]
    if pi_one:
        pi = [[1] * M for _ in range(K)]
    else:
        pi = [[draw(st.integers(1, M)) for _ in range(M)] for _ in range(K)]
    return NetworkSpec.build(alpha, pi)


def random_spec(rng: random.Random, K: int, M: int, tin_optimal: bool = False) -> NetworkSpec:
    """Exponents on a 0.1 grid in [0, 2]; ``tin_optimal`` lifts every direct
    link just enough to satisfy the condition."""
    alpha = [[[Fraction(rng.randint(0, 20), 10) for _ in range(K)] for _ in range(K)] for _ in range(M)]
    if tin_optimal and K > 1:
        caused = [max(alpha[m][j][k] for j in range(K) if j != k for m in range(M)) for k in range(K)]
        for m in range(M):
            for k in range(K):
                received = max(alpha[m][k][i] for i in range(K) if i != k)
                alpha[m][k][k] = max(alpha[m][k][k], caused[k] + received + Fraction(rng.randint(0, 3), 10))
    pi = [[rng.randint(1, M) for _ in range(M)] for _ in range(K)]
    return NetworkSpec.build(alpha, pi)


_TERM = re.compile(r"^(Δ?)d_(\d+)$")


def bound(text: str) -> Inequality:
    """``"d_2 + d_3 + Δd_2 <= 1.9"`` as an inequality; ``Δd_k`` is order 2 of user k."""
    lhs_text, rhs_text = text.split("<=")
    caps: dict[int, int] = {}
    for term in lhs_text.split("+"):
        delta, user = _TERM.match(term.strip()).groups()
        k = int(user) - 1
        caps[k] = max(caps.get(k, 0), 2 if delta else 1)
    return Inequality(tuple(sorted(caps.items())), Fraction(rhs_text.strip()))


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
