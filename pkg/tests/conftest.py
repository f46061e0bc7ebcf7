import numpy as np
import pytest

from omega_nij import io
from omega_nij.algebra import trivial_monoid, truncated_poly
from omega_nij.cochains import NFContext
from omega_nij.derived import regular_nf_bimodule
from omega_nij.field import QQ
from omega_nij.generators import left_zero_semigroup, two_element_monoid

CORPUS = io.corpus_names()


def poly_ctx(D, k, S=None, variant="star"):
    A, N = truncated_poly(D, k, S)
    S = S or trivial_monoid()
    return NFContext(S, A, N, regular_nf_bimodule(A, S, N), nf_variant=variant)


def rand_vec(rng, n, lo=-3, hi=3):
    return QQ.array(rng.integers(lo, hi + 1, size=n).astype(object))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def S2():
    return two_element_monoid()


@pytest.fixture(scope="session")
def LZ():
    return left_zero_semigroup()


@pytest.fixture(scope="session")
def corpus():
    return {name: io.load_corpus(name) for name in CORPUS}


# --------------------------------------------------------------------------
# acceptance summary lines

ACCEPTANCE_LINES = []


def record(criterion: int, variant: str, ok: bool, detail: str) -> bool:
    line = f"CRITERION {criterion} [{variant}]: {'PASS' if ok else 'FAIL'} {detail}"
    ACCEPTANCE_LINES.append((criterion, variant, line))
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, _, line in sorted(ACCEPTANCE_LINES, key=lambda t: (t[0], t[1])):
        terminalreporter.write_line(line)
