from fractions import Fraction

import pytest

from stldist.ingest import load_corpus
from stldist.parser import parse_formula

THETA1 = "(x1 >= 0.2 & x1 <= 0.4)"
THETA2 = "(x1 >= 0.2 & x1 <= 0.44)"

SUITE_TEXT = {
    "top": "T",
    "phi1": f"G[0,20]{THETA1}",
    "phi2": f"G[0,20]{THETA2}",
    "phi3": f"F[0,20]{THETA1}",
    "phi4": f"G[0,20]{THETA1} & F[0,20]{THETA2}",
    "phi5": f"G[0,10]{THETA1} & G[12,20]{THETA2}",
    "phi6": f"G[0,16]F[0,4]{THETA1}",
}
NAMES = list(SUITE_TEXT)
UNIT = [(Fraction(0), Fraction(1))]


@pytest.fixture(scope="session")
def suite():
    return {k: parse_formula(v) for k, v in SUITE_TEXT.items()}


@pytest.fixture(scope="session")
def example2():
    return load_corpus("example2")


@pytest.fixture(scope="session")
def directed_table(suite):
    """All 49 directed distances at T = 20, computed once per session."""
    from stldist.ph import directed_ph

    return {(a, b): directed_ph(suite[a], suite[b], UNIT, 20) for a in NAMES for b in NAMES}


@pytest.fixture(scope="session")
def ph_table(directed_table):
    return {(a, b): max(directed_table[a, b], directed_table[b, a]) for a in NAMES for b in NAMES}


@pytest.fixture(scope="session")
def sd_table(suite):
    from stldist.boxes import AosConfig
    from stldist.sd import sd

    cfg = AosConfig(T=20)
    return {(a, b): sd(suite[a], suite[b], cfg).distance for a in NAMES for b in NAMES}


@pytest.fixture(scope="session")
def languages(suite):
    """Explicit box-union languages of the suite at T = 20."""
    from stldist.oracle import language

    return {k: language(f, UNIT, 20) for k, f in suite.items()}


# criterion id -> (passed, detail), filled by test_acceptance
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: (int(k.rstrip("abcde")), k)):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}: {detail}")
