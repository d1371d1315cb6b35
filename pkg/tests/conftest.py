import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from aatkit import catalog

# one verdict line per acceptance criterion, echoed after the run so the
# table survives output capture
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)


def to_fraction(x):
    """gmpy2 mpq (or int) to Fraction, for oracle comparisons."""
    from gmpy2 import mpq

    q = mpq(x)
    return Fraction(int(q.numerator), int(q.denominator))


@pytest.fixture(scope="session")
def builtin_entries():
    return catalog.builtin_catalog()


@pytest.fixture(scope="session")
def wp_descriptor(builtin_entries):
    return next(d for d in builtin_entries if d.name == catalog.WEIERSTRASS_NAME)


@pytest.fixture(scope="session")
def wp_certificate(wp_descriptor):
    """The expensive degree-12 Weierstrass certificate, computed once."""
    return wp_descriptor.certificate()
