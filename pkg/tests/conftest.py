from fractions import Fraction

import pytest

from mkdistill.family import new_lambda_state


@pytest.fixture
def rho6():
    """The N=6 bound-entangled state, written out by hand."""
    w = Fraction(1, 10)
    return new_lambda_state(6, Fraction(1, 5), 0, {3: w, 6: w, 12: w, 24: w})
