import os
from decimal import Decimal, getcontext
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from rxval.value_group import GroupScalar

settings.register_profile(
    "rxval", deadline=None, max_examples=int(os.environ.get("RXVAL_EXAMPLES", "150")),
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("rxval")

getcontext().prec = 80
SQRT2_DEC = Decimal(2).sqrt()


def to_decimal(x: GroupScalar) -> Decimal:
    a, b = x.a, x.b
    return Decimal(a.numerator) / Decimal(a.denominator) + Decimal(b.numerator) / Decimal(b.denominator) * SQRT2_DEC


small_fracs = st.fractions(min_value=-20, max_value=20, max_denominator=50)
scalars = st.builds(GroupScalar, small_fracs, small_fracs)
positive_lams = st.builds(GroupScalar, st.fractions(min_value=Fraction(1, 64), max_value=4, max_denominator=32))


@pytest.fixture
def dec():
    return to_decimal
