import pytest
from hypothesis import strategies as st

from colstab import Mode, RingDescriptor, RingElement

POLY2 = RingDescriptor(Mode.POLYNOMIAL, 2)
LAUR2 = RingDescriptor(Mode.LAURENT, 2)
POLY3 = RingDescriptor(Mode.POLYNOMIAL, 3)
LAUR3 = RingDescriptor(Mode.LAURENT, 3)


def elements(ring, max_terms=4, bound=4, max_deg=3):
    """Strategy producing random elements of the given ring, zero included."""
    low = 0 if ring.mode is Mode.POLYNOMIAL else -2
    exps = st.tuples(*([st.integers(low, max_deg)] * ring.nvars))
    coeffs = st.integers(-bound, bound).filter(bool)
    return st.dictionaries(exps, coeffs, max_size=max_terms).map(
        lambda d: RingElement(ring, d)
    )


@pytest.fixture(params=[POLY3, LAUR3], ids=["polynomial", "laurent"])
def ring3(request):
    return request.param


@pytest.fixture(params=[POLY2, LAUR2], ids=["polynomial", "laurent"])
def ring2(request):
    return request.param
