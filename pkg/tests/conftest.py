import pytest

from nilsection.orbifold import BranchData, cover

HYPERELLIPTIC = BranchData(2, 0, (1, 1, 1, 1, 1, 1))
TWO_POINTS = BranchData(2, 1, (1, 1))
TERNARY = BranchData(3, 0, (1, 1, 2, 2))
GENUS_ONE = BranchData(2, 0, (1, 1, 1, 1))
FREE_2 = BranchData(2, 2, (), (1, 0, 0, 0))
FREE_3 = BranchData(3, 2, (), (1, 0, 0, 0))

SMALL_DATA = [
    HYPERELLIPTIC, TWO_POINTS, TERNARY, GENUS_ONE,
    BranchData(2, 1, (1, 1, 1, 1)),
    BranchData(3, 0, (1, 1, 1)),
    BranchData(3, 1, (1, 2), (1, 0)),
    BranchData(5, 0, (1, 4, 1, 4)),
    BranchData(5, 0, (1, 1, 3)),
]


@pytest.fixture(params=SMALL_DATA, ids=str)
def datum(request):
    return request.param


@pytest.fixture
def hyperelliptic():
    return cover(HYPERELLIPTIC)
