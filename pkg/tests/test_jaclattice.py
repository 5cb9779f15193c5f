import pytest

from nilsection.exactla import AbGroupStructure, IntMatrix
from nilsection.jaclattice import GLattice, component_group, crosscheck_with_curve

from conftest import HYPERELLIPTIC, SMALL_DATA, TERNARY, TWO_POINTS


def test_trivial_action_has_trivial_h1():
    # H^1(Z/2, Z^2) with trivial action is Hom(Z/2, Z^2) = 0
    assert component_group(GLattice(IntMatrix.identity(2), 2)).is_trivial


def test_regular_representation():
    perm = IntMatrix.from_rows([[0, 1], [1, 0]])
    assert component_group(GLattice(perm, 2)).is_trivial


def test_sign_representation():
    assert component_group(GLattice(IntMatrix.from_rows([[-1]]), 2)) == AbGroupStructure(0, (2,))


def test_bad_lattices_rejected():
    with pytest.raises(ValueError):
        GLattice(IntMatrix.from_rows([[0, -1], [1, 0]]), 2)
    with pytest.raises(ValueError):
        GLattice(IntMatrix.from_rows([[2]]), 2)


def test_curve_lattice():
    assert component_group(GLattice.of_curve(HYPERELLIPTIC)) == AbGroupStructure(0, (2,) * 4)


@pytest.mark.parametrize("b, order", [(TWO_POINTS, 1), (HYPERELLIPTIC, 16), (TERNARY, 9)], ids=str)
def test_crosscheck(b, order):
    r = crosscheck_with_curve(b)
    assert r.passed and r.details["order"] == order


def test_crosscheck_small_data(datum):
    assert crosscheck_with_curve(datum).passed
