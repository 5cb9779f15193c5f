import pytest

from nilsection.exactla import IntMatrix, nullspace_mod_p
from nilsection.orbifold import (BranchData, FpDiv0, InvalidBranchData, KernelR, cover,
                                 fixed_point_section, kernel_R, wedge_map_injective, omega_kernel_order,
                                 orbifold_presentation, s_ab, validate_and_genus, verify_cor12,
                                 verify_prop44, verify_quadraticity, verify_thm13, verify_thm47)

from conftest import FREE_2, FREE_3, GENUS_ONE, HYPERELLIPTIC, SMALL_DATA, TERNARY, TWO_POINTS


@pytest.mark.parametrize("b, g", [(TWO_POINTS, 2), (HYPERELLIPTIC, 2), (TERNARY, 2), (GENUS_ONE, 1),
                                  (FREE_2, 3), (FREE_3, 4)], ids=str)
def test_genus(b, g):
    assert validate_and_genus(b) == g
    assert 2 * g == cover(b).H.rank


@pytest.mark.parametrize("b, msg", [
    (BranchData(3, 0, (1, 1, 2)), "sum of monodromies"),
    (BranchData(2, 0, (1, 0, 1)), "nonzero"),
    (BranchData(4, 0, (1, 1, 1, 1)), "prime"),
    (BranchData(2, 0, (1, 1)), "genus"),
    (BranchData(2, 1, (), (0, 0)), "surjective"),
    (BranchData(2, 1, (1, 1), (0,)), "handle images"),
])
def test_validation_errors(b, msg):
    with pytest.raises(InvalidBranchData, match=msg):
        validate_and_genus(b)


def test_presentations():
    pres, psi = orbifold_presentation(HYPERELLIPTIC)
    assert pres.generator_count == 6 and len(pres.relators) == 7
    assert pres.format(pres.relators[-1]) == "c1 c2 c3 c4 c5 c6"
    assert pres.format(pres.relators[0]) == "c1 c1"
    pres, _ = orbifold_presentation(TWO_POINTS)
    assert pres.generator_labels == ("a1", "b1", "c1", "c2")
    assert pres.format(pres.relators[-1]) == "a1 b1 a1^-1 b1^-1 c1 c2"
    pres, psi = orbifold_presentation(FREE_2)
    assert (pres.generator_count, len(pres.relators), psi.images) == (4, 1, (1, 0, 0, 0))


def test_lefschetz(datum):
    C = cover(datum)
    assert 2 - C.lefschetz_trace == datum.n
    assert len(C.fixed_points) == datum.n
    for k in range(1, datum.p):
        assert 2 - (C.sigma ** k).trace() == datum.n


def test_fixed_point_sections_multiplicative(datum):
    C = cover(datum)
    for i in range(1, datum.n + 1):
        for level in (1, 2):
            assert C.fixed_point_section(i, level).is_multiplicative()
    with pytest.raises(IndexError):
        C.fixed_point_section(datum.n + 1)


def test_two_point_sections_conjugate():
    assert cover(TWO_POINTS).s_class(2).is_zero


def test_ternary_sections_pairwise_distinct():
    s = cover(TERNARY).s_classes
    assert len({c.coords for c in s}) == 4


def test_s_ab_linear(datum):
    C = cover(datum)
    p, n = datum.p, datum.n
    assert s_ab(datum, FpDiv0(p, (0,) * n)).is_zero
    D1 = FpDiv0.difference(p, n, 1, 2)
    assert s_ab(datum, D1) == -C.s_class(2)
    D2 = FpDiv0.difference(p, n, n, 1)
    assert s_ab(datum, D1 + D2) == s_ab(datum, D1) + s_ab(datum, D2)


def test_kernel_R(datum):
    R = kernel_R(datum)
    assert len(R.generator.support) == datum.n
    if datum.p == 2:
        assert R.generator.coefficients == (1,) * datum.n
    C = cover(datum)
    assert len(nullspace_mod_p(C.s_ab_matrix, datum.p)) == 1
    # full-sum relation sum w_i s_i = 0
    assert C.s_ab(R.generator).is_zero


def test_kernel_r_type_rejects_partial_support():
    with pytest.raises(ValueError):
        KernelR(FpDiv0(3, (1, 2, 0)))
    with pytest.raises(ValueError):
        FpDiv0(3, (1, 1))


@pytest.mark.parametrize("b, rank", [(HYPERELLIPTIC, 4), (TWO_POINTS, 0), (TERNARY, 2)], ids=str)
def test_thm47(b, rank):
    r = verify_thm47(b)
    assert r.passed and r.details["rank"] == rank == r.details["h1_dimension"]


@pytest.mark.parametrize("b, injective", [(TWO_POINTS, False), (HYPERELLIPTIC, True), (TERNARY, True)], ids=str)
def test_cor12(b, injective):
    r = verify_cor12(b)
    assert r.passed and r.details["injective"] is injective


@pytest.mark.parametrize("b, count, total", [(HYPERELLIPTIC, 6, 16), (TWO_POINTS, 1, 1), (GENUS_ONE, 4, 4)], ids=str)
def test_thm13(b, count, total):
    r = verify_thm13(b)
    assert r.passed
    assert len(r.details["liftable_delta"]) == count and r.details["classes"] == total


def test_thm13_rejects_odd_p():
    with pytest.raises(ValueError):
        verify_thm13(TERNARY)


@pytest.mark.parametrize("b", [FREE_2, FREE_3, HYPERELLIPTIC], ids=str)
def test_prop44(b):
    r = verify_prop44(b)
    assert r.passed
    assert any(r.details["obstruction"]) == (b.n == 0)


@pytest.mark.parametrize("b", [HYPERELLIPTIC, TWO_POINTS, GENUS_ONE, BranchData(2, 1, (1, 1, 1, 1))], ids=str)
def test_wedge_injective_and_omega_kernel(b):
    C = cover(b)
    assert wedge_map_injective(C)
    assert omega_kernel_order(C) <= 2


@pytest.mark.parametrize("b", [HYPERELLIPTIC, TERNARY], ids=str)
def test_quadraticity_report(b):
    r = verify_quadraticity(b)
    assert r.passed and r.details["mode"] == "exhaustive"
    assert verify_quadraticity(b, exhaustive_limit=0, samples=20).details["pairs"] == 20


def test_delta2_depends_only_on_class():
    C = cover(TERNARY)
    D = C.H.sigma - IntMatrix.identity(C.H.rank)
    for c in list(C.h1.elements())[:4]:
        for m in [(1, 0, 0, 0), (0, -2, 1, 3)]:
            shifted = C.h1.cls(tuple(x + y for x, y in zip(c.representative, D.apply(m))))
            assert shifted == c and C.delta2(shifted) == C.delta2(c)
