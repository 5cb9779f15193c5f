import pytest
from hypothesis import given, settings, strategies as st

from nilsection.orbifold import cover
from nilsection.sections import (ExtensionRep, IncompatibleExtensions, NoSplitting,
                                 count_sections_brute_force, difference_class,
                                 enumerate_section_classes, find_level2_witness, find_section,
                                 lifts_to_level2, splitting_obstruction)

from conftest import FREE_2, FREE_3, HYPERELLIPTIC, TERNARY, TWO_POINTS


@pytest.mark.parametrize("b, count", [(TWO_POINTS, 1), (HYPERELLIPTIC, 16), (TERNARY, 9)], ids=str)
def test_section_class_counts(b, count):
    C = cover(b)
    classes = enumerate_section_classes(C.level1, C.base_section)
    assert len(classes) == count == C.h1.order
    for c, s in classes:
        assert s.is_multiplicative()
        assert difference_class(s, C.base_section) == c
    # oracle: sections of the mod p^2 model counted directly, up to conjugation
    _, brute = count_sections_brute_force(C.level1, b.p ** 2)
    assert brute == count


def test_difference_class_basics():
    C = cover(TERNARY)
    r, s = C.fixed_point_section(2), C.fixed_point_section(3)
    assert difference_class(s, s).is_zero
    assert difference_class(r, s) == -difference_class(s, r)
    for k in [(1, 0, 0, 0), (0, 2, -1, 5)]:
        assert difference_class(r.conjugate(k), s) == difference_class(r, s)


def test_difference_class_is_simply_transitive():
    C = cover(HYPERELLIPTIC)
    seen = {difference_class(s, C.base_section).coords
            for _, s in enumerate_section_classes(C.level1, C.base_section)}
    assert len(seen) == C.h1.order


def test_split_extension_has_zero_obstruction(datum):
    C = cover(datum)
    assert splitting_obstruction(C.level1).is_zero
    find_section(C.level1)


def test_direct_product_has_zero_obstruction():
    from nilsection.exactla import IntMatrix
    from nilsection.gcohom import GModule
    M = GModule.trivial(3, 2)
    E = ExtensionRep.level1(3, (0, 1, 2), IntMatrix.identity(2), (0, 0), M)
    assert splitting_obstruction(E).is_zero


@pytest.mark.parametrize("b", [FREE_2, FREE_3], ids=str)
def test_free_action_obstruction(b):
    C = cover(b)
    obs = splitting_obstruction(C.level1)
    assert not obs.is_zero
    with pytest.raises(NoSplitting):
        find_section(C.level1)
    modulus = b.p ** 2 if b.p ** (2 * C.H.rank) <= 1 << 16 else b.p
    assert count_sections_brute_force(C.level1, modulus) == (0, 0)


def _random_element(E, draw, level):
    g = draw(st.integers(0, E.p - 1))
    if level == 1:
        k = tuple(draw(st.integers(-3, 3)) for _ in range(E.module.rank))
    else:
        q = E.quotient
        k = q.element(tuple(draw(st.integers(-3, 3)) for _ in range(q.rank)),
                      tuple(draw(st.integers(-3, 3)) for _ in range(q.layer_rank)))
    return E.element(k, g)


@pytest.mark.parametrize("b", [HYPERELLIPTIC, TERNARY], ids=str)
@pytest.mark.parametrize("level", [1, 2])
@given(data=st.data())
@settings(max_examples=30, deadline=None)
def test_carrier_associative(b, level, data):
    E = cover(b).extension(level)
    x, y, z = (_random_element(E, data.draw, level) for _ in range(3))
    assert E.multiply(E.multiply(x, y), z) == E.multiply(x, E.multiply(y, z))
    assert E.multiply(x, E.inverse(x)) == E.identity


def test_base_section_lifts(hyperelliptic):
    res = lifts_to_level2(hyperelliptic.h1.zero, hyperelliptic.level2)
    assert res.liftable and res.witness.verify()


def test_sum_of_two_points_does_not_lift(hyperelliptic):
    C = hyperelliptic
    c = C.s_classes[1] + C.s_classes[2]
    res = lifts_to_level2(c, C.level2)
    assert not res.liftable
    assert not res.obstruction.is_zero


def test_full_sum_lifts(hyperelliptic):
    C = hyperelliptic
    c = C.h1.zero
    for s in C.s_classes:
        c = c + s
    assert lifts_to_level2(c, C.level2).liftable


def test_affine_search_agrees_with_exhaustive(hyperelliptic):
    C = hyperelliptic
    for c in list(C.h1.elements())[:5]:
        w_ex, m1 = find_level2_witness(C.level2, c)
        w_af, m2 = find_level2_witness(C.level2, c, exhaustive_limit=0)
        assert (m1, m2) == ("exhaustive", "affine")
        assert (w_ex is None) == (w_af is None)
        assert (w_af is None) == (not C.delta2(c).is_zero)


def test_incompatible_class_rejected(hyperelliptic):
    other = cover(TERNARY).h1.zero
    with pytest.raises(IncompatibleExtensions):
        lifts_to_level2(other, hyperelliptic.level2)
