import pytest
from hypothesis import given, strategies as st

from nilsection.fpgroup import (Homomorphism2Cyclic, Presentation, abelianize, commutator, concat,
                                conjugation_action_on_abelianization, free_reduce, gen, inverse,
                                power, reidemeister_schreier, rewrite_kernel_word)
from nilsection.orbifold import BranchData, orbifold_presentation

words = st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), max_size=12).map(tuple)


@given(words)
def test_free_reduce_idempotent(w):
    r = free_reduce(w)
    assert free_reduce(r) == r
    assert concat(r, inverse(r)) == ()


@given(words, words)
def test_abelianize_is_homomorphism(u, v):
    a, b = abelianize(u, 3), abelianize(v, 3)
    assert abelianize(concat(u, v), 3) == tuple(x + y for x, y in zip(a, b))
    assert abelianize(commutator(u, v), 3) == (0, 0, 0)


def test_presentation_rejects_bad_letters():
    with pytest.raises(ValueError):
        Presentation(1, ((2,),))


def test_surjectivity_required():
    with pytest.raises(ValueError):
        Homomorphism2Cyclic(2, (0, 2))


@pytest.mark.parametrize("b, k", [
    (BranchData(2, 0, (1,) * 6), 6), (BranchData(3, 0, (1, 1, 2, 2)), 4),
    (BranchData(2, 1, (1, 1)), 4), (BranchData(2, 2, (), (1, 0, 0, 0)), 4)])
def test_schreier_generator_count(b, k):
    pres, psi = orbifold_presentation(b)
    assert pres.generator_count == k
    sub = reidemeister_schreier(pres, psi)
    # rank of a free group of index p: p(k - 1) + 1
    assert sub.rank == b.p * (k - 1) + 1
    assert len(sub.subgroup_relators) == b.p * len(pres.relators)


def test_schreier_generators_lie_in_kernel(datum):
    pres, psi = orbifold_presentation(datum)
    sub = reidemeister_schreier(pres, psi)
    for s in sub.schreier_generators:
        assert psi(s) == 0
    # rewriting then expanding gives back the same element of the free group
    for r in pres.relators:
        assert sub.expand(rewrite_kernel_word(sub, r)) == free_reduce(r)


def test_rewrite_rejects_non_kernel_word():
    pres, psi = orbifold_presentation(BranchData(2, 0, (1,) * 6))
    sub = reidemeister_schreier(pres, psi)
    with pytest.raises(ValueError):
        rewrite_kernel_word(sub, gen(0))


def test_abelianization_rank_and_action(datum):
    pres, psi = orbifold_presentation(datum)
    sub = reidemeister_schreier(pres, psi)
    ab = sub.abelianization
    from nilsection.orbifold import genus_of
    assert ab.rank == 2 * genus_of(datum)
    sigma = conjugation_action_on_abelianization(sub, gen(sub.t_index))
    assert (sigma ** datum.p).is_identity()
    assert abs(sigma.det()) == 1


def test_conjugation_lift_must_leave_kernel():
    pres, psi = orbifold_presentation(BranchData(2, 0, (1,) * 6))
    sub = reidemeister_schreier(pres, psi)
    with pytest.raises(ValueError):
        conjugation_action_on_abelianization(sub, power(gen(0), 2))
