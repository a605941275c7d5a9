import pytest

from affchar.afweight import AffineWeight
from affchar.cartan import finite_irrep_char
from affchar.charring import (
    GradedCharacter,
    QPoly,
    apply_word,
    char_add,
    char_mul,
    char_scale,
    demazure_op,
    deserialize,
    flip,
    irreducible_multiplicities,
    irreducible_sum,
    normalize_at,
    saturate,
    saturate_multiplicities,
    serialize,
    symmetrize,
)


def mono(rs, w, e=0, c=1, **kw):
    return GradedCharacter.monomial(rs, w, e, c, **kw)


def test_qpoly_arithmetic():
    p = QPoly({0: 1, 2: 3})
    q = QPoly({2: -3, 5: 1})
    assert (p + q).coeffs == {0: 1, 5: 1}
    assert (p * q).coeffs == {2: -3, 5: 1, 4: -9, 7: 3}
    assert p.shift(2).coeffs == {2: 1, 4: 3}
    assert QPoly({0: 1, 3: 1}, trunc=2).coeffs == {0: 1}
    assert (QPoly({0: 1}, trunc=2) * QPoly({1: 1, 3: 1})).coeffs == {1: 1}
    assert p.at_one() == 4 and p.is_nonnegative() and not q.is_nonnegative()
    assert QPoly.from_pairs(p.pairs()) == p


def test_zero_coefficients_are_not_stored(a1):
    f = GradedCharacter.from_terms(a1, {((0,), 0): 1, ((2,), 1): 0})
    assert f.terms == {((0,), 0): 1}
    assert len(mono(a1, (2,)) - mono(a1, (2,))) == 0


def test_ring_examples(a1, a2):
    f = mono(a2, (1, 0), 2) + mono(a2, (0, 1), 0, 3)
    assert char_add(f, GradedCharacter.zero(a2)) == f
    assert char_mul(mono(a2, (1, 0), 1), mono(a2, (0, 2), 2)).terms == {((1, 2), 3): 1}
    v2 = finite_irrep_char(a1, (2,))
    assert char_mul(v2, v2).coefficient((0,), 0) == 3
    assert char_scale(v2, -2).terms == {k: -2 for k in v2.terms}


def test_truncation_is_respected(a1):
    f = GradedCharacter.from_terms(a1, {((0,), 0): 1, ((0,), 3): 1}, trunc=2)
    assert f.terms == {((0,), 0): 1}
    g = GradedCharacter.from_terms(a1, {((0,), 1): 1}, trunc=5)
    assert char_mul(f, g).trunc == 2


def test_pi0_on_basic_weight(a1):
    f = demazure_op(a1, 0, mono(a1, (0,), 0, level=1, anchor="raw"))
    # raw exponents are delta coordinates: Lambda_0 and 2w + Lambda_0 - delta
    assert f.terms == {((0,), 0): 1, ((2,), -1): 1}


def test_string_cases(a1):
    assert len(demazure_op(a1, 1, mono(a1, (-1,)))) == 0
    assert demazure_op(a1, 1, mono(a1, (2,))).terms == {((2,), 0): 1, ((0,), 0): 1, ((-2,), 0): 1}
    assert demazure_op(a1, 1, mono(a1, (-3,))).terms == {((-1,), 0): -1, ((1,), 0): -1}


def test_node_range_and_truncated_node0(a1):
    with pytest.raises(ValueError):
        demazure_op(a1, 2, mono(a1, (0,)))
    with pytest.raises(ValueError):
        demazure_op(a1, 0, mono(a1, (0,), 0, level=1, trunc=3))


def test_apply_word_examples(a1, a2):
    f = mono(a2, (1, 1))
    assert apply_word(a2, [], f) == f
    for seed in [mono(a2, (1, 1)), mono(a2, (-1, 2)), mono(a2, (0, -2), 1, 2)]:
        assert apply_word(a2, [1, 2, 1], seed) == apply_word(a2, [2, 1, 2], seed)
    g = apply_word(a1, [1, 0], mono(a1, (0,), 0, level=1, anchor="raw"))
    assert len(g) == 4


def test_symmetrize_examples(a1, a2):
    v = finite_irrep_char(a2, (1, 1))
    assert symmetrize(a2, v) == v
    assert symmetrize(a1, mono(a1, (2,))) == finite_irrep_char(a1, (2,))
    # pairing -2 gives minus the interior of the string, not the full string
    assert symmetrize(a1, mono(a1, (-2,))).terms == {((0,), 0): -1}
    assert len(symmetrize(a1, GradedCharacter.zero(a1))) == 0


def test_irreducible_sum_and_multiplicities(a2):
    vm = {((1, 1), 0): 1, ((0, 0), 2): 3}
    f = irreducible_sum(a2, vm)
    assert irreducible_multiplicities(a2, f) == vm
    with pytest.raises(ValueError):
        irreducible_multiplicities(a2, mono(a2, (1, 0)))


def test_saturate_examples(a1, a2, g2):
    assert saturate(a2, AffineWeight((1, 0), 1, 0), 0).terms == finite_irrep_char(a2, (1, 0)).terms
    # the basic representation of affine sl2: depth 1 slice is ch V(2w)
    basic = saturate(a1, AffineWeight((0,), 1, 0), 1)
    assert basic.slice(1) == {(-2,): 1, (0,): 1, (2,): 1}
    for rs, top in [(a2, AffineWeight((1, 1), 2, 0)), (g2, AffineWeight((1, 0), 2, 0))]:
        assert saturate(rs, top, 3).coefficient(top.finite, 0) == 1


def test_basic_representation_partition_counts(a1):
    # zero-weight multiplicities of L(Lambda_0) for affine sl2 are partition numbers
    vm = saturate(a1, AffineWeight((0,), 1, 0), 6)
    assert [vm.coefficient((0,), d) for d in range(7)] == [1, 1, 2, 3, 5, 7, 11]


def test_saturate_rejects_bad_input(a1):
    with pytest.raises(ValueError):
        saturate(a1, AffineWeight((2,), 1, 0), 2)
    with pytest.raises(ValueError):
        saturate(a1, AffineWeight((0,), 1, 0), -1)


def test_saturate_multiplicities_window(a2):
    vm = saturate_multiplicities(a2, AffineWeight((0, 0), 1, 0), 3)
    assert all(d <= 3 for (_, d) in vm)
    assert vm[((0, 0), 0)] == 1 and vm[((1, 1), 1)] == 1


def test_flip_and_normalize(a1):
    f = mono(a1, (3,), 2, 5)
    assert flip(f).terms == {((-3,), 2): 5}
    assert flip(flip(f)) == f
    v = finite_irrep_char(a1, (2,))
    assert flip(v) == v
    raw = mono(a1, (0,), 4, level=1, anchor="raw")
    once = normalize_at(raw, 4)
    assert once.terms == {((0,), 0): 1}
    assert normalize_at(once, 0) == once


def test_serialization_round_trip(a2):
    f = GradedCharacter.from_terms(a2, {((1, 0), 2): 3, ((0, 0), 0): 1, ((-1, 1), 2): -2}, level=2, trunc=4)
    data = serialize(f, {"type": "A"})
    assert [(r["q"], r["weight"]) for r in data["terms"]] == [(0, [0, 0]), (2, [-1, 1]), (2, [1, 0])]
    assert deserialize(data, 2) == f
