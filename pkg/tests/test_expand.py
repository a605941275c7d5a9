import itertools
import warnings

import pytest

from affchar.afweight import level_dominant_weights
from affchar.cartan import build_root_system
from affchar.charring import GradedCharacter
from affchar.demazure import thin_gch, weyl_gch, weyl_multiplicities
from affchar.expand import (
    Basis,
    NonSimplyLacedKostka,
    branching_multiplicities,
    branching_weyl,
    corollary_num_verify,
    expand_symmetric,
    expand_thin,
    kostka,
    reciprocity_check,
    reciprocity_sides,
    socle_degree_check,
    thick_transpose_check,
)


def as_dicts(coeffs):
    return {mu: dict(p.coeffs) for mu, p in coeffs.items()}


def test_basis_validation():
    assert Basis("V").to_json() == {"family": "V", "level": None, "truncation": "exact"}
    with pytest.raises(ValueError):
        Basis("W")
    with pytest.raises(ValueError):
        Basis("X", 1)


def test_expand_symmetric_examples(a1, a2):
    assert as_dicts(expand_symmetric(a2, weyl_gch(a2, (2, 1), 2), "W", 2, None).coeffs) == {(2, 1): {0: 1}}
    assert as_dicts(expand_symmetric(a1, weyl_gch(a1, (2,), 1), "W", 2, None).coeffs) == {
        (2,): {0: 1}, (0,): {1: 1}}
    assert as_dicts(expand_symmetric(a1, weyl_gch(a1, (4,), 1), "W", 2, None).coeffs) == {
        (4,): {0: 1}, (2,): {2: 1, 3: 1}, (0,): {4: 1}}


def test_expand_symmetric_reconstructs(a2):
    f = weyl_gch(a2, (2, 2), 1)
    exp = expand_symmetric(a2, f, "W", 2, None)
    acc = GradedCharacter.zero(a2)
    for mu, poly in exp.coeffs.items():
        for e, c in poly.coeffs.items():
            acc = acc + (weyl_gch(a2, mu, 2).with_meta(level=0) * GradedCharacter.monomial(a2, (0, 0), e, c))
    assert acc.terms == f.terms


def test_expand_symmetric_needs_exact_window(a1):
    f = GradedCharacter.from_terms(a1, {((0,), 0): 1}, trunc=2)
    with pytest.raises(ValueError):
        expand_symmetric(a1, f, "W", 1, 5)
    with pytest.raises(ValueError):
        expand_symmetric(a1, weyl_gch(a1, (2,), 1), "thick", 1, None)


def test_expand_thin_examples(a1, a2):
    for lam, k in [((-2,), 1), ((3,), 2)]:
        assert as_dicts(expand_thin(a1, thin_gch(a1, lam, k), k).coeffs) == {lam: {0: 1}}
    assert as_dicts(expand_thin(a1, thin_gch(a1, (-2,), 1), 2).coeffs) == {(-2,): {0: 1}, (0,): {1: 1}}


def test_expand_thin_peeling_order_is_irrelevant(a2):
    # (-1,-1) and (2,-1) lie in different orbits and are incomparable maxima
    f = thin_gch(a2, (-1, -1), 1) + thin_gch(a2, (2, -1), 1)
    first = expand_thin(a2, f, 2)
    last = expand_thin(a2, f, 2, pick_last=True)
    assert as_dicts(first.coeffs) == as_dicts(last.coeffs)
    assert first.is_nonnegative()


def test_branching_examples(a1, a2):
    assert as_dicts(branching_weyl(a1, (3,), 2).coeffs) == {(3,): {0: 1}, (1,): {1: 1}}
    assert as_dicts(branching_weyl(a1, (4,), 3).coeffs) == {(4,): {0: 1}, (2,): {1: 1}}
    for k in (1, 2, 3):
        for mu in level_dominant_weights(a2, k):
            assert as_dicts(branching_weyl(a2, mu, k).coeffs) == {mu: {0: 1}}
    with pytest.raises(ValueError):
        branching_weyl(a1, (-1,), 1)


def test_corollary_examples(a1, a2):
    assert corollary_num_verify(a1, 1, [(0,)], [(4,), (6,), (5,)]) == []
    assert branching_multiplicities(a1, (4,), 1)[(0,)] == {4: 1}
    assert branching_multiplicities(a1, (6,), 1)[(0,)] == {9: 1}
    lams = [l for l in level_dominant_weights(a2, 2) if a2.theta_pairing(l) < 2]
    assert corollary_num_verify(a2, 2, lams, lams) == []
    with pytest.raises(ValueError):
        corollary_num_verify(a1, 1, [(1,)], [(1,)])


def test_socle_degree(a1):
    for mu in range(0, 9, 2):
        assert socle_degree_check(a1, (0,), (mu,), 1)


def test_reciprocity_examples(a1):
    for k in (1, 2):
        lhs, rhs = reciprocity_sides(a1, (0,), (0,), k, 3)
        assert lhs.get(0) == rhs.get(0) == 1
    assert reciprocity_sides(a1, (0,), (2,), 1, 3) == ({1: 1}, {1: 1})
    assert reciprocity_sides(a1, (2,), (2,), 2, 3) == ({0: 1}, {0: 1})
    assert reciprocity_check(a1, (1,), (3,), 1, 5)


def test_thick_transpose(a1):
    assert thick_transpose_check(a1, (0,), 1, 6) == []


def test_kostka_examples(a1, a2):
    assert as_dicts(kostka(a1, [(1, (2,))], 1)) == {(2,): {0: 1}, (0,): {1: 1}}
    for mu in [(2, 1), (3, 0)]:
        assert as_dicts(kostka(a2, [(1, mu)], 1)) == as_dicts(branching_weyl(a2, mu, 1).coeffs)
    with pytest.raises(ValueError):
        kostka(a1, [(2, (2,))], 1)


def test_kostka_of_plain_products(a1):
    # the plain product of graded characters is not a crystal tensor product,
    # and its expansion can have negative coefficients
    got = as_dicts(kostka(a1, [(1, (2,))] * 3, 1))
    assert got[(0,)] == {0: 1, 1: 3, 2: -2, 3: -2, 4: 1}


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_kostka_stabilizes_from_2n_minus_1(a1, n):
    factors = [(1, (2,))] * n
    stable = as_dicts(kostka(a1, factors, 2 * n - 1))
    assert stable == as_dicts(kostka(a1, factors, 2 * n))
    # stable coefficients are the graded multiplicities of the product
    from affchar.expand import tensor_multiplicities

    graded = {}
    for (nu, e), c in tensor_multiplicities(a1, factors).items():
        graded.setdefault(nu, {})[e] = c
    assert stable == graded


def test_kostka_not_yet_stable_at_n(a1):
    factors = [(1, (2,))] * 2
    assert as_dicts(kostka(a1, factors, 2)) != as_dicts(kostka(a1, factors, 3))


def test_non_simply_laced_kostka_is_flagged(a2, c2):
    with pytest.warns(NonSimplyLacedKostka):
        out = kostka(c2, [(1, (1, 0)), (1, (0, 1))], 1)
    assert out
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        kostka(a2, [(1, (1, 0))], 1)


def test_expansion_json(a1):
    data = branching_weyl(a1, (4,), 1).to_json()
    assert data["basis"] == {"family": "W", "level": 2, "truncation": "exact"}
    assert data["coeffs"][1] == {"weight": [2], "poly": [[2, 1], [3, 1]]}
