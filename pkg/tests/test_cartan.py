import itertools

import numpy as np
import pytest

from affchar.cartan import (
    build_root_system,
    decompose_slice,
    dominant_weights_below,
    finite_irrep_char,
    freudenthal_multiplicities,
    is_w_invariant,
    longest_word,
    reflect,
    straighten,
    to_dominant_finite,
    weyl_dimension,
    weyl_group_order,
    weyl_orbit,
)
from affchar.charring import char_mul

TYPES = [("A", 1), ("A", 2), ("A", 3), ("B", 2), ("B", 3), ("C", 2), ("C", 3), ("D", 4),
         ("G", 2), ("F", 4), ("E", 6)]


def test_a1_data(a1):
    assert a1.cartan == ((2,),)
    assert a1.lacing == 1
    assert a1.theta == (2,)
    assert a1.theta_covector == (1,)


def test_c2_node_two_is_long_and_theta_is_short(c2):
    assert c2.lacing == 2
    assert c2.short_simple_count == 1
    # node 2 is long: its coroot pairs with alpha_1 to -1
    assert c2.cartan == ((2, -2), (-1, 2))
    assert c2.theta == (0, 1)
    # pairings of theta^vee with the fundamental weights; the highest root would give (1, 1)
    assert c2.theta_covector == (1, 2)


def test_g2_data(g2):
    assert g2.lacing == 3
    assert g2.short_simple_count == 1
    assert g2.theta == (1, 0)
    assert g2.theta_covector == (2, 3)


@pytest.mark.parametrize("t,r,count", [("B", 3, 1), ("C", 3, 2), ("F", 4, 2), ("A", 3, 3), ("D", 4, 4), ("E", 6, 6)])
def test_short_simple_count(t, r, count):
    assert build_root_system(t, r).short_simple_count == count


@pytest.mark.parametrize("t,r", TYPES)
def test_theta_is_dominant_short_and_self_dual(t, r):
    rs = build_root_system(t, r)
    theta = rs.theta
    assert all(x >= 0 for x in theta)
    assert theta in rs.positive_roots
    norms = {rs.form(b, b) for b in rs.positive_roots}
    assert rs.form(theta, theta) == min(norms)
    assert max(norms) / min(norms) == rs.lacing
    w0_theta = tuple(-x for x in to_dominant_finite(rs, tuple(-x for x in theta))[0])
    assert tuple(-x for x in w0_theta) == theta
    assert rs.theta_pairing(theta) == 2


@pytest.mark.parametrize("t,r", TYPES)
def test_long_root_flags(t, r):
    rs = build_root_system(t, r)
    if rs.lacing == 1:
        assert not any(rs.long_root_flags)
    else:
        assert any(rs.long_root_flags) and not all(rs.long_root_flags)


@pytest.mark.parametrize("t,r,order", [("A", 1, 2), ("A", 2, 6), ("C", 2, 8), ("G", 2, 12), ("B", 3, 48)])
def test_weyl_group_order(t, r, order):
    rs = build_root_system(t, r)
    assert weyl_group_order(rs) == order
    assert len(longest_word(rs)) == len(rs.positive_roots)


@pytest.mark.parametrize("t,r", [("Q", 1), ("A", 0), ("G", 3), ("D", 2)])
def test_invalid_types(t, r):
    with pytest.raises(ValueError):
        build_root_system(t, r)


def test_reflect_examples(a1, a2, rank2):
    assert reflect(a1, 1, (2,)) == (-2,)
    assert reflect(a2, 1, (1, 0)) == (-1, 1)
    for rs in rank2:
        for i in (1, 2):
            assert reflect(rs, i, (0, 0)) == (0, 0)


def test_to_dominant_finite_examples(a1, a2):
    assert to_dominant_finite(a2, (2, 1)) == ((2, 1), [])
    assert to_dominant_finite(a1, (-2,)) == ((2,), [1])
    top, word = to_dominant_finite(a2, (-1, -1))
    assert top == (1, 1) and len(word) == 3


def test_irrep_examples(a1, c2):
    assert finite_irrep_char(a1, (0,)).terms == {((0,), 0): 1}
    assert finite_irrep_char(a1, (2,)).terms == {((-2,), 0): 1, ((0,), 0): 1, ((2,), 0): 1}
    f = finite_irrep_char(c2, (1, 0))
    assert len(f) == 4 and set(f.terms.values()) == {1}


@pytest.mark.parametrize("t,r", [("A", 2), ("C", 2), ("G", 2), ("B", 3)])
def test_irrep_matches_freudenthal(t, r):
    rs = build_root_system(t, r)
    for lam in itertools.product(range(3), repeat=r):
        production = finite_irrep_char(rs, lam)
        assert production.terms == finite_irrep_char(rs, lam, oracle=True).terms
        assert sum(production.terms.values()) == weyl_dimension(rs, lam)


def test_freudenthal_known_multiplicity(a2):
    # the zero weight of the adjoint representation of sl3 has multiplicity 2
    assert freudenthal_multiplicities(a2, (1, 1))[(0, 0)] == 2


def test_dominant_weights_below_g2(g2):
    # every dominant G2 weight below rho, including ones not reachable by simple-root steps
    assert dominant_weights_below(g2, (1, 1)) == [(0, 0), (0, 1), (1, 0), (1, 1), (2, 0)]


def test_weyl_orbit_sizes(a2, g2):
    assert len(weyl_orbit(a2, (1, 1))) == 6
    assert len(weyl_orbit(g2, (1, 1))) == 12
    assert len(weyl_orbit(g2, (1, 0))) == 6


def test_decompose_slice_examples(a1, c2):
    assert decompose_slice(c2, finite_irrep_char(c2, (1, 1))) == {(1, 1): 1}
    v2 = finite_irrep_char(a1, (2,))
    assert decompose_slice(a1, char_mul(v2, v2)) == {(0,): 1, (2,): 1, (4,): 1}
    assert decompose_slice(a1, {}) == {}
    with pytest.raises(ValueError):
        decompose_slice(a1, {(2,): 1})


def test_straighten_signs(a1):
    nus, signs = straighten(a1, np.array([[2], [-1], [-4]]))
    assert nus.tolist()[0] == [2] and signs.tolist()[0] == 1
    assert signs.tolist()[1] == 0
    assert nus.tolist()[2] == [2] and signs.tolist()[2] == -1


def test_w_invariance(a2):
    assert is_w_invariant(a2, {w: c for (w, _), c in finite_irrep_char(a2, (2, 0)).terms.items()})
    assert not is_w_invariant(a2, {(1, 0): 1})


def test_root_system_hash_and_equality():
    assert build_root_system("C", 2) == build_root_system("C", 2)
    assert hash(build_root_system("C", 2)) == hash(build_root_system("C", 2))
    assert build_root_system("C", 2) != build_root_system("B", 2)
