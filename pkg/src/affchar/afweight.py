"""Affine weights of the twisted affinization and the affine Weyl group action.

An affine weight ``lam + k*Lambda_0 + n*delta`` is stored as the triple
``(finite, level, delta)``.  Node 0 is the affine node with
``alpha_0 = delta - theta`` and ``alpha_0^vee = K - theta^vee`` where theta is
the dominant short root.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import NamedTuple, Optional

import numpy as np

from .cartan import (
    RootSystem,
    Weight,
    antidominant,
    is_dominant,
    reflect,
    to_dominant_finite,
    weyl_orbit,
)


class AffineWeight(NamedTuple):
    finite: Weight
    level: int
    delta: int = 0

    def __str__(self) -> str:
        return f"({','.join(map(str, self.finite))}; level {self.level}; delta {self.delta})"


def affine_weight(finite, level: int, delta: int = 0) -> AffineWeight:
    return AffineWeight(tuple(int(x) for x in finite), int(level), int(delta))


def affine_pairing(rs: RootSystem, i: int, mu: AffineWeight) -> int:
    """Pairing of the simple coroot ``i`` (0 <= i <= rank) with ``mu``."""
    if i == 0:
        return mu.level - rs.theta_pairing(mu.finite)
    if not 1 <= i <= rs.rank:
        raise ValueError(f"node {i} out of range 0..{rs.rank}")
    return mu.finite[i - 1]


def is_affine_dominant(rs: RootSystem, mu: AffineWeight) -> bool:
    return all(affine_pairing(rs, i, mu) >= 0 for i in range(rs.rank + 1))


def affine_reflect(rs: RootSystem, i: int, mu: AffineWeight) -> AffineWeight:
    if i == 0:
        c = affine_pairing(rs, 0, mu)
        if c == 0:
            return mu
        fin = tuple(x + c * t for x, t in zip(mu.finite, rs.theta))
        return AffineWeight(fin, mu.level, mu.delta - c)
    return AffineWeight(reflect(rs, i, mu.finite), mu.level, mu.delta)


def apply_reflections(rs: RootSystem, word, mu: AffineWeight) -> AffineWeight:
    """Apply ``s_{word[0]} s_{word[1]} ...`` to ``mu`` (rightmost letter first)."""
    for i in reversed(list(word)):
        mu = affine_reflect(rs, i, mu)
    return mu


def to_dominant_affine(rs: RootSystem, mu: AffineWeight) -> tuple[AffineWeight, list[int]]:
    """Move a positive-level weight into the dominant chamber.

    Returns ``(Lambda, word)`` with ``mu = s_{word[0]} s_{word[1]} ... Lambda``.
    At each step the smallest node with negative pairing is reflected, so the
    word is reduced and the endpoint is the unique dominant weight in the
    orbit.
    """
    if mu.level < 1:
        raise ValueError("to_dominant_affine needs level >= 1")
    cur = mu
    word: list[int] = []
    n = rs.rank
    while True:
        neg = next((i for i in range(n + 1) if affine_pairing(rs, i, cur) < 0), None)
        if neg is None:
            return cur, word
        cur = affine_reflect(rs, neg, cur)
        word.append(neg)


def cherednik_leq(rs: RootSystem, lam: Weight, mu: Weight) -> bool:
    """The Cherednik order ``lam <= mu``.

    Antidominant representatives are compared first (strictly); inside one
    W-orbit the order is the reversed dominance order, so the dominant member
    of an orbit is its minimum.
    """
    lam, mu = tuple(lam), tuple(mu)
    diff = tuple(a - b for a, b in zip(lam, mu))
    if not rs.in_root_lattice(diff):
        return False
    lam_m, mu_m = antidominant(rs, lam), antidominant(rs, mu)
    if lam_m != mu_m:
        return rs.in_positive_cone(tuple(a - b for a, b in zip(lam_m, mu_m)))
    return rs.in_positive_cone(diff)


def sigma_contains(rs: RootSystem, lam: Weight, mu: Weight) -> bool:
    """Whether ``mu`` lies in the lower set of ``lam`` for the Cherednik order."""
    return cherednik_leq(rs, mu, lam)


def sigma_set(rs: RootSystem, lam: Weight) -> set[Weight]:
    """Enumerate the lower set of ``lam`` without calling ``cherednik_leq``.

    It is the union of the W-orbits of the dominant weights strictly below
    ``lam_+`` in dominance order, together with the orbit points of ``lam``
    that lie above ``lam`` in dominance order.
    """
    from .cartan import dominant_weights_below

    lam = tuple(lam)
    top = to_dominant_finite(rs, lam)[0]
    out: set[Weight] = set()
    for nu in dominant_weights_below(rs, top):
        if nu != top:
            out.update(weyl_orbit(rs, nu))
    for v in weyl_orbit(rs, top):
        if rs.in_positive_cone(tuple(a - b for a, b in zip(v, lam))):
            out.add(v)
    return out


@lru_cache(maxsize=256)
def _sigma_points(rs: RootSystem, lam: Weight) -> np.ndarray:
    return np.array(sorted(sigma_set(rs, lam)), dtype=float)


def sigma_contains_hull(rs: RootSystem, lam: Weight, mu: Weight) -> bool:
    """Convex-hull characterization of the lower set, decided by linear programming.

    ``mu`` is accepted when it lies in the coset ``lam + Q`` and in the convex
    hull of the enumerated lower set.
    """
    from scipy.optimize import linprog

    lam, mu = tuple(lam), tuple(mu)
    if not rs.in_root_lattice(tuple(a - b for a, b in zip(lam, mu))):
        return False
    pts = _sigma_points(rs, lam)
    if any(tuple(int(x) for x in p) == mu for p in pts):
        return True
    m = len(pts)
    a_eq = np.vstack([pts.T, np.ones((1, m))])
    b_eq = np.array(list(mu) + [1.0])
    res = linprog(np.zeros(m), A_eq=a_eq, b_eq=b_eq, bounds=[(0, None)] * m, method="highs")
    return res.status == 0


def orbit_equiv(rs: RootSystem, lam: Weight, mu: Weight, k: int) -> Optional[int]:
    """The shift ``m`` with ``mu + k*Lambda_0 - m*delta`` in the orbit of ``lam + k*Lambda_0``.

    Returns ``None`` when ``mu`` is not an extremal weight of that orbit.
    """
    lam = tuple(lam)
    if k < 1 or not is_dominant(lam) or rs.theta_pairing(lam) > k:
        raise ValueError("orbit_equiv needs k >= 1 and a dominant lam with pairing <= k")
    top, _ = to_dominant_affine(rs, AffineWeight(tuple(mu), k, 0))
    if top.finite != lam:
        return None
    assert top.delta >= 0
    return top.delta


def level_dominant_weights(rs: RootSystem, k: int) -> list[Weight]:
    """Finite parts of the level-k dominant weights (delta coordinate 0)."""
    out = []
    bound = k
    for coords in itertools.product(range(bound + 1), repeat=rs.rank):
        if rs.theta_pairing(coords) <= k:
            out.append(tuple(coords))
    return out


__all__ = [
    "AffineWeight",
    "affine_pairing",
    "affine_reflect",
    "affine_weight",
    "apply_reflections",
    "cherednik_leq",
    "is_affine_dominant",
    "level_dominant_weights",
    "orbit_equiv",
    "sigma_contains",
    "sigma_contains_hull",
    "sigma_set",
    "to_dominant_affine",
]
