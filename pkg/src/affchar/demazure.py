"""Graded characters of the module families attached to a level.

* thin Demazure modules ``D^(k)_lam`` (exact, via Demazure operators),
* Weyl modules ``W^(k)_lam = D^(k)_{lam_-}``,
* integrable highest weight modules ``L(Lambda)`` up to a depth bound,
* projective modules ``P_lam`` (PBW product over the positive-degree roots),
* thick Weyl modules (integrable characters at the base level, then a
  descent in the level driven by the thin-side branching multiplicities).

Symmetric characters are also handled as graded irreducible multiplicities
``{(nu, q): mult}``; that form is what the expansions and the descent use.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .afweight import (
    AffineWeight,
    affine_pairing,
    affine_reflect,
    apply_reflections,
    is_affine_dominant,
    to_dominant_affine,
)
from .cartan import (
    RootSystem,
    Weight,
    antidominant,
    finite_irrep_char,
    is_dominant,
    to_dominant_finite,
)
from .charring import (
    GradedCharacter,
    _straighten_terms,
    apply_word,
    char_mul,
    demazure_op,
    irreducible_sum,
    normalize_at,
    saturate,
    saturate_multiplicities,
)

VMults = dict[tuple[Weight, int], int]


def _dual(rs: RootSystem, lam: Weight) -> Weight:
    """``-w0 lam``."""
    return tuple(-x for x in antidominant(rs, lam))


def _check_weight(rs: RootSystem, lam, *, dominant: bool = False) -> Weight:
    lam = tuple(int(x) for x in lam)
    if len(lam) != rs.rank:
        raise ValueError(f"weight {lam} has length {len(lam)}, expected {rs.rank}")
    if dominant and not is_dominant(lam):
        raise ValueError(f"weight {lam} is not dominant")
    return lam


def _check_level(k: int) -> int:
    if int(k) < 1:
        raise ValueError(f"level must be >= 1, got {k}")
    return int(k)


# root multiplicities -------------------------------------------------------

@dataclass(frozen=True)
class RootMultiplicityTable:
    """Which affine roots ``alpha + n delta`` occur, and with what multiplicity.

    Real roots: short finite roots at every ``n``, long ones only when the
    lacing number divides ``n``.  Imaginary roots ``n delta``: multiplicity
    equal to the rank when the lacing number divides ``n``, otherwise the
    number of short simple roots.
    """

    rs: RootSystem

    def real_allowed(self, n: int, root_index: int) -> bool:
        return (not self.rs.long_root_flags[root_index]) or n % self.rs.lacing == 0

    def real_roots(self, n: int) -> list[Weight]:
        """Finite parts ``alpha`` (both signs) with ``alpha + n delta`` a root, n != 0."""
        out = []
        for idx, beta in enumerate(self.rs.positive_roots):
            if self.real_allowed(n, idx):
                out.append(tuple(beta))
                out.append(tuple(-x for x in beta))
        return out

    def imaginary(self, n: int) -> int:
        if n == 0:
            raise ValueError("0 is not an imaginary root")
        return self.rs.rank if n % self.rs.lacing == 0 else self.rs.short_simple_count


# thin side ----------------------------------------------------------------

def thin_gch(rs: RootSystem, lam, k: int) -> GradedCharacter:
    """Graded character of the thin Demazure module ``D^(k)_lam`` (exact).

    The generating extremal weight ``lam + k Lambda_0`` sits at ``q^0``.
    """
    lam = _check_weight(rs, lam)
    k = _check_level(k)
    return _thin_cached(rs, lam, k)


@lru_cache(maxsize=4096)
def _thin_cached(rs: RootSystem, lam: Weight, k: int) -> GradedCharacter:
    return normalize_at(_thin_raw(rs, lam, k), 0)


@lru_cache(maxsize=16384)
def _thin_raw(rs: RootSystem, lam: Weight, k: int) -> GradedCharacter:
    """``pi_w e^Lambda`` in raw delta-coordinates, where ``lam + k Lambda_0 = w Lambda``.

    One letter of the reduced word is peeled per call, so weights whose
    words share a tail share the cached partial products.
    """
    mu = AffineWeight(lam, k, 0)
    i = next((j for j in range(rs.rank + 1) if affine_pairing(rs, j, mu) < 0), None)
    if i is None:
        return GradedCharacter.monomial(rs, lam, 0, level=k, anchor="raw")
    nu = affine_reflect(rs, i, mu)
    inner = _thin_raw(rs, nu.finite, k).shift(nu.delta)
    return demazure_op(rs, i, inner)


def weyl_gch(rs: RootSystem, lam, k: int) -> GradedCharacter:
    """Graded character of the Weyl module ``W^(k)_lam = D^(k)_{lam_-}``."""
    lam = _check_weight(rs, lam, dominant=True)
    return thin_gch(rs, antidominant(rs, lam), k)


def weyl_multiplicities(rs: RootSystem, lam, k: int) -> VMults:
    """Graded multiplicities ``[W^(k)_lam : V_nu]_q`` as ``{(nu, q): mult}``.

    ``W^(k)_lam`` is the finite symmetrization of ``D^(k)_lam``, so the
    multiplicities come from straightening the much smaller character of
    ``D^(k)_lam``.
    """
    lam = _check_weight(rs, lam, dominant=True)
    return _weyl_mults_cached(rs, lam, _check_level(k))


@lru_cache(maxsize=4096)
def _weyl_mults_cached(rs: RootSystem, lam: Weight, k: int) -> VMults:
    return _straighten_terms(rs, thin_gch(rs, lam, k))


# integrable and projective -------------------------------------------------

def integrable_gch(rs: RootSystem, top: AffineWeight, n_max: int) -> GradedCharacter:
    """``L(top)`` up to depth ``n_max``; the exponent is the depth below ``top``."""
    return saturate(rs, AffineWeight(tuple(top.finite), top.level, 0), n_max)


def projective_multiplicities(rs: RootSystem, lam, n_max: int) -> VMults:
    """Graded multiplicities ``[P_lam : V_nu]_q`` up to ``q^n_max``."""
    lam = _check_weight(rs, lam, dominant=True)
    pbw = pbw_character(rs, n_max)
    w, e, c = pbw.arrays
    shifted = GradedCharacter(rs.rank, w + np.asarray(lam, dtype=np.int64), e, c, trunc=n_max)
    return _straighten_terms(rs, shifted)


def projective_gch(rs: RootSystem, lam, n_max: int, k_ctx: int = 0) -> GradedCharacter:
    """``ch V_lam`` times the PBW product over the roots of positive degree, to ``q^n_max``."""
    if n_max < 0:
        raise ValueError("truncation degree must be >= 0")
    vm = projective_multiplicities(rs, lam, n_max)
    return irreducible_sum(rs, vm, level=k_ctx, trunc=n_max)


@lru_cache(maxsize=64)
def pbw_character(rs: RootSystem, n_max: int) -> GradedCharacter:
    """``prod_{n>=1} prod_{real alpha+n delta} (1 - q^n e^alpha)^-1 (1 - q^n)^-mult(n delta)``."""
    table = RootMultiplicityTable(rs)
    zero = (0,) * rs.rank
    acc = GradedCharacter.monomial(rs, zero, 0, trunc=n_max)
    for n in range(1, n_max + 1):
        reps = n_max // n
        for alpha in table.real_roots(n):
            geo = {(tuple(j * a for a in alpha), j * n): 1 for j in range(reps + 1)}
            acc = char_mul(acc, GradedCharacter.from_terms(rs, geo, trunc=n_max))
        m = table.imaginary(n)
        imag = {(zero, j * n): math.comb(m + j - 1, j) for j in range(reps + 1)}
        acc = char_mul(acc, GradedCharacter.from_terms(rs, imag, trunc=n_max))
    return acc


# thick side ----------------------------------------------------------------

def thick_multiplicities(rs: RootSystem, lam, k: int, n_max: int) -> VMults:
    """Graded multiplicities of the thick Weyl module ``W^(k)_lam`` (thick) up to ``q^n_max``.

    When ``<theta^vee, lam> < k`` the module is the twist of an integrable
    module of level ``k - 1``.  Otherwise the thick module of level ``k + 1``
    is filtered by thick modules of level ``k`` with the thin-side branching
    multiplicities; solving that filtration for the level-k term, degree by
    degree, gives the answer.  Every candidate in the filtration shows up as
    an irreducible of the level ``k + 1`` module in the same degree, because
    all the multiplicities involved are nonnegative.
    """
    lam = _check_weight(rs, lam, dominant=True)
    k = _check_level(k)
    if n_max < 0:
        raise ValueError("truncation degree must be >= 0")
    return dict(_thick_cached(rs, lam, k, n_max))


@lru_cache(maxsize=None)
def _thick_cached(rs: RootSystem, lam: Weight, k: int, n_max: int) -> tuple:
    if rs.theta_pairing(lam) < k:
        top = AffineWeight(_dual(rs, lam), k - 1, 0)
        vm = saturate_multiplicities(rs, top, n_max)
        out = {(_dual(rs, nu), d): c for (nu, d), c in vm.items()}
        return tuple(sorted(out.items()))
    if n_max == 0:
        return (((lam, 0), 1),)
    upper = dict(_thick_cached(rs, lam, k + 1, n_max))
    residual: dict[tuple[Weight, int], int] = defaultdict(int, upper)
    for nu in sorted({mu for (mu, _) in upper}):
        for e, b in sorted(_branching_coeff(rs, nu, k, lam).items()):
            if e > n_max or (nu == lam and e == 0):
                continue
            if e == 0:
                raise AssertionError(f"branching ({nu} : {lam}) has a constant term off the diagonal")
            for (mu, d), c in _thick_cached(rs, nu, k, n_max - e):
                residual[(mu, d + e)] -= b * c
    out = {key: v for key, v in residual.items() if v}
    bad = {key: v for key, v in out.items() if v < 0}
    if bad:
        raise AssertionError(f"thick descent produced negative multiplicities {sorted(bad.items())[:3]}")
    return tuple(sorted(out.items()))


def _branching_coeff(rs: RootSystem, nu: Weight, k: int, lam: Weight) -> dict[int, int]:
    """``(W^(k)_nu : W^(k+1)_lam)_q`` as ``{exp: coeff}``."""
    from .expand import branching_multiplicities

    return branching_multiplicities(rs, nu, k).get(lam, {})


def thick_weyl_gch(rs: RootSystem, lam, k: int, n_max: int) -> GradedCharacter:
    """Graded character of the thick Weyl module of level ``k`` to ``q^n_max``."""
    vm = thick_multiplicities(rs, lam, k, n_max)
    return irreducible_sum(rs, vm, level=k, trunc=n_max)


# Weyl-Kac oracle ------------------------------------------------------------

def _rho_af(rs: RootSystem) -> AffineWeight:
    return AffineWeight(rs.rho, 1 + rs.theta_pairing(rs.rho), 0)


def weyl_kac_numerator(rs: RootSystem, top: AffineWeight, n_max: int) -> GradedCharacter:
    """``sum_w (-1)^l(w) e^{w(top + rho) - rho}`` over the terms of depth at most ``n_max``.

    Exponents are depths below ``top``.  The orbit of the regular weight
    ``top + rho`` is explored downward from its dominant point; the number of
    reflections taken is the length of the Weyl group element.
    """
    if not is_affine_dominant(rs, top):
        raise ValueError("numerator needs a dominant weight")
    rho = _rho_af(rs)
    start = AffineWeight(tuple(a + b for a, b in zip(top.finite, rho.finite)), top.level + rho.level, 0)
    seen = {start: 0}
    frontier = [start]
    length = 0
    while frontier:
        length += 1
        nxt = []
        for mu in frontier:
            for i in range(rs.rank + 1):
                if affine_pairing(rs, i, mu) <= 0:
                    continue
                nu = affine_reflect(rs, i, mu)
                if -nu.delta > n_max or nu in seen:
                    continue
                seen[nu] = length
                nxt.append(nu)
        frontier = nxt
    terms = {}
    for mu, ell in seen.items():
        fin = tuple(a - b for a, b in zip(mu.finite, rs.rho))
        terms[(fin, -mu.delta)] = (-1) ** ell
    return GradedCharacter.from_terms(rs, terms, level=top.level, trunc=n_max, anchor="depth")


def weyl_kac_denominator(rs: RootSystem, n_max: int, level: int = 0) -> GradedCharacter:
    """``prod_{positive affine roots beta} (1 - e^-beta)^mult(beta)`` to depth ``n_max``."""
    table = RootMultiplicityTable(rs)
    zero = (0,) * rs.rank
    acc = GradedCharacter.monomial(rs, zero, 0, trunc=n_max, anchor="depth")
    for beta in rs.positive_roots:
        f = {(zero, 0): 1, (tuple(-x for x in beta), 0): -1}
        acc = char_mul(acc, GradedCharacter.from_terms(rs, f, trunc=n_max, anchor="depth"))
    for n in range(1, n_max + 1):
        for alpha in table.real_roots(n):
            f = {(zero, 0): 1, (tuple(-x for x in alpha), n): -1}
            acc = char_mul(acc, GradedCharacter.from_terms(rs, f, trunc=n_max, anchor="depth"))
        m = table.imaginary(n)
        f = {(zero, j * n): (-1) ** j * math.comb(m, j) for j in range(m + 1) if j * n <= n_max}
        acc = char_mul(acc, GradedCharacter.from_terms(rs, f, trunc=n_max, anchor="depth"))
    return acc.with_meta(level=level)


def weyl_kac_check(rs: RootSystem, top: AffineWeight, n_max: int) -> tuple[bool, Optional[GradedCharacter]]:
    """Compare ``saturate(top) * denominator`` with the alternating numerator to depth ``n_max``.

    Returns ``(ok, difference)``.
    """
    lhs = char_mul(integrable_gch(rs, top, n_max).with_meta(level=0),
                   weyl_kac_denominator(rs, n_max)).with_meta(level=top.level)
    rhs = weyl_kac_numerator(rs, top, n_max)
    diff = lhs - rhs
    return len(diff) == 0, (None if len(diff) == 0 else diff)


# the one-dimensional Demazure quotient -------------------------------------

def demext_word(rs: RootSystem, top: AffineWeight) -> tuple[AffineWeight, list[int]]:
    """``(Lambda', word)`` with ``top - Lambda_0 = s_{word[0]} s_{word[1]} ... Lambda'``.

    Only the nodes of the connected subdiagram through node 0 on which
    ``top`` pairs to zero are used; the first letter is 0.
    """
    k = top.level
    if k < 2 or rs.theta_pairing(top.finite) != k or not is_affine_dominant(rs, top):
        raise ValueError("demext needs a dominant weight of level >= 2 with <theta^vee, finite part> = level")
    zero_nodes = {i for i in range(rs.rank + 1) if affine_pairing(rs, i, top) == 0}
    adjacency = _affine_adjacency(rs)
    comp, stack = {0}, [0]
    while stack:
        i = stack.pop()
        for j in adjacency[i]:
            if j in zero_nodes and j not in comp:
                comp.add(j)
                stack.append(j)
    cur = AffineWeight(tuple(top.finite), k - 1, top.delta)
    word: list[int] = []
    while True:
        neg = next((i for i in sorted(comp) if affine_pairing(rs, i, cur) < 0), None)
        if neg is None:
            break
        cur = affine_reflect(rs, neg, cur)
        word.append(neg)
    return cur, word


@lru_cache(maxsize=None)
def _affine_adjacency(rs: RootSystem) -> dict[int, set[int]]:
    """Edges of the affine Dynkin diagram, read off the affine Cartan matrix."""
    n = rs.rank
    alpha0 = AffineWeight(tuple(-x for x in rs.theta), 0, 1)
    adj: dict[int, set[int]] = {i: set() for i in range(n + 1)}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j and rs.cartan[i - 1][j - 1] != 0:
                adj[i].add(j)
        if affine_pairing(rs, i, alpha0) != 0:
            adj[i].add(0)
            adj[0].add(i)
    return adj


def demext_difference(rs: RootSystem, lam_prime: AffineWeight, word: list[int]) -> GradedCharacter:
    """``pi_{word} e^{Lambda'} - pi_{word[1:]} e^{Lambda'}`` in raw coordinates."""
    seed = GradedCharacter.monomial(rs, lam_prime.finite, lam_prime.delta, level=lam_prime.level, anchor="raw")
    return apply_word(rs, word, seed) - apply_word(rs, word[1:], seed)


def demext_check(rs: RootSystem, top: AffineWeight) -> bool:
    """Whether the two Demazure characters differ by the single monomial ``e^{top - Lambda_0}``."""
    lam_prime, word = demext_word(rs, top)
    if not is_affine_dominant(rs, lam_prime) or not word or word[0] != 0:
        return False
    if apply_reflections(rs, word, lam_prime) != AffineWeight(tuple(top.finite), top.level - 1, top.delta):
        return False
    diff = demext_difference(rs, lam_prime, word)
    return diff.terms == {(tuple(top.finite), top.delta): 1}


def admissible_demext_weights(rs: RootSystem, k: int) -> list[AffineWeight]:
    """Dominant level-k weights whose finite part pairs with ``theta^vee`` to exactly k."""
    from .afweight import level_dominant_weights

    return [AffineWeight(lam, k, 0) for lam in level_dominant_weights(rs, k) if rs.theta_pairing(lam) == k]


__all__ = [
    "RootMultiplicityTable",
    "admissible_demext_weights",
    "demext_check",
    "demext_difference",
    "demext_word",
    "integrable_gch",
    "pbw_character",
    "projective_gch",
    "projective_multiplicities",
    "thick_multiplicities",
    "thick_weyl_gch",
    "thin_gch",
    "weyl_gch",
    "weyl_kac_check",
    "weyl_kac_denominator",
    "weyl_kac_numerator",
    "weyl_multiplicities",
]
