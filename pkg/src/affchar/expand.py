"""Triangular expansions of graded characters in the module families.

Symmetric expansions work on graded irreducible multiplicities: every basis
character of a symmetric family has ``V_mu`` alone in degree 0, so a whole
q-slice is peeled at once.  The thin expansion peels one maximal weight (for
the Cherednik order) at a time.
"""

from __future__ import annotations

import warnings
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Optional, Union

from .afweight import cherednik_leq, orbit_equiv
from .cartan import RootSystem, Weight, antidominant, is_dominant
from .charring import GradedCharacter, QPoly, _straighten_terms, char_mul, irreducible_multiplicities
from .demazure import (
    VMults,
    projective_multiplicities,
    thick_multiplicities,
    thin_gch,
    weyl_gch,
    weyl_multiplicities,
)

FAMILIES = ("V", "D", "W", "thick")


@dataclass(frozen=True)
class Basis:
    family: str
    level: Optional[int] = None
    truncation: Optional[int] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown basis family {self.family!r}")
        if self.family != "V" and (self.level is None or self.level < 1):
            raise ValueError(f"basis {self.family} needs a level >= 1")

    def to_json(self) -> dict:
        return {"family": self.family, "level": self.level,
                "truncation": "exact" if self.truncation is None else self.truncation}


@dataclass
class Expansion:
    basis: Basis
    coeffs: dict[Weight, QPoly] = field(default_factory=dict)

    def coeff(self, mu: Weight) -> QPoly:
        return self.coeffs.get(tuple(mu), QPoly(trunc=self.basis.truncation))

    def as_dicts(self) -> dict[Weight, dict[int, int]]:
        return {mu: dict(p.coeffs) for mu, p in self.coeffs.items()}

    def is_nonnegative(self) -> bool:
        return all(p.is_nonnegative() for p in self.coeffs.values())

    def to_json(self) -> dict:
        return {
            "basis": self.basis.to_json(),
            "coeffs": [{"weight": list(mu), "poly": p.pairs()} for mu, p in sorted(self.coeffs.items())],
        }


def _basis_multiplicities(rs: RootSystem, basis: Basis, nu: Weight, depth: Optional[int]) -> VMults:
    if basis.family == "V":
        return {(nu, 0): 1}
    if basis.family == "W":
        return weyl_multiplicities(rs, nu, basis.level)
    if basis.family == "thick":
        if depth is None:
            raise ValueError("the thick basis needs a truncation degree")
        return thick_multiplicities(rs, nu, basis.level, depth)
    raise ValueError(f"basis {basis.family} is not symmetric")


def _as_multiplicities(rs: RootSystem, f) -> tuple[VMults, Optional[int]]:
    if isinstance(f, GradedCharacter):
        if len(f) and f.min_exp() < 0:
            raise ValueError("expansion needs exponents >= 0")
        return irreducible_multiplicities(rs, f), f.trunc
    return {(tuple(nu), int(e)): int(c) for (nu, e), c in f.items() if c}, None


def expand_symmetric(rs: RootSystem, f: Union[GradedCharacter, Mapping], family: str,
                     k: Optional[int], n_max: Optional[int]) -> Expansion:
    """Expand a W-invariant character in the basis ``family`` of level ``k``.

    ``f`` is a character or a map ``(nu, q) -> multiplicity``.  With
    ``n_max=None`` the input must be exact and the peeling runs until nothing
    is left.
    """
    vm, trunc = _as_multiplicities(rs, f)
    if trunc is not None:
        if n_max is None or n_max > trunc:
            raise ValueError(f"input is exact only up to q^{trunc}; requested {n_max}")
    if family == "thick" and n_max is None:
        raise ValueError("thick-basis expansions need a truncation degree")
    basis = Basis(family, k if family != "V" else None, n_max)
    if any(e < 0 for (_, e) in vm):
        raise ValueError("expansion needs exponents >= 0")
    residual: dict[tuple[Weight, int], int] = defaultdict(int)
    for (nu, e), c in vm.items():
        if n_max is None or e <= n_max:
            residual[(nu, e)] += c
    coeffs: dict[Weight, dict[int, int]] = defaultdict(dict)
    guard = 0
    while True:
        live = [key for key, v in residual.items() if v]
        if not live:
            break
        m = min(e for (_, e) in live)
        if n_max is not None and m > n_max:
            break
        guard += 1
        if guard > 10_000:
            raise RuntimeError("symmetric expansion does not terminate")
        head = {nu: residual[(nu, e)] for (nu, e) in live if e == m}
        for nu, a in sorted(head.items()):
            coeffs[nu][m] = coeffs[nu].get(m, 0) + a
            depth = None if n_max is None else n_max - m
            for (mu, d), b in _basis_multiplicities(rs, basis, nu, depth).items():
                if n_max is None or d + m <= n_max:
                    residual[(mu, d + m)] -= a * b
        leftover = [nu for nu in head if residual[(nu, m)]]
        if leftover:
            raise AssertionError(f"basis elements {leftover} are not unitriangular in degree {m}")
    return Expansion(basis, {nu: QPoly(c, n_max) for nu, c in sorted(coeffs.items()) if any(c.values())})


def expand_thin(rs: RootSystem, f: GradedCharacter, k: int, n_max: Optional[int] = None, *,
                pick_last: bool = False) -> Expansion:
    """Expand ``f`` in the thin Demazure basis of level ``k``.

    In the lowest live q-degree a maximal weight for the Cherednik order is
    peeled; ``pick_last`` selects the last instead of the first maximal
    weight in sorted order (the result must not depend on it).
    """
    if len(f) and f.min_exp() < 0:
        raise ValueError("expansion needs exponents >= 0")
    if f.trunc is not None and (n_max is None or n_max > f.trunc):
        raise ValueError(f"input is exact only up to q^{f.trunc}")
    slices: dict[int, dict[Weight, int]] = defaultdict(lambda: defaultdict(int))
    for (w, e), c in f.terms.items():
        if n_max is None or e <= n_max:
            slices[e][w] += c
    coeffs: dict[Weight, dict[int, int]] = defaultdict(dict)
    keys: dict[Weight, tuple[Fraction, Fraction]] = {}
    guard = 0
    while True:
        for e in [e for e, sl in slices.items() if not any(sl.values())]:
            del slices[e]
        if not slices:
            break
        m = min(slices)
        if n_max is not None and m > n_max:
            break
        current = slices[m]
        weights = sorted(w for w, c in current.items() if c)
        if pick_last:
            maxima = [w for w in weights
                      if not any(v != w and cherednik_leq(rs, w, v) for v in weights)]
            mu = maxima[-1]
        else:
            for w in weights:
                if w not in keys:
                    keys[w] = _order_key(rs, w)
            mu = max(weights, key=keys.__getitem__)
        a = current[mu]
        coeffs[mu][m] = coeffs[mu].get(m, 0) + a
        for (w, e), c in thin_gch(rs, mu, k).terms.items():
            if n_max is None or e + m <= n_max:
                slices[e + m][w] -= a * c
        if current[mu]:
            raise AssertionError(f"thin basis element {mu} is not unitriangular")
        for w in [w for w, c in current.items() if not c]:
            del current[w]
        guard += 1
        if guard > 1_000_000:
            raise RuntimeError("thin expansion does not terminate")
    return Expansion(Basis("D", k, n_max),
                     {nu: QPoly(c, n_max) for nu, c in sorted(coeffs.items()) if any(c.values())})


def _height(rs: RootSystem, w: Weight) -> Fraction:
    return sum(rs.root_coords(w), Fraction(0))


def _order_key(rs: RootSystem, w: Weight) -> tuple[Fraction, Fraction]:
    """Strictly increasing along the Cherednik order, so its argmax is a maximal element."""
    return (-_height(rs, antidominant(rs, w)), -_height(rs, w))


# branching -------------------------------------------------------------------

def branching_multiplicities(rs: RootSystem, mu: Weight, k: int) -> dict[Weight, dict[int, int]]:
    """``(W^(k)_mu : W^(k+1)_lam)_q`` for all ``lam``, as ``{lam: {exp: coeff}}``."""
    return _branching_cached(rs, tuple(mu), int(k))


@lru_cache(maxsize=None)
def _branching_cached(rs: RootSystem, mu: Weight, k: int) -> dict[Weight, dict[int, int]]:
    return expand_symmetric(rs, weyl_multiplicities(rs, mu, k), "W", k + 1, None).as_dicts()


def branching_weyl(rs: RootSystem, mu, k: int) -> Expansion:
    """Expansion of ``W^(k)_mu`` in the Weyl modules of level ``k + 1``."""
    mu = tuple(int(x) for x in mu)
    if not is_dominant(mu):
        raise ValueError(f"branching needs a dominant weight, got {mu}")
    if k < 1:
        raise ValueError("level must be >= 1")
    coeffs = branching_multiplicities(rs, mu, k)
    return Expansion(Basis("W", k + 1, None), {lam: QPoly(c) for lam, c in coeffs.items()})


def corollary_num_verify(rs: RootSystem, k: int, lams: Iterable[Weight],
                         mus: Iterable[Weight]) -> list[dict]:
    """Compare branching coefficients with the extremal-orbit prediction.

    For ``<theta^vee, lam> < k`` the coefficient of ``W^(k+1)_lam`` in
    ``W^(k)_mu`` is ``q^m`` when ``mu + k Lambda_0 - m delta`` lies in the orbit
    of ``lam + k Lambda_0`` and 0 otherwise.  Returns the mismatches.
    """
    if k < 1:
        raise ValueError("level must be >= 1")
    mismatches = []
    mus = [tuple(m) for m in mus]
    for lam in lams:
        lam = tuple(lam)
        if rs.theta_pairing(lam) >= k or not is_dominant(lam):
            raise ValueError(f"{lam} is not admissible at level {k}")
        for mu in mus:
            actual = branching_multiplicities(rs, mu, k).get(lam, {})
            m = orbit_equiv(rs, lam, mu, k)
            expected = {} if m is None else {m: 1}
            if actual != expected:
                mismatches.append({"lambda": lam, "mu": mu, "expected": expected, "actual": actual})
    return mismatches


def socle_degree_check(rs: RootSystem, lam: Weight, mu: Weight, k: int) -> bool:
    """When ``W^(k+1)_lam`` occurs in ``W^(k)_mu`` as ``q^m``, ``m`` is the top degree of ``W^(k)_mu``."""
    m = orbit_equiv(rs, tuple(lam), tuple(mu), k)
    if m is None:
        return True
    top = max(e for (_, e) in weyl_multiplicities(rs, tuple(mu), k))
    return top == m


def reciprocity_sides(rs: RootSystem, lam, mu, k: int, n_max: int) -> tuple[dict[int, int], dict[int, int]]:
    """``(P_lam : thick W^(k)_mu)_q`` and ``[W^(k)_mu : V_lam]_q`` up to ``q^n_max``."""
    lam, mu = tuple(lam), tuple(mu)
    exp = expand_symmetric(rs, projective_multiplicities(rs, lam, n_max), "thick", k, n_max)
    lhs = dict(exp.coeff(mu).coeffs)
    rhs = {e: c for (nu, e), c in weyl_multiplicities(rs, mu, k).items() if nu == lam and e <= n_max}
    return lhs, rhs


def reciprocity_check(rs: RootSystem, lam, mu, k: int, n_max: int) -> bool:
    lhs, rhs = reciprocity_sides(rs, lam, mu, k, n_max)
    return lhs == rhs


def thick_transpose_check(rs: RootSystem, lam, k: int, n_max: int) -> list[dict]:
    """Expand the level ``k + 1`` thick module in the level ``k`` thick basis and
    compare with the transposed thin branching matrix.  Returns mismatches."""
    lam = tuple(lam)
    upper = thick_multiplicities(rs, lam, k + 1, n_max)
    exp = expand_symmetric(rs, upper, "thick", k, n_max)
    mismatches = []
    for mu in sorted({nu for (nu, _) in upper}):
        want = {e: c for e, c in branching_multiplicities(rs, mu, k).get(lam, {}).items() if e <= n_max}
        got = dict(exp.coeff(mu).coeffs)
        if want != got:
            mismatches.append({"mu": mu, "thick": got, "thin": want})
    return mismatches


class NonSimplyLacedKostka(UserWarning):
    """Kostka coefficients requested outside the simply-laced types."""


# Kostka polynomials --------------------------------------------------------------

def tensor_multiplicities(rs: RootSystem, factors: Iterable[tuple[int, Weight]]) -> VMults:
    """Graded multiplicities of the product of Weyl-module characters ``W^(l)_lam``."""
    acc: Optional[GradedCharacter] = None
    for level, lam in factors:
        ch = weyl_gch(rs, tuple(lam), level).with_meta(level=0)
        acc = ch if acc is None else char_mul(acc, ch)
    if acc is None:
        return {((0,) * rs.rank, 0): 1}
    return _straighten_terms(rs, acc)


def kostka(rs: RootSystem, factors: Iterable[tuple[int, Weight]], k: int,
           n_max: Optional[int] = None) -> dict[Weight, QPoly]:
    """Coefficients of ``W^(k+1)_lam`` in the product of the factors ``W^(l_i)_{lam_i}``."""
    factors = [(int(l), tuple(lam)) for l, lam in factors]
    for l, lam in factors:
        if l > k:
            raise ValueError(f"factor level {l} exceeds {k}")
        if l < 1 or not is_dominant(lam):
            raise ValueError(f"bad factor ({l}, {lam})")
    if rs.lacing != 1:
        warnings.warn(f"{rs.name} is not simply laced; the Kostka interpretation of these "
                      "coefficients is only established for simply-laced types",
                      NonSimplyLacedKostka, stacklevel=2)
    vm = tensor_multiplicities(rs, factors)
    return expand_symmetric(rs, vm, "W", k + 1, n_max).coeffs


__all__ = [
    "Basis",
    "Expansion",
    "NonSimplyLacedKostka",
    "branching_multiplicities",
    "branching_weyl",
    "corollary_num_verify",
    "expand_symmetric",
    "expand_thin",
    "kostka",
    "reciprocity_check",
    "reciprocity_sides",
    "socle_degree_check",
    "tensor_multiplicities",
    "thick_transpose_check",
]
