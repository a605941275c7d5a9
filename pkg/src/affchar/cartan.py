"""Finite root data for the simple Lie algebras of types A-G.

Node labels follow the Bourbaki plates.  Simple roots are written down in the
plates' orthonormal coordinates and everything else (Cartan matrix,
symmetrizer, root system, the dominant short root) is derived from them.

Weights are plain tuples of integers: the coordinates in the basis of
fundamental weights.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

Weight = tuple[int, ...]

_VALID_RANKS = {
    "A": lambda n: n >= 1,
    "B": lambda n: n >= 2,
    "C": lambda n: n >= 2,
    "D": lambda n: n >= 4,
    "E": lambda n: n in (6, 7, 8),
    "F": lambda n: n == 4,
    "G": lambda n: n == 2,
}


def _unit(dim: int, i: int, scale: Fraction = Fraction(1)) -> list[Fraction]:
    v = [Fraction(0)] * dim
    v[i] = scale
    return v


def _sub(u, v):
    return [a - b for a, b in zip(u, v)]


def _simple_roots(type_label: str, rank: int) -> list[list[Fraction]]:
    """Simple roots in the orthonormal coordinates of the Bourbaki plates."""
    n = rank
    if type_label == "A":
        d = n + 1
        return [_sub(_unit(d, i), _unit(d, i + 1)) for i in range(n)]
    if type_label in "BCD":
        roots = [_sub(_unit(n, i), _unit(n, i + 1)) for i in range(n - 1)]
        if type_label == "B":
            roots.append(_unit(n, n - 1))
        elif type_label == "C":
            roots.append(_unit(n, n - 1, Fraction(2)))
        else:
            last = _unit(n, n - 2)
            last[n - 1] = Fraction(1)
            roots.append(last)
        return roots
    if type_label == "E":
        h = Fraction(1, 2)
        a1 = [h, -h, -h, -h, -h, -h, -h, h]
        a2 = _unit(8, 0)
        a2[1] = Fraction(1)
        rest = [_sub(_unit(8, i), _unit(8, i - 1)) for i in range(1, 7)]
        return ([a1, a2] + rest)[:n]
    if type_label == "F":
        h = Fraction(1, 2)
        return [
            _sub(_unit(4, 1), _unit(4, 2)),
            _sub(_unit(4, 2), _unit(4, 3)),
            _unit(4, 3),
            [h, -h, -h, -h],
        ]
    if type_label == "G":
        return [
            [Fraction(1), Fraction(-1), Fraction(0)],
            [Fraction(-2), Fraction(1), Fraction(1)],
        ]
    raise ValueError(f"unknown type {type_label!r}")


def _dot(u, v) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def _inverse(matrix: list[list[int]]) -> list[list[Fraction]]:
    """Exact inverse by Gauss-Jordan elimination over the rationals."""
    n = len(matrix)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[pivot] = aug[pivot], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


@dataclass(frozen=True, eq=False)
class RootSystem:
    """Immutable finite Cartan datum together with the twisted-affine constants.

    ``cartan[i][j]`` is the pairing of the i-th simple coroot with the j-th
    simple root, so column ``j`` lists the fundamental-weight coordinates of
    the simple root ``j``.  ``theta`` is the dominant short root and
    ``theta_covector[i]`` is the pairing of its coroot with the i-th
    fundamental weight.
    """

    type_label: str
    rank: int
    cartan: tuple[tuple[int, ...], ...]
    symmetrizer: tuple[int, ...]
    lacing: int
    theta: Weight
    theta_roots: tuple[int, ...]
    theta_covector: tuple[int, ...]
    short_simple_count: int
    positive_roots: tuple[Weight, ...] = field(repr=False)
    positive_root_coords: tuple[tuple[int, ...], ...] = field(repr=False)
    long_root_flags: tuple[bool, ...] = field(repr=False)
    inverse_cartan: tuple[tuple[Fraction, ...], ...] = field(repr=False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RootSystem):
            return NotImplemented
        return (self.type_label, self.cartan) == (other.type_label, other.cartan)

    def __hash__(self) -> int:
        # the Cartan matrix determines every other field
        return hash((self.type_label, self.cartan))

    @property
    def name(self) -> str:
        return f"{self.type_label}{self.rank}"

    @property
    def rho(self) -> Weight:
        return (1,) * self.rank

    @property
    def simple_roots(self) -> tuple[Weight, ...]:
        """Fundamental-weight coordinates of the simple roots (columns of A)."""
        return tuple(tuple(self.cartan[i][j] for i in range(self.rank))
                     for j in range(self.rank))

    @property
    def zero(self) -> Weight:
        return (0,) * self.rank

    def cartan_array(self) -> np.ndarray:
        return _cartan_array(self)

    def root_coords(self, weight: Weight) -> tuple[Fraction, ...]:
        """Coordinates of ``weight`` in the basis of simple roots."""
        return tuple(sum((self.inverse_cartan[i][j] * weight[j] for j in range(self.rank)),
                         Fraction(0)) for i in range(self.rank))

    def in_root_lattice(self, weight: Weight) -> bool:
        return all(c.denominator == 1 for c in self.root_coords(weight))

    def in_positive_cone(self, weight: Weight) -> bool:
        """True when ``weight`` is a non-negative integer combination of simple roots."""
        return all(c.denominator == 1 and c >= 0 for c in self.root_coords(weight))

    def theta_pairing(self, weight: Weight) -> int:
        return sum(a * b for a, b in zip(weight, self.theta_covector))

    def form(self, u: Weight, v: Weight) -> Fraction:
        """Invariant form, normalized so that short roots have squared length 2."""
        cv = self.root_coords(v)
        return sum((u[j] * self.symmetrizer[j] * cv[j] for j in range(self.rank)), Fraction(0))

    def coroot_pairing(self, weight: Weight, root_index: int) -> Fraction:
        """Pairing of ``weight`` with the coroot of the positive root ``root_index``."""
        beta = self.positive_roots[root_index]
        return 2 * self.form(weight, beta) / self.form(beta, beta)


@lru_cache(maxsize=None)
def _cartan_array(rs: RootSystem) -> np.ndarray:
    arr = np.array(rs.cartan, dtype=np.int64)
    arr.setflags(write=False)
    return arr


def _closure_of_roots(cartan: list[list[int]]) -> set[Weight]:
    n = len(cartan)
    simple = [tuple(cartan[i][j] for i in range(n)) for j in range(n)]
    seen = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for root in frontier:
            for i in range(n):
                c = root[i]
                if c == 0:
                    continue
                image = tuple(root[t] - c * simple[i][t] for t in range(n))
                if image not in seen:
                    seen.add(image)
                    nxt.append(image)
        frontier = nxt
    return seen


@lru_cache(maxsize=None)
def build_root_system(type_label: str, rank: int) -> RootSystem:
    """Assemble the root datum of the given finite type.

    The dominant short root is found by enumerating all roots, never by a
    per-type table, and the invariants listed in the class docstring are
    checked before returning.
    """
    type_label = str(type_label).upper()
    if type_label not in _VALID_RANKS or not isinstance(rank, int) or not _VALID_RANKS[type_label](rank):
        raise ValueError(f"invalid finite type ({type_label}, {rank})")

    simple = _simple_roots(type_label, rank)
    norms = [_dot(a, a) for a in simple]
    cartan = [[int(2 * _dot(simple[i], simple[j]) / norms[i]) for j in range(rank)]
              for i in range(rank)]
    shortest = min(norms)
    symmetrizer = tuple(int(x / shortest) for x in norms)
    lacing = max(symmetrizer) // min(symmetrizer)
    inverse = _inverse(cartan)

    def to_roots(w: Weight) -> tuple[Fraction, ...]:
        return tuple(sum((inverse[i][j] * w[j] for j in range(rank)), Fraction(0))
                     for i in range(rank))

    roots = _closure_of_roots(cartan)
    positive = []
    for r in roots:
        c = to_roots(r)
        if all(x >= 0 for x in c):
            positive.append((r, tuple(int(x) for x in c)))
    positive.sort(key=lambda rc: (sum(rc[1]), rc[1]))

    def norm(coords: tuple[int, ...]) -> int:
        # squared length in units where short roots have length 2
        return sum(coords[i] * coords[j] * symmetrizer[i] * cartan[i][j]
                   for i in range(rank) for j in range(rank))

    short_len = min(norm(c) for _, c in positive)
    long_flags = tuple(norm(c) != short_len for _, c in positive)
    dominant_short = [(r, c) for (r, c), is_long in zip(positive, long_flags)
                      if not is_long and all(x >= 0 for x in r)]
    if len(dominant_short) != 1:
        raise AssertionError("expected a unique dominant short root")
    theta, theta_roots = dominant_short[0]
    # theta is short, so its coroot has coordinates c_j d_j on the simple coroots
    theta_covector = tuple(theta_roots[j] * symmetrizer[j] for j in range(rank))
    short_simple_count = sum(1 for d in symmetrizer if d == min(symmetrizer))

    rs = RootSystem(
        type_label=type_label,
        rank=rank,
        cartan=tuple(tuple(row) for row in cartan),
        symmetrizer=symmetrizer,
        lacing=lacing,
        theta=theta,
        theta_roots=theta_roots,
        theta_covector=theta_covector,
        short_simple_count=short_simple_count,
        positive_roots=tuple(r for r, _ in positive),
        positive_root_coords=tuple(c for _, c in positive),
        long_root_flags=long_flags,
        inverse_cartan=tuple(tuple(row) for row in inverse),
    )
    _check_invariants(rs)
    return rs


def _check_invariants(rs: RootSystem) -> None:
    n = rs.rank
    sym = [[rs.symmetrizer[i] * rs.cartan[i][j] for j in range(n)] for i in range(n)]
    assert all(sym[i][j] == sym[j][i] for i in range(n) for j in range(n))
    eig = np.linalg.eigvalsh(np.array(sym, dtype=float))
    assert eig.min() > 0, "symmetrized Cartan matrix must be positive definite"
    assert rs.theta_pairing(rs.theta) == 2
    assert all(x >= 0 for x in rs.theta)
    assert (rs.lacing == 1) == (rs.type_label in "ADE")
    lowest = to_dominant_finite(rs, tuple(-x for x in rs.theta))[0]
    assert lowest == rs.theta, "-w0 must fix theta"


def is_dominant(w: Weight) -> bool:
    return all(x >= 0 for x in w)


def reflect(rs: RootSystem, i: int, w: Weight) -> Weight:
    """Simple reflection ``s_i`` (nodes are numbered 1..rank)."""
    if not 1 <= i <= rs.rank:
        raise ValueError(f"node {i} out of range 1..{rs.rank}")
    c = w[i - 1]
    if c == 0:
        return tuple(w)
    return tuple(w[t] - c * rs.cartan[t][i - 1] for t in range(rs.rank))


def to_dominant_finite(rs: RootSystem, w: Weight) -> tuple[Weight, list[int]]:
    """Move ``w`` into the dominant chamber.

    Returns ``(dominant, word)`` with ``w = s_{word[0]} s_{word[1]} ... dominant``;
    each letter was a node with strictly negative pairing, so the word is reduced.
    """
    cur = tuple(w)
    word: list[int] = []
    while True:
        neg = next((i for i, x in enumerate(cur) if x < 0), None)
        if neg is None:
            return cur, word
        cur = reflect(rs, neg + 1, cur)
        word.append(neg + 1)


def antidominant(rs: RootSystem, w: Weight) -> Weight:
    """The unique antidominant weight in the W-orbit of ``w``."""
    dom = to_dominant_finite(rs, w)[0]
    return tuple(-x for x in to_dominant_finite(rs, tuple(-x for x in dom))[0])


@lru_cache(maxsize=None)
def longest_word(rs: RootSystem) -> tuple[int, ...]:
    """A reduced word for the longest element of W."""
    _, word = to_dominant_finite(rs, tuple(-x for x in rs.rho))
    return tuple(word)


def weyl_group_order(rs: RootSystem) -> int:
    return len(weyl_orbit(rs, rs.rho))


def weyl_orbit(rs: RootSystem, w: Weight) -> list[Weight]:
    seen = {tuple(w)}
    frontier = [tuple(w)]
    while frontier:
        nxt = []
        for v in frontier:
            for i in range(1, rs.rank + 1):
                u = reflect(rs, i, v)
                if u not in seen:
                    seen.add(u)
                    nxt.append(u)
        frontier = nxt
    return sorted(seen)


def weyl_dimension(rs: RootSystem, lam: Weight) -> int:
    """Weyl dimension formula."""
    if not is_dominant(lam):
        raise ValueError("weyl_dimension needs a dominant weight")
    shifted = tuple(x + 1 for x in lam)
    num = Fraction(1)
    for idx in range(len(rs.positive_roots)):
        num *= rs.coroot_pairing(shifted, idx) / rs.coroot_pairing(rs.rho, idx)
    assert num.denominator == 1
    return int(num)


def dominant_weights_below(rs: RootSystem, lam: Weight) -> list[Weight]:
    """Dominant weights ``mu`` with ``lam - mu`` in the positive root cone.

    Every dominant ``mu < nu`` lies below some dominant ``nu - beta`` with
    ``beta`` a positive root, so a search that subtracts positive roots and
    keeps only dominant results reaches all of them.
    """
    lam = tuple(lam)
    out = {lam}
    frontier = [lam]
    while frontier:
        nxt = []
        for v in frontier:
            for beta in rs.positive_roots:
                u = tuple(x - y for x, y in zip(v, beta))
                if is_dominant(u) and u not in out:
                    out.add(u)
                    nxt.append(u)
        frontier = nxt
    return sorted(out)


def freudenthal_multiplicities(rs: RootSystem, lam: Weight) -> dict[Weight, int]:
    """Weight multiplicities of V(lam) by Freudenthal's recursion.

    Independent of the Demazure route used in production; kept for
    verification only.
    """
    if not is_dominant(lam):
        raise ValueError("freudenthal_multiplicities needs a dominant weight")
    rho = rs.rho
    lam_rho = tuple(x + y for x, y in zip(lam, rho))
    top = rs.form(lam_rho, lam_rho)
    dominants = dominant_weights_below(rs, lam)
    # Process dominant weights by increasing depth below lam.
    depth = {mu: sum(rs.root_coords(tuple(a - b for a, b in zip(lam, mu)))) for mu in dominants}
    mult: dict[Weight, int] = {}

    def m(mu: Weight) -> int:
        return mult.get(to_dominant_finite(rs, mu)[0], 0)

    for mu in sorted(dominants, key=lambda v: depth[v]):
        if mu == tuple(lam):
            mult[mu] = 1
            continue
        mu_rho = tuple(x + y for x, y in zip(mu, rho))
        denom = top - rs.form(mu_rho, mu_rho)
        total = Fraction(0)
        for alpha in rs.positive_roots:
            j = 1
            while True:
                nu = tuple(x + j * a for x, a in zip(mu, alpha))
                dom = to_dominant_finite(rs, nu)[0]
                if not rs.in_positive_cone(tuple(a - b for a, b in zip(lam, dom))):
                    break
                total += m(nu) * rs.form(nu, alpha)
                j += 1
        value = 2 * total / denom
        assert value.denominator == 1
        mult[mu] = int(value)
    out: dict[Weight, int] = {}
    for mu, k in mult.items():
        if k:
            for v in weyl_orbit(rs, mu):
                out[v] = k
    return out


def finite_irrep_char(rs: RootSystem, lam: Weight, *, oracle: bool = False):
    """Character of the irreducible module V(lam) as a q-degree-0 character.

    Production path: the Demazure operator of the longest element applied to
    ``e^lam``.  With ``oracle=True`` the Freudenthal recursion is used instead.
    """
    from .charring import GradedCharacter, apply_word

    lam = tuple(int(x) for x in lam)
    if len(lam) != rs.rank or not is_dominant(lam):
        raise ValueError(f"finite_irrep_char needs a dominant weight of length {rs.rank}, got {lam}")
    if oracle:
        mults = freudenthal_multiplicities(rs, lam)
        return GradedCharacter.from_terms(rs, {(w, 0): c for w, c in mults.items()})
    return _irrep_cached(rs, lam)


@lru_cache(maxsize=4096)
def _irrep_cached(rs: RootSystem, lam: Weight):
    from .charring import GradedCharacter, apply_word

    seed = GradedCharacter.monomial(rs, lam, 0)
    return apply_word(rs, longest_word(rs), seed)


def straighten(rs: RootSystem, weights: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Dot-action straightening of many weights at once.

    For each row ``beta`` returns ``(nu, sign)`` such that the Weyl character
    formula applied to ``e^beta`` equals ``sign * ch V(nu)``; ``sign`` is 0 when
    ``beta + rho`` lies on a wall.
    """
    a = rs.cartan_array()
    v = np.asarray(weights, dtype=np.int64) + 1
    sign = np.ones(len(v), dtype=np.int64)
    if len(v) == 0:
        return v.copy(), sign
    active = np.ones(len(v), dtype=bool)
    while True:
        neg = (v < 0) & active[:, None]
        rows = np.flatnonzero(neg.any(axis=1))
        if len(rows) == 0:
            break
        cols = neg[rows].argmax(axis=1)
        c = v[rows, cols]
        v[rows] -= c[:, None] * a[:, cols].T
        sign[rows] *= -1
    sign[(v == 0).any(axis=1)] = 0
    return v - 1, sign


def is_w_invariant(rs: RootSystem, mults: dict[Weight, int]) -> bool:
    for w, c in mults.items():
        for i in range(1, rs.rank + 1):
            if mults.get(reflect(rs, i, w), 0) != c:
                return False
    return True


def decompose_slice(rs: RootSystem, s) -> dict[Weight, int]:
    """Multiplicities of irreducible characters in a W-invariant q^0 character.

    ``s`` is either a ``GradedCharacter`` concentrated in a single q-degree or a
    mapping weight -> multiplicity.
    """
    if hasattr(s, "terms"):
        exps = {e for (_, e) in s.terms}
        if len(exps) > 1:
            raise ValueError("decompose_slice expects a single q-degree")
        mults = {w: c for (w, _), c in s.terms.items()}
    else:
        mults = {tuple(w): int(c) for w, c in s.items() if c}
    if not is_w_invariant(rs, mults):
        raise ValueError("decompose_slice: input is not W-invariant")
    if not mults:
        return {}
    keys = list(mults)
    arr = np.array(keys, dtype=np.int64).reshape(len(keys), rs.rank)
    coeffs = [mults[k] for k in keys]
    nus, signs = straighten(rs, arr)
    out: dict[Weight, int] = {}
    for nu, sg, c in zip(map(tuple, nus.tolist()), signs.tolist(), coeffs):
        if sg:
            out[nu] = out.get(nu, 0) + sg * c
    return {k: v for k, v in sorted(out.items()) if v}


__all__ = [
    "RootSystem",
    "Weight",
    "antidominant",
    "build_root_system",
    "decompose_slice",
    "finite_irrep_char",
    "freudenthal_multiplicities",
    "is_dominant",
    "is_w_invariant",
    "longest_word",
    "reflect",
    "straighten",
    "to_dominant_finite",
    "weyl_dimension",
    "weyl_group_order",
    "weyl_orbit",
]
