"""Sparse graded characters and the Demazure string operators acting on them.

A ``GradedCharacter`` is a finite sum of ``coeff * q^exp * e^weight`` with
integer coefficients.  It is stored as three aligned numpy arrays in a
canonical order (sorted by exponent, then weight), so equality is array
equality and every fold is order independent.

The exponent column is interpreted through ``anchor``:

``raw``
    the delta-coordinate of the affine weight, as produced inside a
    Demazure computation;
``q``
    a q-degree measured upward from a generating extremal weight (the
    user-facing normalization; every exponent is >= 0);
``depth``
    the depth below the highest weight of an integrable module.

Removing ``alpha_0`` lowers the exponent by one for ``raw`` and ``q`` data and
raises it by one for ``depth`` data.
"""

from __future__ import annotations

import math
from collections import defaultdict
from typing import Iterable, Mapping, Optional

import numpy as np

from .afweight import AffineWeight, affine_pairing, is_affine_dominant
from .cartan import RootSystem, Weight, longest_word

_BIG = 2**62
ANCHORS = ("raw", "q", "depth")


def _needs_bigint(c: np.ndarray, factor: int = 1) -> bool:
    if c.dtype == object or len(c) == 0:
        return False
    return int(np.abs(c).max()) * max(len(c), 1) * max(factor, 1) >= _BIG


def _canonical(w: np.ndarray, e: np.ndarray, c: np.ndarray):
    """Sum duplicate (weight, exponent) rows, drop zeros, sort canonically."""
    n = len(e)
    if n == 0:
        return w.reshape(0, w.shape[1]), e.reshape(0), c.reshape(0)
    if _needs_bigint(c):
        c = c.astype(object)
    keys = tuple(w[:, j] for j in range(w.shape[1] - 1, -1, -1)) + (e,)
    order = np.lexsort(keys)
    w, e, c = w[order], e[order], c[order]
    if n > 1:
        change = np.empty(n, dtype=bool)
        change[0] = True
        change[1:] = (e[1:] != e[:-1]) | (w[1:] != w[:-1]).any(axis=1)
        starts = np.flatnonzero(change)
        if len(starts) < n:
            c = np.add.reduceat(c, starts)
            w, e = w[starts], e[starts]
    nz = c != 0
    if not nz.all():
        w, e, c = w[nz], e[nz], c[nz]
    return w, e, c


class QPoly:
    """Integer polynomial (or truncated series) in q."""

    __slots__ = ("coeffs", "trunc")

    def __init__(self, coeffs: Optional[Mapping[int, int]] = None, trunc: Optional[int] = None):
        items = {} if coeffs is None else coeffs
        self.trunc = trunc
        self.coeffs = {int(k): int(v) for k, v in sorted(items.items())
                       if v and (trunc is None or k <= trunc)}

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]], trunc: Optional[int] = None) -> "QPoly":
        acc: dict[int, int] = defaultdict(int)
        for e, c in pairs:
            acc[e] += c
        return cls(acc, trunc)

    @classmethod
    def monomial(cls, exp: int, coeff: int = 1) -> "QPoly":
        return cls({exp: coeff})

    def _meet(self, other: "QPoly") -> Optional[int]:
        if self.trunc is None:
            return other.trunc
        if other.trunc is None:
            return self.trunc
        return min(self.trunc, other.trunc)

    def __add__(self, other):
        if isinstance(other, int):
            other = QPoly({0: other})
        acc = dict(self.coeffs)
        for k, v in other.coeffs.items():
            acc[k] = acc.get(k, 0) + v
        return QPoly(acc, self._meet(other))

    __radd__ = __add__

    def __neg__(self):
        return QPoly({k: -v for k, v in self.coeffs.items()}, self.trunc)

    def __sub__(self, other):
        if isinstance(other, int):
            other = QPoly({0: other})
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return QPoly({k: v * other for k, v in self.coeffs.items()}, self.trunc)
        acc: dict[int, int] = defaultdict(int)
        for a, x in self.coeffs.items():
            for b, y in other.coeffs.items():
                acc[a + b] += x * y
        return QPoly(acc, self._meet(other))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = QPoly({0: other})
        if not isinstance(other, QPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(self.coeffs.items()))

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def truncate(self, n: int) -> "QPoly":
        return QPoly(self.coeffs, n if self.trunc is None else min(n, self.trunc))

    def shift(self, m: int) -> "QPoly":
        return QPoly({k + m: v for k, v in self.coeffs.items()},
                     None if self.trunc is None else self.trunc + m)

    def at_one(self) -> int:
        return sum(self.coeffs.values())

    def is_nonnegative(self) -> bool:
        return all(v > 0 for v in self.coeffs.values())

    def min_degree(self) -> Optional[int]:
        return min(self.coeffs) if self.coeffs else None

    def max_degree(self) -> Optional[int]:
        return max(self.coeffs) if self.coeffs else None

    def pairs(self) -> list[list[int]]:
        return [[k, v] for k, v in self.coeffs.items()]

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k, v in self.coeffs.items():
            mono = "1" if k == 0 else ("q" if k == 1 else f"q^{k}")
            if k == 0:
                parts.append(str(v))
            elif v == 1:
                parts.append(mono)
            elif v == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{v}*{mono}")
        s = " + ".join(parts).replace("+ -", "- ")
        return s + ("" if self.trunc is None else f" + O(q^{self.trunc + 1})")


class GradedCharacter:
    """Immutable sparse character ``sum coeff * q^exp * e^weight``."""

    __slots__ = ("rank", "_w", "_e", "_c", "level", "trunc", "anchor", "_terms")

    def __init__(self, rank: int, w, e, c, *, level: int = 0, trunc: Optional[int] = None,
                 anchor: str = "q", canonical: bool = False):
        if anchor not in ANCHORS:
            raise ValueError(f"unknown anchor {anchor!r}")
        w = np.asarray(w, dtype=np.int64).reshape(-1, rank)
        e = np.asarray(e, dtype=np.int64).reshape(-1)
        c = np.asarray(c)
        if c.dtype != object:
            c = c.astype(np.int64)
        c = c.reshape(-1)
        if trunc is not None:
            keep = e <= trunc
            if not keep.all():
                w, e, c = w[keep], e[keep], c[keep]
        if not canonical:
            w, e, c = _canonical(w, e, c)
        for arr in (w, e, c):
            arr.setflags(write=False)
        self.rank = rank
        self._w, self._e, self._c = w, e, c
        self.level = int(level)
        self.trunc = None if trunc is None else int(trunc)
        self.anchor = anchor
        self._terms = None

    # construction -------------------------------------------------------
    @classmethod
    def from_terms(cls, rs_or_rank, terms: Mapping[tuple[Weight, int], int], **kw) -> "GradedCharacter":
        rank = rs_or_rank if isinstance(rs_or_rank, int) else rs_or_rank.rank
        keys = list(terms)
        w = np.array([k[0] for k in keys], dtype=np.int64).reshape(len(keys), rank)
        e = np.array([k[1] for k in keys], dtype=np.int64)
        vals = [int(terms[k]) for k in keys]
        c = np.array(vals, dtype=object if any(abs(v) >= _BIG for v in vals) else np.int64)
        return cls(rank, w, e, c, **kw)

    @classmethod
    def monomial(cls, rs_or_rank, weight: Weight, exp: int = 0, coeff: int = 1, **kw) -> "GradedCharacter":
        return cls.from_terms(rs_or_rank, {(tuple(weight), exp): coeff}, **kw)

    @classmethod
    def zero(cls, rs_or_rank, **kw) -> "GradedCharacter":
        return cls.from_terms(rs_or_rank, {}, **kw)

    def _like(self, w, e, c, *, canonical=False, **kw) -> "GradedCharacter":
        meta = dict(level=self.level, trunc=self.trunc, anchor=self.anchor)
        meta.update(kw)
        return GradedCharacter(self.rank, w, e, c, canonical=canonical, **meta)

    # inspection ---------------------------------------------------------
    @property
    def arrays(self):
        return self._w, self._e, self._c

    @property
    def terms(self) -> dict[tuple[Weight, int], int]:
        if self._terms is None:
            self._terms = {(tuple(w), int(e)): int(c) for w, e, c in
                           zip(self._w.tolist(), self._e.tolist(), self._c.tolist())}
        return self._terms

    def __len__(self) -> int:
        return len(self._e)

    def __iter__(self):
        return iter(self.terms.items())

    def is_exact(self) -> bool:
        return self.trunc is None

    def coefficient(self, weight: Weight, exp: int) -> int:
        return self.terms.get((tuple(weight), exp), 0)

    def exponents(self) -> list[int]:
        return sorted(set(self._e.tolist()))

    def min_exp(self) -> Optional[int]:
        return int(self._e.min()) if len(self._e) else None

    def max_exp(self) -> Optional[int]:
        return int(self._e.max()) if len(self._e) else None

    def slice(self, exp: int) -> dict[Weight, int]:
        """Weight multiplicities of the q^exp component."""
        sel = self._e == exp
        return {tuple(w): int(c) for w, c in zip(self._w[sel].tolist(), self._c[sel].tolist())}

    def support(self) -> set[Weight]:
        return {tuple(w) for w in self._w.tolist()}

    def weight_poly(self, weight: Weight) -> QPoly:
        sel = (self._w == np.asarray(weight, dtype=np.int64)).all(axis=1)
        return QPoly(dict(zip(self._e[sel].tolist(), self._c[sel].tolist())), self.trunc)

    def is_nonnegative(self) -> bool:
        return bool((self._c > 0).all()) if len(self._c) else True

    def total(self) -> int:
        """Sum of all coefficients (the dimension for module characters)."""
        return int(sum(self._c.tolist()))

    def dominates(self, other: "GradedCharacter") -> bool:
        """Coefficientwise ``self >= other``."""
        diff = self - other
        return diff.is_nonnegative()

    # equality -----------------------------------------------------------
    def same_terms(self, other: "GradedCharacter") -> bool:
        return (np.array_equal(self._e, other._e) and np.array_equal(self._w, other._w)
                and np.array_equal(self._c.astype(object), other._c.astype(object)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedCharacter):
            return NotImplemented
        return (self.rank == other.rank and self.level == other.level
                and self.trunc == other.trunc and self.same_terms(other))

    def __hash__(self):
        return hash((self.rank, self.level, self.trunc, self._e.tobytes(), self._w.tobytes(),
                     tuple(self._c.tolist())))

    def __repr__(self) -> str:
        body = " + ".join(f"{c}*q^{e}*e^{w}" for (w, e), c in list(self.terms.items())[:12])
        more = "" if len(self) <= 12 else f" + ... ({len(self)} terms)"
        tr = "exact" if self.trunc is None else f"trunc {self.trunc}"
        return f"GradedCharacter[{tr}, level {self.level}, {self.anchor}]({body or '0'}{more})"

    # ring operations ----------------------------------------------------
    def __add__(self, other: "GradedCharacter") -> "GradedCharacter":
        return char_add(self, other)

    def __sub__(self, other: "GradedCharacter") -> "GradedCharacter":
        return char_add(self, char_scale(other, -1))

    def __neg__(self) -> "GradedCharacter":
        return char_scale(self, -1)

    def __mul__(self, other: "GradedCharacter") -> "GradedCharacter":
        if isinstance(other, int):
            return char_scale(self, other)
        return char_mul(self, other)

    __rmul__ = __mul__

    def truncate(self, n: int) -> "GradedCharacter":
        t = n if self.trunc is None else min(n, self.trunc)
        return self._like(self._w, self._e, self._c, trunc=t, canonical=True)

    def shift(self, m: int) -> "GradedCharacter":
        """Multiply by q^m."""
        t = None if self.trunc is None else self.trunc + m
        return self._like(self._w, self._e + m, self._c, trunc=t, canonical=True)

    def with_meta(self, **kw) -> "GradedCharacter":
        return self._like(self._w, self._e, self._c, canonical=True, **kw)

    def slice_char(self, exp: int) -> "GradedCharacter":
        sel = self._e == exp
        return self._like(self._w[sel], self._e[sel], self._c[sel], canonical=True)

    def at_q_one(self) -> dict[Weight, int]:
        acc: dict[Weight, int] = defaultdict(int)
        for (w, _), c in self.terms.items():
            acc[w] += c
        return {k: v for k, v in acc.items() if v}


def _meet_trunc(a: Optional[int], b: Optional[int]) -> Optional[int]:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def char_add(a: GradedCharacter, b: GradedCharacter) -> GradedCharacter:
    if a.level != b.level:
        raise ValueError(f"cannot add characters of level {a.level} and {b.level}")
    if a.rank != b.rank:
        raise ValueError("rank mismatch")
    c = np.concatenate([a._c.astype(object), b._c.astype(object)]) \
        if (a._c.dtype == object or b._c.dtype == object) else np.concatenate([a._c, b._c])
    return GradedCharacter(a.rank, np.vstack([a._w, b._w]), np.concatenate([a._e, b._e]), c,
                           level=a.level, trunc=_meet_trunc(a.trunc, b.trunc), anchor=a.anchor)


def char_scale(a: GradedCharacter, s: int) -> GradedCharacter:
    c = a._c
    if _needs_bigint(c, abs(int(s))):
        c = c.astype(object)
    return a._like(a._w, a._e, c * s, canonical=(s != 0))


def char_mul(a: GradedCharacter, b: GradedCharacter) -> GradedCharacter:
    """Product of characters; levels add and truncation is the tighter bound."""
    if a.rank != b.rank:
        raise ValueError("rank mismatch")
    truncated = a.trunc is not None or b.trunc is not None
    if truncated and ("raw" in (a.anchor, b.anchor)):
        raise ValueError("products of truncated characters need normalized exponents")
    if truncated and ((len(a) and a.min_exp() < 0) or (len(b) and b.min_exp() < 0)):
        raise ValueError("products of truncated characters need exponents >= 0")
    trunc = _meet_trunc(a.trunc, b.trunc)
    anchor = a.anchor if a.anchor == b.anchor else "q"
    if len(a) == 0 or len(b) == 0:
        return GradedCharacter.zero(a.rank, level=a.level + b.level, trunc=trunc, anchor=anchor)
    ia = np.repeat(np.arange(len(a)), len(b))
    ib = np.tile(np.arange(len(b)), len(a))
    e = a._e[ia] + b._e[ib]
    if trunc is not None:
        keep = e <= trunc
        ia, ib, e = ia[keep], ib[keep], e[keep]
    ca, cb = a._c, b._c
    if ca.dtype == object or cb.dtype == object or (
            len(ca) and len(cb) and int(np.abs(ca).max()) * int(np.abs(cb).max()) * len(e) >= _BIG):
        ca, cb = ca.astype(object), cb.astype(object)
    return GradedCharacter(a.rank, a._w[ia] + b._w[ib], e, ca[ia] * cb[ib],
                           level=a.level + b.level, trunc=trunc, anchor=anchor)


# Demazure operators ---------------------------------------------------------

def _alpha_step(rs: RootSystem, i: int, anchor: str) -> tuple[np.ndarray, int]:
    """Change of (weight, exponent) when subtracting alpha_i."""
    if i == 0:
        return np.asarray(rs.theta, dtype=np.int64), (1 if anchor == "depth" else -1)
    return -rs.cartan_array()[:, i - 1], 0


def _pairings(rs: RootSystem, i: int, w: np.ndarray, level: int) -> np.ndarray:
    if i == 0:
        return level - w @ np.asarray(rs.theta_covector, dtype=np.int64)
    return w[:, i - 1].copy()


def _string_operator(rs: RootSystem, i: int, f: GradedCharacter) -> GradedCharacter:
    """Monomial-wise Demazure string formula (exact data)."""
    w, e, c = f.arrays
    if len(e) == 0:
        return f
    cc = _pairings(rs, i, w, f.level)
    lengths = np.where(cc >= 0, cc + 1, np.where(cc <= -2, -cc - 1, 0))
    total = int(lengths.sum())
    idx = np.repeat(np.arange(len(e)), lengths)
    starts = np.cumsum(lengths) - lengths
    jj = np.arange(total) - np.repeat(starts, lengths)
    pos = cc[idx] >= 0
    # number of alpha_i subtracted: j for the positive branch, -(j+1) for the negative one
    steps = np.where(pos, jj, -(jj + 1))
    dw, de = _alpha_step(rs, i, f.anchor)
    coeff = f._c[idx]
    if coeff.dtype == object:
        sign = np.where(pos, 1, -1).astype(object)
    else:
        sign = np.where(pos, 1, -1)
    return f._like(w[idx] + steps[:, None] * dw[None, :], e[idx] + steps * de, coeff * sign)


def demazure_op(rs: RootSystem, i: int, f: GradedCharacter) -> GradedCharacter:
    """Character-level Demazure operator for node ``i`` (0 <= i <= rank)."""
    if not 0 <= i <= rs.rank:
        raise ValueError(f"node {i} out of range 0..{rs.rank}")
    if i == 0 and f.trunc is not None:
        # A node-0 string can leave the window downward and its lower half feeds
        # back upward, so data cut at a depth bound is not enough.
        raise ValueError("node-0 operator needs exact input (truncated alpha_0-strings "
                         "would cross the truncation boundary)")
    return _string_operator(rs, i, f)


def apply_word(rs: RootSystem, word: Iterable[int], f: GradedCharacter) -> GradedCharacter:
    """``pi_{w[0]} pi_{w[1]} ... f`` (the rightmost operator acts first)."""
    for i in reversed(list(word)):
        f = demazure_op(rs, i, f)
    return f


def symmetrize(rs: RootSystem, f: GradedCharacter) -> GradedCharacter:
    """Apply the Demazure operator of the longest element of W."""
    return apply_word(rs, longest_word(rs), f)


def irreducible_sum(rs: RootSystem, vmults: Mapping[tuple[Weight, int], int], *,
                    level: int = 0, trunc: Optional[int] = None, anchor: str = "q") -> GradedCharacter:
    """``sum coeff * q^exp * ch V(nu)`` over a map ``(nu, exp) -> coeff``."""
    from .cartan import finite_irrep_char

    ws, es, cs = [], [], []
    for (nu, d), a in vmults.items():
        if a == 0 or (trunc is not None and d > trunc):
            continue
        w, _, c = finite_irrep_char(rs, nu).arrays
        ws.append(w)
        es.append(np.full(len(c), d, dtype=np.int64))
        cs.append(c.astype(object) * a if abs(a) >= _BIG // max(1, int(np.abs(c).max())) else c * a)
    if not ws:
        return GradedCharacter.zero(rs.rank, level=level, trunc=trunc, anchor=anchor)
    big = any(c.dtype == object for c in cs)
    c = np.concatenate([x.astype(object) for x in cs]) if big else np.concatenate(cs)
    return GradedCharacter(rs.rank, np.vstack(ws), np.concatenate(es), c,
                           level=level, trunc=trunc, anchor=anchor)


def irreducible_multiplicities(rs: RootSystem, f: GradedCharacter, *,
                               check: bool = True) -> dict[tuple[Weight, int], int]:
    """Graded multiplicities ``[f : V(nu)]`` of a W-invariant character.

    Uses ``f = pi_{w0} f``: each monomial is straightened by the dot action.
    """
    from .cartan import is_w_invariant, straighten

    if check:
        for d in f.exponents():
            if not is_w_invariant(rs, f.slice(d)):
                raise ValueError(f"character is not W-invariant in q-degree {d}")
    return _straighten_terms(rs, f)


def _straighten_terms(rs: RootSystem, f: GradedCharacter) -> dict[tuple[Weight, int], int]:
    from .cartan import straighten

    w, e, c = f.arrays
    if len(e) == 0:
        return {}
    nus, signs = straighten(rs, w)
    keep = signs != 0
    g = GradedCharacter(rs.rank, nus[keep], e[keep],
                        c[keep] * (signs[keep].astype(object) if c.dtype == object else signs[keep]))
    return {(wt, d): a for (wt, d), a in g.terms.items()}


_T_CACHE: dict = {}


def _sweep_image(rs: RootSystem, nu: Weight, level: int) -> dict[tuple[Weight, int], int]:
    """``pi_{w0} pi_0 ch V(nu)`` at depth 0, as irreducible multiplicities by depth."""
    key = (rs, nu, level)
    hit = _T_CACHE.get(key)
    if hit is None:
        from .cartan import finite_irrep_char

        base = finite_irrep_char(rs, nu).with_meta(level=level, anchor="depth")
        hit = _straighten_terms(rs, _string_operator(rs, 0, base))
        _T_CACHE[key] = hit
    return hit


def saturate(rs: RootSystem, top: AffineWeight, n_max: int) -> GradedCharacter:
    """Character of the integrable module with highest weight ``top`` up to depth ``n_max``.

    Each sweep applies the node-0 operator followed by the finite
    symmetrizer, starting from ``ch V(top)``.  The intermediate modules are
    g-stable Demazure modules; they are kept exactly, as graded irreducible
    multiplicities, and the sweeps stop once the part of depth at most
    ``n_max`` no longer changes.  Exponents are depths below ``top``.  The
    trivial module (level 0, finite part 0) is accepted as well.
    """
    if n_max < 0:
        raise ValueError("depth bound must be >= 0")
    if not is_affine_dominant(rs, top):
        raise ValueError(f"saturate needs a dominant weight, got {top}")
    if top.level < 1 and any(top.finite):
        raise ValueError("saturate needs level >= 1")
    vm = saturate_multiplicities(rs, top, n_max)
    return irreducible_sum(rs, vm, level=top.level, trunc=n_max, anchor="depth")


def _theta_bound(rs: RootSystem, top: AffineWeight, depth: int) -> int:
    """Upper bound for ``<theta^vee, nu>`` over the weights ``nu`` of depth ``depth``.

    From the parabola inequality ``|mu + rho_af|^2 <= |top + rho_af|^2`` for the
    weights of an integrable module; the form gives short roots squared length 2.
    """
    rho = rs.rho
    lr = tuple(a + b for a, b in zip(top.finite, rho))
    h = 1 + rs.theta_pairing(rho)
    radius = math.sqrt(float(rs.form(lr, lr)) + 2 * (top.level + h) * depth)
    return int(math.floor(math.sqrt(2) * (radius + math.sqrt(float(rs.form(rho, rho)))) + 1e-9)) + 1


def _reach_depths(rs: RootSystem, top: AffineWeight, n_max: int, sweeps: int) -> list[int]:
    """``out[r]``: deepest depth from which ``r`` sweeps can still reach depth ``n_max``.

    One sweep moves an irreducible at depth ``d`` up by at most
    ``<theta^vee, nu> - level - 1``.
    """
    out = [n_max]
    for _ in range(sweeps):
        target, d = out[-1], out[-1]
        while d + 1 - max(0, _theta_bound(rs, top, d + 1) - top.level - 1) <= target:
            d += 1
        out.append(d)
    return out


def saturate_multiplicities(rs: RootSystem, top: AffineWeight, n_max: int) -> dict[tuple[Weight, int], int]:
    """Graded irreducible multiplicities of the integrable module up to depth ``n_max``.

    Every crystal element of depth at most ``n_max`` is reached from the
    highest weight with at most ``n_max`` batches of the node-0 lowering
    operator, so ``n_max`` sweeps suffice.  Entries too deep to climb back
    into the window during the remaining sweeps are dropped.
    """
    cur: dict[tuple[Weight, int], int] = {(tuple(top.finite), 0): 1}
    reach = _reach_depths(rs, top, n_max, n_max)

    def window(vm):
        return {k: v for k, v in vm.items() if k[1] <= n_max}

    for sweep in range(n_max):
        nxt: dict[tuple[Weight, int], int] = defaultdict(int)
        for (nu, d), a in cur.items():
            for (mu, dd), b in _sweep_image(rs, nu, top.level).items():
                nxt[(mu, d + dd)] += a * b
        remaining = n_max - sweep - 1
        bound = reach[max(remaining, 1)]
        nxt = {k: v for k, v in nxt.items() if v and k[1] <= bound}
        bad = [k for k, v in nxt.items() if v < 0 and k[1] <= n_max]
        if bad:
            raise AssertionError(f"negative multiplicity in a Demazure sweep at {bad[:3]}")
        stable = window(nxt) == window(cur)
        cur = nxt
        if stable:
            break
    return dict(sorted(window(cur).items(), key=lambda kv: (kv[0][1], kv[0][0])))


def flip(f: GradedCharacter) -> GradedCharacter:
    """Negate finite weights, keep exponents."""
    return f._like(-f._w, f._e, f._c)


def normalize_at(f: GradedCharacter, base_delta: int) -> GradedCharacter:
    """Re-express raw delta-coordinates as q-degrees above ``base_delta``."""
    t = None if f.trunc is None else f.trunc - base_delta
    return f._like(f._w, f._e - base_delta, f._c, anchor="q", trunc=t, canonical=True)


def serialize(f: GradedCharacter, header: Mapping) -> dict:
    """Canonical JSON-ready form: header plus records sorted by (q, weight)."""
    records = [{"weight": list(w), "q": e, "coeff": c} for (w, e), c in f.terms.items()]
    return {
        **header,
        "level": f.level,
        "truncation": "exact" if f.trunc is None else f.trunc,
        "terms": records,
    }


def deserialize(data: Mapping, rank: int) -> GradedCharacter:
    terms = {(tuple(r["weight"]), int(r["q"])): int(r["coeff"]) for r in data["terms"]}
    trunc = data.get("truncation", "exact")
    return GradedCharacter.from_terms(rank, terms, level=int(data.get("level", 0)),
                                      trunc=None if trunc == "exact" else int(trunc))


__all__ = [
    "GradedCharacter",
    "QPoly",
    "apply_word",
    "char_add",
    "char_mul",
    "char_scale",
    "demazure_op",
    "deserialize",
    "flip",
    "normalize_at",
    "saturate",
    "serialize",
    "symmetrize",
]
