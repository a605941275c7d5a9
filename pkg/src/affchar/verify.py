"""Verification suites behind ``affchar verify`` and the acceptance tests.

Every check returns a :class:`CheckResult`.  Caches are cleared before each
timed check so that runtimes are measured cold.
"""

from __future__ import annotations

import itertools
import random
import time
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

from . import afweight, cartan, charring, demazure, expand
from .afweight import (
    AffineWeight,
    affine_pairing,
    affine_reflect,
    apply_reflections,
    cherednik_leq,
    level_dominant_weights,
    sigma_contains,
    sigma_contains_hull,
    to_dominant_affine,
)
from .cartan import RootSystem, build_root_system, decompose_slice, reflect
from .charring import GradedCharacter, apply_word, demazure_op
from .demazure import (
    admissible_demext_weights,
    demext_check,
    thick_weyl_gch,
    thin_gch,
    weyl_gch,
    weyl_kac_check,
)
from .expand import (
    NonSimplyLacedKostka,
    branching_weyl,
    corollary_num_verify,
    expand_symmetric,
    expand_thin,
    kostka,
    reciprocity_sides,
    socle_degree_check,
    thick_transpose_check,
)

SWEEP_TYPES = (("A", 1), ("A", 2), ("C", 2), ("G", 2))
SWEEP_LEVELS = (1, 2, 3)
SWEEP_BOX = 6


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float
    budget: Optional[float] = None
    failures: list = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        budget = "" if self.budget is None else f" (budget {self.budget:.0f}s)"
        return f"{status} {self.name}: {self.detail} [{self.seconds:.2f}s{budget}]"


def clear_caches() -> None:
    """Drop every memoized intermediate so that timings start cold."""
    for fn in (cartan._cartan_array, cartan.longest_word, cartan._irrep_cached,
               afweight._sigma_points, demazure._thin_cached, demazure._thin_raw,
               demazure._weyl_mults_cached, demazure.pbw_character, demazure._thick_cached,
               demazure._affine_adjacency, expand._branching_cached):
        fn.cache_clear()
    charring._T_CACHE.clear()


def _timed(name: str, budget: Optional[float], body: Callable[[], tuple[bool, str, list]]) -> CheckResult:
    clear_caches()
    start = time.perf_counter()
    ok, detail, failures = body()
    seconds = time.perf_counter() - start
    within = budget is None or seconds < budget
    if not within:
        detail += f"; runtime {seconds:.1f}s exceeds {budget:.0f}s"
    return CheckResult(name, ok and within, detail, seconds, budget, failures)


def _poly(coeffs: dict) -> dict[int, int]:
    return {int(e): int(c) for e, c in coeffs.items() if c}


def _sweep_lams(rs: RootSystem, k: int) -> list:
    return [lam for lam in level_dominant_weights(rs, k) if rs.theta_pairing(lam) < k]


def _sweep_mus(rs: RootSystem) -> list:
    return list(itertools.product(range(SWEEP_BOX + 1), repeat=rs.rank))


# P1, P2: the sl(2) tables --------------------------------------------------------

SL2_BRANCHING = {
    (2, 1): {(2,): {0: 1}, (0,): {1: 1}},
    (3, 1): {(3,): {0: 1}, (1,): {2: 1}},
    (3, 2): {(3,): {0: 1}, (1,): {1: 1}},
    (4, 2): {(4,): {0: 1}, (0,): {2: 1}},
    (4, 3): {(4,): {0: 1}, (2,): {1: 1}},
    (4, 1): {(4,): {0: 1}, (2,): {2: 1, 3: 1}, (0,): {4: 1}},
    (6, 1): {(6,): {0: 1}, (4,): {3: 1, 4: 1, 5: 1}, (2,): {6: 1, 7: 1, 8: 1}, (0,): {9: 1}},
}

SL2_THICK = {
    # (weight, level, truncation) -> expansion in the thick level-1 basis
    ((0,), 2, 10): {(0,): {0: 1}, (2,): {1: 1}, (4,): {4: 1}, (6,): {9: 1}},
    ((2,), 2, 9): {(2,): {0: 1}, (4,): {2: 1, 3: 1}, (6,): {6: 1, 7: 1, 8: 1}},
}


def check_p1() -> CheckResult:
    def body():
        a1 = build_root_system("A", 1)
        bad = []
        for (mu, k), want in SL2_BRANCHING.items():
            got = {lam: _poly(p.coeffs) for lam, p in branching_weyl(a1, (mu,), k).coeffs.items()}
            if got != want:
                bad.append({"mu": mu, "k": k, "expected": want, "actual": got})
        return not bad, f"{len(SL2_BRANCHING) - len(bad)}/{len(SL2_BRANCHING)} sl2 branching identities exact", bad
    return _timed("P1 sl2 thin tables", 1.0, body)


def check_p2() -> CheckResult:
    def body():
        a1 = build_root_system("A", 1)
        bad = []
        for (lam, k, n), want in SL2_THICK.items():
            exp = expand_symmetric(a1, thick_weyl_gch(a1, lam, k, n), "thick", k - 1, n)
            got = {mu: _poly(p.coeffs) for mu, p in exp.coeffs.items()}
            if got != want:
                bad.append({"lambda": lam, "k": k, "N": n, "expected": want, "actual": got})
        return not bad, f"{len(SL2_THICK) - len(bad)}/{len(SL2_THICK)} thick series match", bad
    return _timed("P2 sl2 thick tables", 30.0, body)


# P3: the corollary sweep ----------------------------------------------------------

def check_p3() -> CheckResult:
    def body():
        bad, cases = [], 0
        for t, r in SWEEP_TYPES:
            rs = build_root_system(t, r)
            for k in SWEEP_LEVELS:
                lams, mus = _sweep_lams(rs, k), _sweep_mus(rs)
                cases += len(lams) * len(mus)
                bad += [{"type": rs.name, "k": k, **m} for m in corollary_num_verify(rs, k, lams, mus)]
        return not bad, f"{cases} (lambda, mu, k) cases, {len(bad)} mismatches", bad
    return _timed("P3 corollary oracle sweep", 600.0, body)


def check_socle() -> CheckResult:
    def body():
        bad, cases = [], 0
        for t, r in SWEEP_TYPES:
            rs = build_root_system(t, r)
            for k in SWEEP_LEVELS:
                for lam in _sweep_lams(rs, k):
                    for mu in _sweep_mus(rs):
                        cases += 1
                        if not socle_degree_check(rs, lam, mu, k):
                            bad.append({"type": rs.name, "k": k, "lambda": lam, "mu": mu})
        return not bad, f"{cases} cases, {len(bad)} terms off the top degree", bad
    return _timed("socle degree of orbit terms", None, body)


# P4, P5 -----------------------------------------------------------------------------

def _thin_sweep_weights(rs: RootSystem, k: int) -> list:
    return sorted(set(_sweep_mus(rs)) | set(_sweep_lams(rs, k)))


def check_p4() -> CheckResult:
    def body():
        bad, counts = [], {"branching": 0, "thin": 0, "kostka": 0}
        for t, r in SWEEP_TYPES:
            rs = build_root_system(t, r)
            for k in SWEEP_LEVELS:
                for mu in _sweep_mus(rs):
                    counts["branching"] += 1
                    if not branching_weyl(rs, mu, k).is_nonnegative():
                        bad.append({"source": "branching", "type": rs.name, "k": k, "mu": mu})
                    counts["kostka"] += 1
                    with warnings.catch_warnings():
                        warnings.simplefilter("ignore", NonSimplyLacedKostka)
                        coeffs = kostka(rs, [(k, mu)], k)
                    if not all(p.is_nonnegative() for p in coeffs.values()):
                        bad.append({"source": "kostka", "type": rs.name, "k": k, "mu": mu})
                for lam in _thin_sweep_weights(rs, k):
                    counts["thin"] += 1
                    if not expand_thin(rs, thin_gch(rs, lam, k), k + 1).is_nonnegative():
                        bad.append({"source": "thin", "type": rs.name, "k": k, "lambda": lam})
        summary = ", ".join(f"{v} {n}" for n, v in counts.items())
        return not bad, f"{summary} expansions, {len(bad)} with a negative coefficient", bad
    return _timed("P4 positivity", None, body)


def check_p5(box: int = 2) -> CheckResult:
    def body():
        bad, cases = [], 0
        for t, r in SWEEP_TYPES:
            rs = build_root_system(t, r)
            extra = list(itertools.product(range(-box, box + 1), repeat=r))
            for k in SWEEP_LEVELS:
                for lam in sorted(set(_thin_sweep_weights(rs, k)) | set(extra)):
                    cases += 1
                    f = thin_gch(rs, lam, k)
                    outside = [w for (w, _) in f.terms if not sigma_contains(rs, lam, w)]
                    if outside:
                        bad.append({"type": rs.name, "k": k, "lambda": lam, "outside": outside[:5]})
                    if k > 1:
                        lower = thin_gch(rs, lam, k - 1).terms
                        over = [key for key, c in f.terms.items() if c > lower.get(key, 0)]
                        if over:
                            bad.append({"type": rs.name, "k": k, "lambda": lam, "above_lower": over[:5]})
        return not bad, f"{cases} thin characters, {len(bad)} violations", bad
    return _timed("P5 support and quotient bounds", None, body)


# P6 ------------------------------------------------------------------------------------

def check_p6() -> CheckResult:
    def body():
        bad, cases = [], 0
        a1, a2 = build_root_system("A", 1), build_root_system("A", 2)
        jobs = [(a1, k, [(j,) for j in range(4)], 6) for k in (1, 2)]
        jobs.append((a2, 1, [(0, 0), (1, 0), (0, 1), (1, 1)], 4))
        for rs, k, box, n in jobs:
            for lam in box:
                for mu in box:
                    cases += 1
                    lhs, rhs = reciprocity_sides(rs, lam, mu, k, n)
                    if lhs != rhs:
                        bad.append({"type": rs.name, "k": k, "lambda": lam, "mu": mu, "thick": lhs, "weyl": rhs})
        return not bad, f"{cases} reciprocity pairs, {len(bad)} mismatches", bad
    return _timed("P6 BGG reciprocity", 300.0, body)


def check_transpose() -> CheckResult:
    def body():
        bad, cases = [], 0
        a1 = build_root_system("A", 1)
        for k in (1, 2):
            for lam in range(4):
                cases += 1
                bad += [{"k": k, "lambda": (lam,), **m} for m in thick_transpose_check(a1, (lam,), k, 6)]
        return not bad, f"{cases} thick/thin transpose comparisons, {len(bad)} mismatches", bad
    return _timed("thick branching is the transposed thin branching", None, body)


# P7, P8 ---------------------------------------------------------------------------------

def check_p7(n_max: int = 6) -> CheckResult:
    def body():
        bad, cases = [], 0
        for t, r in SWEEP_TYPES:
            rs = build_root_system(t, r)
            for k in (1, 2):
                for lam in level_dominant_weights(rs, k):
                    cases += 1
                    ok, diff = weyl_kac_check(rs, AffineWeight(lam, k, 0), n_max)
                    if not ok:
                        bad.append({"type": rs.name, "k": k, "lambda": lam,
                                    "diff": sorted(diff.terms.items())[:5]})
        return not bad, f"{cases} dominant weights to depth {n_max}, {len(bad)} failures", bad
    return _timed("P7 Weyl-Kac oracle", 300.0, body)


def check_p8() -> CheckResult:
    def body():
        bad, cases = [], 0
        for t, r in (("A", 1), ("A", 2), ("C", 2)):
            rs = build_root_system(t, r)
            for k in (2, 3):
                tops = admissible_demext_weights(rs, k)
                if not tops:
                    bad.append({"type": rs.name, "k": k, "error": "no admissible weights"})
                for top in tops:
                    cases += 1
                    if not demext_check(rs, top):
                        bad.append({"type": rs.name, "k": k, "Lambda": top})
        return not bad, f"{cases} admissible weights, {len(bad)} failures", bad
    return _timed("P8 special Demazure identity", 120.0, body)


# P9 ----------------------------------------------------------------------------------------

def _brute_totals(rs: RootSystem, factors) -> dict:
    acc = None
    for level, lam in factors:
        at_one = weyl_gch(rs, lam, level).at_q_one()
        ch = GradedCharacter.from_terms(rs, {(w, 0): c for w, c in at_one.items()})
        acc = ch if acc is None else charring.char_mul(acc, ch)
    return decompose_slice(rs, acc)


def _kostka_runs(first_k: Callable[[int], int], n_values=(1, 2, 3, 4), extra: int = 2):
    a1 = build_root_system("A", 1)
    bad, cases = [], 0
    for n in n_values:
        factors = [(1, (2,))] * n
        brute = _brute_totals(a1, factors)
        lo = first_k(n)
        table = {k: {lam: _poly(p.coeffs) for lam, p in kostka(a1, factors, k).items()}
                 for k in range(lo, lo + extra + 2)}
        for k in range(lo, lo + extra + 1):
            cases += 1
            if table[k] != table[k + 1]:
                bad.append({"n": n, "K": k, "level_K": table[k], "level_K+1": table[k + 1]})
            totals = {lam: sum(p.values()) for lam, p in table[k].items()}
            if totals != brute:
                bad.append({"n": n, "K": k, "q1_totals": totals, "brute_force": brute})
    return bad, cases


def check_p9() -> CheckResult:
    """Stabilization exactly as stated, from K = n on."""
    def body():
        bad, cases = _kostka_runs(lambda n: n)
        first = bad[0] if bad else None
        pairs = len({(b["n"], b["K"]) for b in bad})
        detail = f"{cases} (n, K) comparisons from K = n, {pairs} with a disagreement"
        if first:
            detail += f"; first at n={first['n']}, K={first['K']}"
        return not bad, detail, bad
    return _timed("P9 Kostka stabilization (K >= n)", 120.0, body)


def check_p9_sharp() -> CheckResult:
    """Stabilization from K = 2n - 1 on, where it does hold."""
    def body():
        bad, cases = _kostka_runs(lambda n: 2 * n - 1)
        pairs = len({(b["n"], b["K"]) for b in bad})
        return not bad, f"{cases} (n, K) comparisons from K = 2n-1, {pairs} with a disagreement", bad
    return _timed("P9 Kostka stabilization (K >= 2n-1)", 120.0, body)


# P10 ---------------------------------------------------------------------------------------

def _random_character(rs: RootSystem, rng: random.Random, level: int) -> GradedCharacter:
    terms = {}
    for _ in range(rng.randint(1, 4)):
        w = tuple(rng.randint(-3, 3) for _ in range(rs.rank))
        terms[(w, rng.randint(-2, 2))] = rng.choice([-2, -1, 1, 1, 2, 3])
    return GradedCharacter.from_terms(rs, terms, level=level, anchor="raw")


def _affine_simple_root(rs: RootSystem, j: int) -> AffineWeight:
    if j == 0:
        return AffineWeight(tuple(-x for x in rs.theta), 0, 1)
    return AffineWeight(rs.simple_roots[j - 1], 0, 0)


def braid_order(rs: RootSystem, i: int, j: int) -> Optional[int]:
    """Order of ``s_i s_j`` in the affine Weyl group (``None`` if infinite)."""
    prod = affine_pairing(rs, i, _affine_simple_root(rs, j)) * affine_pairing(rs, j, _affine_simple_root(rs, i))
    return {0: 2, 1: 3, 2: 4, 3: 6}.get(prod)


def _regular_dominant(rs: RootSystem) -> AffineWeight:
    return AffineWeight(rs.rho, 1 + rs.theta_pairing(rs.rho), 0)


def random_reduced_word(rs: RootSystem, rng: random.Random, length: int) -> list[int]:
    """A reduced word built by left multiplication, tracked on a regular dominant weight."""
    cur, word = _regular_dominant(rs), []
    for _ in range(length):
        up = [i for i in range(rs.rank + 1) if affine_pairing(rs, i, cur) > 0]
        i = rng.choice(up)
        cur = affine_reflect(rs, i, cur)
        word.insert(0, i)
    return word


def _property_types():
    return [build_root_system(t, r) for t, r in SWEEP_TYPES]


def check_p10(cases: int = 500, seed: int = 0) -> CheckResult:
    def body():
        rng = random.Random(seed)
        systems = _property_types()
        failures: dict[str, list] = {}
        counts: dict[str, int] = {}

        def record(name, ok, info):
            counts[name] = counts.get(name, 0) + 1
            if not ok:
                failures.setdefault(name, []).append(info)

        for _ in range(cases):
            rs = rng.choice(systems)
            level = rng.randint(1, 3)
            f = _random_character(rs, rng, level)
            i = rng.randint(0, rs.rank)
            once = demazure_op(rs, i, f)
            record("idempotence", demazure_op(rs, i, once) == once, (rs.name, i, f.terms))

        pairs = [(rs, i, j, m) for rs in systems for i in range(rs.rank + 1) for j in range(i + 1, rs.rank + 1)
                 if (m := braid_order(rs, i, j)) is not None]
        for _ in range(cases):
            rs, i, j, m = rng.choice(pairs)
            f = _random_character(rs, rng, rng.randint(1, 3))
            left = [i if t % 2 == 0 else j for t in range(m)]
            right = [j if t % 2 == 0 else i for t in range(m)]
            record("braid", apply_word(rs, left, f) == apply_word(rs, right, f), (rs.name, left, right, f.terms))

        while counts.get("reduced-word", 0) < cases:
            rs = rng.choice(systems)
            word = random_reduced_word(rs, rng, rng.randint(2, 7))
            _, canon = to_dominant_affine(rs, apply_reflections(rs, word, _regular_dominant(rs)))
            if canon == word:
                continue
            f = _random_character(rs, rng, rng.randint(1, 3))
            record("reduced-word", apply_word(rs, word, f) == apply_word(rs, canon, f), (rs.name, word, canon))

        for _ in range(cases):
            rs = rng.choice(systems)
            w = tuple(rng.randint(-6, 6) for _ in range(rs.rank))
            i = rng.randint(1, rs.rank)
            record("finite-involution", reflect(rs, i, reflect(rs, i, w)) == w, (rs.name, i, w))
            mu = AffineWeight(w, rng.randint(-3, 3), rng.randint(-3, 3))
            j = rng.randint(0, rs.rank)
            record("affine-involution", affine_reflect(rs, j, affine_reflect(rs, j, mu)) == mu, (rs.name, j, mu))

        for _ in range(cases):
            rs = rng.choice(systems)
            level = rng.randint(1, 3)
            lam = rng.choice(level_dominant_weights(rs, level))
            top = AffineWeight(lam, level, 0)
            v = random_reduced_word(rs, rng, rng.randint(0, 8))
            w = [x for x in v if rng.random() < 0.5]
            wl = apply_reflections(rs, w, top).finite
            vl = apply_reflections(rs, v, top).finite
            record("ordercomp", cherednik_leq(rs, wl, vl), (rs.name, lam, level, w, v))

        for _ in range(cases):
            rs = rng.choice(systems)
            lam = tuple(rng.randint(-4, 4) for _ in range(rs.rank))
            mu = tuple(rng.randint(-4, 4) for _ in range(rs.rank))
            record("shiftconv", sigma_contains(rs, lam, mu) == sigma_contains_hull(rs, lam, mu),
                   (rs.name, lam, mu))

        for rs in systems:
            box = list(itertools.product(range(-4, 5), repeat=rs.rank))
            for lam in box:
                for mu in box:
                    counts["shiftconv-box"] = counts.get("shiftconv-box", 0) + 1
                    if sigma_contains(rs, lam, mu) != sigma_contains_hull(rs, lam, mu):
                        failures.setdefault("shiftconv-box", []).append((rs.name, lam, mu))

        short = {n: c for n, c in counts.items() if c < cases}
        ok = not failures and not short
        detail = ", ".join(f"{n} {counts[n] - len(failures.get(n, []))}/{counts[n]}" for n in counts)
        flat = [{"property": n, "case": c} for n, cs in failures.items() for c in cs[:5]]
        return ok, detail, flat
    return _timed("P10 algebraic properties", None, body)


# suites --------------------------------------------------------------------------------------

SUITES: dict[str, list[Callable[[], CheckResult]]] = {
    "sl2-paper": [check_p1, check_p2],
    "corollary-num": [check_p3, check_socle],
    "positivity": [check_p4],
    "support": [check_p5],
    "reciprocity": [check_p6, check_transpose],
    "oracle": [check_p7],
    "demext": [check_p8],
    "kostka": [check_p9, check_p9_sharp],
    "properties": [check_p10],
}


def run_suite(name: str, progress: Optional[Callable[[str], None]] = None, *,
              seed: int = 0) -> list[CheckResult]:
    if name == "all":
        checks = [c for suite in SUITES.values() for c in suite]
    elif name in SUITES:
        checks = SUITES[name]
    else:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join([*SUITES, 'all'])}")
    results = []
    for check in checks:
        result = check(seed=seed) if check is check_p10 else check()
        if progress:
            progress(result.line())
        results.append(result)
    return results


__all__ = [
    "CheckResult",
    "SUITES",
    "braid_order",
    "clear_caches",
    "random_reduced_word",
    "run_suite",
]
