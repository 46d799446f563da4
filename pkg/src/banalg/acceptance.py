"""Runners for the acceptance matrix.  Each returns a CriterionResult whose
payload is deterministic in the seed; timings live in separate fields."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

from .complexes import AlgebraMap, TruncatedAlgebra
from .division import (
    certify_formal_weight_transform,
    certify_poly_bound,
    certify_tate_coefficientwise,
    diag_divide,
    disc_counterexample,
    y_minus_z,
)
from .hepi import verify_hepi
from .hochschild import FiniteAlgebra, ci_order, hh_bar, hh_base_change, hh_complete_intersection, hh_koszul, hkr_expected
from .localization import laurent_spec, rational_spec, verify_localization, weierstrass_spec
from .sampling import random_diagonal_vanishing, random_psi, run_trials, trial_rng
from .scalars import BanachRingDescriptor
from .series import Dagger, Disc, FormalPS, Polynomial, Stein, Tate

ORDERS = (4, 6, 8)


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    summary: dict
    budget_s: float
    wall_time_ms: float = 0.0
    failures: list = field(default_factory=list)

    @property
    def within_budget(self) -> bool:
        return self.wall_time_ms <= 1000 * self.budget_s

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] criterion {self.number}: {self.title} ({self.wall_time_ms:.0f} ms, budget {self.budget_s:g} s)"

    def to_dict(self) -> dict:
        return {
            "criterion": self.number,
            "title": self.title,
            "pass": self.passed,
            "summary": self.summary,
            "failures": self.failures[:10],
            "budget_s": self.budget_s,
            "wall_time_ms": round(self.wall_time_ms, 3),
        }


def _timed(fn):
    def wrapper(*args, **kwargs) -> CriterionResult:
        t = time.perf_counter()
        res = fn(*args, **kwargs)
        res.wall_time_ms = 1000 * (time.perf_counter() - t)
        return res

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


# -- 1-3: certificate campaigns ------------------------------------------------------------
def _poly_trial(seed: int, i: int) -> dict:
    f = random_diagonal_vanishing(trial_rng(seed, i))
    c = certify_poly_bound(f)
    g = diag_divide(f)
    exact = y_minus_z(f.ring, f.order) * g == f
    return {"trial": i, "pass": c.passed, "exact": exact, "ratio": c.ratio, "degree": c.details["degree"]}


@_timed
def criterion_1(trials: int = 1000, seed: int = 0, workers: int = 1) -> CriterionResult:
    """Polynomial division bound d^3 with exact reconstruction."""
    rows = run_trials(_poly_trial, trials, seed, workers)
    bad = [r["trial"] for r in rows if not (r["pass"] and r["exact"])]
    worst = max(rows, key=lambda r: (r["ratio"] / r["degree"] ** 3, -r["trial"]))
    summary = {
        "trials": trials,
        "violations": len(bad),
        "worst_ratio_over_bound": str(worst["ratio"] / worst["degree"] ** 3),
    }
    return CriterionResult(1, "polynomial division bound", not bad, summary, 5.0, failures=bad)


def _tate_trial(seed: int, i: int) -> dict:
    f = random_diagonal_vanishing(trial_rng(seed, i))
    cz = certify_tate_coefficientwise(f)
    f2 = f.change_ring(BanachRingDescriptor.padic(2))
    c2 = certify_tate_coefficientwise(f2)
    return {
        "trial": i,
        "coefficientwise": cz.details["coefficient_violations"] == 0,
        "aggregate": cz.passed,
        "ultrametric": c2.details["ultrametric_pass"] and c2.passed,
    }


@_timed
def criterion_2(trials: int = 1000, seed: int = 0, workers: int = 1) -> CriterionResult:
    """Coefficientwise Tate bound over Z, ultrametric Tate norm bound over Q_2."""
    rows = run_trials(_tate_trial, trials, seed, workers)
    bad = [r["trial"] for r in rows if not (r["coefficientwise"] and r["aggregate"] and r["ultrametric"])]
    summary = {
        "trials": trials,
        "coefficient_violations": sum(not r["coefficientwise"] for r in rows),
        "ultrametric_violations": sum(not r["ultrametric"] for r in rows),
    }
    return CriterionResult(2, "Tate coefficientwise bound", not bad, summary, 5.0, failures=bad)


def _formal_trial(seed: int, i: int) -> dict:
    rng = trial_rng(seed, i)
    f = random_diagonal_vanishing(rng)
    c = certify_formal_weight_transform(f, random_psi(rng))
    return {"trial": i, "pass": c.passed, "slack": c.input_norm - c.output_norm}


@_timed
def criterion_3(trials: int = 200, seed: int = 0, workers: int = 1) -> CriterionResult:
    """Formal weight transform sup |g|/phi <= sup |a|/psi."""
    rows = run_trials(_formal_trial, trials, seed, workers)
    bad = [r["trial"] for r in rows if not r["pass"]]
    summary = {"trials": trials, "violations": len(bad), "min_slack": str(min(r["slack"] for r in rows))}
    return CriterionResult(3, "formal weight transform", not bad, summary, 5.0, failures=bad)


# -- 4: disc counterexample ------------------------------------------------------------------
@_timed
def criterion_4(max_n: int = 8) -> CriterionResult:
    """Input norm exactly 2 and output norm exactly n for y^n - z^n."""
    rows = []
    for n in range(2, max_n + 1):
        c = disc_counterexample(n, max(8, n))
        rows.append({"n": n, "input_norm": str(c.input_norm), "output_norm": str(c.output_norm),
                     "ok": c.input_norm == 2 and c.output_norm == n})
    bad = [r["n"] for r in rows if not r["ok"]]
    return CriterionResult(4, "disc counterexample", not bad, {"cases": rows}, 1.0, failures=bad)


# -- 5: hepi verdicts ------------------------------------------------------------------------------
def hepi_cases(order: int) -> list[tuple[str, AlgebraMap, bool]]:
    """(label, map, expected verdict) for the acceptance matrix at truncation order N."""
    Q, Z, Q2 = BanachRingDescriptor.rational(), BanachRingDescriptor.integer(), BanachRingDescriptor.padic(2)
    half = Fraction(1, 2)

    def m(ring, s, t):
        return AlgebraMap.canonical(TruncatedAlgebra(ring, 1, order, s), TruncatedAlgebra(ring, 1, order, t))

    return [
        ("poly -> tate(1) over Q_2", m(Q2, Polynomial(), Tate((1,))), True),
        ("poly -> formal over Q", m(Q, Polynomial(), FormalPS()), True),
        ("poly -> dagger(1) over Q", m(Q, Polynomial(), Dagger((1,))), True),
        ("dagger(2) -> dagger(1) over Q", m(Q, Dagger((2,)), Dagger((1,))), True),
        ("tate(1) -> tate(1/2) over Q_2", m(Q2, Tate((1,)), Tate((half,))), True),
        ("poly -> stein(1) over Q", m(Q, Polynomial(), Stein((1,), ((half,), (Fraction(3, 4),)))), True),
        ("disc(1) -> disc(1/2) over Z", m(Z, Disc((1,)), Disc((half,))), False),
    ]


@_timed
def criterion_5(orders=ORDERS) -> CriterionResult:
    """Hepi verdicts along the flavor chain and the disc negative case."""
    rows, bad = [], []
    for N in orders:
        for label, f, expected in hepi_cases(N):
            v = verify_hepi(f)
            H = v.derived_selfproduct_ranks
            rows.append({"order": N, "case": label, "expected": expected, "verdict": v.verdict,
                         "stable": {str(k): H.stable[k] for k in sorted(H.stable)}, "band": H.band})
            if v.verdict != expected:
                bad.append(f"{label} at N={N}")
    return CriterionResult(5, "hepi verdicts", not bad, {"cases": rows}, 30.0, failures=bad)


# -- 6: localizations -------------------------------------------------------------------------------
def localization_cases(order: int) -> list:
    Z, Q2 = BanachRingDescriptor.integer(), BanachRingDescriptor.padic(2)
    half = Fraction(1, 2)
    # Z_2^dagger: Weierstrass localization of Z along |2| <= 1/2
    A0 = TruncatedAlgebra(Z, 0, order)
    C0 = TruncatedAlgebra(Z, 1, order, Dagger((half,)))
    w = weierstrass_spec(A0, C0, A0.const(2))
    # affinoid Laurent: Q_2<x> -> Q_2<x, y>/(1 - x y)
    A = TruncatedAlgebra(Q2, 1, order, Tate((1,)))
    C = TruncatedAlgebra(Q2, 1, order, Tate((1,)))
    lau = laurent_spec(A, C, A.var(0))
    # rational: {|1| <= |1 + x|} with witness 1 * 1 + 0 * (1 + x) = 1
    one, x = A.one(), A.var(0)
    rat = rational_spec(A, [C], one + x, [one], [(one, A.zero())])
    return [("Z_2^dagger Weierstrass", w), ("Laurent Q_2<x>/(1 - x y)", lau), ("rational |1| <= |1 + x|", rat)]


@_timed
def criterion_6(orders=ORDERS) -> CriterionResult:
    """Selfproduct test for Weierstrass, Laurent and rational localizations."""
    rows, bad = [], []
    for N in orders:
        for label, spec in localization_cases(N):
            v = verify_localization(spec)
            hk = v.complex_homology
            rows.append({"order": N, "case": label, "verdict": v.verdict, "band": v.band,
                         "H-1": hk.stable.get(-1, 0), "H0": hk.stable.get(0, 0),
                         "selfproduct_H0": v.selfproduct_homology.stable.get(0, 0)})
            if not v.verdict:
                bad.append(f"{label} at N={N}")
    return CriterionResult(6, "localization homotopy epimorphisms", not bad, {"cases": rows}, 30.0, failures=bad)


# -- 7-8: Hochschild -----------------------------------------------------------------------------------
@_timed
def criterion_7() -> CriterionResult:
    """Bar oracle vs hypersurface model, and the HKR shape for Q[x, y]."""
    Q = BanachRingDescriptor.rational()
    bar = hh_bar(FiniteAlgebra.quotient(1, ["x^2"]), 4).ranks
    P = TruncatedAlgebra(Q, 1, ci_order([2], 1, 4))
    ci, _ = hh_complete_intersection(P, [P.series("x^2")], 4)
    hk = hh_koszul(TruncatedAlgebra(Q, 2, 4))
    expected = hkr_expected(2, hk.band)
    fails = []
    if bar != [2, 1, 1, 1, 1] or ci.stable != bar:
        fails.append("bar vs hypersurface")
    if hk.stable != expected:
        fails.append("HKR shape")
    summary = {"bar": bar, "hypersurface": ci.stable, "hkr": hk.stable, "hkr_expected": expected, "band": hk.band}
    return CriterionResult(7, "HH oracle equivalence", not fails, summary, 60.0, failures=fails)


@_timed
def criterion_8(order: int = 6) -> CriterionResult:
    """B (x)_A HH(A) against HH(B) for two analytifications."""
    Q, Q2 = BanachRingDescriptor.rational(), BanachRingDescriptor.padic(2)
    cases = [
        ("Q_2[x] -> Q_2<x>", TruncatedAlgebra(Q2, 1, order), TruncatedAlgebra(Q2, 1, order, Tate((1,)))),
        ("Q[x] -> Q[[x]]", TruncatedAlgebra(Q, 1, order), TruncatedAlgebra(Q, 1, order, FormalPS())),
    ]
    rows = {label: hh_base_change(AlgebraMap.canonical(A, B)) for label, A, B in cases}
    bad = [k for k, v in rows.items() if not v]
    return CriterionResult(8, "HH base change", not bad, {"cases": rows, "order": order}, 30.0, failures=bad)


# -- 9: determinism ----------------------------------------------------------------------------------
def strip_timing(obj):
    if isinstance(obj, dict):
        return {k: strip_timing(v) for k, v in obj.items() if k != "wall_time_ms"}
    if isinstance(obj, list):
        return [strip_timing(v) for v in obj]
    return obj


@_timed
def criterion_9(seed: int = 7, trials: int | None = None) -> CriterionResult:
    """Two in-process runs of ``matrix --seed`` agree byte for byte modulo timings."""
    import json

    from .cli import run

    argv = ["matrix", "--seed", str(seed), "--skip-determinism"]
    if trials is not None:
        argv += ["--trials", str(trials)]
    outs = []
    for _ in range(2):
        lines = run(argv, capture=True)[1]
        outs.append([json.dumps(strip_timing(json.loads(s)), sort_keys=True) for s in lines])
    same = outs[0] == outs[1]
    summary = {"seed": seed, "trials": trials, "lines": len(outs[0]), "identical": same}
    return CriterionResult(9, "determinism", same, summary, 60.0, failures=[] if same else ["reports differ"])


CRITERIA = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
            6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9}


def run_matrix(seed: int = 0, trials: int | None = None, workers: int = 1,
               determinism: bool = True) -> list[CriterionResult]:
    out = []
    for k in (1, 2, 3):
        kw = {"seed": seed, "workers": workers}
        if trials is not None:
            kw["trials"] = trials
        out.append(CRITERIA[k](**kw))
    out += [criterion_4(), criterion_5(), criterion_6(), criterion_7(), criterion_8()]
    if determinism:
        out.append(criterion_9(seed, trials))
    return out
