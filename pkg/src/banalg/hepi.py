"""Homotopy-epimorphism checks through the diagonal Koszul criterion."""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .complexes import (
    AlgebraMap,
    HomologyReport,
    TruncatedAlgebra,
    check_augmentation,
    diagonal_koszul,
    model_for,
    tensor_over,
)
from .division import (
    BoundCertificate,
    certify_formal_weight_transform,
    certify_poly_bound,
    certify_stein,
    certify_tate_coefficientwise,
    disc_counterexample,
)
from .errors import DescriptorMismatch, UnsupportedCase
from .series import (
    Dagger,
    Disc,
    FormalPS,
    Hybrid,
    MultiSeries,
    Polynomial,
    Stein,
    Tate,
    tensor_square,
)

__all__ = [
    "AlgebraMap",
    "HepiVerdict",
    "StrictnessResult",
    "check_strictness_condition",
    "verify_hepi",
    "check_two_out_of_three",
    "check_tensor_closure",
    "variable_flavors",
]


@dataclass
class StrictnessResult:
    ok: bool
    exact: bool
    certificates: list
    homology: HomologyReport
    reason: str = ""

    def __iter__(self):
        # allows ``ok, certs = check_strictness_condition(...)``
        return iter((self.ok, self.certificates))

    def to_dict(self) -> dict:
        failed = [c.to_dict() for c in self.certificates if not c.passed][:3]
        return {
            "ok": self.ok,
            "exact": self.exact,
            "certificates": len(self.certificates),
            "certificates_passed": sum(c.passed for c in self.certificates),
            "failed_examples": failed,
            "homology": self.homology.to_dict(),
            "reason": self.reason,
        }


def diagonal_family(ring, order: int, samples: int = 8, seed: int = 0) -> list[MultiSeries]:
    """Diagonal-vanishing test series: (y-z) y^k z^l, y^n - z^n, and seeded random ones."""
    out = []
    ymz = {(1, 0): 1, (0, 1): -1}
    for k in range(order):
        for l in range(order - k):
            f = MultiSeries(ring, 2, order, {(k, l): 1}) * MultiSeries(ring, 2, order, ymz)
            out.append(f)
    for n in range(2, order + 1):
        out.append(MultiSeries(ring, 2, order, {(n, 0): 1, (0, n): -1}))
    rng = random.Random(seed)
    for _ in range(samples):
        g = MultiSeries(ring, 2, order, {(k, l): rng.randint(-9, 9) for k in range(order) for l in range(order - k)})
        out.append(g * MultiSeries(ring, 2, order, ymz))
    return out


def _certificates(C: TruncatedAlgebra, family: list[MultiSeries]) -> tuple[bool, list[BoundCertificate], str]:
    fl = C.flavor
    N = C.order
    if isinstance(fl, Disc):
        certs = [disc_counterexample(n, N) for n in range(2, N + 1)]
        return False, certs, "disc algebras: quotient norm grows like n/2 on y^n - z^n"
    if isinstance(fl, Polynomial):
        certs = [certify_poly_bound(f) for f in family]
    elif isinstance(fl, Tate):
        certs = [certify_tate_coefficientwise(f, fl) for f in family]
    elif isinstance(fl, Dagger):
        rep = Tate(fl.rho)
        certs = [certify_tate_coefficientwise(f, rep) for f in family]
    elif isinstance(fl, FormalPS):
        psi2 = tensor_square(fl if fl.nvars else FormalPS((), 1))
        certs = [certify_formal_weight_transform(f, psi2) for f in family]
    elif isinstance(fl, Stein):
        st2 = tensor_square(fl)
        certs = [certify_stein(f, st2) for f in family]
    else:
        raise UnsupportedCase(f"no strictness certificate for {fl!r}")
    ok = all(c.passed for c in certs)
    return ok, certs, "" if ok else "certificate failure"


def check_strictness_condition(C: TruncatedAlgebra, c: MultiSeries | None = None, samples: int = 8,
                               seed: int = 0) -> StrictnessResult:
    """Exactness of the truncated diagonal Koszul complex plus the flavor's division certificates."""
    if C.nvars != 1:
        raise UnsupportedCase("strictness condition is checked one variable at a time")
    if c is not None:
        C.check_series(c)
        if c != C.var(0):
            raise UnsupportedCase("only the coordinate element c = x is supported")
    K = diagonal_koszul(C)
    H = K.homology()
    b = H.band
    exact = H.stable.get(-1, 0) == 0 and H.stable.get(0, 0) == C.stable_rank(b) and check_augmentation(K)
    family = diagonal_family(C.ring, C.order, samples, seed)
    ok, certs, reason = _certificates(C, family)
    if not exact:
        reason = reason or "diagonal complex not exact on the stable band"
    return StrictnessResult(ok and exact, exact, certs, H, reason)


def variable_flavors(A: TruncatedAlgebra) -> list:
    """One-variable flavors of the coordinates of A."""
    fl = A.flavor
    if isinstance(fl, Hybrid):
        out = []
        for f, n in zip(fl.factors, fl.arities):
            out.extend(variable_flavors(TruncatedAlgebra(A.ring, n, A.order, f)))
        return out
    n = A.nvars
    if isinstance(fl, Polynomial):
        return [fl] * n
    if isinstance(fl, (Disc, Tate)):
        return [type(fl)((r,)) for r in fl.radii]
    if isinstance(fl, Dagger):
        return [Dagger((r,), (p,)) for r, p in zip(fl.radii, fl.rho)]
    if isinstance(fl, Stein):
        return [Stein((fl.radii[i],), tuple((s[i],) for s in fl.sequence)) for i in range(n)]
    if isinstance(fl, FormalPS):
        if fl.nvars in (None, 1):
            return [fl if fl.nvars == 1 else FormalPS((), 1)] * n
        return [FormalPS((), 1)] * n
    raise UnsupportedCase(f"unknown flavor {fl!r}")


def _check_supported(A: TruncatedAlgebra) -> None:
    for fl in variable_flavors(A):
        if isinstance(fl, Tate) and A.ring.archimedean:
            raise UnsupportedCase("Tate algebras need a non-archimedean ground ring")
    if model_for(A.flavor) == "mixed" and A.nvars == 1:
        raise UnsupportedCase("mixed model in one variable")


@dataclass
class HepiVerdict:
    strictness_ok_source: bool
    strictness_ok_target: bool
    element_compat: bool
    derived_selfproduct_ranks: HomologyReport
    verdict: bool
    target_stable_rank: int
    notes: list = field(default_factory=list)
    strictness: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "strictness_ok_source": self.strictness_ok_source,
            "strictness_ok_target": self.strictness_ok_target,
            "element_compat": self.element_compat,
            "selfproduct": self.derived_selfproduct_ranks.to_dict(),
            "target_stable_rank": self.target_stable_rank,
            "verdict": self.verdict,
            "notes": list(self.notes),
        }


def _strict_all(A: TruncatedAlgebra, samples: int, seed: int) -> tuple[bool, list]:
    res = []
    for fl in variable_flavors(A):
        C = TruncatedAlgebra(A.ring, 1, A.order, fl)
        res.append(check_strictness_condition(C, C.var(0), samples, seed))
    return all(r.ok for r in res), res


def selfproduct(f: AlgebraMap):
    """B (x)_A K_A (x)_A B: the diagonal Koszul complex of A pushed to B (x) B."""
    K = diagonal_koszul(f.source)
    return tensor_over(K, f, f)


def verify_hepi(f: AlgebraMap, samples: int = 8, seed: int = 0) -> HepiVerdict:
    """Diagonal Koszul criterion on the truncations of f: A -> B."""
    A, B = f.source, f.target
    if A.nvars == 0 or A.nvars != B.nvars:
        raise UnsupportedCase("maps between algebras with equal, positive variable counts only")
    _check_supported(A)
    _check_supported(B)
    S = selfproduct(f)
    H = S.homology()
    b = H.band
    target_rank = B.stable_rank(b)
    concentrated = H.concentrated_in_zero() and H.stable.get(0) == target_rank
    notes = []
    if f.is_identity():
        notes.append("identity map: B (x)_B B = B holds without strictness input")
        return HepiVerdict(True, True, True, H, concentrated, target_rank, notes)
    compat = all(g == v for g, v in zip(f.images, B.gens()))
    ok_src, res_src = _strict_all(A, samples, seed)
    ok_tgt, res_tgt = _strict_all(B, samples, seed)
    for tag, res in (("source", res_src), ("target", res_tgt)):
        for r in res:
            if not r.ok:
                notes.append(f"{tag}: {r.reason}")
    if not compat:
        notes.append("generator images are not the target coordinates")
    if not concentrated:
        notes.append("selfproduct homology not concentrated in degree 0 with the target rank")
    verdict = ok_src and ok_tgt and compat and concentrated
    strict = {"source": [r.to_dict() for r in res_src], "target": [r.to_dict() for r in res_tgt]}
    return HepiVerdict(ok_src, ok_tgt, compat, H, verdict, target_rank, notes, strict)


def check_two_out_of_three(f: AlgebraMap, g: AlgebraMap, samples: int = 8, seed: int = 0) -> bool:
    """If two of f, g, g o f verify as homotopy epimorphisms, so must the third."""
    if f.target != g.source:
        raise DescriptorMismatch("maps are not composable")
    v = [verify_hepi(h, samples, seed).verdict for h in (f, g, f.compose(g))]
    return sum(v) != 2


def check_tensor_closure(f: AlgebraMap, g: AlgebraMap, samples: int = 8, seed: int = 0) -> bool:
    """f (x) g on disjoint variable blocks verifies when f and g do."""
    h = f.tensor(g)
    vf = verify_hepi(f, samples, seed).verdict
    vg = verify_hepi(g, samples, seed).verdict
    vh = verify_hepi(h, samples, seed).verdict
    return vh if (vf and vg) else True
