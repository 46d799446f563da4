"""Diagonal division f -> (f(y,z) - f(z,z)) / (y - z) and its norm certificates."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil

from .errors import DescriptorMismatch, DiagonalError, TruncationError, UnsupportedCase
from .scalars import BanachRingDescriptor
from .series import (
    Disc,
    FormalPS,
    MultiSeries,
    Polynomial,
    Stein,
    Tate,
    broadcast,
    diagonal_restrict,
    disc_norm,
    fine_norm,
    flavor_norm,
    glex_key,
    radius_power,
)

BOUND_KINDS = ("PolyCubed", "TateCoefficientwise", "FormalWeightTransform", "DiscCounterexample", "SteinChain")


@dataclass(frozen=True)
class BoundCertificate:
    flavor: object
    input_norm: Fraction
    output_norm: Fraction
    bound_constant: Fraction
    bound_kind: str
    passed: bool
    details: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.bound_kind not in BOUND_KINDS:
            raise ValueError(f"unknown bound kind {self.bound_kind}")

    @property
    def ratio(self) -> Fraction | None:
        return None if self.input_norm == 0 else self.output_norm / self.input_norm

    def to_dict(self) -> dict:
        out = {
            "flavor": self.flavor.literal(),
            "bound_kind": self.bound_kind,
            "input_norm": str(self.input_norm),
            "output_norm": str(self.output_norm),
            "bound_constant": str(self.bound_constant),
            "pass": self.passed,
        }
        for k, v in sorted(self.details.items()):
            out[k] = str(v) if isinstance(v, Fraction) else v
        return out


def _require_pair(f: MultiSeries) -> None:
    if f.nvars != 2:
        raise DescriptorMismatch(f"diagonal division works on 2 variables (y, z), got {f.nvars}")


def diag_divide(f: MultiSeries) -> MultiSeries:
    """g with (y - z) g = f, for f vanishing on the diagonal.

    g_{k,l} = sum_{t=0}^{l} a_{k+1+t, l-t}.
    """
    _require_pair(f)
    if not diagonal_restrict(f).is_zero():
        raise DiagonalError("series does not vanish on the diagonal y = z")
    N = f.order
    a = f.coeffs
    g = {}
    for k in range(N):
        for l in range(N - k):
            acc = None
            for t in range(l + 1):
                c = a.get((k + 1 + t, l - t))
                if c is not None:
                    acc = c if acc is None else acc + c
            if acc is not None:
                g[(k, l)] = acc
    return MultiSeries(f.ring, 2, N, g)


def y_minus_z(ring: BanachRingDescriptor, order: int) -> MultiSeries:
    return MultiSeries(ring, 2, order, {(1, 0): 1, (0, 1): -1})


# -- polynomial ----------------------------------------------------------------
def certify_poly_bound(f: MultiSeries) -> BoundCertificate:
    """Sum |g| <= d^3 Sum |a| for f of total degree d."""
    g = diag_divide(f)
    nf, d = fine_norm(f)
    ng, _ = fine_norm(g)
    d = max(d, 0)
    bound = Fraction(d**3)
    return BoundCertificate(Polynomial(), nf, ng, bound, "PolyCubed", ng <= bound * nf, {"degree": d})


# -- Tate ----------------------------------------------------------------------
def _pair_radii(fl) -> tuple:
    fl = broadcast(fl, 2)
    if not isinstance(fl, Tate):
        raise UnsupportedCase(f"expected a Tate flavor, got {fl.literal()}")
    return fl, fl.radii


def coefficientwise_violations(f: MultiSeries, g: MultiSeries) -> list:
    """Indices (k,l) where |g_kl| > (l+1) max_t |a_{k+1+t,l-t}|."""
    R = f.ring
    nf = {J: R.norm(a) for J, a in f.coeffs.items()}
    zero = Fraction(0)
    bad = []
    for (k, l), c in g.coeffs.items():
        m = max((nf.get((k + 1 + t, l - t), zero) for t in range(l + 1)), default=zero)
        if R.norm(c) > (l + 1) * m:
            bad.append((k, l))
    return bad


def certify_tate_coefficientwise(f: MultiSeries, fl=None) -> BoundCertificate:
    """Coefficientwise triangle bound plus the aggregate (L+1) estimate.

    The aggregate constant is (L+1) * max(1, max_t r1^{-1-t} r2^t): the extra
    radius factor is 1 at r = 1 and accounts for the degree shift of g.
    """
    fl, (r1, r2) = _pair_radii(fl or Tate((1,)))
    R = f.ring
    g = diag_divide(f)
    bad = coefficientwise_violations(f, g)
    nf = flavor_norm(f, fl)
    ng = flavor_norm(g, fl)
    if g.is_zero():
        K, L = 0, 0
    else:
        K, L = min(g.coeffs, key=lambda J: (-(R.norm(g.coeffs[J]) * radius_power((r1, r2), J)), glex_key(J)))
    shift = max([Fraction(1)] + [r1 ** (-1 - t) * r2**t for t in range(L + 1)])
    bound = (L + 1) * shift
    passed = not bad and ng <= bound * nf
    details = {"argmax": [K, L], "coefficient_violations": len(bad)}
    if not R.archimedean:
        ultra = ng <= shift * nf
        details["ultrametric_pass"] = ultra
        passed = passed and ultra
    return BoundCertificate(fl, nf, ng, bound, "TateCoefficientwise", passed, details)


# -- formal power series ---------------------------------------------------------
def phi_weight(psi: FormalPS, k: int, l: int) -> int:
    """phi(k,l) = (l+1) * prod_{s=0..l} psi(k+1+s, l-s)."""
    eta = 1
    for s in range(l + 1):
        eta *= psi.psi((k + 1 + s, l - s))
    return (l + 1) * eta


def certify_formal_weight_transform(f: MultiSeries, psi: FormalPS | None = None) -> BoundCertificate:
    """sup |g|/phi <= sup |a|/psi."""
    psi = psi if psi is not None else FormalPS((), 2)
    if psi.nvars not in (None, 2):
        raise DescriptorMismatch("weight table must be indexed by pairs (i, j)")
    R = f.ring
    g = diag_divide(f)
    C = max((R.norm(a) / psi.psi(J) for J, a in f.coeffs.items()), default=Fraction(0))
    out = max((R.norm(b) / phi_weight(psi, *J) for J, b in g.coeffs.items()), default=Fraction(0))
    return BoundCertificate(psi, C, out, Fraction(1), "FormalWeightTransform", out <= C)


# -- disc counterexample ---------------------------------------------------------
def disc_counterexample(n: int, order: int = 8) -> BoundCertificate:
    """f = y^n - z^n in Z{y, z}: the quotient has norm n while f has norm 2."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if n > order:
        raise TruncationError(f"n={n} exceeds truncation order {order}")
    Z = BanachRingDescriptor.integer()
    fl = Disc((1, 1))
    f = MultiSeries(Z, 2, order, {(n, 0): 1, (0, n): -1})
    g = diag_divide(f)
    nf, ng = flavor_norm(f, fl), flavor_norm(g, fl)
    return BoundCertificate(fl, nf, ng, Fraction(1), "DiscCounterexample", False, {"n": n, "ratio": ng / nf})


# -- disc radius shrinking and Stein chains -----------------------------------------
def division_operator_norm(source, target, order: int) -> Fraction:
    """Exact norm of the division operator Disc(source) -> Disc(target) on degree <= order.

    Both norms are weighted l1 norms, so the operator norm is the largest
    column ratio over the monomials y^i z^j.
    """
    R1, R2 = (Fraction(x) for x in source)
    q1, q2 = (Fraction(x) for x in target)
    best = Fraction(0)
    for i in range(1, order + 1):
        for j in range(order + 1 - i):
            num = sum((q1 ** (i - 1 - t) * q2 ** (j + t) for t in range(i)), Fraction(0))
            best = max(best, num / (R1**i * R2**j))
    return best


def uniform_division_bound(source: Fraction, target: Fraction) -> Fraction | None:
    """sup over all degrees of the division norm Disc(R,R) -> Disc(q,q); None if unbounded.

    The column ratio for y^i z^j is i q^{i-1+j} / R^{i+j}, maximized at j = 0;
    i (q/R)^{i-1} is unimodal in i, so the sup is found by walking to the peak.
    """
    R, q = Fraction(source), Fraction(target)
    if q >= R:
        return None
    s = q / R
    i, best = 1, Fraction(1)
    while True:
        nxt = (i + 1) * s**i
        if nxt <= best:
            return best / R
        best, i = nxt, i + 1


def certify_stein(f: MultiSeries, fl: Stein) -> BoundCertificate:
    """Weighted sup bound on an open bidisc through radius-shrinking stages.

    D_{m,n} is the exact operator norm of division from radii (r_m, r_n) to
    (r_{m-1}, r_{n-1}) on the truncation, rounded up to a positive integer, and
    phi(m,n) = psi(m+1,n+1) D_{m+1,n+1}.
    """
    fl = broadcast(fl, 2)
    if fl.nvars != 2:
        raise DescriptorMismatch("Stein certificate needs a 2-variable flavor")
    L = len(fl.sequence)
    if L < 2:
        raise UnsupportedCase("Stein certificate needs at least two radii")
    g = diag_divide(f)
    C = flavor_norm(f, fl)
    D = {}
    for m in range(1, L):
        for n in range(1, L):
            src = fl.radii_at((m, n))
            tgt = fl.radii_at((m - 1, n - 1))
            D[(m, n)] = max(1, ceil(division_operator_norm(src, tgt, f.order)))
    out = Fraction(0)
    for m in range(L - 1):
        for n in range(L - 1):
            phi = fl.psi((m + 1, n + 1)) * D[(m + 1, n + 1)]
            out = max(out, disc_norm(g, fl.radii_at((m, n))) / phi)
    return BoundCertificate(fl, C, out, Fraction(1), "SteinChain", out <= C, {"max_stage_constant": max(D.values())})
