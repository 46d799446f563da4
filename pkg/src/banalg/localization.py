"""Derived Weierstrass, Laurent, rational localizations and adic completion."""
from __future__ import annotations

from dataclasses import dataclass, field

from .complexes import ChainComplex, HomologyReport, TruncatedAlgebra, embed, koszul
from .errors import DescriptorMismatch, UnsupportedCase, WitnessError
from .hepi import check_strictness_condition
from .series import FormalPS, MultiSeries

KINDS = ("weierstrass", "laurent", "rational", "adic", "quotient")


@dataclass
class Localization:
    """A -> (A (x) C_1 (x) ... (x) C_k) // (e_1, ..., e_m), kept as data.

    ``elements`` are functions of the block layout: given the positions of
    the C-variables they return the Koszul elements, so the same spec can be
    instantiated over A (x) C and over A (x) C_z (x) C_w.
    """

    kind: str
    base: TruncatedAlgebra
    extra: list  # one-variable TruncatedAlgebras C_i
    builder: object  # (lift from A, list of C-variables) -> list of elements
    notes: dict = field(default_factory=dict)

    def ambient(self, copies: int = 1) -> TruncatedAlgebra:
        amb = self.base
        for _ in range(copies):
            for C in self.extra:
                amb = amb.tensor(C)
        return amb

    def elements(self, copy: int = 0, copies: int = 1) -> list[MultiSeries]:
        amb = self.ambient(copies)
        nA, k = self.base.nvars, len(self.extra)
        lift = lambda a: embed(a, amb.nvars, 0)  # noqa: E731
        ys = [amb.var(nA + copy * k + i) for i in range(k)]
        return self.builder(lift, ys)

    def complex(self) -> ChainComplex:
        return koszul(self.ambient(), self.elements())

    def selfproduct(self) -> ChainComplex:
        """Model of B (x)^L_A B: both copies of C over A, both sets of elements."""
        amb = self.ambient(2)
        return koszul(amb, self.elements(0, 2) + self.elements(1, 2))


def _check_base(A: TruncatedAlgebra, *series: MultiSeries) -> None:
    for a in series:
        A.check_series(a)


def _one_var(C: TruncatedAlgebra, A: TruncatedAlgebra) -> None:
    if C.nvars != 1:
        raise DescriptorMismatch("C must be a one-variable algebra")
    A.ring.check(C.ring)
    if C.order != A.order:
        raise DescriptorMismatch("A and C need the same truncation order")


def weierstrass_spec(A: TruncatedAlgebra, C: TruncatedAlgebra, a: MultiSeries) -> Localization:
    _one_var(C, A)
    _check_base(A, a)
    return Localization("weierstrass", A, [C], lambda lift, ys: [ys[0] - lift(a)], {"a": repr(a)})


def laurent_spec(A: TruncatedAlgebra, C: TruncatedAlgebra, a: MultiSeries) -> Localization:
    _one_var(C, A)
    _check_base(A, a)
    return Localization("laurent", A, [C], lambda lift, ys: [1 - lift(a) * ys[0]], {"a": repr(a)})


def splitting_identities(f: MultiSeries, g: MultiSeries, a: MultiSeries, b: MultiSeries) -> dict:
    """Checks that (a, b) and (-b, a)^T split f (f, g)^T -> (-g, f) on the truncation."""
    one = f.zero_like() + 1
    return {
        "bezout": a * f + b * g == one,
        "row_is_complex": (-g) * f + f * g == f.zero_like(),
        "left_split": a * f + b * g == one,
        "right_split": (-g) * (-b) + f * a == one,
        "homotopy_off_diagonal": f * b - b * f == f.zero_like() and g * a - a * g == f.zero_like(),
    }


def rational_spec(A: TruncatedAlgebra, Cs: list, g: MultiSeries, fs: list, witnesses: list) -> Localization:
    if len(Cs) != len(fs) or len(fs) != len(witnesses):
        raise DescriptorMismatch("need one C, one f and one witness pair per coordinate")
    for C in Cs:
        _one_var(C, A)
    _check_base(A, g, *fs)
    checks = []
    for f, (a, b) in zip(fs, witnesses):
        _check_base(A, a, b)
        ident = splitting_identities(f, g, a, b)
        if not ident["bezout"]:
            raise WitnessError(f"a*f + b*g != 1 on the truncation (f={f!r}, g={g!r})")
        if not all(ident.values()):
            raise WitnessError(f"splitting maps fail: {ident}")
        checks.append(ident)
    return Localization(
        "rational", A, list(Cs),
        lambda lift, ys: [lift(g) * y - lift(f) for y, f in zip(ys, fs)],
        {"splitting": checks},
    )


def adic_spec(A: TruncatedAlgebra, generators: list) -> Localization:
    _check_base(A, *generators)
    Cs = [TruncatedAlgebra(A.ring, 1, A.order, FormalPS((), 1)) for _ in generators]
    return Localization("adic", A, Cs, lambda lift, ys: [y - lift(a) for y, a in zip(ys, generators)])


def quotient_spec(A: TruncatedAlgebra, elements: list) -> Localization:
    """A -> A // (a_1..a_n) as a spec; usually not a homotopy epimorphism (negative control)."""
    _check_base(A, *elements)
    return Localization("quotient", A, [], lambda lift, ys: [lift(a) for a in elements])


def weierstrass(A, C, a) -> ChainComplex:
    """Koszul complex of (x_C - a) over A (x) C."""
    return weierstrass_spec(A, C, a).complex()


def laurent(A, C, a) -> ChainComplex:
    """Koszul complex of (1 - a y) over A (x) C."""
    return laurent_spec(A, C, a).complex()


def rational(A, Cs, g, fs, witnesses) -> ChainComplex:
    """Koszul complex of (g y_i - f_i) over A (x) C_1 (x) ... (x) C_n."""
    return rational_spec(A, Cs, g, fs, witnesses).complex()


def adic_completion(A, generators) -> ChainComplex:
    """Weierstrass localization along R[y] -> R[[y]], y -> each generator."""
    return adic_spec(A, generators).complex()


def derived_quotient(A: TruncatedAlgebra, elements: list) -> ChainComplex:
    """A // (a_1, ..., a_n)."""
    return koszul(A, list(elements))


@dataclass
class LocalizationVerdict:
    kind: str
    complex_homology: HomologyReport
    selfproduct_homology: HomologyReport
    band: int
    strictness_ok: bool
    verdict: bool
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "band": self.band,
            "homology": self.complex_homology.to_dict(),
            "selfproduct": self.selfproduct_homology.to_dict(),
            "strictness_ok": self.strictness_ok,
            "verdict": self.verdict,
            "notes": list(self.notes),
        }


def verify_localization(spec: Localization, samples: int = 4, seed: int = 0) -> LocalizationVerdict:
    """Selfproduct test: B (x)_A B has no negative-degree homology and the same
    stable degree-0 rank as B, with both read on one common band."""
    K = spec.complex()
    S = spec.selfproduct()
    b = min(K.default_band(), S.default_band())
    HK = K.homology(b)
    HS = S.homology(b)
    notes = []
    strict = True
    for C in spec.extra:
        try:
            res = check_strictness_condition(C, C.var(0), samples, seed)
        except UnsupportedCase as e:
            notes.append(str(e))
            strict = False
            continue
        if not res.ok:
            strict = False
            notes.append(f"{C.flavor.literal()}: {res.reason}")
    discrete = HK.concentrated_in_zero()
    if not discrete:
        notes.append("B has homology below degree 0 on the stable band")
    same = HS.concentrated_in_zero() and HS.stable.get(0) == HK.stable.get(0)
    if not same:
        notes.append("selfproduct differs from B on the stable band")
    return LocalizationVerdict(spec.kind, HK, HS, b, strict, strict and discrete and same, notes)
