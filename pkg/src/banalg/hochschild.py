"""Hochschild homology: bar complex oracle, diagonal Koszul model, complete intersections."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import comb

import sympy

from .complexes import (
    AlgebraMap,
    ChainComplex,
    TruncatedAlgebra,
    diagonal_koszul,
    koszul,
    tensor_over,
)
from .errors import SizeGuardError, UnsupportedCase
from .hepi import _strict_all, verify_hepi
from .linalg import SparseMatrix, rank
from .scalars import BanachRingDescriptor
from .series import MultiSeries, Polynomial, monomials

MAX_BAR_DIM = 12
MAX_BAR_CUTOFF = 4
MAX_BAR_CELLS = 300_000  # dim^(cutoff+2), the largest bar module built


@dataclass
class HHReport:
    model: str
    ranks: list  # HH_j for j = 0, 1, ...
    algebra: str
    order: int | None = None
    stable: list = field(default_factory=list)
    band: int | None = None

    def rank(self, j: int) -> int:
        return self.ranks[j] if j < len(self.ranks) else 0

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "algebra": self.algebra,
            "order": self.order,
            "ranks": list(self.ranks),
            "stable_ranks": list(self.stable),
            "band": self.band,
        }


# -- finite algebras ---------------------------------------------------------------
class FiniteAlgebra:
    """Commutative finite-dimensional algebra over Q from structure constants.

    ``mult[i][j]`` is a dict {k: c} with e_i e_j = sum_k c e_k; ``unit`` is the
    coordinate vector of 1.
    """

    def __init__(self, name: str, dim: int, mult, unit: dict):
        self.name = name
        self.dim = dim
        self.mult = mult
        self.unit = unit

    def product(self, u: dict, v: dict) -> dict:
        out: dict = {}
        for i, a in u.items():
            for j, b in v.items():
                for k, c in self.mult[i][j].items():
                    out[k] = out.get(k, 0) + a * b * c
        return {k: c for k, c in out.items() if c != 0}

    @classmethod
    def field(cls) -> "FiniteAlgebra":
        return cls("Q", 1, [[{0: Fraction(1)}]], {0: Fraction(1)})

    @classmethod
    def split(cls, k: int) -> "FiniteAlgebra":
        """Q^k with orthogonal idempotents."""
        mult = [[({i: Fraction(1)} if i == j else {}) for j in range(k)] for i in range(k)]
        return cls(f"Q^{k}", k, mult, {i: Fraction(1) for i in range(k)})

    @classmethod
    def jet(cls, nvars: int, order: int) -> "FiniteAlgebra":
        """Q[x_1..x_n] / (x)^{order+1}."""
        basis = monomials(nvars, order)
        idx = {m: k for k, m in enumerate(basis)}
        mult = []
        for a in basis:
            row = []
            for b in basis:
                c = tuple(x + y for x, y in zip(a, b))
                row.append({idx[c]: Fraction(1)} if c in idx else {})
            mult.append(row)
        return cls(f"Q[x;{nvars}]/m^{order + 1}", len(basis), mult, {idx[(0,) * nvars]: Fraction(1)})

    @classmethod
    def quotient(cls, nvars: int, relations: list[str]) -> "FiniteAlgebra":
        """Q[x_1..x_n] / (relations), which must be zero-dimensional (Groebner basis via sympy)."""
        xs = sympy.symbols(f"x1:{nvars + 1}")
        loc = {f"x{i + 1}": v for i, v in enumerate(xs)}
        if nvars <= 3:
            loc.update({n: xs[i] for i, n in enumerate("xyz"[:nvars])})
        polys = [sympy.sympify(r, locals=loc) for r in relations]
        G = sympy.groebner(polys, *xs, order="grevlex", domain="QQ")
        if list(G.exprs) == [1]:
            return cls("0", 0, [], {})
        lead = [sympy.Poly(g, *xs).monoms(order="grevlex")[0] for g in G.exprs]
        # standard monomials: not divisible by any leading monomial
        std = []
        frontier = [(0,) * nvars]
        seen = set(frontier)
        while frontier:
            m = frontier.pop()
            if any(all(a >= b for a, b in zip(m, L)) for L in lead):
                continue
            std.append(m)
            if len(std) > 500:
                raise UnsupportedCase("quotient is not zero-dimensional (or too large)")
            for i in range(nvars):
                n = tuple(v + (k == i) for k, v in enumerate(m))
                if n not in seen:
                    seen.add(n)
                    frontier.append(n)
        std.sort(key=lambda m: (sum(m), m))
        idx = {m: k for k, m in enumerate(std)}

        def coords(expr) -> dict:
            _, r = G.reduce(sympy.expand(expr))
            out = {}
            for mon, c in sympy.Poly(r, *xs, domain="QQ").terms():
                if c != 0:
                    out[idx[mon]] = Fraction(int(c.p), int(c.q))
            return out

        mono = lambda m: sympy.Mul(*[v**e for v, e in zip(xs, m)])  # noqa: E731
        mult = [[coords(mono(a) * mono(b)) for b in std] for a in std]
        name = f"Q[x;{nvars}]/({', '.join(relations)})"
        return cls(name, len(std), mult, coords(sympy.Integer(1)))


def bar_boundary(A: FiniteAlgebra, n: int) -> SparseMatrix:
    """b_n on A^{(x)(n+1)} -> A^{(x)n}:
    sum_{j<n} (-1)^j x_0 (x) .. (x) x_j x_{j+1} (x) .. + (-1)^n x_n x_0 (x) x_1 (x) .. (x) x_{n-1}."""
    d = A.dim
    src = list(product(range(d), repeat=n + 1))
    tgt_index = {t: k for k, t in enumerate(product(range(d), repeat=n))}
    M = SparseMatrix(d**n, len(src))
    for col, xs in enumerate(src):
        acc: dict = {}
        for j in range(n):
            sign = -1 if j % 2 else 1
            for k, c in A.mult[xs[j]][xs[j + 1]].items():
                t = xs[:j] + (k,) + xs[j + 2:]
                r = tgt_index[t]
                acc[r] = acc.get(r, 0) + sign * c
        sign = -1 if n % 2 else 1
        for k, c in A.mult[xs[n]][xs[0]].items():
            t = (k,) + xs[1:n]
            r = tgt_index[t]
            acc[r] = acc.get(r, 0) + sign * c
        for r, v in acc.items():
            M.set(r, col, v)
    return M


def hh_bar(A: FiniteAlgebra, cutoff: int) -> HHReport:
    """Ranks of the (unnormalized) bar-complex homology HH_0..HH_cutoff."""
    if A.dim > MAX_BAR_DIM or cutoff > MAX_BAR_CUTOFF or A.dim ** (cutoff + 2) > MAX_BAR_CELLS:
        raise SizeGuardError(f"bar complex of a {A.dim}-dimensional algebra up to degree {cutoff} is too large")
    Q = BanachRingDescriptor.rational()
    rk = {n: rank(bar_boundary(A, n), Q) for n in range(1, cutoff + 2)}
    ranks = [A.dim ** (n + 1) - rk.get(n, 0) - rk[n + 1] for n in range(cutoff + 1)]
    return HHReport("Bar", ranks, A.name)


# -- diagonal Koszul model -----------------------------------------------------------
def hh_complex(A: TruncatedAlgebra) -> ChainComplex:
    """A (x)_{A(x)A} K_{A(x)A}: the diagonal Koszul complex restricted to the diagonal."""
    K = diagonal_koszul(A)
    n = A.nvars
    diag = AlgebraMap(A.square(), A, tuple(A.gens()) * 2)
    return tensor_over(K, diag)


def _hh_report(X: ChainComplex, model: str, label: str, band: int | None = None) -> HHReport:
    H = X.homology(band)
    top = -X.degrees[0]
    return HHReport(model, [H.ranks[-j] for j in range(top + 1)], label, X.algebra.order,
                    [H.stable[-j] for j in range(top + 1)], H.band)


def _label(A: TruncatedAlgebra) -> str:
    return f"{A.ring.label}[{A.nvars} vars] {A.flavor.literal()} N={A.order}"


def hh_koszul(A: TruncatedAlgebra, check: bool = True) -> HHReport:
    """HH of a truncated (analytic) polynomial algebra through the diagonal Koszul complex."""
    if A.ring.carrier == "integer":
        raise UnsupportedCase("Hochschild ranks are computed over Q or Q_p")
    if A.nvars == 0:
        return HHReport("DiagonalKoszul", [1], _label(A), A.order, [1], A.order)
    if check:
        ok, res = _strict_all(A, samples=2, seed=0)
        if not ok:
            raise UnsupportedCase(f"flavor fails the strictness condition: {[r.reason for r in res if not r.ok]}")
    return _hh_report(hh_complex(A), "DiagonalKoszul", _label(A))


def hh_base_change(f: AlgebraMap, band: int | None = None) -> bool:
    """Ranks of B (x)_A HH(A) against HH(B) on one stable band."""
    v = verify_hepi(f, samples=2)
    if not v.verdict:
        raise UnsupportedCase("map is not a verified homotopy epimorphism")
    XA = hh_complex(f.source)
    pushed = tensor_over(XA, f)
    direct = hh_complex(f.target)
    b = min(pushed.default_band(), direct.default_band()) if band is None else band
    return pushed.homology(b).stable == direct.homology(b).stable


# -- complete intersections -------------------------------------------------------------
def _derivative(f: MultiSeries, i: int) -> MultiSeries:
    out = {}
    for J, a in f.coeffs.items():
        if J[i]:
            K = list(J)
            K[i] -= 1
            out[tuple(K)] = a * J[i]
    return MultiSeries(f.ring, f.nvars, f.order, out)


def ci_model(P: TruncatedAlgebra, fs: list[MultiSeries], cutoff: int) -> ChainComplex:
    """DG model of HH(P // (f_1..f_k)) in homological degrees 0..cutoff+1.

    Generators over P: eps_j (degree 1, d = f_j), dx_i (degree 1, d = 0) and
    divided-power variables t_j (degree 2, d = sum_i (df_j/dx_i) dx_i).  A
    basis element is (S, T, alpha) = eps^S dx^T t^(alpha).
    """
    n, k = P.nvars, len(fs)
    for f in fs:
        P.check_series(f)
    dfs = [[_derivative(f, i) for i in range(n)] for f in fs]
    top = cutoff + 1
    gens: dict = {}
    for deg in range(top + 1):
        lst = []
        for s in range(min(k, deg) + 1):
            for t in range(min(n, deg - s) + 1):
                rest = deg - s - t
                if rest % 2:
                    continue
                for S in combinations(range(k), s):
                    for T in combinations(range(n), t):
                        for alpha in _compositions(k, rest // 2):
                            lst.append((S, T, alpha))
        gens[-deg] = lst
    index = {d: {g: i for i, g in enumerate(lst)} for d, lst in gens.items()}
    diffs = {}
    for deg in range(1, top + 1):
        d = {}
        for c, (S, T, alpha) in enumerate(gens[-deg]):
            terms = []
            # eps part, Koszul sign by position
            for pos, j in enumerate(S):
                sign = -1 if pos % 2 else 1
                terms.append(((S[:pos] + S[pos + 1:], T, alpha), fs[j] if sign > 0 else -fs[j]))
            # t part: t_j^(a) -> t_j^(a-1) * sum_i df_j/dx_i dx_i, sign (-1)^(|S|+|T|)
            base_sign = -1 if (len(S) + len(T)) % 2 else 1
            for j in range(k):
                if alpha[j] == 0:
                    continue
                beta = alpha[:j] + (alpha[j] - 1,) + alpha[j + 1:]
                for i in range(n):
                    if i in T or dfs[j][i].is_zero():
                        continue
                    # insert dx_i into T, sign from moving past earlier dx's
                    ins = sum(1 for x in T if x < i)
                    newT = tuple(sorted(T + (i,)))
                    sign = base_sign * (-1 if ins % 2 else 1)
                    terms.append(((S, newT, beta), dfs[j][i] if sign > 0 else -dfs[j][i]))
            for key, e in terms:
                r = index[-deg + 1][key]
                prev = d.get((r, c))
                d[(r, c)] = e if prev is None else prev + e
        diffs[-deg] = d
    base = {d: [len(T) for (_, T, _) in lst] for d, lst in gens.items()}
    return ChainComplex(P, gens, diffs, base_weights=base)


def _compositions(k: int, total: int) -> list[tuple]:
    if k == 0:
        return [()] if total == 0 else []
    return [(a,) + rest for a in range(total + 1) for rest in _compositions(k - 1, total - a)]


def _regular(P: TruncatedAlgebra, fs: list) -> bool:
    if not fs:
        return True
    K = koszul(P, fs)
    H = K.homology()
    return all(H.stable[d] == 0 for d in H.stable if d < 0)


def hh_complete_intersection(P: TruncatedAlgebra, fs: list[MultiSeries], cutoff: int = 4,
                             flavor=None):
    """HH_0..HH_cutoff of P // (f) via the DG model, with an optional base-change check.

    Returns (report, base_change_ok).  With an analytification ``flavor`` the
    model built over P^an is compared with the base change of the polynomial
    model; otherwise the boolean is None.
    """
    if not _regular(P, fs):
        raise UnsupportedCase("elements do not form a regular sequence on the truncation")
    X = ci_model(P, fs, cutoff)
    b = X.default_band()
    if b < 0:
        raise UnsupportedCase(f"truncation order {P.order} too small for cutoff {cutoff}")
    H = X.homology(b)
    rep = HHReport("DiagonalKoszul", [H.stable[-j] for j in range(cutoff + 1)],
                   f"{_label(P)} // ({', '.join(map(repr, fs))})", P.order,
                   [H.stable[-j] for j in range(cutoff + 1)], b)
    rep.ranks = [H.ranks[-j] for j in range(cutoff + 1)]
    ok = None
    if flavor is not None:
        analytic = TruncatedAlgebra(P.ring, P.nvars, P.order, flavor)
        phi = AlgebraMap.canonical(P, analytic)
        if not verify_hepi(phi, samples=2).verdict:
            raise UnsupportedCase("analytification is not a verified homotopy epimorphism")
        direct = ci_model(analytic, [phi(f) for f in fs], cutoff)
        pushed = tensor_over(X, phi)
        bb = min(direct.default_band(), pushed.default_band())
        ok = direct.homology(bb).stable == pushed.homology(bb).stable
    return rep, ok


def ci_order(fs_degrees: list[int], nvars: int, cutoff: int) -> int:
    """A truncation order large enough for the stable band of the DG model to hold HH_0..HH_cutoff."""
    top = max(fs_degrees, default=1)
    return 2 * (cutoff + 2) * top + nvars


def hkr_expected(nvars: int, band: int) -> list[int]:
    """binomial(n, j) * (number of monomials of degree <= band)."""
    r = comb(band + nvars, nvars)
    return [comb(nvars, j) * r for j in range(nvars + 1)]
