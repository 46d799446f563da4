"""Free chain complexes over truncated series algebras, and their homology.

Truncation models
-----------------
fine  -- each generator of weight w carries the monomials of degree <= N - w,
         and weights follow a max rule so that every boundary map is the honest
         restriction of multiplication (a subcomplex of the untruncated one).
adic  -- same bases, but read as quotients modulo degree > N - w; weights follow
         a min rule over orders (lowest degrees) so the quotient maps are well
         defined.  Used for formal power series.
jet   -- the finite algebra R[x]/m^{N+1}: weight 0 everywhere, products reduced.

The stable band b keeps basis elements whose monomial degree is <= b, with
b = N - (largest weight) by default, so every generator sees the same band.
Fine complexes report classes with a representative in the band modulo all
boundaries; adic complexes report the image of homology in the quotient by
monomials of degree > b.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Sequence

from .errors import DescriptorMismatch, TruncationError, UnsupportedCase
from .linalg import SparseMatrix, rank, torsion
from .scalars import BanachRingDescriptor
from .series import (
    FormalPS,
    Hybrid,
    MultiSeries,
    Polynomial,
    diagonal_restrict,
    flavor_nvars_ok,
    flavor_product,
    monomials,
    parse_series,
    tensor_square,
)

MODELS = ("fine", "adic", "jet", "mixed")


def model_for(flavor) -> str:
    if isinstance(flavor, Hybrid):
        kinds = {model_for(f) for f in flavor.factors}
        return kinds.pop() if len(kinds) == 1 else "mixed"
    return "adic" if isinstance(flavor, FormalPS) else "fine"


@dataclass(frozen=True)
class TruncatedAlgebra:
    """R[x_1..x_n] truncated at total degree N, tagged with a flavor."""

    ring: BanachRingDescriptor
    nvars: int
    order: int
    flavor: object = field(default_factory=Polynomial)
    model: str = ""

    def __post_init__(self):
        if not self.model:
            object.__setattr__(self, "model", model_for(self.flavor))
        if self.model not in MODELS:
            raise ValueError(f"unknown truncation model {self.model}")
        if self.nvars:
            flavor_nvars_ok(self.flavor, self.nvars)
        if self.ring.carrier not in ("integer", "rational", "padic"):
            raise UnsupportedCase(f"coefficient ring {self.ring.label}")

    def basis(self, maxdeg: int | None = None) -> list:
        return monomials(self.nvars, self.order if maxdeg is None else maxdeg)

    def dim(self) -> int:
        return comb(self.order + self.nvars, self.nvars)

    def stable_rank(self, band: int) -> int:
        """Number of monomials of degree <= band."""
        return comb(band + self.nvars, self.nvars) if band >= 0 else 0

    def zero(self) -> MultiSeries:
        return MultiSeries(self.ring, self.nvars, self.order)

    def one(self) -> MultiSeries:
        return MultiSeries.constant(self.ring, self.nvars, self.order)

    def const(self, c) -> MultiSeries:
        return MultiSeries.constant(self.ring, self.nvars, self.order, c)

    def var(self, i: int = 0) -> MultiSeries:
        return MultiSeries.var(self.ring, self.nvars, self.order, i)

    def gens(self) -> list[MultiSeries]:
        return [self.var(i) for i in range(self.nvars)]

    def series(self, text: str, names=None) -> MultiSeries:
        return parse_series(text, self.ring, self.nvars, self.order, names)

    def tensor(self, other: "TruncatedAlgebra") -> "TruncatedAlgebra":
        self.ring.check(other.ring)
        if self.order != other.order:
            raise DescriptorMismatch("tensor factors need one truncation order")
        fl = flavor_product(self.flavor, self.nvars, other.flavor, other.nvars)
        model = self.model if self.model == other.model else ""
        if self.nvars == 0:
            model = other.model
        elif other.nvars == 0:
            model = self.model
        return TruncatedAlgebra(self.ring, self.nvars + other.nvars, self.order, fl, model)

    def square(self) -> "TruncatedAlgebra":
        if self.nvars == 1 and not isinstance(self.flavor, Hybrid):
            return TruncatedAlgebra(self.ring, 2, self.order, tensor_square(self.flavor), self.model)
        return self.tensor(self)

    def with_order(self, order: int) -> "TruncatedAlgebra":
        return TruncatedAlgebra(self.ring, self.nvars, order, self.flavor, self.model)

    def check_series(self, f: MultiSeries) -> None:
        self.ring.check(f.ring)
        if (f.nvars, f.order) != (self.nvars, self.order):
            raise DescriptorMismatch(
                f"series in {f.nvars} vars at N={f.order} used over an algebra in {self.nvars} vars at N={self.order}"
            )


def embed(f: MultiSeries, nvars: int, offset: int) -> MultiSeries:
    """Place the variables of f at positions offset.. of an nvars-variable ring."""
    if offset + f.nvars > nvars:
        raise DescriptorMismatch("embedding does not fit")
    pre, post = (0,) * offset, (0,) * (nvars - offset - f.nvars)
    return MultiSeries(f.ring, nvars, f.order, {pre + J + post: a for J, a in f.coeffs.items()})


@dataclass(frozen=True)
class AlgebraMap:
    """x_i -> images[i], a map of truncated algebras."""

    source: TruncatedAlgebra
    target: TruncatedAlgebra
    images: tuple

    def __post_init__(self):
        imgs = tuple(self.images)
        if len(imgs) != self.source.nvars:
            raise DescriptorMismatch(f"need {self.source.nvars} generator images, got {len(imgs)}")
        for g in imgs:
            self.target.check_series(g)
        object.__setattr__(self, "images", imgs)

    @classmethod
    def canonical(cls, source: TruncatedAlgebra, target: TruncatedAlgebra) -> "AlgebraMap":
        """x_i -> x_i."""
        if source.nvars != target.nvars:
            raise DescriptorMismatch("canonical map needs equal variable counts")
        return cls(source, target, tuple(target.gens()))

    @classmethod
    def identity(cls, A: TruncatedAlgebra) -> "AlgebraMap":
        return cls(A, A, tuple(A.gens()))

    def __call__(self, f: MultiSeries) -> MultiSeries:
        self.source.ring.check(f.ring)
        if f.nvars != self.source.nvars:
            raise DescriptorMismatch("series not in the source algebra")
        if f.nvars == 0:
            return self.target.const(f[()])
        return f.substitute(list(self.images))

    def is_identity(self) -> bool:
        return self.source == self.target and all(g == v for g, v in zip(self.images, self.target.gens()))

    def compose(self, other: "AlgebraMap") -> "AlgebraMap":
        """other after self."""
        if self.target != other.source:
            raise DescriptorMismatch("maps are not composable")
        return AlgebraMap(self.source, other.target, tuple(other(g) for g in self.images))

    def tensor(self, other: "AlgebraMap") -> "AlgebraMap":
        src = self.source.tensor(other.source)
        tgt = self.target.tensor(other.target)
        n = tgt.nvars
        imgs = [embed(g, n, 0) for g in self.images] + [embed(g, n, self.target.nvars) for g in other.images]
        return AlgebraMap(src, tgt, tuple(imgs))


@dataclass
class HomologyReport:
    ring: str
    model: str
    order: int
    ranks: dict
    torsion: dict = field(default_factory=dict)
    stable: dict = field(default_factory=dict)
    band: int | None = None

    def concentrated_in_zero(self, stable: bool = True) -> bool:
        src = self.stable if stable else self.ranks
        return all(r == 0 for d, r in src.items() if d != 0)

    def to_dict(self) -> dict:
        return {
            "ring": self.ring,
            "model": self.model,
            "order": self.order,
            "ranks": {str(k): v for k, v in sorted(self.ranks.items())},
            "torsion": {str(k): v for k, v in sorted(self.torsion.items()) if v},
            "stable_ranks": {str(k): v for k, v in sorted(self.stable.items())},
            "band": self.band,
        }


class ChainComplex:
    """Cohomologically graded free complex C^lo -> ... -> C^hi over a truncated algebra.

    ``diffs[i]`` maps degree i to i+1 and is a dict {(target, source): series}
    indexed by generator positions.
    """

    def __init__(self, algebra: TruncatedAlgebra, gens: dict, diffs: dict, top_weights: dict | None = None,
                 augmentation=None, base_weights: dict | None = None):
        self.algebra = algebra
        degs = sorted(gens)
        if degs != list(range(degs[0], degs[-1] + 1)):
            raise ValueError("degrees must be contiguous")
        self.degrees = degs
        self.gens = {i: list(gens[i]) for i in degs}
        self.diffs = {}
        for i in degs[:-1]:
            d = {}
            for (r, c), e in diffs.get(i, {}).items():
                algebra.check_series(e)
                if not (0 <= r < len(self.gens[i + 1]) and 0 <= c < len(self.gens[i])):
                    raise IndexError(f"entry ({r},{c}) out of range in d^{i}")
                if e.degree() > algebra.order:
                    raise TruncationError("boundary entry exceeds the truncation order")
                if not e.is_zero():
                    d[(r, c)] = e
            self.diffs[i] = d
        self.augmentation = augmentation
        self.weights = self._weights(top_weights or {}, base_weights or {})
        self._realized = None

    # -- weights -----------------------------------------------------------------
    def _weights(self, top: dict, base: dict) -> dict:
        """Generator weights; ``base`` gives lower bounds (used when a generator has no entries)."""
        model = self.algebra.model
        hi = self.degrees[-1]
        w = {hi: [max(top.get(k, 0), _at(base.get(hi), k)) for k in range(len(self.gens[hi]))]}
        if model == "mixed":
            for d in self.diffs.values():
                for e in d.values():
                    if e.degree() != e.valuation():
                        raise UnsupportedCase("mixed fine/adic truncation needs homogeneous boundary entries")
        for i in reversed(self.degrees[:-1]):
            out = []
            for c in range(len(self.gens[i])):
                cands = [
                    (e.degree() if model in ("fine", "mixed") else e.valuation()) + w[i + 1][r]
                    for (r, cc), e in self.diffs[i].items()
                    if cc == c
                ]
                floor = _at(base.get(i), c)
                if model == "jet":
                    out.append(0)
                elif not cands:
                    out.append(floor)
                elif model in ("fine", "mixed"):
                    out.append(max([floor] + cands))
                else:
                    out.append(max(0, min(cands)))
            w[i] = out
        return w

    def max_weight(self) -> int:
        return max((max(ws, default=0) for ws in self.weights.values()), default=0)

    def default_band(self) -> int:
        return self.algebra.order - self.max_weight()

    # -- realization -------------------------------------------------------------
    def _basis(self, i: int) -> list:
        N, model = self.algebra.order, self.algebra.model
        out = []
        for g, wt in enumerate(self.weights[i]):
            top = N if model == "jet" else N - wt
            for m in monomials(self.algebra.nvars, top) if top >= 0 else []:
                out.append((g, m, sum(m)))
        return out

    def realize(self):
        """Bases per degree as (generator, monomial, monomial degree), and boundary matrices."""
        if self._realized is not None:
            return self._realized
        N, model = self.algebra.order, self.algebra.model
        bases = {i: self._basis(i) for i in self.degrees}
        index = {i: {(g, m): k for k, (g, m, _) in enumerate(bases[i])} for i in self.degrees}
        mats = {}
        for i in self.degrees[:-1]:
            src, tgt = bases[i], index[i + 1]
            M = SparseMatrix(len(bases[i + 1]), len(src))
            by_col: dict = {}
            for (r, c), e in self.diffs[i].items():
                by_col.setdefault(c, []).append((r, list(e.coeffs.items())))
            for col, (g, m, _) in enumerate(src):
                acc: dict = {}
                for r, terms in by_col.get(g, ()):
                    for J, a in terms:
                        K = tuple(x + y for x, y in zip(J, m))
                        key = (r, K)
                        row = tgt.get(key)
                        if row is None:
                            if model == "fine" or model == "mixed":
                                raise TruncationError(f"fine model lost the term {K} of generator {r}")
                            continue
                        acc[row] = acc[row] + a if row in acc else a
                for row, v in acc.items():
                    M.set(row, col, v)
            mats[i] = M
        self._realized = (bases, mats)
        return self._realized

    def matrix(self, i: int) -> SparseMatrix:
        return self.realize()[1][i]

    def dims(self) -> dict:
        return {i: len(b) for i, b in self.realize()[0].items()}

    def check_d_squared(self) -> bool:
        _, mats = self.realize()
        return all(mats[i + 1].matmul(mats[i]).is_zero() for i in self.degrees[:-2])

    # -- homology ----------------------------------------------------------------
    def _rank(self, M: SparseMatrix) -> int:
        return rank(M, self.algebra.ring)

    def homology(self, band: int | None = None) -> HomologyReport:
        bases, mats = self.realize()
        R = self.algebra.ring
        rk = {i: self._rank(mats[i]) for i in mats}
        ranks, tors = {}, {}
        for i in self.degrees:
            ranks[i] = len(bases[i]) - rk.get(i, 0) - rk.get(i - 1, 0)
            if R.carrier == "integer" and (i - 1) in mats:
                tors[i] = torsion(mats[i - 1])
        b = self.default_band() if band is None else band
        stable = self.stable_homology(b, rk)
        return HomologyReport(R.label, self.algebra.model, self.algebra.order, ranks, tors, stable, b)

    def stable_homology(self, band: int | None = None, full_ranks: dict | None = None) -> dict:
        """Ranks of homology on the stable band of monomial degree <= band."""
        b = self.default_band() if band is None else band
        bases, mats = self.realize()
        rk = full_ranks if full_ranks is not None else {i: self._rank(mats[i]) for i in mats}
        out = {}
        fine = self.algebra.model in ("fine", "mixed")
        for i in self.degrees:
            low = [k for k, (_, _, t) in enumerate(bases[i]) if t <= b]
            high = [k for k, (_, _, t) in enumerate(bases[i]) if t > b]
            d_out = mats.get(i)
            d_in = mats.get(i - 1)
            if fine:
                # Z restricted to low, modulo all boundaries
                r_low = self._rank(d_out.submatrix(cols=low)) if d_out is not None else 0
                r_in = rk.get(i - 1, 0)
                r_in_high = self._rank(d_in.submatrix(rows=high)) if d_in is not None else 0
                out[i] = len(low) - r_low - r_in + r_in_high
            else:
                # image of H in C / C_{> b}
                r_out = rk.get(i, 0)
                r_high = self._rank(d_out.submatrix(cols=high)) if d_out is not None else 0
                dimZ = len(bases[i]) - r_out
                dimZ_high = len(high) - r_high
                r_in_low = self._rank(d_in.submatrix(rows=low)) if d_in is not None else 0
                out[i] = dimZ - dimZ_high - r_in_low
        return out


def _at(xs, k: int) -> int:
    return xs[k] if xs is not None and k < len(xs) else 0


# -- constructions ----------------------------------------------------------------
def koszul(A: TruncatedAlgebra, elements: Sequence[MultiSeries], augmentation=None) -> ChainComplex:
    """Koszul complex K(a_1..a_k) in degrees -k..0."""
    k = len(elements)
    for a in elements:
        A.check_series(a)
    subsets = {-j: [S for S in combinations(range(k), j)] for j in range(k + 1)}
    pos = {-j: {S: n for n, S in enumerate(subsets[-j])} for j in range(k + 1)}
    diffs = {}
    for j in range(1, k + 1):
        d = {}
        for c, S in enumerate(subsets[-j]):
            for t, s in enumerate(S):
                T = S[:t] + S[t + 1:]
                e = elements[s] if t % 2 == 0 else -elements[s]
                if not e.is_zero():
                    d[(pos[-j + 1][T], c)] = e
        diffs[-j] = d
    return ChainComplex(A, subsets, diffs, augmentation=augmentation)


def diagonal_koszul(C: TruncatedAlgebra) -> ChainComplex:
    """Koszul complex of (y_i - z_i) over C (x) C, augmented by diagonal restriction to C."""
    if C.nvars == 0:
        raise UnsupportedCase("diagonal Koszul complex needs at least one variable")
    CC = C.square()
    n = C.nvars
    elems = [CC.var(i) - CC.var(n + i) for i in range(n)]
    return koszul(CC, elems, augmentation=(C, diagonal_restrict))


def check_augmentation(K: ChainComplex) -> bool:
    """pi o d = 0 on the last boundary, and pi is onto the truncated target."""
    if K.augmentation is None:
        raise ValueError("complex has no augmentation")
    C, pi = K.augmentation
    d = K.diffs.get(-1, {})
    if any(not pi(e).is_zero() for e in d.values()):
        return False
    image = set()
    for J in monomials(K.algebra.nvars, K.algebra.order):
        image.update(pi(MultiSeries.monomial(K.algebra.ring, K.algebra.nvars, K.algebra.order, J)).coeffs)
    return image >= set(C.basis())


def tensor_over(X: ChainComplex, left: AlgebraMap, right: AlgebraMap | None = None) -> ChainComplex:
    """Base change of X along an algebra map (or along left (x) right on a two-block algebra)."""
    phi = left if right is None else left.tensor(right)
    if phi.source.nvars != X.algebra.nvars or phi.source.ring != X.algebra.ring:
        raise DescriptorMismatch("map source does not match the complex's algebra")
    diffs = {i: {rc: phi(e) for rc, e in d.items()} for i, d in X.diffs.items()}
    return ChainComplex(phi.target, X.gens, diffs, base_weights=X.weights)


def complex_from_matrices(ring: BanachRingDescriptor, mats: dict, dims: dict) -> ChainComplex:
    """Complex over the ground ring (0 variables) with scalar boundary matrices."""
    A = TruncatedAlgebra(ring, 0, 0, Polynomial())
    gens = {i: list(range(n)) for i, n in dims.items()}
    diffs = {i: {rc: A.const(v) for rc, v in m.items()} for i, m in mats.items()}
    return ChainComplex(A, gens, diffs)
