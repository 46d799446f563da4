"""Exact ranks over Q and Q_p, and invariant factors over Z."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from sympy import QQ, ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import invariant_factors as _invariant_factors

from .errors import PrecisionError
from .scalars import BanachRingDescriptor, PAdic


@dataclass
class SparseMatrix:
    """rows x cols matrix stored as {row: {col: value}} without zeros."""

    nrows: int
    ncols: int
    rows: dict = field(default_factory=dict)

    def set(self, i: int, j: int, v) -> None:
        if _zero(v):
            self.rows.get(i, {}).pop(j, None)
            return
        self.rows.setdefault(i, {})[j] = v

    def get(self, i: int, j: int):
        return self.rows.get(i, {}).get(j, 0)

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows.values())

    def submatrix(self, rows=None, cols=None) -> "SparseMatrix":
        """Restrict to the given row and column index lists (order kept)."""
        rmap = {r: k for k, r in enumerate(rows)} if rows is not None else None
        cmap = {c: k for k, c in enumerate(cols)} if cols is not None else None
        out = SparseMatrix(len(rows) if rows is not None else self.nrows, len(cols) if cols is not None else self.ncols)
        for i, row in self.rows.items():
            if rmap is not None and i not in rmap:
                continue
            ii = rmap[i] if rmap is not None else i
            for j, v in row.items():
                if cmap is not None and j not in cmap:
                    continue
                out.rows.setdefault(ii, {})[cmap[j] if cmap is not None else j] = v
        return out

    def matmul(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        out = SparseMatrix(self.nrows, other.ncols)
        for i, row in self.rows.items():
            acc: dict = {}
            for k, a in row.items():
                for j, b in other.rows.get(k, {}).items():
                    acc[j] = acc[j] + a * b if j in acc else a * b
            for j, v in acc.items():
                out.set(i, j, v)
        return out

    def is_zero(self) -> bool:
        return all(not r for r in self.rows.values())

    def to_dense(self) -> list:
        return [[self.get(i, j) for j in range(self.ncols)] for i in range(self.nrows)]

    def permuted(self, row_perm, col_perm) -> "SparseMatrix":
        out = SparseMatrix(self.nrows, self.ncols)
        for i, row in self.rows.items():
            for j, v in row.items():
                out.rows.setdefault(row_perm[i], {})[col_perm[j]] = v
        return out


def _zero(v) -> bool:
    return v.is_zero() if isinstance(v, PAdic) else v == 0


def _to_domain(M: SparseMatrix, dom) -> DomainMatrix:
    conv = {}
    for i, row in M.rows.items():
        r = {}
        for j, v in row.items():
            if isinstance(v, PAdic):
                v = v.lift()
            v = Fraction(v)
            r[j] = dom.convert(v.numerator) / dom.convert(v.denominator) if dom is QQ else dom.convert(v.numerator)
        if r:
            conv[i] = r
    return DomainMatrix(conv, (M.nrows, M.ncols), dom)


def rank_rational(M: SparseMatrix) -> int:
    if M.nrows == 0 or M.ncols == 0 or M.is_zero():
        return 0
    return _to_domain(M, QQ).rank()


def rank_padic(M: SparseMatrix, ring: BanachRingDescriptor) -> int:
    """Rank over Q_p by elimination with minimal-valuation pivots.

    Entries carry capped relative precision, so a cancellation of two
    entries of valuation v is only known modulo p^(v + precision).  A zero
    known to less than p^(vmin + precision), vmin the smallest valuation in
    the input, means precision was genuinely lost and the rank cannot be
    decided; this raises PrecisionError rather than guessing.
    """
    if M.nrows == 0 or M.ncols == 0:
        return 0
    p, prec = ring.p, ring.precision
    rows = {}
    for i, row in M.rows.items():
        r = {j: ring.coerce(v) for j, v in row.items()}
        r = {j: v for j, v in r.items() if not v.is_zero()}
        if r:
            rows[i] = r
    if not rows:
        return 0
    limit = min(v.val for r in rows.values() for v in r.values()) + prec
    rank = 0
    doubtful = False
    while rows:
        best = None
        for i, row in rows.items():
            for j, v in row.items():
                if v.is_zero():
                    if v.absprec is not None and v.absprec < limit:
                        doubtful = True
                    continue
                if best is None or v.val < best[2]:
                    best = (i, j, v.val)
        if best is None:
            break
        pi, pj, _ = best
        prow = rows.pop(pi)
        pinv = prow[pj].inverse()
        rank += 1
        for i in list(rows):
            row = rows[i]
            c = row.get(pj)
            if c is None:
                continue
            factor = c * pinv
            for j, v in prow.items():
                t = row[j] - factor * v if j in row else -(factor * v)
                if t.is_zero():
                    if t.absprec is not None and t.absprec < limit:
                        doubtful = True
                    row.pop(j, None)
                else:
                    row[j] = t
            row.pop(pj, None)
            if not row:
                del rows[i]
    if doubtful:
        raise PrecisionError(f"rank over Q_{p} undecidable at precision {prec}")
    return rank


def rank(M: SparseMatrix, ring: BanachRingDescriptor) -> int:
    """Rank over the fraction field of the coefficient ring."""
    if ring.carrier == "padic":
        return rank_padic(M, ring)
    return rank_rational(M)


def invariant_factors(M: SparseMatrix) -> list[int]:
    """Nonzero invariant factors of an integer matrix (Smith normal form diagonal)."""
    if M.nrows == 0 or M.ncols == 0 or M.is_zero():
        return []
    # drop zero rows/cols first: they do not change the invariant factors
    nz_rows = sorted(M.rows)
    nz_cols = sorted({j for r in M.rows.values() for j in r})
    dm = _to_domain(M.submatrix(nz_rows, nz_cols), ZZ)
    return [int(d) for d in _invariant_factors(dm) if d != 0]


def torsion(M: SparseMatrix) -> list[int]:
    """Invariant factors greater than 1: the torsion of coker M over Z."""
    return [d for d in (abs(x) for x in invariant_factors(M)) if d > 1]
