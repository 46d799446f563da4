"""Sparse truncated multivariate series and the norm flavors on them."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping

from .errors import DescriptorMismatch, ParseError, TruncationError, UnsupportedCase
from .scalars import BanachRingDescriptor, PAdic, Raw, parse_rational, parse_scalar

Exp = tuple


def glex_key(J: Exp):
    """Graded-lex sort key, smallest first."""
    return (sum(J), J)


def monomials(nvars: int, maxdeg: int, mindeg: int = 0) -> list[Exp]:
    """All exponent vectors with mindeg <= |J| <= maxdeg, in graded-lex order."""
    out = []
    for d in range(mindeg, maxdeg + 1):
        out.extend(_compositions(nvars, d))
    return out


def _compositions(n: int, d: int) -> list[Exp]:
    if n == 0:
        return [()] if d == 0 else []
    res = []
    for first in range(d + 1):
        for rest in _compositions(n - 1, d - first):
            res.append((first,) + rest)
    return sorted(res)


def _is_zero(x) -> bool:
    return x.is_zero() if isinstance(x, PAdic) else x == 0


@lru_cache(maxsize=65536)
def radius_power(radii: tuple, J: Exp) -> Fraction:
    out = Fraction(1)
    for r, j in zip(radii, J):
        if j:
            out *= Fraction(r) ** j
    return out


class MultiSeries:
    """Truncated series sum a_J x^J with |J| <= order."""

    __slots__ = ("ring", "nvars", "order", "coeffs")

    def __init__(self, ring: BanachRingDescriptor, nvars: int, order: int, coeffs: Mapping | None = None):
        if nvars < 0 or order < 0:
            raise ValueError("nvars and order must be nonnegative")
        self.ring = ring
        self.nvars = nvars
        self.order = order
        clean = {}
        for J, a in (coeffs or {}).items():
            J = tuple(J)
            if len(J) != nvars or min(J, default=0) < 0:
                raise ValueError(f"bad exponent {J} for {nvars} variables")
            if sum(J) > order:
                continue
            a = ring.coerce(a)
            if not _is_zero(a):
                clean[J] = a
        self.coeffs = clean

    # -- constructors ------------------------------------------------------
    @classmethod
    def constant(cls, ring, nvars, order, c=1) -> "MultiSeries":
        return cls(ring, nvars, order, {(0,) * nvars: c})

    @classmethod
    def var(cls, ring, nvars, order, i: int) -> "MultiSeries":
        J = [0] * nvars
        J[i] = 1
        return cls(ring, nvars, order, {tuple(J): 1})

    @classmethod
    def monomial(cls, ring, nvars, order, J: Exp, c=1) -> "MultiSeries":
        return cls(ring, nvars, order, {tuple(J): c})

    def _like(self, coeffs) -> "MultiSeries":
        out = MultiSeries.__new__(MultiSeries)
        out.ring, out.nvars, out.order = self.ring, self.nvars, self.order
        out.coeffs = {J: a for J, a in coeffs.items() if not _is_zero(a)}
        return out

    def zero_like(self) -> "MultiSeries":
        return self._like({})

    # -- structure ---------------------------------------------------------
    def _check(self, other: "MultiSeries") -> None:
        if not isinstance(other, MultiSeries):
            raise TypeError("expected a MultiSeries")
        self.ring.check(other.ring)
        if (self.nvars, self.order) != (other.nvars, other.order):
            raise DescriptorMismatch(
                f"series shapes ({self.nvars} vars, N={self.order}) and ({other.nvars} vars, N={other.order})"
            )

    def items(self):
        """(exponent, coefficient) pairs in graded-lex order."""
        return sorted(self.coeffs.items(), key=lambda t: glex_key(t[0]))

    def __getitem__(self, J) -> Raw:
        return self.coeffs.get(tuple(J), self.ring.zero())

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        """Total degree; -1 for the zero series."""
        return max((sum(J) for J in self.coeffs), default=-1)

    def valuation(self) -> int:
        """Lowest total degree present; -1 for the zero series."""
        return min((sum(J) for J in self.coeffs), default=-1)

    def with_order(self, order: int) -> "MultiSeries":
        return MultiSeries(self.ring, self.nvars, order, self.coeffs)

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, MultiSeries):
            other = MultiSeries.constant(self.ring, self.nvars, self.order, other)
        self._check(other)
        out = dict(self.coeffs)
        for J, b in other.coeffs.items():
            out[J] = out[J] + b if J in out else b
        return self._like(out)

    __radd__ = __add__

    def __neg__(self):
        return self._like({J: -a for J, a in self.coeffs.items()})

    def __sub__(self, other):
        if not isinstance(other, MultiSeries):
            other = MultiSeries.constant(self.ring, self.nvars, self.order, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "MultiSeries":
        c = self.ring.coerce(c)
        return self._like({J: c * a for J, a in self.coeffs.items()})

    def __mul__(self, other):
        if not isinstance(other, MultiSeries):
            return self.scale(other)
        self._check(other)
        N = self.order
        out: dict = {}
        B = [(J, sum(J), b) for J, b in other.coeffs.items()]
        for I, a in self.coeffs.items():
            di = sum(I)
            for J, dj, b in B:
                if di + dj > N:
                    continue
                K = tuple(i + j for i, j in zip(I, J))
                t = a * b
                out[K] = out[K] + t if K in out else t
        return self._like(out)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int):
        out = MultiSeries.constant(self.ring, self.nvars, self.order)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, MultiSeries):
            return NotImplemented
        if (self.ring, self.nvars, self.order) != (other.ring, other.nvars, other.order):
            return False
        return (self - other).is_zero()

    def __hash__(self):
        return hash((self.nvars, self.order, tuple(sorted(self.coeffs))))

    def substitute(self, images: list["MultiSeries"]) -> "MultiSeries":
        """Compose: x_i -> images[i], truncated at the images' order."""
        if len(images) != self.nvars:
            raise DescriptorMismatch("need one image per variable")
        if not images:
            raise UnsupportedCase("substitution from zero variables needs a target shape")
        tgt = images[0]
        for g in images[1:]:
            tgt._check(g)
        out = tgt.zero_like()
        cache: dict = {}

        def power(i, e):
            key = (i, e)
            if key not in cache:
                cache[key] = MultiSeries.constant(tgt.ring, tgt.nvars, tgt.order) if e == 0 else power(i, e - 1) * images[i]
            return cache[key]

        for J, a in self.items():
            term = MultiSeries.constant(tgt.ring, tgt.nvars, tgt.order, tgt.ring.coerce(self.ring.to_rational(a)))
            for i, e in enumerate(J):
                if e:
                    term = term * power(i, e)
            out = out + term
        return out

    def change_ring(self, ring: BanachRingDescriptor) -> "MultiSeries":
        return MultiSeries(ring, self.nvars, self.order, {J: self.ring.to_rational(a) for J, a in self.coeffs.items()})

    # -- printing ----------------------------------------------------------
    def __repr__(self):
        if not self.coeffs:
            return "0"
        names = default_names(self.nvars)
        parts = []
        for J, a in self.items():
            mono = "*".join(f"{names[i]}^{e}" if e > 1 else names[i] for i, e in enumerate(J) if e)
            c = self.ring.to_rational(a)
            if mono:
                parts.append(mono if c == 1 else f"-{mono}" if c == -1 else f"{c}*{mono}")
            else:
                parts.append(str(c))
        return " + ".join(parts).replace("+ -", "- ")


def default_names(nvars: int) -> list[str]:
    if nvars <= 3:
        return ["x", "y", "z"][:nvars]
    return [f"x{i + 1}" for i in range(nvars)]


# -- embeddings and diagonal --------------------------------------------------
def tensor_embed_left(f: MultiSeries) -> MultiSeries:
    n = f.nvars
    return MultiSeries(f.ring, 2 * n, f.order, {J + (0,) * n: a for J, a in f.coeffs.items()})


def tensor_embed_right(f: MultiSeries) -> MultiSeries:
    n = f.nvars
    return MultiSeries(f.ring, 2 * n, f.order, {(0,) * n + J: a for J, a in f.coeffs.items()})


def diagonal_restrict(f: MultiSeries) -> MultiSeries:
    """Set z_i := y_i in a 2n-variable series."""
    if f.nvars % 2:
        raise DescriptorMismatch(f"diagonal restriction needs an even variable count, got {f.nvars}")
    n = f.nvars // 2
    out: dict = {}
    for J, a in f.coeffs.items():
        K = tuple(J[i] + J[n + i] for i in range(n))
        out[K] = out[K] + a if K in out else a
    return MultiSeries(f.ring, n, f.order, out)


# -- flavors -----------------------------------------------------------------
def _fr(xs) -> tuple:
    return tuple(Fraction(x) for x in xs)


@dataclass(frozen=True)
class Polynomial:
    name = "poly"

    @property
    def nvars(self):
        return None

    def literal(self) -> str:
        return "poly"


@dataclass(frozen=True)
class Disc:
    radii: tuple
    name = "disc"

    def __post_init__(self):
        object.__setattr__(self, "radii", _fr(self.radii))
        if not self.radii or min(self.radii) <= 0:
            raise ValueError("radii must be positive")

    @property
    def nvars(self):
        return len(self.radii)

    def literal(self) -> str:
        return f"disc({','.join(map(str, self.radii))})"


@dataclass(frozen=True)
class Tate:
    radii: tuple
    name = "tate"

    def __post_init__(self):
        object.__setattr__(self, "radii", _fr(self.radii))
        if not self.radii or min(self.radii) <= 0:
            raise ValueError("radii must be positive")

    @property
    def nvars(self):
        return len(self.radii)

    def literal(self) -> str:
        return f"tate({','.join(map(str, self.radii))})"


@dataclass(frozen=True)
class Dagger:
    radii: tuple
    rho: tuple = ()
    name = "dagger"

    def __post_init__(self):
        r = _fr(self.radii)
        rho = _fr(self.rho) if self.rho else tuple(x + 1 for x in r)
        object.__setattr__(self, "radii", r)
        object.__setattr__(self, "rho", rho)
        if not r or min(r) <= 0:
            raise ValueError("radii must be positive")
        if len(rho) != len(r) or any(a <= b for a, b in zip(rho, r)):
            raise ValueError("dagger needs rho > r componentwise")

    @property
    def nvars(self):
        return len(self.radii)

    def literal(self) -> str:
        return f"dagger({','.join(map(str, self.radii))};{','.join(map(str, self.rho))})"


@dataclass(frozen=True)
class FormalPS:
    """Weighted product norm sup |a_J|/psi(J); psi is 1 off the table."""

    table: tuple = ()
    arity: int | None = None
    name = "formal"

    def __post_init__(self):
        items = self.table.items() if isinstance(self.table, Mapping) else self.table
        items = tuple(sorted((tuple(J) if isinstance(J, tuple) else (J,), int(v)) for J, v in items))
        for J, v in items:
            if v < 1:
                raise ValueError(f"weight table value {v} < 1 at {J}")
        lens = {len(J) for J, _ in items}
        if len(lens) > 1:
            raise ValueError("weight table exponents of mixed length")
        object.__setattr__(self, "table", items)
        if self.arity is None and lens:
            object.__setattr__(self, "arity", lens.pop())

    @property
    def nvars(self):
        return self.arity

    def psi(self, J) -> int:
        J = tuple(J)
        return self._lookup.get(J, 1)

    @cached_property
    def _lookup(self) -> dict:
        return dict(self.table)

    @classmethod
    def from_function(cls, fn, nvars: int, maxdeg: int) -> "FormalPS":
        return cls(tuple((J, fn(*J)) for J in monomials(nvars, maxdeg)), nvars)

    def literal(self) -> str:
        body = ",".join(f"{'.'.join(map(str, J))}={v}" for J, v in self.table)
        return f"formal({body})"


@dataclass(frozen=True)
class Stein:
    """Open polydisc: sup over sequence indices n of psi(n)^-1 * (disc norm at r_n).

    In two variables the index is a pair (m, n) choosing r_m for the first
    coordinate and r_n for the second; weights are keyed accordingly.
    """

    radii: tuple
    sequence: tuple
    weights: tuple = ()
    name = "stein"

    def __post_init__(self):
        r = _fr(self.radii)
        seq = tuple(_fr(s) if isinstance(s, (tuple, list)) else _fr((s,) * len(r)) for s in self.sequence)
        w = self.weights.items() if isinstance(self.weights, Mapping) else self.weights
        w = tuple(sorted((tuple(n) if isinstance(n, (tuple, list)) else (int(n),), int(v)) for n, v in w))
        object.__setattr__(self, "radii", r)
        object.__setattr__(self, "sequence", seq)
        object.__setattr__(self, "weights", w)
        if not r or min(r) <= 0:
            raise ValueError("radii must be positive")
        if len(r) > 2:
            raise UnsupportedCase("Stein flavor supports at most 2 variables")
        if not seq:
            raise ValueError("Stein flavor needs a nonempty radius sequence")
        for a in seq:
            if len(a) != len(r) or min(a) <= 0 or any(x >= y for x, y in zip(a, r)):
                raise ValueError("Stein radii must satisfy 0 < r_n < r")
        for a, b in zip(seq, seq[1:]):
            if any(x >= y for x, y in zip(a, b)):
                raise ValueError("Stein radius sequence must increase strictly")
        for n, v in w:
            if v < 1:
                raise ValueError("weight table value < 1")
            if len(n) != len(r):
                raise ValueError("Stein weight keys need one index per variable")

    @property
    def nvars(self):
        return len(self.radii)

    def psi(self, n) -> int:
        n = tuple(n) if isinstance(n, (tuple, list)) else (n,)
        return dict(self.weights).get(n, 1)

    def indices(self):
        return list(product(range(len(self.sequence)), repeat=len(self.radii)))

    def radii_at(self, idx) -> tuple:
        return tuple(self.sequence[n][i] for i, n in enumerate(idx))

    def literal(self) -> str:
        seq = "<".join(",".join(map(str, s)) if len(set(s)) > 1 else str(s[0]) for s in self.sequence)
        w = ",".join(f"{'.'.join(map(str, n))}={v}" for n, v in self.weights)
        return f"stein({','.join(map(str, self.radii))};{seq};{w})"


@dataclass(frozen=True)
class Hybrid:
    """Per-variable-block product of flavors (e.g. formal in x, dagger in y)."""

    factors: tuple
    arities: tuple = ()
    name = "hybrid"

    def __post_init__(self):
        flat, ar = [], []
        given = self.arities or tuple(fl.nvars or 1 for fl in self.factors)
        if len(given) != len(self.factors):
            raise ValueError("one arity per factor")
        for fl, n in zip(self.factors, given):
            if isinstance(fl, Hybrid):
                flat.extend(fl.factors)
                ar.extend(fl.arities)
            else:
                if fl.nvars not in (None, n):
                    raise DescriptorMismatch(f"{fl.literal()} does not have {n} variables")
                flat.append(fl)
                ar.append(n)
        object.__setattr__(self, "factors", tuple(flat))
        object.__setattr__(self, "arities", tuple(ar))

    @property
    def nvars(self):
        return sum(self.arities)

    def literal(self) -> str:
        return "*".join(fl.literal() for fl in self.factors)


def flavor_product(fl1, n1: int, fl2, n2: int):
    """Flavor of A (x) B with A's variables first."""
    if isinstance(fl1, Polynomial) and isinstance(fl2, Polynomial):
        return fl1
    if fl1 == fl2 and n1 == n2 and not isinstance(fl1, Hybrid) and n1 == 1:
        return tensor_square(fl1)
    if n1 == 0:
        return fl2
    if n2 == 0:
        return fl1
    return Hybrid((fl1, fl2), (n1, n2))


AlgebraFlavor = Polynomial | Disc | Tate | Dagger | FormalPS | Stein | Hybrid


def flavor_nvars_ok(fl, nvars: int) -> None:
    n = fl.nvars
    if n is not None and n != nvars:
        raise DescriptorMismatch(f"flavor {fl.literal()} has {n} variables, series has {nvars}")


def broadcast(fl, nvars: int):
    """Repeat a one-variable flavor across nvars variables."""
    if fl.nvars == nvars or fl.nvars is None and not isinstance(fl, FormalPS):
        return fl
    if fl.nvars not in (1, None):
        raise DescriptorMismatch(f"cannot broadcast {fl.literal()} to {nvars} variables")
    if isinstance(fl, Disc):
        return Disc(fl.radii * nvars)
    if isinstance(fl, Tate):
        return Tate(fl.radii * nvars)
    if isinstance(fl, Dagger):
        return Dagger(fl.radii * nvars, fl.rho * nvars)
    if isinstance(fl, Stein):
        return _stein_power(fl, nvars)
    if isinstance(fl, FormalPS):
        if not fl.table:
            return FormalPS((), nvars)
        # product weights psi(J) = prod psi(j_i)
        top = max(J[0] for J, _ in fl.table)
        fn = lambda *J: _prod(fl.psi((j,)) for j in J)  # noqa: E731
        return FormalPS.from_function(fn, nvars, top * nvars)
    return fl


def _prod(xs):
    out = 1
    for x in xs:
        out *= x
    return out


def _stein_power(fl: "Stein", k: int) -> "Stein":
    """k-fold product of a one-variable Stein flavor, weights multiplied."""
    if k > 2:
        raise UnsupportedCase("Stein flavor supports at most 2 variables")
    w = {idx: _prod(fl.psi(n) for n in idx) for idx in product(range(len(fl.sequence)), repeat=k)}
    return Stein(fl.radii * k, tuple(s * k for s in fl.sequence), {i: v for i, v in w.items() if v != 1})


def fine_norm(f: MultiSeries) -> tuple[Fraction, int]:
    """Polynomial flavor: (sum |a_J|, degree)."""
    return sum((f.ring.norm(a) for a in f.coeffs.values()), Fraction(0)), f.degree()


def disc_norm(f: MultiSeries, radii) -> Fraction:
    return sum((f.ring.norm(a) * radius_power(radii, J) for J, a in f.coeffs.items()), Fraction(0))


def flavor_norm(f: MultiSeries, fl) -> Fraction:
    """Exact flavor norm of the truncation f."""
    if isinstance(fl, Hybrid):
        raise UnsupportedCase("hybrid flavors carry no single norm")
    flavor_nvars_ok(fl, f.nvars)
    R = f.ring
    if isinstance(fl, Polynomial):
        return fine_norm(f)[0]
    if isinstance(fl, Disc):
        return disc_norm(f, fl.radii)
    if isinstance(fl, Dagger):
        return disc_norm(f, fl.rho)
    if isinstance(fl, Tate):
        return max((R.norm(a) * radius_power(fl.radii, J) for J, a in f.coeffs.items()), default=Fraction(0))
    if isinstance(fl, FormalPS):
        return max((R.norm(a) / fl.psi(J) for J, a in f.coeffs.items()), default=Fraction(0))
    if isinstance(fl, Stein):
        return max(Fraction(1, fl.psi(n)) * disc_norm(f, fl.radii_at(n)) for n in fl.indices())
    raise UnsupportedCase(f"unknown flavor {fl!r}")


def tensor_square(fl):
    """Flavor of C (x) C in the doubled variable layout."""
    if isinstance(fl, Polynomial):
        return fl
    if isinstance(fl, Disc):
        return Disc(fl.radii * 2)
    if isinstance(fl, Tate):
        return Tate(fl.radii * 2)
    if isinstance(fl, Dagger):
        return Dagger(fl.radii * 2, fl.rho * 2)
    if isinstance(fl, Stein):
        if fl.nvars != 1:
            raise UnsupportedCase("Stein tensor square only from one variable")
        return _stein_power(fl, 2)
    if isinstance(fl, FormalPS):
        n = fl.nvars or 1
        if not fl.table:
            return FormalPS((), 2 * n)
        top = max(sum(J) for J, _ in fl.table)
        fn = lambda *J: fl.psi(J[:n]) * fl.psi(J[n:])  # noqa: E731
        return FormalPS.from_function(fn, 2 * n, 2 * top)
    if isinstance(fl, Hybrid):
        return Hybrid(fl.factors * 2, fl.arities * 2)
    raise UnsupportedCase(f"no tensor square for {fl!r}")


# -- parsing -----------------------------------------------------------------
_TOKEN = re.compile(r"\s*(padic\([^)]*\)|[0-9]+|[A-Za-z][A-Za-z0-9_]*|[-+*/^])")


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            bad = text[pos:].strip().split()[0] if text[pos:].strip() else text[pos:]
            raise ParseError("unexpected token", bad[:1] if bad else bad, pos + (len(text[pos:]) - len(text[pos:].lstrip())))
        out.append((m.group(1), m.start(1)))
        pos = m.end()
    return out


def parse_series(
    text: str,
    ring: BanachRingDescriptor,
    nvars: int,
    order: int,
    names: Iterable[str] | None = None,
) -> MultiSeries:
    """Parse e.g. ``2*x^2 - 1/3*x*y + 5``.

    Variables are ``x1..xk`` and, for at most three variables, ``x, y, z``;
    pass ``names`` to choose other spellings (``("y", "z")`` for the
    diagonal layout).
    """
    lookup = {f"x{i + 1}": i for i in range(nvars)}
    if names is not None:
        lookup.update({nm: i for i, nm in enumerate(names)})
    elif nvars <= 3:
        lookup.update({nm: i for i, nm in enumerate(["x", "y", "z"][:nvars])})
    toks = _tokenize(text)
    if not toks:
        raise ParseError("empty series", text, 0)
    i = 0
    total: dict = {}

    def peek():
        return toks[i] if i < len(toks) else (None, len(text))

    sign = 1
    expect_term = True
    while i < len(toks):
        tok, pos = peek()
        if tok in "+-" and len(tok) == 1:
            sign = -1 if tok == "-" else 1
            i += 1
            if i >= len(toks):
                raise ParseError("dangling sign", tok, pos)
        elif not expect_term:
            raise ParseError("expected + or -", tok, pos)
        coeff = Fraction(sign)
        padic_val = None
        J = [0] * nvars
        while True:
            tok, pos = peek()
            if tok is None:
                raise ParseError("expected a factor", "", pos)
            if tok.isdigit():
                i += 1
                num = Fraction(int(tok))
                if peek()[0] == "/":
                    i += 1
                    den, dpos = peek()
                    if den is None or not den.isdigit() or int(den) == 0:
                        raise ParseError("bad denominator", den or "", dpos)
                    i += 1
                    num /= int(den)
                coeff *= num
            elif tok.startswith("padic("):
                s = parse_scalar(tok)
                if ring.kind != "padic" or s.descriptor.p != ring.p:
                    raise ParseError("p-adic literal in a different ring", tok, pos)
                padic_val = s.value if padic_val is None else padic_val * s.value
                i += 1
            elif tok in lookup:
                i += 1
                e = 1
                if peek()[0] == "^":
                    i += 1
                    et, epos = peek()
                    if et is None or not et.isdigit():
                        raise ParseError("bad exponent", et or "", epos)
                    e = int(et)
                    i += 1
                J[lookup[tok]] += e
            else:
                raise ParseError("unknown symbol", tok, pos)
            if peek()[0] == "*":
                i += 1
                continue
            break
        if sum(J) > order:
            raise TruncationError(f"monomial of degree {sum(J)} exceeds truncation order {order}")
        val = ring.coerce(coeff) if padic_val is None else padic_val * ring.coerce(coeff)
        key = tuple(J)
        total[key] = total[key] + val if key in total else val
        sign = 1
        expect_term = False
        if i < len(toks) and toks[i][0] not in "+-":
            raise ParseError("expected + or -", toks[i][0], toks[i][1])
    return MultiSeries(ring, nvars, order, total)


def _split_top(s: str, sep: str) -> list[str]:
    return [p.strip() for p in s.split(sep)] if s.strip() else []


def _parse_table(body: str, offset: int) -> dict:
    table = {}
    for entry in _split_top(body, ","):
        if "=" not in entry:
            raise ParseError("weight entry needs '='", entry, offset)
        k, v = entry.split("=", 1)
        try:
            J = tuple(int(t) for t in k.strip().split("."))
            table[J] = int(v)
        except ValueError:
            raise ParseError("bad weight entry", entry, offset) from None
    return table


def parse_flavor(text: str):
    """Parse ``poly``, ``disc(..)``, ``tate(..)``, ``dagger(r;rho)``, ``formal(table)``,
    ``stein(r; r1<r2<..; table)``, or the colon shorthand ``tate:1``."""
    t = text.strip()
    if ":" in t and "(" not in t:
        head, *args = t.split(":")
        if head in ("disc", "tate", "dagger", "stein"):
            t = f"{head}({';'.join(args)})"
        elif head in ("poly", "formal") and not any(args):
            t = head
        else:
            raise ParseError("unknown flavor", head, 0)
    m = re.fullmatch(r"([a-z]+)\s*(?:\((.*)\))?", t, re.S)
    if not m:
        raise ParseError("bad flavor literal", t, 0)
    head, body = m.group(1), m.group(2)
    off = len(head) + 1
    try:
        if head == "poly" and body is None:
            return Polynomial()
        if head == "formal":
            table = _parse_table(body or "", off)
            return FormalPS(table)
        if body is None and head in ("disc", "tate", "dagger"):
            body = "1"  # unit radius
        if body is None:
            raise ParseError("missing parameters", head, len(head))
        parts = [p for p in body.split(";")]
        rad = lambda s: tuple(parse_rational(x, off) for x in _split_top(s, ","))  # noqa: E731
        if head == "disc" and len(parts) == 1:
            return Disc(rad(parts[0]))
        if head == "tate" and len(parts) == 1:
            return Tate(rad(parts[0]))
        if head == "dagger" and len(parts) in (1, 2):
            return Dagger(rad(parts[0]), rad(parts[1]) if len(parts) == 2 else ())
        if head == "stein" and len(parts) in (2, 3):
            seq = tuple(rad(s) for s in _split_top(parts[1], "<"))
            r = rad(parts[0])
            seq = tuple(s * len(r) if len(s) == 1 else s for s in seq)
            w = _parse_table(parts[2], off) if len(parts) == 3 else {}
            return Stein(r, seq, w)
    except ValueError as e:
        raise ParseError(str(e), t, 0) from None
    raise ParseError("unknown flavor", head, 0)
