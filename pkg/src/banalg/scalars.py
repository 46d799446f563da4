"""Ground rings with exact norms.

Norm values are always ``Fraction`` objects.  Raw coefficient values are plain
``int``/``Fraction`` for the archimedean and trivially normed kinds, and
:class:`PAdic` for the p-adic kind; all three support ``+ - *`` so series code
can stay generic.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from sympy import isprime

from .errors import DescriptorMismatch, ParseError, PrecisionError

KINDS = ("integer", "rational", "padic", "trivial")
DEFAULT_PADIC_PRECISION = 16


def valuation(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def frac_valuation(x: Fraction, p: int) -> int:
    x = Fraction(x)
    return valuation(x.numerator, p) - (valuation(x.denominator, p) if x.denominator % p == 0 else 0)


class PAdic:
    """Element of Q_p with capped relative precision.

    A nonzero element is ``p**val * unit`` with ``unit`` a p-adic unit known
    modulo ``p**prec``.  A zero either is exact (``absprec is None``) or is
    only known to be ``O(p**absprec)``.
    """

    __slots__ = ("p", "val", "unit", "prec", "absprec")

    def __init__(self, p: int, val, unit: int = 0, prec: int = 0, absprec=None):
        self.p = p
        if val is None:
            self.val = None
            self.unit = 0
            self.prec = 0
            self.absprec = absprec
            return
        if prec < 1:
            raise PrecisionError("relative precision must be at least 1")
        unit %= p**prec
        if unit % p == 0:
            raise ValueError("unit part must be prime to p")
        self.val = val
        self.unit = unit
        self.prec = prec
        self.absprec = val + prec

    @classmethod
    def from_rational(cls, p: int, x, prec: int) -> "PAdic":
        x = Fraction(x)
        if x == 0:
            return cls(p, None, absprec=None)
        v = frac_valuation(x, p)
        u = x / Fraction(p) ** v
        m = p**prec
        unit = u.numerator * pow(u.denominator, -1, m) % m
        return cls(p, v, unit, prec)

    # -- queries ---------------------------------------------------------
    def is_zero(self) -> bool:
        return self.val is None

    def is_exact_zero(self) -> bool:
        return self.val is None and self.absprec is None

    def lift(self) -> Fraction:
        """Rational representative: p^val times the unit residue taken in (-p^prec/2, p^prec/2]."""
        if self.val is None:
            return Fraction(0)
        m = self.p**self.prec
        u = self.unit - m if 2 * self.unit > m else self.unit
        return Fraction(u) * Fraction(self.p) ** self.val

    def norm(self) -> Fraction:
        if self.val is None:
            return Fraction(0)
        return Fraction(1, self.p**self.val) if self.val >= 0 else Fraction(self.p ** (-self.val))

    # -- arithmetic ------------------------------------------------------
    def _coerce(self, other) -> "PAdic":
        if isinstance(other, PAdic):
            if other.p != self.p:
                raise DescriptorMismatch(f"primes {self.p} and {other.p}")
            return other
        if isinstance(other, (int, Fraction)):
            # exact constants inherit the working precision of self
            prec = self.prec if self.val is not None else (self.absprec or DEFAULT_PADIC_PRECISION)
            if other == 0:
                return PAdic(self.p, None)
            out = PAdic.from_rational(self.p, other, max(prec, 1))
            return out
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_exact_zero():
            return other
        if other.is_exact_zero():
            return self
        caps = [a.absprec for a in (self, other) if a.absprec is not None]
        absprec = min(caps)
        total = self.lift() + other.lift()
        if total == 0 or frac_valuation(total, self.p) >= absprec:
            return PAdic(self.p, None, absprec=absprec)
        v = frac_valuation(total, self.p)
        return PAdic.from_rational(self.p, total, absprec - v)

    __radd__ = __add__

    def __neg__(self):
        if self.val is None:
            return PAdic(self.p, None, absprec=self.absprec)
        return PAdic(self.p, self.val, -self.unit, self.prec)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_exact_zero() or other.is_exact_zero():
            return PAdic(self.p, None)
        if self.val is None or other.val is None:
            nz, z = (other, self) if self.val is None else (self, other)
            if nz.val is None:
                return PAdic(self.p, None, absprec=self.absprec + other.absprec)
            return PAdic(self.p, None, absprec=z.absprec + nz.val)
        prec = min(self.prec, other.prec)
        return PAdic(self.p, self.val + other.val, self.unit * other.unit, prec)

    __rmul__ = __mul__

    def inverse(self) -> "PAdic":
        if self.val is None:
            raise ZeroDivisionError("p-adic zero is not invertible")
        m = self.p**self.prec
        return PAdic(self.p, -self.val, pow(self.unit, -1, m), self.prec)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return self.val is None
            other = self._coerce(other)
        if not isinstance(other, PAdic):
            return NotImplemented
        if self.p != other.p:
            return False
        if self.val is None or other.val is None:
            return self.val is None and other.val is None
        prec = min(self.prec, other.prec)
        m = self.p**prec
        return self.val == other.val and (self.unit - other.unit) % m == 0

    def __hash__(self):
        if self.val is None:
            return hash((self.p, None))
        return hash((self.p, self.val))

    def __bool__(self):
        return self.val is not None

    def __repr__(self):
        if self.val is None:
            return "0" if self.absprec is None else f"O({self.p}^{self.absprec})"
        return f"{self.lift()} + O({self.p}^{self.absprec})"

    def to_json(self) -> str:
        return repr(self)


Raw = Union[int, Fraction, PAdic]


@dataclass(frozen=True)
class BanachRingDescriptor:
    kind: str
    p: int | None = None
    precision: int | None = None
    carrier: str = "integer"
    scale: Fraction = Fraction(1)
    submult_constant: Fraction = Fraction(1)
    archimedean: bool = field(init=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown ring kind {self.kind}")
        object.__setattr__(self, "scale", Fraction(self.scale))
        object.__setattr__(self, "submult_constant", Fraction(self.submult_constant))
        object.__setattr__(self, "archimedean", self.kind in ("integer", "rational"))
        if self.scale <= 0:
            raise ValueError("scale must be positive")
        if self.submult_constant != 1:
            raise ValueError("only submultiplicativity constant 1 is shipped")
        if self.kind == "padic":
            if self.p is None or not isprime(self.p):
                raise ValueError(f"p={self.p} is not prime")
            if self.precision is None or self.precision < 1:
                raise ValueError("p-adic precision must be a positive integer")
        if self.kind == "trivial" and self.carrier not in ("integer", "rational"):
            raise ValueError("trivial norm only over integer or rational carriers")

    # -- constructors ------------------------------------------------------
    @classmethod
    def integer(cls) -> "BanachRingDescriptor":
        return cls("integer", carrier="integer")

    @classmethod
    def rational(cls) -> "BanachRingDescriptor":
        return cls("rational", carrier="rational")

    @classmethod
    def padic(cls, p: int, precision: int = DEFAULT_PADIC_PRECISION) -> "BanachRingDescriptor":
        return cls("padic", p=p, precision=precision, carrier="padic")

    @classmethod
    def trivial(cls, carrier: str = "integer") -> "BanachRingDescriptor":
        return cls("trivial", carrier=carrier)

    def rescaled(self, r) -> "BanachRingDescriptor":
        """The ring R_r with norm r|x|."""
        return BanachRingDescriptor(self.kind, self.p, self.precision, self.carrier, self.scale * Fraction(r))

    @property
    def is_field(self) -> bool:
        return self.carrier in ("rational", "padic")

    @property
    def label(self) -> str:
        base = {"integer": "Z", "rational": "Q", "trivial": f"triv({self.carrier})"}.get(self.kind)
        if self.kind == "padic":
            base = f"Q_{self.p}(prec {self.precision})"
        return base if self.scale == 1 else f"{base}_{self.scale}"

    # -- raw value plumbing ------------------------------------------------
    def coerce(self, x) -> Raw:
        if isinstance(x, Scalar):
            self.check(x.descriptor)
            return x.value
        if self.carrier == "padic":
            if isinstance(x, PAdic):
                if x.p != self.p:
                    raise DescriptorMismatch(f"prime {x.p} in a {self.p}-adic ring")
                return x
            return PAdic.from_rational(self.p, x, self.precision) if x != 0 else PAdic(self.p, None)
        if isinstance(x, PAdic):
            raise DescriptorMismatch("p-adic value in a non p-adic ring")
        if self.carrier == "integer":
            x = Fraction(x)
            if x.denominator != 1:
                raise DescriptorMismatch(f"{x} is not an integer")
            return int(x)
        x = Fraction(x)
        return x.numerator if x.denominator == 1 else x

    def zero(self) -> Raw:
        return PAdic(self.p, None) if self.carrier == "padic" else 0

    def one(self) -> Raw:
        return self.coerce(1)

    def base_norm(self, x: Raw) -> Fraction:
        if self.kind == "padic":
            return x.norm()
        if x == 0:
            return Fraction(0)
        if self.kind == "trivial":
            return Fraction(1)
        return abs(Fraction(x))

    def norm(self, x: Raw) -> Fraction:
        n = self.base_norm(x)
        return n if self.scale == 1 else self.scale * n

    def check(self, other: "BanachRingDescriptor") -> None:
        if self != other:
            raise DescriptorMismatch(f"{self.label} vs {other.label}")

    def to_rational(self, x: Raw) -> Fraction:
        return x.lift() if isinstance(x, PAdic) else Fraction(x)


@dataclass(frozen=True)
class Scalar:
    descriptor: BanachRingDescriptor
    value: Raw

    def __post_init__(self):
        object.__setattr__(self, "value", self.descriptor.coerce(self.value))

    def _other(self, other) -> Raw:
        if isinstance(other, Scalar):
            self.descriptor.check(other.descriptor)
            return other.value
        return self.descriptor.coerce(other)

    def __add__(self, other):
        return Scalar(self.descriptor, self.value + self._other(other))

    def __sub__(self, other):
        return Scalar(self.descriptor, self.value - self._other(other))

    def __mul__(self, other):
        return Scalar(self.descriptor, self.value * self._other(other))

    def __neg__(self):
        return Scalar(self.descriptor, -self.value)

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.descriptor == other.descriptor and self.value == other.value
        return self.value == other

    def __hash__(self):
        return hash((self.descriptor, self.value))

    def norm(self) -> Fraction:
        return self.descriptor.norm(self.value)


def norm(s: Scalar) -> Fraction:
    return s.norm()


def add(a: Scalar, b: Scalar) -> Scalar:
    return a + b


def mul(a: Scalar, b: Scalar) -> Scalar:
    return a * b


_INT = re.compile(r"-?[0-9]+")
_RAT = re.compile(r"(-?[0-9]+)/([0-9]+)")
_PAD = re.compile(r"padic\(\s*([0-9]+)\s*,\s*(-?[0-9]+(?:/[0-9]+)?)\s*(?:,\s*([0-9]+)\s*)?\)")


def parse_rational(text: str, offset: int = 0) -> Fraction:
    t = text.strip()
    if _INT.fullmatch(t):
        return Fraction(int(t))
    m = _RAT.fullmatch(t)
    if m:
        if int(m.group(2)) == 0:
            raise ParseError("zero denominator", t, offset)
        return Fraction(int(m.group(1)), int(m.group(2)))
    raise ParseError("bad rational literal", t, offset)


def parse_scalar(text: str, descriptor: BanachRingDescriptor | None = None) -> Scalar:
    """Parse ``-?[0-9]+``, ``a/b`` or ``padic(p, value, prec)``."""
    t = text.strip()
    m = _PAD.fullmatch(t)
    if m:
        p = int(m.group(1))
        prec = int(m.group(3)) if m.group(3) else DEFAULT_PADIC_PRECISION
        try:
            d = BanachRingDescriptor.padic(p, prec)
        except ValueError:
            raise ParseError("bad p-adic parameters", t, 0) from None
        if descriptor is not None:
            descriptor.check(d)
        return Scalar(d, parse_rational(m.group(2)))
    if t.startswith("padic"):
        raise ParseError("bad p-adic literal", t, 0)
    x = parse_rational(t)
    if descriptor is None:
        descriptor = BanachRingDescriptor.integer() if x.denominator == 1 else BanachRingDescriptor.rational()
    return Scalar(descriptor, x)
