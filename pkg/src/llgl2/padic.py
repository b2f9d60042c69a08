"""Truncated p-adic integers and 2x2 matrix log/exp on 1 + p^2 M_2.

A PadicTrunc is a residue mod p^prec together with the precision it is
known to.  Precision propagates pessimistically: sums keep the minimum,
products use min(prec_a + val_b, prec_b + val_a), and division by p^s
costs s digits.  The valuation floor of an element is the valuation of
its residue, capped at the precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import MathDomainError, NotAMonodromyRep


def _vp(n: int, p: int) -> int:
    if n == 0:
        return -1  # caller must special-case exact zero
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class PadicTrunc:
    p: int
    prec: int
    residue: int

    def __post_init__(self):
        object.__setattr__(self, "residue", self.residue % self.p ** self.prec)

    @classmethod
    def from_int(cls, p: int, prec: int, n: int) -> "PadicTrunc":
        return cls(p, prec, n)

    @classmethod
    def from_rational(cls, p: int, prec: int, x) -> "PadicTrunc":
        x = Fraction(x)
        if x.denominator % p == 0:
            raise MathDomainError("rational has a pole at p")
        mod = p ** prec
        return cls(p, prec, x.numerator * pow(x.denominator, -1, mod))

    def val(self) -> int:
        """Known lower bound for the valuation (capped at prec)."""
        if self.residue == 0:
            return self.prec
        return min(_vp(self.residue, self.p), self.prec)

    def is_unit(self) -> bool:
        return self.residue % self.p != 0

    def _align(self, other: "PadicTrunc"):
        if self.p != other.p:
            raise MathDomainError("mixed primes")
        return min(self.prec, other.prec)

    def __add__(self, other):
        if isinstance(other, int):
            other = PadicTrunc(self.p, self.prec, other)
        prec = self._align(other)
        return PadicTrunc(self.p, prec, self.residue + other.residue)

    __radd__ = __add__

    def __neg__(self):
        return PadicTrunc(self.p, self.prec, -self.residue)

    def __sub__(self, other):
        if isinstance(other, int):
            other = PadicTrunc(self.p, self.prec, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            other = PadicTrunc(self.p, self.prec, other)
        if self.p != other.p:
            raise MathDomainError("mixed primes")
        prec = min(self.prec + other.val(), other.prec + self.val())
        return PadicTrunc(self.p, prec, self.residue * other.residue)

    __rmul__ = __mul__

    def divide_int(self, d: int) -> "PadicTrunc":
        """Division by a nonzero integer, paying p-adic digits for p | d."""
        if d == 0:
            raise ZeroDivisionError("division by zero")
        sign = 1 if d > 0 else -1
        d = abs(d)
        s = _vp(d, self.p)
        u = d // self.p ** s
        if s > self.prec:
            raise MathDomainError("all precision lost in division")
        if self.residue % self.p ** min(s, self.prec) != 0:
            raise MathDomainError("p-adic division with negative valuation")
        prec = self.prec - s
        mod = self.p ** prec
        res = (self.residue // self.p ** s) * pow(u, -1, mod) * sign if prec > 0 else 0
        return PadicTrunc(self.p, max(prec, 0), res)

    def inverse(self) -> "PadicTrunc":
        if not self.is_unit():
            raise MathDomainError("inverse of a non-unit")
        mod = self.p ** self.prec
        return PadicTrunc(self.p, self.prec, pow(self.residue, -1, mod))

    def __eq__(self, other):
        if isinstance(other, int):
            other = PadicTrunc(self.p, self.prec, other)
        if not isinstance(other, PadicTrunc) or self.p != other.p:
            return NotImplemented
        prec = min(self.prec, other.prec)
        return (self.residue - other.residue) % self.p ** prec == 0

    def __hash__(self):
        return hash((self.p, self.residue % self.p))

    def lift_centered(self) -> int:
        """Integer representative in (-p^prec/2, p^prec/2]."""
        m = self.p ** self.prec
        r = self.residue % m
        return r - m if r > m // 2 else r


class PadicMat:
    """2x2 matrix of PadicTrunc sharing one prime."""

    __slots__ = ("p", "e")

    def __init__(self, p: int, entries):
        self.p = p
        self.e = tuple(entries)
        if len(self.e) != 4:
            raise MathDomainError("need 4 entries")

    @classmethod
    def from_ints(cls, p: int, prec: int, a, b, c, d) -> "PadicMat":
        return cls(p, [PadicTrunc(p, prec, x) for x in (a, b, c, d)])

    @classmethod
    def identity(cls, p: int, prec: int) -> "PadicMat":
        return cls.from_ints(p, prec, 1, 0, 0, 1)

    @classmethod
    def zero(cls, p: int, prec: int) -> "PadicMat":
        return cls.from_ints(p, prec, 0, 0, 0, 0)

    def __add__(self, other):
        return PadicMat(self.p, [x + y for x, y in zip(self.e, other.e)])

    def __sub__(self, other):
        return PadicMat(self.p, [x - y for x, y in zip(self.e, other.e)])

    def __neg__(self):
        return PadicMat(self.p, [-x for x in self.e])

    def __mul__(self, other):
        if isinstance(other, (int, PadicTrunc)):
            return PadicMat(self.p, [x * other for x in self.e])
        a, b, c, d = self.e
        e, f, g, h = other.e
        return PadicMat(self.p, [a * e + b * g, a * f + b * h,
                                 c * e + d * g, c * f + d * h])

    __rmul__ = __mul__

    def divide_int(self, d: int) -> "PadicMat":
        return PadicMat(self.p, [x.divide_int(d) for x in self.e])

    def scale_rational(self, x) -> "PadicMat":
        x = Fraction(x)
        out = self * x.numerator
        return out.divide_int(x.denominator)

    def det(self) -> PadicTrunc:
        a, b, c, d = self.e
        return a * d - b * c

    def inverse(self) -> "PadicMat":
        a, b, c, d = self.e
        dt = self.det().inverse()
        return PadicMat(self.p, [d * dt, -b * dt, -c * dt, a * dt])

    def power(self, n: int) -> "PadicMat":
        prec = min(x.prec for x in self.e)
        out = PadicMat.identity(self.p, prec)
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def min_prec(self) -> int:
        return min(x.prec for x in self.e)

    def is_zero(self) -> bool:
        return all(x.residue % x.p ** x.prec == 0 for x in self.e)

    def __eq__(self, other):
        if not isinstance(other, PadicMat):
            return NotImplemented
        return all(x == y for x, y in zip(self.e, other.e))

    __hash__ = None

    def __repr__(self):
        a, b, c, d = self.e
        return f"[[{a.residue},{b.residue}],[{c.residue},{d.residue}]] mod {self.p}^{self.min_prec()}"


DEFAULT_PREC = 10


def _check_one_plus_psq(x: PadicMat) -> PadicMat:
    p = x.p
    prec = x.min_prec()
    b = x - PadicMat.identity(p, prec)
    for ent in b.e:
        if ent.val() < 2:
            raise NotAMonodromyRep("matrix is not congruent to 1 mod p^2")
    return b

def padic_log_matrix(x: PadicMat) -> PadicMat:
    """log on 1 + p^2 M_2(Z_p), by the usual alternating series."""
    b = _check_one_plus_psq(x)
    p = x.p
    prec = x.min_prec()
    out = PadicMat.zero(p, prec + 2)
    term = PadicMat.identity(p, prec + 2)
    for k in range(1, prec + 2):
        term = term * b
        piece = term.divide_int(k if k % 2 == 1 else -k)
        out = out + piece
    return out


def padic_exp_matrix(n: PadicMat) -> PadicMat:
    """exp of a matrix with entries of valuation >= 2; lands in 1 + p^2 M_2."""
    p = n.p
    for ent in n.e:
        if ent.val() < 2:
            raise MathDomainError("exp needs valuation at least 2")
    prec = n.min_prec()
    out = PadicMat.identity(p, prec + 2)
    term = PadicMat.identity(p, prec + 2)
    fact = 1
    for k in range(1, prec + 2):
        term = term * n
        fact *= k
        out = out + term.divide_int(fact)
    return out
