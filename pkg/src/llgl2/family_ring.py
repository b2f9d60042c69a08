"""One-variable function field over the cyclotomic scalars.

FamilyPoly is a dense polynomial in T with CycScalar coefficients.
FamilyScalar is a quotient num/den of two such polynomials, kept in a
normal form with monic denominator and no common factor.  Evaluation at
a point is Horner's rule; evaluating where the denominator vanishes
raises PoleAtPoint.  These are the scalars that one-parameter families
of local data take their traces in.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import MathDomainError, PoleAtPoint
from .scalars import CycScalar

_ZERO = CycScalar.zero()
_ONE = CycScalar.one()


def _cs(x) -> CycScalar:
    return CycScalar.coerce(x)


class FamilyPoly:
    """Polynomial in T over CycScalar, coefficients in ascending order."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = [(_cs(c)) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def const(cls, x) -> "FamilyPoly":
        return cls([_cs(x)])

    @classmethod
    def gen(cls) -> "FamilyPoly":
        return cls([_ZERO, _ONE])

    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> CycScalar:
        if self.is_zero():
            raise MathDomainError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __add__(self, other):
        other = _poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [_ZERO] * (n - len(self.coeffs))
        b = list(other.coeffs) + [_ZERO] * (n - len(other.coeffs))
        return FamilyPoly([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return FamilyPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-_poly(other))

    def __rsub__(self, other):
        return _poly(other) + (-self)

    def __mul__(self, other):
        other = _poly(other)
        if self.is_zero() or other.is_zero():
            return FamilyPoly([])
        out = [_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return FamilyPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise MathDomainError("negative power of a polynomial")
        out = FamilyPoly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def divmod(self, other: "FamilyPoly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dlead = other.leading()
        dd = other.degree()
        quo = [_ZERO] * max(len(rem) - dd, 0)
        while len(rem) - 1 >= dd and rem:
            c = rem[-1] / dlead
            k = len(rem) - 1 - dd
            quo[k] = c
            for i, oc in enumerate(other.coeffs):
                rem[k + i] = rem[k + i] - c * oc
            while rem and rem[-1].is_zero():
                rem.pop()
        return FamilyPoly(quo), FamilyPoly(rem)

    def monic(self) -> "FamilyPoly":
        if self.is_zero():
            return self
        lead = self.leading()
        return FamilyPoly([c / lead for c in self.coeffs])

    def gcd(self, other: "FamilyPoly") -> "FamilyPoly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        return a.monic()

    def eval(self, t0) -> CycScalar:
        t0 = _cs(t0)
        acc = _ZERO
        for c in reversed(self.coeffs):
            acc = acc * t0 + c
        return acc

    def derivative(self) -> "FamilyPoly":
        return FamilyPoly([c * i for i, c in enumerate(self.coeffs) if i > 0])

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, CycScalar)):
            other = FamilyPoly.const(other)
        if not isinstance(other, FamilyPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if self.is_zero():
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            if i == 0:
                parts.append(repr(c))
            elif i == 1:
                parts.append(f"({c!r})*T")
            else:
                parts.append(f"({c!r})*T^{i}")
        return " + ".join(parts)


def _poly(x) -> FamilyPoly:
    if isinstance(x, FamilyPoly):
        return x
    if isinstance(x, (int, Fraction, CycScalar)):
        return FamilyPoly.const(x)
    raise MathDomainError(f"cannot coerce {type(x).__name__} to a polynomial")


class FamilyScalar:
    """Rational function num/den with monic denominator in lowest terms."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = _poly(num)
        den = FamilyPoly.const(1) if den is None else _poly(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num, self.den = FamilyPoly([]), FamilyPoly.const(1)
            return
        g = num.gcd(den)
        if g.degree() > 0:
            num = num.divmod(g)[0]
            den = den.divmod(g)[0]
        lead = den.leading()
        self.num = FamilyPoly([c / lead for c in num.coeffs])
        self.den = den.monic()

    @classmethod
    def const(cls, x) -> "FamilyScalar":
        return cls(FamilyPoly.const(x))

    @classmethod
    def gen(cls) -> "FamilyScalar":
        return cls(FamilyPoly.gen())

    coerce_const = const

    @staticmethod
    def coerce(x) -> "FamilyScalar":
        if isinstance(x, FamilyScalar):
            return x
        if isinstance(x, FamilyPoly):
            return FamilyScalar(x)
        return FamilyScalar.const(x)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.degree() == 0

    def as_poly(self) -> FamilyPoly:
        if not self.is_polynomial():
            raise MathDomainError("rational function with nontrivial denominator")
        return self.num

    def __add__(self, other):
        try:
            other = FamilyScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return FamilyScalar(self.num * other.den + other.num * self.den,
                            self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return FamilyScalar(-self.num, self.den)

    def __sub__(self, other):
        try:
            other = FamilyScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return FamilyScalar.coerce(other) + (-self)

    def __mul__(self, other):
        try:
            other = FamilyScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return FamilyScalar(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "FamilyScalar":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return FamilyScalar(self.den, self.num)

    def __truediv__(self, other):
        return self * FamilyScalar.coerce(other).inverse()

    def __rtruediv__(self, other):
        return FamilyScalar.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return FamilyScalar(self.num ** n, self.den ** n)

    def eval(self, t0) -> CycScalar:
        """Value at T = t0; PoleAtPoint where the denominator vanishes."""
        d = self.den.eval(t0)
        if d.is_zero():
            raise PoleAtPoint(f"pole at T = {t0}")
        return self.num.eval(t0) / d

    def __eq__(self, other):
        try:
            other = FamilyScalar.coerce(other)
        except MathDomainError:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        if self.is_polynomial():
            return repr(self.num)
        return f"({self.num!r})/({self.den!r})"
