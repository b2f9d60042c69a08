"""Exact scalars: rationals, cyclotomic numbers with a formal square root,
Bernoulli numbers, and a generic quadratic extension.

The workhorse is CycScalar, an element of Q(zeta_M)(sqrt(l)) written as
a + b*sqrt(l) with a, b in Q(zeta_M).  Coordinates are kept on the power
basis 1, zeta, ..., zeta^(phi(M)-1) and reduced modulo the M-th cyclotomic
polynomial, so equality is equality of reduced coordinate vectors.  The
declared conductor M is authoritative; binary operations promote both sides
to the lcm of their conductors and never shrink it silently.

sqrt(l) is formal: it is not identified with any cyclotomic expression,
and the Galois conjugations implemented here fix it (positive-root
convention).  For conductors where sqrt(l) happens to lie in Q(zeta_M)
the tower is a ring with zero divisors; inversion raises on them.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Union

from .errors import MathDomainError

Coeffs = tuple[Fraction, ...]

_FR0 = Fraction(0)
_FR1 = Fraction(1)


def _strip(coeffs):
    n = len(coeffs)
    while n > 0 and coeffs[n - 1] == 0:
        n -= 1
    return tuple(coeffs[:n])


def poly_mul(a: Coeffs, b: Coeffs) -> Coeffs:
    if not a or not b:
        return ()
    out = [_FR0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y != 0:
                out[i + j] += x * y
    return _strip(out)


def poly_add(a: Coeffs, b: Coeffs) -> Coeffs:
    n = max(len(a), len(b))
    out = [_FR0] * n
    for i, x in enumerate(a):
        out[i] += x
    for i, y in enumerate(b):
        out[i] += y
    return _strip(out)


def poly_neg(a: Coeffs) -> Coeffs:
    return tuple(-x for x in a)


def poly_divmod(a: Coeffs, b: Coeffs) -> tuple[Coeffs, Coeffs]:
    """Quotient and remainder of dense Fraction polynomials, b != 0."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    q = [_FR0] * max(0, len(a) - len(b) + 1)
    lead = b[-1]
    while len(a) >= len(b) and _strip(a):
        a = list(_strip(a))
        if len(a) < len(b):
            break
        c = a[-1] / lead
        d = len(a) - len(b)
        q[d] = c
        for i, y in enumerate(b):
            a[d + i] -= c * y
        a.pop()
    return _strip(q), _strip(a)


@lru_cache(maxsize=None)
def euler_phi(m: int) -> int:
    out = 1
    n = m
    d = 2
    while d * d <= n:
        if n % d == 0:
            k = 0
            while n % d == 0:
                n //= d
                k += 1
            out *= (d - 1) * d ** (k - 1)
        d += 1
    if n > 1:
        out *= n - 1
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> Coeffs:
    """Monic M-th cyclotomic polynomial, ascending coefficients."""
    if m == 1:
        return (_FR1 * -1, _FR1)
    num = tuple([_FR1 * -1] + [_FR0] * (m - 1) + [_FR1])  # x^m - 1
    for d in range(1, m):
        if m % d == 0:
            num, rem = poly_divmod(num, cyclotomic_poly(d))
            assert rem == ()
    return num


@lru_cache(maxsize=None)
def _zeta_power(m: int, e: int) -> Coeffs:
    """zeta_M^e reduced mod Phi_M, as a coordinate vector of length phi(M)."""
    e %= m
    phi = euler_phi(m)
    if e < phi:
        out = [_FR0] * phi
        out[e] = _FR1
        return tuple(out)
    mono = tuple([_FR0] * e + [_FR1])
    _, rem = poly_divmod(mono, cyclotomic_poly(m))
    out = list(rem) + [_FR0] * (phi - len(rem))
    return tuple(out[:phi])


def _reduce_mod_phi(coeffs: Coeffs, m: int) -> Coeffs:
    phi = euler_phi(m)
    if len(coeffs) <= phi:
        return tuple(coeffs) + ( _FR0,) * (phi - len(coeffs))
    _, rem = poly_divmod(coeffs, cyclotomic_poly(m))
    out = list(rem) + [_FR0] * (phi - len(rem))
    return tuple(out[:phi])


def _embed(coeffs: Coeffs, m_old: int, m_new: int) -> Coeffs:
    """Rewrite coordinates from conductor m_old to m_new (m_old | m_new)."""
    if m_old == m_new:
        return coeffs
    assert m_new % m_old == 0
    step = m_new // m_old
    phi = euler_phi(m_new)
    out = [_FR0] * phi
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        for j, z in enumerate(_zeta_power(m_new, i * step)):
            out[j] += c * z
    return tuple(out)


def _cyclo_inv(coeffs: Coeffs, m: int) -> Coeffs:
    """Inverse in Q(zeta_M) by extended Euclid against Phi_M."""
    a = _strip(coeffs)
    if not a:
        raise ZeroDivisionError("inverse of zero")
    # invariants: s*a + t*Phi = r
    r0, r1 = cyclotomic_poly(m), a
    s0, s1 = (), (_FR1,)
    while True:
        q, r = poly_divmod(r0, r1)
        if not r:
            break
        s = poly_add(s0, poly_neg(poly_mul(q, s1)))
        r0, r1, s0, s1 = r1, r, s1, s
    if len(r1) != 1:
        raise ZeroDivisionError("not invertible modulo the cyclotomic polynomial")
    inv_lead = 1 / r1[0]
    return _reduce_mod_phi(tuple(x * inv_lead for x in s1), m)


Rationalish = Union[int, Fraction]


class CycScalar:
    """a + b*sqrt(l) with a, b in Q(zeta_M), exact arithmetic."""

    __slots__ = ("conductor", "re", "im", "sqrt_prime")

    def __init__(self, conductor: int, re: Coeffs, im: Coeffs = (), sqrt_prime=None):
        phi = euler_phi(conductor)
        self.conductor = conductor
        self.re = _reduce_mod_phi(tuple(Fraction(x) for x in re), conductor)
        im = _reduce_mod_phi(tuple(Fraction(x) for x in im), conductor) if im else (_FR0,) * phi
        self.im = im
        if all(x == 0 for x in im):
            sqrt_prime = None
        elif sqrt_prime is None:
            raise MathDomainError("nonzero sqrt part needs its prime")
        self.sqrt_prime = sqrt_prime

    # -- constructors -------------------------------------------------

    @classmethod
    def from_rational(cls, x: Rationalish) -> "CycScalar":
        return cls(1, (Fraction(x),))

    @classmethod
    def zero(cls) -> "CycScalar":
        return cls.from_rational(0)

    @classmethod
    def one(cls) -> "CycScalar":
        return cls.from_rational(1)

    @classmethod
    def root_of_unity(cls, order: int, power: int = 1) -> "CycScalar":
        """zeta_order^power."""
        if order <= 0:
            raise MathDomainError("root of unity order must be positive")
        g = gcd(power % order, order) if power % order else order
        o = order // g
        return cls(o, _zeta_power(o, (power % order) // g))

    @classmethod
    def sqrt_of(cls, l: int) -> "CycScalar":
        return cls(1, (_FR0,), (_FR1,), sqrt_prime=l)

    # -- coercion helpers ---------------------------------------------

    @staticmethod
    def coerce(x) -> "CycScalar":
        if isinstance(x, CycScalar):
            return x
        if isinstance(x, (int, Fraction)):
            return CycScalar.from_rational(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to CycScalar")

    def _common(self, other: "CycScalar"):
        m = self.conductor * other.conductor // gcd(self.conductor, other.conductor)
        sp = self.sqrt_prime
        if other.sqrt_prime is not None:
            if sp is not None and sp != other.sqrt_prime:
                raise MathDomainError("mixed sqrt primes in one expression")
            sp = other.sqrt_prime
        a = (_embed(self.re, self.conductor, m), _embed(self.im, self.conductor, m))
        b = (_embed(other.re, other.conductor, m), _embed(other.im, other.conductor, m))
        return m, sp, a, b

    # -- ring structure -----------------------------------------------

    def __add__(self, other):
        try:
            other = CycScalar.coerce(other)
        except TypeError:
            return NotImplemented
        m, sp, (a1, b1), (a2, b2) = self._common(other)
        return CycScalar(m, poly_add(a1, a2), poly_add(b1, b2), sqrt_prime=sp)

    __radd__ = __add__

    def __neg__(self):
        return CycScalar(self.conductor, poly_neg(self.re), poly_neg(self.im),
                         sqrt_prime=self.sqrt_prime)

    def __sub__(self, other):
        try:
            other = CycScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return CycScalar.coerce(other) - self

    def __mul__(self, other):
        try:
            other = CycScalar.coerce(other)
        except TypeError:
            return NotImplemented
        m, sp, (a1, b1), (a2, b2) = self._common(other)
        re = poly_mul(a1, a2)
        im = ()
        if sp is not None:
            cross = poly_mul(b1, b2)
            if cross:
                re = poly_add(re, tuple(sp * x for x in cross))
            im = poly_add(poly_mul(a1, b2), poly_mul(b1, a2))
        return CycScalar(m, _reduce_mod_phi(re, m), _reduce_mod_phi(im, m) if im else (),
                         sqrt_prime=sp)

    __rmul__ = __mul__

    def inverse(self) -> "CycScalar":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        m = self.conductor
        if all(x == 0 for x in self.im):
            return CycScalar(m, _cyclo_inv(self.re, m))
        sp = self.sqrt_prime
        # (a + b s)^-1 = (a - b s) / (a^2 - l b^2), when the norm is nonzero
        norm = poly_add(poly_mul(self.re, self.re),
                        tuple(-sp * x for x in poly_mul(self.im, self.im)))
        norm = _reduce_mod_phi(norm, m)
        if all(x == 0 for x in norm):
            raise ZeroDivisionError("zero divisor in the sqrt tower is not invertible")
        ninv = _cyclo_inv(norm, m)
        return CycScalar(m, _reduce_mod_phi(poly_mul(self.re, ninv), m),
                         _reduce_mod_phi(poly_mul(poly_neg(self.im), ninv), m),
                         sqrt_prime=sp)

    def __truediv__(self, other):
        try:
            other = CycScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return CycScalar.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n == 0:
            return CycScalar.one()
        base = self if n > 0 else self.inverse()
        n = abs(n)
        out = CycScalar.one()
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- predicates and views -----------------------------------------

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.re) and all(x == 0 for x in self.im)

    def is_rational(self) -> bool:
        return all(x == 0 for x in self.re[1:]) and all(x == 0 for x in self.im)

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise MathDomainError("scalar is not rational")
        return self.re[0] if self.re else _FR0

    def galois_conjugate(self, t: int) -> "CycScalar":
        """Apply zeta_M -> zeta_M^t; requires gcd(t, M) = 1.  Fixes sqrt(l)."""
        m = self.conductor
        if gcd(t, m) != 1:
            raise MathDomainError("conjugation exponent not coprime to the conductor")

        def apply(coeffs):
            phi = euler_phi(m)
            out = [_FR0] * phi
            for i, c in enumerate(coeffs):
                if c == 0:
                    continue
                for j, z in enumerate(_zeta_power(m, (i * t) % m)):
                    out[j] += c * z
            return tuple(out)

        return CycScalar(m, apply(self.re), apply(self.im), sqrt_prime=self.sqrt_prime)

    def __eq__(self, other):
        try:
            other = CycScalar.coerce(other)
        except TypeError:
            return NotImplemented
        m, sp, (a1, b1), (a2, b2) = self._common(other)
        return a1 == a2 and b1 == b2

    def __hash__(self):
        if self.is_rational():
            return hash(self.as_fraction())
        return hash((self.conductor, self.re, self.im))

    def __repr__(self):
        def side(coeffs, label):
            parts = []
            for i, c in enumerate(coeffs):
                if c == 0:
                    continue
                if i == 0:
                    parts.append(f"{c}")
                elif i == 1:
                    parts.append(f"{c}*z{self.conductor}")
                else:
                    parts.append(f"{c}*z{self.conductor}^{i}")
            body = " + ".join(parts) if parts else "0"
            return f"({body}){label}" if label else body

        if all(x == 0 for x in self.im):
            return side(self.re, "")
        return side(self.re, "") + " + " + side(self.im, f"*sqrt({self.sqrt_prime})")


def zeta_from_angle(t: Fraction) -> CycScalar:
    """e^(2*pi*i*t) for rational t, as an exact root of unity."""
    t = Fraction(t)
    frac = t - t.numerator // t.denominator  # reduce mod 1
    if frac == 0:
        return CycScalar.one()
    return CycScalar.root_of_unity(frac.denominator, frac.numerator % frac.denominator)


def scalar_sqrt(x, sqrt_prime: int | None = None):
    """Square root of a rational scalar inside the tower, or None.

    Handles r = s^2 and r = s^2 * l (the latter using the formal sqrt(l)).
    """
    x = CycScalar.coerce(x)
    if not x.is_rational():
        return None
    r = x.as_fraction()
    if r == 0:
        return CycScalar.zero()
    if r < 0:
        return None
    num, den = r.numerator, r.denominator
    rn = _int_sqrt_split(num)
    rd = _int_sqrt_split(den)
    s = Fraction(rn[0], rd[0])
    rest = Fraction(rn[1], rd[1])
    if rest == 1:
        return CycScalar.from_rational(s)
    if sqrt_prime is not None:
        if rest == sqrt_prime:
            return CycScalar.sqrt_of(sqrt_prime) * s
        if rest == Fraction(1, sqrt_prime):
            return CycScalar.sqrt_of(sqrt_prime) * (s / sqrt_prime)
    return None


def _int_sqrt_split(n: int) -> tuple[int, int]:
    """n = s^2 * m with m squarefree; returns (s, m)."""
    s, m = 1, 1
    d = 2
    while d * d <= n:
        k = 0
        while n % d == 0:
            n //= d
            k += 1
        s *= d ** (k // 2)
        if k % 2:
            m *= d
        d += 1
    m *= n
    return s, m


def bernoulli(k: int) -> Fraction:
    """Bernoulli number B_k for even k >= 2, by the Akiyama-Tanigawa scheme."""
    if k < 2 or k % 2 != 0:
        raise MathDomainError("bernoulli is defined here for even k >= 2")
    row = [Fraction(0)] * (k + 1)
    for m in range(k + 1):
        row[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            row[j - 1] = j * (row[j - 1] - row[j])
    return row[0]


def zeta_negodd(k: int) -> Fraction:
    """zeta(1 - k) = -B_k / k for even k >= 2."""
    return -bernoulli(k) / k


class QuadExt:
    """a + b*theta over a base ring, with theta^2 = s*theta - pr.

    Used for an unramified character pair stored by symmetric functions:
    theta plays one Frobenius eigenvalue, s - theta the other.  The base
    ring only needs +, -, *, / and equality (CycScalar or FamilyScalar).
    """

    __slots__ = ("a", "b", "s", "pr")

    def __init__(self, a, b, s, pr):
        self.a = a
        self.b = b
        self.s = s
        self.pr = pr

    @classmethod
    def theta(cls, s, pr):
        one = s - s + _coerce_like(s, 1)
        return cls(s - s, one, s, pr)

    @classmethod
    def lift(cls, x, s, pr):
        return cls(x, s - s, s, pr)

    def _check(self, other):
        if not (self.s == other.s and self.pr == other.pr):
            raise MathDomainError("mixed quadratic extensions")

    def _wrap(self, x):
        if isinstance(x, QuadExt):
            self._check(x)
            return x
        return QuadExt.lift(_coerce_like(self.s, x), self.s, self.pr)

    def __add__(self, other):
        other = self._wrap(other)
        return QuadExt(self.a + other.a, self.b + other.b, self.s, self.pr)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.s, self.pr)

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) - self

    def __mul__(self, other):
        other = self._wrap(other)
        # (a1 + b1 t)(a2 + b2 t), t^2 = s t - pr
        cross = self.b * other.b
        a = self.a * other.a - cross * self.pr
        b = self.a * other.b + self.b * other.a + cross * self.s
        return QuadExt(a, b, self.s, self.pr)

    __rmul__ = __mul__

    def conj(self):
        return QuadExt(self.a + self.b * self.s, -self.b, self.s, self.pr)

    def norm(self):
        return self.a * self.a + self.a * self.b * self.s + self.b * self.b * self.pr

    def inverse(self):
        n = self.norm()
        c = self.conj()
        return QuadExt(c.a / n, c.b / n, self.s, self.pr)

    def __truediv__(self, other):
        return self * self._wrap(other).inverse()

    def __rtruediv__(self, other):
        return self._wrap(other) * self.inverse()

    def __pow__(self, n: int):
        out = QuadExt.lift(_coerce_like(self.s, 1), self.s, self.pr)
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        try:
            other = self._wrap(other)
        except (TypeError, MathDomainError):
            return NotImplemented
        return self.a == other.a and self.b == other.b

    __hash__ = None

    def in_base(self):
        """The base-ring value, provided the theta component vanishes."""
        zero = self.s - self.s
        if not (self.b == zero):
            raise MathDomainError("value does not descend to the base ring")
        return self.a

    def __repr__(self):
        return f"({self.a!r}) + ({self.b!r})*theta"


def _coerce_like(model, x):
    """Coerce int/Fraction x into the ring that `model` lives in."""
    if isinstance(x, (int, Fraction)):
        if isinstance(model, CycScalar):
            return CycScalar.coerce(x)
        return model.coerce_const(x) if hasattr(model, "coerce_const") else x
    return x
