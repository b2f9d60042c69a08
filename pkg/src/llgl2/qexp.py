"""Formal q-expansions with cyclotomic coefficients and the cusp action.

A QExpansion is a finite map {exponent -> CycScalar} with nonnegative
rational exponents below a truncation order.  Exponent lattices are
(1/N)Z with N in practice a power of the working prime l, and roots of
unity e^{2pi i t} are exact cyclotomic elements, never floats.

The action of an upper-triangularizable g on expansions at the cusp
labelled by a unit A is driven by reduce_to_standard_upper applied to
diag(A,1)*g; the weight-k scalar is l^(-(m+n)+nk) and the substitution
is q -> e(-a/l^(m+r)) * q^(l^(n-m)).

Eisenstein series come in two normalizations: the classical level-1
series (integer coefficients, used as an oracle target) and the
p-deprived series with divisor sums restricted to divisors prime to p,
both with constant term 1.  Weights are kept in the regime
k = 0 mod (p-1), where the auxiliary character bookkeeping is trivial;
k = 0 means the constant series 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import CheckFailed, InvalidInput, LevelTooSmall, UnsupportedWeight
from .gl2 import MatQ, reduce_to_standard_upper, val_l
from .scalars import CycScalar, bernoulli, zeta_from_angle

Rat = Fraction


def _sc(x) -> CycScalar:
    return CycScalar.coerce(x)


class QExpansion:
    """Truncated series sum c_e q^e, exponents rational and >= 0."""

    __slots__ = ("coeffs", "prec")

    def __init__(self, coeffs, prec):
        prec = Fraction(prec)
        if prec <= 0:
            raise InvalidInput("truncation order must be positive")
        store = {}
        for e, c in coeffs.items():
            e = Fraction(e)
            if e < 0:
                raise InvalidInput(f"negative exponent {e}")
            if e >= prec:
                continue
            c = _sc(c)
            if not c.is_zero():
                store[e] = c
        self.coeffs = store
        self.prec = prec

    # -- constructors

    @classmethod
    def zero(cls, prec) -> "QExpansion":
        return cls({}, prec)

    @classmethod
    def const(cls, c, prec) -> "QExpansion":
        return cls({Fraction(0): _sc(c)}, prec)

    @classmethod
    def one(cls, prec) -> "QExpansion":
        return cls.const(1, prec)

    # -- inspection

    def coeff(self, e) -> CycScalar:
        e = Fraction(e)
        if e >= self.prec:
            raise InvalidInput(f"coefficient of q^{e} is beyond precision {self.prec}")
        return self.coeffs.get(e, CycScalar.zero())

    def terms(self):
        return sorted(self.coeffs.items())

    def lattice_den(self) -> int:
        out = 1
        for e in self.coeffs:
            out = out * e.denominator // math.gcd(out, e.denominator)
        return out

    def valuation(self) -> Fraction:
        if not self.coeffs:
            return self.prec
        return min(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def truncate(self, prec) -> "QExpansion":
        prec = Fraction(prec)
        if prec > self.prec:
            raise InvalidInput("cannot extend precision by truncation")
        return QExpansion(self.coeffs, prec)

    def agrees_with(self, other, upto=None) -> bool:
        p = min(self.prec, other.prec)
        if upto is not None:
            p = min(p, Fraction(upto))
        keys = {e for e in self.coeffs if e < p} | {e for e in other.coeffs if e < p}
        return all(self.coeff(e) == other.coeff(e) for e in keys)

    # -- ring operations

    def __add__(self, other):
        p = min(self.prec, other.prec)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out[e] + c if e in out else c
        return QExpansion(out, p)

    def __sub__(self, other):
        return self + other.scale(-1)

    def __mul__(self, other):
        pf = self.prec + other.valuation()
        pg = other.prec + self.valuation()
        p = min(pf, pg)
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                if e >= p:
                    continue
                t = c1 * c2
                out[e] = out[e] + t if e in out else t
        return QExpansion(out, p)

    def scale(self, c) -> "QExpansion":
        c = _sc(c)
        return QExpansion({e: v * c for e, v in self.coeffs.items()}, self.prec)

    def divide(self, other) -> "QExpansion":
        """Series division; the divisor needs a unit constant term."""
        c0 = other.coeffs.get(Fraction(0))
        if c0 is None:
            raise InvalidInput("division requires a unit constant term")
        c0inv = c0.inverse()
        p = min(self.prec, other.prec)
        nf = self.lattice_den()
        ng = other.lattice_den()
        n = nf * ng // math.gcd(nf, ng)
        num = {int(e * n): c for e, c in self.coeffs.items()}
        gterms = sorted((int(e * n), c) for e, c in other.coeffs.items() if e > 0)
        out = {}
        for m in range(math.ceil(p * n)):
            acc = num.get(m)
            for j, c in gterms:
                if j > m:
                    break
                bj = out.get(m - j)
                if bj is None:
                    continue
                t = c * bj
                acc = -t if acc is None else acc - t
            if acc is None:
                continue
            val = c0inv * acc
            if not val.is_zero():
                out[m] = val
        return QExpansion({Fraction(m, n): c for m, c in out.items()}, p)

    # -- substitutions

    def subst(self, t, s) -> "QExpansion":
        """q -> e^{2pi i t} q^s, exactly; s must be positive rational."""
        t = Fraction(t)
        s = Fraction(s)
        if s <= 0:
            raise InvalidInput("substitution exponent must be positive")
        out = {}
        for e, c in self.coeffs.items():
            root = zeta_from_angle(t * e)
            out[s * e] = c * root
        return QExpansion(out, s * self.prec)

    def vp_twist(self, p: int) -> "QExpansion":
        """Frobenius-at-p substitution: exponents times p, zeta -> zeta^p."""
        out = {p * e: c.galois_conjugate(p) for e, c in self.coeffs.items()}
        return QExpansion(out, p * self.prec)

    def __eq__(self, other):
        if not isinstance(other, QExpansion):
            return NotImplemented
        return self.prec == other.prec and self.coeffs == other.coeffs

    __hash__ = None

    def __repr__(self):
        ts = self.terms()
        head = " + ".join(f"({c})q^{e}" for e, c in ts[:4])
        tail = " + ..." if len(ts) > 4 else ""
        return f"<qexp {head}{tail} + O(q^{self.prec})>"


# ---------------------------------------------------------------------------
# Eisenstein series and friends


def _check_weight(k: int, p: int):
    if k == 0:
        return
    if k < 4 or k % 2 != 0 or k % (p - 1) != 0:
        raise UnsupportedWeight(
            f"weight {k} outside the supported regime (even, >= 4, divisible by {p - 1})")


def eisenstein_pdeprived(k: int, p: int, prec) -> QExpansion:
    """1 + (2/(zeta(1-k)(1-p^(k-1)))) sum sigma_(k-1)^(p)(n) q^n.

    The divisor sum ranges over divisors prime to p; k = 0 gives the
    constant series 1.
    """
    _check_weight(k, p)
    prec = Fraction(prec)
    if k == 0:
        return QExpansion.one(prec)
    zeta_val = -bernoulli(k) / k
    c = Fraction(2) / (zeta_val * (1 - Fraction(p) ** (k - 1)))
    coeffs = {Fraction(0): _sc(1)}
    top = int(math.ceil(prec))
    for m in range(1, top + 1):
        if m >= prec:
            break
        s = sum(d ** (k - 1) for d in range(1, m + 1) if m % d == 0 and d % p != 0)
        coeffs[Fraction(m)] = _sc(c * s)
    return QExpansion(coeffs, prec)


def eisenstein_classical(k: int, prec) -> QExpansion:
    """Level-1 series 1 - (2k/B_k) sum sigma_(k-1)(n) q^n; E_4 = 1 + 240q + ..."""
    if k < 4 or k % 2 != 0:
        raise UnsupportedWeight(f"classical Eisenstein series needs even weight >= 4, got {k}")
    prec = Fraction(prec)
    c = -Fraction(2 * k) / bernoulli(k)
    coeffs = {Fraction(0): _sc(1)}
    for m in range(1, int(math.ceil(prec)) + 1):
        if m >= prec:
            break
        s = sum(d ** (k - 1) for d in range(1, m + 1) if m % d == 0)
        coeffs[Fraction(m)] = _sc(c * s)
    return QExpansion(coeffs, prec)


def delta_qexp(prec) -> QExpansion:
    """q prod (1-q^n)^24, computed directly from the product."""
    prec = Fraction(prec)
    top = int(math.ceil(prec))
    poly = [0] * top
    if top > 0:
        poly[0] = 1
    for n in range(1, top):
        for _ in range(24):
            # multiply by (1 - q^n) in place, degree < top
            for i in range(top - 1, n - 1, -1):
                poly[i] -= poly[i - n]
    coeffs = {}
    for i, c in enumerate(poly):
        e = Fraction(i + 1)
        if c and e < prec:
            coeffs[e] = _sc(c)
    return QExpansion(coeffs, prec)


def up_factor(k: int, p: int, prec) -> QExpansion:
    """E(q)/E(q^p) for the p-deprived series E of weight k."""
    _check_weight(k, p)
    prec = Fraction(prec)
    e_full = eisenstein_pdeprived(k, p, prec)
    e_short = eisenstein_pdeprived(k, p, prec / p + 1)
    return e_full.divide(e_short.subst(0, p)).truncate(prec)


# ---------------------------------------------------------------------------
# cusp labels and the adelic action


@dataclass(frozen=True)
class CuspLabel:
    """The cusp labelled by a unit A mod l^d, realized as diag(A, 1)."""

    l: int
    A: int
    d: int

    def __post_init__(self):
        if self.d < 0:
            raise InvalidInput("cusp resolution must be >= 0")
        mod = self.l ** self.d
        if self.d == 0:
            if self.A != 1:
                raise InvalidInput("resolution-0 cusp label must be 1")
            return
        if not (0 < self.A < mod) or self.A % self.l == 0:
            raise InvalidInput(f"cusp label {self.A} is not a unit mod {mod}")

    def matrix(self) -> MatQ:
        return MatQ(self.A, 0, 0, 1)


def _action_data(x: MatQ, l: int):
    """(m, n, a, r, u, t, s) for the standard form of x."""
    m, n, a, r, u = reduce_to_standard_upper(x, l)
    t = -Fraction(a, l ** (m + r))
    s = Fraction(l) ** (n - m)
    return m, n, a, r, u, t, s


def _check_resolution(cusp: CuspLabel, m: int, a: int, r: int):
    if a != 0 and cusp.d < m + r:
        raise LevelTooSmall(
            f"cusp label at resolution l^{cusp.d} does not determine the "
            f"root of unity of conductor l^{m + r}")


def adelic_action_qexp(f: QExpansion, g: MatQ, cusp: CuspLabel, k: int,
                       chi_l=None) -> QExpansion:
    """Weight-k action of g on the expansion at the labelled cusp.

    chi_l is the value at l of the finite-order character (defaults to
    trivial); its unit-part contribution is trivial in the supported
    regime, so only chi_l^(-n) enters.
    """
    l = cusp.l
    m, n, a, r, _, t, s = _action_data(cusp.matrix() * g, l)
    _check_resolution(cusp, m, a, r)
    scalar = _sc(Fraction(l) ** (-(m + n) + n * k))
    if chi_l is not None:
        scalar = scalar * _sc(chi_l) ** (-n)
    return f.subst(t, s).scale(scalar)


def twist_ratio_at(x: MatQ, g: MatQ, l: int, k: int, p: int, prec) -> QExpansion:
    """Twisting series l^(-(m+n)+nk) E(alpha q^s)/E(q) at the exact datum x.

    (m, n, a, r) come from the standard form of x*g; E is the p-deprived
    Eisenstein series of weight k.
    """
    if l == p:
        raise InvalidInput("the twist prime must differ from p")
    _check_weight(k, p)
    prec = Fraction(prec)
    m, n, a, r, _, t, s = _action_data(x * g, l)
    inner_prec = prec / s if s < 1 else prec
    e_top = eisenstein_pdeprived(k, p, inner_prec + 1)
    e_bot = eisenstein_pdeprived(k, p, prec + 1)
    num = e_top.subst(t, s)
    scalar = Fraction(l) ** (-(m + n) + n * k)
    return num.divide(e_bot).truncate(prec).scale(scalar)


def twist_ratio_qexp(g: MatQ, cusp: CuspLabel, k: int, p: int, prec) -> QExpansion:
    """Twisting series at the labelled cusp; errors if the label is too coarse."""
    l = cusp.l
    m, n, a, r, _, _, _ = _action_data(cusp.matrix() * g, l)
    _check_resolution(cusp, m, a, r)
    return twist_ratio_at(cusp.matrix(), g, l, k, p, prec)


# ---------------------------------------------------------------------------
# identity checks


def check_cocycle(g: MatQ, h: MatQ, cusp: CuspLabel, k: int, p: int, prec) -> dict:
    """e_(hg) = e_h * (h-substituted e_g at the transported datum).

    The inner datum is the unit part u1 of the standard form of x*h; the
    substitution carries no weight scalar.
    """
    l = cusp.l
    x = cusp.matrix()
    m1, n1, a1, r1, u1, t1, s1 = _action_data(x * h, l)
    _check_resolution(cusp, m1, a1, r1)
    e_h = twist_ratio_at(x, h, l, k, p, prec)
    inner_prec = Fraction(prec) / s1 if s1 < 1 else Fraction(prec)
    e_g_inner = twist_ratio_at(u1, g, l, k, p, inner_prec)
    lhs = e_h * e_g_inner.subst(t1, s1)
    rhs = twist_ratio_at(x, h * g, l, k, p, prec)
    ok = lhs.agrees_with(rhs, upto=prec)
    if not ok:
        raise CheckFailed(f"cocycle identity fails for g={g}, h={h} at weight {k}")
    return {"identity": "cocycle", "pass": True, "l": l, "p": p, "k": k,
            "prec": str(Fraction(prec)), "terms": len(rhs.coeffs)}


def check_up_commutation(g: MatQ, cusp: CuspLabel, k: int, p: int, prec) -> dict:
    """e(q) e_g(q) = (Frobenius twist of e_g) * (substituted e)(q)."""
    l = cusp.l
    x = cusp.matrix()
    m, n, a, r, _, t, s = _action_data(x * g, l)
    _check_resolution(cusp, m, a, r)
    prec = Fraction(prec)
    e_g = twist_ratio_at(x, g, l, k, p, prec)
    e_up = up_factor(k, p, prec)
    lhs = e_up * e_g
    inner_prec = prec / s if s < 1 else prec
    e_up_inner = up_factor(k, p, inner_prec)
    rhs = e_g.vp_twist(p) * e_up_inner.subst(t, s)
    ok = lhs.agrees_with(rhs, upto=prec)
    if not ok:
        raise CheckFailed(f"U_p commutation fails for g={g} at weight {k}")
    return {"identity": "up-commutation", "pass": True, "l": l, "p": p, "k": k,
            "prec": str(prec), "terms": len(lhs.coeffs)}


def check_constant_term(g: MatQ, cusp: CuspLabel, k: int, p: int, prec) -> dict:
    """Constant coefficient of the twist equals l^(-(m+n)+nk)."""
    l = cusp.l
    m, n, a, r, _, _, _ = _action_data(cusp.matrix() * g, l)
    _check_resolution(cusp, m, a, r)
    tw = twist_ratio_qexp(g, cusp, k, p, prec)
    want = _sc(Fraction(l) ** (-(m + n) + n * k))
    got = tw.coeff(0)
    if got != want:
        raise CheckFailed(f"constant term {got} != l^(-(m+n)+nk) = {want} for g={g}")
    return {"identity": "constant-term", "pass": True, "l": l, "p": p, "k": k,
            "value": str(Fraction(l) ** (-(m + n) + n * k))}


def slash_upper(f: QExpansion, gamma: MatQ, k: int) -> QExpansion:
    """Classical weight-k slash by an upper-triangular gamma.

    (f|_k gamma)(q) = (AD)^(k-1) D^(-k) f(e^(2pi i B/D) q^(A/D)) for
    gamma = [[A, B], [0, D]].
    """
    if gamma.e[2] != 0:
        raise InvalidInput("slash action implemented for upper-triangular matrices")
    A, B, _, D = gamma.e[0], gamma.e[1], gamma.e[2], gamma.e[3]
    if A / D <= 0:
        raise InvalidInput("need a positive substitution exponent A/D")
    scalar = (A * D) ** (k - 1) / D ** k
    return f.subst(B / D, A / D).scale(_sc(scalar))
