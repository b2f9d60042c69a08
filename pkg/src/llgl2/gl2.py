"""Decompositions in GL_2(Q_l) and coset enumeration at level l^n.

Everything here is exact: matrices are 2x2 over Fraction, the prime l
is explicit, and "integral" always means l-integral (denominators prime
to l).  The level group U(l^n) is the principal congruence subgroup
{k in GL_2(Z_l): k = 1 mod l^n}, which is normal in GL_2(Z_l); n = 0
means GL_2(Z_l) itself.

Left cosets xU are identified by an exact tag: the Hermite basis of the
column lattice x·Z_l^2 together with the residue of the resulting unit
matrix mod l^n.  Double cosets UgU are enumerated by closing the coset
gU under left multiplication by generators of U, and are named by the
central exponent z, the Cartan gap e = a - b, and the minimal left-coset
tag in the closure.

Enumeration is sized for l in {2, 3, 5}, n <= 2 and small Cartan gaps;
the element routines (decompositions) carry no such limit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import InvalidInput

Rat = Fraction


def val_l(x, l: int) -> int:
    """l-adic valuation of a nonzero rational."""
    x = Fraction(x)
    if x == 0:
        raise InvalidInput("valuation of zero")
    v = 0
    n = x.numerator
    while n % l == 0:
        n //= l
        v += 1
    d = x.denominator
    while d % l == 0:
        d //= l
        v -= 1
    return v


def is_l_integral(x, l: int) -> bool:
    return Fraction(x).denominator % l != 0


def rat_mod(x, l: int, k: int) -> int:
    """Residue of x in Z/l^k for x with denominator prime to l."""
    if k <= 0:
        return 0
    x = Fraction(x)
    mod = l ** k
    if x.denominator % l == 0:
        raise InvalidInput("not l-integral")
    return x.numerator * pow(x.denominator, -1, mod) % mod


def lpow_residue(x, l: int, k: int) -> Fraction:
    """Canonical representative of x modulo l^k Z_l.

    The result is the truncation of the l-adic digit expansion of x below
    l^k: a rational with denominator a power of l, zero when v_l(x) >= k.
    """
    x = Fraction(x)
    if x == 0:
        return Fraction(0)
    v = val_l(x, l)
    if v >= k:
        return Fraction(0)
    # x = l^v * (p/q) with p, q prime to l; reduce p/q mod l^(k-v)
    unit = x / Fraction(l) ** v
    res = rat_mod(unit, l, k - v)
    return Fraction(res) * Fraction(l) ** v


class MatQ:
    """2x2 invertible matrix over Q with cached determinant."""

    __slots__ = ("e", "_det")

    def __init__(self, a, b, c, d):
        self.e = (Fraction(a), Fraction(b), Fraction(c), Fraction(d))
        self._det = self.e[0] * self.e[3] - self.e[1] * self.e[2]
        if self._det == 0:
            raise InvalidInput("matrix is singular")

    @classmethod
    def from_rows(cls, rows) -> "MatQ":
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    @classmethod
    def identity(cls) -> "MatQ":
        return cls(1, 0, 0, 1)

    @classmethod
    def diag(cls, x, y) -> "MatQ":
        return cls(x, 0, 0, y)

    @classmethod
    def from_string(cls, s: str) -> "MatQ":
        """Parse "a,b;c,d" with rational entries."""
        try:
            rows = s.split(";")
            (a, b), (c, d) = (r.split(",") for r in rows)
            return cls(Fraction(a.strip()), Fraction(b.strip()),
                       Fraction(c.strip()), Fraction(d.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidInput(f"cannot parse matrix {s!r}: {exc}") from None

    def to_string(self) -> str:
        a, b, c, d = self.e
        return f"{a},{b};{c},{d}"

    @property
    def det(self) -> Fraction:
        return self._det

    def __mul__(self, other):
        if isinstance(other, MatQ):
            a, b, c, d = self.e
            e, f, g, h = other.e
            return MatQ(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
        x = Fraction(other)
        a, b, c, d = self.e
        return MatQ(a * x, b * x, c * x, d * x)

    def __rmul__(self, other):
        x = Fraction(other)
        a, b, c, d = self.e
        return MatQ(a * x, b * x, c * x, d * x)

    def inverse(self) -> "MatQ":
        a, b, c, d = self.e
        return MatQ(d / self._det, -b / self._det, -c / self._det, a / self._det)

    def is_integral(self, l: int) -> bool:
        return all(is_l_integral(x, l) for x in self.e)

    def in_glz(self, l: int) -> bool:
        """Membership in GL_2(Z_l)."""
        return self.is_integral(l) and val_l(self._det, l) == 0

    def in_level(self, l: int, n: int) -> bool:
        """Membership in U(l^n)."""
        if not self.in_glz(l):
            return False
        if n == 0:
            return True
        a, b, c, d = self.e
        return (rat_mod(a - 1, l, n) == 0 and rat_mod(b, l, n) == 0
                and rat_mod(c, l, n) == 0 and rat_mod(d - 1, l, n) == 0)

    def is_upper(self) -> bool:
        return self.e[2] == 0

    def min_val(self, l: int) -> int:
        return min(val_l(x, l) for x in self.e if x != 0)

    def __eq__(self, other):
        if not isinstance(other, MatQ):
            return NotImplemented
        return self.e == other.e

    def __hash__(self):
        return hash(self.e)

    def __repr__(self):
        a, b, c, d = self.e
        return f"[[{a},{b}],[{c},{d}]]"


@dataclass(frozen=True)
class LevelGroup:
    """The principal congruence subgroup U(l^n); n = 0 is GL_2(Z_l)."""

    l: int
    n: int

    def __post_init__(self):
        if self.l < 2 or any(self.l % q == 0 for q in range(2, self.l)):
            raise InvalidInput(f"l = {self.l} is not prime")
        if self.n < 0:
            raise InvalidInput("level exponent must be >= 0")

    def contains(self, x: MatQ) -> bool:
        return x.in_level(self.l, self.n)


@dataclass(frozen=True)
class ResidueMat:
    """2x2 matrix mod l^k with unit determinant.

    k = 0 is the degenerate level where the group is trivial; entries are
    then kept literally so that lift() still returns the intended matrix.
    """

    l: int
    k: int
    entries: tuple

    def __post_init__(self):
        if self.k > 0:
            mod = self.l ** self.k
            object.__setattr__(self, "entries", tuple(x % mod for x in self.entries))
            a, b, c, d = self.entries
            if (a * d - b * c) % self.l == 0:
                raise InvalidInput("determinant is not a unit")

    def lift(self) -> MatQ:
        return MatQ(*self.entries)

    def to_string(self) -> str:
        a, b, c, d = self.entries
        return f"{a},{b};{c},{d}"


def reduce_mod(x: MatQ, l: int, k: int) -> ResidueMat:
    return ResidueMat(l, k, tuple(rat_mod(v, l, k) for v in x.e))


# ---------------------------------------------------------------------------
# decompositions


def iwasawa_decompose(x: MatQ, l: int):
    """x = b * k with b upper triangular over Q and k in GL_2(Z_l)."""
    if x.in_glz(l):
        return MatQ.identity(), x
    x11, x12, x21, x22 = x.e
    if x21 == 0:
        return x, MatQ.identity()
    if x22 != 0 and val_l(x21, l) >= val_l(x22, l):
        kinv = MatQ(1, 0, -x21 / x22, 1)
        k = MatQ(1, 0, x21 / x22, 1)
    else:
        kinv = MatQ(-x22 / x21, 1, 1, 0)
        k = kinv.inverse()
    b = x * kinv
    assert b.e[2] == 0 and k.in_glz(l)
    return b, k


def reduce_to_standard_upper(g: MatQ, l: int):
    """g = [[l^m, a/l^r],[0, l^n]] * u with u in GL_2(Z_l).

    The upper-right entry is the canonical l-adic truncation of the
    triangular part mod l^m Z_l, so (m, n, a, r) depend only on the coset
    g*GL_2(Z_l); a/l^r is in lowest terms with r >= 0.
    """
    b, _ = iwasawa_decompose(g, l)
    b11, b12, _, b22 = b.e
    m = val_l(b11, l)
    n = val_l(b22, l)
    t = b12 / (b22 / Fraction(l) ** n)  # kill the unit of the bottom entry
    tprime = lpow_residue(t, l, m)
    if tprime == 0:
        a, r = 0, 0
    else:
        r = max(0, -val_l(tprime, l))
        a_f = tprime * Fraction(l) ** r
        assert a_f.denominator == 1
        a = a_f.numerator
    p = MatQ(Fraction(l) ** m, Fraction(a) / Fraction(l) ** r, 0, Fraction(l) ** n)
    u = p.inverse() * g
    assert u.in_glz(l), (g, p, u)
    return m, n, a, r, u


def cartan_decompose(g: MatQ, l: int):
    """g = k1 * diag(l^a, l^b) * k2 with a >= b and k1, k2 in GL_2(Z_l).

    Prime-to-l rational scalars are folded into k2, so the identity is
    exact over Q.  (a, b) are the elementary divisor exponents.
    """
    b_exp = g.min_val(l)
    a_exp = val_l(g.det, l) - b_exp
    # accumulate g = L * work * R with L, R in GL_2(Z_l)
    work = g
    left = MatQ.identity()
    right = MatQ.identity()
    # move a minimal-valuation entry to position (2,2)
    vals = [val_l(x, l) if x != 0 else None for x in work.e]
    pos = min((i for i in range(4) if vals[i] is not None), key=lambda i: vals[i])
    swap = MatQ(0, 1, 1, 0)
    if pos in (0, 1):  # row swap
        work = swap * work
        left = left * swap
    if pos in (0, 2):  # column swap
        work = work * swap
        right = swap * right
    # clear the rest of the pivot row and column
    piv = work.e[3]
    u1 = MatQ(1, -work.e[1] / piv, 0, 1)
    work = u1 * work
    left = left * u1.inverse()
    u2 = MatQ(1, 0, -work.e[2] / piv, 1)
    work = work * u2
    right = u2.inverse() * right
    assert work.e[1] == 0 and work.e[2] == 0
    d1, d2 = work.e[0], work.e[3]
    if val_l(d1, l) < val_l(d2, l):  # sort exponents descending
        work = swap * work * swap
        left = left * swap
        right = swap * right
        d1, d2 = d2, d1
    assert val_l(d1, l) == a_exp and val_l(d2, l) == b_exp
    units = MatQ(d1 / Fraction(l) ** a_exp, 0, 0, d2 / Fraction(l) ** b_exp)
    k1 = left
    k2 = units * right
    assert k1.in_glz(l) and k2.in_glz(l)
    return a_exp, b_exp, k1, k2


# ---------------------------------------------------------------------------
# flag cosets mod l^n


def flag_coset_reps(l: int, n: int):
    """Representatives of P(Z/l^n)\\GL_2(Z/l^n), P the upper Borel.

    Classes are indexed by the bottom row up to unit scaling: [c : 1] for
    c mod l^n, then [1 : d] for d mod l^n divisible by l.  Count is
    l^(n-1)(l+1); the degenerate n = 0 gives the single class of the
    identity.
    """
    if n == 0:
        return [ResidueMat(l, 0, (1, 0, 0, 1))]
    reps = [ResidueMat(l, n, (1, 0, c, 1)) for c in range(l ** n)]
    reps += [ResidueMat(l, n, (0, 1, 1, d)) for d in range(0, l ** n, l)]
    return reps


def flag_index(k: MatQ, l: int, n: int) -> int:
    """Index j with k in P * omega_j * U(l^n), via the bottom row mod l^n."""
    if n == 0:
        return 0
    c = rat_mod(k.e[2], l, n)
    d = rat_mod(k.e[3], l, n)
    if d % l != 0:
        return c * pow(d, -1, l ** n) % l ** n
    if c % l == 0:
        raise InvalidInput("bottom row is not primitive mod l")
    dd = d * pow(c, -1, l ** n) % l ** n
    return l ** n + dd // l


# ---------------------------------------------------------------------------
# left cosets and double cosets of U(l^n)


def left_coset_tag(x: MatQ, l: int, n: int):
    """Exact invariant of the coset x*U(l^n), for x with l-integral entries.

    Returns (alpha, gamma, b, kbar): [[l^alpha, b],[0, l^gamma]] is the
    Hermite basis of the column lattice of x, and kbar is the unit matrix
    H^{-1}x reduced mod l^n (empty for n = 0).
    """
    x11, x12, x21, x22 = x.e
    # pivot on the bottom-row entry of smaller valuation
    v21 = val_l(x21, l) if x21 != 0 else None
    v22 = val_l(x22, l) if x22 != 0 else None
    if v22 is None or (v21 is not None and v21 < v22):
        # swap columns; the lattice is unchanged
        x11, x12 = x12, x11
        x21, x22 = x22, x21
    gamma = val_l(x22, l)
    alpha = val_l(x.det, l) - gamma
    b0 = x12 * Fraction(l) ** gamma / x22
    b = lpow_residue(b0, l, alpha)
    h = MatQ(Fraction(l) ** alpha, b, 0, Fraction(l) ** gamma)
    k = h.inverse() * x
    assert k.in_glz(l), (x, h)
    if n == 0:
        kbar = ()
    else:
        kbar = tuple(rat_mod(v, l, n) for v in k.e)
    return (alpha, gamma, b.numerator, b.denominator, kbar)


def _rep_from_tag(tag, l: int, n: int) -> MatQ:
    """Canonical coset representative encoded by a tag."""
    alpha, gamma, bn, bd, kbar = tag
    h = MatQ(Fraction(l) ** alpha, Fraction(bn, bd), 0, Fraction(l) ** gamma)
    if n == 0:
        return h
    return h * MatQ(*kbar)


def _u_generators(l: int, n: int):
    """Topological generators of U(l^n), enough to generate mod any l^K."""
    t = l ** n
    gens = [MatQ(1, t, 0, 1), MatQ(1, 0, t, 1)]
    if n == 0:
        if l == 2:
            units = [-1, 5]
        else:
            units = [_primitive_root(l)]
        for r in units:
            gens.append(MatQ(r, 0, 0, 1))
            gens.append(MatQ(1, 0, 0, r))
    else:
        gens.append(MatQ(1 + t, 0, 0, 1))
        gens.append(MatQ(1, 0, 0, 1 + t))
    return gens


def _primitive_root(l: int) -> int:
    # l is an odd prime of desk size; brute force is fine
    for r in range(2, l):
        seen, x = set(), 1
        for _ in range(l - 1):
            x = x * r % l
            seen.add(x)
        if len(seen) == l - 1:
            return r
    raise InvalidInput(f"no primitive root mod {l}")


def expected_coset_count(l: int, n: int, e: int) -> int:
    """[U : U ∩ gUg^{-1}] for g with Cartan gap e, independent of g."""
    if e == 0:
        return 1
    if n == 0:
        return l ** (e - 1) * (l + 1)
    return l ** e


def left_cosets_of_double_coset(g: MatQ, U: LevelGroup):
    """Representatives g_i with U g U = disjoint union of g_i U.

    Output representatives are canonical (Hermite basis times the lifted
    unit residue, scaled by the central l-power) and sorted.
    """
    l, n = U.l, U.n
    a_exp, b_exp, _, _ = cartan_decompose(g, l)
    z, e = b_exp, a_exp - b_exp
    if e > 6:
        raise InvalidInput("Cartan gap too large for coset enumeration")
    x0 = g * Fraction(1, l) ** z
    tags = _coset_closure(x0, l, n)
    expected = expected_coset_count(l, n, e)
    assert len(tags) == expected, (g, len(tags), expected)
    scale = Fraction(l) ** z
    return [scale * _rep_from_tag(t, l, n) for t in sorted(tags)]


def _coset_closure(x0: MatQ, l: int, n: int):
    """Tags of all left cosets in U x0 U, by BFS over left U-generators."""
    gens = _u_generators(l, n)
    first = left_coset_tag(x0, l, n)
    seen = {first: x0}
    frontier = [x0]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = s * x
                t = left_coset_tag(y, l, n)
                if t not in seen:
                    seen[t] = y
                    nxt.append(y)
        frontier = nxt
    return set(seen)


@lru_cache(maxsize=4096)
def _cosets_cached(entries, l: int, n: int):
    g = MatQ(*entries)
    return tuple(left_cosets_of_double_coset(g, LevelGroup(l, n)))


def coset_reps(g: MatQ, U: LevelGroup):
    return list(_cosets_cached(g.e, U.l, U.n))


def double_coset_key(g: MatQ, U: LevelGroup):
    """Canonical name (z, e, minimal left-coset tag) of U g U.

    Depends only on the double coset: the minimal tag runs over the full
    left-coset closure.  For n = 0 the tag degenerates to Hermite data
    and the key is equivalent to the Cartan pair.
    """
    l, n = U.l, U.n
    a_exp, b_exp, _, _ = cartan_decompose(g, l)
    z, e = b_exp, a_exp - b_exp
    x0 = g * Fraction(1, l) ** z
    tags = _coset_closure(x0, l, n)
    return (z, e, min(tags))


def key_of_normalized(z: int, e: int, U: LevelGroup):
    """Key of the standard coset U diag(l^e,1) U shifted by l^z."""
    l = U.l
    g = MatQ(Fraction(l) ** (z + e), 0, 0, Fraction(l) ** z)
    return double_coset_key(g, U)


# ---------------------------------------------------------------------------
# brute-force verification at finite level (test oracle support)


def enumerate_udu_mod(g: MatQ, U: LevelGroup, k: int):
    """All residues of U g U mod l^k, for integral g; small cases only."""
    l, n = U.l, U.n
    if not g.is_integral(l):
        raise InvalidInput("need an integral representative")
    mod = l ** k
    gbar = tuple(rat_mod(x, l, k) for x in g.e)
    ubars = _level_residues(l, n, k)

    def mmul(x, y):
        a, b, c, d = x
        e, f, gg, h = y
        return ((a * e + b * gg) % mod, (a * f + b * h) % mod,
                (c * e + d * gg) % mod, (c * f + d * h) % mod)

    out = set()
    for u1 in ubars:
        left = mmul(u1, gbar)
        for u2 in ubars:
            out.add(mmul(left, u2))
    return out


def enumerate_xu_mod(x: MatQ, U: LevelGroup, k: int):
    """All residues of x U mod l^k, for integral x; small cases only."""
    l, n = U.l, U.n
    if not x.is_integral(l):
        raise InvalidInput("need an integral representative")
    mod = l ** k
    xbar = tuple(rat_mod(v, l, k) for v in x.e)
    out = set()
    for u in _level_residues(l, n, k):
        a, b, c, d = xbar
        e, f, gg, h = u
        out.add(((a * e + b * gg) % mod, (a * f + b * h) % mod,
                 (c * e + d * gg) % mod, (c * f + d * h) % mod))
    return out


def _level_residues(l: int, n: int, k: int):
    """Residues mod l^k of U(l^n); exponential in k, test scale only."""
    mod = l ** k
    out = []
    if n == 0:
        rng = range(mod)
        for a in rng:
            for b in rng:
                for c in rng:
                    for d in rng:
                        if (a * d - b * c) % l != 0:
                            out.append((a, b, c, d))
        return out
    step = l ** n
    rng = range(0, mod, step)
    for a in rng:
        for b in rng:
            for c in rng:
                for d in rng:
                    out.append(((1 + a) % mod, b, c, (1 + d) % mod))
    return out
