"""Hecke algebra of U(l^n) double cosets and concrete smooth models.

HeckeElement is a finitely supported function on U\\G/U written in the
canonical double-coset keys of gl2; convolution multiplies two of them
with vol(U) = 1.  Models expose act(h) -> square matrix and trace(h):

  * InducedModel: normalized induction from the Borel of a pair of
    quasicharacters (pass them already including any half-power shifts),
    on its U(l^n)-fixed vectors, basis indexed by flag cosets.
  * SteinbergModel: twist of Steinberg by chi, realized as the quotient
    of B(chi|.|^{-1/2}, chi|.|^{1/2}) by the line spanned by chi(det).
  * AbstractModel: matrices supplied from outside for a representation
    we never construct, times an unramified twist.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InvalidInput, LevelTooSmall
from .gl2 import (LevelGroup, MatQ, _coset_closure, _rep_from_tag,
                  coset_reps, double_coset_key, flag_coset_reps, flag_index,
                  iwasawa_decompose, left_coset_tag, rat_mod, val_l)
from .scalars import CycScalar
from .weil_deligne import Quasicharacter


def _coeff_is_zero(c) -> bool:
    if isinstance(c, (int, Fraction)):
        return c == 0
    return c.is_zero()


class HeckeElement:
    """Finite linear combination of double cosets of U = U(l^n).

    terms maps the canonical key (z, e, minimal left-coset tag) to its
    coefficient; left-coset representatives per key are recomputed on
    demand and cached on the instance.
    """

    __slots__ = ("U", "terms", "_reps")

    def __init__(self, U: LevelGroup, terms=None):
        self.U = U
        self.terms = {}
        for k, c in (terms or {}).items():
            if not _coeff_is_zero(c):
                self.terms[k] = c
        self._reps = {}

    def reps_for(self, key):
        """Sorted left-coset representatives of the double coset `key`."""
        if key not in self._reps:
            z, e, tag = key
            g = Fraction(self.U.l) ** z * _rep_from_tag(tag, self.U.l, self.U.n)
            self._reps[key] = tuple(coset_reps(g, self.U))
        return self._reps[key]

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "HeckeElement") -> "HeckeElement":
        if self.U != other.U:
            raise InvalidInput("Hecke elements at different levels")
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return HeckeElement(self.U, out)

    def __neg__(self) -> "HeckeElement":
        return HeckeElement(self.U, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "HeckeElement") -> "HeckeElement":
        return self + (-other)

    def scale(self, c) -> "HeckeElement":
        return HeckeElement(self.U, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, HeckeElement):
            return hecke_convolve(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, HeckeElement):
            return NotImplemented
        if self.U != other.U or set(self.terms) != set(other.terms):
            return False
        for k, c in self.terms.items():
            d = other.terms[k]
            if isinstance(c, (int, Fraction)) and isinstance(d, (int, Fraction)):
                if c != d:
                    return False
            elif not (CycScalar.coerce(c) == CycScalar.coerce(d)):
                return False
        return True

    __hash__ = None

    def __repr__(self):
        return f"<Hecke level {self.U.l}^{self.U.n}, {len(self.terms)} terms>"


def hecke_identity(U: LevelGroup) -> HeckeElement:
    return hecke_basis_element(MatQ.identity(), U)


def hecke_basis_element(g: MatQ, U: LevelGroup, coeff=1) -> HeckeElement:
    return HeckeElement(U, {double_coset_key(g, U): coeff})


def hecke_tl(U: LevelGroup) -> HeckeElement:
    """[U diag(l,1) U]."""
    return hecke_basis_element(MatQ.diag(U.l, 1), U)


def hecke_zl(U: LevelGroup) -> HeckeElement:
    """[U diag(l,l) U], the central element at l."""
    return hecke_basis_element(MatQ.diag(U.l, U.l), U)


def hecke_convolve(h1: HeckeElement, h2: HeckeElement) -> HeckeElement:
    """Product with vol(U) = 1.

    Each pairwise product of left-coset representatives contributes its
    left coset; products are bucketed by exact left-coset tag, buckets
    are grouped into double cosets by one BFS closure per new coset, and
    the bucket counts inside one double coset must agree (that common
    count is the multiplicity of the double coset in the product).
    """
    if h1.U != h2.U:
        raise InvalidInput("Hecke elements at different levels")
    U = h1.U
    l, n = U.l, U.n
    out = {}
    for k1, c1 in h1.terms.items():
        for k2, c2 in h2.terms.items():
            c = c1 * c2
            counts = {}
            for r1 in h1.reps_for(k1):
                for r2 in h2.reps_for(k2):
                    p = r1 * r2
                    z = p.min_val(l)
                    p0 = Fraction(1, l) ** z * p
                    t = left_coset_tag(p0, l, n)
                    counts[(z, t)] = counts.get((z, t), 0) + 1
            assigned = {}
            while counts:
                (z, t), _ = next(iter(counts.items()))
                closure = _coset_closure(_rep_from_tag(t, l, n), l, n)
                key = (z, t[0] + t[1], min(closure))
                mult = None
                for tt in closure:
                    m = counts.pop((z, tt), 0)
                    if mult is None:
                        mult = m
                    else:
                        assert m == mult, "nonuniform multiplicity across left cosets"
                assigned[key] = mult
            for key, m in assigned.items():
                contrib = m * c
                out[key] = out[key] + contrib if key in out else contrib
    return HeckeElement(U, out)


# ---------------------------------------------------------------------------
# models


class InducedModel:
    """U(l^n)-fixed vectors of the induced representation B(eta1, eta2).

    The characters are used as given: callers wanting the unitary or
    arithmetic normalization fold the |.|^{+-1/2} in before constructing
    the model.  Basis f_j is supported on B omega_j U with f_j(omega_j)
    one, omega_j running over flag_coset_reps(l, n).
    """

    def __init__(self, eta1: Quasicharacter, eta2: Quasicharacter, n: int):
        if eta1.l != eta2.l:
            raise InvalidInput("characters of different primes")
        if n < max(eta1.conductor, eta2.conductor):
            raise LevelTooSmall(
                f"level l^{n} below conductor l^{max(eta1.conductor, eta2.conductor)}")
        self.eta1 = eta1
        self.eta2 = eta2
        self.l = eta1.l
        self.n = n
        self.U = LevelGroup(self.l, n)
        self.flags = [w.lift() for w in flag_coset_reps(self.l, n)]
        self._flag_inv = [w.inverse() for w in self.flags]
        self._invsqrt = CycScalar.sqrt_of(self.l).inverse()

    def rank(self) -> int:
        return len(self.flags)

    def _value_factor(self, y: MatQ):
        """(j, factor) with f_j the one basis vector not vanishing at y."""
        b, k = iwasawa_decompose(y, self.l)
        j = flag_index(k, self.l, self.n)
        p = k * self._flag_inv[j]
        if self.n:
            assert rat_mod(p.e[2], self.l, self.n) == 0
        b11, b22 = b.e[0], b.e[3]
        factor = (self.eta1.value_at(b11) * self.eta2.value_at(b22)
                  * self._invsqrt ** (val_l(b11, self.l) - val_l(b22, self.l))
                  * self.eta1.unit_value(p.e[0]) * self.eta2.unit_value(p.e[3]))
        return j, factor

    def act(self, h: HeckeElement):
        """Matrix of h on coordinate columns: A[i][j] = (h f_j)(omega_i)."""
        if h.U != self.U:
            raise InvalidInput("element level does not match the model level")
        r = self.rank()
        a = [[0] * r for _ in range(r)]
        for key, coeff in h.terms.items():
            for g in h.reps_for(key):
                for i, w in enumerate(self.flags):
                    j, factor = self._value_factor(w * g)
                    a[i][j] = a[i][j] + factor * coeff
        return a

    def trace(self, h: HeckeElement):
        a = self.act(h)
        out = 0
        for i in range(len(a)):
            out = out + a[i][i]
        return out


def det_character_sum(chi: Quasicharacter, h: HeckeElement):
    """Action of h on the line chi(det): sum of chi(det g) over left cosets."""
    out = 0
    for key, coeff in h.terms.items():
        for g in h.reps_for(key):
            out = out + chi.value_at(g.det) * coeff
    return out


class OneDimModel:
    """The character chi(det) as a rank-one module over the Hecke algebra."""

    def __init__(self, chi: Quasicharacter, n: int):
        if n < chi.conductor:
            raise LevelTooSmall(f"level l^{n} below conductor l^{chi.conductor}")
        self.chi = chi
        self.l = chi.l
        self.n = n
        self.U = LevelGroup(self.l, n)

    def rank(self) -> int:
        return 1

    def act(self, h: HeckeElement):
        if h.U != self.U:
            raise InvalidInput("element level does not match the model level")
        return [[det_character_sum(self.chi, h)]]

    def trace(self, h: HeckeElement):
        return self.act(h)[0][0]


class SteinbergModel:
    """chi tensor Steinberg on U(l^n)-fixed vectors.

    Realized inside B(chi|.|^{-1/2}, chi|.|^{1/2}), where chi(det) spans
    an invariant line; the model is the quotient by that line, dropping
    the last flag coordinate.
    """

    def __init__(self, chi: Quasicharacter, n: int):
        self.chi = chi
        self.l = chi.l
        self.n = n
        self.U = LevelGroup(self.l, n)
        lo = chi * Quasicharacter.abs_power_half(self.l, -1)
        hi = chi * Quasicharacter.abs_power_half(self.l, 1)
        self.ambient = InducedModel(lo, hi, n)
        self.w = [chi.unit_value(f.det) for f in self.ambient.flags]

    def rank(self) -> int:
        return self.ambient.rank() - 1

    def line_eigenvalue(self, h: HeckeElement):
        """Action of h on the invariant chi(det) line."""
        return det_character_sum(self.chi, h)

    def act(self, h: HeckeElement):
        full = self.ambient.act(h)
        j0 = self.ambient.rank() - 1
        wq = self.w[j0].inverse()
        out = []
        for i in range(j0):
            ratio = self.w[i] * wq
            out.append([full[i][j] - full[j0][j] * ratio for j in range(j0)])
        return out

    def trace(self, h: HeckeElement):
        a = self.act(h)
        out = 0
        for i in range(len(a)):
            out = out + a[i][i]
        return out


class AbstractModel:
    """Representation given only through certified Hecke matrices.

    matrices maps double-coset keys to rank x rank matrices; acting by a
    combination looks each key up (missing ones are an error, there is
    nothing to compute them from) and scales by the unramified twist at
    det, a power of its Frobenius value.
    """

    def __init__(self, l: int, n: int, matrices, twist: Quasicharacter = None):
        self.l = l
        self.n = n
        self.U = LevelGroup(l, n)
        self.matrices = dict(matrices)
        if not self.matrices:
            raise InvalidInput("an abstract model needs at least one supplied matrix")
        first = next(iter(self.matrices.values()))
        self._rank = len(first)
        for m in self.matrices.values():
            if len(m) != self._rank or any(len(row) != self._rank for row in m):
                raise InvalidInput("supplied matrices must be square of equal size")
        if twist is None:
            twist = Quasicharacter.trivial(l)
        if not twist.is_unramified():
            raise InvalidInput("the twist slot must be unramified")
        self.twist = twist

    def rank(self) -> int:
        return self._rank

    def act(self, h: HeckeElement):
        if h.U != self.U:
            raise InvalidInput("element level does not match the model level")
        r = self._rank
        a = [[0] * r for _ in range(r)]
        for key, coeff in h.terms.items():
            if key not in self.matrices:
                raise InvalidInput(f"no certified matrix for double coset {key}")
            z, e, _ = key
            scale = self.twist.frob_value ** (2 * z + e) * coeff
            m = self.matrices[key]
            for i in range(r):
                for j in range(r):
                    a[i][j] = a[i][j] + m[i][j] * scale
        return a

    def trace(self, h: HeckeElement):
        a = self.act(h)
        out = 0
        for i in range(len(a)):
            out = out + a[i][i]
        return out
