"""Quasicharacters of Q_l^* and two-dimensional Weil-Deligne data.

A quasicharacter is stored by its value at the uniformizer l (the image
of geometric Frobenius) together with the images of a fixed generating
set of (Z/l^m)^*; unit images are exact roots of unity, while the
Frobenius value may live in CycScalar, in a quadratic extension QuadExt
(symmetric storage of an unramified pair, so no splitting field is ever
chosen), or in the one-variable family ring.

Conventions, used consistently everywhere downstream:
  * |.| has frob_value 1/l, and conjugation by Frobenius scales the
    monodromy operator by |Phi| = 1/l.  A split rep with n_scale != 0
    therefore stores its characters in the order with chi1 = chi2 * |.|;
    constructors re-order a pair given the other way around.
  * the tame generator relation is phi^{-1} alpha phi = alpha^l,
    equivalently phi N phi^{-1} = (1/l) N on logarithms.
  * eigenform data enters through X^2 - a_l X + chi(l) l^{k-1}; the
    opposite sign printed in some sources is available as paper_sign.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import (InconsistentInput, InvalidInput, MathDomainError,
                     NotAMonodromyRep, NotApplicable, UnsupportedCoefficients)
from .family_ring import FamilyScalar
from .gl2 import rat_mod, val_l
from .padic import PadicMat, PadicTrunc, padic_log_matrix
from .scalars import CycScalar, QuadExt


def coerce_into(model, x):
    """Coerce x into the scalar ring that `model` inhabits."""
    if isinstance(model, CycScalar):
        return CycScalar.coerce(x)
    if isinstance(model, QuadExt):
        return model._wrap(x)
    if isinstance(model, FamilyScalar):
        return FamilyScalar.coerce(x)
    raise MathDomainError(f"no coercion into {type(model).__name__}")


# ---------------------------------------------------------------------------
# unit groups (Z/l^m)^*


def unit_gens(l: int, m: int):
    """Fixed generating set of (Z/l^m)^* with the orders of the generators."""
    if m == 0:
        return (), ()
    if l == 2:
        if m == 1:
            return (), ()
        return (2 ** m - 1, 5), (2, 2 ** (m - 2))
    g = _primitive_root_power(l, m)
    order = (l - 1) * l ** (m - 1)
    return (g,), (order,)


@lru_cache(maxsize=None)
def _primitive_root_power(l: int, m: int) -> int:
    mod = l ** m
    order = (l - 1) * l ** (m - 1)
    for g in range(2, mod):
        if g % l == 0:
            continue
        x, k = g, 1
        while x != 1:
            x = x * g % mod
            k += 1
        if k == order:
            return g
    raise InvalidInput(f"no generator of units mod {l}^{m}")


@lru_cache(maxsize=None)
def _unit_dlog_table(l: int, m: int):
    """residue -> exponent tuple over unit_gens(l, m)."""
    gens, orders = unit_gens(l, m)
    mod = l ** m
    table = {1 % mod: (0,) * len(gens)}
    if not gens:
        return table
    # at most two generators, so plain nested loops
    if len(gens) == 1:
        g, order = gens[0], orders[0]
        x = 1
        for e in range(order):
            table[x % mod] = (e,)
            x = x * g % mod
    else:
        g0, g1 = gens
        o0, o1 = orders
        x0 = 1
        for e0 in range(o0):
            x = x0
            for e1 in range(o1):
                table[x % mod] = (e0, e1)
                x = x * g1 % mod
            x0 = x0 * g0 % mod
    return table


class Quasicharacter:
    """Character of Q_l^* valued in a commutative scalar ring.

    unit_images are the values on unit_gens(l, conductor), always exact
    roots of unity in CycScalar; frob_value is the value at l and sets
    the ring the character maps into.
    """

    __slots__ = ("l", "conductor", "unit_images", "frob_value")

    def __init__(self, l, conductor, unit_images, frob_value):
        if conductor < 0:
            raise InvalidInput("conductor exponent must be >= 0")
        gens, orders = unit_gens(l, conductor)
        unit_images = tuple(CycScalar.coerce(x) for x in unit_images)
        if len(unit_images) != len(gens):
            raise InvalidInput(
                f"level l^{conductor} needs {len(gens)} unit images, got {len(unit_images)}")
        for img, order in zip(unit_images, orders):
            if not (img ** order == CycScalar.one()):
                raise InvalidInput("unit image is not a root of unity of the right order")
        self.l = l
        self.conductor = conductor
        self.unit_images = unit_images
        if isinstance(frob_value, (int, Fraction)):
            frob_value = CycScalar.from_rational(frob_value)
        self.frob_value = frob_value

    # -- constructors

    @classmethod
    def unramified(cls, l, frob_value) -> "Quasicharacter":
        return cls(l, 0, (), frob_value)

    @classmethod
    def trivial(cls, l) -> "Quasicharacter":
        return cls.unramified(l, CycScalar.one())

    @classmethod
    def norm(cls, l) -> "Quasicharacter":
        """The absolute value |.|: trivial on units, l -> 1/l."""
        return cls.unramified(l, CycScalar.from_rational(Fraction(1, l)))

    @classmethod
    def abs_power_half(cls, l, j: int) -> "Quasicharacter":
        """|.|^(j/2) via the formal sqrt(l); j may be negative."""
        return cls.unramified(l, CycScalar.sqrt_of(l).inverse() ** j)

    # -- evaluation

    def unit_value(self, u) -> CycScalar:
        """Value on a unit of Z_l, through its residue mod l^conductor."""
        if self.conductor == 0:
            return CycScalar.one()
        res = rat_mod(u, self.l, self.conductor)
        table = _unit_dlog_table(self.l, self.conductor)
        if res not in table:
            raise InvalidInput(f"{u} is not a unit at {self.l}")
        exps = table[res]
        out = CycScalar.one()
        for img, e in zip(self.unit_images, exps):
            out = out * img ** e
        return out

    def value_at(self, x):
        """Value at nonzero x in Q^*, in the ring of frob_value."""
        x = Fraction(x)
        if x == 0:
            raise InvalidInput("quasicharacter evaluated at zero")
        v = val_l(x, self.l)
        unit = x / Fraction(self.l) ** v
        uval = self.unit_value(unit)
        fpow = self.frob_value ** v
        if isinstance(fpow, CycScalar):
            return fpow * uval
        return fpow * coerce_into(fpow, uval)

    def at_l(self):
        return self.frob_value

    def is_unramified(self) -> bool:
        return all(img == CycScalar.one() for img in self.unit_images)

    # -- algebra

    def _promoted_images(self, conductor):
        gens, _ = unit_gens(self.l, conductor)
        return tuple(self.unit_value(g) for g in gens)

    def __mul__(self, other: "Quasicharacter") -> "Quasicharacter":
        if self.l != other.l:
            raise InvalidInput("characters of different primes")
        m = max(self.conductor, other.conductor)
        gens, _ = unit_gens(self.l, m)
        images = tuple(self.unit_value(g) * other.unit_value(g) for g in gens)
        return Quasicharacter(self.l, m, images, self.frob_value * other.frob_value)

    def inverse(self) -> "Quasicharacter":
        images = tuple(img.inverse() for img in self.unit_images)
        if isinstance(self.frob_value, CycScalar):
            finv = self.frob_value.inverse()
        else:
            finv = self.frob_value ** (-1)
        return Quasicharacter(self.l, self.conductor, images, finv)

    def __eq__(self, other):
        if not isinstance(other, Quasicharacter):
            return NotImplemented
        if self.l != other.l:
            return False
        m = max(self.conductor, other.conductor)
        if self._promoted_images(m) != other._promoted_images(m):
            return False
        try:
            return bool(self.frob_value == other.frob_value)
        except MathDomainError:
            return False

    __hash__ = None

    def __repr__(self):
        ram = "unramified" if self.is_unramified() else f"conductor {self.l}^{self.conductor}"
        return f"<char at {self.l}, {ram}, Frob -> {self.frob_value!r}>"


def _is_norm_ratio(chi1: Quasicharacter, chi2: Quasicharacter) -> bool:
    """Whether chi1 = chi2 * |.| as characters."""
    m = max(chi1.conductor, chi2.conductor)
    if chi1._promoted_images(m) != chi2._promoted_images(m):
        return False
    inv_l = Fraction(1, chi1.l)
    try:
        return bool(chi1.frob_value == chi2.frob_value * coerce_into(chi2.frob_value, inv_l))
    except MathDomainError:
        return False


# ---------------------------------------------------------------------------
# Weil-Deligne representations


PRINCIPAL_SERIES = "PrincipalSeries"
SPECIAL = "Special"
SUPERCUSPIDAL = "Supercuspidal"
NON_GENERIC = "NonGeneric"


class WDRep:
    """Two-dimensional Frobenius-semisimple Weil-Deligne representation.

    variant "split": rho = diag(chi1, chi2) with N = n_scale * E12; a
    nonzero n_scale forces chi1 = chi2 * |.| (so conjugating N by
    rho(Frob) scales it by 1/l), and the constructor swaps a pair
    supplied in the opposite order.

    variant "abstract": an irreducible handled as a black box: a label,
    the central character, certified Hecke matrices for its smooth side,
    and an unramified twist slot.
    """

    __slots__ = ("variant", "chi1", "chi2", "n_scale",
                 "label", "central_char", "hecke_matrices", "unramified_twist")

    def __init__(self, variant, **kw):
        self.variant = variant
        if variant == "split":
            chi1, chi2 = kw["chi1"], kw["chi2"]
            if chi1.l != chi2.l:
                raise InvalidInput("characters of different primes")
            n_scale = CycScalar.coerce(kw.get("n_scale", 0))
            if not n_scale.is_zero():
                if _is_norm_ratio(chi1, chi2):
                    pass
                elif _is_norm_ratio(chi2, chi1):
                    chi1, chi2 = chi2, chi1
                else:
                    raise InconsistentInput(
                        "nonzero monodromy needs characters with ratio |.|")
            self.chi1, self.chi2, self.n_scale = chi1, chi2, n_scale
            self.label = self.central_char = self.hecke_matrices = None
            self.unramified_twist = None
        elif variant == "abstract":
            self.label = kw["label"]
            self.central_char = kw["central_char"]
            self.hecke_matrices = dict(kw.get("hecke_matrices") or {})
            tw = kw.get("unramified_twist")
            if tw is None:
                tw = Quasicharacter.trivial(self.central_char.l)
            if not tw.is_unramified():
                raise InvalidInput("the twist slot must be unramified")
            self.unramified_twist = tw
            self.chi1 = self.chi2 = None
            self.n_scale = None
        else:
            raise InvalidInput(f"unknown variant {variant!r}")

    # -- constructors

    @classmethod
    def split(cls, chi1, chi2, n_scale=0) -> "WDRep":
        return cls("split", chi1=chi1, chi2=chi2, n_scale=n_scale)

    @classmethod
    def special(cls, chi: Quasicharacter, n_scale=1) -> "WDRep":
        """St(chi): the pair (chi, chi*|.|^{-1}) with nonzero monodromy."""
        n_scale = CycScalar.coerce(n_scale)
        if n_scale.is_zero():
            raise InvalidInput("a special representation needs nonzero monodromy")
        chi2 = chi * Quasicharacter.norm(chi.l).inverse()
        return cls.split(chi, chi2, n_scale)

    @classmethod
    def abstract_irred(cls, label, central_char, hecke_matrices=None,
                       unramified_twist=None) -> "WDRep":
        return cls("abstract", label=label, central_char=central_char,
                   hecke_matrices=hecke_matrices, unramified_twist=unramified_twist)

    @property
    def l(self) -> int:
        return self.chi1.l if self.variant == "split" else self.central_char.l

    # -- symmetric Frobenius data

    def sym_pair(self):
        """(trace, determinant) of Frobenius, descended to the base ring."""
        if self.variant != "split":
            raise NotApplicable("no symmetric Frobenius pair for an abstract irreducible")
        f1, f2 = self.chi1.frob_value, self.chi2.frob_value
        s = f1 + f2
        pr = f1 * f2
        if isinstance(s, QuadExt):
            s = s.in_base()
        if isinstance(pr, QuadExt):
            pr = pr.in_base()
        return s, pr

    def __eq__(self, other):
        if not isinstance(other, WDRep):
            return NotImplemented
        if self.variant != other.variant:
            return False
        if self.variant == "split":
            same = (self.chi1 == other.chi1 and self.chi2 == other.chi2)
            swapped = (self.chi1 == other.chi2 and self.chi2 == other.chi1)
            return (same or swapped) and self.n_scale == other.n_scale
        return (self.label == other.label and self.central_char == other.central_char
                and self.unramified_twist == other.unramified_twist)

    __hash__ = None

    def __repr__(self):
        if self.variant == "split":
            return f"<WD split {self.chi1!r} + {self.chi2!r}, N-scale {self.n_scale!r}>"
        return f"<WD abstract {self.label!r} twisted by {self.unramified_twist.frob_value!r}>"


def classify(sigma: WDRep) -> str:
    """PrincipalSeries / Special / Supercuspidal / NonGeneric per the ratio."""
    if sigma.variant == "abstract":
        return SUPERCUSPIDAL
    if not sigma.n_scale.is_zero():
        return SPECIAL
    chi1, chi2 = sigma.chi1, sigma.chi2
    m = max(chi1.conductor, chi2.conductor)
    if chi1._promoted_images(m) != chi2._promoted_images(m):
        return PRINCIPAL_SERIES
    # unramified ratio: chi1/chi2 = |.|^{+-1}  <=>  l*s^2 = (l+1)^2 * pr,
    # a base-ring identity in the symmetric functions (no roots needed)
    s, pr = sigma.sym_pair()
    l = sigma.l
    lhs = s * s * coerce_into(s, l)
    rhs = pr * coerce_into(pr, (l + 1) ** 2)
    if lhs == rhs:
        return NON_GENERIC
    return PRINCIPAL_SERIES


def twist(sigma: WDRep, chi: Quasicharacter) -> WDRep:
    if sigma.variant == "split":
        return WDRep.split(sigma.chi1 * chi, sigma.chi2 * chi, sigma.n_scale)
    if not chi.is_unramified():
        raise NotApplicable("ramified twists of an abstract irreducible are out of scope")
    return WDRep.abstract_irred(sigma.label, sigma.central_char,
                                sigma.hecke_matrices,
                                sigma.unramified_twist * chi)


def det_wd(sigma: WDRep) -> Quasicharacter:
    if sigma.variant == "split":
        return sigma.chi1 * sigma.chi2
    return sigma.central_char * sigma.unramified_twist * sigma.unramified_twist


def frob_ss(sigma: WDRep) -> WDRep:
    """Frobenius semisimplification; rho is stored semisimple already."""
    return sigma


def wd_from_eigenform(l: int, a_l, chi_l, k: int, paper_sign: bool = False) -> WDRep:
    """Unramified split rep with Frobenius char poly X^2 - a_l X + chi_l l^(k-1).

    Stored symmetrically: the two Frobenius values are theta and s-theta
    in the formal quadratic extension with theta^2 = s*theta - pr, so no
    splitting field is chosen.  paper_sign flips the linear coefficient.
    """
    a_l = CycScalar.coerce(a_l)
    chi_l = CycScalar.coerce(chi_l)
    if chi_l.is_zero():
        raise InvalidInput("the character value at l must be nonzero")
    s = -a_l if paper_sign else a_l
    pr = chi_l * CycScalar.from_rational(Fraction(l) ** (k - 1))
    theta = QuadExt.theta(s, pr)
    chi1 = Quasicharacter.unramified(l, theta)
    chi2 = Quasicharacter.unramified(l, s - theta)
    return WDRep.split(chi1, chi2, 0)


# ---------------------------------------------------------------------------
# p-adic monodromy


@dataclass(frozen=True)
class ContinuousLocalRep:
    """Continuous 2-dim rep data: Frobenius, tame generator, normalization.

    Coefficients are p-truncated; l is the residue prime of the local
    field (l != p).  alpha is the image of the chosen topological
    generator of the pro-p tame quotient and must satisfy
    phi^{-1} alpha phi = alpha^l.
    """

    l: int
    phi: PadicMat
    alpha: PadicMat
    c: PadicTrunc

    def __post_init__(self):
        if self.l == self.phi.p:
            raise InvalidInput("residue prime must differ from the coefficient prime")
        if not self.c.is_unit():
            raise InvalidInput("the tame normalization must be a p-adic unit")

    def check_tame_relation(self):
        lhs = self.phi.inverse() * self.alpha * self.phi
        rhs = self.alpha.power(self.l)
        if not lhs == rhs:
            raise InconsistentInput(
                "tame relation phi^-1 alpha phi = alpha^l fails at working precision")


class ExtractedWD:
    """Matrix-level output of monodromy extraction: (phi, N, c)."""

    __slots__ = ("l", "phi", "N", "c")

    def __init__(self, l, phi, N, c):
        self.l = l
        self.phi = phi
        self.N = N
        self.c = c


def monodromy_extract(rep: ContinuousLocalRep) -> ExtractedWD:
    """N = c*log(alpha), with nilpotency and the 1/l relation verified.

    Raises NotAMonodromyRep when alpha is not 1 mod p^2 or N fails
    nilpotency, InconsistentInput when conjugation by phi does not scale
    N by 1/l.
    """
    n_mat = padic_log_matrix(rep.alpha) * rep.c
    if not (n_mat * n_mat).is_zero():
        raise NotAMonodromyRep("log of the tame image is not nilpotent")
    tr = n_mat.e[0] + n_mat.e[3]
    if not tr == PadicTrunc(rep.alpha.p, tr.prec, 0):
        raise NotAMonodromyRep("log of the tame image has nonzero trace")
    lhs = rep.phi * n_mat * rep.phi.inverse()
    rhs = n_mat.scale_rational(Fraction(1, rep.l))
    if not lhs == rhs:
        raise InconsistentInput(
            "Frobenius conjugation does not scale the monodromy by 1/l")
    return ExtractedWD(rep.l, rep.phi, n_mat, rep.c)


def wd_to_continuous(sigma: WDRep, p: int, prec: int, c=1) -> ContinuousLocalRep:
    """Continuous rep with phi = diag(chi1(l), chi2(l)), alpha = exp(N/c).

    Frobenius values must be rational p-adic units; the monodromy scale
    divided by c must have valuation >= 2 so alpha lands in 1 + p^2 M_2.
    """
    if sigma.variant != "split":
        raise UnsupportedCoefficients("only split data extends to the continuous side here")
    l = sigma.l
    if l == p:
        raise InvalidInput("residue prime must differ from the coefficient prime")
    vals = []
    for chi in (sigma.chi1, sigma.chi2):
        f = chi.frob_value
        if not (isinstance(f, CycScalar) and f.is_rational()):
            raise UnsupportedCoefficients("Frobenius values must be rational here")
        fq = f.as_fraction()
        if fq.numerator % p == 0 or fq.denominator % p == 0:
            raise UnsupportedCoefficients(f"{fq} is not a p-adic unit at {p}")
        vals.append(fq)
    c_t = PadicTrunc.from_rational(p, prec, Fraction(c))
    if not sigma.n_scale.is_zero():
        if not sigma.n_scale.is_rational():
            raise UnsupportedCoefficients("monodromy scale must be rational here")
        ns = sigma.n_scale.as_fraction()
        scale = PadicTrunc.from_rational(p, prec, ns) * c_t.inverse()
        if scale.val() < 2:
            raise UnsupportedCoefficients(
                "monodromy scale over c must have p-adic valuation >= 2")
        # N/c is square-zero, so exp(N/c) = 1 + (n_scale/c) E12 exactly
        one = PadicTrunc(p, prec, 1)
        zero = PadicTrunc(p, prec, 0)
        alpha = PadicMat(p, (one, scale, zero, one))
    else:
        alpha = PadicMat.identity(p, prec)
    phi = PadicMat(p, [PadicTrunc.from_rational(p, prec, vals[0]),
                       PadicTrunc(p, prec, 0), PadicTrunc(p, prec, 0),
                       PadicTrunc.from_rational(p, prec, vals[1])])
    rep = ContinuousLocalRep(l, phi, alpha, c_t)
    rep.check_tame_relation()
    return rep
