"""One-parameter families of local representation data.

A family lives over the rational-function field in T with cyclotomic
coefficients.  Three shapes: a principal-series family held by the
symmetric functions of its two Frobenius values (so traces stay in the
base ring with no splitting field), a Steinberg twist with polynomial
monodromy scale, and an unramified-twist family of a fixed abstract
irreducible.  Traces, specialization, bad-point detection, and the
specialization-vs-trace consistency check live here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidInput, PoleAtPoint
from .family_ring import FamilyPoly, FamilyScalar
from .langlands import ll_map
from .scalars import CycScalar, QuadExt, scalar_sqrt
from .smooth_reps import (AbstractModel, HeckeElement, InducedModel,
                          OneDimModel, SteinbergModel)
from .weil_deligne import Quasicharacter, WDRep


def _fs(x) -> FamilyScalar:
    return FamilyScalar.coerce(x)


def _unit_data(unit_part):
    if unit_part is None:
        return 0, ()
    return unit_part.conductor, unit_part.unit_images


@dataclass(eq=False)
class PSFamily:
    """chi1 (+) chi2 with N = 0, stored by sum and product of Frobenius values.

    unit_part, when given, is a finite-order character both members
    share; its Frobenius value must be 1.
    """

    l: int
    sum: FamilyScalar
    product: FamilyScalar
    unit_part: Quasicharacter = None

    def __post_init__(self):
        self.sum = _fs(self.sum)
        self.product = _fs(self.product)
        if self.product.is_zero():
            raise InvalidInput("the Frobenius product must not vanish identically")
        if self.unit_part is not None:
            if self.unit_part.l != self.l:
                raise InvalidInput("unit part at the wrong prime")
            if not (CycScalar.coerce(self.unit_part.frob_value) == CycScalar.one()):
                raise InvalidInput("the unit part must have Frobenius value 1")

    def conductor(self) -> int:
        return 0 if self.unit_part is None else self.unit_part.conductor


@dataclass(eq=False)
class SpecialFamily:
    """St(chi) with monodromy scale n_poly(T), vanishing at isolated points."""

    chi: Quasicharacter
    n_poly: FamilyPoly

    def __post_init__(self):
        if not isinstance(self.n_poly, FamilyPoly):
            self.n_poly = FamilyPoly(self.n_poly)
        if self.n_poly.is_zero():
            raise InvalidInput("identically vanishing monodromy is not a Special family")
        f = _fs(self.chi.frob_value)
        if f.is_zero():
            raise InvalidInput("the twist character must not vanish")

    @property
    def l(self) -> int:
        return self.chi.l

    def conductor(self) -> int:
        return self.chi.conductor


@dataclass(eq=False)
class SCTwistFamily:
    """Fixed abstract irreducible twisted by a varying unramified character."""

    label: str
    central_char: Quasicharacter
    hecke_matrices: dict
    twist_frob: FamilyScalar

    def __post_init__(self):
        self.twist_frob = _fs(self.twist_frob)
        if self.twist_frob.is_zero():
            raise InvalidInput("the twist Frobenius value must not vanish identically")

    @property
    def l(self) -> int:
        return self.central_char.l

    def conductor(self) -> int:
        return self.central_char.conductor


def specialize(fam, t0) -> WDRep:
    """The pointwise Weil-Deligne representation at T = t0.

    Poles of the family data surface as PoleAtPoint; a specialization
    that would degenerate a character value to zero is rejected.
    """
    if isinstance(fam, PSFamily):
        s0 = fam.sum.eval(t0)
        p0 = fam.product.eval(t0)
        if p0.is_zero():
            raise InvalidInput(f"Frobenius product vanishes at T = {t0}")
        m, units = _unit_data(fam.unit_part)
        th = QuadExt.theta(s0, p0)
        chi1 = Quasicharacter(fam.l, m, units, th)
        chi2 = Quasicharacter(fam.l, m, units, s0 - th)
        return WDRep.split(chi1, chi2, 0)
    if isinstance(fam, SpecialFamily):
        f0 = _fs(fam.chi.frob_value).eval(t0)
        if f0.is_zero():
            raise InvalidInput(f"character value vanishes at T = {t0}")
        chi0 = Quasicharacter(fam.l, fam.chi.conductor, fam.chi.unit_images, f0)
        n0 = fam.n_poly.eval(t0)
        if n0.is_zero():
            chi2 = chi0 * Quasicharacter.norm(fam.l).inverse()
            return WDRep.split(chi0, chi2, 0)
        return WDRep.special(chi0, n0)
    if isinstance(fam, SCTwistFamily):
        tw0 = fam.twist_frob.eval(t0)
        if tw0.is_zero():
            raise InvalidInput(f"twist value vanishes at T = {t0}")
        return WDRep.abstract_irred(
            fam.label, fam.central_char, fam.hecke_matrices,
            Quasicharacter.unramified(fam.l, tw0))
    raise InvalidInput(f"not a family: {type(fam).__name__}")


def _family_model(fam, n: int):
    """Generic-fiber smooth model over the family ring, tate-normalized."""
    if isinstance(fam, PSFamily):
        m, units = _unit_data(fam.unit_part)
        th = QuadExt.theta(fam.sum, fam.product)
        chi1 = Quasicharacter(fam.l, m, units, th)
        chi2 = Quasicharacter(fam.l, m, units, fam.sum - th)
        half = Quasicharacter.abs_power_half(fam.l, 1)
        return InducedModel(chi1 * half, chi2 * half, n)
    if isinstance(fam, SpecialFamily):
        chi = Quasicharacter(fam.l, fam.chi.conductor, fam.chi.unit_images,
                             _fs(fam.chi.frob_value))
        return SteinbergModel(chi, n)
    if isinstance(fam, SCTwistFamily):
        tw = Quasicharacter.unramified(fam.l, fam.twist_frob)
        return AbstractModel(fam.l, n, fam.hecke_matrices, tw)
    raise InvalidInput(f"not a family: {type(fam).__name__}")


def tr_lan_family(fam, h: HeckeElement) -> FamilyScalar:
    """Trace of h on the generic fiber, descended to the base family ring.

    For the principal-series shape the matrix entries live in the formal
    quadratic extension by a Frobenius root; the trace is symmetric in
    the two roots and in_base certifies the descent.
    """
    model = _family_model(fam, h.U.n)
    tr = model.trace(h)
    if isinstance(tr, QuadExt):
        tr = tr.in_base()
    return _fs(tr)


def _poly_roots(poly: FamilyPoly, l: int):
    """Roots in the scalar tower for degree <= 2; None past that.

    Returns (roots, resolved): resolved is False when the polynomial has
    irrational roots outside the tower (or degree > 2), in which case
    callers report the polynomial itself.
    """
    d = poly.degree()
    if d <= 0:
        return [], True
    if d == 1:
        c0, c1 = poly.coeffs
        return [-c0 / c1], True
    if d == 2:
        c0, c1, c2 = poly.coeffs
        disc = c1 * c1 - c0 * c2 * 4
        if disc.is_zero():
            return [-c1 / (c2 * 2)], True
        if disc.is_rational():
            r = scalar_sqrt(disc, sqrt_prime=l)
            if r is not None:
                inv = (c2 * 2).inverse()
                return [(-c1 + r) * inv, (-c1 - r) * inv], True
        return [], False
    return [], False


def bad_points(fam):
    """Points where the family leaves its generic behavior, with tags.

    PS: the Satake ratio hits l^{+-1}, cut out by l*sum^2 = (l+1)^2*product.
    Special: the monodromy scale vanishes.  SCTwist: never.  Entries are
    {"point": scalar, "tag": ...}; when a root is not expressible in the
    scalar tower the defining polynomial is reported instead.
    """
    if isinstance(fam, SCTwistFamily):
        return []
    if isinstance(fam, SpecialFamily):
        tag = "monodromy-vanishes"
        poly = fam.n_poly
    else:
        tag = "satake-ratio-l"
        cond = fam.sum * fam.sum * fam.l - fam.product * (fam.l + 1) ** 2
        if cond.is_zero():
            return [{"tag": tag + "-everywhere"}]
        poly = cond.num
    roots, resolved = _poly_roots(poly, fam.l)
    out = [{"point": r, "tag": tag} for r in roots]
    if not resolved:
        out.append({"poly": poly, "tag": tag + "-implicit"})
    return out


def is_bad_point(fam, t0) -> bool:
    if isinstance(fam, SCTwistFamily):
        return False
    if isinstance(fam, SpecialFamily):
        return fam.n_poly.eval(t0).is_zero()
    try:
        s0 = fam.sum.eval(t0)
        p0 = fam.product.eval(t0)
    except PoleAtPoint:
        return False
    return bool(s0 * s0 * fam.l == p0 * (fam.l + 1) ** 2)


def _descend(x):
    if isinstance(x, QuadExt):
        return x.in_base()
    if isinstance(x, (int, Fraction)):
        return CycScalar.coerce(x)
    return x


def _structural_report(fam, sigma0, h, value_f):
    """At a degenerate point the trace splits over the two constituents.

    The full induced space of the modified descriptor carries the sum of
    the Steinberg-constituent trace and the one-dimensional one; a PS
    family's trace follows the full space, a Special family's trace the
    Steinberg submodule (Thm-A shape of the check).
    """
    n = h.U.n
    desc_m = ll_map(sigma0, "modified")
    full = _descend(desc_m.model(n).trace(h))
    xi = ll_map(sigma0, "tate").chi
    one = _descend(OneDimModel(xi, n).trace(h))
    st = _descend(SteinbergModel(xi, n).trace(h))
    additivity = bool(full == st + one)
    if isinstance(fam, SpecialFamily):
        structural = bool(value_f == st) and additivity
        side = "steinberg-sub"
    else:
        structural = bool(value_f == full) and additivity
        side = "full-induced"
    return {
        "status": "bad-structural",
        "family_value": value_f,
        "full_trace": full,
        "steinberg_trace": st,
        "one_dim_trace": one,
        "family_side": side,
        "structural_ok": structural,
    }


def check_specialization(fam, h: HeckeElement, sample_points, external=None):
    """Specialize-then-trace against evaluate-the-family-trace, pointwise.

    Good points must match exactly; poles are reported as such; at bad
    points the structural sub/quotient statement is checked instead.
    external, when given, is a list of (point, value) pairs from an
    outside source; enough agreements force polynomial identity, which
    is recorded rather than re-derived.
    """
    fam_tr = tr_lan_family(fam, h)
    report = {"family_trace": fam_tr, "points": [], "external": [], "ok": True}
    for t0 in sample_points:
        entry = {"t0": t0}
        try:
            value_f = fam_tr.eval(t0)
        except PoleAtPoint:
            entry["status"] = "pole"
            report["points"].append(entry)
            continue
        try:
            sigma0 = specialize(fam, t0)
        except (PoleAtPoint, InvalidInput) as err:
            entry["status"] = "pole"
            entry["detail"] = str(err)
            report["points"].append(entry)
            continue
        if is_bad_point(fam, t0):
            entry.update(_structural_report(fam, sigma0, h, value_f))
            report["ok"] = report["ok"] and entry["structural_ok"]
            report["points"].append(entry)
            continue
        model = ll_map(sigma0, "tate").model(h.U.n)
        value_p = _descend(model.trace(h))
        same = bool(value_p == value_f)
        entry["status"] = "match" if same else "mismatch"
        if not same:
            entry["family_value"] = value_f
            entry["pointwise_value"] = value_p
            report["ok"] = False
        report["points"].append(entry)
    if external:
        matches = 0
        for t0, want in external:
            try:
                got = fam_tr.eval(t0)
            except PoleAtPoint:
                report["external"].append({"t0": t0, "status": "pole"})
                continue
            same = bool(got == want)
            matches += same
            report["external"].append(
                {"t0": t0, "status": "match" if same else "mismatch"})
            report["ok"] = report["ok"] and same
        deg = fam_tr.num.degree() if fam_tr.is_polynomial() else None
        report["identity_forced"] = deg is not None and matches > deg
    return report
