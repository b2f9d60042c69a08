"""From Weil-Deligne data to smooth-representation descriptors and back.

Three normalizations of the correspondence are carried as tags:
"unitary" (no shift), "tate" (both Borel characters pick up |.|^{1/2}),
and "modified", which agrees with tate except at a non-generic input,
where tate hands back the one-dimensional quotient and modified hands
back the full reducible induced space with its sub/quotient flags.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import CheckFailed, InvalidInput, NotApplicable
from .gl2 import LevelGroup
from .scalars import CycScalar, QuadExt
from .smooth_reps import (AbstractModel, HeckeElement, InducedModel,
                          OneDimModel, SteinbergModel, hecke_tl, hecke_zl)
from .weil_deligne import (PRINCIPAL_SERIES, SPECIAL, SUPERCUSPIDAL,
                           Quasicharacter, WDRep, classify, wd_from_eigenform,
                           _is_norm_ratio)

IRRED_PS = "IrredPS"
REDUCIBLE_PS = "ReduciblePS"
STEINBERG = "Steinberg"
SUPERCUSPIDAL_KIND = "Supercuspidal"
ONE_DIM = "OneDim"

NORMALIZATIONS = ("unitary", "tate", "modified")


class LLDescriptor:
    """Labeled smooth-side data: enough to instantiate a model at a level.

    eta1/eta2 are the Borel characters of principal-series kinds (with
    the half shift already folded in for tate and modified), chi the
    twist of Steinberg or the character under det for OneDim, and the
    Supercuspidal kind keeps the label plus certified matrices.
    """

    __slots__ = ("kind", "normalization", "eta1", "eta2", "chi",
                 "label", "twist", "hecke_matrices", "flags")

    def __init__(self, kind, normalization, eta1=None, eta2=None, chi=None,
                 label=None, twist=None, hecke_matrices=None, flags=None):
        if normalization not in NORMALIZATIONS:
            raise InvalidInput(f"unknown normalization {normalization!r}")
        self.kind = kind
        self.normalization = normalization
        self.eta1 = eta1
        self.eta2 = eta2
        self.chi = chi
        self.label = label
        self.twist = twist
        self.hecke_matrices = hecke_matrices
        self.flags = flags

    @property
    def l(self) -> int:
        for c in (self.eta1, self.chi, self.twist):
            if c is not None:
                return c.l
        raise InvalidInput("descriptor carries no character data")

    def model(self, n: int):
        """Concrete Hecke module at level U(l^n).

        For Supercuspidal the certified matrices must have been produced
        at this same level; nothing checks that for you.
        """
        if self.kind in (IRRED_PS, REDUCIBLE_PS):
            return InducedModel(self.eta1, self.eta2, n)
        if self.kind == STEINBERG:
            return SteinbergModel(self.chi, n)
        if self.kind == ONE_DIM:
            return OneDimModel(self.chi, n)
        if self.kind == SUPERCUSPIDAL_KIND:
            return AbstractModel(self.l, n, self.hecke_matrices or {}, self.twist)
        raise InvalidInput(f"unknown kind {self.kind!r}")

    def __repr__(self):
        return f"<{self.kind} desc, {self.normalization}>"


def _half(l: int, j: int) -> Quasicharacter:
    return Quasicharacter.abs_power_half(l, j)


def ll_map(sigma: WDRep, normalization: str = "tate") -> LLDescriptor:
    """The correspondence, dispatched on classify(sigma).

    Principal series map to the irreducibly induced pair, specials to a
    Steinberg twist, abstract irreducibles stay labeled boxes.  At a
    non-generic input the three normalizations genuinely differ: unitary
    and tate give the one-dimensional constituent, modified the full
    induced space flagged with which constituent sits where.
    """
    if normalization not in NORMALIZATIONS:
        raise InvalidInput(f"unknown normalization {normalization!r}")
    cls = classify(sigma)
    l = sigma.l
    shift = _half(l, 1) if normalization in ("tate", "modified") else None

    if cls == SUPERCUSPIDAL:
        # the certified matrices already live on the smooth side; the twist
        # slot passes through untouched under every normalization
        return LLDescriptor(SUPERCUSPIDAL_KIND, normalization, label=sigma.label,
                            twist=sigma.unramified_twist,
                            hecke_matrices=sigma.hecke_matrices)

    if cls == SPECIAL:
        # canonical storage has chi1 = chi2 * |.|; St(chi1) in tate terms
        chi = sigma.chi1
        if shift is None:
            chi = chi * _half(l, -1)
        return LLDescriptor(STEINBERG, normalization, chi=chi)

    if cls == PRINCIPAL_SERIES:
        chi1, chi2 = sigma.chi1, sigma.chi2
        e1 = chi1 * shift if shift is not None else chi1
        e2 = chi2 * shift if shift is not None else chi2
        return LLDescriptor(IRRED_PS, normalization, eta1=e1, eta2=e2)

    # non-generic: the pair is {xi, xi |.|^{-1}} on the WD side
    xi, pair, flags = _concrete_nongeneric(sigma)
    if normalization == "modified":
        return LLDescriptor(REDUCIBLE_PS, normalization,
                            eta1=pair[0] * shift, eta2=pair[1] * shift,
                            flags=flags)
    if normalization == "unitary":
        xi = xi * _half(l, -1)
    return LLDescriptor(ONE_DIM, normalization, chi=xi)


def _concrete_nongeneric(sigma: WDRep):
    """(xi, ordered character pair, constituent flags) of a non-generic input.

    Symmetric storage is resolved here: when the ratio of the pair is
    |.|^{+-1} the quadratic splits in the base ring, with the smaller
    root sum/(1+l), so concrete characters always come out.
    """
    chi1, chi2 = sigma.chi1, sigma.chi2
    if _is_norm_ratio(chi1, chi2):
        return chi1, (chi1, chi2), {"one_dim": "quotient", "steinberg": "sub"}
    if _is_norm_ratio(chi2, chi1):
        return chi2, (chi1, chi2), {"one_dim": "sub", "steinberg": "quotient"}
    l = sigma.l
    s, _ = sigma.sym_pair()
    x = s / (1 + l)
    m = max(chi1.conductor, chi2.conductor)
    units = chi1._promoted_images(m)
    xi = Quasicharacter(l, m, units, x)
    other = Quasicharacter(l, m, units, x * l)
    return xi, (xi, other), {"one_dim": "quotient", "steinberg": "sub"}


def twist_descriptor(desc: LLDescriptor, eta: Quasicharacter) -> LLDescriptor:
    """Descriptor of the correspondence applied to the eta-twisted input."""
    if not eta.is_unramified():
        raise NotApplicable("only unramified twists are tracked on descriptors")
    if desc.kind in (IRRED_PS, REDUCIBLE_PS):
        return LLDescriptor(desc.kind, desc.normalization,
                            eta1=desc.eta1 * eta, eta2=desc.eta2 * eta,
                            flags=desc.flags)
    if desc.kind in (STEINBERG, ONE_DIM):
        return LLDescriptor(desc.kind, desc.normalization, chi=desc.chi * eta)
    return LLDescriptor(desc.kind, desc.normalization, label=desc.label,
                        twist=desc.twist * eta, hecke_matrices=desc.hecke_matrices)


def _descend(x):
    if isinstance(x, QuadExt):
        return x.in_base()
    return x


def satake(desc: LLDescriptor):
    """Symmetric functions of the unramified Satake pair on the WD side.

    Unshifts the |.|^{1/2} for tate/modified descriptors, so the report
    is in the same coordinates wd_from_eigenform produces: sum and
    product of the two Frobenius values, plus the degeneracy flag for
    ratio l^{+-1}.
    """
    if desc.kind not in (IRRED_PS, REDUCIBLE_PS):
        raise NotApplicable("Satake parameters only for principal-series kinds")
    if not (desc.eta1.is_unramified() and desc.eta2.is_unramified()):
        raise NotApplicable("Satake parameters need unramified characters")
    l = desc.l
    back = _half(l, -1) if desc.normalization in ("tate", "modified") else None
    c1 = desc.eta1 * back if back is not None else desc.eta1
    c2 = desc.eta2 * back if back is not None else desc.eta2
    f1, f2 = c1.frob_value, c2.frob_value
    s = _descend(f1 + f2)
    pr = _descend(f1 * f2)
    lhs = s * s * l
    rhs = pr * (l + 1) ** 2
    return {"sum": s, "product": pr, "degenerate": bool(lhs == rhs)}


def compat_check(l: int, a_l, chi_l, k: int, ops=("T", "Z"),
                 paper_sign: bool = False):
    """Spherical trace check for unramified eigenform data at l.

    Builds the split Weil-Deligne representation from (a_l, chi_l, k),
    maps it through the tate normalization, and compares traces on the
    level-one model: T_l against a_l and Z_l against chi_l * l^(k-2).
    Returns a report with both sides of every assertion; "ok" is the
    conjunction.
    """
    sigma = wd_from_eigenform(l, a_l, chi_l, k, paper_sign=paper_sign)
    desc = ll_map(sigma, "tate")
    model = desc.model(0)
    U = LevelGroup(l, 0)
    report = {"l": l, "k": k, "a_l": Fraction(a_l), "chi_l": Fraction(chi_l),
              "normalization": "tate", "paper_sign": paper_sign,
              "traces": {}, "assertions": []}
    ok = True
    for op in ops:
        if isinstance(op, HeckeElement):
            name, h = f"h{len(report['traces'])}", op
        elif op == "T":
            name, h = "T", hecke_tl(U)
        elif op == "Z":
            name, h = "Z", hecke_zl(U)
        else:
            raise InvalidInput(f"unknown operator name {op!r}")
        tr = _descend(model.trace(h))
        report["traces"][name] = tr
        expect = None
        if name == "T":
            expect = CycScalar.coerce(Fraction(a_l))
        elif name == "Z":
            expect = CycScalar.coerce(Fraction(chi_l) * Fraction(l) ** (k - 2))
        if expect is not None:
            good = bool(CycScalar.coerce(tr) == expect)
            ok = ok and good
            report["assertions"].append(
                {"name": f"trace({name}_{l})", "lhs": tr, "rhs": expect, "pass": good})
    report["ok"] = ok
    return report


def require_compat(report) -> None:
    """Raise CheckFailed with both sides if any assertion in the report failed."""
    if not report["ok"]:
        bad = [a for a in report["assertions"] if not a["pass"]]
        msgs = "; ".join(f"{a['name']}: {a['lhs']!r} != {a['rhs']!r}" for a in bad)
        raise CheckFailed(f"compatibility failed: {msgs}")
