"""JSON codecs and literal parsers for every domain type.

Conventions: rationals are [num, den] pairs (never floats), matrices
over Q are "a,b;c,d" strings in flags and nested arrays in JSON, coset
residues are compact strings, and reports are emitted with sorted keys
so identical inputs give byte-identical output.  Loading always
revalidates: a Hecke term is canonicalized through the double-coset
key machinery rather than trusted.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction

from .errors import InvalidInput
from .family_ring import FamilyPoly, FamilyScalar
from .gl2 import LevelGroup, MatQ, ResidueMat, _rep_from_tag, double_coset_key
from .padic import PadicMat, PadicTrunc
from .qexp import CuspLabel, QExpansion
from .scalars import CycScalar, QuadExt
from .smooth_reps import HeckeElement
from .weil_deligne import ContinuousLocalRep, ExtractedWD, Quasicharacter, WDRep


# -- rationals ---------------------------------------------------------

def frac_to_json(x) -> list:
    x = Fraction(x)
    return [x.numerator, x.denominator]


def frac_from_json(v, field: str = "rational") -> Fraction:
    if isinstance(v, bool):
        raise InvalidInput(f"{field}: booleans are not numbers")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v)
        except (ValueError, ZeroDivisionError):
            raise InvalidInput(f"{field}: bad rational literal {v!r}") from None
    if (isinstance(v, list) and len(v) == 2
            and all(isinstance(t, int) and not isinstance(t, bool) for t in v)):
        if v[1] == 0:
            raise InvalidInput(f"{field}: zero denominator")
        return Fraction(v[0], v[1])
    raise InvalidInput(f"{field}: expected [num, den], got {v!r}")


def _frac_list(xs) -> list:
    return [frac_to_json(x) for x in xs]


# -- scalars -----------------------------------------------------------

def scalar_to_json(x):
    """CycScalar / FamilyScalar / rational -> JSON value.

    Rationals collapse to [num, den]; a cyclotomic (or sqrt-carrying)
    value keeps its full coordinate form; family-ring values are emitted
    as polynomial literals when possible.
    """
    if isinstance(x, (int, Fraction)):
        return frac_to_json(x)
    if isinstance(x, CycScalar):
        if x.is_rational():
            return frac_to_json(x.as_fraction())
        out = {"conductor": x.conductor, "coeffs": _frac_list(x.re)}
        if x.sqrt_prime is not None:
            out["sqrt_l_coeffs"] = _frac_list(x.im)
            out["sqrt_prime"] = x.sqrt_prime
        return out
    if isinstance(x, FamilyPoly):
        x = FamilyScalar(x)
    if isinstance(x, FamilyScalar):
        return family_scalar_to_json(x)
    if isinstance(x, QuadExt):
        return {"a": scalar_to_json(x.a), "b": scalar_to_json(x.b),
                "min_poly": {"sum": scalar_to_json(x.s),
                             "product": scalar_to_json(x.pr)}}
    raise InvalidInput(f"scalar: cannot serialize {type(x).__name__}")


def scalar_from_json(v, field: str = "scalar") -> CycScalar:
    if isinstance(v, (int, str)) or (isinstance(v, list) and len(v) == 2):
        return CycScalar.from_rational(frac_from_json(v, field))
    if isinstance(v, dict) and "conductor" in v:
        m = v["conductor"]
        if not isinstance(m, int) or m < 1:
            raise InvalidInput(f"{field}.conductor: need a positive integer")
        re_ = [frac_from_json(t, f"{field}.coeffs") for t in v.get("coeffs", [])]
        im = [frac_from_json(t, f"{field}.sqrt_l_coeffs")
              for t in v.get("sqrt_l_coeffs", [])]
        sp = v.get("sqrt_prime")
        if any(im) and sp is None:
            raise InvalidInput(f"{field}.sqrt_prime: required with sqrt_l_coeffs")
        return CycScalar(m, tuple(re_), tuple(im), sqrt_prime=sp)
    raise InvalidInput(f"{field}: unrecognized scalar {v!r}")


def value_from_json(v, field: str = "value"):
    """Scalar loader that also admits family literals and formal roots."""
    if isinstance(v, str) and re.search(r"[T()]", v):
        return family_scalar_from_json(v, field)
    if isinstance(v, dict) and ("num" in v or "poly" in v):
        return family_scalar_from_json(v, field)
    if isinstance(v, dict) and "min_poly" in v:
        mp = v["min_poly"]
        if not isinstance(mp, dict) or "sum" not in mp or "product" not in mp:
            raise InvalidInput(f"{field}.min_poly: needs sum and product")
        return QuadExt(value_from_json(v.get("a", 0), f"{field}.a"),
                       value_from_json(v.get("b", 0), f"{field}.b"),
                       value_from_json(mp["sum"], f"{field}.min_poly.sum"),
                       value_from_json(mp["product"], f"{field}.min_poly.product"))
    return scalar_from_json(v, field)


# -- polynomial literals ----------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([T^*/+()-]))")


def poly_literal(p: FamilyPoly) -> str:
    """Canonical descending-order literal, rational coefficients only."""
    if p.is_zero():
        return "0"
    parts = []
    for i in range(p.degree(), -1, -1):
        c = p.coeffs[i] if i < len(p.coeffs) else CycScalar.zero()
        if c.is_zero():
            continue
        if not c.is_rational():
            raise InvalidInput("polynomial literal needs rational coefficients")
        c = c.as_fraction()
        sign = "-" if c < 0 else "+"
        c = abs(c)
        if i == 0:
            body = str(c)
        else:
            var = "T" if i == 1 else f"T^{i}"
            body = var if c == 1 else f"{c}*{var}"
        if not parts:
            parts.append(body if sign == "+" else "-" + body)
        else:
            parts.append(f" {sign} {body}")
    return "".join(parts)


class _PolyParser:
    """Recursive-descent parser for sums of c, c*T^k, T^k terms."""

    def __init__(self, text: str, field: str):
        self.field = field
        self.toks = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None:
                if text[pos:].strip():
                    raise InvalidInput(
                        f"{field}: bad character {text[pos:].strip()[0]!r}")
                break
            self.toks.append(m.group(1) or m.group(2))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, want=None):
        t = self.peek()
        if t is None or (want is not None and t != want):
            raise InvalidInput(f"{self.field}: expected {want or 'a term'}, "
                               f"got {t!r}")
        self.i += 1
        return t

    def number(self) -> Fraction:
        n = Fraction(int(self.take()))
        if self.peek() == "/":
            self.take("/")
            d = int(self.take())
            if d == 0:
                raise InvalidInput(f"{self.field}: zero denominator")
            n /= d
        return n

    def tpower(self) -> FamilyPoly:
        self.take("T")
        if self.peek() == "^":
            self.take("^")
            return FamilyPoly.gen() ** int(self.take())
        return FamilyPoly.gen()

    def term(self) -> FamilyPoly:
        if self.peek() == "T":
            return self.tpower()
        c = self.number()
        if self.peek() == "*":
            self.take("*")
            return self.tpower() * c
        return FamilyPoly.const(c)

    def parse(self) -> FamilyPoly:
        sign = 1
        if self.peek() == "-":
            self.take("-")
            sign = -1
        elif self.peek() == "+":
            self.take("+")
        out = self.term() * sign
        while self.peek() in ("+", "-"):
            sign = 1 if self.take() == "+" else -1
            out = out + self.term() * sign
        if self.peek() is not None:
            raise InvalidInput(f"{self.field}: trailing {self.peek()!r}")
        return out


def parse_poly(text: str, field: str = "poly") -> FamilyPoly:
    if not isinstance(text, str) or not text.strip():
        raise InvalidInput(f"{field}: expected a polynomial literal")
    return _PolyParser(text, field).parse()


def family_scalar_to_json(x: FamilyScalar):
    if x.is_polynomial():
        return poly_literal(x.num)
    return {"num": poly_literal(x.num), "den": poly_literal(x.den)}


def family_scalar_from_json(v, field: str = "value") -> FamilyScalar:
    if isinstance(v, str):
        return FamilyScalar(parse_poly(v, field))
    if isinstance(v, dict) and "num" in v:
        num = parse_poly(v["num"], f"{field}.num")
        den = parse_poly(v.get("den", "1"), f"{field}.den")
        if den.is_zero():
            raise InvalidInput(f"{field}.den: zero denominator")
        return FamilyScalar(num, den)
    raise InvalidInput(f"{field}: unrecognized family value {v!r}")


# -- matrices over Q ---------------------------------------------------

def mat_to_json(m: MatQ) -> list:
    a, b, c, d = m.e
    return [[frac_to_json(a), frac_to_json(b)],
            [frac_to_json(c), frac_to_json(d)]]


def mat_from_json(v, field: str = "matrix") -> MatQ:
    if isinstance(v, str):
        try:
            return MatQ.from_string(v)
        except (InvalidInput, ValueError, ZeroDivisionError) as err:
            raise InvalidInput(f"{field}: {err}") from None
    if (isinstance(v, list) and len(v) == 2
            and all(isinstance(r, list) and len(r) == 2 for r in v)):
        return MatQ(*(frac_from_json(t, field) for r in v for t in r))
    raise InvalidInput(f"{field}: expected \"a,b;c,d\" or nested arrays")


# -- q-expansions ------------------------------------------------------

def qexp_to_json(f: QExpansion) -> dict:
    coeffs = []
    for e, c in f.terms():
        coeffs.append([e.numerator, e.denominator, scalar_to_json(c)])
    return {"N": f.lattice_den(), "prec": frac_to_json(f.prec),
            "coeffs": coeffs}


def qexp_from_json(v, field: str = "qexp") -> QExpansion:
    if not isinstance(v, dict) or "prec" not in v:
        raise InvalidInput(f"{field}: expected an object with prec and coeffs")
    prec = frac_from_json(v["prec"], f"{field}.prec")
    coeffs = {}
    for i, row in enumerate(v.get("coeffs", [])):
        if not (isinstance(row, list) and len(row) == 3):
            raise InvalidInput(f"{field}.coeffs[{i}]: expected [e_num, e_den, c]")
        en, ed, c = row
        e = frac_from_json([en, ed] if not isinstance(en, list) else en,
                           f"{field}.coeffs[{i}]")
        coeffs[e] = scalar_from_json(c, f"{field}.coeffs[{i}]")
    f = QExpansion(coeffs, prec)
    if "N" in v and v["N"] != f.lattice_den():
        raise InvalidInput(f"{field}.N: {v['N']} does not match the "
                           f"exponent lattice {f.lattice_den()}")
    return f


# -- quasicharacters ---------------------------------------------------

def char_to_json(chi: Quasicharacter) -> dict:
    return {"l": chi.l, "conductor": chi.conductor,
            "unit_images": [scalar_to_json(u) for u in chi.unit_images],
            "frob": scalar_to_json(chi.frob_value)}


def char_from_json(v, field: str = "char") -> Quasicharacter:
    if not isinstance(v, dict) or "l" not in v or "frob" not in v:
        raise InvalidInput(f"{field}: expected an object with l and frob")
    l = v["l"]
    if not isinstance(l, int) or l < 2:
        raise InvalidInput(f"{field}.l: need a prime >= 2")
    m = v.get("conductor", 0)
    units = [scalar_from_json(u, f"{field}.unit_images")
             for u in v.get("unit_images", [])]
    frob = value_from_json(v["frob"], f"{field}.frob")
    try:
        return Quasicharacter(l, m, units, frob)
    except (InvalidInput, ValueError) as err:
        raise InvalidInput(f"{field}: {err}") from None


# -- coset residue tags ------------------------------------------------

def tag_to_string(tag) -> str:
    alpha, gamma, bn, bd, kbar = tag
    head = f"{alpha},{gamma},{bn},{bd}"
    if kbar:
        return head + "|" + ",".join(str(t) for t in kbar)
    return head


def tag_from_string(s: str, field: str = "residue"):
    if not isinstance(s, str):
        raise InvalidInput(f"{field}: expected a string tag")
    head, _, tail = s.partition("|")
    try:
        alpha, gamma, bn, bd = (int(t) for t in head.split(","))
        kbar = tuple(int(t) for t in tail.split(",")) if tail else ()
    except ValueError:
        raise InvalidInput(f"{field}: bad tag {s!r}") from None
    if kbar and len(kbar) != 4:
        raise InvalidInput(f"{field}: residue part needs 4 entries")
    return (alpha, gamma, bn, bd, kbar)


def _term_key_from_json(entry, U: LevelGroup, field: str):
    """Rebuild and revalidate one (cartan, residue) pair into a key."""
    cart = entry.get("cartan")
    if not (isinstance(cart, list) and len(cart) == 2
            and all(isinstance(t, int) for t in cart)):
        raise InvalidInput(f"{field}.cartan: expected [a, b]")
    a, b = cart
    if a < b:
        raise InvalidInput(f"{field}.cartan: need a >= b")
    tag = tag_from_string(entry.get("residue", ""), f"{field}.residue")
    if len(tag[4]) != (4 if U.n else 0):
        raise InvalidInput(f"{field}.residue: tag is for the wrong level")
    z, e = b, a - b
    if tag[0] + tag[1] != e:
        raise InvalidInput(f"{field}: cartan {cart} does not match the tag")
    g = Fraction(U.l) ** z * _rep_from_tag(tag, U.l, U.n)
    key = double_coset_key(g, U)
    if key[:2] != (z, e):
        raise InvalidInput(f"{field}: tag lies in a different double coset")
    return key


# -- Hecke elements ----------------------------------------------------

def hecke_to_json(h: HeckeElement) -> dict:
    terms = []
    for key in sorted(h.terms):
        z, e, tag = key
        terms.append({"cartan": [z + e, z], "residue": tag_to_string(tag),
                      "coeff": scalar_to_json(h.terms[key])})
    return {"l": h.U.l, "level": h.U.n, "terms": terms}


def hecke_from_json(v, field: str = "hecke") -> HeckeElement:
    if not isinstance(v, dict) or "l" not in v:
        raise InvalidInput(f"{field}: expected an object with l, level, terms")
    l, n = v["l"], v.get("level", 0)
    if not isinstance(l, int) or not isinstance(n, int):
        raise InvalidInput(f"{field}: l and level must be integers")
    U = LevelGroup(l, n)
    terms = {}
    for i, entry in enumerate(v.get("terms", [])):
        if not isinstance(entry, dict):
            raise InvalidInput(f"{field}.terms[{i}]: expected an object")
        key = _term_key_from_json(entry, U, f"{field}.terms[{i}]")
        c = scalar_from_json(entry.get("coeff", 1), f"{field}.terms[{i}].coeff")
        terms[key] = terms.get(key, CycScalar.zero()) + c
    return HeckeElement(U, terms)


def _matrix_rows_to_json(rows) -> list:
    return [[scalar_to_json(x) for x in row] for row in rows]


def _matrix_rows_from_json(v, field: str):
    if not (isinstance(v, list) and v and all(isinstance(r, list) for r in v)):
        raise InvalidInput(f"{field}: expected a nonempty nested array")
    rows = [[scalar_from_json(x, field) for x in r] for r in v]
    if any(len(r) != len(rows) for r in rows):
        raise InvalidInput(f"{field}: matrix must be square")
    return [tuple(r) for r in rows]


def hecke_matrices_to_json(mats: dict) -> list:
    out = []
    for key in sorted(mats):
        z, e, tag = key
        out.append({"cartan": [z + e, z], "residue": tag_to_string(tag),
                    "matrix": _matrix_rows_to_json(mats[key])})
    return out


def hecke_matrices_from_json(v, U: LevelGroup, field: str = "matrices") -> dict:
    if not isinstance(v, list):
        raise InvalidInput(f"{field}: expected a list of matrix entries")
    out = {}
    for i, entry in enumerate(v):
        if not isinstance(entry, dict):
            raise InvalidInput(f"{field}[{i}]: expected an object")
        key = _term_key_from_json(entry, U, f"{field}[{i}]")
        out[key] = _matrix_rows_from_json(entry.get("matrix"),
                                          f"{field}[{i}].matrix")
    return out


def infer_matrix_level(mats: dict, l: int) -> int:
    """Smallest level at which every stored key is its own canonical key.

    Certified-matrix dictionaries carry their level only implicitly,
    through the residue parts of the keys; recover it by checking
    self-canonicity, smallest level first.
    """
    if all(not key[2][4] for key in mats):
        return 0
    floor = 1
    for key in mats:
        kbar = key[2][4]
        if kbar:
            while l ** floor <= max(kbar):
                floor += 1
    for n in range(floor, floor + 4):
        U = LevelGroup(l, n)
        good = True
        for key in mats:
            z, _, tag = key
            if len(tag[4]) != 4:
                raise InvalidInput("matrices mix levels 0 and >= 1")
            g = Fraction(l) ** z * _rep_from_tag(tag, l, n)
            if double_coset_key(g, U) != key:
                good = False
                break
        if good:
            return n
    raise InvalidInput("matrix keys are canonical at no level <= "
                       f"{floor + 3}")


# -- Weil-Deligne representations -------------------------------------

def wd_to_json(sigma: WDRep) -> dict:
    if sigma.variant == "split":
        return {"variant": "split",
                "chi1": char_to_json(sigma.chi1),
                "chi2": char_to_json(sigma.chi2),
                "n_scale": scalar_to_json(sigma.n_scale)}
    return {"variant": "abstract", "label": sigma.label,
            "level": infer_matrix_level(sigma.hecke_matrices, sigma.l),
            "central_char": char_to_json(sigma.central_char),
            "twist": char_to_json(sigma.unramified_twist),
            "matrices": hecke_matrices_to_json(sigma.hecke_matrices)}


def wd_from_json(v, field: str = "wd") -> WDRep:
    if not isinstance(v, dict) or "variant" not in v:
        raise InvalidInput(f"{field}.variant: required")
    variant = v["variant"]
    if variant == "split":
        if "sum" in v or "product" in v:
            # symmetric shorthand: unramified pair given by its
            # Frobenius symmetric functions
            for need in ("l", "sum", "product"):
                if need not in v:
                    raise InvalidInput(f"{field}.{need}: required with sum/product")
            l = v["l"]
            if not isinstance(l, int) or l < 2:
                raise InvalidInput(f"{field}.l: need a prime >= 2")
            s = scalar_from_json(v["sum"], f"{field}.sum")
            pr = scalar_from_json(v["product"], f"{field}.product")
            if pr.is_zero():
                raise InvalidInput(f"{field}.product: must be nonzero")
            th = QuadExt.theta(s, pr)
            chi1 = Quasicharacter.unramified(l, th)
            chi2 = Quasicharacter.unramified(l, s - th)
        else:
            for need in ("chi1", "chi2"):
                if need not in v:
                    raise InvalidInput(f"{field}.{need}: required for split")
            chi1 = char_from_json(v["chi1"], f"{field}.chi1")
            chi2 = char_from_json(v["chi2"], f"{field}.chi2")
        n = scalar_from_json(v.get("n_scale", 0), f"{field}.n_scale")
        return WDRep.split(chi1, chi2, n)
    if variant == "abstract":
        if "label" not in v or "central_char" not in v:
            raise InvalidInput(f"{field}: abstract needs label and central_char")
        cc = char_from_json(v["central_char"], f"{field}.central_char")
        tw = (char_from_json(v["twist"], f"{field}.twist")
              if "twist" in v else None)
        level = v.get("level", 0)
        if not isinstance(level, int) or level < 0:
            raise InvalidInput(f"{field}.level: need an integer >= 0")
        mats = hecke_matrices_from_json(v.get("matrices", []),
                                        LevelGroup(cc.l, level),
                                        f"{field}.matrices")
        return WDRep.abstract_irred(str(v["label"]), cc, mats, tw)
    raise InvalidInput(f"{field}.variant: unknown {variant!r}")


# -- p-adic data -------------------------------------------------------

def padic_to_json(x: PadicTrunc) -> dict:
    return {"p": x.p, "prec": x.prec, "residue": x.residue}


def padic_from_json(v, field: str = "padic") -> PadicTrunc:
    if not (isinstance(v, dict) and all(k in v for k in ("p", "prec", "residue"))):
        raise InvalidInput(f"{field}: expected {{p, prec, residue}}")
    p, prec, r = v["p"], v["prec"], v["residue"]
    if not all(isinstance(t, int) for t in (p, prec, r)) or p < 2 or prec < 1:
        raise InvalidInput(f"{field}: p, prec, residue must be integers "
                           "with p >= 2 and prec >= 1")
    return PadicTrunc(p, prec, r)


def padic_mat_to_json(m: PadicMat) -> dict:
    a, b, c, d = m.e
    return {"p": m.p,
            "entries": [[padic_to_json(a), padic_to_json(b)],
                        [padic_to_json(c), padic_to_json(d)]]}


def padic_mat_from_json(v, field: str = "padic matrix") -> PadicMat:
    if not (isinstance(v, dict) and "entries" in v):
        raise InvalidInput(f"{field}: expected {{p, entries}}")
    rows = v["entries"]
    if not (isinstance(rows, list) and len(rows) == 2
            and all(isinstance(r, list) and len(r) == 2 for r in rows)):
        raise InvalidInput(f"{field}.entries: expected 2x2 nested arrays")
    es = [padic_from_json(t, f"{field}.entries") for r in rows for t in r]
    p = v.get("p", es[0].p)
    if any(t.p != p for t in es):
        raise InvalidInput(f"{field}: mixed primes in one matrix")
    return PadicMat(p, es)


def continuous_to_json(rho: ContinuousLocalRep) -> dict:
    return {"l": rho.l, "phi": padic_mat_to_json(rho.phi),
            "alpha": padic_mat_to_json(rho.alpha),
            "c": padic_to_json(rho.c)}


def continuous_from_json(v, field: str = "rep") -> ContinuousLocalRep:
    if not (isinstance(v, dict) and all(k in v for k in ("l", "phi", "alpha"))):
        raise InvalidInput(f"{field}: expected {{l, phi, alpha, c}}")
    l = v["l"]
    if not isinstance(l, int) or l < 2:
        raise InvalidInput(f"{field}.l: need a prime >= 2")
    phi = padic_mat_from_json(v["phi"], f"{field}.phi")
    alpha = padic_mat_from_json(v["alpha"], f"{field}.alpha")
    if "c" in v:
        c = padic_from_json(v["c"], f"{field}.c")
    else:
        c = PadicTrunc(phi.p, min(t.prec for t in phi.e), 1)
    try:
        return ContinuousLocalRep(l, phi, alpha, c)
    except ValueError as err:
        raise InvalidInput(f"{field}: {err}") from None


def extracted_to_json(out: ExtractedWD) -> dict:
    return {"l": out.l, "phi": padic_mat_to_json(out.phi),
            "N": padic_mat_to_json(out.N), "c": padic_to_json(out.c)}


# -- families ----------------------------------------------------------

def family_to_json(fam) -> dict:
    from .families import PSFamily, SCTwistFamily, SpecialFamily
    if isinstance(fam, PSFamily):
        out = {"variant": "ps", "l": fam.l,
               "sum": family_scalar_to_json(fam.sum),
               "product": family_scalar_to_json(fam.product)}
        if fam.unit_part is not None:
            out["unit_part"] = char_to_json(fam.unit_part)
        return out
    if isinstance(fam, SpecialFamily):
        return {"variant": "special", "chi": char_to_json(fam.chi),
                "n_poly": poly_literal(fam.n_poly)}
    if isinstance(fam, SCTwistFamily):
        return {"variant": "sctwist", "label": fam.label,
                "level": infer_matrix_level(fam.hecke_matrices, fam.l),
                "central_char": char_to_json(fam.central_char),
                "twist_frob": family_scalar_to_json(fam.twist_frob),
                "matrices": hecke_matrices_to_json(fam.hecke_matrices)}
    raise InvalidInput(f"family: cannot serialize {type(fam).__name__}")


def family_from_json(v, field: str = "family"):
    from .families import PSFamily, SCTwistFamily, SpecialFamily
    if not isinstance(v, dict) or "variant" not in v:
        raise InvalidInput(f"{field}.variant: required")
    variant = v["variant"]
    if variant == "ps":
        if "l" not in v or "sum" not in v or "product" not in v:
            raise InvalidInput(f"{field}: ps needs l, sum, product")
        unit = (char_from_json(v["unit_part"], f"{field}.unit_part")
                if "unit_part" in v else None)
        return PSFamily(v["l"],
                        family_scalar_from_json(v["sum"], f"{field}.sum"),
                        family_scalar_from_json(v["product"], f"{field}.product"),
                        unit)
    if variant == "special":
        if "chi" not in v or "n_poly" not in v:
            raise InvalidInput(f"{field}: special needs chi and n_poly")
        return SpecialFamily(char_from_json(v["chi"], f"{field}.chi"),
                             parse_poly(v["n_poly"], f"{field}.n_poly"))
    if variant == "sctwist":
        for need in ("label", "central_char", "twist_frob"):
            if need not in v:
                raise InvalidInput(f"{field}.{need}: required for sctwist")
        cc = char_from_json(v["central_char"], f"{field}.central_char")
        level = v.get("level", 0)
        if not isinstance(level, int) or level < 0:
            raise InvalidInput(f"{field}.level: need an integer >= 0")
        mats = hecke_matrices_from_json(v.get("matrices", []),
                                        LevelGroup(cc.l, level),
                                        f"{field}.matrices")
        return SCTwistFamily(
            str(v["label"]), cc, mats,
            family_scalar_from_json(v["twist_frob"], f"{field}.twist_frob"))
    raise InvalidInput(f"{field}.variant: unknown {variant!r}")


# -- generic report emission ------------------------------------------

def to_jsonable(x):
    """Best-effort recursive conversion for report dictionaries."""
    if x is None or isinstance(x, (bool, int, str)):
        return x
    if isinstance(x, Fraction):
        return frac_to_json(x)
    if isinstance(x, (CycScalar, FamilyScalar, FamilyPoly, QuadExt)):
        return scalar_to_json(x)
    if isinstance(x, MatQ):
        return x.to_string()
    if isinstance(x, ResidueMat):
        return x.to_string()
    if isinstance(x, QExpansion):
        return qexp_to_json(x)
    if isinstance(x, Quasicharacter):
        return char_to_json(x)
    if isinstance(x, WDRep):
        return wd_to_json(x)
    if isinstance(x, HeckeElement):
        return hecke_to_json(x)
    if isinstance(x, PadicTrunc):
        return padic_to_json(x)
    if isinstance(x, PadicMat):
        return padic_mat_to_json(x)
    if isinstance(x, ContinuousLocalRep):
        return continuous_to_json(x)
    if isinstance(x, ExtractedWD):
        return extracted_to_json(x)
    if isinstance(x, CuspLabel):
        return {"l": x.l, "A": x.A, "d": x.d}
    if isinstance(x, dict):
        return {str(k): to_jsonable(t) for k, t in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = list(x)
        if isinstance(x, (set, frozenset)):
            items = sorted(items, key=repr)
        return [to_jsonable(t) for t in items]
    from .families import PSFamily, SCTwistFamily, SpecialFamily
    if isinstance(x, (PSFamily, SpecialFamily, SCTwistFamily)):
        return family_to_json(x)
    from .langlands import LLDescriptor
    if isinstance(x, LLDescriptor):
        out = {"kind": x.kind, "normalization": x.normalization}
        for name in ("eta1", "eta2", "chi", "twist"):
            val = getattr(x, name)
            if val is not None:
                out[name] = char_to_json(val)
        if x.label is not None:
            out["label"] = x.label
        if x.flags:
            out["flags"] = dict(x.flags)
        return out
    return {"repr": repr(x)}


def dumps(obj) -> str:
    """Deterministic JSON text: sorted keys, no floats, trailing newline."""
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2,
                      allow_nan=False) + "\n"
