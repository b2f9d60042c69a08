"""Command-line front end: every operation behind one `llgl2` binary.

All reports are JSON with sorted keys, so a command is byte-identical
across runs given the same flags, inputs, and --seed.  Exit codes:
0 success, 1 invalid input, 2 mathematical precondition violated,
3 a check or assertion failed.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import serialize as ser
from .errors import CheckFailed, InvalidInput, MathDomainError
from .families import bad_points, check_specialization, specialize, tr_lan_family
from .gl2 import (LevelGroup, cartan_decompose, coset_reps, double_coset_key,
                  iwasawa_decompose, reduce_to_standard_upper)
from .langlands import compat_check, ll_map
from .qexp import (CuspLabel, adelic_action_qexp, check_cocycle,
                   check_up_commutation, eisenstein_pdeprived, twist_ratio_qexp)
from .smooth_reps import (AbstractModel, InducedModel, OneDimModel,
                          SteinbergModel, hecke_identity, hecke_tl, hecke_zl)
from .weil_deligne import classify, monodromy_extract, wd_from_eigenform, \
    wd_to_continuous


# -- plumbing ----------------------------------------------------------

def _read_json(spec: str, field: str):
    """Inline JSON (text starting with '{') or a file path."""
    text = spec
    if not spec.lstrip().startswith("{"):
        try:
            with open(spec, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as err:
            raise InvalidInput(f"{field}: cannot read {spec!r}: {err}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as err:
        raise InvalidInput(f"{field}: not valid JSON ({err})") from None


def _fraction(text: str, field: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InvalidInput(f"{field}: bad rational literal {text!r}") from None


def _cusp(args, l: int) -> CuspLabel:
    return CuspLabel(l, args.cusp, args.cusp_res)


def _op_element(name: str, U: LevelGroup):
    if name in ("T", "T_l"):
        return hecke_tl(U)
    if name in ("Z", "Z_l"):
        return hecke_zl(U)
    if name in ("1", "id"):
        return hecke_identity(U)
    raise InvalidInput(f"op: unknown operator {name!r} (use T, Z, or 1)")


def _model_from_json(v, n: int, field: str = "model"):
    """Instantiate a smooth model at level n from its JSON description."""
    if not isinstance(v, dict) or "kind" not in v:
        raise InvalidInput(f"{field}.kind: required")
    kind = v["kind"]
    if kind == "induced":
        return InducedModel(ser.char_from_json(v.get("eta1"), f"{field}.eta1"),
                            ser.char_from_json(v.get("eta2"), f"{field}.eta2"), n)
    if kind == "steinberg":
        return SteinbergModel(ser.char_from_json(v.get("chi"), f"{field}.chi"), n)
    if kind == "onedim":
        return OneDimModel(ser.char_from_json(v.get("chi"), f"{field}.chi"), n)
    if kind == "abstract":
        l = v.get("l")
        if not isinstance(l, int) or l < 2:
            raise InvalidInput(f"{field}.l: need a prime >= 2")
        mats = ser.hecke_matrices_from_json(v.get("matrices", []),
                                            LevelGroup(l, n), f"{field}.matrices")
        tw = (ser.char_from_json(v["twist"], f"{field}.twist")
              if "twist" in v else None)
        return AbstractModel(l, n, mats, tw)
    if kind == "wd":
        sigma = ser.wd_from_json(v.get("wd"), f"{field}.wd")
        return ll_map(sigma, v.get("norm", "tate")).model(n)
    raise InvalidInput(f"{field}.kind: unknown {kind!r}")


# -- gl2 ---------------------------------------------------------------

def cmd_gl2_decompose(args):
    g = ser.mat_from_json(args.g, "--g")
    m, n, a, r, u = reduce_to_standard_upper(g, args.l)
    return {"m": m, "n": n, "a": a, "r": r, "u": u.to_string()}


def cmd_gl2_iwasawa(args):
    g = ser.mat_from_json(args.g, "--g")
    b, k = iwasawa_decompose(g, args.l)
    return {"b": b.to_string(), "k": k.to_string()}


def cmd_gl2_cartan(args):
    g = ser.mat_from_json(args.g, "--g")
    a, b, k1, k2 = cartan_decompose(g, args.l)
    return {"a": a, "b": b, "k1": k1.to_string(), "k2": k2.to_string()}


def cmd_gl2_cosets(args):
    g = ser.mat_from_json(args.g, "--g")
    U = LevelGroup(args.l, args.level)
    z, e, tag = double_coset_key(g, U)
    reps = coset_reps(g, U)
    return {"count": len(reps), "reps": [r.to_string() for r in reps],
            "key": {"cartan": [z + e, z], "residue": ser.tag_to_string(tag)}}


# -- qexp --------------------------------------------------------------

def cmd_qexp_eisenstein(args):
    prec = _fraction(args.prec, "--prec")
    return ser.qexp_to_json(eisenstein_pdeprived(args.k, args.p, prec))


def cmd_qexp_act(args):
    f = ser.qexp_from_json(_read_json(args.f, "--f"), "--f")
    g = ser.mat_from_json(args.g, "--g")
    chi_l = _fraction(args.chi_l, "--chi-l") if args.chi_l else None
    out = adelic_action_qexp(f, g, _cusp(args, args.l), args.k, chi_l)
    return ser.qexp_to_json(out)


def cmd_qexp_twist(args):
    g = ser.mat_from_json(args.g, "--g")
    prec = _fraction(args.prec, "--prec")
    out = twist_ratio_qexp(g, _cusp(args, args.l), args.k, args.p, prec)
    return ser.qexp_to_json(out)


def cmd_qexp_check_cocycle(args):
    g = ser.mat_from_json(args.g, "--g")
    h = ser.mat_from_json(args.h, "--h")
    prec = _fraction(args.prec, "--prec")
    return check_cocycle(g, h, _cusp(args, args.l), args.k, args.p, prec)


def cmd_qexp_check_up(args):
    g = ser.mat_from_json(args.g, "--g")
    prec = _fraction(args.prec, "--prec")
    return check_up_commutation(g, _cusp(args, args.l), args.k, args.p, prec)


# -- wd / monodromy ----------------------------------------------------

def cmd_wd_classify(args):
    sigma = ser.wd_from_json(_read_json(args.wd, "--wd"), "--wd")
    return {"class": classify(sigma), "l": sigma.l, "variant": sigma.variant}


def cmd_wd_from_eigenform(args):
    a_l = _fraction(args.a_l, "--a_l")
    chi_l = _fraction(args.chi_l, "--chi_l")
    sigma = wd_from_eigenform(args.l, a_l, chi_l, args.k,
                              paper_sign=args.paper_sign)
    return ser.wd_to_json(sigma)


def cmd_monodromy_extract(args):
    rep = ser.continuous_from_json(_read_json(args.rep, "--rep"), "--rep")
    return ser.extracted_to_json(monodromy_extract(rep))


def cmd_monodromy_roundtrip(args):
    sigma = ser.wd_from_json(_read_json(args.wd, "--wd"), "--wd")
    c = _fraction(args.c, "--c")
    rho = wd_to_continuous(sigma, args.p, args.prec, c)
    out = monodromy_extract(rho)
    n_rec = out.N.e[1]
    if not sigma.n_scale.is_rational():
        raise InvalidInput("--wd: roundtrip needs a rational monodromy scale")
    n_exp = sigma.n_scale.as_fraction()
    # series division in the log costs at most two digits of precision
    guaranteed = args.prec - 2
    diff = n_rec - type(n_rec).from_rational(args.p, args.prec, n_exp)
    ok = diff.val() >= guaranteed
    report = {"l": sigma.l, "p": args.p, "prec": args.prec, "c": ser.frac_to_json(c),
              "n_expected": ser.frac_to_json(n_exp),
              "n_recovered": ser.padic_to_json(n_rec),
              "agreement_valuation": diff.val(), "guaranteed": guaranteed,
              "ok": ok}
    return report


# -- hecke -------------------------------------------------------------

def cmd_hecke_convolve(args):
    h1 = ser.hecke_from_json(_read_json(args.a, "--a"), "--a")
    h2 = ser.hecke_from_json(_read_json(args.b, "--b"), "--b")
    return ser.hecke_to_json(h1 * h2)


def cmd_hecke_act(args):
    h = ser.hecke_from_json(_read_json(args.h, "--h"), "--h")
    model = _model_from_json(_read_json(args.model, "--model"), h.U.n)
    mat = model.act(h)
    return {"rank": model.rank(),
            "matrix": [[ser.scalar_to_json(x) for x in row] for row in mat]}


def cmd_hecke_trace(args):
    h = ser.hecke_from_json(_read_json(args.h, "--h"), "--h")
    model = _model_from_json(_read_json(args.model, "--model"), h.U.n)
    return {"rank": model.rank(), "trace": ser.to_jsonable(model.trace(h))}


# -- langlands ---------------------------------------------------------

def cmd_ll_map(args):
    sigma = ser.wd_from_json(_read_json(args.wd, "--wd"), "--wd")
    return ser.to_jsonable(ll_map(sigma, args.norm))


def cmd_compat(args):
    a_l = _fraction(args.a_l, "--a_l")
    chi_l = _fraction(args.chi_l, "--chi_l")
    ops = tuple(t.strip() for t in args.ops.split(",") if t.strip())
    report = compat_check(args.l, a_l, chi_l, args.k, ops=ops,
                          paper_sign=args.paper_sign)
    return ser.to_jsonable(report)


# -- families ----------------------------------------------------------

def cmd_family_trace(args):
    fam = ser.family_from_json(_read_json(args.family, "--family"), "--family")
    U = LevelGroup(fam.l, args.level)
    tr = tr_lan_family(fam, _op_element(args.op, U))
    return {"family": ser.family_to_json(fam), "op": args.op,
            "level": args.level, "trace": ser.family_scalar_to_json(tr)}


def cmd_family_bad_points(args):
    fam = ser.family_from_json(_read_json(args.family, "--family"), "--family")
    return {"family": ser.family_to_json(fam),
            "bad_points": ser.to_jsonable(bad_points(fam))}


def cmd_family_check(args):
    fam = ser.family_from_json(_read_json(args.family, "--family"), "--family")
    U = LevelGroup(fam.l, args.level)
    rng = random.Random(args.seed)
    points, seen = [], set()
    while len(points) < args.samples:
        q = rng.randint(-3 * args.samples, 3 * args.samples)
        if q not in seen:
            seen.add(q)
            points.append(Fraction(q))
    report = check_specialization(fam, _op_element(args.op, U), points)
    report = ser.to_jsonable(report)
    report.update({"seed": args.seed, "samples": args.samples, "op": args.op,
                   "level": args.level})
    return report


def cmd_family_specialize(args):
    fam = ser.family_from_json(_read_json(args.family, "--family"), "--family")
    sigma = specialize(fam, _fraction(args.at, "--at"))
    return {"wd": ser.wd_to_json(sigma), "class": classify(sigma)}


# -- dispatcher --------------------------------------------------------

def _matrix_flag(p, name, help_text):
    p.add_argument(name, required=True, metavar="MAT",
                   help=help_text + ' ("a,b;c,d", rational entries)')


def _cusp_flags(p):
    p.add_argument("--cusp", type=int, default=1, metavar="A",
                   help="cusp label, a unit mod l^res (default 1)")
    p.add_argument("--cusp-res", type=int, default=0, metavar="D",
                   help="cusp resolution exponent (default 0)")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="llgl2",
        description="Hecke modules, q-expansion actions, and local "
                    "correspondence checks for GL2 over Q_l at desk scale.")
    top.add_argument("--out", metavar="FILE",
                     help="write the JSON report here instead of stdout")
    sub = top.add_subparsers(dest="cmd", required=True, metavar="COMMAND")

    gl2 = sub.add_parser("gl2", help="matrix decompositions and cosets")
    gsub = gl2.add_subparsers(dest="sub", required=True)
    p = gsub.add_parser("decompose", help="standard upper-triangular form")
    p.add_argument("--l", type=int, required=True)
    _matrix_flag(p, "--g", "matrix to decompose")
    p.set_defaults(fn=cmd_gl2_decompose)
    p = gsub.add_parser("iwasawa", help="upper-triangular times integral")
    p.add_argument("--l", type=int, required=True)
    _matrix_flag(p, "--g", "matrix to decompose")
    p.set_defaults(fn=cmd_gl2_iwasawa)
    p = gsub.add_parser("cartan", help="elementary-divisor exponents")
    p.add_argument("--l", type=int, required=True)
    _matrix_flag(p, "--g", "matrix to decompose")
    p.set_defaults(fn=cmd_gl2_cartan)
    p = gsub.add_parser("cosets", help="left cosets of a double coset")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--level", type=int, default=0)
    _matrix_flag(p, "--g", "double-coset representative")
    p.set_defaults(fn=cmd_gl2_cosets)

    qx = sub.add_parser("qexp", help="q-expansions and twist factors")
    qsub = qx.add_subparsers(dest="sub", required=True)
    p = qsub.add_parser("eisenstein", help="p-deprived Eisenstein series")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--prec", required=True)
    p.set_defaults(fn=cmd_qexp_eisenstein)
    p = qsub.add_parser("act", help="weight-k action on an expansion")
    p.add_argument("--f", required=True, help="q-expansion JSON (file or inline)")
    _matrix_flag(p, "--g", "acting matrix")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--chi-l", help="character value at l (rational)")
    _cusp_flags(p)
    p.set_defaults(fn=cmd_qexp_act)
    p = qsub.add_parser("twist", help="twist-factor q-expansion")
    _matrix_flag(p, "--g", "acting matrix")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--prec", required=True)
    _cusp_flags(p)
    p.set_defaults(fn=cmd_qexp_twist)
    p = qsub.add_parser("check-cocycle", help="composition law for twists")
    _matrix_flag(p, "--g", "inner matrix")
    _matrix_flag(p, "--h", "outer matrix")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--prec", required=True)
    _cusp_flags(p)
    p.set_defaults(fn=cmd_qexp_check_cocycle)
    p = qsub.add_parser("check-up", help="U_p commutation identity")
    _matrix_flag(p, "--g", "acting matrix")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--prec", required=True)
    _cusp_flags(p)
    p.set_defaults(fn=cmd_qexp_check_up)

    wd = sub.add_parser("wd", help="Weil-Deligne data")
    wsub = wd.add_subparsers(dest="sub", required=True)
    p = wsub.add_parser("classify", help="trichotomy class of a WD rep")
    p.add_argument("--wd", required=True, help="WD JSON (file or inline)")
    p.set_defaults(fn=cmd_wd_classify)
    p = wsub.add_parser("from-eigenform", help="WD rep of eigenform data")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--a_l", required=True)
    p.add_argument("--chi_l", default="1")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--paper-sign", action="store_true",
                   help="flip the sign of the linear char-poly coefficient")
    p.set_defaults(fn=cmd_wd_from_eigenform)

    mono = sub.add_parser("monodromy", help="p-adic monodromy dictionary")
    msub = mono.add_subparsers(dest="sub", required=True)
    p = msub.add_parser("extract", help="N from a continuous rep")
    p.add_argument("--rep", required=True, help="continuous-rep JSON")
    p.set_defaults(fn=cmd_monodromy_extract)
    p = msub.add_parser("roundtrip", help="WD -> continuous -> WD agreement")
    p.add_argument("--wd", required=True, help="split WD JSON")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--prec", type=int, default=10)
    p.add_argument("--c", default="1", help="normalization scalar (rational)")
    p.set_defaults(fn=cmd_monodromy_roundtrip)

    hk = sub.add_parser("hecke", help="double-coset algebra")
    hsub = hk.add_subparsers(dest="sub", required=True)
    p = hsub.add_parser("convolve", help="product of two elements")
    p.add_argument("--a", required=True, help="Hecke JSON (file or inline)")
    p.add_argument("--b", required=True, help="Hecke JSON (file or inline)")
    p.set_defaults(fn=cmd_hecke_convolve)
    p = hsub.add_parser("act", help="action matrix on a model")
    p.add_argument("--h", required=True, help="Hecke JSON (file or inline)")
    p.add_argument("--model", required=True, help="model JSON (file or inline)")
    p.set_defaults(fn=cmd_hecke_act)
    p = hsub.add_parser("trace", help="trace on a model")
    p.add_argument("--h", required=True, help="Hecke JSON (file or inline)")
    p.add_argument("--model", required=True, help="model JSON (file or inline)")
    p.set_defaults(fn=cmd_hecke_trace)

    ll = sub.add_parser("ll", help="local correspondence")
    lsub = ll.add_subparsers(dest="sub", required=True)
    p = lsub.add_parser("map", help="smooth-side descriptor of a WD rep")
    p.add_argument("--wd", required=True, help="WD JSON (file or inline)")
    p.add_argument("--norm", default="tate",
                   choices=("unitary", "tate", "modified"))
    p.set_defaults(fn=cmd_ll_map)

    p = sub.add_parser("compat", help="classical compatibility check")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--a_l", required=True)
    p.add_argument("--chi_l", default="1")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--ops", default="T,Z")
    p.add_argument("--paper-sign", action="store_true",
                   help="flip the sign of the linear char-poly coefficient")
    p.set_defaults(fn=cmd_compat)

    fam = sub.add_parser("family", help="one-parameter families")
    fsub = fam.add_subparsers(dest="sub", required=True)
    p = fsub.add_parser("trace", help="family trace of a standard operator")
    p.add_argument("--family", required=True, help="family JSON (file or inline)")
    p.add_argument("--op", default="T", help="T, Z, or 1 (default T)")
    p.add_argument("--level", type=int, default=0)
    p.set_defaults(fn=cmd_family_trace)
    p = fsub.add_parser("bad-points", help="degeneration locus")
    p.add_argument("--family", required=True, help="family JSON (file or inline)")
    p.set_defaults(fn=cmd_family_bad_points)
    p = fsub.add_parser("check", help="specialization-vs-trace consistency")
    p.add_argument("--family", required=True, help="family JSON (file or inline)")
    p.add_argument("--op", default="T", help="T, Z, or 1 (default T)")
    p.add_argument("--level", type=int, default=0)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_family_check)
    p = fsub.add_parser("specialize", help="pointwise WD rep at T = t0")
    p.add_argument("--family", required=True, help="family JSON (file or inline)")
    p.add_argument("--at", required=True, help="specialization point (rational)")
    p.set_defaults(fn=cmd_family_specialize)

    return top


def _emit(report, out_path):
    text = ser.dumps(report)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = args.fn(args)
    except InvalidInput as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except MathDomainError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except CheckFailed as err:
        print(f"check failed: {err}", file=sys.stderr)
        return 3
    _emit(report, args.out)
    if isinstance(report, dict) and (report.get("ok") is False
                                     or report.get("pass") is False):
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
