"""Command-line front end.

Exit codes: 0 success / all checks pass, 1 verification mismatch or
obstructed request, 2 usage or parse error, 3 numeric guard tripped
(validity-height or divergent-tail errors).

Set MEROHECKE_CACHE_DIR to enable a flat-file series cache keyed by
(construction string, precision); entries are invalidated by bumping the
format version.
"""

import argparse
import hashlib
import json
import os
import sys
import tempfile

from . import forms, hecke, linalg, meroforms, numeval, qseries, quotient, whbasis
from .forms import ModularForm
from .numeval import HPoint, PoincareSeed, RegionGuard, DivergentTail
from .whbasis import ObstructionWitness, PrincipalPart

FORMAT_VERSION = 1

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_GUARD = 3


# -- cache ---------------------------------------------------------------

def _cache_dir():
    return os.environ.get("MEROHECKE_CACHE_DIR")


def _cache_path(construction, precision):
    d = _cache_dir()
    if not d:
        return None
    key = hashlib.sha256(
        ("%d|%s|%d" % (FORMAT_VERSION, construction, precision)).encode()).hexdigest()
    return os.path.join(d, key + ".json")


def _cache_load(construction, precision):
    path = _cache_path(construction, precision)
    if not path or not os.path.exists(path):
        return None
    try:
        with open(path) as fh:
            obj = json.load(fh)
        if obj.get("format") != FORMAT_VERSION:
            return None
        return ModularForm(int(obj["weight"]), qseries.from_json_obj(obj["series"]))
    except (ValueError, KeyError, OSError):
        return None


def _cache_store(construction, precision, form):
    path = _cache_path(construction, precision)
    if not path:
        return
    os.makedirs(os.path.dirname(path), exist_ok=True)
    obj = {
        "format": FORMAT_VERSION,
        "construction": construction,
        "precision": precision,
        "weight": form.weight,
        "series": qseries.to_json_obj(form.series),
    }
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path), suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(obj, fh)
        os.replace(tmp, path)
    except OSError:
        try:
            os.unlink(tmp)
        except OSError:
            pass


def _build_form(name_or_expr, precision):
    """Named form or whitelisted expression, through the flat-file cache."""
    if name_or_expr in meroforms.CONSTRUCTIONS:
        construction = meroforms.CONSTRUCTIONS[name_or_expr]
    else:
        construction = name_or_expr
    hit = _cache_load(construction, precision)
    if hit is not None:
        return hit
    if name_or_expr in meroforms.CONSTRUCTIONS:
        form = meroforms.build(name_or_expr, precision).form
    else:
        form = meroforms.build_expression(name_or_expr, precision)
    _cache_store(construction, precision, form)
    return form


# -- helpers -------------------------------------------------------------

def _emit(args, obj, text):
    if getattr(args, "json", False):
        print(json.dumps(obj, indent=2, default=str))
    else:
        print(text)


def _series_json(series, weight=None, name=None):
    obj = {"series": qseries.to_json_obj(series),
           "window": [series.val, series.prec]}
    if weight is not None:
        obj["weight"] = weight
    if name is not None:
        obj["name"] = name
    return obj


def _parse_pp(text):
    terms = {}
    constant = 0
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if ":" not in chunk:
            raise ValueError("principal part entries look like 'r:coeff', got %r" % chunk)
        r_s, c_s = chunk.split(":", 1)
        r = int(r_s)
        c = qseries.as_coeff(c_s.strip())
        if r == 0:
            constant = c
        else:
            terms[r] = c
    return PrincipalPart(terms, constant)


def _load_series_arg(target, weight_flag, precision):
    """A named form, an expression, or a path to a JSON series file."""
    if os.path.exists(target):
        with open(target) as fh:
            obj = json.load(fh)
        if "series" in obj:
            series = qseries.from_json_obj(obj["series"])
            weight = obj.get("weight", weight_flag)
        else:
            series = qseries.from_json_obj(obj)
            weight = weight_flag
        if weight is None:
            raise ValueError("series files without a weight field need --weight")
        return int(weight), series, target
    form = _build_form(target, precision)
    weight = form.weight if weight_flag is None else weight_flag
    return weight, form.series, target


# -- subcommands ---------------------------------------------------------

def _cmd_expand(args):
    form = _build_form(args.name, args.prec)
    _emit(args, _series_json(form.series, form.weight, args.name), str(form.series))
    return EXIT_OK


def _cmd_hecke(args):
    weight, series, label = _load_series_arg(args.target, args.weight, args.prec)
    image = hecke.t_op(series, weight, args.m)
    text = "window [%d, %d)\n%s" % (image.val, image.prec, image)
    _emit(args, _series_json(image, weight), text)
    return EXIT_OK


def _cmd_solve_pp(args):
    pp = _parse_pp(args.pp)
    sol = whbasis.solve_principal_part(args.weight, pp, args.sshriek, args.prec)
    if isinstance(sol, ObstructionWitness):
        vec = [str(c) for c in sol.vector]
        _emit(args, {"obstruction": vec, "dual": sol.dual_kind},
              "obstructed: pairing vector %s against the weight-%d %s basis"
              % (vec, 2 - args.weight, "holomorphic" if sol.dual_kind == "M" else "cusp"))
        return EXIT_MISMATCH
    _emit(args, _series_json(sol.series, sol.weight), str(sol.series))
    return EXIT_OK


def _matrix_strs(mat):
    return [[str(x) for x in row] for row in mat]


def _cmd_quotient(args):
    kind = args.kind
    mat = quotient.quotient_hecke_matrix(args.weight2k, kind, args.m)
    scaled = linalg.mat_scale(mat, args.m ** (args.weight2k - 1)) if mat else []
    obj = {"weight2k": args.weight2k, "kind": kind, "m": args.m,
           "matrix": _matrix_strs(mat)}
    lines = ["%d x %d matrix of T_%d on the %s quotient in weight 2k=%d:"
             % (len(mat), len(mat), args.m, kind, args.weight2k)]
    for row in mat:
        lines.append("  [" + ", ".join(str(x) for x in row) + "]")
    if args.charpoly:
        cp = linalg.charpoly(scaled)
        obj["scaled_charpoly"] = [str(c) for c in cp]
        lines.append("charpoly of %d^%d * matrix: %s"
                     % (args.m, args.weight2k - 1, linalg.poly_str(cp)))
    code = EXIT_OK
    if args.check:
        ok = quotient.theorem_check(args.weight2k, kind, args.m)
        obj["check"] = bool(ok)
        lines.append("theorem check: %s" % ("pass" if ok else "FAIL"))
        if not ok:
            code = EXIT_MISMATCH
    _emit(args, obj, "\n".join(lines))
    return code


def _theorem_grid():
    reports = []
    for weight2k in range(4, 30, 2):
        for m in (2, 3, 5):
            for kind in (quotient.MOD_M, quotient.MOD_S):
                ok = quotient.theorem_check(weight2k, kind, m)
                reports.append({"id": "quotient(%d,%s,T%d)" % (weight2k, kind, m),
                                "pass": bool(ok), "window": None, "mismatch": None})
    return reports


def _cmd_verify(args):
    if args.id == "all":
        reports = [meroforms.verify_identity(i).to_json_obj()
                   for i in meroforms.identity_ids()]
        reports += _theorem_grid()
    else:
        reports = [meroforms.verify_identity(args.id, args.prec).to_json_obj()]
    all_pass = all(r["pass"] for r in reports)
    if args.json:
        print(json.dumps({"reports": reports, "pass": all_pass}, indent=2))
    else:
        for r in reports:
            status = "pass" if r["pass"] else "FAIL"
            extra = "" if r["pass"] else "  %s" % (r["mismatch"],)
            print("%-28s %s%s" % (r["id"], status, extra))
    return EXIT_OK if all_pass else EXIT_MISMATCH


def _cmd_eval(args):
    if args.name in meroforms.CONSTRUCTIONS:
        named = meroforms.build(args.name, args.prec)
        series, height = named.series, named.validity_height
    else:
        form = _build_form(args.name, args.prec)
        series, height = form.series, None
    z = HPoint.parse(args.at)
    res = numeval.eval_series(series, z, args.bits, min_height=height)
    obj = res.to_json_obj()
    obj["name"] = args.name
    _emit(args, obj, "%s at %s = %s + %si  (err <= %s%s)"
          % (args.name, args.at, obj["value_re"], obj["value_im"],
             obj["err_bound"], ", " + res.tail_note if res.tail_note else ""))
    return EXIT_OK


def _cmd_cm_check(args):
    rep = numeval.cm_checks(args.bits, args.prec, args.tol)
    obj = {k: str(v) if not isinstance(v, (bool, str)) else v for k, v in rep.items()}
    lines = ["point %s" % rep["point"],
             "omega              = %s" % rep["omega"],
             "delta imag (rel)   = %s" % rep["delta_imag_rel"],
             "E4 vs 15*Omega^4   = %s" % rep["e4_rel"],
             "E6 vs 27*sqrt7*Om6 = %s" % rep["e6_rel"],
             "j vs -3375         = %s" % rep["j_rel"],
             "pass (tol %s): %s" % (args.tol, rep["pass"])]
    _emit(args, obj, "\n".join(lines))
    return EXIT_OK if rep["pass"] else EXIT_MISMATCH


def _cmd_eigen_num(args):
    rep = numeval.verify_f6i_eigen(args.m, args.nmax, args.bits, args.tol)
    obj = dict(rep)
    obj["rels"] = ["%.3e" % r for r in rep["rels"]]
    obj["max_rel"] = "%.3e" % rep["max_rel"]
    text = ("m=%d n<=%d bits=%d series precision %d: max relative error %.3e "
            "(tol %g): %s" % (rep["m"], rep["n_max"], rep["bits"],
                              rep["series_precision"], rep["max_rel"], rep["tol"],
                              "pass" if rep["pass"] else "FAIL"))
    _emit(args, obj, text)
    return EXIT_OK if rep["pass"] else EXIT_MISMATCH


def _cmd_psi_sum(args):
    seed = PoincareSeed(args.k, args.ell, HPoint.parse(args.zz))
    res = numeval.psi_truncated(seed, HPoint.parse(args.at), args.bound, args.bits)
    obj = res.to_json_obj()
    _emit(args, obj, "psi = %s + %si  (tail %s%s)"
          % (obj["value_re"], obj["value_im"], obj["err_bound"],
             ", " + res.tail_note if res.tail_note else ""))
    return EXIT_OK


def _cmd_psi_prop(args):
    rep = numeval.psi_two_variable_check(
        args.k, args.ell, HPoint.parse(args.zz), HPoint.parse(args.at),
        args.n, args.bound, args.bits, args.tol)
    obj = {"n": rep["n"], "lhs": str(rep["lhs"]), "rhs": str(rep["rhs"]),
           "rel": rep["rel"], "tail_sum": rep["tail_sum"], "pass": rep["pass"]}
    text = ("n=%d lhs=%s rhs=%s rel=%.3e (tol %g): %s"
            % (rep["n"], rep["lhs"], rep["rhs"], rep["rel"], rep["tol"],
               "pass" if rep["pass"] else "FAIL"))
    _emit(args, obj, text)
    return EXIT_OK if rep["pass"] else EXIT_MISMATCH


# -- parser --------------------------------------------------------------

def _build_parser():
    p = argparse.ArgumentParser(
        prog="merohecke",
        description="Exact q-expansions, Hecke operators, principal-part "
                    "solving, and numeric evaluation for level-one modular forms.")
    sub = p.add_subparsers(dest="command", required=True)

    def add_json(sp):
        sp.add_argument("--json", action="store_true", help="emit JSON")

    sp = sub.add_parser("expand", help="q-expansion of a named form or expression")
    sp.add_argument("name", help="named form (%s) or expression in E<k>, delta, j"
                    % ", ".join(sorted(meroforms.CONSTRUCTIONS)))
    sp.add_argument("--prec", type=int, default=60)
    add_json(sp)
    sp.set_defaults(func=_cmd_expand)

    sp = sub.add_parser("hecke", help="apply the index-m Hecke operator")
    sp.add_argument("target", help="named form, expression, or JSON series file")
    sp.add_argument("--weight", type=int, default=None)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--prec", type=int, default=60)
    add_json(sp)
    sp.set_defaults(func=_cmd_hecke)

    sp = sub.add_parser("solve-pp", help="solve a principal-part prescription")
    sp.add_argument("--weight", type=int, required=True)
    sp.add_argument("--pp", required=True,
                    help="comma list r:coeff (r=0 for the constant term)")
    sp.add_argument("--sshriek", action="store_true",
                    help="require a zero constant term (S-shriek)")
    sp.add_argument("--prec", type=int, default=24)
    add_json(sp)
    sp.set_defaults(func=_cmd_solve_pp)

    sp = sub.add_parser("quotient", help="Hecke matrix on a principal-part quotient")
    sp.add_argument("--weight2k", type=int, required=True)
    sp.add_argument("--kind", required=True, choices=[quotient.MOD_M, quotient.MOD_S])
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--charpoly", action="store_true")
    sp.add_argument("--check", action="store_true")
    add_json(sp)
    sp.set_defaults(func=_cmd_quotient)

    sp = sub.add_parser("verify", help="verify named identities")
    sp.add_argument("id", nargs="?", default="all")
    sp.add_argument("--prec", type=int, default=None)
    add_json(sp)
    sp.set_defaults(func=_cmd_verify)

    sp = sub.add_parser("eval", help="evaluate a form at a point of the upper half-plane")
    sp.add_argument("name")
    sp.add_argument("--at", required=True, help="point as 'x,y'")
    sp.add_argument("--bits", type=int, default=200)
    sp.add_argument("--prec", type=int, default=60)
    add_json(sp)
    sp.set_defaults(func=_cmd_eval)

    sp = sub.add_parser("cm-check", help="special-value checks at (1+sqrt(7)i)/2")
    sp.add_argument("--bits", type=int, default=200)
    sp.add_argument("--prec", type=int, default=40)
    sp.add_argument("--tol", type=float, default=1e-20)
    add_json(sp)
    sp.set_defaults(func=_cmd_cm_check)

    sp = sub.add_parser("eigen-num", help="numeric weight-6 eigenvalue identity check")
    sp.add_argument("--m", type=int, required=True, choices=[5, 7])
    sp.add_argument("--nmax", type=int, default=10)
    sp.add_argument("--bits", type=int, default=200)
    sp.add_argument("--tol", type=float, default=1e-10)
    add_json(sp)
    sp.set_defaults(func=_cmd_eigen_num)

    sp = sub.add_parser("psi-sum", help="truncated elliptic Poincare sum")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--zz", required=True, help="center as 'x,y'")
    sp.add_argument("--at", required=True, help="argument as 'x,y'")
    sp.add_argument("--bound", type=int, default=40)
    sp.add_argument("--bits", type=int, default=200)
    add_json(sp)
    sp.set_defaults(func=_cmd_psi_sum)

    sp = sub.add_parser("psi-prop-check", help="two-variable Hecke relation on psi sums")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--zz", required=True, help="center as 'x,y'")
    sp.add_argument("--at", required=True, help="argument as 'x,y'")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--bound", type=int, default=40)
    sp.add_argument("--bits", type=int, default=200)
    sp.add_argument("--tol", type=float, default=1e-2)
    add_json(sp)
    sp.set_defaults(func=_cmd_psi_prop)

    return p


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except (RegionGuard, DivergentTail) as e:
        print("numeric guard: %s" % e, file=sys.stderr)
        return EXIT_GUARD
    except (ValueError, KeyError, qseries.QSeriesError,
            whbasis.NonUniqueSolution, whbasis.NotPolynomialInJ) as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_USAGE


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
