"""Named forms given by closed formulas in E4, E6, E8, delta and j, and
exact verification of the identities between them.

Each named form is stored as a construction string evaluated by a small
whitelisted expression interpreter, so recomputing from the recorded
formula reproduces the series bit-exactly.  Forms that are quotients by a
function vanishing in the upper half-plane carry a validity height: their
q-expansions are only valid above it, and the numeric layer refuses to
evaluate them lower.
"""

import ast
import math
import re
from fractions import Fraction

from .qseries import LaurentSeries, InsufficientPrecision, as_coeff
from . import forms, hecke, linalg, whbasis
from .forms import ModularForm
from .whbasis import PrincipalPart


CONSTRUCTIONS = {
    "f6iinfty": "E6^3/delta + 1488*E6",
    "f6i": "delta/E6",
    "F7": "E4^3 + 3375*delta",
    "G": "delta^2/(E4^3 + 3375*delta)",
    "g": "E4^2*E6/delta^2",
    "g5": "(E8/delta)*(j^4 - 3480*j^3 + 3838860*j^2 - 1425282400*j + 114237825024)",
    "g7": "(E8/delta)*(j^6 - 4968*j^5 + 9176868*j^4 - 7736486240*j^3"
          " + 2925506969154*j^2 - 411526489432464*j + 12317318339088384)",
}

# expansions of delta/E6 and E4^2*E6/delta^2 are valid only above the zero
# of E6 / the growth crossover at height 1; G's above the zero of its
# denominator at height sqrt(7)/2
VALIDITY_HEIGHT = {
    "f6i": 1.0,
    "g": 1.0,
    "G": math.sqrt(7) / 2,
}

_EXPECTED_WEIGHT = {
    "f6iinfty": 6, "f6i": 6, "F7": 12, "G": 12, "g": -10, "g5": -4, "g7": -4,
}

# the quadratic and quartic from the index-2 / index-3 identities on g,
# ascending; also evaluated at j = -3375 by the "jpoly-eval" id
GT2_POLY = [374784, -1512, 1]
GT3_POLY = [52796307708, -842201064, 2784384, -3000, 1]


class ExpressionError(ValueError):
    pass


class NamedForm:
    __slots__ = ("name", "weight", "form", "construction", "validity_height")

    def __init__(self, name, weight, form, construction, validity_height=None):
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "weight", weight)
        object.__setattr__(self, "form", form)
        object.__setattr__(self, "construction", construction)
        object.__setattr__(self, "validity_height", validity_height)

    def __setattr__(self, name, value):
        raise AttributeError("NamedForm is immutable")

    @property
    def series(self):
        return self.form.series

    def coefficient(self, n):
        return self.form.coefficient(n)

    def truncate(self, precision):
        return NamedForm(self.name, self.weight, self.form.truncate(precision),
                         self.construction, self.validity_height)

    def __repr__(self):
        return "NamedForm(%s, weight=%d, %s)" % (self.name, self.weight, self.construction)


_NAME_RE = re.compile(r"^E(\d+)$")


def _leaf(name, precision):
    if name in ("delta", "Delta"):
        return forms.delta(precision)
    if name in ("j", "J"):
        return forms.j_function(precision)
    m = _NAME_RE.match(name)
    if m:
        return forms.eisenstein(int(m.group(1)), precision)
    raise ExpressionError("unknown name %r (allowed: E<k>, delta, j)" % name)


def _combine_add(a, b, sign, precision):
    if isinstance(a, ModularForm) or isinstance(b, ModularForm):
        if not isinstance(a, ModularForm):
            a, b = b, a
            if sign < 0:  # scalar - form
                a = ModularForm(a.weight, a.series.scale(-1))
                sign = 1
        if not isinstance(b, ModularForm):
            if a.weight != 0:
                raise ExpressionError("cannot add a constant to a weight-%d form" % a.weight)
            b = ModularForm(0, LaurentSeries.from_coeff_map({0: b}, a.series.prec))
        if a.weight != b.weight:
            raise ExpressionError("weight mismatch: %d vs %d" % (a.weight, b.weight))
        series = a.series.add(b.series if sign > 0 else b.series.scale(-1))
        return ModularForm(a.weight, series)
    return a + b if sign > 0 else a - b


def _eval_node(node, precision):
    if isinstance(node, ast.Expression):
        return _eval_node(node.body, precision)
    if isinstance(node, ast.Constant):
        if isinstance(node.value, int):
            return node.value
        raise ExpressionError("only integer constants are allowed")
    if isinstance(node, ast.Name):
        return _leaf(node.id, precision)
    if isinstance(node, ast.UnaryOp):
        v = _eval_node(node.operand, precision)
        if isinstance(node.op, ast.UAdd):
            return v
        if isinstance(node.op, ast.USub):
            if isinstance(v, ModularForm):
                return ModularForm(v.weight, v.series.scale(-1))
            return -v
        raise ExpressionError("unsupported unary operator")
    if isinstance(node, ast.BinOp):
        a = _eval_node(node.left, precision)
        b = _eval_node(node.right, precision)
        op = node.op
        if isinstance(op, ast.Add):
            return _combine_add(a, b, 1, precision)
        if isinstance(op, ast.Sub):
            return _combine_add(a, b, -1, precision)
        if isinstance(op, ast.Mult):
            if isinstance(a, ModularForm) and isinstance(b, ModularForm):
                return a * b
            if isinstance(a, ModularForm):
                return ModularForm(a.weight, a.series.scale(b))
            if isinstance(b, ModularForm):
                return ModularForm(b.weight, b.series.scale(a))
            return a * b
        if isinstance(op, ast.Div):
            if isinstance(b, ModularForm):
                inv = b.series.invert()
                if isinstance(a, ModularForm):
                    return ModularForm(a.weight - b.weight, a.series.mul(inv))
                return ModularForm(-b.weight, inv.scale(a))
            if isinstance(a, ModularForm):
                return ModularForm(a.weight, a.series.scale(_inv_scalar(b)))
            return as_coeff(Fraction(a) / _as_fraction(b))
        if isinstance(op, ast.Pow):
            if not isinstance(b, int):
                raise ExpressionError("exponents must be integer constants")
            if isinstance(a, ModularForm):
                if b < 0:
                    inv = a.series.invert()
                    return ModularForm(-a.weight, inv.pow(-b) if -b > 1 else inv)
                return a ** b
            return a ** b
        raise ExpressionError("unsupported operator %s" % op.__class__.__name__)
    raise ExpressionError("unsupported syntax %s" % node.__class__.__name__)


def _as_fraction(b):
    if b == 0:
        raise ZeroDivisionError("division by zero in construction")
    return Fraction(b)


def _inv_scalar(b):
    return 1 / _as_fraction(b)


def build_expression(expr, precision):
    """Evaluate an arithmetic expression in E<k>, delta, j (with ^, **, and
    integer constants) to a ModularForm with window reaching precision."""
    src = expr.replace("^", "**")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as e:
        raise ExpressionError("cannot parse %r: %s" % (expr, e))
    last = None
    for pad in (16, 48, 160, 512):
        try:
            v = _eval_node(tree, precision + pad)
            if not isinstance(v, ModularForm):
                v = ModularForm(0, LaurentSeries.from_coeff_map({0: v}, precision))
            return ModularForm(v.weight, v.series.truncate(precision))
        except InsufficientPrecision as e:
            last = e
    raise last


def build(name, precision):
    """Named form to the given precision; results are cached and truncated
    down on repeat requests."""
    if name not in CONSTRUCTIONS:
        raise KeyError("unknown form %r (have %s)" % (name, sorted(CONSTRUCTIONS)))
    construction = CONSTRUCTIONS[name]
    form = forms._cached(("named", name), precision,
                         lambda p: build_expression(construction, p))
    if form.weight != _EXPECTED_WEIGHT[name]:
        raise AssertionError("construction of %s produced weight %d" % (name, form.weight))
    return NamedForm(name, form.weight, form, construction, VALIDITY_HEIGHT.get(name))


class IdentityReport:
    __slots__ = ("id", "passed", "window", "mismatch")

    def __init__(self, ident, passed, window, mismatch=None):
        object.__setattr__(self, "id", ident)
        object.__setattr__(self, "passed", passed)
        object.__setattr__(self, "window", window)
        object.__setattr__(self, "mismatch", mismatch)

    def __setattr__(self, name, value):
        raise AttributeError("IdentityReport is immutable")

    def __bool__(self):
        return self.passed

    def to_json_obj(self):
        return {"id": self.id, "pass": self.passed,
                "window": list(self.window) if self.window else None,
                "mismatch": self.mismatch}

    def __repr__(self):
        state = "pass" if self.passed else "FAIL %r" % (self.mismatch,)
        return "IdentityReport(%s: %s on %s)" % (self.id, state, self.window)


def _compare_series(ident, lhs, rhs):
    lo = max(lhs.val, rhs.val)
    hi = min(lhs.prec, rhs.prec)
    if hi <= lo:
        raise InsufficientPrecision("identity %s has empty comparison window" % ident)
    for n in range(lo, hi):
        a = lhs.coefficient(n)
        b = rhs.coefficient(n)
        if a != b:
            return IdentityReport(ident, False, (lo, hi),
                                  {"index": n, "lhs": str(a), "rhs": str(b)})
    return IdentityReport(ident, True, (lo, hi))


def _compare_pinned(ident, series, pinned):
    lo = min(pinned)
    hi = max(pinned) + 1
    for n, want in sorted(pinned.items()):
        got = series.coefficient(n)
        if got != want:
            return IdentityReport(ident, False, (lo, hi),
                                  {"index": n, "lhs": str(got), "rhs": str(want)})
    return IdentityReport(ident, True, (lo, hi))


def _id_bol_f6iinfty(precision):
    p = precision or 101
    e8d = build_expression("E8/delta", p)
    lhs = e8d.series.d_power(5)
    rhs = build("f6iinfty", p).series.scale(-1)
    return _compare_series("bol-f6iinfty", lhs, rhs)


def _id_infty_eigen(m, precision):
    p = precision or 120
    ident = "infty-eigen(%d)" % m
    f = build("f6iinfty", p).form
    image = hecke.t_op(f.series, 6, m)
    h = image.sub(f.series.scale(forms.sigma(5, m)).truncate(image.prec))
    rep = whbasis.bol_image_membership(ModularForm(6, h), 3, True)
    if rep.ok:
        return IdentityReport(ident, True, rep.window)
    mim = rep.mismatch or {"obstruction": [str(c) for c in rep.obstruction.vector]}
    return IdentityReport(ident, False, rep.window, mim)


def _id_gdef(name, m, precision):
    p = precision or 60
    ident = "%s-def" % name
    pp = PrincipalPart({m: 1, 1: -forms.sigma(5, m)})
    sol = whbasis.solve_principal_part(-4, pp, True, p)
    if isinstance(sol, whbasis.ObstructionWitness):
        return IdentityReport(ident, False, None,
                              {"obstruction": [str(c) for c in sol.vector]})
    return _compare_series(ident, sol.series, build(name, p).series)


def _poly_in_j(poly, precision):
    jf = forms.j_function(precision).series
    acc = None
    for t, c in enumerate(poly):
        if c == 0:
            continue
        term = LaurentSeries.from_coeff_map({0: c}, precision) if t == 0 else jf.pow(t).scale(c)
        acc = term if acc is None else acc.add(term)
    return acc


def _id_gt(m, poly, precision):
    p = precision or 60
    ident = "gT%d" % m
    g = build("g", p).form
    lhs = hecke.t_op(g.series, -10, m).scale(m ** 11)
    rhs = g.series.mul(_poly_in_j(poly, p))
    return _compare_series(ident, lhs, rhs)


def _g_hecke_series(precision):
    p = precision or 40
    G = build("G", p).form
    image = hecke.t_op(G.series, 12, 2)
    return image.add(G.series.scale(24).truncate(image.prec))


def _id_g_hecke(precision):
    lhs = _g_hecke_series(precision)
    return _compare_pinned("G-hecke", lhs,
                           {1: 1, 2: 16868409, 3: 279687514914333})


def _id_jpoly_eval(precision):
    lhs = _g_hecke_series(precision)
    p2 = linalg.poly_eval(GT2_POLY, -3375)
    p3 = linalg.poly_eval(GT3_POLY, -3375)
    for value, want, idx in ((p2, 16868409, 2), (p3, 279687514914333, 3)):
        if value != want:
            return IdentityReport("jpoly-eval", False, (2, 4),
                                  {"index": idx, "lhs": str(value), "rhs": str(want)})
        got = lhs.coefficient(idx)
        if got != want:
            return IdentityReport("jpoly-eval", False, (2, 4),
                                  {"index": idx, "lhs": str(got), "rhs": str(want)})
    return IdentityReport("jpoly-eval", True, (2, 4))


def _id_f_over_delta(precision):
    p = precision or 60
    F = build("F7", p).form
    lhs = F.series.div(forms.delta(p).series)
    rhs = forms.j_function(lhs.prec).series.add(
        LaurentSeries.from_coeff_map({0: 3375}, lhs.prec))
    return _compare_series("F-over-Delta", lhs, rhs)


def _id_psi_fourier(precision):
    # the q^n coefficient of beta*G + alpha*Delta as a linear form in
    # (alpha, beta) must be tau(n)*alpha + G_n*beta with the pinned pairs
    p = precision or 60
    dl = forms.delta(max(p, 5)).series
    G = build("G", max(p, 5)).series
    pinned = {1: (1, 0), 2: (-24, 1), 3: (252, -4143)}
    for n, (tau_n, g_n) in sorted(pinned.items()):
        got = (dl.coefficient(n), G.coefficient(n))
        if got != (tau_n, g_n):
            return IdentityReport("psi-fourier-consistency", False, (1, 4),
                                  {"index": n, "lhs": str(got), "rhs": str((tau_n, g_n))})
    return IdentityReport("psi-fourier-consistency", True, (1, 4))


_INFTY_RE = re.compile(r"^infty-eigen\((\d+)\)$")


def identity_ids():
    return ["bol-f6iinfty", "infty-eigen(2)", "infty-eigen(3)", "infty-eigen(5)",
            "infty-eigen(7)", "g5-def", "g7-def", "gT2", "gT3", "G-hecke",
            "jpoly-eval", "F-over-Delta", "psi-fourier-consistency"]


def verify_identity(ident, precision=None):
    """Exact coefficient-wise verification of one named identity on the
    maximal provable window; returns an IdentityReport."""
    m = _INFTY_RE.match(ident)
    if m:
        return _id_infty_eigen(int(m.group(1)), precision)
    table = {
        "bol-f6iinfty": lambda: _id_bol_f6iinfty(precision),
        "g5-def": lambda: _id_gdef("g5", 5, precision),
        "g7-def": lambda: _id_gdef("g7", 7, precision),
        "gT2": lambda: _id_gt(2, GT2_POLY, precision),
        "gT3": lambda: _id_gt(3, GT3_POLY, precision),
        "G-hecke": lambda: _id_g_hecke(precision),
        "jpoly-eval": lambda: _id_jpoly_eval(precision),
        "F-over-Delta": lambda: _id_f_over_delta(precision),
        "psi-fourier-consistency": lambda: _id_psi_fourier(precision),
    }
    if ident not in table:
        raise KeyError("unknown identity %r (have %s)" % (ident, identity_ids()))
    return table[ident]()
