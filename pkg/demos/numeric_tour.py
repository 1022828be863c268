"""A short tour of the numeric layer: evaluation with error bounds, the
discriminant -7 special point, and a truncated Poincare sum."""

import mpmath

from merohecke import meroforms
from merohecke.forms import delta, j_function
from merohecke.numeval import (
    HPoint,
    PoincareSeed,
    alpha_constant,
    cm_checks,
    eval_series,
    psi_section_check,
    psi_truncated,
)

res = eval_series(delta(60).series, (0, 1), bits=200)
print("delta(i)  =", res)
with mpmath.workprec(230):
    closed = mpmath.gamma(mpmath.mpf(1) / 4) ** 24 / (2 ** 24 * mpmath.pi ** 18)
    print("gamma form =", mpmath.nstr(closed, 20))

print("j(i) =", eval_series(j_function(40).series, (0, 1), bits=120).value.real)
print("alpha =", mpmath.nstr(alpha_constant(120), 20))

cm = cm_checks()
print("discriminant -7 point: pass =", cm["pass"],
      " j deviation %.1e" % cm["j_rel"])

# the k=3, ell=-1 sum centered at i has a q-expansion proportional to
# delta/E6; the truncation carries only a heuristic tail estimate
seed = PoincareSeed(3, -1, HPoint(0, 1))
print("psi at 2i:", psi_truncated(seed, HPoint(0, 2), bound=24))
sec = psi_section_check(bound=24)
print("section check: rel %.1e" % sec["rel"], "pass =", sec["pass"])
