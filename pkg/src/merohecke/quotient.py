"""Hecke action on principal parts and the induced finite-dimensional
quotient modules.

Negative-weight weakly holomorphic forms modulo those with vanishing
principal part carry a Hecke action that only sees the principal part.
Two quotients are implemented: classes modulo forms with free constant
term ("modM!", dual to the cusp space in weight 2k) and classes modulo
zero-constant-term forms ("modS!", dual to the full holomorphic space).
The classes of q^-1 .. q^-d are a basis; the index-m action on them is an
exact d x d rational matrix whose scaled characteristic polynomial matches
the classical one on the dual space.
"""

from fractions import Fraction

from .qseries import as_coeff
from . import forms, linalg, whbasis
from .forms import HOLOMORPHIC, CUSPIDAL
from .whbasis import PrincipalPart, ObstructionWitness


MOD_M = "modM!"
MOD_S = "modS!"

_KIND_ALIASES = {
    MOD_M: MOD_M, "modM": MOD_M, "modm!": MOD_M, "modm": MOD_M,
    MOD_S: MOD_S, "modS": MOD_S, "mods!": MOD_S, "mods": MOD_S,
}


class SingularCoordinateMatrix(Exception):
    """The pairing coordinates of q^-1 .. q^-d failed to be invertible;
    indicates an internal inconsistency, not a property of the input."""


def _canon_kind(kind):
    k = _KIND_ALIASES.get(kind)
    if k is None:
        raise ValueError("kind must be %r or %r" % (MOD_M, MOD_S))
    return k


def _dual_space(kind):
    # classes mod free-constant forms pair against cusp forms; classes mod
    # zero-constant forms pair against the full holomorphic space
    return CUSPIDAL if kind == MOD_M else HOLOMORPHIC


def quotient_dimension(weight2k, kind):
    return forms.dimension(weight2k, _dual_space(_canon_kind(kind)))


def hecke_on_principal_part(pp, weight, m):
    """Principal part of (f | T_m) for any f of the given weight whose
    principal part is pp; well defined because the operator cannot move
    positive-index terms into the pole part or the constant."""
    if m < 1:
        raise ValueError("operator index must be >= 1")
    if weight % 2:
        raise ValueError("weight must be even")
    divs = [r for r in range(1, m + 1) if m % r == 0]
    terms = {}
    for n in range(1, m * pp.max_pole + 1):
        acc = 0
        for r in divs:
            if n % r:
                continue
            lam = pp.terms.get(m * n // (r * r))
            if lam:
                acc += _rpow(r, weight) * lam
        if acc:
            terms[n] = as_coeff(acc)
    const = sum(_rpow(r, weight) for r in divs) * pp.constant
    return PrincipalPart(terms, as_coeff(const))


def _rpow(r, weight):
    e = weight - 1
    if e >= 0:
        return r ** e
    return Fraction(1, r ** (-e))


class QuotientClass:
    """Coordinates of a principal part in the quotient, written against the
    echelon dual basis."""

    __slots__ = ("weight2k", "kind", "coords")

    def __init__(self, weight2k, kind, coords):
        object.__setattr__(self, "weight2k", weight2k)
        object.__setattr__(self, "kind", _canon_kind(kind))
        object.__setattr__(self, "coords", tuple(coords))

    def __setattr__(self, name, value):
        raise AttributeError("QuotientClass is immutable")

    def is_zero(self):
        return all(c == 0 for c in self.coords)

    def scale(self, c):
        c = as_coeff(c)
        return QuotientClass(self.weight2k, self.kind, [c * x for x in self.coords])

    def __sub__(self, other):
        if (self.weight2k, self.kind) != (other.weight2k, other.kind):
            raise ValueError("classes live in different quotients")
        return QuotientClass(self.weight2k, self.kind,
                             [a - b for a, b in zip(self.coords, other.coords)])

    def __eq__(self, other):
        if not isinstance(other, QuotientClass):
            return NotImplemented
        return (self.weight2k == other.weight2k and self.kind == other.kind
                and self.coords == other.coords)

    def __hash__(self):
        return hash((self.weight2k, self.kind, self.coords))

    def __repr__(self):
        return "QuotientClass(%d, %s, %s)" % (self.weight2k, self.kind, list(self.coords))


def class_of(pp, weight2k, kind):
    """Class of a weight (2-2k) principal part in the chosen quotient: the
    obstruction pairing against the dual space is a complete invariant."""
    kind = _canon_kind(kind)
    dual = _dual_space(kind)
    vec = whbasis.obstruction(2 - weight2k, pp,
                              "cusp" if dual == CUSPIDAL else "holomorphic")
    return QuotientClass(weight2k, kind, vec)


def quotient_hecke_matrix(weight2k, kind, m):
    """Exact matrix of the index-m Hecke operator on the quotient, in the
    basis of the classes of q^-1 .. q^-d."""
    kind = _canon_kind(kind)
    w = 2 - weight2k
    d = quotient_dimension(weight2k, kind)
    if d == 0:
        return []
    cols = []
    coord_cols = []
    for i in range(1, d + 1):
        pp = PrincipalPart({i: 1})
        coord_cols.append(class_of(pp, weight2k, kind).coords)
        image = hecke_on_principal_part(pp, w, m)
        cols.append(class_of(image, weight2k, kind).coords)
    # express image coordinates back in the q^-i class basis
    cmat = [[coord_cols[i][j] for i in range(d)] for j in range(d)]
    cinv = linalg.mat_inverse(cmat)
    if cinv is None:
        raise SingularCoordinateMatrix(
            "classes of q^-1 .. q^-%d are not independent in weight 2k=%d %s"
            % (d, weight2k, kind))
    umat = [[cols[i][j] for i in range(d)] for j in range(d)]
    return linalg.mat_mul(cinv, umat)


def theorem_check(weight2k, kind, m):
    """charpoly(m^(2k-1) * quotient matrix) against the charpoly of the
    index-m operator on the dual space; exact equality."""
    kind = _canon_kind(kind)
    q = quotient_hecke_matrix(weight2k, kind, m)
    scaled = linalg.mat_scale(q, Fraction(m) ** (weight2k - 1))
    lhs = linalg.charpoly(scaled)
    rhs = forms.hecke_charpoly_on_space(weight2k, _dual_space(kind), m)
    return lhs == rhs


def eigen_witness(weight2k, m, eigenvalue, kind=None, precision=24):
    """On a one-dimensional quotient, the class of q^-1 is an eigenvector of
    the index-m operator with the given scaled eigenvalue; realize the
    witness identity (q^-1 class) | T_m - m^(1-2k) * eigenvalue * (q^-1 class)
    = 0 as an explicit weakly holomorphic form with that principal part.

    Returns the ModularForm witness, or the ObstructionWitness if the
    eigenvalue is wrong."""
    if kind is None:
        kinds = [k for k in (MOD_M, MOD_S) if quotient_dimension(weight2k, k) == 1]
        if not kinds:
            raise ValueError(
                "no one-dimensional quotient in weight 2k=%d; pass kind=" % weight2k)
        kind = kinds[0]
    else:
        kind = _canon_kind(kind)
    w = 2 - weight2k
    pp1 = PrincipalPart({1: 1})
    lam = as_coeff(eigenvalue) * Fraction(1, m ** (weight2k - 1))
    diff = hecke_on_principal_part(pp1, w, m) - pp1.scale(lam)
    in_s_shriek = kind == MOD_S
    return whbasis.solve_principal_part(w, diff, in_s_shriek, precision)
