"""Truncated Laurent series in q with exact rational coefficients.

A series stores the window [val, prec): exactly prec - val coefficients.
Coefficients below the window start are zero by convention (finite principal
part); nothing is known at prec or beyond.  Every operation tracks the
provable window pessimistically and never extends precision:

    add:    window [min(va, vb), min(Pa, Pb))
    mul:    window [va + vb,     min(Pa + vb, Pb + va))
    invert: window [-v*,         P - 2 v*)   with v* the true valuation

Coefficients are Python ints when integral, fractions.Fraction otherwise;
both print as "num" or "num/den" which is also the serialization format.
"""

import json
from fractions import Fraction

# size threshold above which integer convolution switches to Kronecker packing
_KRON_CUTOFF = 20000


class QSeriesError(Exception):
    pass


class ZeroLeadingCoefficient(QSeriesError):
    """Inversion of a series that is zero through its whole stored window."""


class InsufficientPrecision(QSeriesError):
    """The input windows cannot support the requested output window."""


class PrecisionExceeded(QSeriesError):
    """A coefficient at or beyond the precision bound was requested."""


def as_coeff(x):
    """Normalize a number to int (when integral) or Fraction."""
    if type(x) is int:
        return x
    if isinstance(x, Fraction):
        return x._numerator if x._denominator == 1 else x
    if isinstance(x, int):
        return int(x)
    if isinstance(x, str):
        return as_coeff(Fraction(x))
    raise TypeError("coefficient must be int, Fraction or 'num/den' string, got %r" % (x,))


def _conv_school(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def _conv_kron(a, b):
    # exact integer convolution via byte-packed Kronecker substitution:
    # split both factors into nonnegative parts and do four bigint products
    n = len(a) + len(b) - 1
    ma = max(abs(x) for x in a) or 1
    mb = max(abs(x) for x in b) or 1
    slot_bits = (ma * mb * min(len(a), len(b))).bit_length() + 1
    slot = (slot_bits + 7) // 8

    def packpos(v):
        return int.from_bytes(b"".join(x.to_bytes(slot, "little") for x in v), "little")

    def unpack(acc):
        raw = acc.to_bytes(slot * n + 16, "little")
        return [int.from_bytes(raw[i * slot:(i + 1) * slot], "little") for i in range(n)]

    ap = [x if x > 0 else 0 for x in a]
    an = [-x if x < 0 else 0 for x in a]
    bp = [x if x > 0 else 0 for x in b]
    bn = [-x if x < 0 else 0 for x in b]
    pp = unpack(packpos(ap) * packpos(bp))
    nn = unpack(packpos(an) * packpos(bn))
    pn = unpack(packpos(ap) * packpos(bn))
    np_ = unpack(packpos(an) * packpos(bp))
    return [pp[i] + nn[i] - pn[i] - np_[i] for i in range(n)]


def _convolve(a, b):
    """Exact convolution of two coefficient lists (int/Fraction mixed)."""
    if not a or not b:
        return []
    if all(type(x) is int for x in a) and all(type(x) is int for x in b):
        if len(a) * len(b) >= _KRON_CUTOFF:
            return _conv_kron(a, b)
        return _conv_school(a, b)
    return _conv_school(a, b)


class LaurentSeries:
    """Immutable truncated Laurent series over the rationals."""

    __slots__ = ("val", "prec", "coeffs")

    def __init__(self, valuation, coefficients, precision=None):
        coeffs = tuple(as_coeff(c) for c in coefficients)
        if precision is None:
            precision = valuation + len(coeffs)
        if precision - valuation != len(coeffs):
            raise ValueError("window [%d, %d) needs %d coefficients, got %d"
                             % (valuation, precision, precision - valuation, len(coeffs)))
        object.__setattr__(self, "val", valuation)
        object.__setattr__(self, "prec", precision)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentSeries is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, precision, valuation=None):
        if valuation is None:
            valuation = min(0, precision)
        if valuation > precision:
            valuation = precision
        return cls(valuation, [0] * (precision - valuation), precision)

    @classmethod
    def one(cls, precision):
        return cls.monomial(0, precision)

    @classmethod
    def monomial(cls, n, precision, coeff=1):
        if n >= precision:
            raise InsufficientPrecision("monomial exponent %d not below precision %d" % (n, precision))
        return cls(n, [coeff] + [0] * (precision - n - 1), precision)

    @classmethod
    def from_coeff_map(cls, mapping, precision, valuation=None):
        if valuation is None:
            valuation = min(list(mapping) + [0])
        coeffs = [0] * (precision - valuation)
        for n, c in mapping.items():
            if n >= precision:
                raise InsufficientPrecision("exponent %d not below precision %d" % (n, precision))
            if n < valuation:
                raise ValueError("exponent %d below window start %d" % (n, valuation))
            coeffs[n - valuation] = c
        return cls(valuation, coeffs, precision)

    # -- inspection ---------------------------------------------------

    def coefficient(self, n):
        if n >= self.prec:
            raise PrecisionExceeded("coefficient %d requested but precision is %d" % (n, self.prec))
        if n < self.val:
            return 0
        return self.coeffs[n - self.val]

    def valuation(self):
        """Index of the first nonzero stored coefficient, None if the window is all zero."""
        for i, c in enumerate(self.coeffs):
            if c:
                return self.val + i
        return None

    def is_zero(self):
        return self.valuation() is None

    def coeff_items(self):
        return [(self.val + i, c) for i, c in enumerate(self.coeffs)]

    # -- arithmetic ---------------------------------------------------

    def add(self, other):
        lo = min(self.val, other.val)
        hi = min(self.prec, other.prec)
        if hi <= lo:
            return LaurentSeries(hi, [], hi)
        out = [0] * (hi - lo)
        for s in (self, other):
            for i, c in enumerate(s.coeffs):
                n = s.val + i
                if lo <= n < hi and c:
                    out[n - lo] += c
        return LaurentSeries(lo, out, hi)

    def neg(self):
        return LaurentSeries(self.val, [-c for c in self.coeffs], self.prec)

    def sub(self, other):
        return self.add(other.neg())

    def mul(self, other):
        lo = self.val + other.val
        hi = min(self.prec + other.val, other.prec + self.val)
        if hi <= lo:
            return LaurentSeries(hi, [], hi)
        conv = _convolve(list(self.coeffs), list(other.coeffs))
        return LaurentSeries(lo, conv[:hi - lo], hi)

    def scale(self, c):
        c = as_coeff(Fraction(c) if not isinstance(c, (int, Fraction)) else c)
        return LaurentSeries(self.val, [c * x for x in self.coeffs], self.prec)

    def shift(self, k):
        return LaurentSeries(self.val + k, self.coeffs, self.prec + k)

    def invert(self, target_precision=None):
        """Multiplicative inverse, provable on [-v*, prec - 2 v*)."""
        vstar = self.valuation()
        if vstar is None:
            raise ZeroLeadingCoefficient("series is zero through its window, cannot invert")
        max_target = self.prec - 2 * vstar
        if target_precision is None:
            target_precision = max_target
        if target_precision > max_target:
            raise InsufficientPrecision(
                "inverse requested to precision %d but input supports only %d"
                % (target_precision, max_target))
        length = target_precision + vstar  # window [-v*, target)
        if length <= 0:
            return LaurentSeries(target_precision, [], target_precision)
        u = [self.coefficient(vstar + j) for j in range(length)]
        if all(type(x) is int for x in u) and u[0] in (1, -1):
            lead = u[0]
            w = [lead]
            for n in range(1, length):
                acc = 0
                for i in range(1, n + 1):
                    if u[i]:
                        acc += u[i] * w[n - i]
                w.append(-lead * acc)
        else:
            u = [Fraction(x) for x in u]
            w = [1 / u[0]]
            for n in range(1, length):
                acc = Fraction(0)
                for i in range(1, n + 1):
                    if u[i]:
                        acc += u[i] * w[n - i]
                w.append(-acc / u[0])
        return LaurentSeries(-vstar, w, target_precision)

    def div(self, other, target_precision=None):
        """self / other.  With an explicit target the result window ends exactly there."""
        vstar = other.valuation()
        if vstar is None:
            raise ZeroLeadingCoefficient("division by a series that is zero through its window")
        if target_precision is None:
            inv = other.invert()
            return self.mul(inv)
        need_inv = target_precision - self.val
        if self.prec - vstar < target_precision:
            raise InsufficientPrecision(
                "dividend precision %d cannot support quotient precision %d"
                % (self.prec, target_precision))
        inv = other.invert(need_inv)
        out = self.mul(inv)
        if out.prec < target_precision:
            raise InsufficientPrecision(
                "quotient provable only to %d, requested %d" % (out.prec, target_precision))
        return out.truncate(target_precision)

    def pow(self, e):
        if e < 0 or e != int(e):
            raise ValueError("exponent must be a nonnegative integer")
        e = int(e)
        if e == 0:
            return LaurentSeries.one(self.prec)
        result = None
        base = self
        while e:
            if e & 1:
                result = base if result is None else result.mul(base)
            e >>= 1
            if e:
                base = base.mul(base)
        return result

    def d_power(self, j):
        """Apply (q d/dq)^j: coefficient at n picks up a factor n^j."""
        if j < 0:
            raise ValueError("d_power exponent must be nonnegative")
        out = [((self.val + i) ** j) * c for i, c in enumerate(self.coeffs)]
        return LaurentSeries(self.val, out, self.prec)

    def truncate(self, new_precision):
        if new_precision > self.prec:
            raise InsufficientPrecision(
                "cannot extend precision %d to %d" % (self.prec, new_precision))
        if new_precision <= self.val:
            return LaurentSeries(new_precision, [], new_precision)
        return LaurentSeries(self.val, self.coeffs[:new_precision - self.val], new_precision)

    # -- operators ----------------------------------------------------

    def __add__(self, other):
        if isinstance(other, LaurentSeries):
            return self.add(other)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, LaurentSeries):
            return self.sub(other)
        return NotImplemented

    def __neg__(self):
        return self.neg()

    def __mul__(self, other):
        if isinstance(other, LaurentSeries):
            return self.mul(other)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, LaurentSeries):
            return self.div(other)
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1, 1) / other)
        return NotImplemented

    def __pow__(self, e):
        return self.pow(e)

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return self.val == other.val and self.prec == other.prec and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.val, self.prec, self.coeffs))

    def __repr__(self):
        return "LaurentSeries(val=%d, prec=%d, %s)" % (self.val, self.prec, str(self))

    def __str__(self):
        parts = []
        for n, c in self.coeff_items():
            if not c:
                continue
            mag = abs(c)
            if n == 0:
                term = str(mag)
            else:
                qp = "q" if n == 1 else "q^%d" % n
                term = qp if mag == 1 else "%s*%s" % (mag, qp)
            if not parts:
                parts.append(term if c > 0 else "-" + term)
            else:
                parts.append(("+ " if c > 0 else "- ") + term)
        body = " ".join(parts) if parts else "0"
        return "%s + O(q^%d)" % (body, self.prec)


def equals_to_precision(a, b):
    """Compare on the overlap of the known windows; returns (equal, (lo, hi))."""
    lo = min(a.val, b.val)
    hi = min(a.prec, b.prec)
    if hi <= lo:
        return True, (hi, hi)
    for n in range(lo, hi):
        if a.coefficient(n) != b.coefficient(n):
            return False, (lo, hi)
    return True, (lo, hi)


def first_mismatch(a, b):
    """First index in the common window where a and b differ, or None."""
    lo = min(a.val, b.val)
    hi = min(a.prec, b.prec)
    for n in range(lo, hi):
        if a.coefficient(n) != b.coefficient(n):
            return n
    return None


# -- serialization ----------------------------------------------------

def to_json_obj(s):
    return {
        "valuation": s.val,
        "precision": s.prec,
        "coefficients": [str(c) for c in s.coeffs],
    }


def from_json_obj(obj):
    return LaurentSeries(int(obj["valuation"]),
                         [as_coeff(c) for c in obj["coefficients"]],
                         int(obj["precision"]))


def dumps(s, **kw):
    return json.dumps(to_json_obj(s), **kw)


def loads(text):
    return from_json_obj(json.loads(text))
