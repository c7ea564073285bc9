"""Exact rational functions in the formal parameter q.

Polynomials in q are dense tuples of integer coefficients (index =
power of q, trailing zeros stripped).  A `QRat` is a reduced fraction
num/den with den not identically zero, gcd(num, den) = 1 and a positive
leading coefficient of den; equality is tuple equality of this
canonical form.  `LaurentQ` holds a truncated Laurent expansion in
q^{-1} with exact Fraction coefficients, used where group sums converge
only q^{-1}-adically.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd


# ---------------------------------------------------------------------------
# dense integer/Fraction polynomials as tuples, index = power of q


def pnorm(coeffs):
    """Strip trailing zeros; the zero polynomial is ()."""
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def pdeg(p):
    return len(p) - 1  # -1 for the zero polynomial


def padd(a, b):
    n = max(len(a), len(b))
    return pnorm([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                  for i in range(n)])


def pneg(a):
    return tuple(-c for c in a)


def psub(a, b):
    return padd(a, pneg(b))


def pmul(a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca == 0:
            continue
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return pnorm(out)


def pscale(a, c):
    if c == 0:
        return ()
    return tuple(x * c for x in a)


def pshift(a, k):
    """Multiply by q^k, k >= 0."""
    if not a:
        return ()
    return (0,) * k + tuple(a)


def peval(p, x):
    """Horner evaluation; x may be int, Fraction, complex or mpf."""
    acc = 0 * x
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _fdivmod(a, b):
    """Polynomial divmod over Fractions; b must be nonzero."""
    a = [Fraction(c) for c in a]
    b = [Fraction(c) for c in b]
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(a) >= len(b) and any(a):
        while a and a[-1] == 0:
            a.pop()
        if len(a) < len(b):
            break
        k = len(a) - len(b)
        f = a[-1] / lead
        q[k] = f
        for i, c in enumerate(b):
            a[i + k] -= f * c
        a.pop()
    return q, a


def _fprimitive(a):
    """Integer-primitive form of a Fraction polynomial, positive leading."""
    a = pnorm(a)
    if not a:
        return ()
    denoms = 1
    for c in a:
        denoms = denoms * Fraction(c).denominator // gcd(denoms, Fraction(c).denominator)
    ints = [int(Fraction(c) * denoms) for c in a]
    g = 0
    for c in ints:
        g = gcd(g, abs(c))
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return tuple(ints)


def pgcd(a, b):
    """Primitive gcd with positive leading coefficient."""
    a, b = pnorm(a), pnorm(b)
    while b:
        _, r = _fdivmod(a, b)
        a, b = b, pnorm(r)
    return _fprimitive(a) if a else ()


def pdiv_exact(a, b):
    """Exact quotient a/b over the integers; raises if division is inexact."""
    q, r = _fdivmod(a, b)
    if pnorm(r):
        raise ArithmeticError("inexact polynomial division")
    q = pnorm(q)
    if any(Fraction(c).denominator != 1 for c in q):
        raise ArithmeticError("non-integer quotient")
    return tuple(int(c) for c in q)


def _content(a):
    g = 0
    for c in a:
        g = gcd(g, abs(c))
    return g


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QRat:
    """Reduced integer-coefficient rational function of q."""

    num: tuple
    den: tuple

    # -- construction -------------------------------------------------------

    @staticmethod
    def make(num, den=(1,)):
        num, den = pnorm(num), pnorm(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            return QRat((), (1,))
        g = pgcd(num, den)
        if pdeg(g) > 0 or g != (1,):
            num = pdiv_exact(num, g)
            den = pdiv_exact(den, g)
        cg = gcd(_content(num), _content(den))
        if cg > 1:
            num = tuple(c // cg for c in num)
            den = tuple(c // cg for c in den)
        if den[-1] < 0:
            num, den = pneg(num), pneg(den)
        return QRat(num, den)

    @staticmethod
    def from_int(n):
        return QRat.make((n,))

    @staticmethod
    def from_fraction(f):
        f = Fraction(f)
        return QRat.make((f.numerator,), (f.denominator,))

    @staticmethod
    def q_power(k):
        """q^k for any integer k."""
        if k >= 0:
            return QRat(pshift((1,), k), (1,))
        return QRat((1,), pshift((1,), -k))

    # -- predicates ----------------------------------------------------------

    def is_zero(self):
        return not self.num

    def __bool__(self):
        return bool(self.num)

    # -- arithmetic ----------------------------------------------------------

    @staticmethod
    def _coerce(x):
        if isinstance(x, QRat):
            return x
        if isinstance(x, int):
            return QRat.from_int(x)
        if isinstance(x, Fraction):
            return QRat.from_fraction(x)
        return NotImplemented

    def __add__(self, other):
        other = QRat._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return QRat.make(padd(pmul(self.num, other.den), pmul(other.num, self.den)),
                         pmul(self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        return QRat(pneg(self.num), self.den)

    def __sub__(self, other):
        other = QRat._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = QRat._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return QRat.make(pmul(self.num, other.num), pmul(self.den, other.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = QRat._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return QRat.make(pmul(self.num, other.den), pmul(self.den, other.num))

    def __rtruediv__(self, other):
        other = QRat._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, k):
        if k < 0:
            return QRat.from_int(1) / self ** (-k)
        out = QRat.from_int(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def inv(self):
        return QRat.from_int(1) / self

    # -- substitutions and evaluation ----------------------------------------

    def subs_qinv(self):
        """The rational function f(1/q), renormalized."""
        m = max(pdeg(self.num), pdeg(self.den))
        num = pshift(tuple(reversed(self.num)), m - pdeg(self.num))
        den = pshift(tuple(reversed(self.den)), m - pdeg(self.den))
        return QRat.make(num, den)

    def eval(self, x):
        """Evaluate at a numeric q; exact for Fraction input."""
        if isinstance(x, int):
            x = Fraction(x)
        den = peval(self.den, x)
        if den == 0:
            raise ZeroDivisionError("evaluation at a pole")
        return peval(self.num, x) / den

    def laurent_qinv(self, floor):
        """Expansion sum_e c_e q^e with e >= floor; exact Fractions.

        Well defined for any nonzero denominator: the expansion is taken
        in descending powers of q.
        """
        if self.is_zero():
            return {}
        dn, dd = pdeg(self.num), pdeg(self.den)
        top = dn - dd
        # den = q^dd * u(q^{-1}) with u(0) = lead != 0; invert u as a power
        # series in q^{-1} up to order `top - floor`.
        order = top - floor
        if order < 0:
            return {}
        u = list(reversed(self.den))           # u[i] = coeff of q^{dd-i}
        lead = Fraction(u[0])
        inv = [Fraction(1) / lead]
        for n in range(1, order + 1):
            s = Fraction(0)
            for i in range(1, min(n, len(u) - 1) + 1):
                s += u[i] * inv[n - i]
            inv.append(-s / lead)
        nrev = list(reversed(self.num))        # coeff of q^{dn-i}
        out = {}
        for e in range(top, floor - 1, -1):
            n = top - e
            s = Fraction(0)
            for i in range(0, min(n, len(nrev) - 1) + 1):
                if n - i <= order:
                    s += nrev[i] * inv[n - i]
            if s:
                out[e] = s
        return out

    # -- presentation ---------------------------------------------------------

    def __str__(self):
        if self.den == (1,):
            return poly_str(self.num)
        return "(%s)/(%s)" % (poly_str(self.num), poly_str(self.den))

    def to_json(self):
        return {"num": list(self.num), "den": list(self.den)}

    @staticmethod
    def from_json(d):
        return QRat.make(tuple(d["num"]), tuple(d["den"]))


ZERO = QRat((), (1,))
ONE = QRat((1,), (1,))
Q = QRat.q_power(1)
QINV = QRat.q_power(-1)


def poly_str(p):
    """Canonical human-readable form, highest power first."""
    if not p:
        return "0"
    parts = []
    for e in range(len(p) - 1, -1, -1):
        c = p[e]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        c = abs(c)
        if e == 0:
            body = str(c)
        elif e == 1:
            body = "q" if c == 1 else "%d*q" % c
        else:
            body = "q^%d" % e if c == 1 else "%d*q^%d" % (c, e)
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        out += " %s %s" % (sign, body)
    return out


def poly_parse(text):
    """Parse the output of poly_str back to a coefficient tuple."""
    text = text.strip()
    if text == "0":
        return ()
    toks = text.replace("-", " - ").replace("+", " + ").split()
    coeffs = {}
    sign = 1
    i = 0
    while i < len(toks):
        t = toks[i]
        if t == "+":
            sign = 1
            i += 1
            continue
        if t == "-":
            sign = -1
            i += 1
            continue
        if "*" in t:
            cs, qs = t.split("*")
            c = int(cs)
        elif t.startswith("q"):
            c, qs = 1, t
        else:
            c, qs = int(t), None
        if qs is None:
            e = 0
        elif qs == "q":
            e = 1
        else:
            e = int(qs[2:])
        coeffs[e] = coeffs.get(e, 0) + sign * c
        sign = 1
        i += 1
    n = max(coeffs) + 1 if coeffs else 0
    return pnorm([coeffs.get(e, 0) for e in range(n)])


def qrat_str(x):
    return str(x)


def qrat_parse(text):
    text = text.strip()
    if text.startswith("(") and ")/(" in text:
        n, d = text[1:-1].split(")/(")
        return QRat.make(poly_parse(n), poly_parse(d))
    return QRat.make(poly_parse(text))


# ---------------------------------------------------------------------------


class LaurentQ:
    """Truncated Laurent expansion in descending powers of q.

    Terms with exponent below `floor` are discarded; coefficients are
    exact Fractions.  Used as the coefficient ring of affine Weyl shell
    sums, which converge q^{-1}-adically.
    """

    __slots__ = ("terms", "floor")

    def __init__(self, terms, floor):
        self.floor = floor
        self.terms = {e: Fraction(c) for e, c in terms.items()
                      if e >= floor and c != 0}

    @staticmethod
    def zero(floor):
        return LaurentQ({}, floor)

    @staticmethod
    def from_qrat(x, floor):
        return LaurentQ(x.laurent_qinv(floor), floor)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return (isinstance(other, LaurentQ) and self.floor == other.floor
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.floor, tuple(sorted(self.terms.items()))))

    def __add__(self, other):
        floor = max(self.floor, other.floor)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentQ(out, floor)

    def __neg__(self):
        return LaurentQ({e: -c for e, c in self.terms.items()}, self.floor)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        floor = max(self.floor, other.floor)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                if e >= floor:
                    out[e] = out.get(e, 0) + c1 * c2
        return LaurentQ(out, floor)

    def support(self):
        return sorted(self.terms)

    def min_exp(self):
        return min(self.terms) if self.terms else None

    def restrict(self, floor):
        return LaurentQ(self.terms, floor)

    def to_qrat(self):
        """Exact conversion; the stored support must be the whole value."""
        if not self.terms:
            return ZERO
        lo = min(self.terms)
        denoms = 1
        for c in self.terms.values():
            denoms = denoms * c.denominator // gcd(denoms, c.denominator)
        coeffs = [0] * (max(self.terms) - lo + 1)
        for e, c in self.terms.items():
            coeffs[e - lo] = int(c * denoms)
        num = pnorm(coeffs)
        if lo >= 0:
            return QRat.make(pshift(num, lo), (denoms,))
        return QRat.make(num, pshift((denoms,), -lo))

    def __repr__(self):
        body = " + ".join("%s*q^%d" % (c, e)
                          for e, c in sorted(self.terms.items(), reverse=True))
        return "LaurentQ(%s; floor=%d)" % (body or "0", self.floor)


def fit_rational(coeffs, max_num_deg, max_den_deg, verify_extra=4):
    """Fit P/Q with bounded degrees to an initial power-series segment.

    `coeffs` are exact series coefficients c_0, c_1, ...; the fit uses
    the leading part and must reproduce `verify_extra` further
    coefficients exactly, else ValueError.  Returns (num, den) integer
    tuples with den[0] > 0.
    """
    from .linalg import solve_rational

    need = max_num_deg + max_den_deg + 1
    if len(coeffs) < need + verify_extra:
        raise ValueError("not enough coefficients to fit and verify")
    # Unknowns: den d_1..d_m (d_0 = 1), num n_0..n_k.  Equations:
    # sum_{i} d_i c_{j-i} = n_j for j <= k, = 0 for k < j < need.
    m, k = max_den_deg, max_num_deg
    rows, rhs = [], []
    for j in range(k + 1, need):
        row = [Fraction(coeffs[j - i]) if j - i >= 0 else Fraction(0)
               for i in range(1, m + 1)]
        rows.append(row)
        rhs.append(Fraction(-coeffs[j]))
    d = solve_rational(rows, rhs)
    if d is None:
        raise ValueError("no rational fit at the requested degrees")
    den = [Fraction(1)] + list(d)
    num = []
    for j in range(k + 1):
        s = Fraction(0)
        for i in range(0, min(j, m) + 1):
            s += den[i] * coeffs[j - i]
        num.append(s)
    # verify on the tail
    for j in range(need, need + verify_extra):
        s = Fraction(0)
        for i in range(0, min(j, m) + 1):
            s += den[i] * coeffs[j - i]
        if s != 0:
            raise ValueError("rational fit failed verification at order %d" % j)
    nump = _fprimitive_pair(num, den)
    return nump


def _fprimitive_pair(num, den):
    denoms = 1
    for c in list(num) + list(den):
        f = Fraction(c)
        denoms = denoms * f.denominator // gcd(denoms, f.denominator)
    n = pnorm([int(Fraction(c) * denoms) for c in num])
    d = pnorm([int(Fraction(c) * denoms) for c in den])
    g = gcd(_content(n), _content(d))
    if g > 1:
        n = tuple(c // g for c in n)
        d = tuple(c // g for c in d)
    if d and d[0] < 0:
        n, d = pneg(n), pneg(d)
    return n, d
