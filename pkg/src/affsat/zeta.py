"""Curve zeta functions over finite fields and Tamagawa volume formulas.

zeta(s) = P(q^{-s}) / ((1 - q^{-s})(1 - q^{1-s})) with P the Frobenius
characteristic polynomial on H^1 (degree 2g, P(0) = 1, functional
equation P(T) = q^g T^{2g} P(1/(qT))).  Volumes:

* finite:  q^{(g-1) dim G} prod_i zeta(d_i), the d_i the invariant
  degrees; also assembled independently from the graded cohomology of
  the classifying-stack generators tensored with curve homology
  (super-symmetric trace), the two routes agreeing identically;
* affine:  prod_{i>=1} zeta(d_i) / prod_{i>=2} zeta(d_i - 1) with
  symbolic multiset cancellation (simply-laced simple types only).
"""

from __future__ import annotations

from fractions import Fraction

import mpmath as mp

from .errors import PoleError, PreconditionError
from .qrat import QRat


class CurveZeta:
    """Zeta data of a smooth projective curve over F_q."""

    def __init__(self, q, genus, L_poly):
        self.q = int(q)
        self.genus = int(genus)
        self.L_poly = tuple(int(c) for c in L_poly)
        if self.q < 2:
            raise PreconditionError("zeta-eisenstein", "CurveZeta",
                                    "q must be a prime power >= 2")
        if self.genus < 0:
            raise PreconditionError("zeta-eisenstein", "CurveZeta",
                                    "negative genus")
        P = self.L_poly
        if len(P) != 2 * self.genus + 1 or P[0] != 1:
            raise PreconditionError(
                "zeta-eisenstein", "CurveZeta",
                "L-polynomial must have degree 2*genus with constant term 1")
        for k in range(2 * self.genus + 1):
            lhs = Fraction(P[k])
            rhs = Fraction(P[2 * self.genus - k]) * Fraction(self.q) ** (k - self.genus)
            if lhs != rhs:
                raise PreconditionError(
                    "zeta-eisenstein", "CurveZeta",
                    "functional equation fails at coefficient %d" % k)
        if self.class_number() <= 0:
            raise PreconditionError("zeta-eisenstein", "CurveZeta",
                                    "P(1) = #Pic^0 must be positive")

    @staticmethod
    def projective_line(q):
        return CurveZeta(q, 0, (1,))

    @staticmethod
    def from_json(d):
        return CurveZeta(d["q"], d["genus"], d["L_poly"])

    def to_json(self):
        return {"q": self.q, "genus": self.genus, "L_poly": list(self.L_poly)}

    def class_number(self):
        """#Pic^0 = P(1)."""
        return sum(self.L_poly)

    # -- numeric evaluation -------------------------------------------------------

    def _qs(self, s):
        return mp.e ** (-mp.mpmathify(s) * mp.log(self.q))

    def eval(self, s, pole_tol=None):
        """zeta(s) for complex s away from the poles."""
        t = self._qs(s)
        d1 = 1 - t
        d2 = 1 - self.q * t
        tol = pole_tol if pole_tol is not None else mp.mpf(10) ** (-mp.mp.dps + 4)
        if abs(d1) < tol or abs(d2) < tol:
            raise PoleError("zeta evaluation at a pole: s = %s" % s,
                            detail={"s": str(s)})
        num = mp.polyval(list(reversed(self.L_poly)), t)
        return num / (d1 * d2)

    def residue_at_1(self):
        """P(1) / (q^{g-1} (q-1) ln q), the residue of zeta at s = 1."""
        q = mp.mpf(self.q)
        return (self.class_number()
                / (q ** (self.genus - 1) * (q - 1) * mp.log(q)))

    # -- symbolic evaluation at integer arguments -----------------------------------

    def zeta_qrat(self, d):
        """zeta(d) as an exact rational function of a formal q, for an
        integer d >= 2 (the curve's specific q enters only through the
        integer L-polynomial coefficients)."""
        P = QRat.from_int(0)
        for k, c in enumerate(self.L_poly):
            P = P + QRat.q_power(-d * k) * c
        den1 = QRat.from_int(1) - QRat.q_power(-d)
        den2 = QRat.from_int(1) - QRat.q_power(1 - d)
        return P / den1 / den2

    def eval_qrat(self, x):
        """Evaluate an exact q-expression at this curve's q, numerically."""
        return mp.mpf(x.eval(Fraction(self.q)).numerator) / mp.mpf(
            x.eval(Fraction(self.q)).denominator)


def _qrat_to_mpf(x, q):
    v = x.eval(Fraction(q))
    return mp.mpf(v.numerator) / mp.mpf(v.denominator)


# ---------------------------------------------------------------------------
# Tamagawa volumes


def _sym_even_factor(e):
    """Super-symmetric trace of one even generator of Frobenius weight
    q^{-e}: the geometric series 1/(1 - q^{-e})."""
    return (QRat.from_int(1) - QRat.q_power(-e)).inv()


def _ext_odd_block(curve, d):
    """Alternating exterior trace over the odd block c tensor H_{-1} of
    weight exponent d: sum_k (-1)^k e_k q^{-kd} = P(q^{-d})."""
    out = QRat.from_int(0)
    for k, c in enumerate(curve.L_poly):
        out = out + QRat.q_power(-d * k) * c
    return out


def tamagawa_finite(curve, datum, mode="formula"):
    """Groupoid volume of the bundle stack: exact in a formal q, plus the
    numeric value at the curve's q.

    formula mode:    q^{(g-1) dim G} prod_i zeta(d_i)
    cohomology mode: the same volume assembled generator by generator
    from Sym of (invariant-degree classes tensor H_*(curve)), traces in
    the super sense.
    """
    g = curve.genus
    pref = QRat.q_power((g - 1) * datum.dim_G)
    if mode == "formula":
        total = pref
        for d in datum.exponents:
            total = total * curve.zeta_qrat(d)
    elif mode == "cohomology":
        total = pref
        for d in datum.exponents:
            total = total * _sym_even_factor(d)        # c_i x H_0
            total = total * _sym_even_factor(d - 1)    # c_i x H_{-2}
            total = total * _ext_odd_block(curve, d)   # c_i x H_{-1}
    else:
        raise PreconditionError("zeta-eisenstein", "tamagawa_finite",
                                "mode must be formula or cohomology")
    return {"symbolic": total, "numeric": _qrat_to_mpf(total, curve.q)}


def tamagawa_affine(curve, datum):
    """Affine volume prod zeta(d_i) / prod zeta(d_i - 1), i >= 2 in the
    denominator, with symbolic cancellation before evaluation."""
    if not datum.simply_laced:
        raise PreconditionError(
            "zeta-eisenstein", "tamagawa_affine",
            "the affine volume formula assumes a simply-laced simple type; "
            "%s is not" % datum.cartan_label)
    nums = sorted(datum.exponents)
    dens = sorted(d - 1 for d in datum.exponents[1:])
    red_n, red_d = list(nums), []
    for d in dens:
        if d in red_n:
            red_n.remove(d)
        else:
            red_d.append(d)
    total = QRat.from_int(1)
    for d in red_n:
        total = total * curve.zeta_qrat(d)
    for d in red_d:
        total = total / curve.zeta_qrat(d)
    return {
        "numerator": red_n,
        "denominator": red_d,
        "cancelled": bool(set(nums) & set(dens)),
        "product": zeta_product_str(red_n, red_d),
        "unreduced": {"numerator": nums, "denominator": dens},
        "symbolic": total,
        "numeric": _qrat_to_mpf(total, curve.q),
    }


def zeta_product_str(nums, dens):
    def side(ds):
        out = []
        for d in sorted(set(ds)):
            m = ds.count(d)
            out.append("ζ(%d)" % d + ("^%d" % m if m > 1 else ""))
        return "".join(out)
    if not dens:
        return side(nums) or "1"
    return "%s/(%s)" % (side(nums) or "1", side(dens))
