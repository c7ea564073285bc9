"""Iwahori-Hecke algebra in Bernstein normal form X_lambda T_w.

Generators: X_lambda for lattice elements lambda and T_w for Weyl
elements, subject to

1. T_w T_w' = T_ww' when lengths add;
2. X_lambda X_mu = X_{lambda+mu};
3. f T_s - T_s s(f) = (q-1)(f - s(f)) / (1 - X_{-alpha_s}) for any
   Laurent combination f of X's and any simple reflection s (the right
   side is again such a combination: the division is exact);

plus the quadratic relation T_s^2 = (q-1) T_s + q, without which the
three relations above do not close to the Iwahori-Hecke algebra (see
the repository notes on conventions).  Multiplication rewrites T_w X_mu
left-to-right along a reduced word of w, which terminates by length.

Affine mode restricts supports to the cone fragment (level > 0, or
level = 0 with zero finite part), which is stable under all rewrites;
the grading is by the level slot: deg X_lambda = level(lambda),
deg T_w = 0.
"""

from __future__ import annotations

from .errors import PreconditionError
from .qrat import QRat, qrat_parse, qrat_str
from .rootdata import LatticeVector, weyl_group


class HeckeAlgebra:
    def __init__(self, datum, affine=False):
        self.datum = datum
        self.affine = affine
        self.mode = "affine" if affine else "finite"
        self.group = weyl_group(datum, affine=affine)
        self._identity = self.group.enumerate(max_length=0)[0]
        self._push_cache = {}
        self._cross_cache = {}

    # -- element constructors ---------------------------------------------------

    def zero(self):
        return HeckeElement(self, {})

    def one(self):
        return self.x_t(self._zero_vec(), self._identity)

    def _zero_vec(self):
        return LatticeVector(0, (0,) * self.datum.rank, 0)

    def _check_cone(self, lam):
        if self.affine and not self.datum.in_tits_cone(lam):
            raise PreconditionError(
                "hecke", "hecke_mul",
                "monomial X_%s outside the cone fragment (need level > 0, or "
                "level = 0 with zero finite part)" % str(lam.as_tuple()))

    def x(self, lam, coeff=None):
        self._check_cone(lam)
        return self.x_t(lam, self._identity, coeff)

    def t(self, word, coeff=None):
        el = self._identity
        for i in word:
            el = self.group.mult(el, self.group.simple(i))
        return self.x_t(self._zero_vec(), el, coeff)

    def x_t(self, lam, w_elem, coeff=None):
        coeff = QRat.from_int(1) if coeff is None else coeff
        if coeff.is_zero():
            return self.zero()
        return HeckeElement(self, {(lam, w_elem.mat): coeff})

    def spherical_projector(self):
        """P = sum of all T_w over the finite group."""
        if self.affine:
            raise PreconditionError("hecke", "spherical_sandwich",
                                    "the T-sum over an affine group is infinite")
        terms = {(self._zero_vec(), w.mat): QRat.from_int(1)
                 for w in self.group.enumerate()}
        return HeckeElement(self, terms)

    # -- reflection action on X-polynomials ----------------------------------------

    def _reflect_xpoly(self, i, xpoly):
        return {self.group.reflect(i, lam): c for lam, c in xpoly.items()}

    def bernstein_cross(self, xpoly, i):
        """(q-1)(f - s_i(f)) / (1 - X_{-alpha_i}) as an X-polynomial.

        The division is exact by the cross relation; inexactness signals
        an internal inconsistency and raises ArithmeticError.
        """
        if isinstance(xpoly, HeckeElement):
            xpoly = xpoly.as_xpoly()
        alpha = self.datum.simple_coroot(i)
        numer = {}
        for lam, c in xpoly.items():
            numer[lam] = numer.get(lam, QRat.from_int(0)) + c
        for lam, c in self._reflect_xpoly(i, xpoly).items():
            numer[lam] = numer.get(lam, QRat.from_int(0)) - c
        numer = {m: c for m, c in numer.items() if not c.is_zero()}
        quot = {}
        guard = 0
        while numer:
            guard += 1
            if guard > 100000:
                raise ArithmeticError("cross-relation division does not terminate")
            lam = max(numer, key=lambda m: (self.datum.affine_pairing(i, m),
                                            m.as_tuple()))
            c = numer.pop(lam)
            quot[lam] = quot.get(lam, QRat.from_int(0)) + c
            # subtract c * X_lam * (1 - X_{-alpha}); the X_lam part cancels
            lower = lam - alpha
            rest = numer.get(lower, QRat.from_int(0)) + c
            if rest.is_zero():
                numer.pop(lower, None)
            else:
                numer[lower] = rest
            if self.datum.affine_pairing(i, lower) < -4 * abs(
                    self.datum.affine_pairing(i, lam)) - 8:
                raise ArithmeticError("inexact cross-relation division")
        qm1 = QRat.make((-1, 1))
        return {m: c * qm1 for m, c in quot.items() if not (c * qm1).is_zero()}

    # -- core rewrites ----------------------------------------------------------------

    def _t_times_x(self, w_elem, lam):
        """T_w X_lambda in normal form, as a term dict."""
        cache_key = (w_elem.mat, lam)
        hit = self._push_cache.get(cache_key)
        if hit is not None:
            return hit
        if w_elem.length == 0:
            out = {(lam, self._identity.mat): QRat.from_int(1)}
            self._push_cache[cache_key] = out
            return out
        i = w_elem.word[0]
        rest = self._element_from_word(w_elem.word[1:])
        inner = self._t_times_x(rest, lam)     # T_rest X_lam
        out = {}
        for (mu, wmat), c in inner.items():
            w = self.group.element_by_matrix(wmat)
            # T_i X_mu = X_{s_i mu} T_i - cross(s_i applied to X_mu)
            smu = self.group.reflect(i, mu)
            t_part = self._t_times_t(self.group.simple(i), w)
            for (vmat, c2) in t_part.items():
                key = (smu, vmat)
                out[key] = out.get(key, QRat.from_int(0)) + c * c2
            for nu, c3 in self._cross_monomial(smu, i).items():
                key = (nu, w.mat)
                out[key] = out.get(key, QRat.from_int(0)) - c * c3
        out = {k: v for k, v in out.items() if not v.is_zero()}
        self._push_cache[cache_key] = out
        return out

    def _cross_monomial(self, lam, i):
        key = (lam, i)
        hit = self._cross_cache.get(key)
        if hit is None:
            hit = self.bernstein_cross({lam: QRat.from_int(1)}, i)
            self._cross_cache[key] = hit
        return hit

    def _element_from_word(self, word):
        el = self._identity
        for i in word:
            el = self.group.mult(el, self.group.simple(i))
        return el

    def _t_times_t(self, a, b):
        """T_a T_b as {matrix: coeff}."""
        state = {a.mat: QRat.from_int(1)}
        q = QRat.q_power(1)
        qm1 = QRat.make((-1, 1))
        for i in b.word:
            si = self.group.simple(i)
            new = {}
            for wmat, c in state.items():
                w = self.group.element_by_matrix(wmat)
                ws = self.group.mult(w, si)
                if ws.length > w.length:
                    new[ws.mat] = new.get(ws.mat, QRat.from_int(0)) + c
                else:
                    new[wmat] = new.get(wmat, QRat.from_int(0)) + c * qm1
                    new[ws.mat] = new.get(ws.mat, QRat.from_int(0)) + c * q
            state = {k: v for k, v in new.items() if not v.is_zero()}
        return state

    def mul(self, a, b):
        if a.algebra is not b.algebra:
            raise PreconditionError("hecke", "hecke_mul",
                                    "operands from different algebras (mode or type)")
        out = {}
        for (lam_a, umat), ca in a.terms.items():
            u = self.group.element_by_matrix(umat)
            for (lam_b, vmat), cb in b.terms.items():
                self._check_cone(lam_b)
                v = self.group.element_by_matrix(vmat)
                c = ca * cb
                pushed = self._t_times_x(u, lam_b)     # T_u X_{lam_b}
                for (mu, wmat), c1 in pushed.items():
                    w = self.group.element_by_matrix(wmat)
                    tt = self._t_times_t(w, v)
                    lam = lam_a + mu
                    for (fmat, c2) in tt.items():
                        key = (lam, fmat)
                        s = out.get(key, QRat.from_int(0)) + c * c1 * c2
                        if s.is_zero():
                            out.pop(key, None)
                        else:
                            out[key] = s
        return HeckeElement(self, out)


class HeckeElement:
    """Finite QRat-combination of normal-form monomials X_lambda T_w."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra, terms):
        self.algebra = algebra
        self.terms = {k: v for k, v in terms.items() if not v.is_zero()}

    # -- ring structure ------------------------------------------------------------

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            s = out.get(k, QRat.from_int(0)) + v
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
        return HeckeElement(self.algebra, out)

    def __neg__(self):
        return HeckeElement(self.algebra, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        return self.algebra.mul(self, other)

    def scale(self, c):
        if isinstance(c, int):
            c = QRat.from_int(c)
        return HeckeElement(self.algebra, {k: v * c for k, v in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, HeckeElement) and self.terms == other.terms

    def is_zero(self):
        return not self.terms

    def as_xpoly(self):
        """The element as a pure X-combination; fails if any T_w != 1."""
        out = {}
        for (lam, wmat), c in self.terms.items():
            w = self.algebra.group.element_by_matrix(wmat)
            if w.length != 0:
                raise ValueError("element is not an X-polynomial")
            out[lam] = c
        return out

    # -- grading and cone ------------------------------------------------------------

    def degree_and_cone(self):
        """Multiset of level degrees plus membership in the positive part.

        A monomial X_lambda T_w has degree level(lambda); it belongs to
        the positive part when level > 0, or when level = 0 and the
        finite part vanishes (pure T_w terms times powers of the central
        monomial)."""
        if not self.algebra.affine:
            raise PreconditionError("hecke", "degree_and_cone",
                                    "grading is defined in affine mode")
        degrees = []
        positive = True
        for (lam, _w), _c in sorted(self.terms.items(),
                                    key=lambda kv: (kv[0][0].as_tuple(), kv[0][1])):
            degrees.append(lam.central)
            if not (lam.central > 0 or (lam.central == 0 and not any(lam.finite))):
                positive = False
        return degrees, positive

    # -- textual round-trip ------------------------------------------------------------

    def to_text(self):
        bits = []
        for (lam, wmat) in sorted(self.terms,
                                  key=lambda k: (k[0].as_tuple(),
                                                 self.algebra.group.element_by_matrix(k[1]).word)):
            c = self.terms[(lam, wmat)]
            w = self.algebra.group.element_by_matrix(wmat)
            xs = ",".join(map(str, lam.as_tuple()))
            ts = ",".join(map(str, w.word))
            bits.append("(%s) * X[%s] * T[%s]" % (qrat_str(c), xs, ts))
        return " + ".join(bits) if bits else "(0) * X[] * T[]"

    @staticmethod
    def from_text(algebra, text):
        import re
        text = text.strip()
        if text == "(0) * X[] * T[]":
            return algebra.zero()
        out = algebra.zero()
        for chunk in re.split(r" \+ (?=\()", text):
            m = re.match(r"^\((?P<c>.*)\) \* X\[(?P<x>[-0-9,]*)\] \* T\[(?P<t>[0-9,]*)\]$",
                         chunk)
            if not m:
                raise ValueError("unparseable Hecke term: %r" % chunk)
            coeff = qrat_parse(m.group("c"))
            xs = tuple(int(t) for t in m.group("x").split(",") if t != "")
            word = tuple(int(t) for t in m.group("t").split(",") if t != "")
            lam = LatticeVector.from_tuple(xs)
            out = out + algebra.x_t(lam, algebra._element_from_word(word), coeff)
        return out


# -- module-level operation wrappers ------------------------------------------------


def hecke_mul(a, b):
    return a * b


def bernstein_cross(algebra, f, i):
    """Right-hand side of the cross relation, as a Hecke element."""
    xp = algebra.bernstein_cross(f, i)
    out = algebra.zero()
    for lam, c in xp.items():
        out = out + algebra.x_t(lam, algebra._identity, c)
    return out


def spherical_sandwich(h):
    """P h P for the finite spherical projector P."""
    P = h.algebra.spherical_projector()
    return P * h * P
