"""Finitely supported formal series with lattice exponents.

A GradedSeries maps LatticeVector exponents to exact coefficients
(QRat, or LaurentQ inside affine shell sums) and carries an explicit
delta-depth truncation: exponents e^mu with -mu.delta > trunc are never
stored.  Pure-finite series use trunc = None (no completion direction).
Arithmetic never fabricates terms beyond the minimum of the operand
truncations.
"""

from __future__ import annotations

from .errors import PreconditionError
from .qrat import QRat
from .rootdata import LatticeVector


def delta_depth(mu):
    """Depth of e^mu along the completed direction (e^{-delta} has depth 1)."""
    return -mu.delta


def _min_trunc(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class GradedSeries:
    __slots__ = ("rank", "trunc", "terms")

    def __init__(self, rank, trunc=None, terms=None):
        self.rank = rank
        self.trunc = trunc
        self.terms = {}
        if terms:
            for mu, c in terms.items():
                if c.is_zero():
                    continue
                if trunc is not None and delta_depth(mu) > trunc:
                    continue
                self.terms[mu] = c

    # -- constructors ---------------------------------------------------------

    @staticmethod
    def zero(rank, trunc=None):
        return GradedSeries(rank, trunc)

    @staticmethod
    def monomial(mu, coeff=None, trunc=None):
        coeff = QRat.from_int(1) if coeff is None else coeff
        return GradedSeries(len(mu.finite), trunc, {mu: coeff})

    @staticmethod
    def one(rank, trunc=None, coeff_one=None):
        mu = LatticeVector(0, (0,) * rank, 0)
        return GradedSeries.monomial(mu, coeff_one, trunc)

    # -- basic queries ----------------------------------------------------------

    def coeff(self, mu):
        zero = QRat.from_int(0)
        return self.terms.get(mu, zero)

    def is_zero(self):
        return not self.terms

    def support(self):
        return sorted(self.terms, key=lambda m: (delta_depth(m), m.finite, m.central))

    def __eq__(self, other):
        return (isinstance(other, GradedSeries) and self.rank == other.rank
                and self.trunc == other.trunc and self.terms == other.terms)

    def __repr__(self):
        bits = ["%s * e%s" % (c, (m.central, m.finite, m.delta))
                for m, c in list(self.terms.items())[:6]]
        more = " ..." if len(self.terms) > 6 else ""
        return "GradedSeries(N=%s; %s%s)" % (self.trunc, " + ".join(bits) or "0", more)

    # -- ring operations ----------------------------------------------------------

    def _check_rank(self, other):
        if self.rank != other.rank:
            raise PreconditionError("fseries", "series_mul",
                                    "rank mismatch: %d vs %d" % (self.rank, other.rank))

    def add(self, other):
        self._check_rank(other)
        trunc = _min_trunc(self.trunc, other.trunc)
        out = dict(self.terms)
        for mu, c in other.terms.items():
            s = out.get(mu)
            out[mu] = c if s is None else s + c
        return GradedSeries(self.rank, trunc, out)

    def neg(self):
        return GradedSeries(self.rank, self.trunc,
                            {m: -c for m, c in self.terms.items()})

    def sub(self, other):
        return self.add(other.neg())

    def scale(self, coeff):
        if isinstance(coeff, int):
            coeff = QRat.from_int(coeff)
        return GradedSeries(self.rank, self.trunc,
                            {m: c * coeff for m, c in self.terms.items()})

    def mul(self, other, keep=None):
        """Product; truncation is the minimum of the operands'.

        `keep`, when given, is a predicate on exponents restricting the
        stored support (used by windowed affine products; sound when all
        factors are supported in a cone on which the window is saturated).
        """
        self._check_rank(other)
        trunc = _min_trunc(self.trunc, other.trunc)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mu = m1 + m2
                if trunc is not None and delta_depth(mu) > trunc:
                    continue
                if keep is not None and not keep(mu):
                    continue
                s = out.get(mu)
                prod = c1 * c2
                out[mu] = prod if s is None else s + prod
        return GradedSeries(self.rank, trunc, out)

    def truncate(self, N):
        """Re-truncate to a smaller (or equal) delta depth."""
        trunc = _min_trunc(self.trunc, N)
        return GradedSeries(self.rank, trunc, self.terms)

    def filter(self, keep):
        return GradedSeries(self.rank, self.trunc,
                            {m: c for m, c in self.terms.items() if keep(m)})

    def map_coeffs(self, f):
        return GradedSeries(self.rank, self.trunc,
                            {m: f(c) for m, c in self.terms.items()})

    # -- serialization ---------------------------------------------------------------

    def to_json(self):
        terms = []
        for mu in self.support():
            c = self.terms[mu]
            terms.append({"exp": mu.to_json(), "num": list(c.num), "den": list(c.den)})
        return {"truncation": self.trunc, "terms": terms}

    @staticmethod
    def from_json(d, rank=None):
        terms = {}
        for t in d["terms"]:
            mu = LatticeVector.from_json(t["exp"])
            terms[mu] = QRat.make(tuple(t["num"]), tuple(t["den"]))
            rank = len(mu.finite)
        if rank is None:
            raise ValueError("cannot infer rank from empty series")
        return GradedSeries(rank, d["truncation"], terms)


def series_add(a, b):
    return a.add(b)


def series_mul(a, b):
    return a.mul(b)


def geom_expand(alpha, N=None, s=0, depth=None):
    """Truncated expansion of 1/(1 - q^s e^{-alpha}).

    alpha must either have positive delta degree (then N bounds the
    delta depth of the expansion) or be pure-finite positive (then a
    finite expansion depth is required).  Multiplying the result by
    (1 - q^s e^{-alpha}) gives 1 up to the stated truncation.
    """
    rank = len(alpha.finite)
    if alpha.is_zero():
        raise PreconditionError("fseries", "geom_expand",
                                "cannot invert 1 - e^0")
    if alpha.delta > 0:
        if N is None:
            raise PreconditionError("fseries", "geom_expand",
                                    "delta-positive root needs a truncation order")
        kmax = N // alpha.delta
        trunc = N
    else:
        if alpha.delta < 0 or not all(c >= 0 for c in alpha.finite):
            raise PreconditionError("fseries", "geom_expand",
                                    "root must be positive")
        if depth is None:
            raise PreconditionError("fseries", "geom_expand",
                                    "finite-direction root needs an expansion depth")
        kmax = depth
        trunc = N
    terms = {}
    for k in range(kmax + 1):
        terms[alpha.scale(-k)] = QRat.q_power(s * k)
    return GradedSeries(rank, trunc, terms)


def weyl_act_series(group, el, a):
    """Apply a Weyl element to every exponent; coefficients unchanged.

    Exponents pushed beyond the truncation are dropped; the caller must
    supply an adequate truncation when invariance of the support matters.
    """
    out = {}
    for mu, c in a.terms.items():
        nu = group.act(el, mu)
        if a.trunc is not None and delta_depth(nu) > a.trunc:
            continue
        s = out.get(nu)
        out[nu] = c if s is None else s + c
    return GradedSeries(a.rank, a.trunc, out)
