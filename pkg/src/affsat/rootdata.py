"""Finite Cartan data, affine extensions, and Weyl group enumeration.

All lattice vectors live in Lambda_aff = Z (central) + Z^r (finite part,
simple-coroot coordinates) + Z (delta slot):

* the delta slot carries the imaginary direction; delta = (0, 0, 1) is
  the minimal positive imaginary coroot and is fixed by every affine
  Weyl element;
* the central slot carries the level: it is the unique Weyl-invariant
  linear functional, translations move the finite part by level
  multiples of coroots while the delta coordinate absorbs the quadratic
  drift.

Real affine coroots are (0, beta, j) with beta a finite coroot (j >= 1,
or j = 0 and beta positive) and have multiplicity 1; imaginary coroots
(0, 0, j) have multiplicity r.  The affine simple reflection s_0 is the
reflection in alpha_0 = delta - theta, theta the highest root of the
finite coroot system.  Cartan matrices follow a_ij = <alpha_i,
alpha_j_coroot>; Dynkin node ordering is a chain 1..r-1 with the last
node attached to r-3 for E types and r-2 for D types.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import PreconditionError
from .qrat import QRat, fit_rational


_EXPONENTS = {
    "A": lambda r: tuple(range(2, r + 2)),
    "B": lambda r: tuple(range(2, 2 * r + 1, 2)),
    "C": lambda r: tuple(range(2, 2 * r + 1, 2)),
    "D": lambda r: tuple(sorted(list(range(2, 2 * r - 1, 2)) + [r])),
    "E": {6: (2, 5, 6, 8, 9, 12),
          7: (2, 6, 8, 10, 12, 14, 18),
          8: (2, 8, 12, 14, 18, 20, 24, 30)},
    "F": {4: (2, 6, 8, 12)},
    "G": {2: (2, 6)},
}

_SIMPLY_LACED = {"A", "D", "E"}


def _cartan_matrix(series, r):
    """Pairing matrix P[i][j] = <alpha_i, alpha_j_coroot>."""
    P = [[2 * int(i == j) for j in range(r)] for i in range(r)]

    def edge(i, j, aij=-1, aji=-1):
        P[i][j] = aij
        P[j][i] = aji

    if series in "ABCFG" or (series in "DE" and r >= 2):
        chain = r if series in "AG" else r - 1 if series in "DE" else r
        for i in range(chain - 1):
            edge(i, i + 1)
    if series == "B":
        edge(r - 2, r - 1, -2, -1)   # last simple root short
    elif series == "C":
        edge(r - 2, r - 1, -1, -2)   # last simple root long
    elif series == "D":
        edge(r - 3, r - 1)
    elif series == "E":
        edge(r - 4, r - 1)
    elif series == "F":
        edge(1, 2, -2, -1)
    elif series == "G":
        edge(0, 1, -1, -3)
    return tuple(tuple(row) for row in P)


def _root_closure(pairing_rows):
    """All roots of the system whose simple reflections are
    v -> v - (row_i . v) e_i; returns the positive ones sorted by
    (height, lex)."""
    r = len(pairing_rows)
    simples = [tuple(int(i == j) for j in range(r)) for i in range(r)]
    roots = set(simples)
    frontier = list(simples)
    while frontier:
        new = []
        for v in frontier:
            for i in range(r):
                c = sum(pairing_rows[i][j] * v[j] for j in range(r))
                w = tuple(v[j] - c * int(i == j) for j in range(r))
                if w not in roots:
                    roots.add(w)
                    new.append(w)
        frontier = new
    pos = [v for v in roots if all(c >= 0 for c in v)]
    assert 2 * len(pos) == len(roots)
    return sorted(pos, key=lambda v: (sum(v), v))


def _symmetrizer(P):
    """Half-norms d_i with d_j P[i][j] = d_i P[j][i], normalized max 1."""
    r = len(P)
    d = [None] * r
    d[0] = Fraction(1)
    todo = [0]
    while todo:
        i = todo.pop()
        for j in range(r):
            if i != j and P[i][j] != 0 and d[j] is None:
                d[j] = d[i] * P[j][i] / P[i][j]
                todo.append(j)
    assert all(x is not None for x in d)
    m = max(d)
    return [x / m for x in d]


@dataclass(frozen=True)
class LatticeVector:
    """Element of Z (central/level) + Z^r (finite) + Z (delta)."""

    central: int
    finite: tuple
    delta: int

    @staticmethod
    def pure(finite):
        return LatticeVector(0, tuple(finite), 0)

    def __add__(self, other):
        return LatticeVector(self.central + other.central,
                             tuple(a + b for a, b in zip(self.finite, other.finite)),
                             self.delta + other.delta)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return LatticeVector(-self.central, tuple(-a for a in self.finite), -self.delta)

    def scale(self, k):
        return LatticeVector(k * self.central, tuple(k * a for a in self.finite), k * self.delta)

    def is_zero(self):
        return self.central == 0 and self.delta == 0 and not any(self.finite)

    def is_pure_finite(self):
        return self.central == 0 and self.delta == 0

    def as_tuple(self):
        return (self.central,) + self.finite + (self.delta,)

    @staticmethod
    def from_tuple(t):
        return LatticeVector(t[0], tuple(t[1:-1]), t[-1])

    def to_json(self):
        return {"central": self.central, "finite": list(self.finite), "delta": self.delta}

    @staticmethod
    def from_json(d):
        return LatticeVector(d["central"], tuple(d["finite"]), d["delta"])


class RootDatum:
    """Finite root datum plus the standing data of its affine extension."""

    def __init__(self, series, rank):
        self.cartan_label = "%s%d" % (series, rank)
        self.series = series
        self.rank = rank
        self.cartan_matrix = _cartan_matrix(series, rank)
        self.simply_laced = series in _SIMPLY_LACED

        P = self.cartan_matrix
        r = rank
        # coroot system: reflections on coroot coordinates use rows of P
        self.positive_coroots = tuple(_root_closure(P))
        # root system itself: reflections on root coordinates use columns
        Pt = tuple(tuple(P[j][i] for j in range(r)) for i in range(r))
        pos_roots = _root_closure(Pt)

        exp = _EXPONENTS[series]
        self.exponents = exp[rank] if isinstance(exp, dict) else exp(rank)
        self.dim_N = len(self.positive_coroots)
        self.dim_G = rank + 2 * self.dim_N

        d = _symmetrizer(P)
        self._half_norms = d

        # highest root theta of the root system -> its coroot; the height
        # of that coroot plus one is the dual Coxeter number
        theta = max(pos_roots, key=lambda v: (sum(v), v))
        d_theta = self._root_half_norm(theta, d)
        theta_coroot = tuple(int(c * d[i] / d_theta) for i, c in enumerate(theta))
        self.dual_coxeter = 1 + sum(theta_coroot)

        # highest root of the coroot system: the affine node attaches here
        self.theta_coroot_system = max(self.positive_coroots, key=lambda v: (sum(v), v))
        self._theta_functional = self._reflection_functional(self.theta_coroot_system)

        assert sum(2 * di - 1 for di in self.exponents) == self.dim_G
        assert sum(di - 1 for di in self.exponents) == self.dim_N
        assert self.exponents[0] == 2

    # -- pairings ------------------------------------------------------------

    def _root_half_norm(self, root_coords, d=None):
        d = d or self._half_norms
        P = self.cartan_matrix
        r = self.rank
        total = Fraction(0)
        for i in range(r):
            for j in range(r):
                total += root_coords[i] * root_coords[j] * d[j] * P[i][j]
        return total / 2

    def _coroot_form(self, v, w):
        """Invariant form on coroot coordinates, (a_i, a_j) = P[i][j]/d_i."""
        P = self.cartan_matrix
        d = self._half_norms
        r = self.rank
        return sum(Fraction(P[i][j], 1) / d[i] * v[i] * w[j]
                   for i in range(r) for j in range(r))

    def _reflection_functional(self, coroot_vec):
        """Integer row phi with s_v(x) = x - phi(x) v on coroot coordinates."""
        norm = self._coroot_form(coroot_vec, coroot_vec)
        basis = [tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank)]
        phi = [2 * self._coroot_form(coroot_vec, e) / norm for e in basis]
        assert all(f.denominator == 1 for f in phi)
        return tuple(int(f) for f in phi)

    def simple_pairing(self, i, finite):
        """<alpha_i, v> for a finite vector in coroot coordinates, i in 1..r."""
        row = self.cartan_matrix[i - 1]
        return sum(row[j] * finite[j] for j in range(self.rank))

    def affine_pairing(self, i, vec):
        """<alpha_i, vec> for vec a LatticeVector, i in 0..r."""
        if i == 0:
            theta = self._theta_functional
            return vec.central - sum(theta[j] * vec.finite[j] for j in range(self.rank))
        return self.simple_pairing(i, vec.finite)

    def rho_height(self, finite):
        """<v, rho_coroot>: the coordinate sum in simple-coroot coordinates."""
        return sum(finite)

    def rho_aff_pairing(self, vec):
        """Affine rho pairing: finite height plus h_dual times the delta slot;
        equals 1 on every affine simple coroot."""
        return self.rho_height(vec.finite) + self.dual_coxeter * vec.delta

    def half_sum_positive_coroots(self):
        """rho of the coroot system, as a Fraction vector."""
        r = self.rank
        acc = [Fraction(0)] * r
        for v in self.positive_coroots:
            for i in range(r):
                acc[i] += Fraction(v[i], 2)
        return tuple(acc)

    def is_dominant(self, vec, affine=False):
        idx = range(0 if affine else 1, self.rank + 1)
        return all(self.affine_pairing(i, vec) >= 0 for i in idx)

    def in_tits_cone(self, vec):
        return vec.central > 0 or (vec.central == 0 and not any(vec.finite))

    # -- affine roots ----------------------------------------------------------

    def alpha0_coroot(self):
        theta = self.theta_coroot_system
        return LatticeVector(0, tuple(-c for c in theta), 1)

    def simple_coroot(self, i):
        """Affine simple coroot as a LatticeVector, i in 0..r."""
        if i == 0:
            return self.alpha0_coroot()
        return LatticeVector.pure(tuple(int(j == i - 1) for j in range(self.rank)))

    def to_json(self):
        return {
            "label": self.cartan_label,
            "rank": self.rank,
            "cartan_matrix": [list(row) for row in self.cartan_matrix],
            "positive_coroots": [list(v) for v in self.positive_coroots],
            "exponents": list(self.exponents),
            "dual_coxeter": self.dual_coxeter,
            "dim_G": self.dim_G,
            "dim_N": self.dim_N,
            "simply_laced": self.simply_laced,
        }


_LABEL_RE = re.compile(r"^([A-G])(\d+)$")
_RANK_BOUNDS = {"A": (1, None), "B": (2, None), "C": (2, None), "D": (4, None),
                "E": (6, 8), "F": (4, 4), "G": (2, 2)}
_DATUM_CACHE = {}


def build_root_datum(label):
    """Construct the standing data for a simple type such as "A2" or "E8"."""
    m = _LABEL_RE.match(label.strip())
    if not m:
        raise PreconditionError("rootdata", "build_root_datum",
                                "unsupported Cartan label %r" % label)
    series, rank = m.group(1), int(m.group(2))
    lo, hi = _RANK_BOUNDS[series]
    if rank < lo or (hi is not None and rank > hi):
        raise PreconditionError("rootdata", "build_root_datum",
                                "unsupported Cartan label %r" % label)
    key = (series, rank)
    if key not in _DATUM_CACHE:
        _DATUM_CACHE[key] = RootDatum(series, rank)
    return _DATUM_CACHE[key]


# ---------------------------------------------------------------------------
# Weyl groups


class WeylElement:
    """Group element with a reduced word, its length, and lattice action."""

    __slots__ = ("word", "length", "mat", "inv_mat", "inv_roots")

    def __init__(self, word, length, mat, inv_mat, inv_roots):
        self.word = word
        self.length = length
        self.mat = mat
        self.inv_mat = inv_mat
        self.inv_roots = inv_roots   # positive roots sent negative, as tuples

    def __repr__(self):
        return "W[%s]" % ",".join(map(str, self.word))


def _mat_mul_int(a, b):
    n = len(a)
    return tuple(tuple(sum(a[i][t] * b[t][j] for t in range(n)) for j in range(n))
                 for i in range(n))


def _mat_vec_int(a, v):
    return tuple(sum(row[j] * v[j] for j in range(len(v))) for row in a)


class WeylGroup:
    """Finite Weyl group, or the affine Weyl group acting on Lambda_aff.

    Elements are enumerated breadth-first and interned by action matrix,
    so each group element appears once with a reduced word of minimal
    length.  Enumeration order (lengths, then discovery order) is
    deterministic.
    """

    def __init__(self, datum, affine=False):
        self.datum = datum
        self.affine = affine
        r = datum.rank
        self.gen_indices = tuple(range(0, r + 1)) if affine else tuple(range(1, r + 1))
        self.dim = r + 2 if affine else r
        self.gens = {i: self._gen_matrix(i) for i in self.gen_indices}
        self.simple_root_vecs = {i: self._simple_root_vec(i) for i in self.gen_indices}
        ident = tuple(tuple(int(i == j) for j in range(self.dim)) for i in range(self.dim))
        e = WeylElement((), 0, ident, ident, ())
        self._layers = [[e]]
        self._by_mat = {ident: e}
        self._complete = False

    # -- matrices -------------------------------------------------------------

    def _simple_root_vec(self, i):
        v = self.datum.simple_coroot(i)
        return v.as_tuple() if self.affine else v.finite

    def _gen_matrix(self, i):
        r = self.datum.rank
        if not self.affine:
            row = self.datum.cartan_matrix[i - 1]
            return tuple(tuple(int(a == b) - int(a == i - 1) * row[b] for b in range(r))
                         for a in range(r))
        n = r + 2
        cols = []
        for b in range(n):
            e = LatticeVector(int(b == 0), tuple(int(b == j + 1) for j in range(r)),
                              int(b == n - 1))
            pairing = self.datum.affine_pairing(i, e)
            img = e - self.datum.simple_coroot(i).scale(pairing)
            cols.append(img.as_tuple())
        return tuple(tuple(cols[b][a] for b in range(n)) for a in range(n))

    # -- enumeration ------------------------------------------------------------

    def _extend(self):
        """Add one BFS layer; returns the number of new elements."""
        if self._complete:
            return 0
        frontier = self._layers[-1]
        new = []
        for el in frontier:
            for i in self.gen_indices:
                mat = _mat_mul_int(el.mat, self.gens[i])
                if mat in self._by_mat:
                    continue
                inv_mat = _mat_mul_int(self.gens[i], el.inv_mat)
                s = self.gens[i]
                roots = (self.simple_root_vecs[i],) + tuple(
                    _mat_vec_int(s, v) for v in el.inv_roots)
                w = WeylElement(el.word + (i,), el.length + 1, mat, inv_mat, roots)
                self._by_mat[mat] = w
                new.append(w)
        if new:
            self._layers.append(new)
        elif not self.affine:
            self._complete = True
        return len(new)

    def enumerate(self, max_length=None):
        """All elements of length <= max_length (finite: the whole group)."""
        if max_length is None:
            if self.affine:
                raise PreconditionError("rootdata", "weyl_enumerate",
                                        "affine enumeration needs a length bound")
            while self._extend():
                pass
            return [w for layer in self._layers for w in layer]
        if max_length < 0:
            raise PreconditionError("rootdata", "weyl_enumerate",
                                    "negative length bound")
        while len(self._layers) <= max_length and not self._complete:
            if self._extend() == 0 and not self.affine:
                break
        return [w for layer in self._layers[:max_length + 1] for w in layer]

    def shell(self, length):
        """Elements of exactly the given length."""
        self.enumerate(max_length=length)
        return self._layers[length] if length < len(self._layers) else []

    def order(self):
        return len(self.enumerate())

    def element_by_matrix(self, mat, max_search=80):
        if mat in self._by_mat:
            return self._by_mat[mat]
        while not self._complete and len(self._layers) <= max_search:
            self._extend()
            if mat in self._by_mat:
                return self._by_mat[mat]
        raise KeyError("matrix not found within length %d" % max_search)

    def mult(self, a, b):
        """Product element (by action matrices)."""
        return self.element_by_matrix(_mat_mul_int(a.mat, b.mat))

    def simple(self, i):
        return self.element_by_matrix(self.gens[i])

    # -- actions ------------------------------------------------------------------

    def act(self, el, vec):
        """Apply the element to a LatticeVector."""
        if self.affine:
            return LatticeVector.from_tuple(_mat_vec_int(el.mat, vec.as_tuple()))
        fin = _mat_vec_int(el.mat, vec.finite)
        return LatticeVector(vec.central, fin, vec.delta)

    def act_inverse(self, el, vec):
        if self.affine:
            return LatticeVector.from_tuple(_mat_vec_int(el.inv_mat, vec.as_tuple()))
        fin = _mat_vec_int(el.inv_mat, vec.finite)
        return LatticeVector(vec.central, fin, vec.delta)

    def reflect(self, i, vec):
        pairing = self.datum.affine_pairing(i, vec)
        return vec - self.datum.simple_coroot(i).scale(pairing)

    def dominant_rep(self, vec, max_steps=10000):
        """Dominant representative of the orbit of a Tits-cone vector."""
        v = vec
        for _ in range(max_steps):
            for i in self.gen_indices:
                if self.datum.affine_pairing(i, v) < 0:
                    v = self.reflect(i, v)
                    break
            else:
                return v
        raise RuntimeError("dominantization did not terminate")


_WGROUP_CACHE = {}


def weyl_group(datum, affine=False):
    key = (datum.cartan_label, affine)
    if key not in _WGROUP_CACHE:
        _WGROUP_CACHE[key] = WeylGroup(datum, affine)
    return _WGROUP_CACHE[key]


def weyl_enumerate(datum, affine=False, max_length=None):
    """One representative per group element of length <= max_length."""
    return weyl_group(datum, affine).enumerate(max_length=max_length)


# ---------------------------------------------------------------------------
# affine coroots


def is_positive_affine_root(vec):
    if vec.delta != 0:
        return vec.delta > 0
    fin = vec.finite
    return any(fin) and all(c >= 0 for c in fin)


def affine_positive_coroots(datum, N):
    """All positive affine coroots of delta degree <= N with multiplicities.

    Returns a list of (LatticeVector, multiplicity), sorted by
    (delta degree, finite part).
    """
    if N < 0:
        raise PreconditionError("rootdata", "affine_positive_coroots",
                                "negative delta bound %d" % N)
    out = []
    for v in datum.positive_coroots:
        out.append((LatticeVector.pure(v), 1))
    for j in range(1, N + 1):
        for v in datum.positive_coroots:
            out.append((LatticeVector(0, tuple(-c for c in v), j), 1))
            out.append((LatticeVector(0, v, j), 1))
        out.append((LatticeVector(0, (0,) * datum.rank, j), datum.rank))
    out.sort(key=lambda t: (t[0].delta, t[0].finite))
    return out


# ---------------------------------------------------------------------------
# stabilizer Poincare series


def _parabolic_poincare(group, J):
    """Sum of q^l over the standard parabolic generated by J (finite)."""
    if not J:
        return QRat.from_int(1)
    datum = group.datum
    ident = group.enumerate(max_length=0)[0]
    seen = {ident.mat: 0}
    frontier = [ident.mat]
    counts = {0: 1}
    length = 0
    while frontier:
        length += 1
        new = []
        for mat in frontier:
            for i in J:
                m2 = _mat_mul_int(mat, group.gens[i])
                if m2 not in seen:
                    seen[m2] = length
                    new.append(m2)
        if new:
            counts[length] = len(new)
        frontier = new
        if length > 2 * len(datum.positive_coroots) + 10 and new:
            raise RuntimeError("parabolic subgroup did not close; is it finite?")
    coeffs = [0] * (max(counts) + 1)
    for l, n in counts.items():
        coeffs[l] = n
    return QRat.make(tuple(coeffs))


def affine_poincare_closed_form(datum, fit_length=None):
    """Closed rational form of sum_{w in W_aff} q^{l(w)}.

    Fitted from enumerated shell sizes with bounded numerator/denominator
    degrees and verified on four extra shells.
    """
    group = weyl_group(datum, affine=True)
    max_num = datum.dim_N
    max_den = datum.rank
    need = max_num + max_den + 1 + 4
    L = max(need - 1, fit_length or 0)
    group.enumerate(max_length=L)
    counts = [len(group.shell(l)) for l in range(L + 1)]
    num, den = fit_rational(counts, max_num, max_den, verify_extra=4)
    return QRat.make(num, den)


def stabilizer_poincare(datum, lam, affine=False):
    """Poincare series of the stabilizer of lam, as an exact QRat.

    Finite mode requires a pure-finite dominant lam and returns the
    stabilizer's Poincare polynomial.  Affine mode requires lam in the
    Tits cone; an infinite stabilizer (finite part and level both zero)
    yields the fitted closed form of the full affine series.
    """
    r = datum.rank
    if not affine:
        if not lam.is_pure_finite():
            raise PreconditionError("rootdata", "stabilizer_poincare",
                                    "finite mode needs a pure-finite vector")
        for i in range(1, r + 1):
            if datum.simple_pairing(i, lam.finite) < 0:
                raise PreconditionError(
                    "rootdata", "stabilizer_poincare",
                    "not dominant: <alpha_%d, lambda> = %d < 0"
                    % (i, datum.simple_pairing(i, lam.finite)))
        group = weyl_group(datum, affine=False)
        J = [i for i in range(1, r + 1) if datum.simple_pairing(i, lam.finite) == 0]
        return _parabolic_poincare(group, J)

    if not datum.in_tits_cone(lam):
        raise PreconditionError(
            "rootdata", "stabilizer_poincare",
            "outside the Tits cone: need level > 0, or level = 0 with zero "
            "finite part; got level %d, finite %s" % (lam.central, list(lam.finite)))
    group = weyl_group(datum, affine=True)
    dom = group.dominant_rep(lam)
    J = [i for i in group.gen_indices if datum.affine_pairing(i, dom) == 0]
    if len(J) == len(group.gen_indices):
        return affine_poincare_closed_form(datum)
    return _parabolic_poincare(group, J)
