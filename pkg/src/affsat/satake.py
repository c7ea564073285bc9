"""Satake-side formulas.

The finite spherical value of the double-coset basis element at a
dominant lambda is

    q^{<lambda,rho>} / W_lambda(q^{-1}) * sum_w w(e^lambda * prod_{beta>0}
        (1 - q^{-1} e^{-beta}) / (1 - e^{-beta}))

and the affine analogue divides additionally by the lambda = 0 value
Delta (which has a product form over the exponents d_i in the
simply-laced case).  All sums are evaluated through the rewriting

    sum_w w(e^lambda F) = C * sum_w e^{w^{-1} lambda}
        prod_{beta in Inv(w)} (q^{-1} - e^{-beta}) / (1 - q^{-1} e^{-beta})

where C is the Gindikin-Karpelevich-type product over all positive
(affine) coroots with multiplicities and Inv(w) is the inversion set.
Every factor after the rewriting is supported in the negative cone, so
truncation by delta depth and by affine-rho height is exact on the
retained window.  Affine sums over the level-zero orbit converge only
q^{-1}-adically and are accumulated with LaurentQ coefficients, shell
by shell, with per-coefficient stabilization detection.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import PreconditionError, StabilizationError
from .qrat import QRat, LaurentQ
from .rootdata import (LatticeVector, affine_positive_coroots, build_root_datum,
                       stabilizer_poincare, weyl_group)
from .series import GradedSeries, delta_depth, geom_expand


@dataclass
class SphericalElement:
    series: GradedSeries
    lam: LatticeVector
    group_mode: str              # "finite" | "affine"
    report: dict | None = None


# ---------------------------------------------------------------------------
# shared building blocks


def _ratio_series(datum, beta, N, B, floor=None):
    """(q^{-1} - e^{-beta}) / (1 - q^{-1} e^{-beta}) expanded in the
    negative cone; coefficient of e^{-k beta} is q^{-k-1} - q^{-k+1}
    (k >= 1) and q^{-1} at k = 0."""
    hb = datum.rho_aff_pairing(beta)
    kmax = B // max(hb, 1) + 1
    if beta.delta > 0 and N is not None:
        kmax = min(kmax, N // beta.delta + 1)
    terms = {}
    for k in range(kmax + 1):
        c = QRat.q_power(-k - 1)
        if k >= 1:
            c = c - QRat.q_power(-k + 1)
        terms[beta.scale(-k)] = c
    ser = GradedSeries(datum.rank, N, terms)
    if floor is not None:
        ser = ser.map_coeffs(lambda c: LaurentQ.from_qrat(c, floor))
    return ser


def _gk_factor(datum, beta, mult, N, B, keep, floor=None):
    """((1 - q^{-1} e^{-beta}) / (1 - e^{-beta}))^mult, windowed."""
    rank = datum.rank
    hb = datum.rho_aff_pairing(beta)
    depth = B // max(hb, 1) + 1
    geo = geom_expand(beta, N=N, s=0, depth=depth).filter(keep)
    one = GradedSeries.one(rank, N)
    numer = one.add(GradedSeries.monomial(
        beta.scale(-1), QRat.q_power(-1), N).neg())
    factor = numer.mul(geo, keep=keep)
    if floor is not None:
        factor = factor.map_coeffs(lambda c: LaurentQ.from_qrat(c, floor))
    out = factor
    for _ in range(mult - 1):
        out = out.mul(factor, keep=keep)
    return out


def gk_product_finite(datum, depth, extra_keep=None):
    """prod_{beta > 0} (1 - q^{-1} e^{-beta}) / (1 - e^{-beta}) up to the
    given finite height depth."""
    rank = datum.rank

    def keep(mu):
        if extra_keep is not None and not extra_keep(mu):
            return False
        return -datum.rho_height(mu.finite) <= depth

    out = GradedSeries.one(rank, None)
    for v in datum.positive_coroots:
        out = out.mul(_gk_factor(datum, LatticeVector.pure(v), 1, None, depth, keep),
                      keep=keep)
    return out


def gk_product_affine(datum, N, B, floor=None):
    """The affine product over R_{+,aff} with multiplicities, windowed to
    delta depth N and rho-height drop B."""
    rank = datum.rank

    def keep(mu):
        return delta_depth(mu) <= N and -datum.rho_aff_pairing(mu) <= B

    one_c = LaurentQ.from_qrat(QRat.from_int(1), floor) if floor is not None else None
    out = GradedSeries.one(rank, N, coeff_one=one_c)
    for beta, mult in affine_positive_coroots(datum, N):
        out = out.mul(_gk_factor(datum, beta, mult, N, B, keep, floor=floor), keep=keep)
    return out


def _invert_unit_series(ser, N):
    """Inverse of a series with constant term 1, up to delta depth N."""
    rank = ser.rank
    one = GradedSeries.one(rank, N)
    zero_vec = LatticeVector(0, (0,) * rank, 0)
    assert ser.coeff(zero_vec) == QRat.from_int(1)
    D = ser.sub(one).neg()
    out = one
    pw = one
    for _ in range(N):
        pw = pw.mul(D)
        if pw.is_zero():
            break
        out = out.add(pw)
    return out


# ---------------------------------------------------------------------------
# finite Macdonald formula


def _require_pure_dominant(datum, lam, op):
    if not lam.is_pure_finite():
        raise PreconditionError("satake", op, "lambda must be pure-finite")
    for i in range(1, datum.rank + 1):
        p = datum.simple_pairing(i, lam.finite)
        if p < 0:
            raise PreconditionError("satake", op,
                                    "not dominant: <alpha_%d, lambda> = %d" % (i, p))


def macdonald_finite(datum, lam, extra_window=0):
    """Exact spherical value at a dominant pure-finite lambda."""
    _require_pure_dominant(datum, lam, "macdonald_finite")
    rank = datum.rank
    h = datum.rho_height(lam.finite)
    B = 2 * h + extra_window

    def keep(mu):
        return datum.rho_height(mu.finite) >= -h - extra_window

    def keep_cone(mu):
        return -datum.rho_height(mu.finite) <= B

    W = weyl_group(datum, affine=False)
    elements = W.enumerate()
    C = gk_product_finite(datum, B)
    total = GradedSeries.zero(rank, None)
    for w in elements:
        corr = GradedSeries.one(rank, None)
        for beta in w.inv_roots:
            corr = corr.mul(
                _ratio_series(datum, LatticeVector.pure(beta), None, B), keep=keep_cone)
        apex = W.act_inverse(w, lam)
        term = GradedSeries.monomial(apex).mul(C.mul(corr, keep=keep_cone), keep=keep)
        total = total.add(term)
    pref = QRat.q_power(h) / stabilizer_poincare(datum, lam).subs_qinv()
    result = total.scale(pref)
    lead = result.coeff(lam)
    if lead != QRat.q_power(h):
        raise ArithmeticError("leading coefficient %s != q^%d" % (lead, h))
    return SphericalElement(result, lam, "finite")


# ---------------------------------------------------------------------------
# Weyl characters


def weyl_character(datum, lam):
    """Character of the irreducible highest-weight module, by the
    alternating-sum formula with exact division by the denominator."""
    _require_pure_dominant(datum, lam, "weyl_character")
    rank = datum.rank
    h = datum.rho_height(lam.finite)
    W = weyl_group(datum, affine=False)
    rho = datum.half_sum_positive_coroots()
    shifted = tuple(Fraction(c) + rho[i] for i, c in enumerate(lam.finite))

    numer = GradedSeries.zero(rank, None)
    for w in W.enumerate():
        img = tuple(sum(w.mat[i][j] * shifted[j] for j in range(rank))
                    for i in range(rank))
        back = tuple(img[i] - rho[i] for i in range(rank))
        assert all(x.denominator == 1 for x in back)
        mu = LatticeVector.pure(tuple(int(x) for x in back))
        sign = QRat.from_int(-1 if w.length % 2 else 1)
        numer = numer.add(GradedSeries.monomial(mu, sign))

    def keep(mu):
        return abs(datum.rho_height(mu.finite)) <= h

    inv_denom = GradedSeries.one(rank, None)
    for v in datum.positive_coroots:
        inv_denom = inv_denom.mul(
            geom_expand(LatticeVector.pure(v), depth=2 * h + 2),
            keep=lambda m: -datum.rho_height(m.finite) <= 2 * h + 2)
    cand = numer.mul(inv_denom, keep=keep)

    denom = GradedSeries.one(rank, None)
    for v in datum.positive_coroots:
        one = GradedSeries.one(rank, None)
        denom = denom.mul(one.sub(GradedSeries.monomial(LatticeVector.pure(v).scale(-1))))
    if cand.mul(denom) != numer:
        raise ArithmeticError("character division failed verification")
    return cand


def character_dim(chi):
    """Evaluation at the identity: the sum of all coefficients (each is a
    constant QRat)."""
    total = QRat.from_int(0)
    for c in chi.terms.values():
        total = total + c
    assert total.den == (1,) and len(total.num) <= 1
    return total.num[0] if total.num else 0


# ---------------------------------------------------------------------------
# inverse Satake / q-analogs of weight multiplicities


def dominant_weights_below(datum, lam):
    """Dominant mu with lam - mu a nonnegative coroot combination."""
    rank = datum.rank
    seen = {lam.finite}
    frontier = [lam.finite]
    while frontier:
        new = []
        for v in frontier:
            for c in datum.positive_coroots:
                w = tuple(v[i] - c[i] for i in range(rank))
                if datum.rho_height(w) < -datum.rho_height(lam.finite):
                    continue
                if w not in seen:
                    seen.add(w)
                    new.append(w)
        frontier = new
    doms = [LatticeVector.pure(v) for v in seen
            if all(datum.simple_pairing(i, v) >= 0 for i in range(1, rank + 1))]
    doms.sort(key=lambda m: (-datum.rho_height(m.finite), m.finite))
    return doms


def inverse_satake_coeffs(datum, lam, normalized=False):
    """Coefficients c_mu with [L(lambda)] = sum_mu c_mu(q) h_mu under the
    inverse spherical transform, by unitriangular inversion against the
    Macdonald values of dominant mu below lambda.

    With normalized=True the values are multiplied by q^{<lambda,rho>}
    (both normalizations are reported by the CLI; the raw values have
    c_lambda = q^{-<lambda,rho>})."""
    _require_pure_dominant(datum, lam, "inverse_satake_coeffs")
    chi = weyl_character(datum, lam)
    doms = dominant_weights_below(datum, lam)
    mac = {mu: macdonald_finite(datum, mu).series for mu in doms}
    coeffs = {}
    for mu in doms:                      # decreasing height
        val = chi.coeff(mu)
        for nu, c_nu in coeffs.items():
            val = val - c_nu * mac[nu].coeff(mu)
        lead = mac[mu].coeff(mu)
        c = val / lead
        if not c.is_zero():
            coeffs[mu] = c
    if normalized:
        scale = QRat.q_power(datum.rho_height(lam.finite))
        coeffs = {mu: c * scale for mu, c in coeffs.items()}
    return coeffs


# ---------------------------------------------------------------------------
# affine shell sums


def _affine_shell_sum(datum, lam, N, L, B, floor=None, watch_floor=None):
    """sum over w in W_aff, l(w) <= L, of e^{w^{-1} lam} prod_{beta in
    Inv(w)} ratio_beta, accumulated by length shells.

    Returns (series, report).  A coefficient counts as stable when the
    last two executed shells left its watched part unchanged; with
    LaurentQ coefficients the watched part is the q-orders at or above
    `watch_floor` (a shell of length l can only touch orders <= drop - l,
    drop the rho height below the apex, so watched quiet is permanent).
    Elements whose apex lies below the retained window are skipped; this
    is exact because every factor is supported in the negative cone.
    """
    rank = datum.rank
    W = weyl_group(datum, affine=True)
    lam_h = datum.rho_aff_pairing(lam)
    lam_depth = delta_depth(lam)

    def keep_abs(mu):
        return (delta_depth(mu) <= N + max(lam_depth, 0)
                and datum.rho_aff_pairing(mu) >= lam_h - B)

    def keep_cone(mu):
        return delta_depth(mu) <= N and -datum.rho_aff_pairing(mu) <= B

    ratio_cache = {}

    def ratio(beta_tuple):
        if beta_tuple not in ratio_cache:
            ratio_cache[beta_tuple] = _ratio_series(
                datum, LatticeVector.from_tuple(beta_tuple), N, B, floor=floor)
        return ratio_cache[beta_tuple]

    def watched(delta_coeff):
        if watch_floor is None:
            return True
        top = max(delta_coeff.terms) if delta_coeff.terms else None
        return top is not None and top >= watch_floor

    one_c = LaurentQ.from_qrat(QRat.from_int(1), floor) if floor is not None else None
    total = GradedSeries.zero(rank, None)
    last_watched_change = {}
    shell_changes = []
    silent = 0
    executed = -1
    for length in range(L + 1):
        shell = W.shell(length)
        changed = 0
        for w in shell:
            apex = W.act_inverse(w, lam)
            if (datum.rho_aff_pairing(apex) < lam_h - B
                    or delta_depth(apex) > N + max(lam_depth, 0)):
                continue
            corr = GradedSeries.one(rank, None, coeff_one=one_c)
            for beta in w.inv_roots:
                corr = corr.mul(ratio(beta), keep=keep_cone)
            term = GradedSeries.monomial(apex, one_c).mul(corr, keep=keep_abs)
            if term.is_zero():
                continue
            total = total.add(term)
            changed += 1
            for mu, c in term.terms.items():
                if watch_floor is None or watched(c):
                    last_watched_change[mu] = length
        shell_changes.append(changed)
        executed = length
        silent = silent + 1 if changed == 0 else 0
        if silent >= 2 and length >= 2:
            break
    unstable = sorted((mu for mu, l in last_watched_change.items() if l > executed - 2),
                      key=lambda m: (delta_depth(m), m.finite, m.central))
    if unstable:
        mu = unstable[0]
        raise StabilizationError(
            "coefficient of e^%s not stable within length budget %d"
            % (str(mu.as_tuple()), L),
            detail={"exponent": mu.as_tuple(), "budget": L,
                    "last_change": last_watched_change[mu]})
    report = {
        "shells_run": executed,
        "budget": L,
        "shell_changes": shell_changes,
        "stable_from_shell": max(last_watched_change.values(), default=0),
    }
    return total, report


def _laurent_to_qrat_series(ser, floor, margin):
    """Certify LaurentQ coefficients as exact Laurent polynomials (zero
    mass in the deep margin) and convert them to QRat."""
    out = {}
    for mu, c in ser.terms.items():
        if c.is_zero():
            continue
        lo = c.min_exp()
        if lo is not None and lo < floor + margin:
            raise StabilizationError(
                "coefficient of e^%s has q-mass at order %d, inside the "
                "truncation margin [%d, %d); deepen the q floor"
                % (str(mu.as_tuple()), lo, floor, floor + margin),
                detail={"exponent": mu.as_tuple(), "min_order": lo})
        out[mu] = c.to_qrat()
    return GradedSeries(ser.rank, ser.trunc, out)


# ---------------------------------------------------------------------------
# Delta


def _delta_defaults(datum, N):
    # A length-l shell only touches q-orders <= drop - l of a coefficient
    # whose exponent sits `drop` below the apex in affine rho height, so
    # orders >= -qdepth are quiet for two shells once L >= B + qdepth + 2.
    dmax = max(datum.exponents)
    qdepth = N * (dmax - 1) + 2
    B = N * datum.dual_coxeter
    L = B + qdepth + 2
    return qdepth, B, L


def delta_affine(datum, N, mode="product", L=None, qdepth=None, height_window=None):
    """The affine correction factor up to delta degree N.

    Product mode uses the explicit product over the invariant-degree
    exponents d_i (simply-laced only).  Sum mode accumulates the
    normalized level-zero Weyl sum by length shells with LaurentQ
    coefficients and certifies the stabilized coefficients exactly.
    Returns (series, report|None).
    """
    if N < 0:
        raise PreconditionError("satake", "delta_affine", "negative truncation")
    rank = datum.rank
    if mode == "product":
        if not datum.simply_laced:
            raise PreconditionError(
                "satake", "delta_affine",
                "product formula requires a simply-laced type (its stated "
                "hypothesis); %s is not" % datum.cartan_label)
        delta = LatticeVector(0, (0,) * rank, 1)
        out = GradedSeries.one(rank, N)
        for d in datum.exponents:
            for j in range(1, N + 1):
                numer = GradedSeries.one(rank, N).sub(
                    GradedSeries.monomial(delta.scale(-j), QRat.q_power(-d), N))
                out = out.mul(numer)
                out = out.mul(geom_expand(delta.scale(j), N=N, s=-d + 1))
        return out, None
    if mode != "sum":
        raise PreconditionError("satake", "delta_affine", "mode must be product or sum")

    qd, B_def, L_def = _delta_defaults(datum, N)
    qdepth = qd if qdepth is None else qdepth
    B = B_def if height_window is None else height_window
    L = L_def if L is None else L
    floor = -(qdepth + 2)

    lam0 = LatticeVector(0, (0,) * rank, 0)
    sigma, report = _affine_shell_sum(datum, lam0, N, L, B, floor=floor,
                                      watch_floor=-qdepth)
    C = gk_product_affine(datum, N, B, floor=floor)
    raw = C.mul(sigma, keep=lambda mu: delta_depth(mu) <= N
                and -datum.rho_aff_pairing(mu) <= B)
    waff_q = stabilizer_poincare(datum, lam0, affine=True)
    inv_norm = waff_q.subs_qinv().inv()
    raw = raw.map_coeffs(lambda c: c * LaurentQ.from_qrat(inv_norm, floor))
    result = _laurent_to_qrat_series(raw, floor, margin=2)
    bad = [mu for mu in result.support() if any(mu.finite) or mu.central]
    if bad:
        mu = bad[0]
        raise StabilizationError(
            "sum-mode Delta has a non-imaginary component at e^%s"
            % str(mu.as_tuple()),
            detail={"exponent": mu.as_tuple(),
                    "coefficient": str(result.coeff(mu))})
    report = dict(report, qdepth=qdepth, height_window=B)
    return result, report


# ---------------------------------------------------------------------------
# affine Macdonald formula


def macdonald_affine(datum, lam, N, L=None, height_window=None, qdepth=None):
    """Truncated affine spherical value at a Tits-cone lambda.

    The index is replaced by the dominant representative of its orbit.
    Level-zero indices must have zero finite part.  The result divides
    by Delta (product form for simply-laced types, certified sum form
    otherwise) and by the stabilizer normalization W_{aff,lambda}(q^{-1})
    (closed rational form when the stabilizer is infinite).
    """
    if N < 0 or (L is not None and L < 0):
        raise PreconditionError("satake", "macdonald_affine", "negative budget")
    if not datum.in_tits_cone(lam):
        raise PreconditionError(
            "satake", "macdonald_affine",
            "outside the Tits cone (need level > 0, or level = 0 and lambda = 0); "
            "got level %d, finite %s" % (lam.central, list(lam.finite)))
    rank = datum.rank
    W = weyl_group(datum, affine=True)
    dom = W.dominant_rep(lam)

    qd, B_def, L_def = _delta_defaults(datum, N)
    B = B_def if height_window is None else height_window
    level_zero = dom.central == 0
    qdepth = (qd if qdepth is None else qdepth) if level_zero else None
    floor = -(qdepth + 2) if level_zero else None
    if L is None:
        L = L_def if level_zero else 2 * (B + 4)

    sigma, report = _affine_shell_sum(
        datum, dom, N, L, B, floor=floor,
        watch_floor=-qdepth if level_zero else None)
    C = gk_product_affine(datum, N, B, floor=floor)
    lam_h = datum.rho_aff_pairing(dom)

    def keep_abs(mu):
        return (delta_depth(mu) <= N + max(delta_depth(dom), 0)
                and datum.rho_aff_pairing(mu) >= lam_h - B)

    raw = sigma.mul(C, keep=keep_abs)
    waff = stabilizer_poincare(datum, dom, affine=True)
    pref = QRat.q_power(lam_h) / waff.subs_qinv()
    if level_zero:
        pref_l = LaurentQ.from_qrat(pref, floor)
        raw = raw.map_coeffs(lambda c: c * pref_l)
        raw = _laurent_to_qrat_series(raw, floor, margin=2)
    else:
        raw = raw.scale(pref)

    delta_ser, _ = delta_affine(
        datum, N, mode="product" if datum.simply_laced else "sum")
    inv_delta = _invert_unit_series(delta_ser, N)
    result = raw.mul(inv_delta, keep=keep_abs).truncate(N + max(delta_depth(dom), 0))
    report = dict(report, height_window=B, level=dom.central,
                  dominant_index=dom.as_tuple())
    return SphericalElement(result, dom, "affine", report)


# ---------------------------------------------------------------------------
# Gindikin-Karpelevich series


def gk_series(datum, mode, N=None, depth=None, finite_window=None):
    """Gindikin-Karpelevich generating series.

    Finite mode expands prod_{beta>0} (1-q^{-1}e^{-beta})/(1-e^{-beta})
    to the given finite height depth.  Affine mode returns the full
    affine product with multiplicities divided by Delta, truncated at
    delta degree N and finite window.  The count of points of the
    semi-infinite intersection indexed by gamma is q^{|gamma|} times the
    coefficient of e^{-gamma}, |gamma| the affine rho height.
    """
    if mode == "finite":
        if depth is None:
            raise PreconditionError("satake", "gk_series",
                                    "finite mode needs an expansion depth")
        return gk_product_finite(datum, depth)
    if mode != "affine":
        raise PreconditionError("satake", "gk_series", "mode must be finite or affine")
    if N is None:
        raise PreconditionError("satake", "gk_series",
                                "affine mode needs a delta truncation")
    if not datum.simply_laced:
        raise PreconditionError(
            "satake", "gk_series",
            "affine mode requires a simply-laced type (the Delta product "
            "hypothesis); %s is not" % datum.cartan_label)
    F = finite_window if finite_window is not None else N * datum.dual_coxeter + 6
    B = N * datum.dual_coxeter + F
    C = gk_product_affine(datum, N, B)
    inv_delta = _invert_unit_series(delta_affine(datum, N, "product")[0], N)
    return C.mul(inv_delta, keep=lambda mu: delta_depth(mu) <= N
                 and -datum.rho_aff_pairing(mu) <= B)


def gk_point_count(datum, series, gamma):
    """q^{|gamma|} [e^{-gamma}] as an exact QRat."""
    mu = -gamma
    size = datum.rho_aff_pairing(gamma)
    return series.coeff(mu) * QRat.q_power(size)
