"""Independent oracles used by the tests.

These deliberately avoid the library's character/Macdonald code paths:
weight multiplicities come from the Freudenthal recursion, invariant
degrees from a brute-force Molien series over enumerated reflection
matrices, and rational-function identities from direct Fraction
arithmetic.
"""

from fractions import Fraction

from affsat.rootdata import weyl_group


def _form(datum):
    r = datum.rank
    return [[datum._coroot_form(tuple(int(a == i) for a in range(r)),
                                tuple(int(a == j) for a in range(r)))
             for j in range(r)] for i in range(r)]


def _dot(form, v, w):
    r = len(form)
    return sum(form[i][j] * Fraction(v[i]) * Fraction(w[j])
               for i in range(r) for j in range(r))


def freudenthal_multiplicities(datum, lam):
    """Weight multiplicities of the highest-weight module with highest
    weight lam (a finite tuple in simple-coroot coordinates), by the
    Freudenthal recursion over the coroot system."""
    r = datum.rank
    form = _form(datum)
    rho = datum.half_sum_positive_coroots()
    ht_lam = datum.rho_height(lam)

    # candidate weights: lam minus nonnegative coroot combinations, with
    # height bounded below by -height(lam)
    box = {lam}
    frontier = [lam]
    while frontier:
        new = []
        for v in frontier:
            for c in datum.positive_coroots:
                w = tuple(v[i] - c[i] for i in range(r))
                if datum.rho_height(w) < -ht_lam or w in box:
                    continue
                box.add(w)
                new.append(w)
        frontier = new

    def shifted_norm(v):
        s = tuple(Fraction(v[i]) + rho[i] for i in range(r))
        return _dot(form, s, s)

    target = shifted_norm(lam)
    mult = {}
    for mu in sorted(box, key=lambda v: -datum.rho_height(v)):
        if mu == lam:
            mult[mu] = 1
            continue
        denom = target - shifted_norm(mu)
        if denom == 0:
            mult[mu] = 0
            continue
        acc = Fraction(0)
        for alpha in datum.positive_coroots:
            k = 1
            while True:
                nu = tuple(mu[i] + k * alpha[i] for i in range(r))
                m = mult.get(nu, 0)
                if nu not in box:
                    break
                if m:
                    acc += m * _dot(form, nu, alpha)
                k += 1
        val = 2 * acc / denom
        assert val.denominator == 1 and val >= 0
        mult[mu] = int(val)
    return {mu: m for mu, m in mult.items() if m > 0}


def molien_exponents(datum, order=40):
    """Invariant-polynomial degrees from the Molien series
    (1/|W|) sum_w 1/det(1 - t w), extracted greedily."""
    W = weyl_group(datum, affine=False)
    els = W.enumerate()
    r = datum.rank
    series = [Fraction(0)] * (order + 1)
    for w in els:
        p = _char_poly_det(w.mat, r)        # det(1 - t*M) coefficients
        inv = _series_inverse(p, order)
        for i in range(order + 1):
            series[i] += inv[i]
    n = Fraction(len(els))
    series = [c / n for c in series]
    degrees = []
    for _ in range(r):
        d = next(i for i in range(1, order + 1) if series[i] != 0)
        degrees.append(d)
        # divide by 1/(1 - t^d), i.e. multiply by (1 - t^d)
        series = [series[i] - (series[i - d] if i >= d else 0)
                  for i in range(order + 1)]
    assert all(c == 0 for c in series[1:])
    return tuple(sorted(degrees))


def _char_poly_det(mat, r):
    """Coefficients of det(I - t*mat) by permutation expansion."""
    import itertools
    coeffs = [Fraction(0)] * (r + 1)
    for perm in itertools.permutations(range(r)):
        sign = _perm_sign(perm)
        # product over i of (I - tM)[i, perm(i)] as a degree-<=1 polynomial
        poly = [Fraction(sign), Fraction(0)]
        for i in range(r):
            a = Fraction(int(i == perm[i]))
            b = Fraction(-mat[i][perm[i]])
            poly = _poly_mul_small(poly, [a, b], r)
        for k in range(min(len(poly), r + 1)):
            coeffs[k] += poly[k]
    return coeffs


def _poly_mul_small(a, b, cap):
    out = [Fraction(0)] * (cap + 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if i + j <= cap and y != 0:
                out[i + j] += x * y
    return out


def _perm_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, clen = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            clen += 1
        if clen % 2 == 0:
            sign = -sign
    return sign


def _series_inverse(p, order):
    """1/p as a power series, p[0] != 0."""
    inv = [Fraction(0)] * (order + 1)
    inv[0] = Fraction(1) / p[0]
    for n in range(1, order + 1):
        s = Fraction(0)
        for k in range(1, min(n, len(p) - 1) + 1):
            s += p[k] * inv[n - k]
        inv[n] = -s / p[0]
    return inv
