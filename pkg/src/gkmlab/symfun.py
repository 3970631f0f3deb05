"""Symmetric-function identities, partial fractions and Vandermonde inverses.

Symbolic computations use :class:`MultiPoly` over variables ``X1..Xm`` (and an
extra ``Y`` where a polynomial in one more variable is needed).  Numeric
versions take distinct rationals.
"""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .integration import sum_over_linear_products
from .polyring import MultiPoly, RationalFn, SpaceCtx, monomials


class RepeatedValues(ValueError):
    pass


def sym_ctx(m: int, with_y: bool = False) -> SpaceCtx:
    labels = tuple(f"X{i}" for i in range(1, m + 1)) + (("Y",) if with_y else ())
    return SpaceCtx(len(labels), labels)


def _check_distinct(values: Sequence) -> None:
    if len(set(values)) != len(values):
        raise RepeatedValues("values must be distinct")


def elementary(items: Sequence, one, zero) -> list:
    """``e_0..e_m`` of the items, read off from the expansion of ``prod(T + x)``."""
    e = [one]
    for x in items:
        nxt = e + [zero]
        for k in range(len(e), 0, -1):
            nxt[k] = nxt[k] + x * e[k - 1]
        e = nxt
    return e


def elementary_polys(ctx: SpaceCtx, idx: Sequence[int]) -> list[MultiPoly]:
    return elementary([MultiPoly.var(ctx, i) for i in idx], MultiPoly.one(ctx), MultiPoly.zero(ctx))


def complete_homogeneous(ctx: SpaceCtx, idx: Sequence[int], N: int) -> MultiPoly:
    """Sum of all monomials of degree N in the variables ``idx`` (0 for N < 0)."""
    if N < 0:
        return MultiPoly.zero(ctx)
    terms = {}
    for mu in monomials(len(idx), N):
        e = [0] * ctx.dim
        for i, a in zip(idx, mu):
            e[i] = a
        terms[tuple(e)] = Fraction(1)
    return MultiPoly(ctx, terms)


def _diff_form(ctx: SpaceCtx, k: int, j: int) -> list[Fraction]:
    v = [Fraction(0)] * ctx.dim
    v[k] += 1
    v[j] -= 1
    return v


# ---------------------------------------------------------------------------
# the partial-fraction identity for complete homogeneous sums


def hom_sym_identity(m: int, N: int) -> tuple[RationalFn, MultiPoly, bool]:
    """Both sides of the partial-fraction identity for ``X_k^N``, symbolically."""
    ctx = sym_ctx(m)
    idx = list(range(m))
    lhs = sum_over_linear_products(
        ctx, ((MultiPoly.var(ctx, k) ** N, [_diff_form(ctx, k, j) for j in idx if j != k]) for k in idx))
    rhs = complete_homogeneous(ctx, idx, N - m + 1)
    return lhs, rhs, lhs == RationalFn(rhs)


def hom_sym_identity_numeric(values: Sequence, N: int) -> tuple[Fraction, Fraction, bool]:
    xs = [Fraction(v) for v in values]
    _check_distinct(xs)
    lhs = Fraction(0)
    for k, xk in enumerate(xs):
        den = Fraction(1)
        for j, xj in enumerate(xs):
            if j != k:
                den *= xk - xj
        lhs += xk ** N / den
    m = len(xs)
    rhs = sum((_mono_value(xs, mu) for mu in monomials(m, N - m + 1)), Fraction(0))
    return lhs, rhs, lhs == rhs


def _mono_value(xs, mu) -> Fraction:
    out = Fraction(1)
    for x, a in zip(xs, mu):
        out *= x ** a
    return out


def partial_fraction_reduce(P: MultiPoly, m: int, y_index: int | None = None) -> RationalFn:
    """``sum_k P(X_k) / prod_{j != k}(X_k - X_j)`` reduced.

    ``P`` lives in a context whose first ``m`` variables are ``X1..Xm`` and
    whose ``y_index`` variable (last by default) is ``Y``; any other variables
    are coefficients.
    """
    ctx = P.ctx
    y = ctx.dim - 1 if y_index is None else y_index
    if y < m:
        raise ValueError("Y must come after the X variables")
    terms = []
    for k in range(m):
        imgs = [MultiPoly.var(ctx, i) for i in range(ctx.dim)]
        imgs[y] = MultiPoly.var(ctx, k)
        terms.append((P.compose(imgs, ctx), [_diff_form(ctx, k, j) for j in range(m) if j != k]))
    return sum_over_linear_products(ctx, terms)


def partial_fraction_numeric(coeffs: Sequence, values: Sequence) -> Fraction:
    """Same sum for ``P(Y) = sum coeffs[i] Y^i`` at distinct rational values."""
    xs = [Fraction(v) for v in values]
    _check_distinct(xs)
    total = Fraction(0)
    for k, xk in enumerate(xs):
        num = sum((Fraction(c) * xk ** i for i, c in enumerate(coeffs)), Fraction(0))
        den = Fraction(1)
        for j, xj in enumerate(xs):
            if j != k:
                den *= xk - xj
        total += num / den
    return total


# ---------------------------------------------------------------------------
# extending symmetric polynomials by one variable


def is_symmetric(P: MultiPoly, idx: Sequence[int]) -> bool:
    """Invariance under the adjacent transpositions of the variables ``idx``."""
    ctx = P.ctx
    for a, b in zip(idx, idx[1:]):
        imgs = [MultiPoly.var(ctx, i) for i in range(ctx.dim)]
        imgs[a], imgs[b] = imgs[b], imgs[a]
        if P.compose(imgs, ctx) != P:
            return False
    return True


def to_elementary(P: MultiPoly, r: int) -> dict[tuple[int, ...], Fraction]:
    """Write a symmetric polynomial in the first ``r`` variables via ``e_1..e_r``.

    Returns ``{(k_1..k_r): c}`` meaning ``sum c * e_1^k_1 ... e_r^k_r``.
    """
    ctx = P.ctx
    if any(any(e[r:]) for e in P.terms):
        raise ValueError("polynomial involves variables beyond the first r")
    if not is_symmetric(P, list(range(r))):
        raise ValueError("polynomial is not symmetric")
    es = elementary_polys(ctx, range(r))
    out: dict[tuple[int, ...], Fraction] = {}
    rest = P
    while not rest.is_zero():
        lead = max(rest.terms)  # lexicographic leading exponent
        c = rest.terms[lead]
        ks = tuple(lead[i] - (lead[i + 1] if i + 1 < r else 0) for i in range(r))
        out[ks] = out.get(ks, 0) + c
        term = MultiPoly.const(ctx, c)
        for i, k in enumerate(ks):
            if k:
                term = term * es[i + 1] ** k
        rest = rest - term
    return out


def symmetric_extend(P0: MultiPoly) -> MultiPoly:
    """Given P0 symmetric in ``X1..X_{m-1}``, return P in Q[X1..Xm]^S_m [Y] with P(X_m) = P0.

    ``P0`` lives in ``sym_ctx(m - 1)``; the result lives in ``sym_ctx(m, with_y=True)``.
    """
    r = P0.ctx.dim
    m = r + 1
    ctx = sym_ctx(m, with_y=True)
    rep = to_elementary(P0, r)
    sig = elementary_polys(ctx, range(m))
    Y = MultiPoly.var(ctx, m)
    # elementary polynomials of X1..X_{m-1} rewritten through the full ones and Y
    sig_drop = [sum((sig[k - l] * (Y ** l) * ((-1) ** l) for l in range(k + 1)), MultiPoly.zero(ctx))
                for k in range(m)]
    out = MultiPoly.zero(ctx)
    for ks, c in rep.items():
        term = MultiPoly.const(ctx, c)
        for i, k in enumerate(ks):
            if k:
                term = term * sig_drop[i + 1] ** k
        out = out + term
    return out


def check_extension(P0: MultiPoly, P: MultiPoly) -> bool:
    """P(X_m) == P0 and P symmetric in X1..Xm."""
    m = P0.ctx.dim + 1
    ctx = P.ctx
    imgs = [MultiPoly.var(ctx, i) for i in range(ctx.dim)]
    imgs[m] = MultiPoly.var(ctx, m - 1)
    lifted = P0.compose([MultiPoly.var(ctx, i) for i in range(m - 1)], ctx)
    return P.compose(imgs, ctx) == lifted and is_symmetric(P, list(range(m)))


# ---------------------------------------------------------------------------
# Vandermonde inverses


def vandermonde(values: Sequence) -> list[list[Fraction]]:
    xs = [Fraction(v) for v in values]
    return [[x ** j for j in range(len(xs))] for x in xs]


def gauss_jordan_inverse(A: Sequence[Sequence]) -> tuple[list[list[Fraction]], Fraction]:
    """Inverse and determinant by elimination with row swaps."""
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c]), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        a = M[c][c]
        det *= a
        M[c] = [x / a for x in M[c]]
        for r in range(n):
            if r != c and M[r][c]:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [row[n:] for row in M], det


def _sigma_without(xs: Sequence[Fraction], j: int) -> list[Fraction]:
    return elementary([x for k, x in enumerate(xs) if k != j], Fraction(1), Fraction(0))


def inverse_by_sigma(values: Sequence) -> list[list[Fraction]]:
    """Entries ``(-1)^(m+i) sigma^j_{m-i} / prod_{k != j}(X_j - X_k)`` (1-based i)."""
    xs = [Fraction(v) for v in values]
    _check_distinct(xs)
    m = len(xs)
    out = [[Fraction(0)] * m for _ in range(m)]
    for j in range(m):
        sj = _sigma_without(xs, j)
        den = Fraction(1)
        for k in range(m):
            if k != j:
                den *= xs[j] - xs[k]
        for i in range(1, m + 1):
            out[i - 1][j] = (-1) ** (m + i) * sj[m - i] / den
    return out


def inverse_by_full_sigma(values: Sequence) -> list[list[Fraction]]:
    """Same entries with sigma^j expanded through the full elementary polynomials."""
    xs = [Fraction(v) for v in values]
    _check_distinct(xs)
    m = len(xs)
    sig = elementary(xs, Fraction(1), Fraction(0))
    out = [[Fraction(0)] * m for _ in range(m)]
    for j in range(m):
        den = Fraction(1)
        for k in range(m):
            if k != j:
                den *= xs[j] - xs[k]
        for i in range(1, m + 1):
            num = sum(((-1) ** (m + i + k) * sig[m - i - k] * xs[j] ** k for k in range(m - i + 1)),
                      Fraction(0))
            out[i - 1][j] = num / den
    return out


def first_row_product(values: Sequence) -> list[Fraction]:
    """``prod_{k != j} (-X_k / (X_j - X_k))``."""
    xs = [Fraction(v) for v in values]
    row = []
    for j, xj in enumerate(xs):
        v = Fraction(1)
        for k, xk in enumerate(xs):
            if k != j:
                v *= -xk / (xj - xk)
        row.append(v)
    return row


def vandermonde_det_formula(values: Sequence) -> Fraction:
    xs = [Fraction(v) for v in values]
    out = Fraction(1)
    for k, l in combinations(range(len(xs)), 2):
        out *= xs[l] - xs[k]
    return out


def vandermonde_inverse(values: Sequence) -> list[list[Fraction]]:
    """Inverse computed three ways; raises if they disagree or A * A^-1 != I."""
    xs = [Fraction(v) for v in values]
    _check_distinct(xs)
    A = vandermonde(xs)
    gj, det = gauss_jordan_inverse(A)
    s1 = inverse_by_sigma(xs)
    s2 = inverse_by_full_sigma(xs)
    if not (gj == s1 == s2):
        raise AssertionError("Vandermonde inverses disagree")
    if det != vandermonde_det_formula(xs):
        raise AssertionError("determinant formula failed")
    if first_row_product(xs) != gj[0]:
        raise AssertionError("first-row product formula failed")
    m = len(xs)
    for i in range(m):
        for j in range(m):
            if sum(A[i][k] * gj[k][j] for k in range(m)) != (i == j):
                raise AssertionError("A * A^-1 != I")
    return gj


def vandermonde_inverse_symbolic(m: int) -> list[list[RationalFn]]:
    """Symbolic inverse over Q(X1..Xm) from the sigma^j formula."""
    ctx = sym_ctx(m)
    X = [MultiPoly.var(ctx, i) for i in range(m)]
    out = []
    for i in range(1, m + 1):
        row = []
        for j in range(m):
            sj = elementary([x for k, x in enumerate(X) if k != j], MultiPoly.one(ctx), MultiPoly.zero(ctx))
            num = sj[m - i].scale((-1) ** (m + i))
            row.append(RationalFn.over_linear_product(num, [_diff_form(ctx, j, k) for k in range(m) if k != j]))
        out.append(row)
    return out


def check_power_relation(values: Sequence, j: int) -> bool:
    """``X_l^(m-1) = sum_k (-1)^(m-k) sigma^j_{m-k-1} X_l^k`` for every l != j."""
    xs = [Fraction(v) for v in values]
    m = len(xs)
    sj = _sigma_without(xs, j)
    for l in range(m):
        if l == j:
            continue
        rhs = sum(((-1) ** (m - k) * sj[m - k - 1] * xs[l] ** k for k in range(m - 1)), Fraction(0))
        if xs[l] ** (m - 1) != rhs:
            return False
    return True


# ---------------------------------------------------------------------------
# Vandermonde systems over S(W)


def _lin_vec(p: MultiPoly) -> list[Fraction]:
    if not p.is_homogeneous() or p.degree() > 1:
        raise ValueError("expected a linear form")
    v = [Fraction(0)] * p.ctx.dim
    for e, c in p.terms.items():
        v[e.index(1)] = c
    return v


def vandermonde_solve(taus: Sequence[MultiPoly], g: Sequence[MultiPoly]) -> list[RationalFn]:
    """Coefficients ``g_0..g_{r-1}`` with ``g(v) = sum_i g_i tau(v)^i`` (Lagrange form)."""
    r = len(taus)
    if len(set(taus)) != r:
        raise RepeatedValues("tau is not injective")
    ctx = taus[0].ctx
    out = []
    for i in range(r):
        terms = []
        for j in range(r):
            sj = elementary([t for k, t in enumerate(taus) if k != j], MultiPoly.one(ctx), MultiPoly.zero(ctx))
            num = sj[r - 1 - i].scale((-1) ** (r - 1 - i)) * g[j]
            terms.append((num, [_lin_vec(taus[j] - taus[k]) for k in range(r) if k != j]))
        out.append(sum_over_linear_products(ctx, terms))
    return out


def vandermonde_solve_newton(taus: Sequence[MultiPoly], g: Sequence[MultiPoly]) -> list[RationalFn]:
    """Same coefficients by divided differences (direct elimination)."""
    r = len(taus)
    if len(set(taus)) != r:
        raise RepeatedValues("tau is not injective")
    ctx = taus[0].ctx
    col = [RationalFn(v) for v in g]
    coeffs = [col[0]]
    for k in range(1, r):
        col = [(col[j] - col[j - 1]).divide_linear(_lin_vec(taus[j + k - 1] - taus[j - 1]))
               for j in range(1, len(col))]
        coeffs.append(col[0])
    out = [RationalFn(MultiPoly.zero(ctx)) for _ in range(r)]
    for i, c in enumerate(coeffs):
        e = elementary(list(taus[:i]), MultiPoly.one(ctx), MultiPoly.zero(ctx))
        for t in range(i + 1):
            out[t] = out[t] + c * e[i - t].scale((-1) ** (i - t))
    return out


# ---------------------------------------------------------------------------
# identity suite


def random_distinct(rng, m: int, bound: int = 20) -> list[Fraction]:
    """m distinct random rationals, redrawing on collision."""
    out: list[Fraction] = []
    while len(out) < m:
        x = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
        if x not in out:
            out.append(x)
    return out


def appendix_suite(max_m: int = 6, seed: int = 0, numeric_cases: int = 500,
                   vandermonde_cases: int = 200) -> list[tuple[str, bool, int]]:
    """Run the identity checks; returns ``(name, passed, cases)`` per suite."""
    rng = random.Random(seed)
    results = []
    sym = [(m, N) for m in range(1, min(4, max_m) + 1) for N in range(0, 7)]
    results.append(("hom-sym symbolic", all(hom_sym_identity(m, N)[2] for m, N in sym), len(sym)))
    ok = True
    for _ in range(numeric_cases):
        m = rng.randint(1, max(1, min(8, max_m)))
        ok &= hom_sym_identity_numeric(random_distinct(rng, m), rng.randint(0, 10))[2]
    results.append(("hom-sym numeric", ok, numeric_cases))
    ok = True
    for _ in range(vandermonde_cases):
        xs = random_distinct(rng, rng.randint(1, max(1, min(6, max_m))))
        try:
            vandermonde_inverse(xs)
            ok &= all(check_power_relation(xs, j) for j in range(len(xs)))
        except AssertionError:
            ok = False
    results.append(("vandermonde inverse", ok, vandermonde_cases))
    ok, count = True, 0
    for m in range(2, min(5, max_m) + 1):
        ctx = sym_ctx(m - 1)
        for e in elementary_polys(ctx, range(m - 1))[1:]:
            ok &= check_extension(e, symmetric_extend(e))
            count += 1
    results.append(("symmetric extension", ok, count))
    return results
