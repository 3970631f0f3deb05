import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from gkmlab.polyring import MultiPoly, RationalFn, SpaceCtx
from gkmlab.symfun import (RepeatedValues, appendix_suite, check_extension, check_power_relation,
                           complete_homogeneous, elementary_polys, first_row_product, gauss_jordan_inverse,
                           hom_sym_identity, hom_sym_identity_numeric, is_symmetric, partial_fraction_numeric,
                           partial_fraction_reduce, sym_ctx, symmetric_extend, to_elementary, vandermonde,
                           vandermonde_det_formula, vandermonde_inverse, vandermonde_inverse_symbolic,
                           vandermonde_solve, vandermonde_solve_newton)

distinct_values = st.integers(1, 8).flatmap(lambda m: st.lists(
    st.fractions(min_value=-20, max_value=20, max_denominator=9), min_size=m, max_size=m, unique=True))


def h_oracle(xs, N):
    """Complete homogeneous sum via h_N(x_1..x_m) = h_N(x_1..x_{m-1}) + x_m h_{N-1}(x_1..x_m)."""
    if N < 0:
        return Fraction(0)
    table = [Fraction(1)] + [Fraction(0)] * N
    for x in xs:
        for k in range(1, N + 1):
            table[k] += x * table[k - 1]
    return table[N]


# -- the partial-fraction identity ------------------------------------------


def test_hom_sym_examples():
    lhs, rhs, ok = hom_sym_identity(2, 2)
    ctx = sym_ctx(2)
    assert ok and rhs == MultiPoly.var(ctx, 0) + MultiPoly.var(ctx, 1)
    lhs, rhs, ok = hom_sym_identity(3, 2)
    assert ok and rhs == MultiPoly.one(sym_ctx(3))
    assert hom_sym_identity_numeric([1, 2, 3], 2) == (1, 1, True)
    lhs, rhs, ok = hom_sym_identity(4, 1)
    assert ok and rhs.is_zero() and lhs.is_polynomial() and lhs.to_poly().is_zero()
    with pytest.raises(RepeatedValues):
        hom_sym_identity_numeric([1, 1], 3)


@pytest.mark.parametrize("m", range(1, 5))
def test_hom_sym_symbolic(m):
    for N in range(7):
        assert hom_sym_identity(m, N)[2]


@settings(max_examples=500)
@given(distinct_values, st.integers(0, 10))
def test_hom_sym_numeric(xs, N):
    lhs, rhs, ok = hom_sym_identity_numeric(xs, N)
    assert ok and rhs == h_oracle(xs, N - len(xs) + 1)


def test_partial_fraction_special_cases():
    ctx = sym_ctx(3, with_y=True)
    Y = MultiPoly.var(ctx, 3)
    assert partial_fraction_reduce(MultiPoly.one(ctx), 3).to_poly().is_zero()
    r = partial_fraction_reduce(Y ** 4, 3)
    assert r.to_poly() == complete_homogeneous(ctx, [0, 1, 2], 2)
    with pytest.raises(ValueError):
        partial_fraction_reduce(Y, 4, y_index=2)


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 3), st.lists(st.tuples(st.integers(0, 4), st.integers(0, 2), st.integers(-3, 3)),
                                   min_size=1, max_size=5))
def test_partial_fraction_with_polynomial_coefficients(m, terms):
    # variables X1..Xm, a coefficient variable c, then Y
    ctx = SpaceCtx(m + 2, tuple(f"X{i}" for i in range(1, m + 1)) + ("c", "Y"))
    c, Y = MultiPoly.var(ctx, m), MultiPoly.var(ctx, m + 1)
    P = MultiPoly.zero(ctx)
    for ydeg, cdeg, coef in terms:
        P = P + (Y ** ydeg) * (c ** cdeg) * coef
    r = partial_fraction_reduce(P, m)
    assert r.is_polynomial()
    xs = [Fraction(3), Fraction(-1), Fraction(7, 2)][:m]
    cval = Fraction(5, 3)
    coeffs = [Fraction(0)] * 5
    for ydeg, cdeg, coef in terms:
        coeffs[ydeg] += coef * cval ** cdeg
    assert r.to_poly().evaluate(xs + [cval, Fraction(0)]) == partial_fraction_numeric(coeffs, xs)


# -- symmetric extension ------------------------------------------------------


def test_symmetric_extend_examples():
    ctx2 = sym_ctx(2)
    s1, s2 = elementary_polys(ctx2, [0, 1])[1:]
    ctx3 = sym_ctx(3, with_y=True)
    e = elementary_polys(ctx3, [0, 1, 2])
    Y = MultiPoly.var(ctx3, 3)
    assert symmetric_extend(s1) == e[1] - Y
    assert symmetric_extend(s2) == e[2] - e[1] * Y + Y ** 2
    assert symmetric_extend(MultiPoly.one(ctx2)) == MultiPoly.one(ctx3)


def test_symmetric_extend_rejects_non_symmetric():
    ctx2 = sym_ctx(2)
    P0 = MultiPoly.var(ctx2, 0) ** 2
    assert not is_symmetric(P0, [0, 1])
    with pytest.raises(ValueError):
        symmetric_extend(P0)


@pytest.mark.parametrize("m", range(2, 6))
def test_extension_of_generators(m):
    ctx = sym_ctx(m - 1)
    for e in elementary_polys(ctx, range(m - 1))[1:]:
        P = symmetric_extend(e)
        assert check_extension(e, P)


def test_extension_of_power_sums():
    ctx = sym_ctx(3)
    X = [MultiPoly.var(ctx, i) for i in range(3)]
    for k in range(1, 5):
        P0 = sum((x ** k for x in X), MultiPoly.zero(ctx))
        rep = to_elementary(P0, 3)
        assert rep
        assert check_extension(P0, symmetric_extend(P0))


# -- Vandermonde inverses ------------------------------------------------------


def test_vandermonde_small_cases():
    assert vandermonde_inverse([5]) == [[1]]
    assert vandermonde([0, 1]) == [[1, 0], [1, 1]]
    # the library stores A[v][i] = X_v^i, so the inverse rows are indexed by powers
    assert vandermonde_inverse([0, 1]) == [[1, 0], [-1, 1]]
    assert first_row_product([0, 1]) == [1, 0]
    with pytest.raises(RepeatedValues):
        vandermonde_inverse([2, 2])


@settings(max_examples=200, deadline=None)
@given(distinct_values.filter(lambda v: len(v) <= 6))
def test_vandermonde_three_way(xs):
    inv = vandermonde_inverse(xs)
    A = vandermonde(xs)
    m = len(xs)
    for i in range(m):
        for j in range(m):
            assert sum(inv[i][k] * A[k][j] for k in range(m)) == (i == j)
    assert gauss_jordan_inverse(A)[1] == vandermonde_det_formula(xs)
    assert all(check_power_relation(xs, j) for j in range(m))


@pytest.mark.parametrize("m", [1, 2, 3])
def test_symbolic_inverse(m):
    inv = vandermonde_inverse_symbolic(m)
    ctx = sym_ctx(m)
    X = [MultiPoly.var(ctx, i) for i in range(m)]
    for i in range(m):
        for j in range(m):
            total = RationalFn(MultiPoly.zero(ctx))
            for k in range(m):
                total = total + inv[i][k] * RationalFn(X[k] ** j)
            assert total == RationalFn(MultiPoly.const(ctx, int(i == j)))


def _lin(ctx, *c):
    return MultiPoly.linear(ctx, [Fraction(x) for x in c])


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(0, 10 ** 6))
def test_vandermonde_solve_recovers_coefficients(r, seed):
    rng = random.Random(seed)
    ctx = SpaceCtx(2, ("u", "v"))
    taus = []
    while len(taus) < r:
        t = _lin(ctx, rng.randint(-4, 4), rng.randint(-4, 4))
        if not t.is_zero() and t not in taus and all(not (t - s).is_zero() for s in taus):
            taus.append(t)
    coeffs = [_lin(ctx, rng.randint(-3, 3), rng.randint(-3, 3)) * rng.randint(-2, 2) for _ in range(r)]
    g = [sum((c * t ** i for i, c in enumerate(coeffs)), MultiPoly.zero(ctx)) for t in taus]
    closed, newton = vandermonde_solve(taus, g), vandermonde_solve_newton(taus, g)
    assert [x.to_poly() for x in closed] == coeffs
    assert closed == newton


def test_vandermonde_solve_rejects_repeats():
    ctx = SpaceCtx(2, ("u", "v"))
    t = _lin(ctx, 1, 0)
    with pytest.raises(RepeatedValues):
        vandermonde_solve([t, t], [t, t])


def test_appendix_suite_passes():
    for name, passed, cases in appendix_suite(max_m=6, seed=3):
        assert passed and cases > 0, name
