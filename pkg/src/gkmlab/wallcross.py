"""Crossing a critical level: the Vandermonde transform and the dimension sweep."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .cohomology import dim_H
from .crosssection import CrossSection, finite_coh_decompose, finite_coh_dim_formula
from .cutting import ProductSkeleton, cut_product, vertex_name
from .morse import MorseData
from .polyring import MultiPoly, graded_dim
from .symfun import vandermonde_solve


class ExtremalWall(ValueError):
    """The vertex has index 0 or d, so there is no Vandermonde transform."""


class NotInCohomology(ValueError):
    pass


def wall_levels(md: MorseData, p: str) -> tuple[Fraction, Fraction]:
    vals = sorted(set(md.phi.values()))
    i = vals.index(md.phi[p])
    lo = (vals[i - 1] + vals[i]) / 2 if i > 0 else vals[i] - 1
    hi = (vals[i] + vals[i + 1]) / 2 if i + 1 < len(vals) else vals[i] + 1
    return lo, hi


@dataclass(eq=False)
class WallData:
    md: MorseData
    p: str
    below: CrossSection
    above: CrossSection
    delta_c: tuple[int, ...]  # edges into p, members of V_c
    delta_c2: tuple[int, ...]  # edges out of p upward, members of V_c'

    @property
    def r(self) -> int:
        return len(self.delta_c)

    @property
    def s(self) -> int:
        return len(self.delta_c2)

    @property
    def extremal(self) -> bool:
        return self.r == 0 or self.s == 0

    def beta(self, k: int) -> MultiPoly:
        cs = self.below if k in self.below.index else self.above
        return cs.beta(k)

    def tau_sharp(self, i: int, a: int) -> MultiPoly:
        """``beta_i - beta_a`` for ``e_i`` in Delta_c and ``e_a`` in Delta_c'."""
        return self.beta(i) - self.beta(a)

    @property
    def unchanged(self) -> tuple[int, ...]:
        return tuple(k for k in self.below.members if k not in set(self.delta_c))

    def dim_delta(self, m: int) -> int:
        return dim_delta(self.r, self.s, m, self.below.ctx.dim)


def wall_data(md: MorseData, p: str) -> WallData:
    s = md.skeleton
    lo, hi = wall_levels(md, p)
    below, above = CrossSection(md, lo), CrossSection(md, hi)
    dc = tuple(sorted(s.edges[k].rev for k in md.down_edges(p)))
    dc2 = tuple(sorted(md.up_edges(p)))
    wd = WallData(md, p, below, above, dc, dc2)
    for i in dc:
        for a in dc2:
            if wd.tau_sharp(i, a).is_zero():
                raise ValueError(f"tau^# vanishes on ({i}, {a}); xi is not generic")
    if set(wd.unchanged) != set(above.members) - set(dc2):
        raise AssertionError("level sets on both sides of the wall do not match")
    return wd


def dim_delta(r: int, s: int, m: int, n_xi: int) -> int:
    """Change of dim H^m across a wall with r edges below and s above, values in S of rank n_xi."""
    return finite_coh_dim_formula(s, m, n_xi) - finite_coh_dim_formula(r, m, n_xi)


def restrict_delta_check(wd: WallData, f: Mapping[int, MultiPoly]) -> bool:
    """Whether ``f`` restricted to Delta_c lies in H(Delta_c, tau_c)."""
    if wd.r == 0:
        return True
    taus = [wd.beta(i) for i in wd.delta_c]
    return finite_coh_decompose(taus, [f[i] for i in wd.delta_c]).member


def _solve(taus: list[MultiPoly], rhs: list[MultiPoly]) -> list[MultiPoly]:
    coeffs = vandermonde_solve(taus, rhs)
    if not all(c.is_polynomial() for c in coeffs):
        raise NotInCohomology("wall-crossing solution is not polynomial")
    return [c.to_poly() for c in coeffs]


def cross_transform(wd: WallData, f: Mapping[int, MultiPoly], fs: Sequence[Mapping[int, MultiPoly]] = (),
                    check: bool = True) -> tuple[dict[int, MultiPoly], list[dict[int, MultiPoly]]]:
    """Solve ``f' + sum_j X^j f'_j = f + sum_i X^i f_i`` column by column, ``X = tau^#``.

    ``fs`` holds ``f_1 .. f_{s-1}`` on Delta_c; the result is ``f'`` on V_c' and
    ``f'_1 .. f'_{r-1}`` on Delta_c'.
    """
    if wd.extremal:
        raise ExtremalWall(f"vertex {wd.p} has index {wd.r}")
    if len(fs) != wd.s - 1:
        raise ValueError(f"expected {wd.s - 1} correction maps, got {len(fs)}")
    if check:
        if not wd.below.membership(f).member:
            raise NotInCohomology("f is not in H(Gamma_c)")
        for g in fs:
            if not restrict_delta_check(wd, g):
                raise NotInCohomology("a correction map is not in H(Delta_c)")
    out = {k: f[k] for k in wd.unchanged}
    outs: list[dict[int, MultiPoly]] = [{} for _ in range(wd.r - 1)]
    for a in wd.delta_c2:
        X = [wd.tau_sharp(i, a) for i in wd.delta_c]
        rhs = []
        for i, x in zip(wd.delta_c, X):
            v = f[i]
            for k, g in enumerate(fs, start=1):
                v = v + x ** k * g[i]
            rhs.append(v)
        sol = _solve(X, rhs)
        out[a] = sol[0]
        for j in range(1, wd.r):
            outs[j - 1][a] = sol[j]
    if check:
        if not wd.above.membership(out).member:
            raise AssertionError("f' is not in H(Gamma_c')")
        for g in outs:
            if wd.s > 0 and not finite_coh_decompose([wd.beta(a) for a in wd.delta_c2],
                                                     [g[a] for a in wd.delta_c2]).member:
                raise AssertionError("a correction output is not in H(Delta_c')")
    return out, outs


def reverse_transform(wd: WallData, f2: Mapping[int, MultiPoly], fs2: Sequence[Mapping[int, MultiPoly]]
                      ) -> tuple[dict[int, MultiPoly], list[dict[int, MultiPoly]]]:
    """Inverse of :func:`cross_transform`, solving row by row over Delta_c'."""
    if wd.extremal:
        raise ExtremalWall(f"vertex {wd.p} has index {wd.r}")
    if len(fs2) != wd.r - 1:
        raise ValueError(f"expected {wd.r - 1} correction maps, got {len(fs2)}")
    out = {k: f2[k] for k in wd.unchanged}
    outs: list[dict[int, MultiPoly]] = [{} for _ in range(wd.s - 1)]
    for i in wd.delta_c:
        Y = [wd.tau_sharp(i, a) for a in wd.delta_c2]
        rhs = []
        for a, y in zip(wd.delta_c2, Y):
            v = f2[a]
            for j, g in enumerate(fs2, start=1):
                v = v + y ** j * g[a]
            rhs.append(v)
        sol = _solve(Y, rhs)
        out[i] = sol[0]
        for k in range(1, wd.s):
            outs[k - 1][i] = sol[k]
    return out, outs


# ---------------------------------------------------------------------------
# the sweep


@dataclass
class SweepStep:
    vertex: str
    r: int
    s: int
    delta: int
    running: int
    actual: int | None  # dim H^m of the level above, when verified


@dataclass
class SweepReport:
    m: int
    steps: list[SweepStep]
    total: int
    dim_H: int
    formula: int

    @property
    def ok(self) -> bool:
        levels = all(st.actual is None or st.actual == st.running for st in self.steps)
        return levels and self.total == self.dim_H == self.formula


def sweep(md: MorseData, m: int, verify_levels: bool = False, product: ProductSkeleton | None = None) -> SweepReport:
    """Sweep the product skeleton from below its minimum up to the middle window."""
    ps = product or cut_product(md)
    s = md.skeleton
    n = s.ctx.dim
    d = s.d
    pmd = ps.morse
    steps = []
    total = 0
    for p in md.order:
        v = vertex_name(p, 0)
        r = pmd.sigma[v]
        if r != md.sigma[p]:
            raise AssertionError("index of (p,0) differs from the index of p")
        delta = dim_delta(r, d + 1 - r, m, n)
        total += delta
        actual = None
        if verify_levels:
            actual = CrossSection(pmd, _level_above(pmd, v)).dim_H(m)
        steps.append(SweepStep(p, r, d + 1 - r, delta, total, actual))
    formula = sum(b * graded_dim(m - k, n) for k, b in enumerate(md.betti))
    return SweepReport(m, steps, total, dim_H(s, m), formula)


def _level_above(md: MorseData, v: str) -> Fraction:
    return wall_levels(md, v)[1]


def dim_by_sweep(md: MorseData, m: int) -> int:
    rep = sweep(md, m)
    if not rep.ok:
        raise AssertionError(f"sweep total {rep.total} disagrees with dim_H {rep.dim_H} or formula {rep.formula}")
    return rep.total


def bracket_identity(betti: Sequence[int]) -> bool:
    """``sum_{l <= d-k} b_l - sum_{l > k} b_l = b_k`` for every k."""
    d = len(betti) - 1
    return all(sum(betti[: d - k + 1]) - sum(betti[k + 1:]) == betti[k] for k in range(d + 1))
