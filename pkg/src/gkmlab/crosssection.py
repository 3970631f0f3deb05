"""Level-set cross-sections, the Kirwan map and cohomology of the hypergraph Gamma_c.

Values on a cross-section live in ``S(g*_xi)``, the symmetric algebra of the
annihilator of xi.  Coordinates on ``g*_xi`` come from the reduced kernel basis
of the functional ``v -> v(xi)``: if ``i0`` is the first index with
``xi[i0] != 0``, then ``y_j = e_j - (xi_j / xi_i0) e_i0`` for the other indices
``j``, and the ``y``-coordinates of a vector in ``g*_xi`` are simply its entries
at those indices.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .cohomology import (GeneratingClass, _values, generating_family, project_skeleton,
                         project_xi, slice_morse)
from .integration import sum_over_linear_products
from .linalg import LinearSystem, RowReducer
from .morse import MorseData
from .parallel import pmap
from .polyring import (MultiPoly, RationalFn, SpaceCtx, graded_dim, monomials, normalize_linear,
                       primitive_vector)
from .skeleton import Skeleton, Subspace, Vec, dot, enumerate_2d_subspaces, parallel_ratio, slice_components, vec
from .symfun import RepeatedValues, vandermonde_solve, vandermonde_solve_newton


class CriticalLevel(ValueError):
    """The requested level is a value of the Morse function."""


class GenericityViolation(ValueError):
    pass


class KirwanMismatch(ValueError):
    """A map failed to restrict to the same value from both ends of a crossing edge."""


# ---------------------------------------------------------------------------
# polarized basis


@dataclass(frozen=True)
class PolarizedBasis:
    xi: Vec
    x: Vec  # x(xi) = 1
    pivot: int
    free: tuple[int, ...]
    ctx_y: SpaceCtx

    def ycoords(self, v: Sequence) -> Vec:
        v = vec(v)
        if dot(v, self.xi):
            raise ValueError("vector does not annihilate xi")
        return tuple(v[j] for j in self.free)

    def y_linear(self, v: Sequence) -> MultiPoly:
        return MultiPoly.linear(self.ctx_y, self.ycoords(v))

    def slopes(self, alpha: Sequence) -> tuple[Fraction, Vec]:
        """``(m, beta)`` with ``alpha = m (x - beta)``, beta in y-coordinates."""
        alpha = vec(alpha)
        m = dot(alpha, self.xi)
        if not m:
            raise ValueError("weight vanishes on xi")
        rest = tuple(a - m * b for a, b in zip(alpha, self.x))
        return m, tuple(-c / m for c in self.ycoords(rest))

    def shift(self, v: Sequence, alpha: Sequence) -> Vec:
        """y-coordinates of ``v - (v(xi)/alpha(xi)) alpha``."""
        v, alpha = vec(v), vec(alpha)
        r = dot(v, self.xi) / dot(alpha, self.xi)
        return self.ycoords(tuple(a - r * b for a, b in zip(v, alpha)))

    def kirwan_images(self, alpha: Sequence) -> list[MultiPoly]:
        """Images of the coordinate variables of g* under ``x -> beta_e``."""
        n = len(self.xi)
        out = []
        for i in range(n):
            e = [Fraction(0)] * n
            e[i] = Fraction(1)
            out.append(MultiPoly.linear(self.ctx_y, self.shift(e, alpha)))
        return out


def polarized_basis(xi: Sequence) -> PolarizedBasis:
    xi = vec(xi)
    if not any(xi):
        raise ValueError("xi must be nonzero")
    norm = dot(xi, xi)
    x = tuple(c / norm for c in xi)
    i0 = next(i for i, c in enumerate(xi) if c)
    free = tuple(j for j in range(len(xi)) if j != i0)
    ctx_y = SpaceCtx(len(free), tuple(f"y{k + 1}" for k in range(len(free))))
    return PolarizedBasis(xi, x, i0, free, ctx_y)


# ---------------------------------------------------------------------------
# finite-set cohomology


@dataclass
class FiniteCoh:
    taus: list[MultiPoly]
    coeffs: list[RationalFn]

    @property
    def member(self) -> bool:
        return all(c.is_polynomial() for c in self.coeffs)


def finite_coh_decompose(taus: Sequence[MultiPoly], g: Sequence[MultiPoly]) -> FiniteCoh:
    """Solve ``g = sum_k g_k tau^k`` on a finite set; members have polynomial ``g_k``."""
    if len(taus) != len(g):
        raise ValueError("tau and g must have the same length")
    if not taus:
        return FiniteCoh([], [])
    if len(set(taus)) != len(taus):
        raise RepeatedValues("tau is not injective")
    closed = vandermonde_solve(taus, g)
    newton = vandermonde_solve_newton(taus, g)
    if closed != newton:
        raise AssertionError("closed-form and elimination Vandermonde solutions disagree")
    return FiniteCoh(list(taus), closed)


def finite_coh_rank(taus: Sequence[MultiPoly], m: int) -> int:
    """Dimension of the span of ``{monomial * tau^k}`` in degree m, as maps into S^m(W)."""
    ctx = taus[0].ctx
    mons = monomials(ctx.dim, m)
    col = {e: j for j, e in enumerate(mons)}
    L = len(mons)
    rr = RowReducer(len(taus) * L)
    for k in range(min(len(taus), m + 1)):
        powers = [t ** k for t in taus]
        for mu in monomials(ctx.dim, m - k):
            mono = MultiPoly.monomial(ctx, mu)
            row = {}
            for v, tk in enumerate(powers):
                for e, c in (mono * tk).terms.items():
                    row[v * L + col[e]] = c
            rr.add(row)
    return rr.rank


def finite_coh_dim_formula(size: int, m: int, n: int) -> int:
    return sum(graded_dim(m - k, n) for k in range(size))


# ---------------------------------------------------------------------------
# cross-sections


@dataclass(eq=False)
class Hyperedge:
    h: Subspace
    component: Skeleton  # root edge indices in parent_edges
    members: tuple[int, ...]  # crossing edges of the component, in level order
    mu: int
    alpha: Vec  # primitive generator of h* in g*_xi, y-coordinates
    _family: dict | None = field(default=None, repr=False)


@dataclass
class HyperedgeVerdict:
    hyperedge: Hyperedge
    passes: bool
    witness: tuple | None  # (generating vertex, power) of a non-polynomial integral


@dataclass
class MembershipReport:
    verdicts: list[HyperedgeVerdict]

    @property
    def member(self) -> bool:
        return all(v.passes for v in self.verdicts)


class CrossSection:
    """The level set ``V_c`` of a Morse function with its hyperedges and densities."""

    def __init__(self, md: MorseData, c):
        self.md = md
        self.s = md.skeleton
        self.c = Fraction(c)
        if self.c in set(md.phi.values()):
            raise CriticalLevel(f"level {self.c} is a critical value")
        self.basis = polarized_basis(md.xi)
        self.ctx = self.basis.ctx_y
        s, phi = self.s, md.phi
        self.members = sorted((k for k in md.up if phi[s.edges[k].src] < self.c < phi[s.edges[k].dst]),
                              key=lambda k: (s.edges[k].src, s.edges[k].dst, k))
        self.index = {k: i for i, k in enumerate(self.members)}
        self._slopes = {k: self.basis.slopes(s.alpha(k)) for k in self.members}
        self._images = {k: self.basis.kirwan_images(s.alpha(k)) for k in self.members}
        self.all_hyperedges = self._hyperedges()
        self.hyperedges = [E for E in self.all_hyperedges if len(E.members) >= 2]
        self._check_valence()
        self._global_family = None

    # -- structure -------------------------------------------------------

    def _hyperedges(self) -> list[Hyperedge]:
        s, xi = self.s, self.md.xi
        out = []
        inside = set(self.members)
        for h in enumerate_2d_subspaces(s):
            h1, h2 = h.basis
            direction = tuple(dot(h2, xi) * a - dot(h1, xi) * b for a, b in zip(h1, h2))
            label = primitive_vector(self.basis.ycoords(direction))
            for comp in slice_components(s, h):
                crossing = tuple(k for k in self.members if k in set(comp.parent_edges) and k in inside)
                if crossing:
                    out.append(Hyperedge(h, comp, crossing, comp.d - 1, label))
        return out

    def _check_valence(self):
        d = self.s.d
        count = {k: 0 for k in self.members}
        for E in self.all_hyperedges:
            for k in E.members:
                count[k] += E.mu
        bad = [k for k, v in count.items() if v != d - 1]
        if bad:
            raise GenericityViolation(f"valence count fails at edge {bad[0]}")

    def slopes(self, k: int) -> tuple[Fraction, Vec]:
        return self._slopes[k]

    def beta(self, k: int) -> MultiPoly:
        return MultiPoly.linear(self.ctx, self._slopes[k][1])

    def edge_label(self, k: int) -> str:
        e = self.s.edges[k]
        return f"{e.src}->{e.dst}"

    # -- Kirwan map and densities ---------------------------------------

    def kirwan_value(self, k: int, p: MultiPoly) -> MultiPoly:
        return p.compose(self._images[k], self.ctx)

    def kirwan(self, f) -> dict[int, MultiPoly]:
        vals = _values(f)
        out = {}
        for k in self.members:
            e = self.s.edges[k]
            a, b = self.kirwan_value(k, vals[e.src]), self.kirwan_value(k, vals[e.dst])
            if a != b:
                raise KirwanMismatch(f"Kirwan images differ on edge {self.edge_label(k)}")
            out[k] = a
        return out

    def sharp_forms(self, k: int, among: Sequence[int] | None = None) -> list[Vec]:
        s = self.s
        e = s.edges[k]
        others = [j for j in s.E(e.src) if j != k and (among is None or j in among)]
        forms = []
        for j in others:
            v = self.basis.shift(s.alpha(j), s.alpha(k))
            if not any(v):
                raise GenericityViolation(f"alpha^# vanishes at edge {self.edge_label(k)}")
            forms.append(v)
        return forms

    def density(self, k: int, among: Sequence[int] | None = None) -> RationalFn:
        m = self._slopes[k][0]
        return RationalFn.over_linear_product(MultiPoly.const(self.ctx, 1 / m), self.sharp_forms(k, among))

    def integrate(self, f: Mapping[int, MultiPoly], edges: Sequence[int] | None = None,
                  among: Sequence[int] | None = None) -> RationalFn:
        edges = self.members if edges is None else edges
        terms = []
        for k in edges:
            m = self._slopes[k][0]
            terms.append((f[k].scale(1 / m), self.sharp_forms(k, among)))
        return sum_over_linear_products(self.ctx, terms)

    # -- membership ------------------------------------------------------

    def component_family(self, E: Hyperedge) -> dict[str, GeneratingClass]:
        if E._family is None:
            proj = project_skeleton(E.component, E.h)
            md, _ = slice_morse(proj, project_xi(E.h, self.md.xi))
            fam = generating_family(md)
            if any(g is None for g in fam.values()):
                raise RuntimeError("component has no complete generating family")
            E._family = fam
        return E._family

    def _component_kirwan(self, E: Hyperedge, k: int, p: MultiPoly) -> MultiPoly:
        alpha = self.s.alpha(k)
        imgs = [MultiPoly.linear(self.ctx, self.basis.shift(b, alpha)) for b in E.h.basis]
        return p.compose(imgs, self.ctx)

    def hyperedge_verdict(self, E: Hyperedge, f: Mapping[int, MultiPoly]) -> HyperedgeVerdict:
        """``sum_E delta'_e f(e) beta_e^j K_c(tau^q)(e)`` polynomial for all q and j < |E|."""
        fam = self.component_family(E)
        among = set(E.component.parent_edges)
        betas = {k: self.beta(k) for k in E.members}
        for q in sorted(fam):
            tau = fam[q].cls.values
            kt = {k: self._component_kirwan(E, k, tau[self.s.edges[k].src]) for k in E.members}
            for j in range(len(E.members)):
                prod = {k: f[k] * kt[k] * betas[k] ** j for k in E.members}
                if not self.integrate(prod, E.members, among).is_polynomial():
                    return HyperedgeVerdict(E, False, (q, j))
        return HyperedgeVerdict(E, True, None)

    def membership(self, f: Mapping[int, MultiPoly]) -> MembershipReport:
        return MembershipReport(pmap(lambda E: self.hyperedge_verdict(E, f), self.hyperedges))

    def global_family(self) -> dict[str, GeneratingClass]:
        if self._global_family is None:
            fam = generating_family(self.md)
            if any(g is None for g in fam.values()):
                raise RuntimeError("skeleton has no complete generating family")
            self._global_family = fam
        return self._global_family

    def _definition_terms(self):
        """Pairs (vertex q, power j) with the Kirwan images of x^j tau^q."""
        fam = self.global_family()
        N = len(self.members)
        for q in sorted(fam):
            kt = self.kirwan(fam[q].cls)
            for j in range(N):
                yield (q, j), {k: kt[k] * self.beta(k) ** j for k in self.members}

    def membership_by_definition(self, f: Mapping[int, MultiPoly]) -> tuple[bool, tuple | None]:
        """Integrality of ``f K_c(x^j tau^q)`` over Gamma_c for every q and j < |V_c|."""
        for tag, h in self._definition_terms():
            if not self.integrate({k: f[k] * h[k] for k in self.members}).is_polynomial():
                return False, tag
        return True, None

    def dim_H(self, m: int) -> int:
        """Dimension of the degree-m part of H(Gamma_c, alpha_c) from its definition."""
        if m < 0:
            return 0
        mons = monomials(self.ctx.dim, m)
        L = len(mons)
        system = LinearSystem(len(self.members) * L)
        basis_vals = [MultiPoly.monomial(self.ctx, mu) for mu in mons]
        for _, h in self._definition_terms():
            # sum over e and unknowns u of c_{e,u} * mono_u * h(e) / (m_e prod sharp)
            terms = []
            for i, k in enumerate(self.members):
                m_e = self._slopes[k][0]
                forms = self.sharp_forms(k)
                for u, mono in enumerate(basis_vals):
                    terms.append((i * L + u, (mono * h[k]).scale(1 / m_e), forms))
            for row in _integrality_rows(self.ctx, terms):
                system.add_equation(row)
        return system.kernel_dim()

    def kirwan_rank(self, classes) -> int:
        """Rank of the Kirwan images of the given homogeneous classes."""
        rows = []
        for f in classes:
            kf = self.kirwan(f)
            row = {}
            for i, k in enumerate(self.members):
                for e, c in kf[k].terms.items():
                    row[(i, e)] = c
            rows.append(row)
        keys = sorted({key for r in rows for key in r})
        col = {key: j for j, key in enumerate(keys)}
        rr = RowReducer(len(keys))
        for r in rows:
            rr.add({col[key]: c for key, c in r.items()})
        return rr.rank

    def gamma_slice(self, gamma: Sequence) -> tuple[list[Hyperedge], bool]:
        gamma = vec(gamma)
        if not any(gamma):
            raise ValueError("gamma must be nonzero")
        sl = [E for E in self.hyperedges if parallel_ratio(E.alpha, gamma) is not None]
        seen: set[int] = set()
        disjoint = True
        for E in sl:
            if seen & set(E.members):
                disjoint = False
            seen |= set(E.members)
        return sl, disjoint


def _integrality_rows(ctx: SpaceCtx, terms):
    """Linear conditions on unknowns ``c_u`` making ``sum_u c_u P_u / prod forms_u`` polynomial.

    Over the common denominator ``prod l^k`` the numerator must vanish to order
    ``k`` along each ``l``.  After a change of coordinates making ``l`` the
    pivot variable, that means every coefficient of pivot degree < k is zero.
    """
    prepared = []
    lcm: dict[tuple, int] = {}
    for u, num, forms in terms:
        scale = Fraction(1)
        den: dict[tuple, int] = {}
        for f in forms:
            sc, nf = normalize_linear(f)
            scale *= sc
            den[nf] = den.get(nf, 0) + 1
        prepared.append((u, num.scale(1 / scale), den))
        for f, k in den.items():
            lcm[f] = max(lcm.get(f, 0), k)
    full = []
    for u, num, den in prepared:
        for f, k in lcm.items():
            extra = k - den.get(f, 0)
            if extra:
                num = num * MultiPoly.linear(ctx, f) ** extra
        full.append((u, num))
    rows = []
    for form, k in lcm.items():
        i = next(j for j, c in enumerate(form) if c)
        imgs = [MultiPoly.var(ctx, j) for j in range(ctx.dim)]
        imgs[i] = MultiPoly.linear(ctx, [1 if j == i else -c for j, c in enumerate(form)])
        eqs: dict[tuple, dict[int, Fraction]] = {}
        for u, num in full:
            for e, c in num.compose(imgs, ctx).terms.items():
                if e[i] < k:
                    row = eqs.setdefault(e, {})
                    row[u] = row.get(u, 0) + c
        rows.extend(eqs.values())
    if not lcm:
        return []
    return rows


# ---------------------------------------------------------------------------
# functional interface


def cross_section(md: MorseData, c) -> CrossSection:
    return CrossSection(md, c)


def kirwan(cs: CrossSection, f) -> dict[int, MultiPoly]:
    return cs.kirwan(f)


def density(cs: CrossSection, k: int) -> RationalFn:
    return cs.density(k)


def integrate_c(cs: CrossSection, f: Mapping[int, MultiPoly]) -> RationalFn:
    return cs.integrate(f)


def membership_Hc(cs: CrossSection, f: Mapping[int, MultiPoly]) -> MembershipReport:
    return cs.membership(f)


def gamma_slice(cs: CrossSection, gamma: Sequence) -> tuple[list[Hyperedge], bool]:
    return cs.gamma_slice(gamma)


def regular_levels(md: MorseData) -> list[Fraction]:
    """Midpoints between consecutive distinct Morse values."""
    vals = sorted(set(md.phi.values()))
    return [(a + b) / 2 for a, b in zip(vals, vals[1:])]


def minimum_level_dim(d: int, m: int, n: int) -> int:
    """dim H^m at the level just above the minimum: d crossing edges, values in S(g*_xi)."""
    return finite_coh_dim_formula(d, m, n - 1)
