"""Graded pieces of H(Gamma, alpha), generating classes and the Morse package.

A class of degree ``m`` is a map ``V -> S^m(g*)`` whose values at the two ends
of every edge agree modulo the edge weight.  Everything here reduces to sparse
linear systems in the monomial coefficients of the values.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .linalg import LinearSystem, RowReducer, reduce_rows
from .morse import MorseData, canonical_morse, find_xi, flow_up, is_generic, is_polarizing, orient_and_check_acyclic
from .parallel import pmap
from .polyring import (MultiPoly, SpaceCtx, graded_dim, monomials, normalize_linear, restrict_mod,
                       restriction_images)
from .skeleton import Edge, Skeleton, Subspace, Vec, dot, enumerate_2d_subspaces, slice_components, vec


@dataclass(eq=False)
class CohomologyClass:
    values: dict[str, MultiPoly]
    degree: int | None = None  # None when the values are not homogeneous of one degree

    def __getitem__(self, p: str) -> MultiPoly:
        return self.values[p]

    def support(self) -> set[str]:
        return {p for p, v in self.values.items() if not v.is_zero()}

    def _combine(self, other: "CohomologyClass", op) -> "CohomologyClass":
        vals = {p: op(self.values[p], other.values[p]) for p in self.values}
        deg = self.degree if self.degree == other.degree else None
        return CohomologyClass(vals, deg)

    def __add__(self, other: "CohomologyClass") -> "CohomologyClass":
        return self._combine(other, lambda a, b: a + b)

    def __sub__(self, other: "CohomologyClass") -> "CohomologyClass":
        return self._combine(other, lambda a, b: a - b)

    def __mul__(self, other) -> "CohomologyClass":
        if isinstance(other, CohomologyClass):
            deg = None if self.degree is None or other.degree is None else self.degree + other.degree
            return CohomologyClass({p: self.values[p] * other.values[p] for p in self.values}, deg)
        if isinstance(other, MultiPoly):
            deg = None
            if self.degree is not None and other.is_homogeneous() and not other.is_zero():
                deg = self.degree + other.degree()
            return CohomologyClass({p: v * other for p, v in self.values.items()}, deg)
        return CohomologyClass({p: v * other for p, v in self.values.items()}, self.degree)

    __rmul__ = __mul__

    def to_json(self) -> dict:
        return {"degree": self.degree, "values": {p: v.to_json() for p, v in sorted(self.values.items())}}

    @classmethod
    def from_json(cls, ctx: SpaceCtx, data: Mapping) -> "CohomologyClass":
        vals = {p: MultiPoly.from_json(ctx, v) for p, v in data["values"].items()}
        return cls(vals, data.get("degree"))


def constant_class(s: Skeleton, c=1) -> CohomologyClass:
    return CohomologyClass({p: MultiPoly.const(s.ctx, c) for p in s.vertices}, 0)


def linear_form(s: Skeleton, alpha: Sequence) -> MultiPoly:
    return MultiPoly.linear(s.ctx, alpha)


def _values(f) -> Mapping[str, MultiPoly]:
    return f.values if isinstance(f, CohomologyClass) else f


def is_class(s: Skeleton, f, homogeneous: bool = True) -> tuple[bool, int | None]:
    """Check the compatibility condition on every unoriented edge; witness is an edge index."""
    vals = _values(f)
    if homogeneous:
        degs = set()
        for v in vals.values():
            if not v.is_zero():
                if not v.is_homogeneous():
                    raise ValueError("value is not homogeneous")
                degs.add(v.degree())
        if len(degs) > 1:
            raise ValueError(f"mixed degrees {sorted(degs)}")
    for e in s.undirected():
        diff = vals[e.src] - vals[e.dst]
        if not diff.is_zero() and not restrict_mod(diff, e.alpha).is_zero():
            return False, e.index
    return True, None


# ---------------------------------------------------------------------------
# linear systems


@lru_cache(maxsize=None)
def _restricted_monomials(ctx: SpaceCtx, form: tuple, m: int) -> tuple[dict, ...]:
    imgs = restriction_images(ctx, form)
    return tuple(MultiPoly.monomial(ctx, e).compose(imgs, ctx).terms for e in monomials(ctx.dim, m))


def _restricted_basis(ctx: SpaceCtx, alpha: Vec, m: int) -> tuple[dict, ...]:
    return _restricted_monomials(ctx, normalize_linear(alpha)[1], m)


class _ClassSystem:
    """Unknown homogeneous values on some vertices, fixed values on others, zero elsewhere."""

    def __init__(self, s: Skeleton, m: int, unknown: Sequence[str], fixed: Mapping[str, MultiPoly]):
        self.s, self.m = s, m
        self.mons = monomials(s.ctx.dim, m)
        self.L = len(self.mons)
        self.unknown = list(unknown)
        self.base = {v: i * self.L for i, v in enumerate(self.unknown)}
        self.fixed = dict(fixed)
        self.system = LinearSystem(len(self.unknown) * self.L)
        for e in s.undirected():
            if (e.src in self.base or e.src in self.fixed or e.dst in self.base or e.dst in self.fixed):
                self._edge(e)

    def _edge(self, e: Edge):
        rb = _restricted_basis(self.s.ctx, e.alpha, self.m)
        rows: dict[tuple, dict[int, Fraction]] = {}
        rhs: dict[tuple, Fraction] = {}
        for v, sign in ((e.src, 1), (e.dst, -1)):
            if v in self.base:
                b = self.base[v]
                for j, img in enumerate(rb):
                    for t, c in img.items():
                        row = rows.setdefault(t, {})
                        row[b + j] = row.get(b + j, 0) + sign * c
            elif v in self.fixed:
                for t, c in restrict_mod(self.fixed[v], e.alpha).terms.items():
                    rhs[t] = rhs.get(t, 0) - sign * c
                    rows.setdefault(t, {})
        for t, row in rows.items():
            self.system.add_equation(row, rhs.get(t, Fraction(0)))

    def force_zero(self, system: LinearSystem, v: str):
        b = self.base[v]
        for j in range(self.L):
            system.add_equation({b + j: Fraction(1)})

    def assemble(self, x: Sequence[Fraction] | Mapping[int, Fraction]) -> dict[str, MultiPoly]:
        ctx = self.s.ctx
        vals = {p: MultiPoly.zero(ctx) for p in self.s.vertices}
        vals.update(self.fixed)
        get = x.get if isinstance(x, Mapping) else (lambda i, _d=None: x[i])
        for v, b in self.base.items():
            vals[v] = MultiPoly(ctx, {self.mons[j]: get(b + j, 0) for j in range(self.L)})
        return vals


def basis_H(s: Skeleton, m: int) -> list[CohomologyClass]:
    """Exact basis of the degree-m piece of H(Gamma, alpha)."""
    cs = _ClassSystem(s, m, s.vertices, {})
    return [CohomologyClass(cs.assemble(v), m) for v in cs.system.kernel()]


def dim_H(s: Skeleton, m: int) -> int:
    if m < 0:
        return 0
    return _ClassSystem(s, m, s.vertices, {}).system.kernel_dim()


def betti_formula(betti: Sequence[int], m: int, n: int) -> int:
    return sum(b * graded_dim(m - k, n) for k, b in enumerate(betti))


# ---------------------------------------------------------------------------
# generating classes


@dataclass(eq=False)
class GeneratingClass:
    vertex: str
    cls: CohomologyClass
    unique: bool
    sharpening: bool  # every other vertex of the flow-up has strictly larger index


def leading_value(md: MorseData, p: str) -> MultiPoly:
    s = md.skeleton
    out = MultiPoly.one(s.ctx)
    for k in md.down_edges(p):
        out = out * linear_form(s, s.alpha(k))
    return out


def find_generating_class(md: MorseData, p: str) -> GeneratingClass | None:
    s = md.skeleton
    F = flow_up(md, p)
    others = sorted(F - {p})
    r = md.sigma[p]
    cs = _ClassSystem(s, r, others, {p: leading_value(md, p)})
    system = cs.system
    if not system.consistent:
        return None
    unique = system.kernel_dim() == 0
    if not unique:
        # greedily kill values in vertex order while the system stays solvable
        for q in others:
            trial = system.copy()
            cs.force_zero(trial, q)
            if trial.consistent:
                system = trial
    x = system.solution()
    sharp = all(md.sigma[q] > r for q in others)
    return GeneratingClass(p, CohomologyClass(cs.assemble(x), r), unique, sharp)


def generating_family(md: MorseData) -> dict[str, GeneratingClass | None]:
    verts = list(md.skeleton.vertices)
    return dict(zip(verts, pmap(lambda p: find_generating_class(md, p), verts)))


def family_complete(fam: Mapping[str, GeneratingClass | None]) -> bool:
    return all(g is not None for g in fam.values())


def family_span_rank(md: MorseData, fam: Mapping[str, GeneratingClass], m: int) -> int:
    """Dimension of the degree-m part of the S(g*)-span of the family."""
    s = md.skeleton
    n = s.ctx.dim
    mons = monomials(n, m)
    col = {e: j for j, e in enumerate(mons)}
    L = len(mons)
    rr = RowReducer(len(s.vertices) * L)
    for p, g in fam.items():
        for mu in monomials(n, m - md.sigma[p]):
            mono = MultiPoly.monomial(s.ctx, mu)
            row = {}
            for q, val in g.cls.values.items():
                if val.is_zero():
                    continue
                b = s.vindex[q] * L
                for e, c in (val * mono).terms.items():
                    row[b + col[e]] = c
            rr.add(row)
    return rr.rank


@dataclass
class DegreeCheck:
    m: int
    dim_H: int
    formula: int
    span_rank: int | None

    @property
    def ok(self) -> bool:
        return self.dim_H == self.formula and (self.span_rank is None or self.span_rank == self.formula)


@dataclass(eq=False)
class MorsePackageReport:
    md: MorseData
    family: dict[str, GeneratingClass | None]
    degrees: list[DegreeCheck] = field(default_factory=list)

    @property
    def verdict(self) -> bool:
        return family_complete(self.family)

    @property
    def dims_ok(self) -> bool:
        return all(d.ok for d in self.degrees)

    def status(self, p: str) -> str:
        g = self.family[p]
        if g is None:
            return "not found"
        return "found-unique" if g.unique else "found"


def check_morse_package(md: MorseData, max_degree: int | None = None) -> MorsePackageReport:
    s = md.skeleton
    fam = generating_family(md)
    M = s.d + 2 if max_degree is None else max_degree
    n = s.ctx.dim
    complete = family_complete(fam)

    def one(m: int) -> DegreeCheck:
        span = family_span_rank(md, fam, m) if complete else None
        return DegreeCheck(m, dim_H(s, m), betti_formula(md.betti, m, n), span)

    return MorsePackageReport(md, fam, pmap(one, range(M + 1)))


# ---------------------------------------------------------------------------
# two-dimensional reduction


def _pivots(h: Subspace) -> list[int]:
    return [next(i for i, x in enumerate(b) if x) for b in h.basis]


def h_coords(h: Subspace, v: Sequence) -> Vec:
    """Coordinates of ``v`` (assumed in h) with respect to the echelon basis of h."""
    return tuple(vec(v)[i] for i in _pivots(h))


def h_ctx(h: Subspace) -> SpaceCtx:
    return SpaceCtx(h.dim, tuple(f"h{i + 1}" for i in range(h.dim)))


def project_skeleton(comp: Skeleton, h: Subspace) -> Skeleton:
    """Re-express a skeleton with weights in h in the echelon coordinates of h."""
    es = [Edge(e.index, e.src, e.dst, h_coords(h, e.alpha), e.rev) for e in comp.edges]
    parents = comp.parent_edges if comp.parent_edges is not None else range(len(es))
    return Skeleton(h_ctx(h), comp.vertices, es, comp.name, parents)


def project_xi(h: Subspace, xi: Sequence) -> Vec:
    return tuple(dot(b, vec(xi)) for b in h.basis)


def embed_poly(h: Subspace, target: SpaceCtx, p: MultiPoly) -> MultiPoly:
    """S(h*) -> S(g*) sending the i-th h-variable to the i-th basis vector of h."""
    return p.compose([MultiPoly.linear(target, b) for b in h.basis], target)


def slice_morse(comp: Skeleton, xi: Vec, seed: int = 0) -> tuple[MorseData, str]:
    """Morse data on a slice: reuse xi when it is valid there, otherwise search."""
    ok = (is_polarizing(comp, xi)[0] and is_generic(comp, xi)[0]
          and orient_and_check_acyclic(comp, xi)[1])
    if ok:
        return canonical_morse(comp, xi), "reused"
    return canonical_morse(comp, find_xi(comp, seed=seed)), "searched"


def _k_basis(h: Subspace, n: int) -> list[Vec]:
    """Basis of the annihilator of h in g."""
    rr = reduce_rows(({i: x for i, x in enumerate(b) if x} for b in h.basis), n)
    out = []
    for v in rr.nullspace():
        out.append(tuple(v.get(i, Fraction(0)) for i in range(n)))
    return out


def restrict_sharp(s: Skeleton, h: Subspace, f, xi_k: Sequence,
                   vertices: Iterable[str] | None = None) -> dict[str, MultiPoly]:
    """Restrict values to the affine plane ``xi_k + h`` and read them in S(h*)."""
    xi_k = vec(xi_k)
    if any(dot(b, xi_k) for b in h.basis):
        raise ValueError("xi_k does not annihilate h*")
    if h.dim != 2:
        raise ValueError("restrict_sharp needs a two-dimensional subspace")
    ctx2 = h_ctx(h)
    H = h.basis
    g11, g12, g22 = dot(H[0], H[0]), dot(H[0], H[1]), dot(H[1], H[1])
    det = g11 * g22 - g12 * g12
    inv = ((g22 / det, -g12 / det), (-g12 / det, g11 / det))
    # eta_b = sum_a H_a inv[a][b] so that h_a(eta_b) = delta_ab
    eta = [tuple(H[0][j] * inv[0][b] + H[1][j] * inv[1][b] for j in range(s.ctx.dim)) for b in range(2)]
    imgs = [MultiPoly(ctx2, {(0, 0): xi_k[j], (1, 0): eta[0][j], (0, 1): eta[1][j]}) for j in range(s.ctx.dim)]
    vals = _values(f)
    verts = s.vertices if vertices is None else vertices
    return {p: vals[p].compose(imgs, ctx2) for p in verts}


def choose_xi_k(s: Skeleton, h: Subspace, avoid: Sequence[Vec], seed: int = 0, attempts: int = 400) -> Vec:
    """Deterministic xi in the annihilator of h with alpha(xi) != 0 for every alpha in ``avoid``."""
    n = s.ctx.dim
    kb = _k_basis(h, n)
    if not avoid:
        return tuple(Fraction(0) for _ in range(n))
    if not kb:
        raise ValueError("annihilator is zero but some weights must not vanish")
    rng = random.Random(seed)
    bound = 1
    for i in range(attempts):
        if i and i % 20 == 0:
            bound *= 2
        coeffs = [rng.randint(-bound, bound) for _ in kb]
        xi = tuple(sum((c * b[j] for c, b in zip(coeffs, kb)), Fraction(0)) for j in range(n))
        if all(dot(a, xi) != 0 for a in avoid):
            return xi
    raise RuntimeError("could not find xi_k avoiding the given weights")


def component_containing(s: Skeleton, h: Subspace, p: str) -> Skeleton:
    for comp in slice_components(s, h):
        if p in comp.vindex:
            return comp
    raise KeyError(p)


@dataclass(eq=False)
class InducedClass:
    generating: GeneratingClass
    component: Skeleton  # projected into h coordinates
    morse: MorseData
    xi_k: Vec
    c: Fraction
    sharp: dict[str, MultiPoly]
    checks: dict[str, bool]

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def induced_generating_class(md: MorseData, h: Subspace, p: str,
                             tau: GeneratingClass | None = None) -> InducedClass:
    s = md.skeleton
    if tau is None:
        tau = find_generating_class(md, p)
        if tau is None:
            raise ValueError(f"no generating class at {p}")
    downs = md.down_edges(p)
    outside = [s.alpha(k) for k in downs if not h.contains(s.alpha(k))]
    inside = [k for k in downs if h.contains(s.alpha(k))]
    xi_k = choose_xi_k(s, h, outside)
    c = Fraction(1)
    for a in outside:
        c *= dot(a, xi_k)
    comp = component_containing(s, h, p)
    pcomp = project_skeleton(comp, h)
    sharp = restrict_sharp(s, h, tau.cls, xi_k, comp.vertices)
    deg = len(inside)
    vals = {q: v.homogeneous_part(deg).scale(1 / c) for q, v in sharp.items()}
    cmd, _ = slice_morse(pcomp, project_xi(h, md.xi))
    lead = MultiPoly.one(pcomp.ctx)
    for k in inside:
        lead = lead * MultiPoly.linear(pcomp.ctx, h_coords(h, s.alpha(k)))
    F = flow_up(cmd, p)
    checks = {
        "is_class": is_class(pcomp, vals)[0],
        "leading_value": vals[p] == lead,
        "support_in_flow_up": all(vals[q].is_zero() for q in pcomp.vertices if q not in F),
        "sharp_is_class": is_class(pcomp, sharp, homogeneous=False)[0],
    }
    gen = GeneratingClass(p, CohomologyClass(vals, deg), False, all(cmd.sigma[q] > deg for q in F - {p}))
    return InducedClass(gen, pcomp, cmd, xi_k, c, sharp, checks)


@dataclass
class SliceResult:
    subspace: Subspace
    component: str
    size: int
    valence: int | None
    xi_source: str
    passed: bool | None  # None when skipped as irregular


@dataclass
class ReductionReport:
    slices: list[SliceResult]
    full_pass: bool
    warnings: list[str]

    @property
    def slices_pass(self) -> bool:
        return all(r.passed for r in self.slices if r.passed is not None)

    @property
    def consistent(self) -> bool:
        return self.slices_pass == self.full_pass


def two_dim_reduction_check(md: MorseData, full_family: Mapping | None = None) -> ReductionReport:
    s = md.skeleton
    jobs = [(h, comp) for h in enumerate_2d_subspaces(s) for comp in slice_components(s, h)]

    def run(job):
        h, comp = job
        if not comp.is_regular():
            return SliceResult(h, comp.name, len(comp.vertices), None, "-", None)
        pcomp = project_skeleton(comp, h)
        cmd, src = slice_morse(pcomp, project_xi(h, md.xi))
        fam = generating_family(cmd)
        return SliceResult(h, comp.name, len(comp.vertices), pcomp.d, src, family_complete(fam))

    results = pmap(run, jobs)
    warnings = [f"irregular component {r.component} in {r.subspace} skipped" for r in results if r.passed is None]
    fam = full_family if full_family is not None else generating_family(md)
    return ReductionReport(results, family_complete(fam), warnings)

