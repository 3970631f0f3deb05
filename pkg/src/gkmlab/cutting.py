"""The product skeleton Gamma x L and the identification of its middle cross-section with Gamma."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .cohomology import _values
from .crosssection import CrossSection, PolarizedBasis
from .morse import MorseData, is_generic, is_polarizing, morse_from_phi, orient_and_check_acyclic
from .polyring import MultiPoly, SpaceCtx
from .skeleton import AxiomReport, Skeleton, validate_axioms


def vertex_name(p: str, t: int) -> str:
    return f"({p},{t})"


@dataclass(eq=False)
class ProductSkeleton:
    base: MorseData
    product: Skeleton
    a: Fraction
    morse: MorseData  # for (xi, 1) and Phi(p, t) = phi(p) + a t
    axioms: AxiomReport
    generic: bool

    @property
    def window(self) -> tuple[Fraction, Fraction]:
        """Open interval of levels whose cross-section is the set of vertical edges."""
        phi = self.base.phi.values()
        return max(phi), min(phi) + self.a

    def middle_level(self) -> Fraction:
        lo, hi = self.window
        return (lo + hi) / 2

    def vertical_edge(self, p: str) -> int:
        s = self.product
        src, dst = vertex_name(p, 0), vertex_name(p, 1)
        return next(k for k in s.E(src) if s.edges[k].dst == dst)


def _fresh_label(labels) -> str:
    name, k = "t", 0
    while name in labels:
        k += 1
        name = f"t{k}"
    return name


def cut_product(md: MorseData, a=None) -> ProductSkeleton:
    s = md.skeleton
    phi = md.phi
    spread = max(phi.values()) - min(phi.values())
    a = spread + 1 if a is None else Fraction(a)
    if a <= spread:
        raise ValueError(f"a must exceed phi_max - phi_min = {spread}")
    n = s.ctx.dim
    ctx = SpaceCtx(n + 1, s.ctx.labels + (_fresh_label(s.ctx.labels),))
    verts = [vertex_name(p, t) for p in s.vertices for t in (0, 1)]
    edges = []
    for e in s.undirected():
        for t in (0, 1):
            edges.append((vertex_name(e.src, t), vertex_name(e.dst, t), tuple(e.alpha) + (Fraction(0),)))
    unit = tuple(Fraction(0) for _ in range(n)) + (Fraction(1),)
    for p in s.vertices:
        edges.append((vertex_name(p, 0), vertex_name(p, 1), unit))
    prod = Skeleton.from_undirected(ctx, verts, edges, name=f"{s.name}xL")
    axioms = validate_axioms(prod)
    if not axioms.ok:
        raise RuntimeError("product skeleton fails the axioms")
    xi = tuple(md.xi) + (Fraction(1),)
    if not is_polarizing(prod, xi)[0] or not orient_and_check_acyclic(prod, xi)[1]:
        raise RuntimeError("(xi, 1) does not give an acyclic orientation")
    Phi = {vertex_name(p, t): phi[p] + a * t for p in s.vertices for t in (0, 1)}
    pmd = morse_from_phi(prod, xi, Phi)
    return ProductSkeleton(md, prod, a, pmd, axioms, is_generic(prod, xi)[0])


def rho_images(pb: PolarizedBasis, n: int) -> list[list[Fraction]]:
    """Images in S(g*) of the y-variables of (g + R)*_(xi,1): the projection to g*."""
    xi = pb.xi
    i0 = pb.pivot
    out = []
    for j in pb.free:
        v = [Fraction(0)] * n
        if j < n:
            v[j] += 1
        v[i0] -= xi[j] / xi[i0]
        out.append(v)
    return out


def rho_star(ps: ProductSkeleton, cs: CrossSection, g: Mapping[int, MultiPoly]) -> dict[str, MultiPoly]:
    """Transport a map on the middle cross-section of the product to a map on V."""
    _check_window(ps, cs)
    base = ps.base.skeleton
    n = base.ctx.dim
    imgs = [MultiPoly.linear(base.ctx, v) for v in rho_images(cs.basis, n)]
    return {p: g[ps.vertical_edge(p)].compose(imgs, base.ctx) for p in base.vertices}


def rho_inverse(ps: ProductSkeleton, cs: CrossSection, f) -> dict[int, MultiPoly]:
    """Inverse of :func:`rho_star`: ``e_j -> (e_j, -xi_j)`` read in y-coordinates."""
    _check_window(ps, cs)
    base = ps.base.skeleton
    n = base.ctx.dim
    xi = ps.base.xi
    imgs = []
    for j in range(n):
        v = [Fraction(0)] * (n + 1)
        v[j] = Fraction(1)
        v[n] = -xi[j]
        imgs.append(MultiPoly.linear(cs.ctx, cs.basis.ycoords(v)))
    vals = _values(f)
    return {ps.vertical_edge(p): vals[p].compose(imgs, cs.ctx) for p in base.vertices}


def horizontal_extension(ps: ProductSkeleton, f) -> dict[str, MultiPoly]:
    """Pull a class on Gamma back to the product (values independent of t)."""
    ctx = ps.product.ctx
    n = ps.base.skeleton.ctx.dim
    imgs = [MultiPoly.var(ctx, i) for i in range(n)]
    vals = _values(f)
    return {vertex_name(p, t): vals[p].compose(imgs, ctx) for p in ps.base.skeleton.vertices for t in (0, 1)}


def _check_window(ps: ProductSkeleton, cs: CrossSection):
    lo, hi = ps.window
    if cs.md is not ps.morse or not lo < cs.c < hi:
        raise ValueError(f"level must be a cross-section of the product inside ({lo}, {hi})")
