"""Integration over a skeleton, edge and component Thom classes, and the duality test."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .cohomology import CohomologyClass, GeneratingClass, _values, is_class, linear_form
from .morse import MorseData
from .polyring import LinForm, MultiPoly, RationalFn, monomials, normalize_linear
from .skeleton import Skeleton


def sum_over_linear_products(ctx, terms: Iterable[tuple[MultiPoly, Sequence[Sequence]]]) -> RationalFn:
    """``sum num / prod(forms)`` over a common denominator, reduced once at the end."""
    prepared = []
    lcm: dict[LinForm, int] = {}
    for num, forms in terms:
        if num.is_zero():
            continue
        scale = Fraction(1)
        den: dict[LinForm, int] = {}
        for f in forms:
            s, nf = normalize_linear(f)
            scale *= s
            den[nf] = den.get(nf, 0) + 1
        prepared.append((num.scale(1 / scale), den))
        for f, k in den.items():
            lcm[f] = max(lcm.get(f, 0), k)
    total = MultiPoly.zero(ctx)
    powers: dict[tuple[LinForm, int], MultiPoly] = {}

    def pw(f: LinForm, k: int) -> MultiPoly:
        if (f, k) not in powers:
            powers[(f, k)] = MultiPoly.linear(ctx, f) ** k
        return powers[(f, k)]

    for num, den in prepared:
        for f, k in lcm.items():
            extra = k - den.get(f, 0)
            if extra:
                num = num * pw(f, extra)
        total = total + num
    return RationalFn(total, lcm)


def integrate(s: Skeleton, f) -> RationalFn:
    """Sum over vertices of ``f_p`` divided by the product of all weights at ``p``."""
    vals = _values(f)
    return sum_over_linear_products(s.ctx, ((vals[p], [s.alpha(k) for k in s.E(p)]) for p in s.vertices))


def verify_integrality(s: Skeleton, f) -> bool:
    return integrate(s, f).is_polynomial()


def _prod(s: Skeleton, ks: Iterable[int]) -> MultiPoly:
    out = MultiPoly.one(s.ctx)
    for k in ks:
        out = out * linear_form(s, s.alpha(k))
    return out


def edge_thom(s: Skeleton, k: int) -> CohomologyClass:
    """Thom class of the edge ``k``: products of the other weights at both ends."""
    e = s.edges[k]
    vals = {p: MultiPoly.zero(s.ctx) for p in s.vertices}
    vals[e.src] = _prod(s, (j for j in s.E(e.src) if j != k))
    vals[e.dst] = _prod(s, (j for j in s.E(e.dst) if j != e.rev))
    f = CohomologyClass(vals, s.d - 1)
    assert is_class(s, f)[0], "edge Thom class failed the compatibility check"
    return f


def component_thom(s: Skeleton, comp: Skeleton) -> CohomologyClass:
    """Thom class of a component of a subskeleton of ``s`` (edge indices via ``parent_edges``)."""
    if comp.parent_edges is None:
        raise ValueError("component does not record its parent edges")
    inside = set(comp.parent_edges)
    vals = {p: MultiPoly.zero(s.ctx) for p in s.vertices}
    for q in comp.vertices:
        vals[q] = _prod(s, (j for j in s.E(q) if j not in inside))
    f = CohomologyClass(vals, s.d - comp.d)
    assert is_class(s, f)[0], "component Thom class failed the compatibility check"
    return f


@dataclass
class DualityReport:
    passes: bool  # every tested integral is a polynomial
    is_class: bool
    witness: tuple | None  # (vertex of the generating class, monomial) of a failing product

    @property
    def agree(self) -> bool:
        return self.passes == self.is_class


def duality_test(md: MorseData, f, family: Mapping[str, GeneratingClass | None],
                 degree_bound: int | None = None) -> DualityReport:
    """Test integrality of ``f * monomial * tau_p`` for all products of degree at most D."""
    s = md.skeleton
    if any(g is None for g in family.values()):
        raise ValueError("duality test needs a complete generating family")
    D = s.d + 1 if degree_bound is None else degree_bound
    vals = _values(f)
    witness = None
    for p in md.order:
        tau = family[p].cls
        # integration is S(g*)-linear, so one integral per class serves every monomial multiple
        base = integrate(s, {q: vals[q] * tau.values[q] for q in s.vertices})
        for j in range(0, D - md.sigma[p] + 1):
            for mu in monomials(s.ctx.dim, j):
                if not (base * RationalFn(MultiPoly.monomial(s.ctx, mu))).is_polynomial():
                    witness = (p, mu)
                    break
            if witness:
                break
        if witness:
            break
    return DualityReport(witness is None, is_class(s, vals, homogeneous=False)[0], witness)
