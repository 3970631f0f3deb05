"""Abstract one-skeletons: graphs with an axial function.

A :class:`Skeleton` stores oriented edges; every edge knows its reversal, and
``alpha`` of the reversal is the negated weight.  Vertex ids are opaque
strings whose sort order drives every tie-break in the package.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

import networkx as nx

from .linalg import RowReducer
from .polyring import SpaceCtx, as_fraction

Vec = tuple[Fraction, ...]


class MalformedGraph(ValueError):
    """Structural problem with a skeleton (not an axiom failure)."""


def vec(v: Iterable) -> Vec:
    return tuple(as_fraction(c) for c in v)


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def vsub(a: Vec, b: Vec) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def vadd(a: Vec, b: Vec) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def vscale(c, a: Vec) -> Vec:
    return tuple(c * x for x in a)


def parallel_ratio(u: Vec, v: Vec) -> Fraction | None:
    """``c`` with ``u == c*v`` (``v`` nonzero), or None when not parallel."""
    piv = next(i for i, x in enumerate(v) if x)
    c = u[piv] / v[piv]
    if all(a == c * b for a, b in zip(u, v)):
        return c
    return None


def independent(u: Vec, v: Vec) -> bool:
    if not any(u) or not any(v):
        return False
    return parallel_ratio(u, v) is None


@dataclass(eq=False)
class Edge:
    index: int
    src: str
    dst: str
    alpha: Vec
    rev: int


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of ``g*`` stored by its reduced echelon basis."""

    basis: tuple[Vec, ...]

    @classmethod
    def span(cls, vectors: Iterable[Sequence]) -> "Subspace":
        vectors = [vec(v) for v in vectors]
        if not vectors:
            return cls(())
        n = len(vectors[0])
        rr = RowReducer(n)
        for v in vectors:
            rr.add({i: x for i, x in enumerate(v) if x})
        rows = []
        for p in sorted(rr.pivots):
            r = rr.pivots[p]
            rows.append(tuple(r.get(i, Fraction(0)) for i in range(n)))
        return cls(tuple(rows))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence) -> bool:
        v = vec(v)
        rr = RowReducer(len(v))
        for b in self.basis:
            rr.add({i: x for i, x in enumerate(b) if x})
        return not rr.reduce({i: x for i, x in enumerate(v) if x})

    def __str__(self) -> str:
        return "span(" + ", ".join("(" + ",".join(str(x) for x in b) + ")" for b in self.basis) + ")"


class Skeleton:
    """A graph with oriented-edge involution and axial function.

    ``parent_edges`` maps edge indices to edge indices of the skeleton this one
    was cut out of (subskeletons and components); ``None`` for roots.
    """

    def __init__(self, ctx: SpaceCtx, vertices: Iterable[str], edges: Sequence[Edge],
                 name: str = "", parent_edges: Sequence[int] | None = None):
        self.ctx = ctx
        self.vertices = tuple(sorted(set(vertices)))
        self.vindex = {v: i for i, v in enumerate(self.vertices)}
        self.edges = list(edges)
        self.name = name
        self.parent_edges = tuple(parent_edges) if parent_edges is not None else None
        out: dict[str, list[int]] = {v: [] for v in self.vertices}
        for k, e in enumerate(self.edges):
            if e.index != k:
                raise MalformedGraph("edge indices must be consecutive")
            if e.src not in out or e.dst not in out:
                raise MalformedGraph(f"edge {e.src}->{e.dst} uses an unknown vertex")
            if e.src == e.dst:
                raise MalformedGraph(f"self-loop at {e.src}")
            if len(e.alpha) != ctx.dim:
                raise MalformedGraph(f"edge {e.src}->{e.dst} has a weight of the wrong length")
            if not 0 <= e.rev < len(self.edges):
                raise MalformedGraph(f"edge {e.src}->{e.dst} has no reversal")
            r = self.edges[e.rev]
            if r.rev != k or r.src != e.dst or r.dst != e.src or e.rev == k:
                raise MalformedGraph(f"broken reversal involution at {e.src}->{e.dst}")
            out[e.src].append(k)
        self.out = {v: tuple(sorted(ks, key=lambda k: (self.edges[k].dst, k))) for v, ks in out.items()}
        seen = set()
        for e in self.edges:
            key = (e.src, e.dst, e.alpha)
            if key in seen:
                raise MalformedGraph(f"duplicate edge {e.src}->{e.dst}")
            seen.add(key)

    # -- constructors -------------------------------------------------------
    @classmethod
    def from_undirected(cls, ctx: SpaceCtx, vertices: Iterable[str],
                        edges: Iterable[tuple[str, str, Sequence]], name: str = "") -> "Skeleton":
        """One entry per unoriented edge; the reversal gets ``-alpha``."""
        es: list[Edge] = []
        for src, dst, alpha in edges:
            a = vec(alpha)
            k = len(es)
            es.append(Edge(k, str(src), str(dst), a, k + 1))
            es.append(Edge(k + 1, str(dst), str(src), tuple(-x for x in a), k))
        return cls(ctx, vertices, es, name)

    @classmethod
    def from_oriented(cls, ctx: SpaceCtx, vertices: Iterable[str],
                      edges: Sequence[tuple[str, str, Sequence]], name: str = "") -> "Skeleton":
        """Explicit oriented edges; ``u->v`` is paired with the matching ``v->u``."""
        es = [Edge(k, str(s), str(t), vec(a), -1) for k, (s, t, a) in enumerate(edges)]
        pending: dict[tuple[str, str], list[int]] = {}
        for e in es:
            pending.setdefault((e.src, e.dst), []).append(e.index)
        for e in es:
            if e.rev >= 0:
                continue
            partners = [k for k in pending.get((e.dst, e.src), []) if es[k].rev < 0 and k != e.index]
            if not partners:
                raise MalformedGraph(f"edge {e.src}->{e.dst} has no reversal")
            k = partners[0]
            e.rev, es[k].rev = k, e.index
        return cls(ctx, vertices, es, name)

    # -- queries --------------------------------------------------------------
    def E(self, p: str) -> tuple[int, ...]:
        return self.out[p]

    def valences(self) -> dict[str, int]:
        return {v: len(ks) for v, ks in self.out.items()}

    def is_regular(self) -> bool:
        return len(set(self.valences().values())) <= 1

    @property
    def d(self) -> int:
        vals = set(self.valences().values())
        if len(vals) > 1:
            raise MalformedGraph(f"skeleton is not regular (valences {sorted(vals)})")
        return vals.pop() if vals else 0

    def undirected(self) -> list[Edge]:
        """One representative per unoriented edge (the lower index)."""
        return [e for e in self.edges if e.index < e.rev]

    def alpha(self, k: int) -> Vec:
        return self.edges[k].alpha

    def signature(self):
        """Orientation-independent structural fingerprint for equality tests."""
        return (self.ctx, self.vertices,
                tuple(sorted((e.src, e.dst, e.alpha) for e in self.edges)))

    def nx_graph(self) -> nx.MultiGraph:
        g = nx.MultiGraph()
        g.add_nodes_from(self.vertices)
        for e in self.undirected():
            g.add_edge(e.src, e.dst, key=e.index)
        return g

    def __repr__(self) -> str:
        return f"Skeleton({self.name or '?'}: |V|={len(self.vertices)}, |E|={len(self.edges) // 2})"


# ---------------------------------------------------------------------------
# axioms


@dataclass
class AxiomReport:
    a1: bool
    a2: bool
    a3: bool
    a1_witness: tuple | None = None
    a2_witness: int | None = None
    a3_witness: int | None = None
    # per oriented edge: (theta as a tuple aligned with E_{i(e)}, constants c)
    connection: dict[int, tuple[tuple[int, ...], tuple[Fraction, ...]]] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.a1 and self.a2 and self.a3


def _least_matching(cands: list[list[int]]) -> list[int] | None:
    """Lexicographically least system of distinct representatives."""
    chosen: list[int] = []
    used: set[int] = set()

    def rec(i: int) -> bool:
        if i == len(cands):
            return True
        for c in cands[i]:
            if c not in used:
                used.add(c)
                chosen.append(c)
                if rec(i + 1):
                    return True
                chosen.pop()
                used.discard(c)
        return False

    return chosen if rec(0) else None


def find_connection(s: Skeleton, k: int) -> tuple[tuple[int, ...], tuple[Fraction, ...]] | None:
    e = s.edges[k]
    src_edges, dst_edges = s.E(e.src), s.E(e.dst)
    if len(src_edges) != len(dst_edges):
        return None
    cands = []
    for ei in src_edges:
        if ei == k:
            cands.append([e.rev])
            continue
        row = []
        for ej in dst_edges:
            if ej == e.rev:
                continue
            if parallel_ratio(vsub(s.alpha(ej), s.alpha(ei)), e.alpha) is not None:
                row.append(ej)
        cands.append(row)
    theta = _least_matching(cands)
    if theta is None:
        return None
    cs = tuple(parallel_ratio(vsub(s.alpha(t), s.alpha(ei)), e.alpha)
               for ei, t in zip(src_edges, theta))
    return tuple(theta), cs


def validate_axioms(s: Skeleton) -> AxiomReport:
    vals = set(s.valences().values())
    if len(vals) > 1:
        raise MalformedGraph(f"valence mismatch: {sorted(vals)}")
    a1_w = None
    for p in s.vertices:
        for a, b in combinations(s.E(p), 2):
            if not independent(s.alpha(a), s.alpha(b)):
                a1_w = (p, a, b)
                break
        if not a1_w:
            for a in s.E(p):
                if not any(s.alpha(a)):
                    a1_w = (p, a, a)
        if a1_w:
            break
    a2_w = None
    for e in s.edges:
        if s.alpha(e.rev) != tuple(-x for x in e.alpha):
            a2_w = e.index
            break
    a3_w = None
    conn = {}
    for e in s.edges:
        found = find_connection(s, e.index)
        if found is None:
            a3_w = e.index
            break
        conn[e.index] = found
    return AxiomReport(a1_w is None, a2_w is None, a3_w is None, a1_w, a2_w, a3_w,
                       conn if a3_w is None else {})


def check_connection(s: Skeleton, conn) -> bool:
    """Re-verify the A3 identity for a connection found by the validator."""
    for k, (theta, cs) in conn.items():
        e = s.edges[k]
        if theta[s.E(e.src).index(k)] != e.rev:
            return False
        if sorted(theta) != sorted(s.E(e.dst)):
            return False
        for ei, t, c in zip(s.E(e.src), theta, cs):
            if s.alpha(t) != vadd(s.alpha(ei), vscale(c, e.alpha)):
                return False
    return True


# ---------------------------------------------------------------------------
# subgraphs


def _induced(s: Skeleton, vertices: Iterable[str], keep: list[int], name: str) -> Skeleton:
    keep = sorted(keep)
    new_index = {k: i for i, k in enumerate(keep)}
    es = [Edge(i, s.edges[k].src, s.edges[k].dst, s.edges[k].alpha, new_index[s.edges[k].rev])
          for i, k in enumerate(keep)]
    parents = [k if s.parent_edges is None else s.parent_edges[k] for k in keep]
    return Skeleton(s.ctx, vertices, es, name, parents)


def subskeleton(s: Skeleton, h: Subspace) -> Skeleton:
    """Edges with weight in ``h`` on the full vertex set (may be irregular)."""
    keep = [e.index for e in s.edges if h.contains(e.alpha)]
    return _induced(s, s.vertices, keep, f"{s.name}|{h}")


def connected_components(s: Skeleton) -> list[Skeleton]:
    comps = sorted((sorted(c) for c in nx.connected_components(s.nx_graph())), key=lambda c: c[0])
    out = []
    for verts in comps:
        vs = set(verts)
        keep = [e.index for e in s.edges if e.src in vs]
        out.append(_induced(s, verts, keep, f"{s.name}[{verts[0]}]"))
    return out


def slice_components(s: Skeleton, h: Subspace) -> list[Skeleton]:
    return connected_components(subskeleton(s, h))


def enumerate_2d_subspaces(s: Skeleton) -> list[Subspace]:
    found = set()
    for p in s.vertices:
        for a, b in combinations(s.E(p), 2):
            h = Subspace.span([s.alpha(a), s.alpha(b)])
            if h.dim == 2:
                found.add(h)
    return sorted(found, key=lambda h: h.basis)
