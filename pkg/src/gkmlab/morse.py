"""Polarizing and generic vectors, Morse functions, indices and flow-ups."""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Callable, Mapping, Sequence

import networkx as nx

from .skeleton import Skeleton, Vec, dot, vec, vscale, vsub


class NotPolarizing(ValueError):
    pass


class CyclicOrientation(ValueError):
    def __init__(self, cycle):
        super().__init__(f"orientation has an oriented cycle through {[c[0] for c in cycle]}")
        self.cycle = cycle


class XiSearchError(RuntimeError):
    def __init__(self, attempts: int, failures: Counter):
        worst = failures.most_common(1)[0][0] if failures else "none"
        super().__init__(f"no suitable xi in {attempts} attempts; most frequent failure: {worst} "
                         f"({dict(failures)})")
        self.failures = failures
        self.worst = worst


def is_polarizing(s: Skeleton, xi: Sequence) -> tuple[bool, int | None]:
    xi = vec(xi)
    for e in s.edges:
        if dot(e.alpha, xi) == 0:
            return False, e.index
    return True, None


def is_generic(s: Skeleton, xi: Sequence) -> tuple[bool, tuple | None]:
    """Check the quadruple condition at every vertex; witness is ``(p, e1, e2, e3, e4)``."""
    xi = vec(xi)
    ok, bad = is_polarizing(s, xi)
    if not ok:
        raise NotPolarizing(f"xi vanishes on edge {bad}")
    for p in s.vertices:
        unit = {k: vscale(1 / dot(s.alpha(k), xi), s.alpha(k)) for k in s.E(p)}
        seen: dict[Vec, tuple[int, int]] = {}
        for a, b in permutations(s.E(p), 2):
            diff = vsub(unit[a], unit[b])
            if diff in seen:
                return False, (p, *seen[diff], a, b)
            seen[diff] = (a, b)
    return True, None


def upward_edges(s: Skeleton, xi: Sequence) -> list[int]:
    xi = vec(xi)
    ok, bad = is_polarizing(s, xi)
    if not ok:
        raise NotPolarizing(f"xi vanishes on edge {bad}")
    return [e.index for e in s.edges if dot(e.alpha, xi) > 0]


def _digraph(s: Skeleton, up: Sequence[int]) -> nx.DiGraph:
    g = nx.DiGraph()
    g.add_nodes_from(s.vertices)
    g.add_edges_from((s.edges[k].src, s.edges[k].dst) for k in up)
    return g


def orient_and_check_acyclic(s: Skeleton, xi: Sequence) -> tuple[list[int], bool, list | None]:
    """Upward orientation, acyclicity verdict and a witness cycle when cyclic."""
    up = upward_edges(s, xi)
    g = _digraph(s, up)
    if nx.is_directed_acyclic_graph(g):
        return up, True, None
    return up, False, nx.find_cycle(g)


@dataclass(eq=False)
class MorseData:
    skeleton: Skeleton
    xi: Vec
    phi: dict[str, Fraction]
    sigma: dict[str, int]
    betti: tuple[int, ...]
    up: tuple[int, ...]

    @property
    def order(self) -> list[str]:
        """Vertices sorted by increasing phi."""
        return sorted(self.skeleton.vertices, key=lambda v: self.phi[v])

    def down_edges(self, p: str) -> list[int]:
        s = self.skeleton
        return [k for k in s.E(p) if dot(s.alpha(k), self.xi) < 0]

    def up_edges(self, p: str) -> list[int]:
        s = self.skeleton
        return [k for k in s.E(p) if dot(s.alpha(k), self.xi) > 0]


def _indices(s: Skeleton, xi: Vec) -> tuple[dict[str, int], tuple[int, ...]]:
    sigma = {p: sum(1 for k in s.E(p) if dot(s.alpha(k), xi) < 0) for p in s.vertices}
    d = s.d
    counts = Counter(sigma.values())
    return sigma, tuple(counts.get(k, 0) for k in range(d + 1))


def canonical_morse(s: Skeleton, xi: Sequence) -> MorseData:
    """Longest-path Morse function made injective by a vertex-rank perturbation."""
    xi = vec(xi)
    up, acyclic, cycle = orient_and_check_acyclic(s, xi)
    if not acyclic:
        raise CyclicOrientation(cycle)
    g = _digraph(s, up)
    phi0: dict[str, int] = {}
    for v in nx.lexicographical_topological_sort(g):
        phi0[v] = max((phi0[u] + 1 for u in g.predecessors(v)), default=0)
    n = len(s.vertices)
    phi = {v: Fraction(phi0[v]) + Fraction(s.vindex[v], n + 1) for v in s.vertices}
    sigma, betti = _indices(s, xi)
    return MorseData(s, xi, phi, sigma, betti, tuple(up))


def longest_path_phi(s: Skeleton, xi: Sequence) -> dict[str, int]:
    md = canonical_morse(s, xi)
    return {v: int(md.phi[v]) for v in s.vertices}


def is_compatible(s: Skeleton, xi: Sequence, phi: Mapping[str, Fraction]) -> bool:
    """phi strictly increases along every xi-upward edge."""
    for k in upward_edges(s, xi):
        e = s.edges[k]
        if not phi[e.src] < phi[e.dst]:
            return False
    return True


def morse_from_phi(s: Skeleton, xi: Sequence, phi: Mapping[str, Fraction]) -> MorseData:
    """Morse data for a caller-supplied injective, xi-compatible phi."""
    xi = vec(xi)
    phi = {v: Fraction(phi[v]) for v in s.vertices}
    if len(set(phi.values())) != len(phi):
        raise ValueError("phi is not injective")
    up = upward_edges(s, xi)
    if not is_compatible(s, xi, phi):
        raise ValueError("phi is not compatible with xi")
    sigma, betti = _indices(s, xi)
    return MorseData(s, xi, phi, sigma, betti, tuple(up))


def flow_up(md: MorseData, p: str) -> set[str]:
    s = md.skeleton
    if p not in s.vindex:
        raise KeyError(f"unknown vertex {p!r}")
    seen = {p}
    stack = [p]
    while stack:
        v = stack.pop()
        for k in md.up_edges(v):
            w = s.edges[k].dst
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def flow_down(md: MorseData, p: str) -> set[str]:
    s = md.skeleton
    if p not in s.vindex:
        raise KeyError(f"unknown vertex {p!r}")
    seen = {p}
    stack = [p]
    while stack:
        v = stack.pop()
        for k in md.down_edges(v):
            w = s.edges[k].dst
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def poincare_check(md: MorseData) -> bool:
    b = md.betti
    return all(b[k] == b[len(b) - 1 - k] for k in range(len(b)))


def negate(md: MorseData) -> MorseData:
    """Morse data for ``-xi`` with ``-phi``."""
    return morse_from_phi(md.skeleton, tuple(-x for x in md.xi), {v: -f for v, f in md.phi.items()})


def find_xi(s: Skeleton, attempts: int = 500, seed: int = 0,
            chamber: Callable[[Vec], bool] | None = None, round_size: int = 20) -> Vec:
    """Seeded search for a polarizing, generic, acyclic xi with small integer entries.

    ``chamber`` is an optional extra predicate (e.g. positivity on simple
    roots); the entry bound doubles every ``round_size`` attempts.
    """
    rng = random.Random(seed)
    failures: Counter = Counter()
    bound = 1
    n = s.ctx.dim
    for i in range(attempts):
        if i and i % round_size == 0:
            bound *= 2
        xi = tuple(Fraction(rng.randint(-bound, bound)) for _ in range(n))
        if chamber is not None and not chamber(xi):
            failures["chamber"] += 1
            continue
        if not is_polarizing(s, xi)[0]:
            failures["polarizing"] += 1
            continue
        if not is_generic(s, xi)[0]:
            failures["generic"] += 1
            continue
        if not orient_and_check_acyclic(s, xi)[1]:
            failures["acyclic"] += 1
            continue
        return xi
    raise XiSearchError(attempts, failures)
