from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from gkmlab.morse import (CyclicOrientation, NotPolarizing, XiSearchError, canonical_morse, find_xi, flow_down,
                          flow_up, is_generic, is_polarizing, longest_path_phi, negate, orient_and_check_acyclic,
                          poincare_check)
from gkmlab.polyring import SpaceCtx
from gkmlab.skeleton import Skeleton

from helpers import graph, morse

CATALOG = ["sn:3", "sn:4", "johnson:3,2", "johnson:4,2", "johnson:3,2:ambient"]


def generic_oracle(s, xi) -> bool:
    """Literal scan of all quadruples (e1, e2, e3, e4) at each vertex."""
    xi = [Fraction(x) for x in xi]
    for p in s.vertices:
        es = s.E(p)
        unit = {k: tuple(a / sum(u * v for u, v in zip(s.alpha(k), xi)) for a in s.alpha(k)) for k in es}
        for e1, e2, e3, e4 in product(es, repeat=4):
            if e1 == e2 or e3 == e4 or (e1, e2) == (e3, e4):
                continue
            if tuple(a - b for a, b in zip(unit[e1], unit[e2])) == tuple(a - b for a, b in zip(unit[e3], unit[e4])):
                return False
    return True


def test_permutahedron_polarizing():
    s = graph("sn:3").skeleton
    assert is_polarizing(s, (2, 3)) == (True, None)
    assert all(sum(a * x for a, x in zip(e.alpha, (2, 3))) != 0 for e in s.undirected())
    ok, bad = is_polarizing(s, (0, 0))
    assert not ok and bad is not None
    ok, bad = is_polarizing(s, (0, 1))
    assert not ok and s.alpha(bad)[1] == 0


def test_permutahedron_generic_matches_oracle():
    s = graph("sn:3").skeleton
    assert is_generic(s, (2, 3))[0] == generic_oracle(s, (2, 3))
    with pytest.raises(NotPolarizing):
        is_generic(s, (1, 0))


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(["sn:3", "johnson:4,2", "sn:4"]), st.lists(st.integers(-4, 4), min_size=3, max_size=3))
def test_generic_against_quadruple_scan(spec, raw):
    s = graph(spec).skeleton
    xi = raw[: s.ctx.dim]
    if not is_polarizing(s, xi)[0]:
        return
    ok, witness = is_generic(s, xi)
    assert ok == generic_oracle(s, xi)
    if not ok:
        p, e1, e2, e3, e4 = witness
        assert {e1, e2, e3, e4} <= set(s.E(p))


def test_constructed_non_generic_vector():
    # 4-valent star; for xi = (x, y) the unit vectors satisfy u1 - u2 = u3 - u4 exactly when x = y
    ctx = SpaceCtx(2, ("x", "y"))
    weights = [(1, 0), (0, 1), (3, -1), (1, 1)]
    s = Skeleton.from_undirected(ctx, ["p", "q1", "q2", "q3", "q4"],
                                 [("p", f"q{i}", w) for i, w in enumerate(weights, start=1)])
    xi = (1, 1)
    assert is_polarizing(s, xi)[0]
    assert generic_oracle(s, xi) is False
    ok, witness = is_generic(s, xi)
    assert not ok and witness[0] == "p"
    assert is_generic(s, (1, 2))[0] and generic_oracle(s, (1, 2))


def test_find_xi_positive_on_permutahedron():
    s = graph("sn:3").skeleton
    xi = find_xi(s, seed=0, chamber=lambda v: all(x > 0 for x in v))
    assert all(x > 0 for x in xi)
    assert is_polarizing(s, xi)[0] and is_generic(s, xi)[0] and orient_and_check_acyclic(s, xi)[1]


@pytest.mark.parametrize("spec", CATALOG)
def test_find_xi_deterministic(spec):
    s = graph(spec).skeleton
    assert find_xi(s, seed=7) == find_xi(s, seed=7)


def test_find_xi_exhaustion():
    ctx = SpaceCtx(1, ("t",))
    # every polarizing xi orients this triangle cyclically
    s = Skeleton.from_oriented(ctx, "abc", [("a", "b", (1,)), ("b", "a", (-1,)), ("b", "c", (1,)),
                                            ("c", "b", (-1,)), ("c", "a", (1,)), ("a", "c", (-1,))])
    with pytest.raises(XiSearchError) as info:
        find_xi(s, attempts=30)
    assert sum(info.value.failures.values()) == 30
    assert info.value.worst in info.value.failures


def test_cyclic_triangle():
    s = Skeleton.from_oriented(SpaceCtx(2, ("x", "y")), "abc", [
        ("a", "b", (1, 0)), ("b", "a", (-1, 0)), ("b", "c", (0, 1)),
        ("c", "b", (0, -1)), ("c", "a", (1, 1)), ("a", "c", (-1, -1))])
    up, acyclic, cycle = orient_and_check_acyclic(s, (1, 1))
    assert not acyclic and len(cycle) == 3
    with pytest.raises(CyclicOrientation):
        canonical_morse(s, (1, 1))
    assert orient_and_check_acyclic(s, (1, -2))[1]


def test_single_edge_and_single_vertex():
    ctx = SpaceCtx(1, ("t",))
    edge = Skeleton.from_undirected(ctx, "pq", [("p", "q", (1,))])
    assert orient_and_check_acyclic(edge, (1,))[1]
    assert canonical_morse(edge, (1,)).betti == (1, 1)
    point = Skeleton(ctx, ["p"], [])
    md = canonical_morse(point, (1,))
    assert md.betti == (1,) and poincare_check(md)


def test_permutahedron_morse_function_is_length():
    g = graph("sn:3")
    assert longest_path_phi(g.skeleton, g.xi) == {v: int(f) for v, f in g.phi.items()}
    md = morse("sn:3")
    assert md.betti == (1, 2, 2, 1)
    # oracle: count neighbours of smaller length
    s = g.skeleton
    for p in s.vertices:
        assert md.sigma[p] == sum(1 for k in s.E(p) if g.phi[s.edges[k].dst] < g.phi[p])


def test_johnson_triangle_betti():
    md = morse("johnson:3,2")
    assert md.betti == (1, 1, 1) and poincare_check(md)


@pytest.mark.parametrize("spec", CATALOG)
def test_morse_invariants(spec):
    md = morse(spec)
    s = md.skeleton
    assert len(set(md.phi.values())) == len(s.vertices)
    for k in md.up:
        e = s.edges[k]
        assert md.phi[e.src] < md.phi[e.dst]
    for p in s.vertices:
        assert md.sigma[p] == sum(1 for k in s.E(p) if md.phi[s.edges[k].dst] < md.phi[p])
    assert sum(md.betti) == len(s.vertices)
    assert poincare_check(md)


@pytest.mark.parametrize("spec", CATALOG)
def test_betti_independent_of_xi(spec):
    s = graph(spec).skeleton
    bettis = {canonical_morse(s, find_xi(s, seed=seed)).betti for seed in (1, 2, 3)}
    assert bettis == {morse(spec).betti}


@pytest.mark.parametrize("spec", CATALOG)
def test_negation_swaps_index(spec):
    md = morse(spec)
    neg = negate(md)
    d = md.skeleton.d
    assert all(neg.sigma[p] == d - md.sigma[p] for p in md.skeleton.vertices)
    assert neg.betti == tuple(reversed(md.betti))


def test_permutahedron_flows():
    md = morse("sn:3")
    assert flow_up(md, "123") == set(md.skeleton.vertices)
    assert flow_up(md, "321") == {"321"}
    assert flow_down(md, "321") == set(md.skeleton.vertices)
    assert flow_up(md, "213") == {"213", "231", "312", "321"}
    with pytest.raises(KeyError):
        flow_up(md, "999")


@pytest.mark.parametrize("spec", CATALOG)
def test_flow_down_is_flow_up_of_negation(spec):
    md = morse(spec)
    neg = negate(md)
    for p in md.skeleton.vertices:
        assert flow_down(md, p) == flow_up(neg, p)
        assert all(md.phi[q] >= md.phi[p] for q in flow_up(md, p))
