import random

import pytest

from gkmlab.crosssection import finite_coh_dim_formula
from gkmlab.polyring import MultiPoly, graded_dim
from gkmlab.wallcross import (ExtremalWall, NotInCohomology, bracket_identity, cross_transform, dim_by_sweep,
                              dim_delta, restrict_delta_check, reverse_transform, sweep, wall_data)

from helpers import basis, morse

CATALOG = ["sn:3", "johnson:3,2", "johnson:4,2", "sn:4"]


def inner_walls(spec):
    md = morse(spec)
    return [wall_data(md, p) for p in md.order if 0 < md.sigma[p] < md.skeleton.d]


def zero_map(cs, keys):
    return {k: MultiPoly.zero(cs.ctx) for k in keys}


# -- wall data ----------------------------------------------------------------


def test_permutahedron_wall_indices():
    md = morse("sn:3")
    wd = wall_data(md, "213")
    assert (wd.r, wd.s) == (1, 2) and not wd.extremal
    assert wall_data(md, "231").r == 2 and wall_data(md, "231").s == 1
    for p in ("123", "321"):
        wd = wall_data(md, p)
        assert wd.extremal
        with pytest.raises(ExtremalWall):
            cross_transform(wd, zero_map(wd.below, wd.below.members))


@pytest.mark.parametrize("spec", CATALOG)
def test_wall_data_invariants(spec):
    md = morse(spec)
    s = md.skeleton
    for p in md.order:
        wd = wall_data(md, p)
        assert wd.r == md.sigma[p] and wd.r + wd.s == s.d
        for i in wd.delta_c:
            # seen from p the downward edges have negative slope
            assert wd.below.basis.slopes(s.alpha(s.edges[i].rev))[0] < 0
            for a in wd.delta_c2:
                assert wd.above.slopes(a)[0] > 0
                assert not wd.tau_sharp(i, a).is_zero()


# -- dimension changes --------------------------------------------------------


def test_dim_delta_examples():
    assert dim_delta(0, 3, 1, 1) == 2
    for r in range(4):
        assert all(dim_delta(r, r, m, 2) == 0 for m in range(6))
    assert all(dim_delta(3, 0, m, 2) == -dim_delta(0, 3, m, 2) for m in range(6))


@pytest.mark.parametrize("spec,top", [("sn:3", 3), ("johnson:3,2", 3), ("johnson:4,2", 2)])
def test_dimension_change_across_each_wall(spec, top):
    md = morse(spec)
    n = md.skeleton.ctx.dim
    for p in md.order:
        wd = wall_data(md, p)
        for m in range(top + 1):
            assert wd.above.dim_H(m) - wd.below.dim_H(m) == wd.dim_delta(m)
            assert wd.dim_delta(m) == (finite_coh_dim_formula(wd.s, m, n - 1)
                                       - finite_coh_dim_formula(wd.r, m, n - 1))


# -- restriction to Delta_c ---------------------------------------------------


@pytest.mark.parametrize("spec", ["sn:3", "johnson:4,2"])
def test_restrict_delta(spec):
    for wd in inner_walls(spec):
        cs = wd.below
        assert restrict_delta_check(wd, {k: MultiPoly.one(cs.ctx) for k in cs.members})
        for m in range(3):
            for h in basis(spec, m):
                assert restrict_delta_check(wd, cs.kirwan(h))
        if wd.r == 1:
            k = wd.delta_c[0]
            odd = {k: MultiPoly.var(cs.ctx, 0) if cs.ctx.dim else MultiPoly.one(cs.ctx)}
            assert restrict_delta_check(wd, odd)


def test_restrict_delta_rejects_indicator():
    wd = next(w for w in inner_walls("sn:4") if w.r >= 2)
    cs = wd.below
    f = {k: MultiPoly.zero(cs.ctx) for k in cs.members}
    f[wd.delta_c[0]] = MultiPoly.one(cs.ctx)
    assert not restrict_delta_check(wd, f)


# -- the transform ------------------------------------------------------------


def resubstitution_holds(wd, f, fs, out, outs):
    for i in wd.delta_c:
        for a in wd.delta_c2:
            X = wd.tau_sharp(i, a)
            lhs = out[a] + sum((X ** j * g[a] for j, g in enumerate(outs, start=1)), MultiPoly.zero(X.ctx))
            rhs = f[i] + sum((X ** k * g[i] for k, g in enumerate(fs, start=1)), MultiPoly.zero(X.ctx))
            if lhs != rhs:
                return False
    return all(out[k] == f[k] for k in wd.unchanged)


@pytest.mark.parametrize("spec", ["sn:3", "johnson:3,2", "johnson:4,2"])
def test_kirwan_images_cross_the_wall(spec):
    for wd in inner_walls(spec):
        for m in range(3):
            for h in basis(spec, m):
                f = wd.below.kirwan(h)
                fs = [zero_map(wd.below, wd.delta_c) for _ in range(wd.s - 1)]
                out, outs = cross_transform(wd, f, fs)
                assert len(outs) == wd.r - 1
                assert resubstitution_holds(wd, f, fs, out, outs)
                if m < wd.r:
                    assert out == wd.above.kirwan(h)
                if m == 1 and wd.r >= 2:
                    # the corrections are Taylor coefficients in x; for a linear class the first is h_p(xi)
                    slope = MultiPoly.const(wd.above.ctx, h[wd.p].evaluate(wd.md.xi))
                    assert all(outs[0][a] == slope for a in wd.delta_c2)
                back, backs = reverse_transform(wd, out, outs)
                assert back == {k: f[k] for k in wd.below.members}
                assert all(b == g for b, g in zip(backs, fs))


def test_arity_when_only_one_edge_leaves():
    md = morse("sn:3")
    wd = wall_data(md, "231")
    assert (wd.r, wd.s) == (2, 1)
    out, outs = cross_transform(wd, wd.below.kirwan(basis("sn:3", 2)[0]))
    assert len(outs) == 1 and set(out) == set(wd.above.members)
    with pytest.raises(ValueError):
        cross_transform(wd, wd.below.kirwan(basis("sn:3", 2)[0]), [zero_map(wd.below, wd.delta_c)])


@pytest.mark.parametrize("spec", ["sn:3", "sn:4"])
def test_round_trip_with_corrections(spec):
    rng = random.Random(7)
    walls = [w for w in inner_walls(spec) if w.s >= 2]
    for wd in walls[:6]:
        cs = wd.below
        f = cs.kirwan(rng.choice(basis(spec, 2)))
        fs = []
        for _ in range(wd.s - 1):
            g = cs.kirwan(rng.choice(basis(spec, rng.randint(0, 1))))
            fs.append({i: g[i] for i in wd.delta_c})
        out, outs = cross_transform(wd, f, fs)
        assert resubstitution_holds(wd, f, fs, out, outs)
        back, backs = reverse_transform(wd, out, outs)
        assert back == {k: f[k] for k in cs.members} and backs == fs


def test_non_member_input_is_rejected():
    md = morse("sn:3")
    wd = wall_data(md, "213")
    cs = wd.below
    f = {k: MultiPoly.zero(cs.ctx) for k in cs.members}
    f[cs.members[0]] = MultiPoly.one(cs.ctx)
    assert not cs.membership(f).member
    with pytest.raises(NotInCohomology):
        cross_transform(wd, f, [zero_map(cs, wd.delta_c)])


# -- the sweep ----------------------------------------------------------------


def test_sweep_examples():
    assert dim_by_sweep(morse("sn:3"), 2) == 9
    assert dim_by_sweep(morse("johnson:3,2:ambient"), 1) == 4
    for spec in CATALOG:
        assert dim_by_sweep(morse(spec), 0) == 1


@pytest.mark.parametrize("spec", CATALOG)
def test_sweep_matches_formula_and_dimension(spec):
    md = morse(spec)
    d, n = md.skeleton.d, md.skeleton.ctx.dim
    for m in range(d + 3):
        rep = sweep(md, m)
        assert rep.ok, rep
        assert rep.total == sum(b * graded_dim(m - k, n) for k, b in enumerate(md.betti))


def test_sweep_running_dimensions_are_level_dimensions():
    rep = sweep(morse("johnson:3,2"), 2, verify_levels=True)
    assert rep.ok and all(st.actual == st.running for st in rep.steps)


@pytest.mark.parametrize("spec", CATALOG)
def test_bracket_identity(spec):
    assert bracket_identity(morse(spec).betti)


def test_bracket_identity_fails_without_symmetry():
    assert not bracket_identity((1, 2, 1, 0))
