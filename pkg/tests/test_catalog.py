import json
from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, strategies as st

from gkmlab.catalog import (GraphSpecError, cayley_sn, johnson, load, resolve, save, skeleton_from_json,
                            skeleton_to_json)
from gkmlab.morse import canonical_morse, is_compatible
from gkmlab.skeleton import validate_axioms

from helpers import graph


def test_s2_is_a_single_edge():
    g = cayley_sn(2)
    s = g.skeleton
    assert s.vertices == ("12", "21") and s.d == 1
    k = s.E("12")[0]
    assert s.alpha(k) == (1,) and s.alpha(s.edges[k].rev) == (-1,)


def test_permutahedron_shape_and_identity_edge():
    s = graph("sn:3").skeleton
    assert len(s.vertices) == 6 and s.d == 3
    k = next(k for k in s.E("123") if s.edges[k].dst == "213")
    assert s.alpha(k) == (1, 0)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_cayley_axioms_and_valence(n):
    s = cayley_sn(n).skeleton
    assert validate_axioms(s).ok
    assert s.d == n * (n - 1) // 2


@pytest.mark.parametrize("n,k", [(n, k) for n in range(2, 6) for k in range(1, n)])
def test_johnson_axioms(n, k):
    s = johnson(n, k).skeleton
    assert validate_axioms(s).ok
    assert s.d == k * (n - k)


def test_johnson_triangle_and_boxes():
    g = graph("johnson:3,2")
    s = g.skeleton
    assert s.vertices == ("12", "13", "23")
    assert all(len(s.E(p)) == 2 for p in s.vertices)
    assert g.phi["12"] == 0
    assert canonical_morse(s, g.xi).betti == (1, 1, 1)
    assert graph("sn:3").skeleton and canonical_morse(graph("sn:3").skeleton, graph("sn:3").xi).betti == (1, 2, 2, 1)


def test_j31_is_j32_by_complement_with_reversed_phi():
    a, b = johnson(3, 2), johnson(3, 1)
    sa, sb = a.skeleton, b.skeleton

    def labelled(s, sign):
        return {(e.src, e.dst): tuple(sign * x for x in e.alpha) for e in s.edges}

    ea, eb = labelled(sa, 1), labelled(sb, -1)
    isos = []
    for image in permutations(sb.vertices):
        f = dict(zip(sa.vertices, image))
        if {(f[p], f[q]): w for (p, q), w in ea.items()} == eb:
            isos.append(f)
    complement = {S: "".join(c for c in "123" if c not in S) for S in sa.vertices}
    assert complement in isos
    top = max(a.phi.values())
    assert all(b.phi[complement[S]] == top - a.phi[S] for S in sa.vertices)


@pytest.mark.parametrize("n", [2, 3, 4])
@given(data=st.data())
def test_length_is_compatible_with_positive_xi(n, data):
    g = cayley_sn(n) if n != 3 else graph("sn:3")
    xi = data.draw(st.lists(st.integers(1, 9), min_size=n - 1, max_size=n - 1))
    assert is_compatible(g.skeleton, xi, g.phi)


def test_save_load_round_trip(tmp_path):
    s = graph("sn:3").skeleton
    path = tmp_path / "perm.json"
    save(s, path)
    assert load(path).signature() == s.signature()
    assert skeleton_from_json(skeleton_to_json(s)).signature() == s.signature()


def _tiny():
    return {"dim": 1, "basis": ["t"], "vertices": ["p", "q"], "edges": [{"src": "p", "dst": "q", "alpha": ["2/4"]}]}


def test_unreduced_fraction_is_normalized():
    s = skeleton_from_json(_tiny())
    assert s.alpha(0) == (Fraction(1, 2),)
    assert skeleton_to_json(s)["edges"][0]["alpha"] == ["1/2"]


def test_missing_alpha_names_the_edge():
    data = _tiny()
    del data["edges"][0]["alpha"]
    with pytest.raises(GraphSpecError, match=r"edges/0 \(edge p->q\)"):
        skeleton_from_json(data)


def test_bad_inputs(tmp_path):
    data = _tiny()
    data["edges"][0]["alpha"] = ["1", "2"]
    with pytest.raises(GraphSpecError, match="wrong length"):
        skeleton_from_json(data)
    data = _tiny()
    data["edges"][0]["alpha"] = ["1/0"]
    with pytest.raises(GraphSpecError, match="zero denominator"):
        skeleton_from_json(data)
    data = _tiny()
    data["edges"][0]["dst"] = "zz"
    with pytest.raises(GraphSpecError, match="unknown vertex"):
        skeleton_from_json(data)
    bad = tmp_path / "bad.json"
    bad.write_text('{"dim": 1,\n  "basis": [}\n')
    with pytest.raises(GraphSpecError, match="line 2, column"):
        load(bad)
    with pytest.raises(GraphSpecError, match="cannot read"):
        load(tmp_path / "missing.json")


@pytest.mark.parametrize("spec", ["sn:1", "johnson:3,3", "johnson:3", "foo:1", "johnson:3,2:weird", "sn:x"])
def test_resolve_errors(spec):
    with pytest.raises(GraphSpecError):
        resolve(spec)


def test_resolve_file(tmp_path):
    path = tmp_path / "g.json"
    path.write_text(json.dumps(skeleton_to_json(graph("johnson:3,2").skeleton)))
    g = resolve(f"file:{path}")
    assert g.xi is None and g.skeleton.signature() == graph("johnson:3,2").skeleton.signature()


def test_ambient_johnson_weights():
    s = graph("johnson:3,2:ambient").skeleton
    assert s.ctx.dim == 3
    assert all(sum(e.alpha) == 0 for e in s.edges)
    assert validate_axioms(s).ok
