"""Builders for the permutahedron family and Johnson graphs, plus graph JSON I/O."""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from itertools import combinations, permutations
from pathlib import Path

import jsonschema

from .morse import find_xi, is_compatible
from .polyring import SpaceCtx, fmt_fraction
from .skeleton import MalformedGraph, Skeleton, Vec


class GraphSpecError(ValueError):
    """Bad catalog name or graph file."""


@dataclass(eq=False)
class CatalogGraph:
    skeleton: Skeleton
    phi: dict[str, Fraction] | None  # self-indexing Morse function, if any
    xi: Vec | None  # a generic vector compatible with phi

    @property
    def name(self) -> str:
        return self.skeleton.name


def _root_coords(i: int, j: int, n: int) -> tuple[Fraction, ...]:
    """``eps_j - eps_i`` (1-based) in the simple-root basis ``a_r = eps_{r+1} - eps_r``."""
    v = [Fraction(0)] * (n - 1)
    lo, hi, sign = (i, j, 1) if i < j else (j, i, -1)
    for r in range(lo, hi):
        v[r - 1] = Fraction(sign)
    return tuple(v)


def _ambient_coords(i: int, j: int, n: int) -> tuple[Fraction, ...]:
    """``eps_j - eps_i`` in the standard basis of Q^n."""
    v = [Fraction(0)] * n
    v[j - 1] += 1
    v[i - 1] -= 1
    return tuple(v)


# cycle-style names for S_3 in one-line notation, as used in the classical permutahedron table
S3_CYCLE_NAMES = {"123": "1", "213": "(12)", "132": "(23)", "231": "(231)", "312": "(312)", "321": "(13)"}


def _word(seq, n: int) -> str:
    return "".join(map(str, seq)) if n <= 9 else ",".join(map(str, seq))


def _pick_xi(s: Skeleton, phi, chamber) -> Vec:
    xi = find_xi(s, attempts=2000, seed=0, chamber=chamber)
    if phi is not None and not is_compatible(s, xi, phi):
        raise RuntimeError("catalog Morse function is not compatible with the chosen xi")
    return xi


def cayley_sn(n: int) -> CatalogGraph:
    """Cayley graph of S_n for transpositions, weights in the simple-root basis."""
    if n < 2:
        raise GraphSpecError("cayley_sn needs n >= 2")
    ctx = SpaceCtx(n - 1, tuple(f"a{r}" for r in range(1, n)))
    verts = {perm: _word(perm, n) for perm in permutations(range(1, n + 1))}
    edges = []
    for perm, name in verts.items():
        for i, j in combinations(range(1, n + 1), 2):
            other = list(perm)
            other[i - 1], other[j - 1] = other[j - 1], other[i - 1]
            oname = verts[tuple(other)]
            if name < oname:
                # eps_j - eps_i when sigma(j) > sigma(i), its negative otherwise
                w = _root_coords(i, j, n)
                if perm[j - 1] < perm[i - 1]:
                    w = tuple(-x for x in w)
                edges.append((name, oname, w))
    s = Skeleton.from_undirected(ctx, verts.values(), edges, name=f"sn:{n}")
    length = {name: Fraction(sum(1 for a, b in combinations(perm, 2) if a > b))
              for perm, name in verts.items()}
    xi = (Fraction(2), Fraction(3)) if n == 3 else _pick_xi(s, length, lambda v: all(x > 0 for x in v))
    return CatalogGraph(s, length, xi)


def johnson(n: int, k: int, ambient: bool = False) -> CatalogGraph:
    """Johnson graph J(n, k); ``ambient`` keeps weights in Q^n instead of the root space."""
    if not 1 <= k <= n - 1:
        raise GraphSpecError("johnson needs 1 <= k <= n-1")
    if ambient:
        ctx = SpaceCtx(n, tuple(f"e{r}" for r in range(1, n + 1)))
        coords = _ambient_coords
    else:
        ctx = SpaceCtx(n - 1, tuple(f"a{r}" for r in range(1, n)))
        coords = _root_coords
    subsets = {S: _word(S, n) for S in combinations(range(1, n + 1), k)}
    edges = []
    for S1, T1 in combinations(subsets, 2):
        a, b = set(S1) - set(T1), set(T1) - set(S1)
        if len(a) == 1:
            (i,), (j,) = a, b
            # weight eps_i - eps_j on the edge from S1 to T1
            edges.append((subsets[S1], subsets[T1], coords(j, i, n)))
    s = Skeleton.from_undirected(ctx, subsets.values(), edges,
                                 name=f"johnson:{n},{k}" + (":ambient" if ambient else ""))
    boxes = {name: Fraction(sum(i - r for r, i in enumerate(S, start=1))) for S, name in subsets.items()}
    if ambient:
        chamber = lambda v: all(v[r] > v[r + 1] for r in range(n - 1))
    else:
        chamber = lambda v: all(x < 0 for x in v)
    return CatalogGraph(s, boxes, _pick_xi(s, boxes, chamber))


# ---------------------------------------------------------------------------
# JSON I/O


def _schema(name: str) -> dict:
    return json.loads(resources.files("gkmlab").joinpath("schemas").joinpath(name).read_text())


def skeleton_to_json(s: Skeleton) -> dict:
    return {
        "name": s.name,
        "dim": s.ctx.dim,
        "basis": list(s.ctx.labels),
        "vertices": list(s.vertices),
        "edges": [{"src": e.src, "dst": e.dst, "alpha": [fmt_fraction(x) for x in e.alpha]}
                  for e in s.undirected()],
    }


def skeleton_from_json(data: dict) -> Skeleton:
    validator = jsonschema.Draft202012Validator(_schema("graph.schema.json"))
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        msgs = []
        for err in errors:
            path = list(err.absolute_path)
            where = "/".join(map(str, path)) or "<root>"
            if len(path) >= 2 and path[0] == "edges" and isinstance(path[1], int):
                edge = data["edges"][path[1]]
                if isinstance(edge, dict):
                    where += f" (edge {edge.get('src')}->{edge.get('dst')})"
            msgs.append(f"{where}: {err.message}")
        raise GraphSpecError("schema violation: " + "; ".join(msgs))
    if len(data["basis"]) != data["dim"]:
        raise GraphSpecError("basis must have exactly dim labels")
    edges = []
    for k, e in enumerate(data["edges"]):
        if len(e["alpha"]) != data["dim"]:
            raise GraphSpecError(f"edges/{k} (edge {e['src']}->{e['dst']}): alpha has wrong length")
        try:
            alpha = [Fraction(a) for a in e["alpha"]]
        except ZeroDivisionError:
            raise GraphSpecError(f"edges/{k} (edge {e['src']}->{e['dst']}): zero denominator") from None
        edges.append((e["src"], e["dst"], alpha))
    try:
        return Skeleton.from_undirected(SpaceCtx(data["dim"], tuple(data["basis"])),
                                        data["vertices"], edges, name=data.get("name", ""))
    except (MalformedGraph, ValueError) as exc:
        raise GraphSpecError(str(exc)) from None


def save(s: Skeleton, path) -> None:
    Path(path).write_text(json.dumps(skeleton_to_json(s), indent=2) + "\n")


def load(path) -> Skeleton:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise GraphSpecError(f"cannot read {path}: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphSpecError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return skeleton_from_json(data)


def resolve(spec: str) -> CatalogGraph:
    """Parse ``sn:3``, ``johnson:4,2``, ``johnson:3,2:ambient`` or ``file:path``."""
    kind, _, rest = spec.partition(":")
    try:
        if kind == "sn":
            return cayley_sn(int(rest))
        if kind == "johnson":
            params, _, flag = rest.partition(":")
            n, k = (int(x) for x in params.split(","))
            if flag not in ("", "ambient"):
                raise GraphSpecError(f"unknown johnson option {flag!r}")
            return johnson(n, k, ambient=flag == "ambient")
        if kind == "file":
            return CatalogGraph(load(rest), None, None)
    except GraphSpecError:
        raise
    except ValueError as exc:
        raise GraphSpecError(f"bad graph spec {spec!r}: {exc}") from None
    raise GraphSpecError(f"unknown graph spec {spec!r} (use sn:N, johnson:N,K or file:PATH)")
