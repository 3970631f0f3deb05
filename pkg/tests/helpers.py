"""Cached catalog objects shared across test modules."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from gkmlab.catalog import resolve
from gkmlab.cohomology import basis_H, generating_family
from gkmlab.morse import canonical_morse
from gkmlab.polyring import MultiPoly


@lru_cache(maxsize=None)
def graph(spec: str):
    return resolve(spec)


@lru_cache(maxsize=None)
def morse(spec: str):
    g = graph(spec)
    return canonical_morse(g.skeleton, g.xi)


@lru_cache(maxsize=None)
def family(spec: str):
    return generating_family(morse(spec))


@lru_cache(maxsize=None)
def basis(spec: str, m: int):
    return basis_H(graph(spec).skeleton, m)


def lin(ctx, *coeffs) -> MultiPoly:
    return MultiPoly.linear(ctx, [Fraction(c) for c in coeffs])


def dense_rank(rows) -> int:
    """Plain Gaussian elimination over Q, kept separate from the library solver."""
    M = [[Fraction(x) for x in r] for r in rows]
    rank, col = 0, 0
    ncols = len(M[0]) if M else 0
    while rank < len(M) and col < ncols:
        piv = next((i for i in range(rank, len(M)) if M[i][col]), None)
        if piv is None:
            col += 1
            continue
        M[rank], M[piv] = M[piv], M[rank]
        for i in range(len(M)):
            if i != rank and M[i][col]:
                f = M[i][col] / M[rank][col]
                M[i] = [a - f * b for a, b in zip(M[i], M[rank])]
        rank += 1
        col += 1
    return rank


def _table_entry(ctx, text: str) -> MultiPoly:
    """Parse products of a1, a2 and (a1+a2), with an optional leading minus."""
    forms = {"a1": (1, 0), "a2": (0, 1), "a12": (1, 1)}
    sign = -1 if text.startswith("-") else 1
    out = MultiPoly.const(ctx, sign)
    for tok in text.lstrip("-").split("*"):
        if tok == "1":
            continue
        if tok == "0":
            return MultiPoly.zero(ctx)
        out = out * lin(ctx, *forms[tok])
    return out


# Thom classes of the permutahedron as printed in the source table: rows are
# vertices, columns are classes, both in cycle notation.
PERMUTAHEDRON_TABLE = {
    "1":     {"1": "1", "(12)": "0",     "(23)": "0",     "(231)": "0",      "(312)": "0",      "(13)": "0"},
    "(12)":  {"1": "1", "(12)": "-a1",   "(23)": "0",     "(231)": "0",      "(312)": "0",      "(13)": "0"},
    "(23)":  {"1": "1", "(12)": "0",     "(23)": "-a2",   "(231)": "0",      "(312)": "0",      "(13)": "0"},
    "(231)": {"1": "1", "(12)": "-a12",  "(23)": "-a2",   "(231)": "a2*a12", "(312)": "0",      "(13)": "0"},
    "(312)": {"1": "1", "(12)": "-a1",   "(23)": "-a12",  "(231)": "0",      "(312)": "a1*a12", "(13)": "0"},
    "(13)":  {"1": "1", "(12)": "-a12",  "(23)": "-a12",  "(231)": "a2*a12", "(312)": "a1*a12", "(13)": "-a1*a2*a12"},
}


def permutahedron_table(ctx):
    return {row: {col: _table_entry(ctx, v) for col, v in cols.items()} for row, cols in PERMUTAHEDRON_TABLE.items()}
