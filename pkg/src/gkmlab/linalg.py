"""Exact sparse linear algebra over Q.

Rows are dicts ``{column: Fraction}``.  :class:`RowReducer` keeps a fully
reduced row echelon form incrementally, which is all the cohomology solvers
need: kernel dimensions, kernel bases, ranks and particular solutions.
"""
from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Row = dict[int, Fraction]


class RowReducer:
    """Incremental reduced row echelon form on ``ncols`` columns."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivots: dict[int, Row] = {}
        # column -> pivot columns whose rows have a nonzero entry there
        self._occ: dict[int, set[int]] = defaultdict(set)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: Mapping[int, Fraction]) -> Row:
        """Remainder of ``row`` after clearing all pivot columns."""
        out = {c: Fraction(v) for c, v in row.items() if v}
        for p in [c for c in out if c in self.pivots]:
            a = out.pop(p, None)
            if not a:
                continue
            for c, v in self.pivots[p].items():
                if c == p:
                    continue
                w = out.get(c, 0) - a * v
                if w:
                    out[c] = w
                else:
                    out.pop(c, None)
        return out

    def add(self, row: Mapping[int, Fraction]) -> bool:
        """Insert a row; return True when it raised the rank."""
        r = self.reduce(row)
        if not r:
            return False
        p = min(r)
        inv = 1 / r[p]
        r = {c: v * inv for c, v in r.items()}
        for q in list(self._occ.get(p, ())):
            prow = self.pivots[q]
            a = prow.pop(p)
            for c, v in r.items():
                if c == p:
                    continue
                w = prow.get(c, 0) - a * v
                if w:
                    if c not in prow:
                        self._occ[c].add(q)
                    prow[c] = w
                elif c in prow:
                    del prow[c]
                    self._occ[c].discard(q)
        self._occ.pop(p, None)
        for c in r:
            if c != p:
                self._occ[c].add(p)
        self.pivots[p] = r
        return True

    def free_columns(self) -> list[int]:
        return [c for c in range(self.ncols) if c not in self.pivots]

    def nullspace(self) -> list[Row]:
        """Sparse kernel basis, one vector per free column."""
        basis = []
        for f in self.free_columns():
            v: Row = {f: Fraction(1)}
            for q in self._occ.get(f, ()):
                v[q] = -self.pivots[q][f]
            basis.append(v)
        return basis


def reduce_rows(rows: Iterable[Mapping[int, Fraction]], ncols: int) -> RowReducer:
    rr = RowReducer(ncols)
    for r in rows:
        rr.add(r)
    return rr


def dense_to_sparse(row: Sequence) -> Row:
    return {i: Fraction(v) for i, v in enumerate(row) if v}


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> tuple[int, list[list[Fraction]]]:
    """Kernel dimension and dense basis of the matrix with the given rows."""
    if ncols is None:
        if not rows:
            raise ValueError("need ncols for an empty matrix")
        ncols = len(rows[0])
    if any(len(r) != ncols for r in rows):
        raise ValueError("rows must have equal length")
    rr = reduce_rows((dense_to_sparse(r) for r in rows), ncols)
    basis = []
    for v in rr.nullspace():
        dense = [Fraction(0)] * ncols
        for c, x in v.items():
            dense[c] = x
        basis.append(dense)
    return len(basis), basis


def nullspace_dim(rows: Sequence[Sequence], ncols: int | None = None) -> int:
    return nullspace(rows, ncols)[0]


def rank(rows: Iterable[Mapping[int, Fraction]], ncols: int) -> int:
    return reduce_rows(rows, ncols).rank


class LinearSystem:
    """Sparse system ``A u = b`` built equation by equation."""

    def __init__(self, nvars: int):
        self.nvars = nvars
        self._rr = RowReducer(nvars + 1)
        self.consistent = True

    def add_equation(self, coeffs: Mapping[int, Fraction], rhs: Fraction = Fraction(0)):
        row = dict(coeffs)
        if rhs:
            row[self.nvars] = Fraction(rhs)
        r = self._rr.reduce(row)
        if not r:
            return
        if min(r) == self.nvars:
            self.consistent = False
            return
        self._rr.add(r)

    def solution(self) -> list[Fraction] | None:
        """Particular solution with all free variables zero, or None."""
        if not self.consistent:
            return None
        x = [Fraction(0)] * self.nvars
        for p, row in self._rr.pivots.items():
            x[p] = row.get(self.nvars, Fraction(0))
        return x

    def kernel_dim(self) -> int:
        return self.nvars - self._rr.rank

    def kernel(self) -> list[Row]:
        rr = self._rr
        basis = []
        for f in range(self.nvars):
            if f in rr.pivots:
                continue
            v: Row = {f: Fraction(1)}
            for q in rr._occ.get(f, ()):
                v[q] = -rr.pivots[q][f]
            basis.append(v)
        return basis

    def copy(self) -> "LinearSystem":
        other = LinearSystem(self.nvars)
        other.consistent = self.consistent
        rr, orr = self._rr, other._rr
        orr.pivots = {p: dict(r) for p, r in rr.pivots.items()}
        orr._occ = defaultdict(set, {c: set(v) for c, v in rr._occ.items()})
        return other
