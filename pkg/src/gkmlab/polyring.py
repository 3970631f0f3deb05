"""Exact sparse multivariate polynomials and rational functions over Q.

Polynomials live in ``S(W)`` for a rational vector space ``W`` with a fixed
ordered basis (a :class:`SpaceCtx`).  Every linear form is a vector of
coordinates in that basis, so ``MultiPoly.linear(ctx, alpha)`` is the degree-1
polynomial attached to a weight ``alpha``.

Rational functions only ever need denominators that are products of linear
forms (products of axial values, Vandermonde differences, ...), so
:class:`RationalFn` keeps its denominator factored into normalized linear
forms.  Reduction is then exact trial division, and reduced forms are
canonical.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd
from typing import Iterable, Mapping, Sequence

Exps = tuple[int, ...]


def as_fraction(x) -> Fraction:
    """Parse ``x`` (int, Fraction, or a string ``"p/q"``) as a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def fmt_fraction(q: Fraction) -> str:
    """Canonical string ``"p/q"`` (``"p"`` when ``q == 1``)."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class SpaceCtx:
    """An n-dimensional rational space with named basis vectors.

    ``dim == 0`` is allowed for the trivial ring of constants, which shows up
    as ``S(g*_xi)`` when ``g*`` is one-dimensional.
    """

    dim: int
    labels: tuple[str, ...]

    def __post_init__(self):
        if self.dim < 0:
            raise ValueError("dimension must be non-negative")
        if len(self.labels) != self.dim:
            raise ValueError("need exactly one label per basis vector")
        if len(set(self.labels)) != self.dim:
            raise ValueError("basis labels must be distinct")

    @classmethod
    def standard(cls, dim: int, prefix: str = "x") -> "SpaceCtx":
        return cls(dim, tuple(f"{prefix}{i + 1}" for i in range(dim)))


def graded_dim(j: int, n: int) -> int:
    """``dim S^j`` of an n-dimensional space; zero for negative ``j``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if j < 0:
        return 0
    if n == 0:
        return 1 if j == 0 else 0
    return comb(j + n - 1, n - 1)


@lru_cache(maxsize=None)
def monomials(n: int, m: int) -> tuple[Exps, ...]:
    """Exponent vectors of total degree ``m`` in ``n`` variables, grlex-descending."""
    if m < 0:
        return ()
    if n == 0:
        return ((),) if m == 0 else ()
    out: list[Exps] = []

    def rec(prefix: list[int], left: int, slots: int):
        if slots == 1:
            out.append(tuple(prefix + [left]))
            return
        for a in range(left, -1, -1):
            rec(prefix + [a], left - a, slots - 1)

    rec([], m, n)
    return tuple(out)


def _grlex(e: Exps):
    return (sum(e), e)


class MultiPoly:
    """Immutable sparse polynomial ``{exponents: coefficient}``."""

    __slots__ = ("ctx", "terms", "_hash")

    def __init__(self, ctx: SpaceCtx, terms: Mapping[Exps, Fraction] | None = None):
        self.ctx = ctx
        clean: dict[Exps, Fraction] = {}
        if terms:
            for e, c in terms.items():
                if len(e) != ctx.dim:
                    raise ValueError("exponent vector has wrong length")
                if c:
                    clean[tuple(e)] = Fraction(c)
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ctx: SpaceCtx, terms: dict[Exps, Fraction]) -> "MultiPoly":
        # terms must already be clean (no zeros)
        p = cls.__new__(cls)
        p.ctx = ctx
        p.terms = terms
        p._hash = None
        return p

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, ctx: SpaceCtx) -> "MultiPoly":
        return cls._raw(ctx, {})

    @classmethod
    def const(cls, ctx: SpaceCtx, c) -> "MultiPoly":
        c = as_fraction(c)
        return cls._raw(ctx, {(0,) * ctx.dim: c} if c else {})

    @classmethod
    def one(cls, ctx: SpaceCtx) -> "MultiPoly":
        return cls.const(ctx, 1)

    @classmethod
    def var(cls, ctx: SpaceCtx, i: int) -> "MultiPoly":
        e = [0] * ctx.dim
        e[i] = 1
        return cls._raw(ctx, {tuple(e): Fraction(1)})

    @classmethod
    def linear(cls, ctx: SpaceCtx, coeffs: Sequence) -> "MultiPoly":
        if len(coeffs) != ctx.dim:
            raise ValueError("linear form has wrong length")
        terms = {}
        for i, c in enumerate(coeffs):
            c = as_fraction(c)
            if c:
                e = [0] * ctx.dim
                e[i] = 1
                terms[tuple(e)] = c
        return cls._raw(ctx, terms)

    @classmethod
    def monomial(cls, ctx: SpaceCtx, exps: Exps, c=1) -> "MultiPoly":
        return cls(ctx, {tuple(exps): as_fraction(c)})

    # -- basic queries ------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; ``-1`` for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def homogeneous_part(self, k: int) -> "MultiPoly":
        return MultiPoly._raw(self.ctx, {e: c for e, c in self.terms.items() if sum(e) == k})

    def coeff(self, exps: Exps) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def items(self) -> list[tuple[Exps, Fraction]]:
        """Terms in graded-lex descending order."""
        return sorted(self.terms.items(), key=lambda t: _grlex(t[0]), reverse=True)

    def involves(self, i: int) -> bool:
        return any(e[i] for e in self.terms)

    def constant_value(self) -> Fraction:
        if any(any(e) for e in self.terms):
            raise ValueError("polynomial is not constant")
        return self.terms.get((0,) * self.ctx.dim, Fraction(0))

    # -- arithmetic ---------------------------------------------------------
    def _check(self, other: "MultiPoly"):
        if self.ctx != other.ctx:
            raise ValueError("polynomials live in different spaces")

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return MultiPoly.const(self.ctx, other)

    def __add__(self, other) -> "MultiPoly":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        terms = dict(self.terms)
        for e, c in other.terms.items():
            v = terms.get(e, 0) + c
            if v:
                terms[e] = v
            else:
                terms.pop(e, None)
        return MultiPoly._raw(self.ctx, terms)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._raw(self.ctx, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "MultiPoly":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "MultiPoly":
        return (-self) + other

    def scale(self, c) -> "MultiPoly":
        c = as_fraction(c)
        if not c:
            return MultiPoly.zero(self.ctx)
        return MultiPoly._raw(self.ctx, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        self._check(other)
        if not self.terms or not other.terms:
            return MultiPoly.zero(self.ctx)
        terms: dict[Exps, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return MultiPoly._raw(self.ctx, {e: c for e, c in terms.items() if c})

    def __rmul__(self, other) -> "MultiPoly":
        return self.__mul__(other)

    def __pow__(self, k: int) -> "MultiPoly":
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        out = MultiPoly.one(self.ctx)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self.ctx == other.ctx and self.terms == other.terms
        try:
            return self == MultiPoly.const(self.ctx, other)
        except TypeError:
            return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ctx, frozenset(self.terms.items())))
        return self._hash

    # -- substitution -------------------------------------------------------
    def compose(self, images: Sequence["MultiPoly"], target: SpaceCtx | None = None) -> "MultiPoly":
        """Ring morphism sending the i-th basis variable to ``images[i]``."""
        if len(images) != self.ctx.dim:
            raise ValueError("need one image per variable")
        if target is None:
            target = images[0].ctx if images else self.ctx
        powers: dict[tuple[int, int], MultiPoly] = {}

        def pw(i: int, k: int) -> MultiPoly:
            key = (i, k)
            if key not in powers:
                powers[key] = images[i] if k == 1 else pw(i, k - 1) * images[i]
            return powers[key]

        acc: dict[Exps, Fraction] = {}
        for e, c in self.terms.items():
            term = MultiPoly.const(target, c)
            for i, k in enumerate(e):
                if k:
                    term = term * pw(i, k)
            for e2, c2 in term.terms.items():
                acc[e2] = acc.get(e2, 0) + c2
        return MultiPoly._raw(target, {e: c for e, c in acc.items() if c})

    def evaluate(self, point: Sequence) -> Fraction:
        point = [as_fraction(v) for v in point]
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for v, k in zip(point, e):
                if k:
                    t *= v ** k
            total += t
        return total

    # -- serialization ------------------------------------------------------
    def to_json(self) -> list[dict]:
        return [{"exponents": list(e), "coeff": fmt_fraction(c)} for e, c in self.items()]

    @classmethod
    def from_json(cls, ctx: SpaceCtx, data: Iterable[Mapping]) -> "MultiPoly":
        terms: dict[Exps, Fraction] = {}
        for t in data:
            e = tuple(int(a) for a in t["exponents"])
            terms[e] = terms.get(e, 0) + as_fraction(t["coeff"])
        return cls(ctx, terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.items():
            mono = "*".join(
                lab if k == 1 else f"{lab}^{k}" for lab, k in zip(self.ctx.labels, e) if k
            )
            if not mono:
                s = fmt_fraction(c)
            elif c == 1:
                s = mono
            elif c == -1:
                s = "-" + mono
            else:
                s = f"{fmt_fraction(c)}*{mono}"
            parts.append(s)
        out = parts[0]
        for s in parts[1:]:
            out += " - " + s[1:] if s.startswith("-") else " + " + s
        return out

    def __repr__(self) -> str:
        return f"MultiPoly({self})"


# ---------------------------------------------------------------------------
# linear-form operations


def _pivot(l: Sequence) -> int:
    for i, c in enumerate(l):
        if c:
            return i
    raise ValueError("linear form is zero")


def divides_exactly(p: MultiPoly, l: Sequence) -> MultiPoly | None:
    """Return ``q`` with ``p == l*q`` or ``None`` when ``l`` does not divide ``p``."""
    l = [as_fraction(c) for c in l]
    i = _pivot(l)
    if len(l) != p.ctx.dim:
        raise ValueError("linear form has wrong length")
    lead = l[i]
    rest = [(j, c) for j, c in enumerate(l) if c and j != i]
    rem = dict(p.terms)
    quot: dict[Exps, Fraction] = {}
    # peel off terms from the highest power of the pivot variable down
    while rem:
        e = max(rem, key=lambda t: (t[i], t))
        if e[i] == 0:
            return None
        c = rem.pop(e) / lead
        qe = e[:i] + (e[i] - 1,) + e[i + 1:]
        quot[qe] = quot.get(qe, 0) + c
        for j, lj in rest:
            f = qe[:j] + (qe[j] + 1,) + qe[j + 1:]
            v = rem.get(f, 0) - c * lj
            if v:
                rem[f] = v
            else:
                rem.pop(f, None)
    return MultiPoly._raw(p.ctx, {e: c for e, c in quot.items() if c})


def restriction_images(ctx: SpaceCtx, l: Sequence) -> list[MultiPoly]:
    """Variable images for ``S(W) -> S(W)/(l)`` eliminating the pivot of ``l``."""
    l = [as_fraction(c) for c in l]
    i = _pivot(l)
    imgs = [MultiPoly.var(ctx, j) for j in range(ctx.dim)]
    imgs[i] = MultiPoly.linear(ctx, [0 if j == i else -c / l[i] for j, c in enumerate(l)])
    return imgs


def restrict_mod(p: MultiPoly, l: Sequence) -> MultiPoly:
    """Representative of ``p`` modulo the linear form ``l``.

    The pivot (first nonzero coordinate of ``l``) is eliminated, so the result
    never involves that variable and two polynomials agree modulo ``l`` exactly
    when their representatives are equal.
    """
    return p.compose(restriction_images(p.ctx, l), p.ctx)


def substitute_x(p: MultiPoly, expr: MultiPoly, x_index: int) -> MultiPoly:
    """Replace the variable ``x_index`` of ``p`` by ``expr``."""
    if expr.involves(x_index):
        raise ValueError("substituted expression involves the eliminated variable")
    imgs = [MultiPoly.var(p.ctx, j) for j in range(p.ctx.dim)]
    imgs[x_index] = expr
    return p.compose(imgs, p.ctx)


# ---------------------------------------------------------------------------
# rational functions with linear-form denominators

LinForm = tuple[Fraction, ...]


def normalize_linear(l: Sequence) -> tuple[Fraction, LinForm]:
    """Split ``l`` as ``scalar * form`` with the form's first nonzero entry 1."""
    l = tuple(as_fraction(c) for c in l)
    s = l[_pivot(l)]
    return s, tuple(c / s for c in l)


def primitive_vector(v: Sequence) -> tuple[Fraction, ...]:
    """Integer multiple of ``v`` with coprime entries and first nonzero entry positive."""
    v = [as_fraction(c) for c in v]
    i = _pivot(v)
    den = 1
    for c in v:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in v]
    g = 0
    for a in ints:
        g = gcd(g, a)
    if ints[i] < 0:
        g = -g
    return tuple(Fraction(a // g) for a in ints)


class RationalFn:
    """``num / prod(form^mult)`` kept reduced; forms are normalized linear forms."""

    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: Mapping[LinForm, int] | None = None):
        self.num = num
        self.den = self._reduce(num, dict(den or {}))

    def _reduce(self, num: MultiPoly, den: dict[LinForm, int]) -> tuple[tuple[LinForm, int], ...]:
        if num.is_zero():
            return ()
        out = {}
        for form, k in den.items():
            if len(form) != num.ctx.dim:
                raise ValueError("denominator form has wrong length")
            while k > 0:
                q = divides_exactly(num, form)
                if q is None:
                    break
                num = q
                k -= 1
            if k > 0:
                out[form] = k
        self.num = num
        return tuple(sorted(out.items()))

    @property
    def ctx(self) -> SpaceCtx:
        return self.num.ctx

    @classmethod
    def from_poly(cls, p: MultiPoly) -> "RationalFn":
        return cls(p)

    @classmethod
    def over_linear_product(cls, num: MultiPoly, forms: Iterable[Sequence]) -> "RationalFn":
        """``num / prod(forms)`` for arbitrary nonzero linear forms."""
        scale = Fraction(1)
        den: dict[LinForm, int] = {}
        for f in forms:
            s, nf = normalize_linear(f)
            scale *= s
            den[nf] = den.get(nf, 0) + 1
        return cls(num.scale(1 / scale), den)

    def is_polynomial(self) -> bool:
        return not self.den

    def to_poly(self) -> MultiPoly:
        if self.den:
            raise ValueError("rational function is not a polynomial")
        return self.num

    @property
    def den_poly(self) -> MultiPoly:
        out = MultiPoly.one(self.ctx)
        for form, k in self.den:
            out = out * MultiPoly.linear(self.ctx, form) ** k
        return out

    def _coerce(self, other) -> "RationalFn":
        if isinstance(other, RationalFn):
            if other.ctx != self.ctx:
                raise ValueError("rational functions live in different spaces")
            return other
        if isinstance(other, MultiPoly):
            return RationalFn(other)
        return RationalFn(MultiPoly.const(self.ctx, other))

    def __add__(self, other) -> "RationalFn":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        d1, d2 = dict(self.den), dict(other.den)
        lcm = dict(d1)
        for f, k in d2.items():
            lcm[f] = max(lcm.get(f, 0), k)

        def lift(num: MultiPoly, d: dict) -> MultiPoly:
            for f, k in lcm.items():
                extra = k - d.get(f, 0)
                if extra:
                    num = num * MultiPoly.linear(self.ctx, f) ** extra
            return num

        return RationalFn(lift(self.num, d1) + lift(other.num, d2), lcm)

    __radd__ = __add__

    def __neg__(self) -> "RationalFn":
        out = RationalFn.__new__(RationalFn)
        out.num, out.den = -self.num, self.den
        return out

    def __sub__(self, other) -> "RationalFn":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "RationalFn":
        return (-self) + other

    def __mul__(self, other) -> "RationalFn":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        den = dict(self.den)
        for f, k in other.den:
            den[f] = den.get(f, 0) + k
        return RationalFn(self.num * other.num, den)

    __rmul__ = __mul__

    def divide_linear(self, l: Sequence, power: int = 1) -> "RationalFn":
        s, f = normalize_linear(l)
        den = dict(self.den)
        den[f] = den.get(f, 0) + power
        return RationalFn(self.num.scale(Fraction(1) / s ** power), den)

    def __eq__(self, other) -> bool:
        try:
            other = self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __str__(self) -> str:
        if not self.den:
            return str(self.num)
        fs = []
        for f, k in self.den:
            lf = str(MultiPoly.linear(self.ctx, f))
            fs.append(f"({lf})" + (f"^{k}" if k > 1 else ""))
        return f"({self.num}) / ({'*'.join(fs)})"

    def __repr__(self) -> str:
        return f"RationalFn({self})"
