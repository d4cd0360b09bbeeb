"""Symbolic Bargmann-Segal-Fock laboratory.

Exact polynomials in the entries of an n x k matrix Z (optionally with a
second q x k block W), the differential inner product on them, and
normal-ordered polynomial-coefficient differential operators.  On top of
these sit the ladder operators of the oscillator representations, the
harmonic decomposition in one row of variables, and the highest weight
vectors of the classical dual pairs.

Coefficients are Gaussian rationals: exact arithmetic throughout, so
operator identities are decided, not sampled.
"""

from __future__ import annotations

import random
import re as _re
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations as _iterpermutations, product as _iterproduct
from math import comb, factorial

from .errors import (
    BadSignature,
    DimensionMismatch,
    NotHomogeneous,
    ShapeMismatch,
)
from .signatures import canonicalize


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"cannot use {x!r} as an exact rational")


class GaussRat:
    """A Gaussian rational re + im*i with exact Fraction components."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _frac(re)
        self.im = _frac(im)

    @staticmethod
    def coerce(x) -> "GaussRat":
        if isinstance(x, GaussRat):
            return x
        return GaussRat(_frac(x))

    def __add__(self, other):
        try:
            other = GaussRat.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussRat(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def __sub__(self, other):
        try:
            other = GaussRat.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussRat(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return GaussRat.coerce(other) + (-self)

    def __mul__(self, other):
        try:
            other = GaussRat.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussRat(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = GaussRat.coerce(other)
        norm = other.re * other.re + other.im * other.im
        if norm == 0:
            raise ZeroDivisionError("division by zero GaussRat")
        return GaussRat(
            (self.re * other.re + self.im * other.im) / norm,
            (self.im * other.re - self.re * other.im) / norm,
        )

    def __pow__(self, n: int):
        if n < 0:
            return GaussRat(1) / self ** (-n)
        out = GaussRat(1)
        for _ in range(n):
            out = out * self
        return out

    def conj(self):
        return GaussRat(self.re, -self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        try:
            other = GaussRat.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}*i"
        if self.im < 0:
            return f"{self.re}-{-self.im}*i"
        return f"{self.re}+{self.im}*i"

    def __repr__(self):
        return f"GaussRat({self.re}, {self.im})"


I_UNIT = GaussRat(0, 1)


def parse_gauss(text: str) -> GaussRat:
    """Parse the rendered form of a Gaussian rational, e.g. "1/2-3/2*i"."""
    text = text.strip().replace(" ", "")
    if not text:
        raise ValueError("empty coefficient")
    pieces = []
    start = 0
    for pos in range(1, len(text)):
        if text[pos] in "+-" and text[pos - 1] not in "+-/*":
            pieces.append(text[start:pos])
            start = pos
    pieces.append(text[start:])
    value = GaussRat(0)
    for piece in pieces:
        if piece in ("i", "+i"):
            value = value + I_UNIT
        elif piece == "-i":
            value = value - I_UNIT
        elif piece.endswith("*i"):
            value = value + GaussRat(0, Fraction(piece[:-2]))
        else:
            value = value + GaussRat(Fraction(piece))
    return value


@dataclass(frozen=True)
class FockShape:
    """Variable layout: rows x cols of Z, plus optional wrows x cols of W."""

    rows: int
    cols: int
    wrows: int = 0

    @property
    def nvars(self) -> int:
        return (self.rows + self.wrows) * self.cols

    def z_index(self, a: int, i: int) -> int:
        if not (1 <= a <= self.rows and 1 <= i <= self.cols):
            raise ValueError(f"Z[{a}][{i}] outside shape {self}")
        return (a - 1) * self.cols + (i - 1)

    def w_index(self, b: int, i: int) -> int:
        if not (1 <= b <= self.wrows and 1 <= i <= self.cols):
            raise ValueError(f"W[{b}][{i}] outside shape {self}")
        return (self.rows + b - 1) * self.cols + (i - 1)

    def var_name(self, idx: int) -> str:
        row, col = divmod(idx, self.cols)
        if row < self.rows:
            return f"Z[{row + 1}][{col + 1}]"
        return f"W[{row - self.rows + 1}][{col + 1}]"


class FockPoly:
    """Sparse polynomial in matrix variables over Gaussian rationals."""

    __slots__ = ("shape", "terms")

    def __init__(self, shape: FockShape, terms=None):
        self.shape = shape
        clean = {}
        if terms:
            for exps, coeff in terms.items() if hasattr(terms, "items") else terms:
                coeff = GaussRat.coerce(coeff)
                if coeff:
                    clean[tuple(exps)] = coeff
        self.terms = clean

    @classmethod
    def zero(cls, shape):
        return cls(shape)

    @classmethod
    def constant(cls, shape, c):
        return cls(shape, {(0,) * shape.nvars: GaussRat.coerce(c)})

    @classmethod
    def variable(cls, shape, idx):
        exps = [0] * shape.nvars
        exps[idx] = 1
        return cls(shape, {tuple(exps): GaussRat(1)})

    def is_zero(self):
        return not self.terms

    def _require_same_shape(self, other):
        if self.shape != other.shape:
            raise ShapeMismatch(f"{self.shape} vs {other.shape}")

    def __add__(self, other):
        self._require_same_shape(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, GaussRat(0)) + c
            if s:
                out[e] = s
            elif e in out:
                del out[e]
        return FockPoly(self.shape, out)

    def __neg__(self):
        return FockPoly(self.shape, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, FockPoly):
            other = GaussRat.coerce(other)
            return FockPoly(
                self.shape, {e: c * other for e, c in self.terms.items()}
            )
        self._require_same_shape(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, GaussRat(0)) + c1 * c2
                if s:
                    out[e] = s
                elif e in out:
                    del out[e]
        return FockPoly(self.shape, out)

    def __rmul__(self, other):
        return self * other

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = FockPoly.constant(self.shape, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def conj(self):
        return FockPoly(self.shape, {e: c.conj() for e, c in self.terms.items()})

    def diff(self, idx: int) -> "FockPoly":
        out = {}
        for e, c in self.terms.items():
            if e[idx]:
                new = e[:idx] + (e[idx] - 1,) + e[idx + 1:]
                out[new] = c * e[idx]
        return FockPoly(self.shape, out)

    def degree(self):
        if not self.terms:
            return None
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self):
        degrees = {sum(e) for e in self.terms}
        return len(degrees) <= 1

    def substitute(self, images: dict) -> "FockPoly":
        """Replace variables by polynomials (indices not mapped stay fixed)."""
        out = FockPoly.zero(self.shape)
        powers: dict = {}
        for e, c in self.terms.items():
            term = FockPoly.constant(self.shape, c)
            for idx, exp in enumerate(e):
                if not exp:
                    continue
                if idx in images:
                    cache = powers.setdefault(
                        idx, [FockPoly.constant(self.shape, 1), images[idx]]
                    )
                    while len(cache) <= exp:
                        cache.append(cache[-1] * images[idx])
                    term = term * cache[exp]
                else:
                    mono = [0] * self.shape.nvars
                    mono[idx] = exp
                    term = term * FockPoly(self.shape, {tuple(mono): GaussRat(1)})
            out = out + term
        return out

    def __eq__(self, other):
        if not isinstance(other, FockPoly):
            return NotImplemented
        return self.shape == other.shape and self.terms == other.terms

    def __repr__(self):
        return f"<FockPoly {render_poly(self)}>"


def z_var(shape: FockShape, a: int, i: int) -> FockPoly:
    return FockPoly.variable(shape, shape.z_index(a, i))


def w_var(shape: FockShape, b: int, i: int) -> FockPoly:
    return FockPoly.variable(shape, shape.w_index(b, i))


def pairing(f: FockPoly, g: FockPoly) -> GaussRat:
    """The Fock inner product: sum over monomials of (r)! f_r conj(g_r)."""
    if f.shape != g.shape:
        raise ShapeMismatch(f"{f.shape} vs {g.shape}")
    total = GaussRat(0)
    for e, c in f.terms.items():
        d = g.terms.get(e)
        if d:
            fact = 1
            for exp in e:
                fact *= factorial(exp)
            total = total + fact * c * d.conj()
    return total


class WeylOp:
    """Normal-ordered differential operator with polynomial coefficients.

    Terms map (multiplication exponents, derivative exponents) pairs to
    coefficients, with every multiplication standing left of every
    derivative; equality of term maps is operator equality.
    """

    __slots__ = ("shape", "terms")

    def __init__(self, shape: FockShape, terms=None):
        self.shape = shape
        clean = {}
        if terms:
            for key, coeff in terms.items() if hasattr(terms, "items") else terms:
                coeff = GaussRat.coerce(coeff)
                if coeff:
                    clean[(tuple(key[0]), tuple(key[1]))] = coeff
        self.terms = clean

    @classmethod
    def zero(cls, shape):
        return cls(shape)

    @classmethod
    def identity(cls, shape):
        zero = (0,) * shape.nvars
        return cls(shape, {(zero, zero): GaussRat(1)})

    @classmethod
    def multiplication(cls, f: FockPoly) -> "WeylOp":
        zero = (0,) * f.shape.nvars
        return cls(f.shape, {(e, zero): c for e, c in f.terms.items()})

    @classmethod
    def differential(cls, f: FockPoly) -> "WeylOp":
        """The operator f(D): each variable replaced by its derivative."""
        zero = (0,) * f.shape.nvars
        return cls(f.shape, {(zero, e): c for e, c in f.terms.items()})

    def is_zero(self):
        return not self.terms

    def _require_same_shape(self, other):
        if self.shape != other.shape:
            raise ShapeMismatch(f"{self.shape} vs {other.shape}")

    def __add__(self, other):
        self._require_same_shape(other)
        out = dict(self.terms)
        for key, c in other.terms.items():
            s = out.get(key, GaussRat(0)) + c
            if s:
                out[key] = s
            elif key in out:
                del out[key]
        return WeylOp(self.shape, out)

    def __neg__(self):
        return WeylOp(self.shape, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        scalar = GaussRat.coerce(scalar)
        return WeylOp(self.shape, {k: c * scalar for k, c in self.terms.items()})

    __rmul__ = __mul__

    def __matmul__(self, other: "WeylOp") -> "WeylOp":
        """Composition, renormalized via d^a x^b = sum_j C(a,j)C(b,j)j! x^(b-j)d^(a-j)."""
        self._require_same_shape(other)
        out: dict = {}
        for (za, da), ca in self.terms.items():
            for (zb, db), cb in other.terms.items():
                overlap = [
                    i for i in range(len(da)) if da[i] and zb[i]
                ]
                base = ca * cb
                ranges = [range(min(da[i], zb[i]) + 1) for i in overlap]
                for js in _iterproduct(*ranges):
                    coeff = base
                    znew = list(za)
                    dnew = list(db)
                    for i, zi in enumerate(zb):
                        znew[i] += zi
                    for i, di in enumerate(da):
                        dnew[i] += di
                    for i, j in zip(overlap, js):
                        if j:
                            coeff = coeff * (
                                comb(da[i], j) * comb(zb[i], j) * factorial(j)
                            )
                            znew[i] -= j
                            dnew[i] -= j
                    key = (tuple(znew), tuple(dnew))
                    s = out.get(key, GaussRat(0)) + coeff
                    if s:
                        out[key] = s
                    elif key in out:
                        del out[key]
        return WeylOp(self.shape, out)

    def apply(self, f: FockPoly) -> FockPoly:
        if self.shape != f.shape:
            raise ShapeMismatch(f"{self.shape} vs {f.shape}")
        out: dict = {}
        for (z, d), c in self.terms.items():
            for e, a in f.terms.items():
                coeff = c * a
                new = list(e)
                dead = False
                for i, di in enumerate(d):
                    if di:
                        if e[i] < di:
                            dead = True
                            break
                        fall = 1
                        for t in range(di):
                            fall *= e[i] - t
                        coeff = coeff * fall
                        new[i] -= di
                if dead:
                    continue
                for i, zi in enumerate(z):
                    new[i] += zi
                key = tuple(new)
                s = out.get(key, GaussRat(0)) + coeff
                if s:
                    out[key] = s
                elif key in out:
                    del out[key]
        return FockPoly(self.shape, out)

    def __eq__(self, other):
        if not isinstance(other, WeylOp):
            return NotImplemented
        return self.shape == other.shape and self.terms == other.terms

    def __repr__(self):
        bits = []
        for (z, d), c in sorted(self.terms.items(), reverse=True):
            zpart = "*".join(
                f"{self.shape.var_name(i)}^{e}" if e > 1 else self.shape.var_name(i)
                for i, e in enumerate(z) if e
            )
            dpart = "*".join(
                f"d{self.shape.var_name(i)}^{e}" if e > 1 else f"d{self.shape.var_name(i)}"
                for i, e in enumerate(d) if e
            )
            bits.append("*".join(p for p in (f"({c})", zpart, dpart) if p))
        return f"<WeylOp {' + '.join(bits) or '0'}>"


def weyl_apply(op: WeylOp, f: FockPoly) -> FockPoly:
    return op.apply(f)


def weyl_commutator(a: WeylOp, b: WeylOp) -> WeylOp:
    return (a @ b) - (b @ a)


def _unit(nvars, idx, amount=1):
    e = [0] * nvars
    e[idx] = amount
    return tuple(e)


def sl2_generators(k: int):
    """The ladder triple (E, X+, X-) on one row of k variables."""
    shape = FockShape(1, k)
    nv = shape.nvars
    zero = (0,) * nv
    half = Fraction(1, 2)
    e_terms = {(zero, zero): GaussRat(Fraction(k, 2))}
    for i in range(nv):
        e_terms[(_unit(nv, i), _unit(nv, i))] = GaussRat(1)
    xp_terms = {(_unit(nv, i, 2), zero): GaussRat(half) for i in range(nv)}
    xm_terms = {(zero, _unit(nv, i, 2)): GaussRat(half) for i in range(nv)}
    return (
        WeylOp(shape, e_terms),
        WeylOp(shape, xp_terms),
        WeylOp(shape, xm_terms),
    )


def sp2n_generators(n: int, k: int):
    """Generators {E_ab, P_ab, D_ab} of the rank-n oscillator algebra.

    E_ab = sum_i Z_ai d_bi + (k/2) delta_ab, P_ab = -sum_i Z_ai Z_bi,
    D_ab = sum_i d_ai d_bi; P and D are symmetric in their indices.
    """
    shape = FockShape(n, k)
    nv = shape.nvars
    zero = (0,) * nv
    fam = {"E": {}, "P": {}, "D": {}}
    for a in range(1, n + 1):
        for b in range(1, n + 1):
            terms: dict = {}
            if a == b:
                terms[(zero, zero)] = GaussRat(Fraction(k, 2))
            for i in range(1, k + 1):
                key = (_unit(nv, shape.z_index(a, i)), _unit(nv, shape.z_index(b, i)))
                terms[key] = terms.get(key, GaussRat(0)) + GaussRat(1)
            fam["E"][(a, b)] = WeylOp(shape, terms)
    for a in range(1, n + 1):
        for b in range(a, n + 1):
            p_terms: dict = {}
            d_terms: dict = {}
            for i in range(1, k + 1):
                za = shape.z_index(a, i)
                zb = shape.z_index(b, i)
                mono = [0] * nv
                mono[za] += 1
                mono[zb] += 1
                mono = tuple(mono)
                p_terms[(mono, zero)] = GaussRat(-1)
                d_terms[(zero, mono)] = GaussRat(1)
            p_op = WeylOp(shape, p_terms)
            d_op = WeylOp(shape, d_terms)
            fam["P"][(a, b)] = fam["P"][(b, a)] = p_op
            fam["D"][(a, b)] = fam["D"][(b, a)] = d_op
    return fam


def supq_laplacians(p: int, q: int, k: int):
    """Invariant quadratics p_ab = sum_i Z_ai W_bi and their Laplacians."""
    shape = FockShape(p, k, q)
    nv = shape.nvars
    zero = (0,) * nv
    fam = {"p": {}, "delta": {}}
    for a in range(1, p + 1):
        for b in range(1, q + 1):
            p_terms: dict = {}
            d_terms: dict = {}
            for i in range(1, k + 1):
                mono = [0] * nv
                mono[shape.z_index(a, i)] += 1
                mono[shape.w_index(b, i)] += 1
                mono = tuple(mono)
                p_terms[(mono, zero)] = GaussRat(1)
                d_terms[(zero, mono)] = GaussRat(1)
            fam["p"][(a, b)] = WeylOp(shape, p_terms)
            fam["delta"][(a, b)] = WeylOp(shape, d_terms)
    return fam


def radial_square(k: int) -> FockPoly:
    """The invariant quadratic sum of Z_i^2 on one row of k variables."""
    shape = FockShape(1, k)
    return FockPoly(
        shape, {_unit(shape.nvars, i, 2): GaussRat(1) for i in range(k)}
    )


def harmonic_project_rank1(f: FockPoly, k: int):
    """Split a homogeneous f into sum_j p0^j h_j with every h_j harmonic.

    Works top down: the deepest component is isolated by iterating the
    lowering operator, whose action on p0^j h has the closed-form
    constant j*(k + 2*(r + j - 1)); the result is exact.
    """
    shape = FockShape(1, k)
    if f.shape != shape:
        raise ShapeMismatch(f"expected one row of {k} variables, got {f.shape}")
    if f.is_zero():
        return []
    if not f.is_homogeneous():
        raise NotHomogeneous("harmonic projection needs a homogeneous input")
    _, _, lower = sl2_generators(k)
    p0 = radial_square(k)
    m = f.degree()
    work = f
    components = []
    for j in range(m // 2, -1, -1):
        r = m - 2 * j
        g = work
        for _ in range(j):
            g = lower.apply(g)
        const = 1
        for t in range(1, j + 1):
            const *= t * (k + 2 * (r + t - 1))
        h = g * Fraction(1, const)
        if not h.is_zero():
            components.append((j, h))
        work = work - (p0 ** j) * h
    assert work.is_zero(), "harmonic projection must reconstruct exactly"
    return sorted(components)


def _poly_det(entries):
    """Determinant of a small square matrix of FockPolys."""
    size = len(entries)
    if size == 0:
        raise ValueError("empty determinant")
    shape = entries[0][0].shape
    out = FockPoly.zero(shape)
    for perm in _iterpermutations(range(size)):
        sign = 1
        for i in range(size):
            for j in range(i + 1, size):
                if perm[i] > perm[j]:
                    sign = -sign
        term = FockPoly.constant(shape, sign)
        for i in range(size):
            term = term * entries[i][perm[i]]
        out = out + term
    return out


def _so_q_matrix(k: int):
    """The column-rescaled isotropic frame matrix (entries 0, 1, +-i).

    Column rescaling is harmless because principal minors of Z*q scale by
    constants and highest weight vectors are only defined up to scalars.
    """
    half = k // 2
    one = GaussRat(1)
    zero = GaussRat(0)
    q = [[zero for _ in range(k)] for _ in range(k)]
    if k % 2 == 0:
        for t in range(half):
            q[t][t] = one
            q[t][half + t] = one
            q[half + t][t] = I_UNIT
            q[half + t][half + t] = -I_UNIT
    else:
        for t in range(half):
            q[t][t] = one
            q[t][half + 1 + t] = one
            q[half + 1 + t][t] = I_UNIT
            q[half + 1 + t][half + 1 + t] = -I_UNIT
        q[half][half] = one
    return q


def _minor_product(entry, diffs, shape):
    """Product over i of (i-th principal minor)^diffs[i-1]."""
    out = FockPoly.constant(shape, 1)
    for size in range(1, len(diffs) + 1):
        exp = diffs[size - 1]
        if not exp:
            continue
        minor = _poly_det(
            [[entry(r, c) for c in range(size)] for r in range(size)]
        )
        out = out * minor ** exp
    return out


def _exponent_diffs(sig):
    return [
        sig[i] - (sig[i + 1] if i + 1 < len(sig) else 0) for i in range(len(sig))
    ]


def hwv(kind: str, data, n, k: int) -> FockPoly:
    """Highest weight vectors of the dual-pair modules.

    kind "gl": data is a signature, vector is a product of principal
    minors of Z.  kind "so_rank1": data is a degree r, vector is the r-th
    power of an isotropic linear form.  kind "so_general": data is a
    signature, vector is a product of principal minors of Z*q for the
    isotropic frame q.  kind "upq": data is a pair (nu, lam) and n a pair
    (p, q); vector is the product of Z-minors for nu and reversed W-minors
    for the contragredient lam.
    """
    if kind == "gl":
        lam = canonicalize(data)
        if len(lam) > n or len(lam) > k:
            raise BadSignature(f"signature {list(lam)} needs n, k >= {len(lam)}")
        shape = FockShape(n, k)
        return _minor_product(
            lambda r, c: z_var(shape, r + 1, c + 1), _exponent_diffs(lam), shape
        )
    if kind == "so_rank1":
        r = data if isinstance(data, int) else (canonicalize(data) + (0,))[0]
        if r < 0:
            raise BadSignature(f"degree must be nonnegative, got {r}")
        shape = FockShape(1, k)
        if r == 0:
            return FockPoly.constant(shape, 1)
        if k < 2:
            raise BadSignature("isotropic vectors need k >= 2")
        s = k // 2
        partner = s + 1 if k % 2 == 0 else s + 2
        base = z_var(shape, 1, 1) + I_UNIT * z_var(shape, 1, partner)
        return base ** r
    if kind == "so_general":
        mu = canonicalize(data)
        if len(mu) > n:
            raise BadSignature(f"signature {list(mu)} needs n >= {len(mu)}")
        if 2 * len(mu) > k:
            raise BadSignature(
                f"signature {list(mu)} needs {2 * len(mu)} <= k, got k={k}"
            )
        shape = FockShape(n, k)
        q = _so_q_matrix(k)
        size = len(mu)
        zq = [
            [
                sum(
                    (z_var(shape, r + 1, t + 1) * q[t][c] for t in range(k)),
                    FockPoly.zero(shape),
                )
                for c in range(size)
            ]
            for r in range(size)
        ]
        return _minor_product(
            lambda r, c: zq[r][c], _exponent_diffs(mu), shape
        )
    if kind == "upq":
        nu_sig, lam_sig = data
        p, q = n
        nu_sig = canonicalize(nu_sig)
        lam_sig = canonicalize(lam_sig)
        if len(nu_sig) > p or len(lam_sig) > q:
            raise BadSignature("signatures must fit the (p, q) block sizes")
        if len(nu_sig) + len(lam_sig) > k:
            raise BadSignature("blocks overlap: need len(nu) + len(lam) <= k")
        shape = FockShape(p, k, q)
        left = _minor_product(
            lambda r, c: z_var(shape, r + 1, c + 1), _exponent_diffs(nu_sig), shape
        )
        # Reversed block: entry (a, b) of the flipped W matrix.
        right = _minor_product(
            lambda r, c: w_var(shape, q - r, k - c), _exponent_diffs(lam_sig), shape
        )
        return left * right
    raise BadSignature(f"unknown highest weight vector kind {kind!r}")


DIAG_ENTRIES = (Fraction(1), Fraction(2), Fraction(1, 2))
OFF_DIAG_ENTRIES = (
    Fraction(0),
    Fraction(1),
    Fraction(-1),
    Fraction(2),
    Fraction(-2),
    Fraction(1, 2),
    Fraction(-1, 2),
)


def check_covariance(f: FockPoly, side: str, exponents, trials: int = 8, seed: int = 0) -> bool:
    """Test Borel covariance of f by exact random substitution.

    side "left_lower" multiplies by random lower-triangular matrices on
    the row index; side "right_upper" by upper-triangular matrices on the
    column index.  Exact equality with the character factor must hold on
    every trial; a False return is a result, not an error.
    """
    if f.is_zero():
        raise ValueError("covariance of the zero polynomial is vacuous")
    shape = f.shape
    size = shape.rows if side == "left_lower" else shape.cols
    if side not in ("left_lower", "right_upper"):
        raise ValueError(f"unknown side {side!r}")
    exponents = tuple(exponents)
    if len(exponents) > size:
        raise BadSignature(f"{len(exponents)} exponents for {size} diagonal entries")
    exponents = exponents + (0,) * (size - len(exponents))
    rng = random.Random(seed)
    for _ in range(trials):
        b = [[Fraction(0)] * size for _ in range(size)]
        for i in range(size):
            b[i][i] = rng.choice(DIAG_ENTRIES)
            for j in range(i):
                if side == "left_lower":
                    b[i][j] = rng.choice(OFF_DIAG_ENTRIES)
                else:
                    b[j][i] = rng.choice(OFF_DIAG_ENTRIES)
        images = {}
        if side == "left_lower":
            for a in range(1, shape.rows + 1):
                for i in range(1, shape.cols + 1):
                    images[shape.z_index(a, i)] = sum(
                        (z_var(shape, t + 1, i) * b[a - 1][t] for t in range(size) if b[a - 1][t]),
                        FockPoly.zero(shape),
                    )
        else:
            for a in range(1, shape.rows + 1):
                for i in range(1, shape.cols + 1):
                    images[shape.z_index(a, i)] = sum(
                        (z_var(shape, a, t + 1) * b[t][i - 1] for t in range(size) if b[t][i - 1]),
                        FockPoly.zero(shape),
                    )
            for a in range(1, shape.wrows + 1):
                for i in range(1, shape.cols + 1):
                    images[shape.w_index(a, i)] = sum(
                        (w_var(shape, a, t + 1) * b[t][i - 1] for t in range(size) if b[t][i - 1]),
                        FockPoly.zero(shape),
                    )
        factor = GaussRat(1)
        for i in range(size):
            factor = factor * GaussRat(b[i][i]) ** _nonneg(exponents[i])
        if f.substitute(images) != factor * f:
            return False
    return True


def _nonneg(e):
    if e < 0:
        raise BadSignature("covariance exponents must be nonnegative")
    return e


def translate(f: FockPoly, g, side: str = "right") -> FockPoly:
    """Exact substitution action of a matrix on the variable matrix.

    side "right" computes f(Z g) (columns transform, every block row);
    side "left_transpose" computes f(g^t Z) (Z rows transform).
    """
    shape = f.shape
    g = [[GaussRat.coerce(x) for x in row] for row in g]
    if side == "right":
        size = shape.cols
        if len(g) != size or any(len(row) != size for row in g):
            raise DimensionMismatch(f"need a {size}x{size} matrix")
        images = {}
        for a in range(1, shape.rows + 1):
            for i in range(1, shape.cols + 1):
                images[shape.z_index(a, i)] = sum(
                    (z_var(shape, a, t + 1) * g[t][i - 1] for t in range(size) if g[t][i - 1]),
                    FockPoly.zero(shape),
                )
        for b in range(1, shape.wrows + 1):
            for i in range(1, shape.cols + 1):
                images[shape.w_index(b, i)] = sum(
                    (w_var(shape, b, t + 1) * g[t][i - 1] for t in range(size) if g[t][i - 1]),
                    FockPoly.zero(shape),
                )
        return f.substitute(images)
    if side == "left_transpose":
        size = shape.rows
        if len(g) != size or any(len(row) != size for row in g):
            raise DimensionMismatch(f"need a {size}x{size} matrix")
        images = {}
        for a in range(1, shape.rows + 1):
            for i in range(1, shape.cols + 1):
                images[shape.z_index(a, i)] = sum(
                    (z_var(shape, t + 1, i) * g[t][a - 1] for t in range(size) if g[t][a - 1]),
                    FockPoly.zero(shape),
                )
        return f.substitute(images)
    raise ValueError(f"unknown side {side!r}")


def _matrix_inverse(g):
    size = len(g)
    aug = [
        [GaussRat.coerce(x) for x in row]
        + [GaussRat(1 if i == j else 0) for j in range(size)]
        for i, row in enumerate(g)
    ]
    for col in range(size):
        pivot = next((r for r in range(col, size) if aug[r][col]), None)
        if pivot is None:
            raise DimensionMismatch("matrix is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = GaussRat(1) / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(size):
            if r != col and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[col])]
    return [row[size:] for row in aug]


def conjugate_weyl_by_right_translation(op: WeylOp, g) -> WeylOp:
    """Compute R(g) A R(g)^-1 in normal order.

    Under conjugation, multiplications pull back through g and
    derivatives through its inverse transpose, so each normal-ordered
    term maps to a product of transformed halves that is already in
    normal order.
    """
    shape = op.shape
    if shape.wrows:
        raise DimensionMismatch("conjugation implemented for pure Z shapes")
    size = shape.cols
    g = [[GaussRat.coerce(x) for x in row] for row in g]
    if len(g) != size or any(len(row) != size for row in g):
        raise DimensionMismatch(f"need a {size}x{size} matrix")
    ginv = _matrix_inverse(g)
    zimages = {}
    dimages = {}
    for a in range(1, shape.rows + 1):
        for i in range(1, shape.cols + 1):
            idx = shape.z_index(a, i)
            zimages[idx] = sum(
                (z_var(shape, a, t + 1) * g[t][i - 1] for t in range(size) if g[t][i - 1]),
                FockPoly.zero(shape),
            )
            dimages[idx] = sum(
                (z_var(shape, a, t + 1) * ginv[i - 1][t] for t in range(size) if ginv[i - 1][t]),
                FockPoly.zero(shape),
            )
    out: dict = {}
    for (z, d), c in op.terms.items():
        zpoly = FockPoly(shape, {tuple(z): GaussRat(1)}).substitute(zimages)
        dpoly = FockPoly(shape, {tuple(d): GaussRat(1)}).substitute(dimages)
        for e1, c1 in zpoly.terms.items():
            for e2, c2 in dpoly.terms.items():
                key = (e1, e2)
                s = out.get(key, GaussRat(0)) + c * c1 * c2
                if s:
                    out[key] = s
                elif key in out:
                    del out[key]
    return WeylOp(shape, out)


_VAR_RE = _re.compile(r"^([ZW])\[(\d+)\]\[(\d+)\](?:\^(\d+))?$")


def render_poly(f: FockPoly) -> str:
    """Canonical text form: sum of coef * Z[a][i]^e * W[b][j]^e terms."""
    if f.is_zero():
        return "0"
    bits = []
    for e, c in sorted(f.terms.items(), reverse=True):
        coeff = str(c)
        if c.re and c.im:
            coeff = f"({coeff})"
        factors = [coeff]
        for idx, exp in enumerate(e):
            if exp:
                name = f.shape.var_name(idx)
                factors.append(f"{name}^{exp}" if exp > 1 else name)
        bits.append(" * ".join(factors))
    return " + ".join(bits)


def _split_top_level(text, seps):
    depth = 0
    pieces = []
    start = 0
    for pos, ch in enumerate(text):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif (
            ch in seps
            and depth == 0
            and pos > start
            and text[pos - 1] not in "+-*/^"
        ):
            pieces.append(text[start:pos])
            start = pos
    pieces.append(text[start:])
    return pieces


def parse_poly(text: str, shape: FockShape | None = None) -> FockPoly:
    """Parse the canonical polynomial text form.

    When no shape is supplied, the smallest shape covering every
    mentioned variable is used.
    """
    squeezed = text.replace(" ", "")
    if not squeezed:
        raise ValueError("empty polynomial text")
    raw_terms = []
    for piece in _split_top_level(squeezed, "+-"):
        sign = GaussRat(1)
        while piece and piece[0] in "+-":
            if piece[0] == "-":
                sign = -sign
            piece = piece[1:]
        if not piece:
            raise ValueError(f"dangling sign in {text!r}")
        factors = [tok.lstrip("*") for tok in _split_top_level(piece, "*")]
        # Reattach the "i" of complex factors split by the * in "r/s*i".
        merged = []
        for tok in factors:
            if tok == "i" and merged and not _VAR_RE.match(merged[-1]) \
                    and not merged[-1].startswith("("):
                merged[-1] += "*i"
            else:
                merged.append(tok)
        raw_terms.append((sign, merged))
    max_z = max_w = max_col = 0
    for _, factors in raw_terms:
        for tok in factors:
            m = _VAR_RE.match(tok)
            if m:
                block, row, col = m.group(1), int(m.group(2)), int(m.group(3))
                max_col = max(max_col, col)
                if block == "Z":
                    max_z = max(max_z, row)
                else:
                    max_w = max(max_w, row)
    if shape is None:
        shape = FockShape(max(max_z, 1), max(max_col, 1), max_w)
    result = FockPoly.zero(shape)
    for sign, factors in raw_terms:
        coeff = sign
        exps = [0] * shape.nvars
        for tok in factors:
            m = _VAR_RE.match(tok)
            if m:
                block, row, col = m.group(1), int(m.group(2)), int(m.group(3))
                power = int(m.group(4)) if m.group(4) else 1
                idx = shape.z_index(row, col) if block == "Z" else shape.w_index(row, col)
                exps[idx] += power
            elif tok.startswith("(") and tok.endswith(")"):
                coeff = coeff * parse_gauss(tok[1:-1])
            else:
                coeff = coeff * parse_gauss(tok)
        result = result + FockPoly(shape, {tuple(exps): coeff})
    return result
