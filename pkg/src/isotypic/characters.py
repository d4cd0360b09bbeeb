"""Character oracles: Weyl dimension formulas and exact Laurent characters.

Everything here verifies the LR/branching combinatorics by a disjoint
route: GL characters come from semistandard tableau enumeration, SO
characters from alternant ratios with exact division, and decompositions
are recovered by greedily peeling highest weights.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import prod

from .errors import (
    DivisionNotExact,
    NegativeMultiplicity,
    RankConstraint,
    RankTooLarge,
    SignatureTooLong,
)
from .lr import Decomposition
from .signatures import GroupFamily, Signature, canonicalize, pad, trim

DESK_RANK_LIMIT = 7


class LaurentPoly:
    """Sparse Laurent polynomial with exact integer coefficients.

    Terms map exponent tuples (one slot per torus coordinate) to nonzero
    integers.  All arithmetic is exact; instances are treated as
    immutable.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        clean = {}
        if terms:
            for exps, coeff in terms.items() if hasattr(terms, "items") else terms:
                if coeff:
                    clean[tuple(exps)] = coeff
        self.terms = clean

    @classmethod
    def zero(cls, nvars):
        return cls(nvars)

    @classmethod
    def constant(cls, nvars, c):
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def monomial(cls, nvars, exps, coeff=1):
        return cls(nvars, {tuple(exps): coeff})

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, tuple(sorted(self.terms.items()))))

    def __add__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            elif e in out:
                del out[e]
        return LaurentPoly(self.nvars, out)

    def __neg__(self):
        return LaurentPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return LaurentPoly(
                self.nvars, {e: c * other for e, c in self.terms.items()}
            )
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                elif e in out:
                    del out[e]
        return LaurentPoly(self.nvars, out)

    __rmul__ = __mul__

    def eval_at_ones(self) -> int:
        return sum(self.terms.values())

    def invert_variable(self, i) -> "LaurentPoly":
        """Substitute x_i -> 1/x_i."""
        return LaurentPoly(
            self.nvars,
            {e[:i] + (-e[i],) + e[i + 1:]: c for e, c in self.terms.items()},
        )

    def __repr__(self):
        body = " + ".join(f"{c}*x^{list(e)}" for e, c in sorted(self.terms.items(), reverse=True))
        return f"<LaurentPoly {body or '0'}>"


def _iter_ssyt_contents(shape, k):
    """Yield the content vector (counts of 1..k) of every SSYT of shape."""
    nrows = len(shape)
    if nrows == 0:
        yield (0,) * k
        return
    if nrows > k:
        return
    rows = [[0] * shape[r] for r in range(nrows)]
    content = [0] * k
    cells = [(r, c) for r in range(nrows) for c in range(shape[r])]

    def fill(idx):
        if idx == len(cells):
            yield tuple(content)
            return
        r, c = cells[idx]
        lo = rows[r][c - 1] if c > 0 else 1
        if r > 0:
            lo = max(lo, rows[r - 1][c] + 1)
        for v in range(lo, k + 1):
            rows[r][c] = v
            content[v - 1] += 1
            yield from fill(idx + 1)
            content[v - 1] -= 1

    yield from fill(0)


@lru_cache(maxsize=None)
def schur_poly(lam: Signature, k: int) -> LaurentPoly:
    """Schur polynomial of lam in k variables, by tableau enumeration."""
    lam = canonicalize(lam)
    terms: dict = {}
    for content in _iter_ssyt_contents(lam, k):
        terms[content] = terms.get(content, 0) + 1
    return LaurentPoly(k, terms)


@lru_cache(maxsize=None)
def schur_laurent_on_so_torus(lam: Signature, k: int) -> LaurentPoly:
    """Restrict the U(k) character of lam to the SO(k) maximal torus.

    Torus values are (x_1..x_nu, x_1^-1..x_nu^-1) for k = 2*nu, with one
    extra coordinate fixed at 1 when k is odd.
    """
    lam = canonicalize(lam)
    if k > DESK_RANK_LIMIT:
        raise RankTooLarge(f"rank {k} beyond desk scale {DESK_RANK_LIMIT}")
    if len(lam) > k:
        raise RankConstraint(f"signature {list(lam)} too long for rank {k}")
    nu = k // 2
    terms: dict = {}
    for content in _iter_ssyt_contents(lam, k):
        exps = tuple(content[i] - content[nu + i] for i in range(nu))
        terms[exps] = terms.get(exps, 0) + 1
    return LaurentPoly(nu, terms)


def laurent_exact_div(num: LaurentPoly, den: LaurentPoly) -> LaurentPoly:
    """Exact division of Laurent polynomials under lex term order.

    The quotient's support is confined to the Newton box of num minus
    den; stepping outside it, or a non-integer coefficient step, raises
    DivisionNotExact (an implementation bug, never a data error).
    """
    if den.is_zero():
        raise DivisionNotExact("division by zero polynomial")
    if num.is_zero():
        return LaurentPoly(num.nvars)
    n = num.nvars
    lo = [min(e[i] for e in num.terms) - max(e[i] for e in den.terms) for i in range(n)]
    hi = [max(e[i] for e in num.terms) - min(e[i] for e in den.terms) for i in range(n)]
    eb = max(den.terms)
    cb = den.terms[eb]
    rem = dict(num.terms)
    quot: dict = {}
    while rem:
        er = max(rem)
        cr = rem[er]
        et = tuple(a - b for a, b in zip(er, eb))
        if any(e < l or e > h for e, l, h in zip(et, lo, hi)):
            raise DivisionNotExact("quotient term outside Newton box")
        q, r = divmod(cr, cb)
        if r:
            raise DivisionNotExact("non-integer quotient coefficient")
        quot[et] = q
        for e2, c2 in den.terms.items():
            e = tuple(a + b for a, b in zip(et, e2))
            s = rem.get(e, 0) - q * c2
            if s:
                rem[e] = s
            elif e in rem:
                del rem[e]
    return LaurentPoly(n, quot)


def _det(entries):
    """Determinant of a square matrix of LaurentPolys (Leibniz expansion)."""
    size = len(entries)
    nvars = entries[0][0].nvars if size else 0
    out = LaurentPoly(nvars)
    for perm in permutations(range(size)):
        sign = 1
        seen = list(perm)
        for i in range(size):
            for j in range(i + 1, size):
                if seen[i] > seen[j]:
                    sign = -sign
        term = LaurentPoly.constant(nvars, sign)
        for i in range(size):
            term = term * entries[i][perm[i]]
        out = out + term
    return out


@lru_cache(maxsize=None)
def so_character(mu: Signature, k: int) -> LaurentPoly:
    """Irreducible SO(k) character as an exact alternant ratio.

    Requires length(mu) < k/2 so the highest weight is away from the
    self-associated split of the even orthogonal groups.
    """
    mu = canonicalize(mu)
    if k > DESK_RANK_LIMIT:
        raise RankTooLarge(f"rank {k} beyond desk scale {DESK_RANK_LIMIT}")
    if 2 * len(mu) >= k:
        raise SignatureTooLong(
            f"need length(mu) < k/2; got {list(mu)} at k={k}"
        )
    nu = k // 2
    if nu == 0:
        return LaurentPoly.constant(0, 1)
    mup = pad(mu, nu)
    if k % 2 == 1:
        # B case: work in y with x = y^2 so the half-integer rho becomes
        # integral, then halve the (necessarily even) exponents.
        tops = [2 * (mup[j] + nu - j - 1) + 1 for j in range(nu)]
        bots = [2 * (nu - j - 1) + 1 for j in range(nu)]

        def odd_entry(i, e):
            return LaurentPoly(
                nu,
                {
                    tuple(e if t == i else 0 for t in range(nu)): 1,
                    tuple(-e if t == i else 0 for t in range(nu)): -1,
                },
            )

        quot = laurent_exact_div(
            _det([[odd_entry(i, tops[j]) for j in range(nu)] for i in range(nu)]),
            _det([[odd_entry(i, bots[j]) for j in range(nu)] for i in range(nu)]),
        )
        halved = {}
        for e, c in quot.terms.items():
            if any(x % 2 for x in e):
                raise DivisionNotExact("odd exponent after B-type division")
            halved[tuple(x // 2 for x in e)] = c
        return LaurentPoly(nu, halved)
    # D case: mu has length < nu, so the last column exponent is 0 and
    # the halved-column convention applies to both alternants.
    tops = [mup[j] + nu - j - 1 for j in range(nu)]
    bots = [nu - j - 1 for j in range(nu)]

    def even_entry(i, e):
        if e == 0:
            return LaurentPoly.constant(nu, 1)
        return LaurentPoly(
            nu,
            {
                tuple(e if t == i else 0 for t in range(nu)): 1,
                tuple(-e if t == i else 0 for t in range(nu)): 1,
            },
        )

    return laurent_exact_div(
        _det([[even_entry(i, tops[j]) for j in range(nu)] for i in range(nu)]),
        _det([[even_entry(i, bots[j]) for j in range(nu)] for i in range(nu)]),
    )


def dim(group: GroupFamily, sig: Signature) -> int:
    """Exact dimension of the irreducible representation via Weyl products."""
    sig = canonicalize(sig)
    if group.rank == "stable":
        raise RankConstraint("dimension requires a finite rank")
    group.check_signature(sig)
    k = group.rank
    if group.family == "u":
        lam = pad(sig, k)
        val = prod(
            (
                Fraction(lam[i] - lam[j] + j - i, j - i)
                for i in range(k)
                for j in range(i + 1, k)
            ),
            start=Fraction(1),
        )
    elif group.family == "so":
        half = k // 2
        mup = pad(sig, half)
        if k % 2 == 1:
            a = [2 * (mup[i] + half - i - 1) + 1 for i in range(half)]
            b = [2 * (half - i - 1) + 1 for i in range(half)]
            val = prod((Fraction(x, y) for x, y in zip(a, b)), start=Fraction(1))
        else:
            a = [mup[i] + half - i - 1 for i in range(half)]
            b = [half - i - 1 for i in range(half)]
            val = Fraction(1)
        val *= prod(
            (
                Fraction(a[i] ** 2 - a[j] ** 2, b[i] ** 2 - b[j] ** 2)
                for i in range(half)
                for j in range(i + 1, half)
            ),
            start=Fraction(1),
        )
    else:
        half = k // 2
        mup = pad(sig, half)
        a = [mup[i] + half - i for i in range(half)]
        b = [half - i for i in range(half)]
        val = prod((Fraction(x, y) for x, y in zip(a, b)), start=Fraction(1))
        val *= prod(
            (
                Fraction(a[i] ** 2 - a[j] ** 2, b[i] ** 2 - b[j] ** 2)
                for i in range(half)
                for j in range(i + 1, half)
            ),
            start=Fraction(1),
        )
    assert val.denominator == 1, "Weyl product must be integral"
    return int(val)


def _is_dominant(exps, family):
    for a, b in zip(exps, exps[1:]):
        if a < b:
            return False
    return not exps or exps[-1] >= 0


def greedy_decompose(chi: LaurentPoly, group: GroupFamily) -> Decomposition:
    """Peel irreducible characters off chi, highest weight first.

    At each step the lexicographically greatest surviving monomial is a
    dominance-maximal weight; for a genuine character sum it is dominant
    and appears with positive multiplicity, otherwise we abort.
    """
    if group.family == "u":
        irreducible = lambda m: schur_poly(m, group.rank)
    elif group.family == "so":
        irreducible = lambda m: so_character(m, group.rank)
    else:
        raise ValueError(f"no character basis for family {group.family!r}")
    work = chi
    found: dict = {}
    while not work.is_zero():
        top = max(work.terms)
        mult = work.terms[top]
        if not _is_dominant(top, group.family):
            raise NegativeMultiplicity(
                f"leading monomial {list(top)} is not a dominant weight"
            )
        if mult < 0:
            raise NegativeMultiplicity(
                f"weight {list(top)} received multiplicity {mult}"
            )
        sig = trim(top)
        work = work - mult * irreducible(sig)
        found[sig] = mult
    return Decomposition(group, found)


def schur_product_decompose(lam: Signature, mu: Signature, k: int) -> Decomposition:
    """Character-arithmetic oracle for lr.tensor_pair."""
    lam = canonicalize(lam)
    mu = canonicalize(mu)
    if k > 5:
        raise RankTooLarge(f"rank {k} beyond desk scale 5 for the product oracle")
    product = schur_poly(lam, k) * schur_poly(mu, k)
    return greedy_decompose(product, GroupFamily("u", k))
