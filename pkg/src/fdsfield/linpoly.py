"""Linearized polynomials L(x) = sum_i A_i x^{p^i} over GF(p^r).

A LinearizedPoly always holds exactly r coefficients: since x^{p^r} = x on
GF(p^r), every composition is reduced back to r terms and two polynomials
are equal exactly when they define the same map.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import _linalg
from .errors import BudgetExceeded, ValidationError
from .ffcore import (
    Basis,
    FieldContext,
    PolyZp,
    elem_to_vec,
    frobenius,
    make_extension_field,
    polynomial_basis,
    vec_to_elem,
)

#: Default ceiling on candidates examined by lp_commutant.
COMMUTANT_BUDGET = 2**20


@dataclass(frozen=True)
class LinearizedPoly:
    ctx: FieldContext
    coeffs: tuple

    def __post_init__(self):
        ctx = self.ctx
        c = [ctx(a) for a in self.coeffs]
        if len(c) > ctx.r:
            raise ValidationError(f"at most {ctx.r} coefficients allowed, got {len(c)}")
        c += [ctx.zero] * (ctx.r - len(c))
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def identity(cls, ctx):
        return cls(ctx, (ctx.one,))

    @classmethod
    def zero(cls, ctx):
        return cls(ctx, ())

    @classmethod
    def monomial(cls, ctx, i, coeff=None):
        """coeff * x^{p^i} (index taken mod r)."""
        c = [ctx.zero] * ctx.r
        c[i % ctx.r] = ctx.one if coeff is None else ctx(coeff)
        return cls(ctx, c)

    @classmethod
    def from_prime_coeffs(cls, ctx, coeffs):
        """Member of the prime class from integers in Z_p."""
        return cls(ctx, tuple(ctx.prime(c) for c in coeffs))

    def __call__(self, x):
        return lp_eval(self, x)

    def __int__(self):
        q = self.ctx.order
        return sum(int(a) * q**i for i, a in enumerate(self.coeffs))

    def in_prime_class(self) -> bool:
        return all(a.in_prime_field() for a in self.coeffs)

    def __str__(self):
        terms = []
        for i, a in enumerate(self.coeffs):
            if a:
                mono = "x" if i == 0 else f"x^({self.ctx.p}^{i})"
                terms.append(mono if a == self.ctx.one else f"{int(a)}*{mono}")
        return " + ".join(reversed(terms)) or "0"


def _same_ctx(L1, L2):
    if L1.ctx != L2.ctx:
        raise ValidationError("linearized polynomials over different fields")


def lp_eval(L: LinearizedPoly, x):
    ctx = L.ctx
    x = ctx(x)
    acc = ctx.zero
    xi = x
    for a in L.coeffs:
        if a:
            acc = acc + a * xi
        xi = xi ** ctx.p
    return acc


def lp_compose(L1: LinearizedPoly, L2: LinearizedPoly) -> LinearizedPoly:
    """L1 o L2, reduced modulo x^{p^r} - x.

    Coefficient k is sum over i + j = k (mod r) of A_i * B_j^{p^i}.
    """
    _same_ctx(L1, L2)
    ctx = L1.ctx
    r = ctx.r
    out = [ctx.zero] * r
    for i, a in enumerate(L1.coeffs):
        if not a:
            continue
        for j, b in enumerate(L2.coeffs):
            if b:
                out[(i + j) % r] = out[(i + j) % r] + a * frobenius(ctx, b, i)
    return LinearizedPoly(ctx, out)


def lp_power(L: LinearizedPoly, n: int) -> LinearizedPoly:
    """n-fold composition of L with itself (n = 0 gives the identity)."""
    result = LinearizedPoly.identity(L.ctx)
    base = L
    while n:
        if n & 1:
            result = lp_compose(result, base)
        base = lp_compose(base, base)
        n >>= 1
    return result


def lp_matrix(L: LinearizedPoly, B: Basis = None):
    """Matrix over Z_p of L in basis B; column j holds the coordinates of L(alpha_j)."""
    B = B or polynomial_basis(L.ctx)
    if B.ctx != L.ctx:
        raise ValidationError("basis and polynomial over different fields")
    cols = [elem_to_vec(lp_eval(L, a), B) for a in B.vectors]
    return tuple(zip(*cols))


def _solve_over_field(ctx, rows, rhs):
    """Solve rows * u = rhs over GF(p^r) for a square nonsingular system."""
    n = len(rows)
    A = [list(row) + [b] for row, b in zip(rows, rhs)]
    for c in range(n):
        piv = next(i for i in range(c, n) if A[i][c])
        A[c], A[piv] = A[piv], A[c]
        inv = A[c][c].inverse()
        A[c] = [x * inv for x in A[c]]
        for i in range(n):
            if i != c and A[i][c]:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return [A[i][n] for i in range(n)]


def lp_from_matrix(M, B: Basis) -> LinearizedPoly:
    """The unique linearized polynomial whose matrix in basis B is M.

    Solves sum_i A_i alpha_j^{p^i} = T(alpha_j) for j = 1..r; the Moore matrix
    (alpha_j^{p^i}) is nonsingular because the alpha_j are independent.
    """
    ctx = B.ctx
    r = ctx.r
    if len(M) != r or any(len(row) != r for row in M):
        raise ValidationError(f"matrix must be {r}x{r}")
    images = [vec_to_elem([M[i][j] % ctx.p for i in range(r)], B) for j in range(r)]
    moore = [[frobenius(ctx, a, i) for i in range(r)] for a in B.vectors]
    return LinearizedPoly(ctx, _solve_over_field(ctx, moore, images))


@dataclass(frozen=True)
class Subspace:
    """Z_p-subspace of GF(p^r), basis vectors in polynomial-basis coordinates."""

    ctx: FieldContext
    basis_vectors: tuple

    @property
    def dimension(self):
        return len(self.basis_vectors)

    def __len__(self):
        return self.ctx.p**self.dimension

    def elements(self):
        ctx = self.ctx
        for lam in itertools.product(range(ctx.p), repeat=self.dimension):
            v = [0] * ctx.r
            for c, b in zip(lam, self.basis_vectors):
                v = [(x + c * y) % ctx.p for x, y in zip(v, b)]
            yield ctx.element(v)

    def __contains__(self, x):
        x = self.ctx(x)
        rows = [list(b) for b in self.basis_vectors]
        return _linalg.rank(rows + [list(x.coords)], self.ctx.p) == self.dimension


def lp_kernel(L: LinearizedPoly) -> Subspace:
    M = lp_matrix(L, polynomial_basis(L.ctx))
    return Subspace(L.ctx, tuple(_linalg.nullspace(M, L.ctx.p)))


def lp_is_invertible(L: LinearizedPoly) -> bool:
    return _linalg.rank(lp_matrix(L), L.ctx.p) == L.ctx.r


def quadratic_invertibility(ctx: FieldContext, A, B) -> bool:
    """Sufficient test for Ax^p + Bx to be a bijection on GF(p^2): A^{p+1} != B^{p+1}.

    Only the forward implication holds; lp_is_invertible is authoritative.
    """
    if ctx.r != 2:
        raise ValidationError(f"quadratic_invertibility needs r = 2, got r = {ctx.r}")
    e = ctx.p + 1
    return ctx(A) ** e != ctx(B) ** e


def associate(L: LinearizedPoly) -> PolyZp:
    """sum A_i x^{p^i} -> sum A_i x^i, for L with coefficients in Z_p."""
    if not L.in_prime_class():
        raise ValidationError("associate is only defined for coefficients in the prime field")
    return PolyZp(L.ctx.p, tuple(a.coords[0] for a in L.coeffs))


def lp_order(L: LinearizedPoly):
    """Least n >= 1 with l(x)^n = 1 mod (x^r - 1, p), or None if none exists.

    l is the associate of L.  The power sequence lives in a set of size
    p^r, so after that many steps without hitting 1 there is no order.
    """
    ctx = L.ctx
    p, r = ctx.p, ctx.r
    l = associate(L)
    mod = PolyZp(p, (-1,) + (0,) * (r - 1) + (1,))
    one = PolyZp(p, (1,))
    base = l % mod
    cur = base
    for n in range(1, p**r + 1):
        if cur == one:
            return n
        cur = cur * base % mod
    return None


def composition_order(L: LinearizedPoly, bound=None):
    """Least n >= 1 with L^n the identity map, by repeated composition."""
    ident = LinearizedPoly.identity(L.ctx)
    bound = bound or L.ctx.order**L.ctx.r
    cur = L
    for n in range(1, bound + 1):
        if cur == ident:
            return n
        cur = lp_compose(cur, L)
    return None


def prime_class(ctx: FieldContext):
    """All p^r linearized polynomials with coefficients in Z_p."""
    return [LinearizedPoly.from_prime_coeffs(ctx, c[::-1])
            for c in itertools.product(range(ctx.p), repeat=ctx.r)]


def all_linearized(ctx: FieldContext):
    """All (p^r)^r linearized polynomials over ctx, in encoding order."""
    elems = list(ctx.elements())
    for c in itertools.product(elems, repeat=ctx.r):
        yield LinearizedPoly(ctx, c[::-1])


def lp_commutant(L: LinearizedPoly, candidates=None, budget=COMMUTANT_BUDGET):
    """All L' (among candidates, default every linearized polynomial) with L o L' = L' o L."""
    ctx = L.ctx
    if candidates is None:
        total = ctx.order**ctx.r
        if total > budget:
            raise BudgetExceeded(f"{total} linearized polynomials exceed the budget {budget}")
        candidates = all_linearized(ctx)
    return [M for M in candidates if lp_compose(L, M) == lp_compose(M, L)]


def is_circulant(M) -> bool:
    r = len(M)
    return all(M[i][j] == M[(i + 1) % r][(j + 1) % r] for i in range(r) for j in range(r))


def to_json(L: LinearizedPoly) -> dict:
    ctx = L.ctx
    return {
        "p": ctx.p,
        "r": ctx.r,
        "modulus": list(ctx.modulus[i] for i in range(ctx.r + 1)),
        "coeffs": [list(a.coords) for a in L.coeffs],
    }


def from_json(obj: dict) -> LinearizedPoly:
    try:
        ctx = make_extension_field(int(obj["p"]), int(obj["r"]), obj.get("modulus"))
        coeffs = obj["coeffs"]
    except KeyError as e:
        raise ValueError(f"linearized polynomial JSON is missing field {e}") from None
    return LinearizedPoly(ctx, tuple(ctx.element(c) if isinstance(c, list) else ctx.from_int(c) for c in coeffs))
