"""Linear systems over Z_{p^n}: matrix orders and digit-bijection conjugation.

The order of an invertible A mod p^n is found by lifting: e = order of A mod
p, then B = A^e is congruent to I mod p^beta and its order is a power of p.
"""

from __future__ import annotations

import dataclasses
import itertools
import math
from dataclasses import dataclass, field

from .errors import ValidationError
from .fds import FunctionTable, StateSpace
from .ffcore import ModMatrix, PolyZp


def gl_order(dim, p, n):
    """|GL(dim, Z_{p^n})|."""
    q = p**dim
    return p ** ((n - 1) * dim * dim) * math.prod(q - p**i for i in range(dim))


def matrix_order_direct(A: ModMatrix):
    """Least t >= 1 with A^t = I mod p^n, or None when A is singular mod p."""
    if not A.is_invertible():
        return None
    bound = gl_order(A.dim, A.p, A.n)
    cur = A
    for t in range(1, bound + 1):
        if cur.is_identity():
            return t
        cur = cur @ A
    raise AssertionError("order exceeded |GL|")  # pragma: no cover


def _poly_matrix_det(M, p):
    """Determinant of a square matrix of PolyZp by cofactor expansion."""
    n = len(M)
    if n == 1:
        return M[0][0]
    total = PolyZp(p)
    for j in range(n):
        if M[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * _poly_matrix_det(minor, p)
        total = total + term if j % 2 == 0 else total - term
    return total


def characteristic_polynomial_mod_p(A: ModMatrix) -> PolyZp:
    """det(xI - A) over Z_p."""
    p = A.p
    M = [[PolyZp(p, ((-a) % p, int(i == j))) for j, a in enumerate(row)] for i, row in enumerate(A.entries)]
    return _poly_matrix_det(M, p)


def poly_at_matrix(f: PolyZp, A: ModMatrix) -> ModMatrix:
    """f(A), Horner-style, in the ring of A."""
    acc = ModMatrix(A.p, A.n, [[0] * A.dim] * A.dim)
    for c in reversed(f.coeffs):
        rows = [list(row) for row in (acc @ A).entries]
        for i in range(A.dim):
            rows[i][i] += c
        acc = ModMatrix(A.p, A.n, rows)
    return acc


def minimal_polynomial_mod_p(A: ModMatrix) -> PolyZp:
    """Least-degree monic m with m(A) = 0 mod p.

    Candidates are the monic divisors of the characteristic polynomial,
    tried in degree order and then encoding order.
    """
    Ap = A.reduce(1)
    chi = characteristic_polynomial_mod_p(Ap)
    zero = ModMatrix(Ap.p, 1, [[0] * Ap.dim] * Ap.dim)
    for d in range(1, chi.degree + 1):
        for m in PolyZp.monic_of_degree(A.p, d):
            if (chi % m).is_zero() and poly_at_matrix(m, Ap) == zero:
                return m
    raise AssertionError("Cayley-Hamilton failed")  # pragma: no cover


def congruence_level(B: ModMatrix) -> int:
    """Largest k <= n with B = I mod p^k (0 if not even mod p)."""
    k = 0
    while k < B.n and B.is_identity(k + 1):
        k += 1
    return k


@dataclass(frozen=True)
class OrderCertificate:
    e: int
    minimal_poly: PolyZp
    power: ModMatrix  # A^e mod p^n
    beta: int
    power_order: int  # order of A^e mod p^n, a power of p
    total_order: int
    method: str = "lifted"
    levels: tuple = ()  # congruence level after each p-th power step
    direct_order: int = None

    def to_json(self):
        return {
            "p": self.power.p,
            "n": self.power.n,
            "e": self.e,
            "minimal_poly_mod_p": list(self.minimal_poly.coeffs),
            "minimal_poly_str": str(self.minimal_poly),
            "A_pow_e": [list(r) for r in self.power.entries],
            "beta": self.beta,
            "order_of_A_pow_e": self.power_order,
            "levels": list(self.levels),
            "totalOrder": self.total_order,
            "method": self.method,
            "direct_order": self.direct_order,
        }


def matrix_order_lifted(A: ModMatrix, verify=False) -> OrderCertificate:
    """Order of A mod p^n by lifting from its order mod p.

    With B = A^e and beta its congruence level: if beta >= n the order is e;
    for p odd or beta >= 2 every p-th power raises the level by exactly one,
    giving e * p^(n - beta); for p = 2, beta = 1 the level can jump, so B is
    squared step by step until it reaches I mod 2^n.
    """
    p, n = A.p, A.n
    if not A.is_invertible():
        raise ValidationError("matrix is singular mod p; it has no multiplicative order")
    Ap = A.reduce(1)
    e = matrix_order_direct(Ap)
    B = A**e
    beta = congruence_level(B)
    assert beta >= 1
    levels = [beta]
    if beta >= n:
        k = 0
    elif p != 2 or beta >= 2:
        k = n - beta
    else:
        k = 0
        cur, level = B, beta
        while level < n:
            cur = cur @ cur
            k += 1
            level = congruence_level(cur)
            levels.append(level)
    total = e * p**k
    cert = OrderCertificate(e, minimal_polynomial_mod_p(A), B, beta, p**k, total, "lifted", tuple(levels))
    if verify:
        d = matrix_order_direct(A)
        if d != total:
            raise AssertionError(f"lifted order {total} disagrees with direct order {d}")
        cert = dataclasses.replace(cert, direct_order=d)
    return cert


def parse_matrix_text(text):
    """Parse "p n r; row; row; ..." into a ModMatrix."""
    parts = [s.strip() for s in text.strip().split(";") if s.strip()]
    try:
        p, n, r = (int(x) for x in parts[0].replace(",", " ").split())
        rows = [[int(x) for x in row.replace(",", " ").split()] for row in parts[1:]]
    except ValueError:
        raise ValueError(f"cannot parse {text!r}; expected 'p n r; row; row; ...'") from None
    if len(rows) != r or any(len(row) != r for row in rows):
        raise ValidationError(f"expected {r} rows of {r} entries")
    return ModMatrix(p, n, rows)


def linear_system(A: ModMatrix) -> FunctionTable:
    """The map x -> A x on Z_{p^n}^r as a function table."""
    space = StateSpace.vectors(A.modulus, A.dim)
    return FunctionTable.from_function(space, A.apply)


# ---------------------------------------------------------------------------
# Bijections Z_p^n <-> Z_{p^n}


@dataclass(frozen=True)
class Bijection:
    """g : Z_p^n -> Z_{p^n}; table[i] = g(digits of i, least significant first)."""

    p: int
    n: int
    table: tuple
    _inv: tuple = field(default=(), init=False, repr=False, compare=False)

    def __post_init__(self):
        N = self.p**self.n
        t = tuple(int(x) for x in self.table)
        if len(t) != N or sorted(t) != list(range(N)):
            raise ValidationError(f"g is not a bijection onto Z_{N}")
        inv = [0] * N
        for i, y in enumerate(t):
            inv[y] = i
        object.__setattr__(self, "table", t)
        object.__setattr__(self, "_inv", tuple(inv))

    @classmethod
    def digits(cls, p, n):
        """Base-p expansion, least significant digit first."""
        return cls(p, n, range(p**n))

    @classmethod
    def random(cls, p, n, rng):
        t = list(range(p**n))
        rng.shuffle(t)
        return cls(p, n, t)

    def _index(self, digits):
        return sum(d * self.p**k for k, d in enumerate(digits))

    def __call__(self, digits):
        return self.table[self._index(digits)]

    def inverse(self, y):
        i = self._inv[y]
        return tuple((i // self.p**k) % self.p for k in range(self.n))


def conjugate_system(f: FunctionTable, g: Bijection) -> FunctionTable:
    """fbar = (g^r)^{-1} o f o g^r, a system over Z_p^{nr}.

    Coordinate j of a Z_{p^n}^r state corresponds to digits j*n .. j*n+n-1.
    """
    sp = f.space
    if sp.kind != "Zm_vectors" or sp.m != g.p**g.n:
        raise ValidationError(f"system over {sp} does not match g onto Z_{g.p ** g.n}")
    n, r = g.n, sp.n

    def gr(v):
        return tuple(g(v[j * n:(j + 1) * n]) for j in range(r))

    def gr_inv(w):
        return tuple(itertools.chain.from_iterable(g.inverse(y) for y in w))

    out = StateSpace.vectors(g.p, n * r)
    return FunctionTable.from_function(out, lambda v: gr_inv(f(gr(v))))
