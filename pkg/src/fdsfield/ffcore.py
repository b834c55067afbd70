"""Exact arithmetic in Z_p, Z_{p^n} and GF(p^r).

Elements of GF(p^r) are coordinate tuples in the polynomial basis
1, x, ..., x^{r-1} modulo a monic irreducible modulus.  Every element also
has an integer encoding sum(c_i * p^i), which fixes the enumeration order
used throughout the package.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property

from . import _linalg
from .errors import ValidationError

#: Largest modulus p^n accepted anywhere; keeps all residues in int32 range.
MAX_MODULUS = 2**31


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _check_prime(p):
    if not isinstance(p, int) or not is_prime(p):
        raise ValidationError(f"{p!r} is not a prime")


@dataclass(frozen=True)
class PrimePower:
    p: int
    n: int = 1

    def __post_init__(self):
        _check_prime(self.p)
        if self.n < 1:
            raise ValidationError(f"exponent must be >= 1, got {self.n}")
        if self.p**self.n > MAX_MODULUS:
            raise ValidationError(f"{self.p}^{self.n} exceeds the exact-integer range 2^31")

    @property
    def modulus(self) -> int:
        return self.p**self.n


# ---------------------------------------------------------------------------
# Polynomials over Z_p


@dataclass(frozen=True)
class PolyZp:
    """Polynomial over Z_p, coefficients in ascending degree.

    The coefficient tuple is reduced mod p and stripped of trailing zeros on
    construction, so equal polynomials compare equal.
    """

    p: int
    coeffs: tuple = ()

    def __post_init__(self):
        c = [int(x) % self.p for x in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def from_int(cls, p, k):
        c = []
        while k:
            k, d = divmod(k, p)
            c.append(d)
        return cls(p, tuple(c))

    @classmethod
    def x(cls, p):
        return cls(p, (0, 1))

    @classmethod
    def monic_of_degree(cls, p, d):
        """All monic polynomials of degree d, in encoding order."""
        for k in range(p**d):
            yield cls.from_int(p, k + p**d)

    def __int__(self):
        return sum(c * self.p**i for i, c in enumerate(self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def _same(self, other):
        if isinstance(other, int):
            return PolyZp(self.p, (other,))
        if not isinstance(other, PolyZp) or other.p != self.p:
            raise TypeError("polynomials over different prime fields")
        return other

    def __add__(self, other):
        other = self._same(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return PolyZp(self.p, tuple(self[i] + other[i] for i in range(n)))

    __radd__ = __add__

    def __neg__(self):
        return PolyZp(self.p, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-self._same(other))

    def __rsub__(self, other):
        return self._same(other) - self

    def __mul__(self, other):
        other = self._same(other)
        if not self.coeffs or not other.coeffs:
            return PolyZp(self.p)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return PolyZp(self.p, tuple(out))

    __rmul__ = __mul__

    def __divmod__(self, other):
        other = self._same(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        p = self.p
        rem = list(self.coeffs)
        dd = other.degree
        inv = pow(other.coeffs[-1], -1, p)
        q = [0] * max(len(rem) - dd, 0)
        for k in range(len(rem) - 1, dd - 1, -1):
            c = rem[k] * inv % p
            if c:
                q[k - dd] = c
                for j, b in enumerate(other.coeffs):
                    rem[k - dd + j] = (rem[k - dd + j] - c * b) % p
        return PolyZp(p, tuple(q)), PolyZp(p, tuple(rem[:dd]))

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def pow_mod(self, e, mod):
        result = PolyZp(self.p, (1,)) % mod
        base = self % mod
        while e:
            if e & 1:
                result = result * base % mod
            base = base * base % mod
            e >>= 1
        return result

    def monic(self):
        inv = pow(self.coeffs[-1], -1, self.p)
        return PolyZp(self.p, tuple(c * inv for c in self.coeffs))

    def gcd(self, other):
        a, b = self, self._same(other)
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % self.p
        return acc

    def is_irreducible(self) -> bool:
        """Ben-Or test: no factor of degree i divides x^{p^i} - x, i <= deg/2."""
        d = self.degree
        if d < 1:
            return False
        if d == 1:
            return True
        f = self.monic()
        x = PolyZp.x(self.p)
        h = x
        for _ in range(d // 2):
            h = h.pow_mod(self.p, f)
            if f.gcd(h - x).degree > 0:
                return False
        return True

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if not mono:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(terms)


def canonical_irreducible(p: int, r: int) -> PolyZp:
    """Monic irreducible of degree r with the least integer encoding."""
    _check_prime(p)
    for f in PolyZp.monic_of_degree(p, r):
        if f.is_irreducible():
            return f
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


# ---------------------------------------------------------------------------
# GF(p^r)


@dataclass(frozen=True)
class FieldContext:
    p: int
    r: int
    modulus: PolyZp

    def __post_init__(self):
        _check_prime(self.p)
        if self.r < 1:
            raise ValidationError(f"degree must be >= 1, got {self.r}")
        if self.p**self.r > MAX_MODULUS:
            raise ValidationError(f"GF({self.p}^{self.r}) is beyond the supported range")
        m = self.modulus
        if m.p != self.p or m.degree != self.r or not m.is_monic():
            raise ValidationError(f"modulus {m} is not monic of degree {self.r} over Z_{self.p}")
        if not m.is_irreducible():
            raise ValidationError(f"modulus {m} is reducible over Z_{self.p}")

    @property
    def order(self) -> int:
        """Number of elements p^r."""
        return self.p**self.r

    element_count = order

    @cached_property
    def _reduction(self):
        # x^k mod modulus for k = r .. 2r-2, as coordinate lists
        p, r = self.p, self.r
        tail = [(-c) % p for c in self.modulus.coeffs[:r]]  # x^r = tail
        rows = []
        cur = tail
        for _ in range(max(r - 1, 0)):
            rows.append(cur)
            top = cur[-1]
            nxt = [0] + cur[:-1]
            cur = [(a + top * b) % p for a, b in zip(nxt, tail)]
        return rows

    # element constructors
    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.ctx != self:
                raise ValidationError("element belongs to a different field")
            return value
        if isinstance(value, int):
            return self.from_int(value)
        return self.element(value)

    def element(self, coords) -> "FieldElement":
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.r or any(not 0 <= c < self.p for c in coords):
            raise ValidationError(f"bad coordinates {coords} for GF({self.p}^{self.r})")
        return FieldElement(self, coords)

    def from_int(self, k: int) -> "FieldElement":
        if not 0 <= k < self.order:
            raise ValidationError(f"encoding {k} out of range for GF({self.p}^{self.r})")
        c = []
        for _ in range(self.r):
            k, d = divmod(k, self.p)
            c.append(d)
        return FieldElement(self, tuple(c))

    def prime(self, c: int) -> "FieldElement":
        """Embed c in Z_p as an element of the prime subfield."""
        return FieldElement(self, (c % self.p,) + (0,) * (self.r - 1))

    @property
    def zero(self):
        return self.prime(0)

    @property
    def one(self):
        return self.prime(1)

    @property
    def generator(self):
        """The class of x, i.e. the root of the modulus (r >= 2)."""
        if self.r == 1:
            return self.from_int((-self.modulus.coeffs[0]) % self.p)
        return self.from_int(self.p)

    def elements(self):
        for k in range(self.order):
            yield self.from_int(k)

    # raw coordinate arithmetic
    def _add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def _mul(self, a, b):
        p, r = self.p, self.r
        prod = [0] * (2 * r - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        out = prod[:r]
        for k, c in enumerate(prod[r:]):
            if c:
                red = self._reduction[k]
                for i in range(r):
                    out[i] += c * red[i]
        return tuple(x % p for x in out)

    def spec(self) -> str:
        """Field spec string "GF(p^r)/c0,...,cr"."""
        return f"GF({self.p}^{self.r})/" + ",".join(str(self.modulus[i]) for i in range(self.r + 1))

    def __repr__(self):
        return f"FieldContext({self.spec()})"


@dataclass(frozen=True, eq=True)
class FieldElement:
    ctx: FieldContext = field(repr=False)
    coords: tuple

    def __int__(self):
        p = self.ctx.p
        return sum(c * p**i for i, c in enumerate(self.coords))

    def __index__(self):
        return int(self)

    def __hash__(self):
        return hash(self.coords)

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.ctx != self.ctx:
                raise ValidationError("operands belong to different fields")
            return other
        if isinstance(other, int):
            return self.ctx.prime(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.ctx, self.ctx._add(self.coords, other.coords))

    __radd__ = __add__

    def __neg__(self):
        p = self.ctx.p
        return FieldElement(self.ctx, tuple(-c % p for c in self.coords))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.ctx, self.ctx._mul(self.coords, other.coords))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.ctx.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self):
        if not any(self.coords):
            raise ZeroDivisionError("inverse of zero in " + repr(self.ctx))
        return self ** (self.ctx.order - 2)

    def __truediv__(self, other):
        other = self._coerce(other)
        return self * other.inverse()

    def __bool__(self):
        return any(self.coords)

    def in_prime_field(self) -> bool:
        return not any(self.coords[1:])

    def __repr__(self):
        return f"GF{self.coords}"


def make_extension_field(p: int, r: int, modulus=None) -> FieldContext:
    """Build GF(p^r).

    With no modulus the canonical one is used: the monic irreducible of
    degree r whose coefficient encoding sum(c_i p^i) is smallest.  A supplied
    modulus (PolyZp or ascending coefficient sequence) is validated.
    """
    _check_prime(p)
    if r < 1:
        raise ValidationError(f"degree must be >= 1, got {r}")
    if p**r > MAX_MODULUS:
        raise ValidationError(f"GF({p}^{r}) is beyond the supported range")
    if modulus is None:
        modulus = canonical_irreducible(p, r)
    elif not isinstance(modulus, PolyZp):
        modulus = PolyZp(p, tuple(modulus))
    return FieldContext(p, r, modulus)


def field_add(ctx, a, b):
    return ctx(a) + ctx(b)


def field_mul(ctx, a, b):
    return ctx(a) * ctx(b)


def field_neg(ctx, a):
    return -ctx(a)


def field_inv(ctx, a):
    return ctx(a).inverse()


def field_pow(ctx, a, e):
    return ctx(a) ** e


def frobenius(ctx, a, i=1):
    """a^{p^i}. Only i mod r matters since x^{p^r} = x."""
    return ctx(a) ** (ctx.p ** (i % ctx.r))


_SPEC_RE = re.compile(r"^\s*GF\(\s*(\d+)\s*(?:\^\s*(\d+))?\s*\)\s*(?:/\s*([\d,\s]+))?\s*$")


def parse_field_spec(text: str) -> FieldContext:
    """Parse "GF(p^r)" or "GF(p^r)/c0,c1,...,cr" (modulus ascending)."""
    m = _SPEC_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse field spec {text!r}; expected GF(p^r)/c0,...,cr")
    p = int(m.group(1))
    r = int(m.group(2) or 1)
    modulus = None
    if m.group(3):
        modulus = [int(c) for c in m.group(3).split(",") if c.strip()]
        if len(modulus) != r + 1:
            raise ValidationError(f"modulus needs {r + 1} coefficients, got {len(modulus)}")
    return make_extension_field(p, r, modulus)


# ---------------------------------------------------------------------------
# Bases and coordinate maps


@dataclass(frozen=True)
class Basis:
    ctx: FieldContext
    vectors: tuple
    kind: str = "custom"
    _inv: tuple = field(default=(), init=False, repr=False, compare=False)

    def __post_init__(self):
        ctx = self.ctx
        vecs = tuple(ctx(v) for v in self.vectors)
        object.__setattr__(self, "vectors", vecs)
        if self.kind not in ("polynomial", "normal", "custom"):
            raise ValidationError(f"unknown basis kind {self.kind!r}")
        if len(vecs) != ctx.r:
            raise ValidationError(f"basis needs {ctx.r} vectors, got {len(vecs)}")
        cols = self.matrix
        try:
            inv = _linalg.inverse(cols, ctx.p)
        except ZeroDivisionError:
            raise ValidationError("basis vectors are linearly dependent over Z_p") from None
        object.__setattr__(self, "_inv", tuple(tuple(row) for row in inv))
        if self.kind == "normal":
            a = vecs[0]
            for i, v in enumerate(vecs):
                if frobenius(ctx, a, i) != v:
                    raise ValidationError("normal basis must be the Frobenius conjugates of its first vector")

    @property
    def matrix(self):
        """r x r matrix whose column j is the coordinate vector of alpha_j."""
        return tuple(zip(*(v.coords for v in self.vectors)))

    def __iter__(self):
        return iter(self.vectors)

    def __len__(self):
        return len(self.vectors)


def polynomial_basis(ctx: FieldContext) -> Basis:
    r = ctx.r
    return Basis(ctx, tuple(ctx.element([int(i == j) for i in range(r)]) for j in range(r)), "polynomial")


def conjugates(ctx, a):
    return tuple(frobenius(ctx, a, i) for i in range(ctx.r))


def find_normal_basis(ctx: FieldContext) -> Basis:
    """First element, in encoding order, whose Frobenius conjugates are independent."""
    for a in ctx.elements():
        conj = conjugates(ctx, a)
        if _linalg.rank([c.coords for c in conj], ctx.p) == ctx.r:
            return Basis(ctx, conj, "normal")
    raise AssertionError("finite fields always have a normal basis")  # pragma: no cover


def vec_to_elem(v, B: Basis) -> FieldElement:
    ctx = B.ctx
    if len(v) != ctx.r:
        raise ValidationError(f"vector length {len(v)} != {ctx.r}")
    return FieldElement(ctx, _linalg.matvec(B.matrix, v, ctx.p))


def elem_to_vec(a, B: Basis) -> tuple:
    ctx = B.ctx
    return _linalg.matvec(B._inv, ctx(a).coords, ctx.p)


# ---------------------------------------------------------------------------
# Matrices over Z_{p^n}


@dataclass(frozen=True)
class ModMatrix:
    p: int
    n: int
    entries: tuple

    def __post_init__(self):
        mod = PrimePower(self.p, self.n).modulus
        rows = tuple(tuple(int(x) % mod for x in row) for row in self.entries)
        if not rows or any(len(row) != len(rows) for row in rows):
            raise ValidationError("matrix must be square and non-empty")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def identity(cls, p, n, dim):
        return cls(p, n, tuple(tuple(int(i == j) for j in range(dim)) for i in range(dim)))

    @classmethod
    def parse(cls, p, n, text):
        """Rows separated by ';', entries by ',' e.g. "0,5;1,2"."""
        try:
            rows = [[int(x) for x in row.split(",")] for row in text.strip().split(";") if row.strip()]
        except ValueError:
            raise ValueError(f"cannot parse matrix {text!r}; expected rows like '0,5;1,2'") from None
        return cls(p, n, rows)

    @classmethod
    def from_int(cls, p, n, dim, k):
        """Inverse of the row-major encoding sum(e_k * (p^n)^k)."""
        mod = p**n
        flat = []
        for _ in range(dim * dim):
            k, d = divmod(k, mod)
            flat.append(d)
        return cls(p, n, [flat[i * dim:(i + 1) * dim] for i in range(dim)])

    def __int__(self):
        mod = self.modulus
        return sum(x * mod**k for k, x in enumerate(v for row in self.entries for v in row))

    @property
    def dim(self):
        return len(self.entries)

    @property
    def modulus(self):
        return self.p**self.n

    def _check(self, other):
        if not isinstance(other, ModMatrix):
            raise TypeError("ModMatrix expected")
        if (other.p, other.n) != (self.p, self.n):
            raise ValidationError("matrices over different rings")
        if other.dim != self.dim:
            raise ValidationError(f"dimension mismatch {self.dim} vs {other.dim}")

    def __matmul__(self, other):
        self._check(other)
        return ModMatrix(self.p, self.n, _linalg.matmul(self.entries, other.entries, self.modulus))

    def __pow__(self, e):
        if e < 0:
            raise ValueError("negative matrix powers are not supported")
        result = ModMatrix.identity(self.p, self.n, self.dim)
        base = self
        while e:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result

    def apply(self, v):
        if len(v) != self.dim:
            raise ValidationError("vector length does not match matrix")
        return _linalg.matvec(self.entries, v, self.modulus)

    @property
    def T(self):
        return ModMatrix(self.p, self.n, tuple(zip(*self.entries)))

    def reduce(self, k):
        """The same matrix read modulo p^k, k <= n."""
        if not 1 <= k <= self.n:
            raise ValidationError(f"level {k} outside 1..{self.n}")
        return ModMatrix(self.p, k, self.entries)

    def is_identity(self, k=None):
        """True iff self == I mod p^k (default: the full modulus)."""
        mod = self.p ** (self.n if k is None else k)
        return all((x - (i == j)) % mod == 0 for i, row in enumerate(self.entries) for j, x in enumerate(row))

    def is_invertible(self):
        return _linalg.det(self.entries, self.p) != 0

    def __str__(self):
        return ";".join(",".join(str(x) for x in row) for row in self.entries)


def mat_mul(A: ModMatrix, B: ModMatrix) -> ModMatrix:
    return A @ B


def mat_pow(A: ModMatrix, e: int) -> ModMatrix:
    return A**e


def mat_identity(p, n, dim) -> ModMatrix:
    return ModMatrix.identity(p, n, dim)


def mat_is_identity(A: ModMatrix, k=None) -> bool:
    return A.is_identity(k)


def all_vectors(m, n):
    """Z_m^n in encoding order (least-significant coordinate first)."""
    for t in itertools.product(range(m), repeat=n):
        yield t[::-1]
