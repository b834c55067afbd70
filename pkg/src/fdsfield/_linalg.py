"""Dense linear algebra over Z_p (p prime) on plain nested lists.

Matrices are row-major sequences of rows.  Nothing here checks that p is
prime; callers guarantee it.
"""


def _echelon(M, p):
    """Reduced row echelon form mod p. Returns (rows, pivot_columns)."""
    A = [[x % p for x in row] for row in M]
    nrows = len(A)
    ncols = len(A[0]) if A else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], -1, p)
        A[r] = [x * inv % p for x in A[r]]
        for i in range(nrows):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [(x - f * y) % p for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return A, pivots


def rank(M, p):
    return len(_echelon(M, p)[1])


def det(M, p):
    """Determinant mod p by elimination."""
    A = [[x % p for x in row] for row in M]
    n = len(A)
    d = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            d = -d
        d = d * A[c][c] % p
        inv = pow(A[c][c], -1, p)
        for i in range(c + 1, n):
            if A[i][c]:
                f = A[i][c] * inv % p
                A[i] = [(x - f * y) % p for x, y in zip(A[i], A[c])]
    return d % p


def inverse(M, p):
    n = len(M)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(M)]
    R, pivots = _echelon(aug, p)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular mod %d" % p)
    return [row[n:] for row in R]


def nullspace(M, p):
    """Basis of {v : M v = 0} mod p, one vector per free column."""
    ncols = len(M[0])
    R, pivots = _echelon(M, p)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row, pc in zip(R, pivots):
            v[pc] = -row[f] % p
        basis.append(tuple(v))
    return basis


def matvec(M, v, mod):
    return tuple(sum(a * b for a, b in zip(row, v)) % mod for row in M)


def matmul(A, B, mod):
    Bt = list(zip(*B))
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) % mod for col in Bt) for row in A)
