"""MS-orbits of commuting matrices on Z_p^n.

For M and S with MS = SM, the group {M^a S^b} acts on Z_p^n; its orbits are
the MS-orbits.  A vector x has length k when k is the least positive
integer with M^k x in the S-orbit of x.  search_min_orbits looks for the
compatible M with fewest orbits by exhaustive enumeration.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .errors import BudgetExceeded, ValidationError
from .ffcore import ModMatrix, all_vectors

#: Default ceiling on candidate matrices examined by search_min_orbits.
SEARCH_BUDGET = 2**20


def _check_pair(S, M):
    if (S.p, S.n) != (M.p, M.n) or S.n != 1:
        raise ValidationError("S and M must both be matrices over the same Z_p")
    if S.dim != M.dim:
        raise ValidationError(f"dimension mismatch {S.dim} vs {M.dim}")


def check_compat(S: ModMatrix, M: ModMatrix) -> bool:
    """MS = SM and M^t S = S M^t mod p."""
    _check_pair(S, M)
    return M @ S == S @ M and M.T @ S == S @ M.T


def _encode(v, p):
    return sum(x * p**k for k, x in enumerate(v))


def s_orbit(x, S):
    x = tuple(x)
    seen = [x]
    cur = S.apply(x)
    while cur != x:
        seen.append(cur)
        cur = S.apply(cur)
    return seen


def ms_orbit_length(x, S: ModMatrix, M: ModMatrix) -> int:
    """Least k >= 1 with M^k x = S^i x for some i.

    Both M and S are invertible, so x lies on an M-cycle and the search
    terminates within the cycle length.
    """
    targets = set(s_orbit(x, S))
    cur = M.apply(x)
    k = 1
    while cur not in targets:
        cur = M.apply(cur)
        k += 1
    return k


@dataclass(frozen=True)
class Orbit:
    representative: tuple
    members: tuple
    length: int

    @property
    def size(self):
        return len(self.members)

    @property
    def is_zero(self):
        return not any(self.representative)


@dataclass(frozen=True)
class OrbitReport:
    p: int
    dim: int
    orbits: tuple

    @property
    def orbit_count(self):
        return len(self.orbits)

    @property
    def nonzero_orbit_count(self):
        return sum(1 for o in self.orbits if not o.is_zero)

    def count(self, include_zero=True):
        return self.orbit_count if include_zero else self.nonzero_orbit_count

    def length_histogram(self):
        return dict(sorted(Counter(o.length for o in self.orbits).items()))

    def to_json(self, include_zero=True):
        orbits = [o for o in self.orbits if include_zero or not o.is_zero]
        return {
            "p": self.p,
            "dim": self.dim,
            "orbitCount": len(orbits),
            "includeZero": include_zero,
            "lengthHistogram": {str(k): v for k, v in sorted(Counter(o.length for o in orbits).items())},
            "orbits": [
                {"representative": list(o.representative), "size": o.size, "length": o.length,
                 "members": [list(v) for v in o.members]}
                for o in orbits
            ],
        }


def enumerate_ms_orbits(S: ModMatrix, M: ModMatrix) -> OrbitReport:
    if not check_compat(S, M):
        raise ValidationError("M and S do not satisfy MS = SM and M^t S = S M^t")
    if not (S.is_invertible() and M.is_invertible()):
        raise ValidationError("M and S must be invertible mod p")
    p, dim = S.p, S.dim
    seen = set()
    orbits = []
    for x in all_vectors(p, dim):
        if x in seen:
            continue
        members = {x}
        frontier = [x]
        while frontier:
            v = frontier.pop()
            for w in (M.apply(v), S.apply(v)):
                if w not in members:
                    members.add(w)
                    frontier.append(w)
        seen |= members
        ordered = tuple(sorted(members, key=lambda v: _encode(v, p)))
        orbits.append(Orbit(ordered[0], ordered, ms_orbit_length(ordered[0], S, M)))
    return OrbitReport(p, dim, tuple(orbits))


@dataclass(frozen=True)
class SearchResult:
    M: ModMatrix
    report: OrbitReport
    examined: int
    complete: bool


def search_min_orbits(S: ModMatrix, budget=SEARCH_BUDGET, include_zero=True, strict=False) -> SearchResult:
    """Compatible invertible M minimising the orbit count.

    Candidates are visited in row-major encoding order and only a strictly
    better count replaces the incumbent, so ties go to the least encoding.
    When p^(n^2) exceeds the budget only the first ``budget`` candidates are
    examined and the result is flagged incomplete (or BudgetExceeded is
    raised when ``strict``).
    """
    p, dim = S.p, S.dim
    if S.n != 1:
        raise ValidationError("S must be a matrix over Z_p")
    total = p ** (dim * dim)
    complete = total <= budget
    if not complete and strict:
        raise BudgetExceeded(f"{total} candidate matrices exceed the budget {budget}")
    best = None
    examined = 0
    for k in range(min(total, budget)):
        examined += 1
        M = ModMatrix.from_int(p, 1, dim, k)
        if not M.is_invertible() or not check_compat(S, M):
            continue
        rep = enumerate_ms_orbits(S, M)
        c = rep.count(include_zero)
        if best is None or c < best[1].count(include_zero):
            best = (M, rep)
    if best is None:
        raise BudgetExceeded("no compatible invertible M found within the budget")
    return SearchResult(best[0], best[1], examined, complete)


def to_dot(report: OrbitReport, S, M, name="msorbits") -> str:
    """One cluster per orbit; solid edges for M, dashed for S."""
    def node(v):
        return "v" + "_".join(str(x) for x in v)

    lines = [f"digraph {name} {{"]
    for i, o in enumerate(report.orbits):
        lines.append(f"  subgraph cluster_{i} {{")
        lines.append(f'    label="orbit {i}: size {o.size}, length {o.length}";')
        for v in o.members:
            lines.append(f'    {node(v)} [label="({",".join(map(str, v))})"];')
        lines.append("  }")
    for o in report.orbits:
        for v in o.members:
            lines.append(f"  {node(v)} -> {node(M.apply(v))};")
            w = S.apply(v)
            if w != v:
                lines.append(f"  {node(v)} -> {node(w)} [style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"
