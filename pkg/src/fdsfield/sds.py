"""Permutation sequential dynamical systems over Z_m.

Vertices are numbered 1..n.  A local update at vertex a is given
extensionally: a table from the states of a's closed neighbourhood to the new
value of coordinate a.  The composed system applies the local updates in
schedule order, pi(1) first.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import LocalityError, ValidationError
from .fds import FunctionTable, StateSpace


@dataclass(frozen=True)
class DependencyGraph:
    n: int
    edges: frozenset = frozenset()

    def __post_init__(self):
        es = set()
        for e in self.edges:
            i, j = e
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise ValidationError(f"edge {e} has a vertex outside 1..{self.n}")
            es.add((min(i, j), max(i, j)))
        object.__setattr__(self, "edges", frozenset(es))

    @classmethod
    def complete(cls, n):
        return cls(n, frozenset(itertools.combinations(range(1, n + 1), 2)))

    @classmethod
    def path(cls, n):
        return cls(n, frozenset((i, i + 1) for i in range(1, n)))

    def neighbors(self, a):
        return {j if i == a else i for i, j in self.edges if a in (i, j)} - {a}

    def closed_neighborhood(self, a):
        return tuple(sorted(self.neighbors(a) | {a}))


@dataclass(frozen=True)
class LocalUpdate:
    """New value of coordinate ``vertex`` as a function of ``neighborhood``.

    ``rule`` maps each tuple of values on ``neighborhood`` (in that order) to
    an element of Z_m.
    """

    vertex: int
    neighborhood: tuple
    rule: dict = field(hash=False)

    @classmethod
    def from_function(cls, vertex, neighborhood, fn, m):
        """Tabulate fn(values_on_neighborhood) -> new value."""
        nb = tuple(neighborhood)
        rule = {vals: fn(vals) % m for vals in itertools.product(range(m), repeat=len(nb))}
        return cls(vertex, nb, rule)

    @classmethod
    def identity(cls, vertex, m):
        return cls.from_function(vertex, (vertex,), lambda v: v[0], m)

    def new_value(self, state, m):
        """Value written at ``vertex`` for a full state (0-based tuple)."""
        key = tuple(state[v - 1] for v in self.neighborhood)
        try:
            return self.rule[key] % m
        except KeyError:
            raise ValidationError(f"rule at vertex {self.vertex} undefined on {key}") from None

    def apply(self, state, m):
        s = list(state)
        s[self.vertex - 1] = self.new_value(state, m)
        return tuple(s)


@dataclass
class LocalityReport:
    vertex: int
    ok: bool = True
    violations: list = field(default_factory=list)

    def add(self, coord, msg):
        self.ok = False
        self.violations.append({"coordinate": coord, "reason": msg})


def validate_locality(G: DependencyGraph, u: LocalUpdate, m: int) -> LocalityReport:
    """Perturb every coordinate outside the closed neighbourhood and check the
    written value never changes.

    Writes are confined to ``vertex`` by construction of LocalUpdate.apply.
    """
    rep = LocalityReport(u.vertex)
    allowed = set(G.closed_neighborhood(u.vertex))
    others = [c for c in range(1, G.n + 1) if c not in allowed]
    bad = set()
    for state in itertools.product(range(m), repeat=G.n):
        try:
            out = u.apply(state, m)
        except ValidationError as e:
            rep.add(u.vertex, str(e))
            return rep
        base = out[u.vertex - 1]
        for c in others:
            if c in bad:
                continue
            for val in range(m):
                s = list(state)
                s[c - 1] = val
                if u.new_value(s, m) != base:
                    bad.add(c)
                    rep.add(c, f"vertex {u.vertex} reads non-neighbour coordinate {c}")
                    break
    rep.violations.sort(key=lambda v: v["coordinate"])
    return rep


def _check_schedule(pi, n):
    if sorted(pi) != list(range(1, n + 1)):
        raise ValidationError(f"schedule {list(pi)} is not a permutation of 1..{n}")


def compose_sds(G: DependencyGraph, locals_, schedule, m: int) -> FunctionTable:
    """Table of f = f_{pi(n)} o ... o f_{pi(1)} over Z_m^n."""
    n = G.n
    by_vertex = {}
    for u in locals_:
        if u.vertex in by_vertex:
            raise ValidationError(f"duplicate local update for vertex {u.vertex}")
        if not 1 <= u.vertex <= n:
            raise ValidationError(f"local update for unknown vertex {u.vertex}")
        by_vertex[u.vertex] = u
    missing = set(range(1, n + 1)) - set(by_vertex)
    if missing:
        raise ValidationError(f"missing local updates for vertices {sorted(missing)}")
    _check_schedule(schedule, n)
    for u in by_vertex.values():
        rep = validate_locality(G, u, m)
        if not rep.ok:
            raise LocalityError("; ".join(v["reason"] for v in rep.violations))

    order = [by_vertex[a] for a in schedule]
    space = StateSpace.vectors(m, n)

    def f(state):
        for u in order:
            state = u.apply(state, m)
        return state

    return FunctionTable.from_function(space, f)


def from_json(obj):
    """Parse the SDS JSON format into (graph, locals, schedule, m)."""
    try:
        m = int(obj["m"])
        n = int(obj["vertices"])
        G = DependencyGraph(n, frozenset(tuple(e) for e in obj.get("edges", [])))
        locals_ = []
        for loc in obj["locals"]:
            rule = {tuple(k): int(v) for k, v in loc["rule"]}
            locals_.append(LocalUpdate(int(loc["vertex"]), tuple(loc["neighborhood"]), rule))
        schedule = [int(a) for a in obj["schedule"]]
    except (KeyError, TypeError) as e:
        raise ValueError(f"malformed SDS JSON: {e!r}") from None
    return G, locals_, schedule, m


def to_json(G, locals_, schedule, m):
    return {
        "m": m,
        "vertices": G.n,
        "edges": sorted(list(e) for e in G.edges),
        "schedule": list(schedule),
        "locals": [
            {"vertex": u.vertex, "neighborhood": list(u.neighborhood),
             "rule": [[list(k), v] for k, v in sorted(u.rule.items())]}
            for u in sorted(locals_, key=lambda u: u.vertex)
        ],
    }
