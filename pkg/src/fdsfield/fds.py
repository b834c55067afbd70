"""Finite dynamical systems as explicit function tables.

States of every space are numbered by a mixed-radix encoding with the least
significant coordinate first, so a system is just the list of image indices.
State diagrams are functional digraphs: each weak component holds exactly one
limit cycle with transient trees hanging off its vertices.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from .errors import ValidationError
from .ffcore import (
    Basis,
    FieldContext,
    elem_to_vec,
    is_prime,
    make_extension_field,
    vec_to_elem,
)

KINDS = ("Zm_vectors", "field", "field_vectors")


@dataclass(frozen=True)
class StateSpace:
    """One of Z_m^n, GF(p^r), or GF(p^r)^n.

    ``m`` and ``n`` are used by Zm_vectors, ``ctx`` by the two field kinds,
    and ``n`` also by field_vectors.
    """

    kind: str
    m: int = 0
    n: int = 1
    ctx: FieldContext = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown state space kind {self.kind!r}")
        if self.kind == "Zm_vectors" and (self.m < 1 or self.n < 1):
            raise ValidationError("Z_m^n needs m >= 1 and n >= 1")
        if self.kind != "Zm_vectors" and self.ctx is None:
            raise ValidationError(f"{self.kind} space needs a field context")
        if self.kind == "field_vectors" and self.n < 1:
            raise ValidationError("field_vectors needs n >= 1")

    @classmethod
    def vectors(cls, m, n):
        return cls("Zm_vectors", m=m, n=n)

    @classmethod
    def field(cls, ctx):
        return cls("field", ctx=ctx)

    @classmethod
    def field_vectors(cls, ctx, n):
        return cls("field_vectors", n=n, ctx=ctx)

    @property
    def radix(self):
        return self.m if self.kind == "Zm_vectors" else self.ctx.order

    @property
    def cardinality(self) -> int:
        if self.kind == "field":
            return self.ctx.order
        return self.radix**self.n

    def __len__(self):
        return self.cardinality

    def decode(self, i):
        """State with index i: an int tuple, a FieldElement, or a tuple of them."""
        if self.kind == "field":
            return self.ctx.from_int(i)
        out = []
        for _ in range(self.n):
            i, d = divmod(i, self.radix)
            out.append(d)
        if self.kind == "field_vectors":
            return tuple(self.ctx.from_int(d) for d in out)
        return tuple(out)

    def encode(self, state) -> int:
        if self.kind == "field":
            return int(self.ctx(state))
        digits = [int(s) for s in state]
        if len(digits) != self.n or any(not 0 <= d < self.radix for d in digits):
            raise ValidationError(f"state {state!r} not in {self}")
        return sum(d * self.radix**k for k, d in enumerate(digits))

    def states(self):
        for i in range(self.cardinality):
            yield self.decode(i)

    def label(self, i):
        """Coordinate tuple of state i, for display."""
        s = self.decode(i)
        if self.kind == "field":
            return s.coords
        if self.kind == "field_vectors":
            return tuple(e.coords for e in s)
        return s

    def to_json(self):
        if self.kind == "Zm_vectors":
            return {"kind": self.kind, "m": self.m, "n": self.n}
        d = {"kind": self.kind, "p": self.ctx.p, "r": self.ctx.r,
             "modulus": [self.ctx.modulus[i] for i in range(self.ctx.r + 1)]}
        if self.kind == "field_vectors":
            d["n"] = self.n
        return d

    @classmethod
    def from_json(cls, obj):
        kind = obj.get("kind")
        if kind == "Zm_vectors":
            return cls.vectors(int(obj["m"]), int(obj["n"]))
        if kind in ("field", "field_vectors"):
            ctx = make_extension_field(int(obj["p"]), int(obj["r"]), obj.get("modulus"))
            if kind == "field":
                return cls.field(ctx)
            return cls.field_vectors(ctx, int(obj["n"]))
        raise ValueError(f"unknown state space kind {kind!r}")

    def __str__(self):
        if self.kind == "Zm_vectors":
            return f"Z_{self.m}^{self.n}"
        f = f"GF({self.ctx.p}^{self.ctx.r})"
        return f if self.kind == "field" else f"{f}^{self.n}"


@dataclass(frozen=True)
class FunctionTable:
    space: StateSpace
    image: tuple

    def __post_init__(self):
        img = tuple(int(j) for j in self.image)
        N = self.space.cardinality
        if len(img) != N:
            raise ValidationError(f"table has {len(img)} entries, space has {N} states")
        if any(not 0 <= j < N for j in img):
            raise ValidationError("image index out of range")
        object.__setattr__(self, "image", img)

    @classmethod
    def from_function(cls, space, fn):
        """Tabulate fn (state -> state) over every state of space."""
        return cls(space, tuple(space.encode(fn(s)) for s in space.states()))

    @classmethod
    def identity(cls, space):
        return cls(space, range(space.cardinality))

    def __call__(self, state):
        return self.space.decode(self.image[self.space.encode(state)])

    def __len__(self):
        return len(self.image)

    def iterate(self, i, k):
        for _ in range(k):
            i = self.image[i]
        return i

    def to_json(self):
        return {"space": self.space.to_json(), "map": list(self.image)}

    @classmethod
    def from_json(cls, obj):
        try:
            return cls(StateSpace.from_json(obj["space"]), obj["map"])
        except KeyError as e:
            raise ValueError(f"function table JSON is missing field {e}") from None


# ---------------------------------------------------------------------------
# State diagrams


@dataclass(frozen=True)
class Component:
    cycle: tuple
    states: tuple


@dataclass(frozen=True)
class StateDiagram:
    table: FunctionTable
    components: tuple
    children: dict = field(repr=False)
    on_cycle: frozenset = field(repr=False)

    @property
    def edges(self):
        return [(i, j) for i, j in enumerate(self.table.image)]

    def transient_tree(self, root):
        """Nested (state, (subtrees...)) of the non-cycle preimages under root."""
        return (root, tuple(self.transient_tree(c) for c in self.children[root]))

    def transient_depth(self):
        """Longest transient: steps needed by the worst state to reach a cycle."""
        depth = {v: 0 for v in self.on_cycle}
        stack = list(self.on_cycle)
        while stack:
            v = stack.pop()
            for c in self.children[v]:
                depth[c] = depth[v] + 1
                stack.append(c)
        return max(depth.values(), default=0)


def build_state_diagram(f: FunctionTable) -> StateDiagram:
    img = f.image
    N = len(img)
    color = [0] * N  # 0 new, 1 on current path, 2 done
    on_cycle = set()
    cycles = []
    for s in range(N):
        if color[s]:
            continue
        path = []
        x = s
        while not color[x]:
            color[x] = 1
            path.append(x)
            x = img[x]
        if color[x] == 1:
            cyc = tuple(path[path.index(x):])
            cycles.append(cyc)
            on_cycle.update(cyc)
        for y in path:
            color[y] = 2

    children = {i: [] for i in range(N)}
    for x, y in enumerate(img):
        if x not in on_cycle:
            children[y].append(x)
    children = {k: tuple(v) for k, v in children.items()}

    comps = []
    for cyc in cycles:
        members = []
        stack = list(cyc)
        while stack:
            v = stack.pop()
            members.append(v)
            stack.extend(children[v])
        comps.append(Component(cyc, tuple(sorted(members))))
    return StateDiagram(f, tuple(comps), children, frozenset(on_cycle))


def limit_cycles(d: StateDiagram):
    return [c.cycle for c in d.components]


def order_of(d: StateDiagram) -> int:
    """Least m with f^m fixing every limit-cycle state: lcm of cycle lengths."""
    return math.lcm(*(len(c) for c in limit_cycles(d)))


def order_by_iteration(f: FunctionTable) -> int:
    """Same quantity as order_of, found by iterating f on the eventual image."""
    N = len(f.image)
    states = range(N)
    for _ in range(N):
        states = {f.image[x] for x in states}
    m = 1
    while True:
        if all(f.iterate(x, m) == x for x in states):
            return m
        m += 1


# ---------------------------------------------------------------------------
# Canonical form


def _tree_codes(d: StateDiagram):
    """AHU code for every cycle vertex's transient tree."""
    code = {}
    order = []
    stack = list(d.on_cycle)
    while stack:
        v = stack.pop()
        order.append(v)
        stack.extend(d.children[v])
    for v in reversed(order):
        code[v] = "(" + "".join(sorted(code[c] for c in d.children[v])) + ")"
    return code


def _min_rotation(seq):
    seq = tuple(seq)
    return min(seq[k:] + seq[:k] for k in range(len(seq)))


def diagram_signature(d: StateDiagram) -> tuple:
    """Canonical form of the state diagram up to relabelling of states.

    Each component becomes the least rotation of its cycle's tree codes
    (read in the direction of the arrows); the signature is the sorted
    tuple of component encodings.
    """
    code = _tree_codes(d)
    comps = [_min_rotation(code[v] for v in c.cycle) for c in d.components]
    return tuple(sorted(comps))


def isomorphic(d1: StateDiagram, d2: StateDiagram) -> bool:
    if len(d1.table) != len(d2.table):
        return False
    return diagram_signature(d1) == diagram_signature(d2)


def to_dot(d: StateDiagram, name="fds") -> str:
    space = d.table.space
    cyc_edges = set()
    for c in d.components:
        for k, v in enumerate(c.cycle):
            cyc_edges.add((v, c.cycle[(k + 1) % len(c.cycle)]))

    def lab(i):
        t = space.label(i)
        return "(" + ",".join(str(x) for x in t) + ")"

    lines = [f"digraph {name} {{"]
    for i in range(len(d.table)):
        lines.append(f'  {i} [label="{lab(i)}"];')
    for i, j in d.edges:
        attr = " [style=bold]" if (i, j) in cyc_edges else ""
        lines.append(f"  {i} -> {j}{attr};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def summarize(d: StateDiagram) -> dict:
    lens = sorted(len(c) for c in limit_cycles(d))
    return {
        "states": len(d.table),
        "components": len(d.components),
        "cycle_lengths": lens,
        "fixed_points": lens.count(1),
        "cycle_states": len(d.on_cycle),
        "max_transient": d.transient_depth(),
        "order": order_of(d),
        "cycles": [list(c) for c in limit_cycles(d)],
    }


# ---------------------------------------------------------------------------
# Field <-> vector correspondences


def _check_vector_space(f, B, blocks=None):
    ctx = B.ctx
    sp = f.space
    if sp.kind != "Zm_vectors" or sp.m != ctx.p:
        raise ValidationError(f"expected a system over Z_{ctx.p}^k, got {sp}")
    if blocks is None and sp.n != ctx.r:
        raise ValidationError(f"vector length {sp.n} != field degree {ctx.r}")
    if blocks is not None and sp.n % ctx.r:
        raise ValidationError(f"vector length {sp.n} not divisible by r = {ctx.r}")


def lift_to_field(f: FunctionTable, B: Basis) -> FunctionTable:
    """F = phi o f o phi^{-1} with phi(v) = sum v_i alpha_i."""
    _check_vector_space(f, B)
    out = StateSpace.field(B.ctx)

    def F(a):
        return vec_to_elem(f(elem_to_vec(a, B)), B)

    return FunctionTable.from_function(out, F)


def project_to_vectors(F: FunctionTable, B: Basis) -> FunctionTable:
    if F.space.kind != "field" or F.space.ctx != B.ctx:
        raise ValidationError("system and basis live over different fields")
    out = StateSpace.vectors(B.ctx.p, B.ctx.r)
    return FunctionTable.from_function(out, lambda v: elem_to_vec(F(vec_to_elem(v, B)), B))


def _blocks_to_elems(v, B):
    r = B.ctx.r
    return tuple(vec_to_elem(v[k:k + r], B) for k in range(0, len(v), r))


def _elems_to_blocks(es, B):
    return tuple(x for e in es for x in elem_to_vec(e, B))


def lift_blockwise(f: FunctionTable, B: Basis) -> FunctionTable:
    """System over Z_p^{rn} -> system over GF(p^r)^n, one basis map per r-block."""
    _check_vector_space(f, B, blocks=True)
    out = StateSpace.field_vectors(B.ctx, f.space.n // B.ctx.r)
    return FunctionTable.from_function(out, lambda es: _blocks_to_elems(f(_elems_to_blocks(es, B)), B))


def project_blockwise(F: FunctionTable, B: Basis) -> FunctionTable:
    if F.space.kind != "field_vectors" or F.space.ctx != B.ctx:
        raise ValidationError("system and basis live over different fields")
    out = StateSpace.vectors(B.ctx.p, B.ctx.r * F.space.n)
    return FunctionTable.from_function(out, lambda v: _elems_to_blocks(F(_blocks_to_elems(v, B)), B))


# ---------------------------------------------------------------------------
# Interpolation


def poly_eval(coeffs, x):
    """Horner evaluation of a polynomial with FieldElement coefficients."""
    acc = x.ctx.zero
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def interpolate(f: FunctionTable):
    """Lagrange interpolant of a one-coordinate system over GF(q).

    Returns the coefficients (ascending, trailing zeros stripped) of the
    unique polynomial of degree < q that agrees with f everywhere.
    """
    sp = f.space
    if sp.kind == "field":
        ctx = sp.ctx
        val = lambda i: sp.decode(f.image[i])
    elif sp.kind == "Zm_vectors" and sp.n == 1 and is_prime(sp.m):
        ctx = make_extension_field(sp.m, 1)
        val = lambda i: ctx.from_int(f.image[i])
    else:
        raise ValidationError(f"interpolation needs a single field coordinate, got {sp}")

    q = ctx.order
    pts = list(ctx.elements())
    # vanishing polynomial x^q - x, ascending
    vanish = [ctx.zero] * (q + 1)
    vanish[1] = -ctx.one
    vanish[q] = ctx.one
    out = [ctx.zero] * q
    for i, a in enumerate(pts):
        y = val(i)
        if not y:
            continue
        # prod_{b != a}(x - b) = (x^q - x) / (x - a), by synthetic division
        quot = [ctx.zero] * q
        carry = ctx.zero
        for k in range(q, 0, -1):
            carry = vanish[k] + carry * a
            quot[k - 1] = carry
        denom = ctx.one
        for b in pts:
            if b != a:
                denom = denom * (a - b)
        scale = y / denom
        out = [o + scale * c for o, c in zip(out, quot)]
    while out and not out[-1]:
        out.pop()
    return out


def poly_to_str(coeffs):
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if not c:
            continue
        cs = str(int(c))
        mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
        terms.append(cs if not mono else (mono if cs == "1" else f"{cs}*{mono}"))
    return " + ".join(terms) or "0"


def all_tables(space):
    """Every function on space (N^N of them), in lexicographic order."""
    N = space.cardinality
    for img in itertools.product(range(N), repeat=N):
        yield FunctionTable(space, img)
