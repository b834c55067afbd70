import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from fdsfield import fds
from fdsfield.errors import ValidationError
from fdsfield.fds import FunctionTable, StateSpace, build_state_diagram
from fdsfield.ffcore import Basis, ModMatrix, find_normal_basis, make_extension_field, polynomial_basis
from fdsfield.linpoly import LinearizedPoly, lp_from_matrix
from fdsfield.modsys import linear_system

import oracles


def table(img, m=None, n=1):
    m = m or len(img)
    return FunctionTable(StateSpace.vectors(m, n), img)


def random_table(space, rng):
    N = space.cardinality
    return FunctionTable(space, [rng.randrange(N) for _ in range(N)])


# -- state spaces ----------------------------------------------------------


def test_encoding_least_significant_first():
    sp = StateSpace.vectors(3, 2)
    assert sp.cardinality == 9
    assert sp.decode(1) == (1, 0)
    assert sp.decode(3) == (0, 1)
    assert [sp.encode(s) for s in sp.states()] == list(range(9))


def test_field_spaces():
    ctx = make_extension_field(2, 2)
    sp = StateSpace.field(ctx)
    assert sp.cardinality == 4
    assert sp.decode(2) == ctx.element((0, 1))
    fv = StateSpace.field_vectors(ctx, 2)
    assert fv.cardinality == 16
    assert fv.encode(fv.decode(13)) == 13
    for s in (sp, fv, StateSpace.vectors(4, 3)):
        assert StateSpace.from_json(s.to_json()) == s


def test_bad_tables():
    with pytest.raises(ValidationError):
        table([0, 1, 5], m=3)
    with pytest.raises(ValidationError):
        FunctionTable(StateSpace.vectors(2, 2), [0, 1])
    with pytest.raises(ValidationError):
        StateSpace("bogus")


# -- diagrams --------------------------------------------------------------


def test_identity_diagram():
    d = build_state_diagram(FunctionTable.identity(StateSpace.vectors(2, 2)))
    assert len(d.components) == 4
    assert all(len(c.cycle) == 1 for c in d.components)
    assert d.transient_depth() == 0
    assert fds.order_of(d) == 1


def test_constant_zero_diagram():
    d = build_state_diagram(table([0, 0, 0, 0], m=2, n=2))
    assert len(d.components) == 1
    assert d.components[0].cycle == (0,)
    assert len(d.components[0].states) - 1 == 3
    assert d.transient_tree(0) == (0, ((1, ()), (2, ()), (3, ())))


def test_successor_on_z5():
    f = FunctionTable.from_function(StateSpace.vectors(5, 1), lambda s: ((s[0] + 1) % 5,))
    d = build_state_diagram(f)
    assert fds.limit_cycles(d) == [(0, 1, 2, 3, 4)]
    assert fds.order_of(d) == 5


def test_cycles_2_and_3_order_6():
    f = table([1, 0, 3, 4, 2])
    d = build_state_diagram(f)
    assert sorted(len(c) for c in fds.limit_cycles(d)) == [2, 3]
    assert fds.order_of(d) == 6
    assert fds.order_by_iteration(f) == 6 == oracles.order_by_brute_force(f.image)


def test_worked_example_linear_system_order_8():
    A = ModMatrix(2, 3, [[0, 5], [1, 2]])
    f = linear_system(A)
    assert f((1, 0)) == (0, 1) and f((0, 1)) == (5, 2)
    assert fds.order_of(build_state_diagram(f)) == 8


@settings(max_examples=200)
@given(st.integers(1, 9).flatmap(lambda n: st.lists(st.integers(0, n - 1), min_size=n, max_size=n)))
def test_diagram_structure_invariants(img):
    f = table(img)
    d = build_state_diagram(f)
    N = len(img)
    seen = [s for c in d.components for s in c.states]
    assert sorted(seen) == list(range(N))
    assert d.edges == [(x, img[x]) for x in range(N)]
    for c in d.components:
        assert f.iterate(c.cycle[0], len(c.cycle)) == c.cycle[0]
        assert all(img[c.cycle[k]] == c.cycle[(k + 1) % len(c.cycle)] for k in range(len(c.cycle)))
    assert sorted(d.on_cycle) == oracles.periodic_states(img)
    assert d.transient_depth() <= N
    for x in range(N):
        assert f.iterate(x, N) in d.on_cycle
    assert fds.order_of(d) == oracles.order_by_brute_force(img)


def test_order_lcm_vs_iteration_up_to_64_states():
    rng = random.Random(21)
    for N in (1, 2, 7, 16, 33, 64):
        for _ in range(20):
            f = table([rng.randrange(N) for _ in range(N)])
            assert fds.order_of(build_state_diagram(f)) == fds.order_by_iteration(f)
        perm = list(range(N))
        rng.shuffle(perm)
        f = table(perm)
        assert fds.order_of(build_state_diagram(f)) == oracles.order_by_brute_force(perm)


# -- signatures ------------------------------------------------------------


def test_isomorphic_examples():
    d = build_state_diagram(table([1, 2, 0, 0]))
    assert fds.isomorphic(d, d)
    c0 = build_state_diagram(table([0, 0, 0, 0], m=2, n=2))
    c3 = build_state_diagram(table([3, 3, 3, 3], m=2, n=2))
    assert fds.isomorphic(c0, c3)
    four = build_state_diagram(table([1, 2, 3, 0]))
    two_two = build_state_diagram(table([1, 0, 3, 2]))
    assert not fds.isomorphic(four, two_two)


def test_signature_distinguishes_tree_placement():
    # a 2-cycle with one tail on one vertex vs two tails on the same vertex
    a = build_state_diagram(table([1, 0, 0, 1]))
    b = build_state_diagram(table([1, 0, 0, 0]))
    assert not fds.isomorphic(a, b)
    # tail of length 2 vs two tails of length 1
    c = build_state_diagram(table([0, 0, 1]))
    e = build_state_diagram(table([0, 0, 0]))
    assert not fds.isomorphic(c, e)


def test_signature_vs_brute_force_all_4_state_maps():
    tables = [tuple(t) for t in itertools.product(range(4), repeat=4)]
    keys = {t: oracles.brute_canonical(t) for t in tables}
    sigs = {t: fds.diagram_signature(build_state_diagram(table(t))) for t in tables}
    assert len(set(keys.values())) == len(set(sigs.values()))
    for t in tables:
        for u in tables[::17]:
            assert (sigs[t] == sigs[u]) == (keys[t] == keys[u])


def test_signature_vs_pairwise_permutation_search():
    rng = random.Random(5)
    tabs = [tuple(rng.randrange(6) for _ in range(6)) for _ in range(40)]
    for t, u in itertools.combinations(tabs, 2):
        same = fds.isomorphic(build_state_diagram(table(t)), build_state_diagram(table(u)))
        assert same == oracles.brute_isomorphic(t, u)


def test_dot_export():
    d = build_state_diagram(FunctionTable.identity(StateSpace.vectors(2, 2)))
    dot = fds.to_dot(d)
    assert dot.startswith("digraph fds {")
    assert dot.count("[style=bold]") == 4
    assert '0 [label="(0,0)"]' in dot
    assert "3 -> 3 [style=bold];" in dot


# -- field/vector correspondences --------------------------------------------


def test_lift_round_trip_random():
    rng = random.Random(0)
    for r in (2, 3):
        ctx = make_extension_field(2, r)
        for B in (polynomial_basis(ctx), find_normal_basis(ctx)):
            for _ in range(20):
                f = random_table(StateSpace.vectors(2, r), rng)
                F = fds.lift_to_field(f, B)
                assert F.space.kind == "field"
                assert fds.project_to_vectors(F, B) == f
                assert fds.lift_to_field(fds.project_to_vectors(F, B), B) == F
                assert fds.isomorphic(build_state_diagram(f), build_state_diagram(F))


def test_identity_lifts_to_identity():
    ctx = make_extension_field(2, 3)
    B = find_normal_basis(ctx)
    F = fds.lift_to_field(FunctionTable.identity(StateSpace.vectors(2, 3)), B)
    assert F == FunctionTable.identity(StateSpace.field(ctx))


def test_linear_map_lifts_to_linearized_polynomial():
    ctx = make_extension_field(2, 3)
    rng = random.Random(3)
    for B in (polynomial_basis(ctx), find_normal_basis(ctx)):
        for _ in range(10):
            M = ModMatrix(2, 1, [[rng.randrange(2) for _ in range(3)] for _ in range(3)])
            F = fds.lift_to_field(linear_system(M), B)
            L = lp_from_matrix(M.entries, B)
            for x in ctx.elements():
                assert F(x) == L(x)


def test_lift_errors():
    ctx = make_extension_field(2, 2)
    B = polynomial_basis(ctx)
    with pytest.raises(ValidationError):
        fds.lift_to_field(FunctionTable.identity(StateSpace.vectors(3, 2)), B)
    with pytest.raises(ValidationError):
        fds.lift_to_field(FunctionTable.identity(StateSpace.vectors(2, 3)), B)
    with pytest.raises(ValidationError):
        fds.lift_blockwise(FunctionTable.identity(StateSpace.vectors(2, 3)), B)


def test_blockwise_n1_matches_lift():
    ctx = make_extension_field(2, 2)
    B = find_normal_basis(ctx)
    f = random_table(StateSpace.vectors(2, 2), random.Random(1))
    F1 = fds.lift_to_field(f, B)
    Fb = fds.lift_blockwise(f, B)
    assert Fb.space == StateSpace.field_vectors(ctx, 1)
    for i in range(4):
        assert Fb.space.decode(Fb.image[i])[0] == F1.space.decode(F1.image[i])


def test_blockwise_round_trip():
    ctx = make_extension_field(2, 2)
    B = find_normal_basis(ctx)
    rng = random.Random(2)
    for _ in range(10):
        f = random_table(StateSpace.vectors(2, 4), rng)
        F = fds.lift_blockwise(f, B)
        assert F.space.cardinality == 16
        assert fds.project_blockwise(F, B) == f
        assert fds.isomorphic(build_state_diagram(f), build_state_diagram(F))


def test_swap_blocks():
    ctx = make_extension_field(2, 2)
    B = find_normal_basis(ctx)
    swap_fv = FunctionTable.from_function(StateSpace.field_vectors(ctx, 2), lambda s: (s[1], s[0]))
    swap_vec = FunctionTable.from_function(StateSpace.vectors(2, 4), lambda v: (v[2], v[3], v[0], v[1]))
    assert fds.project_blockwise(swap_fv, B) == swap_vec
    assert fds.lift_blockwise(swap_vec, B) == swap_fv


def test_basis_change_invariance():
    ctx = make_extension_field(3, 2)
    rng = random.Random(6)
    B3 = Basis(ctx, (ctx.from_int(5), ctx.from_int(6)))
    for _ in range(10):
        L = LinearizedPoly(ctx, tuple(ctx.from_int(rng.randrange(9)) for _ in range(2)))
        F = FunctionTable.from_function(StateSpace.field(ctx), L)
        sigs = {fds.diagram_signature(build_state_diagram(fds.project_to_vectors(F, B)))
                for B in (polynomial_basis(ctx), find_normal_basis(ctx), B3)}
        assert len(sigs) == 1


# -- interpolation -----------------------------------------------------------


def test_interpolate_identity_and_constant():
    ctx = make_extension_field(2, 2)
    sp = StateSpace.field(ctx)
    assert fds.interpolate(FunctionTable.identity(sp)) == [ctx.zero, ctx.one]
    c = ctx.from_int(3)
    assert fds.interpolate(FunctionTable.from_function(sp, lambda x: c)) == [c]


def test_interpolate_three_points():
    # L_2(x) = x(x-1)/((2)(1)) = 2x^2 - 2x = 2x^2 + x over Z_3; check 0->0, 1->0, 2->1
    f = table([0, 0, 1], m=3)
    coeffs = fds.interpolate(f)
    assert [int(c) for c in coeffs] == [0, 1, 2]
    assert fds.poly_to_str(coeffs) == "2*x^2 + x"
    for x in range(3):
        assert (2 * x * x + x) % 3 == f.image[x]


@pytest.mark.parametrize("p,r", [(2, 2), (2, 3), (3, 2), (5, 1), (7, 1)])
def test_interpolate_reproduces_random_functions(p, r):
    ctx = make_extension_field(p, r)
    sp = StateSpace.field(ctx)
    rng = random.Random(p * r)
    for _ in range(5):
        f = random_table(sp, rng)
        coeffs = fds.interpolate(f)
        assert len(coeffs) <= ctx.order
        for i, x in enumerate(ctx.elements()):
            assert fds.poly_eval(coeffs, x) == sp.decode(f.image[i])


def test_interpolate_rejects_multicoordinate():
    with pytest.raises(ValidationError):
        fds.interpolate(FunctionTable.identity(StateSpace.vectors(2, 2)))


def test_table_json_round_trip():
    ctx = make_extension_field(2, 2)
    f = random_table(StateSpace.field_vectors(ctx, 2), random.Random(3))
    assert FunctionTable.from_json(f.to_json()) == f
    with pytest.raises(ValueError):
        FunctionTable.from_json({"map": [0]})
