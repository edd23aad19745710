import itertools

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import brute_profile, random_connected, seeded, to_nx
from lossykernel.errors import InputError, ResourceError
from lossykernel.graph import (
    INF,
    Graph,
    complete,
    components,
    cycle,
    degeneracy,
    dominated,
    exact_subdivision,
    grid_apex,
    induced_subgraph,
    lexicographic_product,
    path,
    random_degenerate,
    star,
)
from lossykernel.oracles import exact_steiner_tree
from lossykernel.sparse import (
    OrderedGraph,
    all_orders_wcol,
    closure,
    closure_report,
    diagnostics,
    exchange_improve,
    find_exchange,
    grid_apex_witness,
    is_exchange_core,
    profile,
    projection,
    tree_closure,
    wcol,
    wcol_of_order,
    wcol_separator_check,
    wreach,
)


def instances(max_n=12):
    return st.builds(lambda n, extra, seed: random_connected(n, extra, seeded(seed)),
                     st.integers(2, max_n), st.integers(0, 8), st.integers(0, 10**6))


# projections and profiles

def test_radius_one_projection_is_neighbourhood():
    g = grid_apex(2, 3)
    X = {0, 2, 6}
    assert projection(g, 1, X, 1).M == g.neighbors(1) & X


def test_profile_blocks_paths_through_targets():
    # u=0, x=1, y=2
    prof = profile(path(3), 0, [1, 2], 2)
    assert prof.rho == {1: 1, 2: INF}
    assert prof.key() == ((1, 1),)


def test_isolated_vertex_profile():
    g = Graph(3, [(1, 2)])
    assert projection(g, 0, [1, 2], 3).M == frozenset()
    assert set(profile(g, 0, [1, 2], 3).rho.values()) == {INF}


def test_projection_rejects_member():
    with pytest.raises(InputError):
        projection(path(3), 1, [1], 1)


@settings(max_examples=60, deadline=None)
@given(instances(12), st.integers(1, 4), st.data())
def test_profile_matches_path_enumeration(g, r, data):
    X = data.draw(st.sets(st.integers(0, g.n - 1), min_size=1, max_size=g.n - 1))
    u = data.draw(st.sampled_from(sorted(set(range(g.n)) - X)))
    prof = profile(g, u, X, r)
    assert prof.rho == brute_profile(g, u, X, r)
    assert projection(g, u, X, r).M == {v for v, d in prof.rho.items() if d <= r}


# closure

def test_closure_fixpoint_on_everything():
    g = cycle(6)
    assert closure(g, range(6), 2) == frozenset(range(6))


def test_closure_star_adds_center():
    g = star(5)
    rep = closure_report(g, [1, 2], 1, target=1)
    assert closure(g, [1, 2], 1, target=1) == frozenset({0, 1, 2})
    assert rep["max_projection_before"] == 2 and rep["max_projection_size"] == 1


def test_closure_report_on_degenerate_graph():
    g = random_degenerate(25, 2, 4)
    rep = closure_report(g, [0, 5, 10], 2)
    assert rep["size_after"] >= rep["size_before"]
    assert rep["max_projection_size"] <= 2


def test_closure_budget():
    g = star(8)
    assert len(closure(g, [1, 2, 3], 1, target=1, budget=0)) == 3


# exchanges

def test_exchange_fixpoint():
    g = path(5)
    X, steps = exchange_improve(g, range(5), [1, 3], 2)
    assert X == frozenset({1, 3}) and steps == 0


def test_exchange_on_p3():
    X, steps = exchange_improve(path(3), range(3), [0, 2], 2)
    assert X == frozenset({1}) and steps == 1


def test_exchange_requires_domination():
    with pytest.raises(InputError):
        exchange_improve(path(4), range(4), [0], 1)


@settings(max_examples=30, deadline=None)
@given(instances(9), st.integers(1, 2), st.integers(0, 10**6))
def test_exchange_improve_monotone(g, c, seed):
    rng = seeded(seed)
    Z = frozenset(rng.sample(range(g.n), rng.randrange(1, g.n + 1)))
    X = frozenset(rng.sample(range(g.n), rng.randrange(1, g.n + 1))) | Z
    out, steps = exchange_improve(g, Z, X, c)
    assert Z <= dominated(g, out)
    assert len(out) <= len(X) - steps
    assert len(components(g, out)) <= len(components(g, X))


def test_exchange_core_examples():
    g = grid_apex(2, 4)
    assert is_exchange_core(g, range(g.n), 2, 3)
    assert is_exchange_core(Graph(1), [0], 1, 1)
    # the empty set dominates an empty Z but not the vertex, and nothing can be exchanged
    assert not is_exchange_core(Graph(1), [], 1, 1)


def test_grid_apex_row_gap_is_not_an_exchange_core():
    k, m, row = 3, 6, 1
    g = grid_apex(k, m)
    Z = frozenset(range(g.n)) - set(range(row * m + 1, row * m + m))
    D = grid_apex_witness(k, m, Z, row)
    assert len(D) <= 2 * k - 2
    assert Z <= dominated(g, D) and dominated(g, D) != frozenset(range(g.n))
    assert find_exchange(g, Z, D, 2) is None


def test_grid_apex_witness_literal_failure():
    # a row core spread so that it dominates its whole row defeats the literal witness
    k, m, row = 3, 6, 0
    g = grid_apex(k, m)
    Z = frozenset(range(g.n)) - {0, 2, 3, 5}
    lit = grid_apex_witness(k, m, Z, row)
    assert dominated(g, lit) == frozenset(range(g.n))
    fixed = grid_apex_witness(k, m, Z, row, literal=False)
    assert Z <= dominated(g, fixed) and dominated(g, fixed) != frozenset(range(g.n))


# tree closure

def test_tree_closure_on_clique():
    g = complete(5)
    assert tree_closure(g, [0, 1, 2], 2, 1, closure_target=3) == frozenset({0, 1, 2})
    check_tree_closure(g, [0, 1, 2], 2, 1)


def test_tree_closure_c8():
    g = cycle(8)
    # the antipodal Steiner tree has 5 vertices, so rq must be at least 5
    Xp = tree_closure(g, [0, 4], 2, 3)
    sub, keep = induced_subgraph(g, Xp)
    idx = {v: i for i, v in enumerate(keep)}
    assert exact_steiner_tree(sub, [idx[0], idx[4]]).size == exact_steiner_tree(g, [0, 4]).size == 5


def check_tree_closure(g, X, q, r):
    Xp = tree_closure(g, X, q, r)
    assert frozenset(X) <= Xp
    sub, keep = induced_subgraph(g, Xp)
    idx = {v: i for i, v in enumerate(keep)}
    for size in range(1, q + 1):
        for Y in itertools.combinations(sorted(X), size):
            st_g = exact_steiner_tree(g, Y).size
            st_sub = exact_steiner_tree(sub, [idx[y] for y in Y]).size
            assert st_sub >= st_g
            if st_g <= r * q:
                assert st_sub == st_g


def test_tree_closure_random_tree_leaves():
    rng = seeded(8)
    edges = [(rng.randrange(v), v) for v in range(1, 14)]
    g = Graph(14, edges)
    leaves = [v for v in range(14) if g.degree(v) == 1][:4]
    check_tree_closure(g, leaves, 4, 3)


@settings(max_examples=25, deadline=None)
@given(instances(12), st.integers(1, 3), st.integers(1, 2), st.integers(0, 10**6))
def test_tree_closure_property(g, q, r, seed):
    rng = seeded(seed)
    X = rng.sample(range(g.n), min(g.n, rng.randrange(1, 6)))
    check_tree_closure(g, X, q, r)


# weak colouring numbers

def test_wreach_radius_zero():
    og = OrderedGraph(path(4), (2, 0, 3, 1))
    assert all(wreach(og, v, 0) == {v} for v in range(4))
    assert wcol(path(4), 0)[0] == 1


def test_wcol_p3():
    assert wcol(path(3), 1)[0] == all_orders_wcol(path(3), 1) == 2


def test_wreach_definition():
    og = OrderedGraph(path(4), (1, 3, 0, 2))
    # 2 comes last, so both neighbours are smaller; from 0 only 1 precedes it
    assert wreach(og, 2, 1) == frozenset({1, 2, 3})
    assert wreach(og, 0, 2) == frozenset({0, 1})


def test_order_must_be_permutation():
    with pytest.raises(InputError):
        OrderedGraph(path(3), (0, 0, 1))


def test_exact_wcol_cap():
    with pytest.raises(ResourceError):
        wcol(path(20), 1)
    value, order = wcol(path(20), 1, mode="greedy")
    assert value == wcol_of_order(path(20), order, 1) == 2


@settings(max_examples=40, deadline=None)
@given(instances(6), st.integers(1, 3))
def test_wcol_search_matches_all_orders(g, s):
    value, order = wcol(g, s)
    assert value == all_orders_wcol(g, s) == wcol_of_order(g, order, s)


@settings(max_examples=40, deadline=None)
@given(instances(8))
def test_wcol_monotone_and_degeneracy(g):
    vals = [wcol(g, s)[0] for s in range(4)]
    assert vals == sorted(vals)
    assert vals[1] == degeneracy(g) + 1


@pytest.mark.parametrize("base", [path(3), cycle(4), star(3)])
def test_lex_product_bound(base):
    for t in (2, 3):
        prod = lexicographic_product(base, t)
        for s in (1, 2):
            assert wcol(prod, s, n_cap=12)[0] <= t * wcol(base, s)[0]


def test_subdivision_measurement():
    # informational: wcol_s(H) <= wcol_s(G) + s * p on small subdivisions
    rng = seeded(5)
    rows = []
    for _ in range(10):
        base = random_connected(rng.randrange(3, 6), rng.randrange(0, 3), rng)
        h = exact_subdivision(base, 2)
        if h.n > 9:
            continue
        for s in (1, 2):
            rows.append((wcol(h, s)[0], wcol(base, s)[0] + 2 * s))
    assert rows and all(a <= b for a, b in rows)


# separators

def test_separator_member():
    og = OrderedGraph(path(4), (3, 2, 1, 0))
    assert wcol_separator_check(og, [1, 2], 2, 3)


def test_separator_far_apart():
    og = OrderedGraph(path(8), tuple(range(8)))
    assert wcol_separator_check(og, [0], 7, 3)


@settings(max_examples=60, deadline=None)
@given(instances(9), st.integers(1, 3), st.data())
def test_separator_random(g, r, data):
    order = data.draw(st.permutations(range(g.n)))
    X = data.draw(st.sets(st.integers(0, g.n - 1), min_size=1))
    y = data.draw(st.integers(0, g.n - 1))
    assert wcol_separator_check(OrderedGraph(g, tuple(order)), X, y, r)


def test_diagnostics_keys():
    g = random_degenerate(15, 2, 1)
    rep = diagnostics(g, [0, 1], r=2, Z=[0, 1], c=1)
    assert set(rep) == {"max_projection_size", "closure_growth", "wcol_greedy", "exchange_steps"}


def test_networkx_crosscheck_of_helpers():
    g = random_connected(10, 4, seeded(2))
    assert nx.is_connected(to_nx(g))
