import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_connected, random_connected_subset, seeded
from lossykernel.errors import InputError
from lossykernel.framework import AnnotatedInstance, objective_value
from lossykernel.graph import INF, Graph, bfs_distances, cycle, dominated, grid_apex, is_connected, path, star
from lossykernel.oracles import (
    exact_group_steiner_tree,
    exact_min_dominator,
    exact_steiner_tree,
    is_domination_core,
)
from lossykernel.rkernel import (
    RKernelParams,
    build_dot_graph,
    build_reduced_graph,
    connected_core,
    one_approx_ds_bikernel,
    profile_classes,
    r_lift,
    r_lossy_kernel,
)
from lossykernel.sparse import profile


def instances(max_n=12):
    return st.builds(lambda n, extra, seed: random_connected(n, extra, seeded(seed)),
                     st.integers(3, max_n), st.integers(0, 4), st.integers(0, 10**6))


def capped_scds(g, Z, k, r):
    """min(OPT, k+1) for connected r-domination of Z, searched only up to size k."""
    res = exact_min_dominator(g, Z, r=r, connected=True, k=k)
    return res.size if res.feasible else k + 1


# parameters

def test_t_from_alpha():
    assert RKernelParams.from_alpha(1, 2).t == 6
    assert RKernelParams.from_alpha(2, 3).t == 5
    with pytest.raises(InputError):
        RKernelParams.from_alpha(1, 1)
    with pytest.raises(InputError):
        RKernelParams.from_alpha(0, 2)


# profile classes

@settings(max_examples=40, deadline=None)
@given(instances(), st.integers(1, 3), st.integers(0, 10**6))
def test_classes_are_profile_equality(g, r, seed):
    rng = seeded(seed)
    X = frozenset(rng.sample(range(g.n), rng.randrange(1, g.n)))
    pc = profile_classes(g, X, r)
    assert sorted(v for m in pc.classes.values() for v in m) == sorted(set(range(g.n)) - X)
    for key, members in pc.classes.items():
        assert all(profile(g, u, X, r).key() == key for u in members)
        assert pc.representatives()[key] == members[0]
    assert len(pc) == len({profile(g, u, X, r).key() for u in range(g.n) if u not in X})


@settings(max_examples=40, deadline=None)
@given(instances(), st.integers(1, 3), st.integers(0, 10**6))
def test_swapping_for_same_profile_keeps_domination(g, r, seed):
    rng = seeded(seed)
    X = frozenset(rng.sample(range(g.n), rng.randrange(1, g.n)))
    D = set(rng.sample(range(g.n), rng.randrange(1, g.n + 1)))
    for x in sorted(X):
        if x not in dominated(g, D, r):
            D.add(x)
    cls = profile_classes(g, X, r).class_of()
    members = profile_classes(g, X, r).classes
    swapped = {rng.choice(members[cls[v]]) if v in cls else v for v in D}
    assert X <= dominated(g, swapped, r)


# connected cores

def test_connected_core_star_with_center_provider():
    assert connected_core(star(5), 1, 1, provider=lambda g, k, r: {0}) == frozenset({0})


def test_connected_core_star_default_provider():
    Z = connected_core(star(5), 1, 1)
    assert 0 in Z and is_connected(star(5), Z) and is_domination_core(star(5), Z, 1)


def test_connected_core_rejects_path():
    assert exact_min_dominator(path(9), r=2).size == 2
    assert connected_core(path(9), 1, 2) is None


def test_connected_core_cycle():
    g = cycle(10)
    Z = connected_core(g, 2, 2)
    assert is_connected(g, Z) and is_domination_core(g, Z, 2, r=2)


def test_connected_core_rejects_far_vertex():
    # a provider whose core leaves a vertex farther than 2r away
    assert connected_core(path(8), 3, 1, provider=lambda g, k, r: {0}) is None
    assert connected_core(path(8), 3, 1, provider=lambda g, k, r: set()) is None


@settings(max_examples=25, deadline=None)
@given(instances(11), st.integers(1, 2), st.integers(1, 3))
def test_connected_core_size_and_core(g, r, k):
    Z = connected_core(g, k, r)
    if Z is None:
        assert not exact_min_dominator(g, r=r, k=k).feasible
        return
    assert is_connected(g, Z) and is_domination_core(g, Z, k, r=r)


# reduced graph

def test_reduced_graph_with_everything_is_identity():
    g = grid_apex(2, 3)
    rg = build_reduced_graph(g, range(g.n), 1, 1)
    assert rg.graph == g and list(rg.kept) == list(range(g.n))


def check_reduced(g, X, t, r):
    rg = build_reduced_graph(g, X, t, r)
    idx = {v: i for i, v in enumerate(rg.kept)}
    assert set(X) <= set(idx)
    Xp = [idx[x] for x in X]
    for u in rg.terminals:
        a = profile(g, u, X, r).rho
        b = profile(rg.graph, idx[u], Xp, r).rho
        assert all(a[x] == b[idx[x]] for x in X)
    pc = profile_classes(g, X, r)
    keys = sorted(pc.classes)
    for members in pc.classes.values():
        assert any(v in idx for v in members)
    for size in range(1, min(2 * t, len(keys)) + 1):
        for Q in itertools.combinations(keys, size):
            before = exact_group_steiner_tree(g, [pc.classes[q] for q in Q]).size
            if before > 2 * t:
                continue
            after = exact_group_steiner_tree(rg.graph, [[idx[v] for v in pc.classes[q] if v in idx] for q in Q])
            assert after.size == before
    return rg


def test_reduced_graph_c8():
    check_reduced(cycle(8), [0, 4], 1, 2)


def test_reduced_graph_random_tree():
    rng = seeded(4)
    g = Graph(14, [(rng.randrange(v), v) for v in range(1, 14)])
    check_reduced(g, random_connected_subset(g, 3, rng), 1, 2)
    check_reduced(g, random_connected_subset(g, 2, rng), 2, 1)


@settings(max_examples=30, deadline=None)
@given(instances(12), st.integers(1, 2), st.integers(0, 10**6))
def test_reduced_graph_properties(g, r, seed):
    rng = seeded(seed)
    X = random_connected_subset(g, rng.randrange(1, 4), rng)
    check_reduced(g, X, 1, r)


# kernel and lifting

def test_kernel_rejects_infeasible():
    out = r_lossy_kernel(path(9), 1, RKernelParams.from_alpha(2, 3))
    assert out.trivial_negative


@pytest.mark.parametrize("k", [3, 8])
def test_kernel_cycle_ratio(k):
    g = cycle(12)
    params = RKernelParams.from_alpha(2, 3)
    out = r_lossy_kernel(g, k, params, fallback=False)
    red = out.reduced
    assert capped_scds(red.graph, red.Z, k, 2) <= 3 * capped_scds(g, None, k, 2)


def test_kernel_grid_apex_ratio():
    g = grid_apex(2, 5)
    out = r_lossy_kernel(g, 4, RKernelParams.from_alpha(1, 2), fallback=False)
    red = out.reduced
    assert not out.params["fallback"] and out.params["core_size"] > 0
    assert capped_scds(red.graph, red.Z, 4, 1) <= 2 * capped_scds(g, None, 4, 1)


def test_kernel_fallback_below_threshold():
    out = r_lossy_kernel(star(6), 2, RKernelParams.from_alpha(1, 3))
    assert out.params["fallback"] and out.params["fallback_solution"] == [0]


def lift_case():
    g = cycle(12)
    out = r_lossy_kernel(g, 8, RKernelParams.from_alpha(2, 3), fallback=False)
    return g, AnnotatedInstance(g, frozenset(range(12)), 8, 2), out


def test_lift_valid_small_solution():
    g, original, out = lift_case()
    red = exact_min_dominator(out.reduced.graph, out.reduced.Z, r=2, connected=True)
    rep = r_lift(original, out, red.vertices)
    assert rep.valid and rep.solution == frozenset(out.kept_map[v] for v in red.vertices)
    assert objective_value(g, 8, rep.solution, r=2) == rep.value


def test_lift_invalid_solution():
    _, original, out = lift_case()
    rep = r_lift(original, out, [0])
    assert not rep.valid and rep.value == INF and rep.solution == frozenset()


@settings(max_examples=20, deadline=None)
@given(instances(11), st.integers(1, 2), st.sampled_from([2, 3]), st.integers(1, 4))
def test_end_to_end_ratio(g, r, alpha, k):
    out = r_lossy_kernel(g, k, RKernelParams.from_alpha(r, alpha))
    original = AnnotatedInstance(g, frozenset(range(g.n)), k, r)
    opt = capped_scds(g, None, k, r)
    red = out.reduced
    sol = exact_min_dominator(red.graph, red.Z, r=r, connected=True, k=k)
    rep = r_lift(original, out, sol.vertices if sol.feasible else range(red.graph.n))
    assert rep.valid
    assert objective_value(g, k, rep.solution, r=r) == rep.value
    assert rep.value <= alpha * opt


# distance-r bi-kernel

def test_ds_bikernel_star():
    out = one_approx_ds_bikernel(star(5), 1, 1, provider=lambda g, k, r: {0})
    assert out.reduced.graph.n == 2


def test_ds_bikernel_cycle():
    g = cycle(10)
    out = one_approx_ds_bikernel(g, 2, 2)
    red = out.reduced
    assert exact_min_dominator(g, r=2).size == exact_min_dominator(red.graph, red.Z, r=2).size


def test_ds_bikernel_twins_collapse():
    g = Graph(12, [(0, 1)] + [(0, v) for v in range(2, 12)] + [(1, v) for v in range(2, 12)])
    out = one_approx_ds_bikernel(g, 1, 1)
    assert out.reduced.graph.n < g.n
    assert exact_min_dominator(g).size == exact_min_dominator(out.reduced.graph, out.reduced.Z).size


@settings(max_examples=25, deadline=None)
@given(instances(11), st.integers(1, 2), st.integers(1, 3))
def test_ds_bikernel_decision(g, r, k):
    out = one_approx_ds_bikernel(g, k, r)
    if out.trivial_negative:
        assert not exact_min_dominator(g, r=r, k=k).feasible
        return
    red = out.reduced
    assert exact_min_dominator(g, r=r, k=k).feasible == exact_min_dominator(red.graph, red.Z, r=r, k=k).feasible


# dot graph

def test_dot_graph_single_member():
    g = path(4)  # 0 - 1 - 2 - 3, X = {0}, member 3 at distance 3
    r = 3
    assert build_dot_graph(g, [0], {"k": [3]}, 2).roots == {}  # out of range: empty profile
    dg = build_dot_graph(g, [0], {"k": [3]}, r)
    root = dg.roots["k"]
    assert dg.anchor["k"] == 0 and dg.depth["k"] == 2 * r * 3
    added = Graph(dg.graph.n, [e for e in dg.graph.edges() if e not in set(g.edges())])
    assert bfs_distances(added, [root])[3] == 2 * r * 3


def figure_graph():
    """X = {0, 1, 2, 3}; members 4, 5, 6 share profile (3, 2, 2, inf) at r = 3."""
    a, b = 7, 8
    edges = [(4, a), (5, a), (6, a), (a, 1), (a, 2), (a, b), (b, 0), (0, 3), (1, 2)]
    return Graph(9, edges)


def test_dot_graph_figure():
    g = figure_graph()
    X = [0, 1, 2, 3]
    keys = {profile(g, u, X, 3).key() for u in (4, 5, 6)}
    assert keys == {((0, 3), (1, 2), (2, 2))}
    dg = build_dot_graph(g, X, {"k": [4, 5, 6]}, 3)
    assert dg.anchor["k"] == 1 and dg.depth["k"] == 12
    added = Graph(dg.graph.n, [e for e in dg.graph.edges() if e not in set(g.edges())])
    root = dg.roots["k"]
    ends = {v for v in range(added.n) if added.degree(v) == 1} - {root}
    assert ends == {4, 5, 6}
    dist = bfs_distances(added, [root])
    assert all(dist[u] == 12 for u in (4, 5, 6))


def test_dot_graph_steiner_translation():
    rng = seeded(3)
    checked = 0
    for _ in range(120):
        g = random_connected(rng.randrange(6, 12), rng.randrange(0, 3), rng)
        r = rng.choice((1, 2))
        X = random_connected_subset(g, rng.randrange(1, 4), rng)
        rg = build_reduced_graph(g, X, 1, r)
        idx = {v: i for i, v in enumerate(rg.kept)}
        gp, Xp = rg.graph, [idx[x] for x in X]
        term = {}
        for u in rg.terminals:
            key = profile(g, u, X, r).key()
            if key:
                term.setdefault(key, []).append(idx[u])
        dg = build_dot_graph(gp, Xp, term, r)
        z = min(Xp)
        for size in (1, 2):
            for Q in itertools.combinations(sorted(dg.roots), size):
                gst = exact_group_steiner_tree(gp, [term[q] for q in Q] + [[z]]).size
                st_dot = exact_steiner_tree(dg.graph, [dg.roots[q] for q in Q] + [z]).size
                assert st_dot == gst + sum(dg.depth[q] for q in Q)
                checked += 1
    assert checked > 100
