from __future__ import annotations

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from forestshift import (
    BadAttach,
    CycleError,
    DanglingParent,
    Forest,
    InfiniteResult,
    LabelClash,
    RaysUnsupported,
    RayVertex,
    Tail,
    UnknownVertex,
    ValidationError,
    canonical_form,
    direct_sum,
    is_isomorphic,
    validate_forest,
)
from forestshift.sampling import random_finite_forest, random_ray_forest

import oracles


@st.composite
def finite_parent_maps(draw, max_n=9):
    n = draw(st.integers(1, max_n))
    parent = {}
    for i in range(n):
        parent[i] = i if i == 0 or draw(st.booleans()) else draw(st.integers(0, i - 1))
    return parent


def test_degenerate_single_vertex():
    f = validate_forest({"a": "a"})
    assert f.roots() == {"a"}
    assert f.leaves() == frozenset()
    assert f.is_leafless()


def test_two_cycle_rejected_with_listing():
    with pytest.raises(CycleError) as info:
        validate_forest({"a": "b", "b": "a"})
    assert set(info.value.cycle) == {"a", "b"}
    assert "->" in str(info.value)


def test_longer_cycle_rejected():
    with pytest.raises(CycleError):
        validate_forest({1: 2, 2: 3, 3: 1, 4: 4})


def test_dangling_parent_and_bad_attach():
    with pytest.raises(DanglingParent):
        validate_forest({"a": "zz"})
    with pytest.raises(BadAttach):
        validate_forest({"a": "a"}, {"r": "nope"})
    with pytest.raises(ValidationError):
        validate_forest({})


def test_fork_fixture_structure(fork_forest):
    f = fork_forest
    assert f.roots() == {"x0"}
    assert f.children("u") == {"v1", "w1"}
    assert f.children("v1") == {RayVertex("a", 1)}
    assert f.degree("u") == 2
    assert not f.is_forkless()
    assert f.is_leafless()
    assert f.has_infinite_chain_below("x0")


def test_children_basics(unilateral):
    assert unilateral.k_children(0, 0) == {0}
    assert unilateral.k_children(0, 2) == {RayVertex("r", 2)}
    assert unilateral.children(RayVertex("r", 5)) == {RayVertex("r", 6)}
    with pytest.raises(UnknownVertex):
        unilateral.children("missing")
    with pytest.raises(UnknownVertex):
        unilateral.parent(RayVertex("q", 1))


def test_ray_vertices_never_roots(unilateral):
    assert not any(unilateral.is_root(RayVertex("r", n)) for n in range(1, 50))
    assert unilateral.roots() == {0}


def test_descendants_with_ray():
    f = validate_forest({"v": "v"}, {"r": "v"})
    d = f.descendants("v", 3)
    assert d.vertices == {"v", RayVertex("r", 1), RayVertex("r", 2), RayVertex("r", 3)}
    assert d.infinite
    g = validate_forest({"v": "v", "leaf": "v"})
    assert g.descendants("leaf", 5).vertices == {"leaf"}
    assert not g.descendants("v", 5).infinite


def test_leaves():
    f = validate_forest({"x0": "x0", "u": "x0"})
    assert f.leaves() == {"u"}
    assert not f.is_leafless()
    assert validate_forest({"o": "o"}, {"r": "o"}).is_leafless()


def test_trees_partition():
    f = validate_forest({"x0": "x0", "u": "x0", "a": "a"}, {"r": "u"})
    trees = f.trees()
    assert len(trees) == 2
    assert RayVertex("r", 7) in f.tree_of("x0")
    assert "a" not in f.tree_of("x0")
    assert validate_forest({i: i for i in range(5)}).tree_count() == 5


def test_forkless_star_of_rays():
    f = validate_forest({"o": "o"}, {f"r{i}": "o" for i in range(4)})
    assert f.is_forkless()
    # finite children are leaves of degree zero
    assert not validate_forest({"o": "o", "a": "o", "b": "o"}).is_forkless()
    assert not validate_forest({"o": "o", "u": "o", "a": "u", "b": "u"}).is_forkless()


def test_finite_forest_has_no_infinite_chain(rng):
    for _ in range(20):
        f = random_finite_forest(rng, 8)
        assert not any(f.has_infinite_chain_below(v) for v in f.explicit)


def test_spoke_truncations_have_no_infinite_chain():
    # finite truncations of a tree whose spoke k has length k
    for m in range(1, 7):
        parent = {(0, 0): (0, 0)}
        for k in range(1, m + 1):
            prev = (0, 0)
            for j in range(1, k + 1):
                parent[(k, j)] = prev
                prev = (k, j)
        f = Forest(parent)
        assert not f.has_infinite_chain_below((1, 1))
        assert not f.has_infinite_chain_below((0, 0))


def test_direct_sum():
    f = validate_forest({"x": "x", "y": "x"}, {"r": "y"})
    g = validate_forest({"z": "z"})
    s = direct_sum(f, g)
    assert s.tree_count() == 2
    ff = direct_sum(f, f)
    assert ff.tree_count() == 2 and len(ff.ray_ids) == 2
    with pytest.raises(LabelClash):
        direct_sum(f, f, relabel=False)


def test_canonical_forms():
    chain = validate_forest({1: 1, 2: 1, 3: 2})
    star = validate_forest({1: 1, 2: 1, 3: 1})
    relabeled = validate_forest({"c": "b", "b": "a", "a": "a"})
    assert is_isomorphic(chain, relabeled)
    assert not is_isomorphic(chain, star)
    assert not is_isomorphic(validate_forest({1: 1, 2: 2}), validate_forest({1: 1, 2: 1}))
    with pytest.raises(RaysUnsupported):
        canonical_form(validate_forest({1: 1}, {"r": 1}))


def test_direct_sum_commutative_and_associative(rng):
    for _ in range(20):
        a, b, c = (random_finite_forest(rng, rng.randint(1, 5)) for _ in range(3))
        assert is_isomorphic(direct_sum(a, b), direct_sum(b, a))
        assert is_isomorphic(direct_sum(direct_sum(a, b), c), direct_sum(a, direct_sum(b, c)))


def test_tail_leaves_and_roots():
    # every second tail vertex dead: live ones below a dead one are leaves
    f = Forest({"o": "o"}, {"r": Tail("o", start=1, step=1, period=2, live=frozenset({1}))})
    assert f.is_root(RayVertex("r", 2)) and not f.is_root(RayVertex("r", 3))
    assert f.has_tail_roots
    assert f.tree_count() == math.inf
    assert not f.is_leafless()
    with pytest.raises(InfiniteResult):
        f.leaves()
    with pytest.raises(InfiniteResult):
        f.trees()


def test_unroll_is_same_forest(unilateral):
    assert unilateral.unroll("r", 6) == unilateral
    assert RayVertex("r", 3) in unilateral.unroll("r", 6).explicit


@given(finite_parent_maps())
def test_valid_maps_accepted_and_axiom_holds(parent):
    f = Forest(parent)
    assert oracles.is_forest(parent)
    n = len(parent)
    for v in parent:
        w = f.iterate(v, n + 1)
        assert f.is_root(w)


@given(finite_parent_maps(), st.data())
def test_rewiring_agrees_with_brute_axiom(parent, data):
    v = data.draw(st.sampled_from(sorted(parent)))
    parent = dict(parent)
    parent[v] = data.draw(st.sampled_from(sorted(parent)))
    try:
        Forest(parent)
        ok = True
    except CycleError:
        ok = False
    assert ok == oracles.is_forest(parent)


@settings(max_examples=60)
@given(st.integers(0, 10_000))
def test_children_disjoint_and_in_tree(seed):
    f = random_ray_forest(random.Random(seed), 6, 2)
    for v in f.explicit:
        levels = [f.k_children(v, k) for k in range(5)]
        if not f.is_root(v):
            for i in range(5):
                for j in range(i + 1, 5):
                    assert not levels[i] & levels[j]
        tree = f.tree_of(v)
        assert all(c in tree for lev in levels for c in lev)


@settings(max_examples=60)
@given(st.integers(0, 10_000))
def test_leafless_iff_every_nonroot_has_infinite_chain(seed):
    f = random_ray_forest(random.Random(seed), 6, 3, root_prob=0.4)
    chains = all(f.has_infinite_chain_below(v) for v in f.explicit if not f.is_root(v))
    assert f.is_leafless() == chains
