from __future__ import annotations

import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from forestshift import (
    MissingWeight,
    NonzeroRootWeight,
    RayProfile,
    RayVertex,
    UnboundedWeights,
    UnknownVertex,
    WeightSystem,
    WindowEmpty,
    apply_adjoint,
    apply_shift,
    bound_norm_sq,
    depth_window,
    is_proper,
    is_thinner,
    local_norm_sq,
    make_window,
    materialize,
    power_weights,
    prune_zero_weights,
    validate_forest,
    validate_weights,
)
from forestshift.shift import TruncationWindow, inner, norm_sq
from forestshift.sampling import random_ray_forest, random_weights

import oracles


def test_validate_weights_examples(fork_forest, fork_weights):
    ident = validate_forest({"a": "a", "b": "b"})
    validate_weights(ident, {"a": 0, "b": 0})
    with pytest.raises(NonzeroRootWeight):
        validate_weights(ident, {"a": 1, "b": 0})
    with pytest.raises(MissingWeight):
        validate_weights(ident, {"a": 0})
    with pytest.raises(MissingWeight):
        validate_weights(fork_forest, {"x0": 0, "u": 1, "v1": 1, "w1": 1}, {"a": 1})
    with pytest.raises(UnknownVertex):
        validate_weights(ident, {"a": 0, "b": 0, "c": 1})
    with pytest.raises(UnboundedWeights):
        validate_weights(fork_forest, {"x0": 0, "u": float("inf"), "v1": 1, "w1": 1}, {"a": 1, "b": 1})
    assert fork_weights(RayVertex("b", 9)) == 20


def test_properness(fork_forest, fork_weights):
    assert is_proper(fork_forest, fork_weights)
    zero = validate_weights(fork_forest, {v: 0 for v in fork_forest.core}, {"a": 0, "b": 0})
    assert not is_proper(fork_forest, zero)
    holey = validate_weights(fork_forest, {"x0": 0, "u": 1, "v1": 0, "w1": 1}, {"a": 1, "b": 1})
    assert not is_proper(fork_forest, holey)


def test_bound_norm_sq(unilateral):
    assert bound_norm_sq(unilateral, WeightSystem({0: 0}, {"r": RayProfile((), (0,))})) == 0
    assert bound_norm_sq(unilateral, WeightSystem({0: 0}, {"r": RayProfile.constant(Fraction(3, 2))})) == Fraction(9, 4)
    f = validate_forest({"o": "o", "a": "o", "b": "o"})
    assert bound_norm_sq(f, validate_weights(f, {"o": 0, "a": 1, "b": 1})) == 2


def test_local_norm_sq(fork_forest, fork_weights):
    assert local_norm_sq(fork_forest, fork_weights, "u") == 101
    assert local_norm_sq(fork_forest, fork_weights, RayVertex("a", 4)) == 4
    leafy = validate_forest({"o": "o", "l": "o"})
    assert local_norm_sq(leafy, validate_weights(leafy, {"o": 0, "l": 5}), "l") == 0
    with pytest.raises(UnknownVertex):
        local_norm_sq(fork_forest, fork_weights, "nope")


def test_shift_on_basis_vectors():
    f = validate_forest({"o": "o", "u1": "o", "u2": "o"})
    lam = validate_weights(f, {"o": 0, "u1": 2, "u2": 3})
    assert apply_shift(f, lam, {"o": 1}) == {"u1": 2, "u2": 3}
    assert apply_shift(f, lam, {"u1": 1}) == {}
    assert apply_adjoint(f, lam, {"u2": 1}) == {"o": 3}
    assert apply_adjoint(f, lam, {"o": 1}) == {}


@settings(max_examples=50)
@given(st.integers(0, 10_000))
def test_adjoint_identity(seed):
    rng = random.Random(seed)
    f = random_ray_forest(rng, 8, 2)
    lam = random_weights(rng, f, exact=False, complex_ok=True)
    verts = list(f.explicit) + [RayVertex(r, n) for r in f.ray_ids for n in range(1, 5)]
    g1 = {v: complex(rng.gauss(0, 1), rng.gauss(0, 1)) for v in rng.sample(verts, min(5, len(verts)))}
    g2 = {v: complex(rng.gauss(0, 1), rng.gauss(0, 1)) for v in rng.sample(verts, min(5, len(verts)))}
    lhs = inner(apply_shift(f, lam, g1), g2)
    rhs = inner(g1, apply_adjoint(f, lam, g2))
    assert abs(lhs - rhs) < 1e-12
    for v in verts:
        assert norm_sq(apply_shift(f, lam, {v: 1})) == pytest.approx(local_norm_sq(f, lam, v), abs=1e-12)


def test_materialize_examples():
    f = validate_forest({i: i for i in range(3)})
    lam = validate_weights(f, {i: 0 for i in range(3)})
    assert not materialize(f, lam, make_window(f, range(3))).any()
    chain = validate_forest({0: 0, 1: 0, 2: 1, 3: 2})
    lam = validate_weights(chain, {0: 0, 1: 2, 2: 3, 3: 5})
    m = materialize(chain, lam, make_window(chain, range(4)))
    assert m.shape == (4, 4)
    np.testing.assert_array_equal(m, np.diag([2.0, 3.0, 5.0], -1))
    with pytest.raises(WindowEmpty):
        materialize(chain, lam, TruncationWindow(()))


def test_materialize_columns_match_shift(rng):
    for _ in range(20):
        f = random_ray_forest(rng, 6, 2)
        lam = random_weights(rng, f, exact=False)
        w = depth_window(f, lam, 2)
        m = materialize(f, lam, w)
        idx = w.index()
        for v in w.vertices:
            col = np.zeros(len(w))
            for c, x in apply_shift(f, lam, {v: 1}).items():
                if c in idx:
                    col[idx[c]] = x
            np.testing.assert_allclose(m[:, idx[v]], col)


def test_ragged_window(fork_forest):
    w = make_window(fork_forest, ["u", "v1"])
    assert w.ragged == {"u"}


def test_prune_zero_weights(fork_forest, fork_weights, rng):
    pf, pl = prune_zero_weights(fork_forest, fork_weights)
    assert pf == fork_forest
    zero = validate_weights(fork_forest, {v: 0 for v in fork_forest.core}, {"a": 0, "b": 0})
    zf, _ = prune_zero_weights(fork_forest, zero)
    assert all(zf.is_root(v) for v in list(fork_forest.explicit) + [RayVertex("a", 3)])
    for _ in range(30):
        f = random_ray_forest(rng, 7, 2)
        lam = random_weights(rng, f, zero_prob=0.4)
        pf, pl = prune_zero_weights(f, lam)
        assert is_thinner(pf, f)
        assert is_proper(pf, pl)
        w = depth_window(f, lam, 3)
        np.testing.assert_array_equal(materialize(f, lam, w), materialize(pf, pl, make_window(pf, w.vertices)))


def test_prune_handles_periodic_ray_zeros(unilateral):
    lam = WeightSystem({0: 0}, {"r": RayProfile((1,), (2, 0, 3))})
    pf, pl = prune_zero_weights(unilateral, lam)
    zeros = [n for n in range(1, 20) if lam(RayVertex("r", n)) == 0]
    assert zeros and all(pf.is_root(RayVertex("r", n)) for n in zeros)
    assert is_proper(pf, pl)


def test_power_weights_unilateral(unilateral):
    lam = WeightSystem({0: 0}, {"r": RayProfile((1, 2, 3), (4,))})
    f2, l2 = power_weights(unilateral, lam, 2)
    assert l2(RayVertex("r", 1)) == 0  # root of the square
    assert [l2(RayVertex("r", n)) for n in range(2, 7)] == [2, 6, 12, 16, 16]
    f1, l1 = power_weights(unilateral, lam, 1)
    assert f1 is unilateral and l1 is lam


def test_power_weights_vanish_through_zero():
    f = validate_forest({0: 0, 1: 0, 2: 1, 3: 2, 4: 3})
    lam = validate_weights(f, {0: 0, 1: 1, 2: 0, 3: 2, 4: 3})
    f2, l2 = power_weights(f, lam, 2)
    assert l2(3) == 0 and l2(2) == 0 and l2(4) == 6


def test_power_weights_against_matrix_oracle(rng):
    for _ in range(25):
        f = random_ray_forest(rng, rng.randint(1, 8), rng.randint(0, 2))
        lam = random_weights(rng, f, exact=False, complex_ok=True)
        parent = oracles.unroll(f, 12)
        order = sorted(parent, key=str)
        m = oracles.shift_matrix(parent, lam, order)
        for k in (2, 3):
            fk, lk = power_weights(f, lam, k)
            mk = oracles.shift_matrix(oracles.unroll(fk, 12), lk, order)
            np.testing.assert_allclose(mk, np.linalg.matrix_power(m, k), atol=1e-12)


def test_scaled_and_equality(fork_weights):
    double = fork_weights.scaled(2)
    assert double("u") == 20 and double(RayVertex("a", 3)) == 4
    assert fork_weights == WeightSystem(dict(fork_weights.core),
                                        {"a": RayProfile((2, 2), (2,)), "b": RayProfile((), (20, 20))})
