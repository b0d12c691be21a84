from __future__ import annotations

import random

import pytest

from forestshift import classify, is_hyponormal, is_proper, leafless_support
from forestshift.harness import HarnessSpec, theorem_harness
from forestshift.sampling import forked_forest, forkless_support_forest, random_hyponormal_weights


def test_samplers_hit_their_families():
    rng = random.Random(0)
    for _ in range(30):
        assert classify(forkless_support_forest(rng)).support_forkless
        assert not classify(forked_forest(rng)).support_forkless


def test_hyponormal_sampler():
    rng = random.Random(1)
    for _ in range(30):
        f = forkless_support_forest(rng)
        assert is_hyponormal(f, random_hyponormal_weights(rng, f)).hyponormal
        sup = leafless_support(f)
        lam = random_hyponormal_weights(rng, sup, proper=True)
        assert is_hyponormal(sup, lam).hyponormal and is_proper(sup, lam)


@pytest.mark.parametrize("family", ["forkless", "forked", "degenerate", "random"])
def test_harness_families(family):
    s = theorem_harness({"family": family, "samples": 8, "weights_per_forest": 4, "seed": 5})
    assert s["ok"] and not s["sampler_errors"]
    if family == "forked":
        assert s["counterexamples"] == 8


def test_spec_validation():
    with pytest.raises(ValueError):
        HarnessSpec(family="nope")
    with pytest.raises(ValueError):
        HarnessSpec(mode="sometimes")
