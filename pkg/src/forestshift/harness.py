"""Randomized check of the power-hyponormality dichotomy.

Forkless support: every sampled hyponormal shift must be hyponormal up to
the requested power.  Forked support: a counterexample must be built.
"""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass

from .errors import ForestShiftError
from .hyponormal import classify, construct_counterexample, is_hyponormal, is_power_hyponormal
from .sampling import (
    degenerate_forest,
    forked_forest,
    forkless_support_forest,
    random_hyponormal_weights,
    random_ray_forest,
)
from .shift import RayProfile, WeightSystem

FAMILIES = ("forkless", "forked", "degenerate", "random")
MODES = ("general", "proper", "both")


@dataclass
class HarnessSpec:
    family: str = "forkless"
    samples: int = 10
    weights_per_forest: int = 5
    max_power: int = 4
    seed: int = 0
    mode: str = "both"
    tol: float = 1e-9

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")


def _sample_forest(rng, family):
    if family == "forkless":
        return forkless_support_forest(rng)
    if family == "forked":
        return forked_forest(rng)
    if family == "degenerate":
        return degenerate_forest(rng)
    return random_ray_forest(rng, rng.randint(1, 8), rng.randint(0, 3))


def _zero_weights(forest):
    return WeightSystem({v: 0 for v in forest.core},
                        {r: RayProfile((), (0,)) for r in forest.ray_ids})


def theorem_harness(spec: HarnessSpec | dict) -> dict:
    if isinstance(spec, dict):
        spec = HarnessSpec(**spec)
    rng = random.Random(spec.seed)
    modes = ("general", "proper") if spec.mode == "both" else (spec.mode,)
    summary = {
        "spec": asdict(spec),
        "forests": 0,
        "forkless_support": 0,
        "weight_systems": 0,
        "power_hyponormal_confirmed": 0,
        "counterexamples": 0,
        "falsifications": [],
        "sampler_errors": [],
    }
    for i in range(spec.samples):
        forest = _sample_forest(rng, spec.family)
        summary["forests"] += 1
        cls = classify(forest)
        if not cls.support_forkless:
            try:
                rep = construct_counterexample(forest, tol=spec.tol)
            except ForestShiftError as exc:
                summary["falsifications"].append(
                    {"sample": i, "forest": repr(forest), "reason": f"{type(exc).__name__}: {exc}"})
            else:
                if rep.hypo_check.hyponormal and not rep.square_check.hyponormal:
                    summary["counterexamples"] += 1
                else:
                    summary["falsifications"].append({"sample": i, "forest": repr(forest),
                                                      "reason": "counterexample failed verification"})
            continue
        summary["forkless_support"] += 1
        for mode in modes:
            target = cls.support if mode == "proper" else forest
            for j in range(spec.weights_per_forest):
                if spec.family == "degenerate":
                    lam = _zero_weights(target)
                else:
                    lam = random_hyponormal_weights(rng, target, proper=(mode == "proper"))
                summary["weight_systems"] += 1
                if not is_hyponormal(target, lam, spec.tol).hyponormal:
                    summary["sampler_errors"].append({"sample": i, "weights": j, "mode": mode})
                    continue
                verdicts = is_power_hyponormal(target, lam, spec.max_power, spec.tol)
                bad = [k + 1 for k, v in enumerate(verdicts) if not v.hyponormal]
                if bad:
                    summary["falsifications"].append({
                        "sample": i, "weights": j, "mode": mode, "forest": repr(target),
                        "reason": f"power(s) {bad} not hyponormal",
                    })
                else:
                    summary["power_hyponormal_confirmed"] += 1
    summary["ok"] = not summary["falsifications"]
    return summary


__all__ = ["HarnessSpec", "theorem_harness", "FAMILIES", "MODES"]
