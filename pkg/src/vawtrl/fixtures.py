"""Shipped controller parameter vectors.

``theta_s0`` is the formulaic pre-training start (all widths 20, all weights
1).  ``theta_s1``/``theta_s2`` were produced by the in-repo training pipeline
(stage 1 on step wind, stage 2 on sine wind, seeds recorded in the default
configs) against the default plant constants, so comparisons run without
retraining.  The ``reference_*`` vectors are externally reported parameter
sets for the same controller structure; they are kept as regression inputs
for the policy math and are not tuned to this plant.
"""

from __future__ import annotations

import json
from importlib import resources

import numpy as np


def _load(name: str) -> np.ndarray:
    text = resources.files(__package__).joinpath("fixtures", name).read_text()
    theta = np.asarray(json.loads(text), dtype=float)
    if theta.shape != (12,):
        raise ValueError(f"fixture {name} must hold 12 numbers")
    return theta


def theta_s0() -> np.ndarray:
    return np.concatenate([np.full(6, 20.0), np.full(6, 1.0)])


def theta_s1() -> np.ndarray:
    return _load("theta_s1.json")


def theta_s2() -> np.ndarray:
    return _load("theta_s2.json")


def reference_theta_s1() -> np.ndarray:
    return _load("reference_theta_s1.json")


def reference_theta_s2() -> np.ndarray:
    return _load("reference_theta_s2.json")
