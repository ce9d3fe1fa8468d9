"""RBF-network controller mapping six measurements to a load-current reference.

The network has one hidden node per grid level: node i centers every input
dimension at the i-th boundary point of the evenly divided input range, and
a node's response is the SUM of the per-dimension Gaussian bumps (additive
receptive fields, not the conventional product).  Widths are shared per
input dimension, so the trainable vector is [sigma_1..sigma_m, w_1..w_n].
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np

# Operating envelopes of the six controller inputs, in input order:
# wind speed (m/s), wind-speed rate (m/s^2), load current (A),
# load voltage (V), rotor speed (rad/s), rotor-speed rate (rad/s^2).
DEFAULT_INPUT_RANGES = (
    (4.66, 11.31),
    (-8.33, 8.32),
    (0.83, 9.13),
    (3.32, 36.52),
    (5.0, 35.0),
    (-4.998, 4.992),
)

DEFAULT_BIAS = 3.5  # A


class PolicyInput(NamedTuple):
    """Controller inputs in canonical order (the rates arrive pre-clamped)."""

    u_w: float
    du_w: float
    i_l: float
    v_l: float
    omega_r: float
    domega_r: float

    def as_array(self) -> np.ndarray:
        return np.array(self, dtype=float)


@dataclass(frozen=True)
class RbfnnConfig:
    """Fixed structure of the controller: center grid, bias, output clamp."""

    n_nodes: int = 6
    input_ranges: tuple[tuple[float, float], ...] = DEFAULT_INPUT_RANGES
    bias: float = DEFAULT_BIAS
    i_ref_max: float = 10.0

    def __post_init__(self):
        if self.n_nodes < 2:
            raise ValueError("need at least two hidden nodes")
        if any(hi <= lo for lo, hi in self.input_ranges):
            raise ValueError("each input range needs lo < hi")
        if self.i_ref_max <= 0:
            raise ValueError("i_ref_max must be positive")

    @property
    def n_inputs(self) -> int:
        return len(self.input_ranges)

    @property
    def n_params(self) -> int:
        return self.n_inputs + self.n_nodes

    @cached_property
    def centers(self) -> np.ndarray:
        """(n_nodes, n_inputs) grid; column j spans range j in n_nodes even steps."""
        c = np.empty((self.n_nodes, self.n_inputs))
        for j, (lo, hi) in enumerate(self.input_ranges):
            c[:, j] = np.linspace(lo, hi, self.n_nodes)
        c.setflags(write=False)
        return c


@dataclass(frozen=True)
class PolicyParams:
    """Trainable widths and weights, packed as [sigma..., w...]."""

    sigma: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "sigma", np.asarray(self.sigma, dtype=float))
        object.__setattr__(self, "w", np.asarray(self.w, dtype=float))

    def as_vector(self) -> np.ndarray:
        return pack(self.sigma, self.w)


def pack(sigma: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Concatenate widths then weights into a flat parameter vector."""
    return np.concatenate([np.asarray(sigma, dtype=float),
                           np.asarray(w, dtype=float)])


def unpack(theta: np.ndarray, config: RbfnnConfig | None = None) -> PolicyParams:
    """Split a flat parameter vector back into (sigma, w)."""
    config = config or RbfnnConfig()
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (config.n_params,):
        raise ValueError(
            f"parameter vector must have length {config.n_params}, "
            f"got shape {theta.shape}")
    m = config.n_inputs
    return PolicyParams(sigma=theta[:m].copy(), w=theta[m:].copy())


def validate_sigma(sigma: np.ndarray) -> None:
    if np.any(sigma == 0.0):
        raise ValueError("zero RBF width; widths enter squared and may be "
                         "negative but never exactly zero")


def receptive_field(config: RbfnnConfig, sigma: np.ndarray, x: np.ndarray,
                    i: int) -> float:
    """Response of hidden node ``i``: sum over inputs of Gaussian bumps."""
    if not 0 <= i < config.n_nodes:
        raise ValueError(f"node index {i} outside [0, {config.n_nodes})")
    sigma = np.asarray(sigma, dtype=float)
    validate_sigma(sigma)
    d = np.asarray(x, dtype=float) - config.centers[i]
    return float(np.sum(np.exp(-(d * d) / (2.0 * sigma * sigma))))


def activations(config: RbfnnConfig, sigma: np.ndarray,
                x: np.ndarray) -> np.ndarray:
    """All node responses at once, shape (n_nodes,)."""
    sigma = np.asarray(sigma, dtype=float)
    validate_sigma(sigma)
    d = np.asarray(x, dtype=float)[None, :] - config.centers
    return np.exp(-(d * d) / (2.0 * sigma * sigma)[None, :]).sum(axis=1)


def policy_output(config: RbfnnConfig, params: PolicyParams,
                  x: np.ndarray) -> float:
    """Load-current reference: weighted node sum plus bias, clamped to [0, max]."""
    raw = float(params.w @ activations(config, params.sigma, x)) + config.bias
    return min(max(raw, 0.0), config.i_ref_max)
