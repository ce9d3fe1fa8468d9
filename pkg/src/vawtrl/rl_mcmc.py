"""Pseudo-marginal Metropolis-Hastings policy search over controller parameters.

The posterior being sampled is proportional to prior(theta) * J(theta) where
J = exp(sum of per-step rewards) of one closed-loop episode.  With the default
state weight the exponent reaches magnitudes around 1e14, so J itself is never
formed: the chain stores and compares log J only, and the accept step works
entirely in the log domain.  A noisy but unbiased, non-negative estimate of J
leaves the stationary distribution unchanged, which is what lets a single
rollout stand in for the expectation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import _kernels, plant, policy, wind


@dataclass(frozen=True)
class RlConfig:
    """Training and episode settings for the chain."""

    state_weight: float = 1e5        # Q in the reward -Q * s^2
    discount: float = 1.0            # per-step reward discount, in (0, 1]
    horizon_s: float = 150.0         # episode length
    dt: float = 1e-3                 # plant sampling time
    proposal_sd: float = 1.0         # random-walk step SD per component
    prior_variance: float = 1e4      # zero-mean Gaussian prior, per component
    iterations: int = 200
    final_window: int = 50           # trailing iterations averaged into theta
    rollouts_per_estimate: int = 1
    reward_scale: float = 1.0        # optional shrink of |log J|; 1 = exact

    def __post_init__(self):
        if self.state_weight <= 0:
            raise ValueError("state_weight must be positive")
        if not 0.0 < self.discount <= 1.0:
            raise ValueError("discount must be in (0, 1]")
        if self.horizon_s <= 0 or self.dt <= 0:
            raise ValueError("horizon_s and dt must be positive")
        if self.proposal_sd < 0:
            raise ValueError("proposal_sd must be >= 0")
        if self.prior_variance <= 0:
            raise ValueError("prior_variance must be positive")
        if self.iterations < 0:
            raise ValueError("iterations must be >= 0")
        if not 1 <= self.final_window <= max(self.iterations, 1):
            raise ValueError("final_window must be in [1, iterations]")
        if self.rollouts_per_estimate < 1:
            raise ValueError("rollouts_per_estimate must be >= 1")
        if self.reward_scale <= 0:
            raise ValueError("reward_scale must be positive")

    @property
    def n_steps(self) -> int:
        return int(round(self.horizon_s / self.dt))


@dataclass
class EpisodeLog:
    """Per-step series of one closed-loop episode (entry k = state after step k)."""

    dt: float
    omega0: float
    u: np.ndarray
    du: np.ndarray
    omega: np.ndarray
    v_l: np.ndarray
    i_l: np.ndarray
    p: np.ndarray
    p_star: np.ndarray
    blown_up: bool = False

    @property
    def t(self) -> np.ndarray:
        return (np.arange(self.u.size) + 1) * self.dt


@dataclass
class EnergyLedger:
    """Delivered vs best-case energy over an episode."""

    e_out: float
    e_star: float
    error: float
    efficiency: float
    p: np.ndarray
    p_star: np.ndarray


@dataclass
class ChainState:
    """Current point and full trace of one Metropolis-Hastings run."""

    theta: np.ndarray
    log_j: float
    iteration: int
    accepted_count: int
    thetas: np.ndarray          # (iterations, dim), chain state per iteration
    log_js: np.ndarray
    accepted: np.ndarray        # bool per iteration
    rng: np.random.Generator

    @property
    def acceptance_rate(self) -> float:
        return self.accepted_count / max(self.iteration, 1)


def reward(s: float, state_weight: float) -> float:
    """Per-step reward -Q * s^2 for tracking error s (always <= 0)."""
    if not math.isfinite(s):
        raise ValueError("tracking error must be finite")
    return -s * s * state_weight


def episode_log_cost(log: EpisodeLog, config: RlConfig) -> float:
    """log J of an episode: the discounted sum of rewards on s = p_star - p."""
    s = log.p_star - log.p
    q = config.state_weight * config.reward_scale
    if config.discount == 1.0:
        return float(-q * np.dot(s, s))
    gammas = config.discount ** np.arange(s.size)
    return float(-q * np.dot(gammas, s * s))


def energy_ledger(log: EpisodeLog) -> EnergyLedger:
    """Integrate delivered and best-case power over the episode."""
    if log.p.size == 0:
        raise ValueError("empty episode")
    e_out = float(np.sum(log.p) * log.dt)
    e_star = float(np.sum(log.p_star) * log.dt)
    return EnergyLedger(e_out=e_out, e_star=e_star, error=e_star - e_out,
                        efficiency=e_out / e_star, p=log.p, p_star=log.p_star)


def rollout(theta: np.ndarray, profile: wind.WindProfile, config: RlConfig,
            plant_params: plant.PlantParams, rbf_config: policy.RbfnnConfig,
            omega0: float = plant.DEFAULT_OMEGA0,
            ) -> tuple[EpisodeLog, float]:
    """Simulate one episode under the controller ``theta``.

    Returns the episode log and log J.  A numeric blow-up is reported as
    log J = -inf with the episode flagged, never as an exception.
    """
    params = policy.unpack(theta, rbf_config)
    policy.validate_sigma(params.sigma)

    n = config.n_steps
    dt = config.dt
    u = np.ascontiguousarray(profile.series(n, dt), dtype=np.float64)
    du = np.ascontiguousarray(profile.derivative_series(n, dt), dtype=np.float64)
    dom_lo, dom_hi = rbf_config.input_ranges[5]

    omega, v_l, i_l, p = _kernels.rbf_episode(
        u, du, dt, omega0, _kernels.cp_coeff_array(plant_params.cp_curve),
        *_kernels.plant_consts(plant_params),
        rbf_config.centers, params.sigma, params.w, rbf_config.bias,
        rbf_config.i_ref_max, dom_lo, dom_hi)

    curve = plant_params.cp_curve
    p_star = plant_params.rho * curve.cp_max * plant_params.r_r \
        * plant_params.l_b * u ** 3
    log = EpisodeLog(dt=dt, omega0=omega0, u=u, du=du, omega=omega,
                     v_l=v_l, i_l=i_l, p=p, p_star=p_star)
    if not np.isfinite(omega[-1]) or not np.all(np.isfinite(p)):
        log.blown_up = True
        return log, -math.inf
    return log, episode_log_cost(log, config)


def log_prior(theta: np.ndarray, config: RlConfig) -> float:
    """Log density (up to a constant) of the independent Gaussian prior."""
    theta = np.asarray(theta, dtype=float)
    return float(-0.5 * np.dot(theta, theta) / config.prior_variance)


def propose(theta: np.ndarray, proposal_sd: float | np.ndarray,
            rng: np.random.Generator) -> np.ndarray:
    """Symmetric Gaussian random-walk proposal."""
    theta = np.asarray(theta, dtype=float)
    return theta + proposal_sd * rng.standard_normal(theta.shape)


def accept(log_numerator: float, log_denominator: float,
           rng: np.random.Generator) -> bool:
    """Metropolis accept/reject on log(prior * J) values.

    The symmetric proposal cancels from the ratio.  Both sides at -inf
    reject; a -inf incumbent always yields to a finite candidate.
    """
    if log_numerator == -math.inf:
        return False
    if log_denominator == -math.inf:
        return True
    return math.log(rng.uniform()) < log_numerator - log_denominator


CostEstimator = Callable[[np.ndarray, np.random.Generator], float]


def make_wecs_estimator(profile: wind.WindProfile, config: RlConfig,
                        plant_params: plant.PlantParams,
                        rbf_config: policy.RbfnnConfig,
                        omega0: float = plant.DEFAULT_OMEGA0) -> CostEstimator:
    """Episode-based log J estimator for the chain.

    With ``rollouts_per_estimate`` > 1 and a stochastic wind, each estimate
    averages J over freshly seeded winds in the log domain (log-mean-exp),
    which keeps the estimator unbiased in J.
    """
    k = config.rollouts_per_estimate

    def estimate(theta: np.ndarray, rng: np.random.Generator) -> float:
        if k == 1 or not isinstance(profile, wind.StochasticWind):
            return rollout(theta, profile, config, plant_params, rbf_config,
                           omega0)[1]
        logs = np.empty(k)
        seeds = rng.integers(0, 2 ** 63 - 1, size=k)
        for i in range(k):
            redrawn = wind.StochasticWind(
                mean=profile.mean, seed=int(seeds[i]),
                intensity=profile.intensity, duration=profile.duration,
                dt=profile.dt, tau=profile.tau, floor=profile.floor,
                band=profile.band)
            logs[i] = rollout(theta, redrawn, config, plant_params,
                              rbf_config, omega0)[1]
        m = logs.max()
        if m == -math.inf:
            return -math.inf
        return float(m + np.log(np.mean(np.exp(logs - m))) )

    return estimate


def run_chain(config: RlConfig, cost_estimator: CostEstimator,
              theta0: np.ndarray, rng: np.random.Generator,
              ) -> tuple[ChainState, np.ndarray]:
    """Run the Metropolis-Hastings loop and average the trailing window.

    Returns the full chain state and the finalized parameter vector (the
    componentwise mean of the last ``final_window`` iterations, or theta0
    for a zero-iteration run).
    """
    theta = np.asarray(theta0, dtype=float).copy()
    n_iter = config.iterations
    dim = theta.size
    thetas = np.empty((n_iter, dim))
    log_js = np.empty(n_iter)
    accepted = np.zeros(n_iter, dtype=bool)

    log_j = cost_estimator(theta, rng)
    n_acc = 0
    for ell in range(n_iter):
        candidate = propose(theta, config.proposal_sd, rng)
        log_j_cand = cost_estimator(candidate, rng)
        ln_num = log_prior(candidate, config) + log_j_cand
        ln_den = log_prior(theta, config) + log_j
        if accept(ln_num, ln_den, rng):
            theta, log_j = candidate, log_j_cand
            accepted[ell] = True
            n_acc += 1
        thetas[ell] = theta
        log_js[ell] = log_j

    state = ChainState(theta=theta, log_j=log_j, iteration=n_iter,
                       accepted_count=n_acc, thetas=thetas, log_js=log_js,
                       accepted=accepted, rng=rng)
    if n_iter == 0:
        return state, theta.copy()
    window = min(config.final_window, n_iter)
    return state, thetas[-window:].mean(axis=0)
