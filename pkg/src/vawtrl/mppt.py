"""Perturb-and-observe maximum power point tracking on the load current.

Classic hill climbing: every sampling period, keep stepping the current
reference in the same direction while measured power keeps rising, flip the
direction when it falls.  One addition guards this plant's failure mode: the
rotor produces no torque at standstill, so a stall is unrecoverable.  If
measured power collapses below a fraction of its (slowly forgotten) best,
the tracker resets its reference to the gentle initial value while the rotor
still has momentum.  Set ``restart_fraction`` to 0 for the bare textbook rule.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class MpptConfig:
    period_s: float = 0.1        # sampling period of the tracker
    delta_i: float = 0.02        # current step per update, A
    i_lo: float = 0.0
    i_hi: float = 10.0
    initial_i: float = 0.5       # gentle start
    restart_fraction: float = 0.25   # power-collapse threshold; 0 disables
    restart_decay: float = 0.995     # per-update forgetting of the best power

    def __post_init__(self):
        if self.period_s <= 0:
            raise ValueError("period_s must be positive")
        if self.delta_i <= 0:
            raise ValueError("delta_i must be positive")
        if not self.i_lo <= self.initial_i <= self.i_hi:
            raise ValueError("initial_i outside [i_lo, i_hi]")
        if not 0.0 <= self.restart_fraction < 1.0:
            raise ValueError("restart_fraction must be in [0, 1)")
        if not 0.0 < self.restart_decay <= 1.0:
            raise ValueError("restart_decay must be in (0, 1]")


@dataclass(frozen=True)
class MpptState:
    last_power: float
    direction: float
    i_ref: float
    last_update_t: float
    best_power: float


def initial_mppt_state(config: MpptConfig) -> MpptState:
    return MpptState(last_power=0.0, direction=1.0, i_ref=config.initial_i,
                     last_update_t=0.0, best_power=0.0)


def mppt_update(config: MpptConfig, state: MpptState, p_now: float,
                t: float) -> tuple[MpptState, float]:
    """Advance the tracker; returns (new state, current reference).

    Nothing changes until a full sampling period has elapsed since the last
    update; between updates the reference is held.
    """
    if t < state.last_update_t:
        raise ValueError("time ran backwards")
    if t - state.last_update_t < config.period_s - 1e-9:
        return state, state.i_ref

    best = p_now if p_now > state.best_power * config.restart_decay \
        else state.best_power * config.restart_decay
    if config.restart_fraction > 0.0 and p_now < config.restart_fraction * best:
        new = MpptState(last_power=0.0, direction=1.0, i_ref=config.initial_i,
                        last_update_t=t, best_power=0.0)
        return new, new.i_ref

    direction = state.direction if p_now >= state.last_power else -state.direction
    i_ref = min(max(state.i_ref + direction * config.delta_i, config.i_lo),
                config.i_hi)
    new = MpptState(last_power=p_now, direction=direction, i_ref=i_ref,
                    last_update_t=t, best_power=best)
    return new, i_ref
