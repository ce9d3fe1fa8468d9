"""Desk-scale vertical-axis wind turbine plant model.

The chain is: rotor aerodynamics (power-coefficient polynomial in the tip
speed ratio) -> single-mass rotor mechanics -> permanent-magnet synchronous
generator seen through its rectified DC-equivalent circuit -> controllable
resistive load.  The only control input is the commanded load current; the
load voltage follows from rotor speed and current.

Units are SI throughout: rad/s for rotor speed, m/s for wind, W, V, A, N*m.

The generator constants (pole pairs, flux, stator inductance/resistance and
the torque constant) are assumptions, not measured values; they were chosen
so that load voltage and current land inside the controller's operating
envelope at the winds of interest, and every one of them can be overridden
through the harness config.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

# Experimentally identified 6th-order power-coefficient polynomial for the
# modeled 3-blade rotor, highest degree first, no constant term:
# cp(lam) = c6*lam^6 + c5*lam^5 + ... + c1*lam
DEFAULT_CP_COEFFS = (-0.3015, 1.9004, -4.3520, 4.1121, -1.2969, 0.2954)

# Grid pitch used to locate the cached optimum of the cp curve.
CP_SEARCH_STEP = 1e-4

# Default initial rotor speed for episodes (rad/s).  The polynomial gives
# zero torque at standstill, so episodes must start barely spinning.
DEFAULT_OMEGA0 = 1.0


@dataclass(frozen=True)
class CpCurve:
    """Power coefficient as a polynomial in tip speed ratio, with cached optimum."""

    coefficients: tuple[float, ...] = DEFAULT_CP_COEFFS
    lambda_hi: float = 2.0
    lambda_star: float = field(init=False)
    cp_max: float = field(init=False)

    def __post_init__(self):
        if len(self.coefficients) != 6:
            raise ValueError("cp polynomial needs exactly 6 coefficients")
        if self.lambda_hi <= 0:
            raise ValueError("lambda_hi must be positive")
        lam = np.arange(0.0, self.lambda_hi + CP_SEARCH_STEP / 2, CP_SEARCH_STEP)
        vals = np.polyval(np.append(self.coefficients, 0.0), lam)
        k = int(np.argmax(vals))
        object.__setattr__(self, "lambda_star", float(lam[k]))
        object.__setattr__(self, "cp_max", float(vals[k]))


def cp(curve: CpCurve, tsr: float) -> float:
    """Power coefficient at tip speed ratio ``tsr`` (dimensionless)."""
    if tsr < 0:
        raise ValueError(f"tip speed ratio must be >= 0, got {tsr}")
    acc = 0.0
    for c in curve.coefficients:
        acc = acc * tsr + c
    return acc * tsr


@dataclass(frozen=True)
class PlantParams:
    """Rotor, aerodynamic and generator constants.

    ``k_t`` defaults to phi_dc * pole_pairs, which makes the electromechanical
    coupling lossless: the rectified EMF times load current equals generator
    torque times rotor speed.
    """

    j_r: float = 2.0          # rotor inertia, kg*m^2
    r_r: float = 0.5          # rotor radius, m
    l_b: float = 1.0          # blade length, m
    b_fr: float = 0.02        # friction coefficient, N*s/rad
    rho: float = 1.2          # air density, kg/m^3
    cp_curve: CpCurve = field(default_factory=CpCurve)
    pole_pairs: int = 4
    phi_s: float = 0.2        # per-phase flux, Wb
    l_s: float = 5e-3         # per-phase inductance, H
    r_s: float = 0.5          # per-phase resistance, ohm
    k_t: float | None = None  # torque constant, N*m/A (None -> derived)
    i_l_max: float = 10.0     # load current limit, A
    omega_min: float = 0.1    # denominator floor for the wind torque, rad/s

    def __post_init__(self):
        for name in ("j_r", "r_r", "l_b", "b_fr", "rho", "phi_s", "l_s",
                     "r_s", "i_l_max", "omega_min"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.pole_pairs < 1:
            raise ValueError("pole_pairs must be a positive integer")
        if self.k_t is None:
            object.__setattr__(self, "k_t", self.phi_dc * self.pole_pairs)
        elif self.k_t <= 0:
            raise ValueError("k_t must be positive")

    # DC-equivalent quantities of the PMSG-rectifier stage.
    @property
    def phi_dc(self) -> float:
        return 3.0 * math.sqrt(6.0) * self.phi_s / math.pi

    @property
    def l_dc(self) -> float:
        return 18.0 * self.l_s / math.pi ** 2

    @property
    def r_dc(self) -> float:
        return 18.0 * self.r_s / math.pi ** 2

    def e_sdc(self, omega_r: float) -> float:
        """Rectified open-circuit EMF at rotor speed ``omega_r``."""
        return self.phi_dc * self.pole_pairs * omega_r

    def r_overlap(self, omega_r: float) -> float:
        """Speed-dependent commutation/overlap resistance of the diode bridge."""
        return 3.0 * self.l_s * self.pole_pairs * omega_r / math.pi


@dataclass(frozen=True)
class PlantState:
    """Instantaneous plant state; ``p`` is the electrical power v_l * i_l."""

    t: float
    omega_r: float
    i_l: float
    v_l: float
    p: float


def initial_state(params: PlantParams, omega0: float = DEFAULT_OMEGA0) -> PlantState:
    if omega0 < 0:
        raise ValueError("initial rotor speed must be >= 0")
    return PlantState(t=0.0, omega_r=omega0, i_l=0.0,
                      v_l=load_voltage(params, omega0, 0.0), p=0.0)


def tip_speed_ratio(omega_r: float, u_w: float, r_r: float) -> float:
    """Tip speed ratio omega_r * r_r / u_w."""
    if u_w <= 0:
        raise ValueError(f"wind speed must be positive, got {u_w}")
    return omega_r * r_r / u_w


def wind_power(params: PlantParams, u_w: float, tsr: float) -> float:
    """Aerodynamic power captured by the rotor at wind ``u_w`` and ratio ``tsr``.

    Equals 0.5 * rho * cp * swept_area * u^3 with swept_area = 2 * r_r * l_b.
    """
    if u_w <= 0:
        raise ValueError(f"wind speed must be positive, got {u_w}")
    return params.rho * cp(params.cp_curve, tsr) * params.r_r * params.l_b * u_w ** 3


def wind_torque(params: PlantParams, u_w: float, omega_r: float) -> float:
    """Aerodynamic torque, wind power over rotor speed (floored at omega_min)."""
    tsr = tip_speed_ratio(omega_r, u_w, params.r_r)
    return wind_power(params, u_w, tsr) / max(omega_r, params.omega_min)


def friction_torque(params: PlantParams, omega_r: float) -> float:
    if omega_r < 0:
        raise ValueError("rotor speed must be >= 0")
    return params.b_fr * omega_r


def generator_torque(params: PlantParams, i_l: float) -> float:
    return params.k_t * i_l


def load_voltage(params: PlantParams, omega_r: float, i_l: float) -> float:
    """DC load voltage for rotor speed ``omega_r`` and load current ``i_l``.

    Clamped at zero from below: the expression can go negative at high
    current and low speed, which a diode rectifier cannot produce.
    """
    if omega_r < 0:
        raise ValueError("rotor speed must be >= 0")
    if i_l < 0 or i_l > params.i_l_max:
        raise ValueError(f"load current outside [0, {params.i_l_max}]: {i_l}")
    e = params.e_sdc(omega_r)
    reactive = params.pole_pairs * omega_r * params.l_dc * i_l
    v = math.sqrt(e * e + reactive * reactive) \
        - (params.r_dc + params.r_overlap(omega_r)) * i_l
    return max(v, 0.0)


def step_dynamics(params: PlantParams, state: PlantState, i_l_cmd: float,
                  u_w: float, dt: float) -> PlantState:
    """Advance the plant one explicit-Euler step of length ``dt``.

    The commanded current is clamped to [0, i_l_max] and applied within the
    same step (no actuator dynamics); rotor speed is floored at zero.
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if u_w <= 0:
        raise ValueError(f"wind speed must be positive, got {u_w}")
    if not (math.isfinite(state.omega_r) and math.isfinite(state.v_l)
            and math.isfinite(state.i_l)):
        raise FloatingPointError("non-finite plant state")

    i_l = min(max(i_l_cmd, 0.0), params.i_l_max)
    t_w = wind_torque(params, u_w, state.omega_r)
    accel = (t_w - params.b_fr * state.omega_r - params.k_t * i_l) / params.j_r
    omega = max(state.omega_r + dt * accel, 0.0)
    v_l = load_voltage(params, omega, i_l)
    return PlantState(t=state.t + dt, omega_r=omega, i_l=i_l, v_l=v_l,
                      p=v_l * i_l)


def nominal_power(params: PlantParams, u_w: float) -> float:
    """Best-case aerodynamic power at wind ``u_w`` (cp held at its maximum)."""
    if u_w <= 0:
        raise ValueError(f"wind speed must be positive, got {u_w}")
    return params.rho * params.cp_curve.cp_max * params.r_r * params.l_b * u_w ** 3


def optimal_rotor_speed(params: PlantParams, u_w: float) -> float:
    """Rotor speed that holds the tip speed ratio at the cp-curve optimum."""
    if u_w <= 0:
        raise ValueError(f"wind speed must be positive, got {u_w}")
    return params.cp_curve.lambda_star * u_w / params.r_r
