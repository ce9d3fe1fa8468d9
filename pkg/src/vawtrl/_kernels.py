"""Compiled episode loops.

These mirror the arithmetic of ``plant.step_dynamics``, ``policy`` and
``mppt.mppt_update`` step for step; tests assert the two routes agree.  Any
change to the model semantics has to land in both places.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from . import plant as _plant


def plant_consts(params: _plant.PlantParams) -> tuple:
    """Scalar constants consumed by the kernels, in fixed order."""
    k_e = params.phi_dc * params.pole_pairs          # EMF per rad/s
    lp = params.pole_pairs * params.l_dc             # reactive volts per (rad/s * A)
    rd_coef = 3.0 * params.l_s * params.pole_pairs / np.pi
    return (params.j_r, params.r_r, params.l_b, params.b_fr, params.rho,
            params.k_t, k_e, lp, params.r_dc, rd_coef, params.i_l_max,
            params.omega_min)


def cp_coeff_array(curve: _plant.CpCurve) -> np.ndarray:
    return np.asarray(curve.coefficients, dtype=np.float64)


@njit(cache=True)
def _step(omega, i_cmd, u, dt, cp_coefs,
          j_r, r_r, l_b, b_fr, rho, k_t, k_e, lp, r_dc, rd_coef,
          i_l_max, omega_min):
    """One plant step; returns (omega, v_l, i_l, p)."""
    i_l = i_cmd
    if i_l < 0.0:
        i_l = 0.0
    elif i_l > i_l_max:
        i_l = i_l_max
    lam = omega * r_r / u
    cp = 0.0
    for c in cp_coefs:
        cp = cp * lam + c
    cp *= lam
    p_w = rho * cp * r_r * l_b * u ** 3
    denom = omega if omega > omega_min else omega_min
    t_w = p_w / denom
    omega = omega + dt * (t_w - b_fr * omega - k_t * i_l) / j_r
    if omega < 0.0:
        omega = 0.0
    e = k_e * omega
    reactive = lp * omega * i_l
    v_l = np.sqrt(e * e + reactive * reactive) - (r_dc + rd_coef * omega) * i_l
    if v_l < 0.0:
        v_l = 0.0
    return omega, v_l, i_l, v_l * i_l


@njit(cache=True)
def rbf_episode(u, du, dt, omega0, cp_coefs,
                j_r, r_r, l_b, b_fr, rho, k_t, k_e, lp, r_dc, rd_coef,
                i_l_max, omega_min,
                centers, sigma, w, bias, i_ref_max, dom_lo, dom_hi):
    """Closed-loop episode under the RBF controller.

    Returns per-step arrays (omega, v_l, i_l, p); entry k is the state after
    step k.  Controller inputs at step k are the wind at k and the plant
    measurements left by step k-1.
    """
    n = u.shape[0]
    omega_a = np.empty(n)
    v_a = np.empty(n)
    i_a = np.empty(n)
    p_a = np.empty(n)
    n_nodes, n_inputs = centers.shape

    omega = omega0
    prev_omega = omega0
    e0 = k_e * omega0
    v_l = e0 if e0 > 0.0 else 0.0
    i_l = 0.0
    x = np.empty(n_inputs)
    for k in range(n):
        domega = (omega - prev_omega) / dt
        if domega < dom_lo:
            domega = dom_lo
        elif domega > dom_hi:
            domega = dom_hi
        x[0] = u[k]
        x[1] = du[k]
        x[2] = i_l
        x[3] = v_l
        x[4] = omega
        x[5] = domega
        act = bias
        for i in range(n_nodes):
            s = 0.0
            for j in range(n_inputs):
                d = x[j] - centers[i, j]
                s += np.exp(-(d * d) / (2.0 * sigma[j] * sigma[j]))
            act += w[i] * s
        i_ref = act
        if i_ref < 0.0:
            i_ref = 0.0
        elif i_ref > i_ref_max:
            i_ref = i_ref_max
        prev_omega = omega
        omega, v_l, i_l, p = _step(omega, i_ref, u[k], dt, cp_coefs,
                                   j_r, r_r, l_b, b_fr, rho, k_t, k_e, lp,
                                   r_dc, rd_coef, i_l_max, omega_min)
        omega_a[k] = omega
        v_a[k] = v_l
        i_a[k] = i_l
        p_a[k] = p
    return omega_a, v_a, i_a, p_a


@njit(cache=True)
def mppt_episode(u, dt, omega0, cp_coefs,
                 j_r, r_r, l_b, b_fr, rho, k_t, k_e, lp, r_dc, rd_coef,
                 i_l_max, omega_min,
                 period_s, delta_i, i_lo, i_hi, initial_i,
                 restart_fraction, restart_decay):
    """Closed-loop episode under the perturb-and-observe controller."""
    n = u.shape[0]
    omega_a = np.empty(n)
    v_a = np.empty(n)
    i_a = np.empty(n)
    p_a = np.empty(n)

    omega = omega0
    i_ref = initial_i
    direction = 1.0
    last_p = 0.0
    best_p = 0.0
    last_update_t = 0.0
    p = 0.0
    for k in range(n):
        t = k * dt
        if t - last_update_t >= period_s - 1e-9:
            best_p = p if p > best_p * restart_decay else best_p * restart_decay
            if restart_fraction > 0.0 and p < restart_fraction * best_p:
                i_ref = initial_i
                direction = 1.0
                last_p = 0.0
                best_p = 0.0
            else:
                if p < last_p:
                    direction = -direction
                i_ref = i_ref + direction * delta_i
                if i_ref < i_lo:
                    i_ref = i_lo
                elif i_ref > i_hi:
                    i_ref = i_hi
                last_p = p
            last_update_t = t
        omega, v_l, i_l, p = _step(omega, i_ref, u[k], dt, cp_coefs,
                                   j_r, r_r, l_b, b_fr, rho, k_t, k_e, lp,
                                   r_dc, rd_coef, i_l_max, omega_min)
        omega_a[k] = omega
        v_a[k] = v_l
        i_a[k] = i_l
        p_a[k] = p
    return omega_a, v_a, i_a, p_a
