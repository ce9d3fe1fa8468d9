"""Wind-speed profiles: step, sinusoid, seeded stochastic, and CSV replay.

Profiles are immutable value objects; sampling is pure, so the same profile
can be shared across concurrent episodes.  Derivatives are what the
controller sees as its wind-rate input and are clamped to the controller's
operating envelope.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np
from scipy.signal import lfilter

# Clamp applied to every derivative a profile reports, matching the wind-rate
# envelope the controller was designed around (m/s^2).
DERIVATIVE_CLAMP = (-8.33, 8.32)

# Speed envelope for the stochastic generator; also the controller's wind
# envelope (m/s).
DEFAULT_BAND = (4.66, 11.31)

# Fraction of the band width used as the knee of the soft clamp.
_KNEE_FRACTION = 0.125


def _clamp_derivative(d: float) -> float:
    lo, hi = DERIVATIVE_CLAMP
    return min(max(d, lo), hi)


@dataclass(frozen=True)
class StepWind:
    """Constant wind of ``amplitude`` from ``start`` on, ``base`` before."""

    amplitude: float
    start: float = 0.0
    base: float = 1.0

    def __post_init__(self):
        if self.amplitude <= 0 or self.base <= 0:
            raise ValueError("wind speeds must be positive")

    def sample(self, t: float) -> float:
        return self.amplitude if t >= self.start else self.base

    def derivative(self, t: float, dt: float) -> float:
        return 0.0

    def series(self, n: int, dt: float) -> np.ndarray:
        t = np.arange(n) * dt
        return np.where(t >= self.start, self.amplitude, self.base)

    def derivative_series(self, n: int, dt: float) -> np.ndarray:
        return np.zeros(n)


@dataclass(frozen=True)
class SineWind:
    """mean + amplitude * sin(angular_frequency * t)."""

    mean: float
    amplitude: float
    angular_frequency: float

    def __post_init__(self):
        if self.mean - abs(self.amplitude) <= 0:
            raise ValueError("sine wind must stay positive")

    def sample(self, t: float) -> float:
        return self.mean + self.amplitude * math.sin(self.angular_frequency * t)

    def derivative(self, t: float, dt: float) -> float:
        d = self.amplitude * self.angular_frequency \
            * math.cos(self.angular_frequency * t)
        return _clamp_derivative(d)

    def series(self, n: int, dt: float) -> np.ndarray:
        t = np.arange(n) * dt
        return self.mean + self.amplitude * np.sin(self.angular_frequency * t)

    def derivative_series(self, n: int, dt: float) -> np.ndarray:
        t = np.arange(n) * dt
        d = self.amplitude * self.angular_frequency \
            * np.cos(self.angular_frequency * t)
        return np.clip(d, *DERIVATIVE_CLAMP)


def stochastic_path(seed: int, duration: float, dt: float, mean: float,
                    intensity: float, tau: float = 3.0, floor: float = 1.0,
                    band: tuple[float, float] = DEFAULT_BAND) -> np.ndarray:
    """Seeded turbulent wind series on a fixed time grid.

    Mean wind plus a discrete Ornstein-Uhlenbeck noise path
    g[k+1] = a*g[k] + b*xi[k] with a = exp(-dt/tau) and
    b = sigma_g*sqrt(1 - a^2), sigma_g = intensity*mean, g[0] = 0.
    The result is kept inside ``band`` by a soft clamp (identity inside the
    knees, smooth exponential saturation outside) and hard-floored at
    ``floor``.  Same seed, same grid -> identical series.
    """
    if duration <= 0 or dt <= 0:
        raise ValueError("duration and dt must be positive")
    if mean <= 0:
        raise ValueError("mean wind must be positive")
    if intensity < 0:
        raise ValueError("intensity must be >= 0")
    n = int(round(duration / dt))
    if intensity == 0.0:
        g = np.zeros(n)
    else:
        a = math.exp(-dt / tau)
        b = intensity * mean * math.sqrt(1.0 - a * a)
        xi = np.random.default_rng(seed).standard_normal(n)
        y = lfilter([b], [1.0, -a], xi)
        g = np.empty(n)
        g[0] = 0.0
        g[1:] = y[:-1]
    u = mean + g
    lo, hi = band
    m = (hi - lo) * _KNEE_FRACTION
    high = u > hi - m
    u[high] = hi - m * np.exp(-(u[high] - (hi - m)) / m)
    low = u < lo + m
    u[low] = lo + m * np.exp((u[low] - (lo + m)) / m)
    return np.maximum(u, floor)


@dataclass(frozen=True)
class StochasticWind:
    """Band-limited turbulent wind, a pure function of (seed, time grid)."""

    mean: float
    seed: int
    intensity: float = 0.08
    duration: float = 150.0
    dt: float = 1e-3
    tau: float = 3.0
    floor: float = 1.0
    band: tuple[float, float] = DEFAULT_BAND

    @cached_property
    def _path(self) -> np.ndarray:
        return stochastic_path(self.seed, self.duration, self.dt, self.mean,
                               self.intensity, self.tau, self.floor, self.band)

    def _index(self, t: float) -> int:
        return min(max(int(round(t / self.dt)), 0), self._path.size - 1)

    def sample(self, t: float) -> float:
        return float(self._path[self._index(t)])

    def derivative(self, t: float, dt: float) -> float:
        if t < dt:
            return 0.0
        d = (self.sample(t) - self.sample(t - dt)) / dt
        return _clamp_derivative(d)

    def series(self, n: int, dt: float) -> np.ndarray:
        if n * dt > self.duration + self.dt:
            raise ValueError("requested series extends past the generated path")
        idx = np.clip(np.rint(np.arange(n) * dt / self.dt).astype(np.int64),
                      0, self._path.size - 1)
        return self._path[idx].copy()

    def derivative_series(self, n: int, dt: float) -> np.ndarray:
        u = self.series(n, dt)
        d = np.zeros(n)
        d[1:] = (u[1:] - u[:-1]) / dt
        return np.clip(d, *DERIVATIVE_CLAMP)


@dataclass(frozen=True)
class ReplayWind:
    """Recorded wind trace, linearly interpolated between samples."""

    times: tuple[float, ...]
    speeds: tuple[float, ...]

    def __post_init__(self):
        if len(self.times) != len(self.speeds) or len(self.times) < 2:
            raise ValueError("trace needs at least two (t, u) samples")
        if any(u <= 0 for u in self.speeds):
            raise ValueError("trace wind speeds must be positive")
        if any(b <= a for a, b in zip(self.times, self.times[1:])):
            raise ValueError("trace times must be strictly increasing")

    def sample(self, t: float) -> float:
        return float(np.interp(t, self.times, self.speeds))

    def derivative(self, t: float, dt: float) -> float:
        if t < dt:
            return 0.0
        return _clamp_derivative((self.sample(t) - self.sample(t - dt)) / dt)

    def series(self, n: int, dt: float) -> np.ndarray:
        return np.interp(np.arange(n) * dt, self.times, self.speeds)

    def derivative_series(self, n: int, dt: float) -> np.ndarray:
        u = self.series(n, dt)
        d = np.zeros(n)
        d[1:] = (u[1:] - u[:-1]) / dt
        return np.clip(d, *DERIVATIVE_CLAMP)


WindProfile = StepWind | SineWind | StochasticWind | ReplayWind


def load_wind_csv(path: str | Path) -> ReplayWind:
    """Read a two-column wind trace (t_seconds, u_mps; header row required)."""
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [c.strip() for c in header[:2]] != ["t_seconds", "u_mps"]:
            raise ValueError(f"{path}: expected header 't_seconds,u_mps'")
        times, speeds = [], []
        for row in reader:
            if not row:
                continue
            times.append(float(row[0]))
            speeds.append(float(row[1]))
    return ReplayWind(times=tuple(times), speeds=tuple(speeds))
