"""Domain types, steering vectors, and Saleh-Valenzuela channel generation.

All angles inside the library live in sine space (theta = sin(physical angle),
theta in [-1, 1]); degrees appear only at config and output boundaries.
Powers are linear milliwatts throughout; dB/dBm conversion happens once at
ingestion.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


def dbm_to_mw(dbm: float) -> float:
    """20 dBm -> 100 mW, 0 dBm -> 1 mW."""
    return 10.0 ** (dbm / 10.0)


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def deg_to_sine(deg) -> np.ndarray | float:
    return np.sin(np.deg2rad(deg))


def sine_to_deg(s) -> np.ndarray | float:
    return np.rad2deg(np.arcsin(s))


@dataclass
class Scenario:
    """Full experiment configuration for one design run.

    n_rf = n_c + n_t RF chains in total; the first n_c beams serve the
    communication users, the remaining n_t are dedicated sensing chains.
    """

    n_bs: int
    n_c: int
    user_angles_deg: tuple[float, ...]
    sinr_thresholds: tuple[float, ...]          # linear ratios, one per user
    n_t: int = 0
    p_t: float = 100.0                          # total transmit power, mW
    noise_power: float = 1.0                    # sigma^2, mW
    grid_size: int = 400
    objective_bands: tuple[tuple[float, float], ...] = ((10.0, 30.0), (40.0, 60.0))
    weight_diag: np.ndarray | None = None       # length grid_size, defaults to ones
    nlos_paths_per_user: int = 2
    nlos_gain_variance: float = 0.01
    rng_seed: int = 0

    @property
    def n_rf(self) -> int:
        return self.n_c + self.n_t

    def __post_init__(self):
        self.user_angles_deg = tuple(float(a) for a in np.atleast_1d(self.user_angles_deg))
        self.sinr_thresholds = tuple(float(g) for g in np.atleast_1d(self.sinr_thresholds))
        self.objective_bands = tuple((float(lo), float(hi)) for lo, hi in self.objective_bands)
        self.validate()

    def validate(self):
        if self.n_bs < 1:
            raise ValueError("n_bs must be a positive integer")
        if self.n_c < 1:
            raise ValueError("n_c must be a positive integer")
        if self.n_t < 0:
            raise ValueError("n_t must be a non-negative integer")
        if not self.p_t > 0:
            raise ValueError("p_t must be positive")
        if not self.noise_power > 0:
            raise ValueError("noise_power must be positive")
        if len(self.sinr_thresholds) != self.n_c:
            raise ValueError("sinr_thresholds must have one entry per user")
        if any(g <= 0 for g in self.sinr_thresholds):
            raise ValueError("sinr_thresholds must all be positive")
        if self.grid_size < 2:
            raise ValueError("grid_size must be at least 2")
        if len(self.user_angles_deg) != self.n_c:
            raise ValueError("user_angles_deg must have one entry per user")
        if not self.objective_bands:
            raise ValueError("objective_bands must be non-empty")
        for lo, hi in self.objective_bands:
            if not (-90.0 < lo <= 90.0 and -90.0 < hi <= 90.0):
                raise ValueError("objective_bands must lie within (-90, 90] degrees")
            if not hi > lo:
                raise ValueError("objective_bands must have upper > lower")
        if self.nlos_paths_per_user < 0:
            raise ValueError("nlos_paths_per_user must be non-negative")
        if self.nlos_gain_variance < 0:
            raise ValueError("nlos_gain_variance must be non-negative")
        if self.weight_diag is not None:
            w = np.asarray(self.weight_diag, dtype=float)
            if w.shape != (self.grid_size,):
                raise ValueError("weight_diag must have grid_size entries")
            if np.any(w < 0):
                raise ValueError("weight_diag entries must be non-negative")
            self.weight_diag = w


def steering_vector(n: int, theta: float) -> np.ndarray:
    """Unit-norm ULA response: entry k is exp(j*pi*k*theta)/sqrt(n)."""
    if n < 1:
        raise ValueError("antenna count must be at least 1")
    k = np.arange(n)
    return np.exp(1j * np.pi * k * theta) / math.sqrt(n)


def channel_row(n_bs: int, paths) -> np.ndarray:
    """Assemble one user channel row sqrt(n_bs/L) * sum_l g_l * alpha^H(n_bs, theta_l)."""
    gains = np.array([g for g, _ in paths], dtype=complex)
    aods = np.array([a for _, a in paths], dtype=float)
    if gains.size == 0:
        raise ValueError("channel needs at least one path")
    # alpha^H rows stacked: conj of the steering vectors
    steer = np.exp(-1j * np.pi * np.outer(aods, np.arange(n_bs))) / math.sqrt(n_bs)
    return math.sqrt(n_bs / gains.size) * (gains @ steer)


@dataclass
class ChannelSet:
    """Stacked user channels; row n of h is user n's 1 x n_bs channel."""

    h: np.ndarray                                   # (n_c, n_bs) complex
    paths: list = field(default_factory=list)       # per user: [(gain, aod_sine), ...]

    @property
    def n_bs(self) -> int:
        return self.h.shape[1]

    def reconstruct(self) -> np.ndarray:
        """Recompute h from the stored path parameters (consistency oracle)."""
        return np.vstack([channel_row(self.n_bs, plist) for plist in self.paths])


def complex_normal(rng: np.random.Generator, variance: float, size=None) -> np.ndarray:
    """CN(0, variance): independent real/imag parts with variance/2 each."""
    s = math.sqrt(variance / 2.0)
    return rng.normal(0.0, s, size) + 1j * rng.normal(0.0, s, size)


def generate_channels(scenario: Scenario, rng: np.random.Generator) -> ChannelSet:
    """Draw one Saleh-Valenzuela channel realization for every user.

    Per user: one LoS path with CN(0,1) gain at the configured angle, plus
    nlos_paths_per_user NLoS paths with CN(0, nlos_gain_variance) gains and
    sine-space AoDs drawn uniformly from [-1, 1].
    """
    rows = []
    all_paths = []
    for angle_deg in scenario.user_angles_deg:
        paths = [(complex(complex_normal(rng, 1.0)), float(deg_to_sine(angle_deg)))]
        n_nlos = scenario.nlos_paths_per_user
        if n_nlos > 0:
            gains = complex_normal(rng, scenario.nlos_gain_variance, n_nlos)
            aods = rng.uniform(-1.0, 1.0, n_nlos)
            paths.extend((complex(g), float(a)) for g, a in zip(gains, aods))
        rows.append(channel_row(scenario.n_bs, paths))
        all_paths.append(paths)
    return ChannelSet(h=np.vstack(rows), paths=all_paths)
