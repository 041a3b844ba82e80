"""Angle grid, objective radar beam pattern, and pattern quality metrics."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import Scenario, deg_to_sine, sine_to_deg


@dataclass
class PatternSpec:
    """Sampling matrix, objective pattern and weights over one angle grid.

    phi rows are transposed steering vectors at the grid points; a_diag is
    the objective pattern itself (the diagonal gain matrix applied to the
    phase vector).
    """

    phi: np.ndarray        # (m, n_bs) complex
    b: np.ndarray          # (m,) nonnegative objective pattern
    d_diag: np.ndarray     # (m,) nonnegative weights
    a_diag: np.ndarray     # (m,) == b
    grid: np.ndarray       # (m,) strictly increasing sine-space points in (-1, 1]

    @property
    def m(self) -> int:
        return self.grid.size

    @property
    def n_bs(self) -> int:
        return self.phi.shape[1]


def build_grid(m: int) -> np.ndarray:
    """m equally spaced sine-space points spanning (-1, 1], max exactly 1."""
    if m < 2:
        raise ValueError("grid needs at least 2 points")
    return -1.0 + 2.0 * np.arange(1, m + 1) / m


def build_objective(scenario: Scenario, grid: np.ndarray) -> np.ndarray:
    """Flat-top objective pattern over the configured angle bands.

    The in-band gain G = sqrt(2 * n_rf * p_t / sum_bands(sin(hi) - sin(lo)))
    spreads twice the total radiated power uniformly over the bands in sine
    space; outside the bands the objective is zero.  Band membership is
    inclusive at both edges.
    """
    bands = scenario.objective_bands
    if not bands:
        raise ValueError("objective_bands must be non-empty")
    denom = 0.0
    for lo, hi in bands:
        width = float(deg_to_sine(hi) - deg_to_sine(lo))
        if width <= 0.0:
            raise ValueError("objective_bands must have positive measure")
        denom += width
    gain = math.sqrt(2.0 * scenario.n_rf * scenario.p_t / denom)
    angles = sine_to_deg(grid)
    mask = np.zeros(grid.size, dtype=bool)
    eps = 1e-9                    # keep exact band edges inside despite rounding
    for lo, hi in bands:
        mask |= (angles >= lo - eps) & (angles <= hi + eps)
    return np.where(mask, gain, 0.0)


def make_pattern_spec(scenario: Scenario) -> PatternSpec:
    grid = build_grid(scenario.grid_size)
    phi = np.exp(1j * np.pi * np.outer(grid, np.arange(scenario.n_bs))) / math.sqrt(scenario.n_bs)
    b = build_objective(scenario, grid)
    d = np.ones(grid.size) if scenario.weight_diag is None else np.asarray(scenario.weight_diag, float)
    return PatternSpec(phi=phi, b=b, d_diag=d, a_diag=b.copy(), grid=grid)


def beam_pattern(phi: np.ndarray, f_sum: np.ndarray) -> np.ndarray:
    """Elementwise |phi @ f_sum|: the transmit beam projected on the grid."""
    f_sum = np.asarray(f_sum)
    if phi.ndim != 2 or f_sum.shape != (phi.shape[1],):
        raise ValueError("f_sum length must match the sampling matrix columns")
    return np.abs(phi @ f_sum)


def pattern_mse(phi: np.ndarray, f_list, b: np.ndarray, n_rf: int, p_t: float) -> float:
    """Radar-quality metric: || |phi sum_i f_i| - b ||_2^2 / (n_rf * p_t)."""
    f_arr = np.asarray(f_list)
    if f_arr.ndim != 2 or f_arr.shape[1] != phi.shape[1]:
        raise ValueError("f_list must be beamformers of length matching phi columns")
    b = np.asarray(b, dtype=float)
    if b.shape != (phi.shape[0],):
        raise ValueError("b length must match the sampling matrix rows")
    r = beam_pattern(phi, f_arr.sum(axis=0)) - b
    return float(r @ r) / (n_rf * p_t)


def design_objective(spec: PatternSpec, f_sum: np.ndarray, p: np.ndarray) -> float:
    """Phase-augmented design objective ||D (phi f_sum - b.p)||_2."""
    return float(np.linalg.norm(spec.d_diag * (spec.phi @ f_sum - spec.b * p)))
