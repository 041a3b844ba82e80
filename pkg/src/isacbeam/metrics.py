"""End-to-end evaluation: achieved SINR, dBi beam patterns, and pattern MSE
for the designed beam with and without hybrid factorization."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .altmin import BeamDesign
from .factorize import HybridFactors
from .model import Scenario, ChannelSet, sine_to_deg
from .pattern import PatternSpec, beam_pattern, pattern_mse

DB_FLOOR = -120.0
SINR_SLACK = 1e-6


def sinr(channels: ChannelSet, f_columns: np.ndarray, noise_power: float) -> np.ndarray:
    """Per-user linear SINR |h_n f_n|^2 / (sum_{i != n} |h_n f_i|^2 + sigma^2).

    f_columns is n_bs x n_rf with one beam per column; columns beyond the
    user count act purely as interference.
    """
    f_columns = np.asarray(f_columns)
    if f_columns.ndim != 2 or f_columns.shape[0] != channels.h.shape[1]:
        raise ValueError("f_columns must be n_bs x n_rf")
    n_c = channels.h.shape[0]
    if f_columns.shape[1] < n_c:
        raise ValueError("need at least one beam per user")
    power = np.abs(channels.h @ f_columns) ** 2      # (n_c, n_rf)
    signal = np.diagonal(power[:, :n_c]).copy()
    interference = power.sum(axis=1) - signal
    return signal / (interference + noise_power)


def sinr_db(values: np.ndarray) -> np.ndarray:
    return 10.0 * np.log10(np.maximum(np.asarray(values, float), 10.0 ** (DB_FLOOR / 10.0)))


def pattern_dbi(values: np.ndarray, n_rf: int, p_t: float) -> np.ndarray:
    """Display normalization: 20 log10(|.| / sqrt(n_rf p_t)), floored at -120 dB."""
    scaled = np.asarray(values, float) / math.sqrt(n_rf * p_t)
    return 20.0 * np.log10(np.maximum(scaled, 10.0 ** (DB_FLOOR / 20.0)))


@dataclass
class EvaluationReport:
    sinr_db_design: np.ndarray       # per user, designed beams
    sinr_db_hybrid: np.ndarray       # per user, after hybrid factorization
    mse_no_hbf: float
    mse_hbf: float
    angle_deg: np.ndarray
    objective_dbi: np.ndarray
    dtb_dbi: np.ndarray
    dtb_hbf_dbi: np.ndarray
    feasible: np.ndarray             # per-user threshold satisfaction, designed beams


def evaluate(design: BeamDesign, factors: HybridFactors, channels: ChannelSet,
             pattern: PatternSpec, scenario: Scenario) -> EvaluationReport:
    f_hat = design.f_hat                       # (n_bs, n_rf)
    eff = factors.effective
    n_rf, p_t = scenario.n_rf, scenario.p_t

    sinr_hat = sinr(channels, f_hat, scenario.noise_power)
    sinr_eff = sinr(channels, eff, scenario.noise_power)
    thresholds = np.asarray(scenario.sinr_thresholds)

    return EvaluationReport(
        sinr_db_design=sinr_db(sinr_hat),
        sinr_db_hybrid=sinr_db(sinr_eff),
        mse_no_hbf=pattern_mse(pattern.phi, f_hat.T, pattern.b, n_rf, p_t),
        mse_hbf=pattern_mse(pattern.phi, eff.T, pattern.b, n_rf, p_t),
        angle_deg=np.asarray(sine_to_deg(pattern.grid)),
        objective_dbi=pattern_dbi(pattern.b, n_rf, p_t),
        dtb_dbi=pattern_dbi(beam_pattern(pattern.phi, f_hat.sum(axis=1)), n_rf, p_t),
        dtb_hbf_dbi=pattern_dbi(beam_pattern(pattern.phi, eff.sum(axis=1)), n_rf, p_t),
        feasible=sinr_hat >= thresholds * (1.0 - SINR_SLACK),
    )
