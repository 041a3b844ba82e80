"""Constrained least-squares update of the unit-modulus phase vector.

Given fixed beamformers, the objective || D (Phi sum_i f_i - A p) ||_2
decouples per grid point because D and A are diagonal, so projecting the
unconstrained LS solution entrywise onto the unit circle is the exact
constrained minimizer.
"""
from __future__ import annotations

import numpy as np

from .pattern import PatternSpec

EPS_ZERO = 1e-14


def precompute_w(pattern: PatternSpec) -> np.ndarray:
    """Constant LS matrix W, restricted to the support of b.

    On rows with b_m > 0 the diagonal weights cancel and W_m = phi_m / b_m;
    rows with b_m = 0 are zero by convention (those phase entries never
    influence the objective and are carried over unchanged).
    """
    support = pattern.b > 0
    w = np.zeros_like(pattern.phi)
    w[support] = pattern.phi[support] / pattern.b[support, None]
    return w


def random_phase_vector(m: int, rng: np.random.Generator) -> np.ndarray:
    """i.i.d. uniform unit-modulus phases."""
    return np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, m))


def update_phase(w: np.ndarray, f_list, previous_p: np.ndarray) -> np.ndarray:
    """Project W sum_i f_i onto unit modulus; keep the previous phase where
    the target magnitude vanishes (off-support rows land here too)."""
    previous_p = np.asarray(previous_p, dtype=complex)
    f_sum = np.asarray(f_list, dtype=complex).reshape(-1, w.shape[1]).sum(axis=0)
    p_tilde = w @ f_sum
    mag = np.abs(p_tilde)
    out = previous_p.copy()
    live = mag > EPS_ZERO
    out[live] = p_tilde[live] / mag[live]
    # renormalize to kill rounding drift
    out /= np.abs(out)
    return out
