"""Hybrid factorization: alternate LS digital updates and Riemannian descent
on the unit-modulus analog beamformer, then normalize to the power budget.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .altmin import StopRule
from .model import Scenario


@dataclass
class ManifoldSettings:
    initial_step: float = 1.0
    shrink: float = 0.5
    slope: float = 1e-4          # Armijo sufficient-decrease parameter
    grad_tol: float = 1e-6
    max_steps: int = 200


@dataclass
class HybridFactors:
    """Unit-modulus analog stage, digital stage, and the residual trace."""

    f_rf: np.ndarray                 # (n_bs, n_rf), |entries| = 1
    f_bb: np.ndarray                 # (n_rf, n_rf)
    residual_trace: list = field(default_factory=list)
    normalized: bool = True
    regularized: bool = False

    @property
    def effective(self) -> np.ndarray:
        return self.f_rf @ self.f_bb


def _digital_ls(f_rf: np.ndarray, f_hat: np.ndarray, ridge: float = 1e-10):
    gram = f_rf.conj().T @ f_rf
    rhs = f_rf.conj().T @ f_hat
    regularized = False
    if np.linalg.cond(gram) > 1e12:
        gram = gram + ridge * (np.trace(gram).real / gram.shape[0]) * np.eye(gram.shape[0])
        regularized = True
    return np.linalg.solve(gram, rhs), regularized


def update_digital(f_rf: np.ndarray, f_hat: np.ndarray) -> np.ndarray:
    """LS minimizer of ||f_hat - f_rf f_bb||_F at fixed analog stage."""
    f_bb, regularized = _digital_ls(f_rf, f_hat)
    if regularized:
        warnings.warn("rank-deficient analog beamformer; ridge-regularized LS solve",
                      RuntimeWarning, stacklevel=2)
    return f_bb


def _retract(v: np.ndarray, fallback: np.ndarray) -> np.ndarray:
    mag = np.abs(v)
    zero = mag == 0.0
    if np.any(zero):
        v = np.where(zero, fallback, v)
        mag = np.abs(v)
    return v / mag


def update_analog(f_bb: np.ndarray, f_hat: np.ndarray, current_f_rf: np.ndarray,
                  opt: ManifoldSettings | None = None) -> np.ndarray:
    """Riemannian steepest descent on the product of unit circles.

    Euclidean gradient of 0.5 ||f_hat - X f_bb||_F^2 is -(f_hat - X f_bb) f_bb^H;
    it is projected onto the tangent space, followed along with Armijo
    backtracking, and retracted by entrywise renormalization.  The returned
    point never has a larger objective than the input.
    """
    opt = opt or ManifoldSettings()
    x = np.array(current_f_rf, dtype=complex)
    if not np.allclose(np.abs(x), 1.0, atol=1e-9):
        raise ValueError("current_f_rf entries must have unit modulus")
    x = _retract(x, np.ones_like(x))
    bh = f_bb.conj().T

    def cost(pt):
        r = f_hat - pt @ f_bb
        return 0.5 * float(np.sum(r.real ** 2 + r.imag ** 2))

    c = cost(x)
    for _ in range(opt.max_steps):
        grad = -(f_hat - x @ f_bb) @ bh
        tangent = grad - (grad * x.conj()).real * x
        gnorm2 = float(np.sum(tangent.real ** 2 + tangent.imag ** 2))
        if math.sqrt(gnorm2) < opt.grad_tol:
            break
        alpha = opt.initial_step
        while True:
            cand = _retract(x - alpha * tangent, x)
            c_cand = cost(cand)
            if c_cand <= c - opt.slope * alpha * gnorm2:
                x, c = cand, c_cand
                break
            alpha *= opt.shrink
            if alpha < 1e-18:
                return x       # no descent step found; keep the feasible point
    return x


def factorize(f_hat: np.ndarray, scenario: Scenario, stop: StopRule | None = None,
              rng: np.random.Generator | None = None,
              opt: ManifoldSettings | None = None) -> HybridFactors:
    """Alternate digital LS and analog manifold updates from a random
    unit-modulus start, then rescale the digital stage to the power budget."""
    stop = stop or StopRule(max_iters=50, relative_change_threshold=1e-6)
    rng = rng if rng is not None else np.random.default_rng(scenario.rng_seed)
    f_hat = np.asarray(f_hat, dtype=complex)
    n_bs, n_rf = f_hat.shape

    x = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, (n_bs, n_rf)))
    if not np.any(f_hat):
        return HybridFactors(f_rf=x, f_bb=np.zeros((n_rf, n_rf), dtype=complex),
                             residual_trace=[0.0], normalized=False)

    trace: list[float] = []
    regularized = False
    f_bb = np.zeros((n_rf, n_rf), dtype=complex)
    prev = None
    for _ in range(stop.max_iters):
        f_bb, reg = _digital_ls(x, f_hat)
        regularized |= reg
        trace.append(float(np.linalg.norm(f_hat - x @ f_bb)))
        x = update_analog(f_bb, f_hat, x, opt)
        res = float(np.linalg.norm(f_hat - x @ f_bb))
        trace.append(res)
        if stop.objective_threshold is not None and res <= stop.objective_threshold:
            break
        if stop.relative_change_threshold is not None and prev is not None:
            if abs(prev - res) / max(prev, 1e-15) < stop.relative_change_threshold:
                break
        prev = res

    scale = math.sqrt(scenario.p_t) / np.linalg.norm(x @ f_bb)
    return HybridFactors(f_rf=x, f_bb=scale * f_bb, residual_trace=trace,
                         normalized=True, regularized=regularized)
