"""Alternating minimization driver for the transmit-beam design.

Iterates the fixed-phase SOCP (global optimum at fixed p) and the exact
phase projection (global optimum at fixed f), so the objective trace is
non-increasing up to solver tolerance.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import conic
from .model import Scenario, ChannelSet
from .pattern import PatternSpec, design_objective
from .phase import precompute_w, random_phase_vector, update_phase


@dataclass
class StopRule:
    """Stop when any configured criterion triggers; max_iters always applies."""

    max_iters: int = 20
    objective_threshold: float | None = None
    relative_change_threshold: float | None = 1e-4

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")


@dataclass
class BeamDesign:
    """Designed beamformers, final phase vector, and the objective trace.

    f_list rows are the n_rf beamformers; the trace holds the objective
    after every half step (conic solve, then phase update).  status is one
    of converged / max-iters / infeasible / failed ("failed" carries the
    best previous iterate after a mid-run solver failure).
    """

    f_list: np.ndarray
    f_stacked: np.ndarray
    p: np.ndarray
    trace: list = field(default_factory=list)
    status: str = "converged"
    iterations: int = 0
    detail: str = ""

    @property
    def f_hat(self) -> np.ndarray:
        """Beamformers as matrix columns (n_bs x n_rf)."""
        return self.f_list.T.copy()


def design_transmit_beam(scenario: Scenario, channels: ChannelSet,
                         pattern: PatternSpec, stop: StopRule | None = None,
                         rng: np.random.Generator | None = None) -> BeamDesign:
    """Alternate SOCP beam updates and phase projections from a random p."""
    stop = stop or StopRule()
    rng = rng if rng is not None else np.random.default_rng(scenario.rng_seed)

    w = precompute_w(pattern)
    s_map = conic.SelectorMap(n_bs=scenario.n_bs, n_rf=scenario.n_rf)
    p = random_phase_vector(pattern.m, rng)

    empty = np.zeros((0, scenario.n_bs), dtype=complex)
    trace: list[float] = []
    f_cur: np.ndarray | None = None
    status = "max-iters"
    detail = ""
    prev_full: float | None = None
    it = 0

    while it < stop.max_iters:
        it += 1
        problem = conic.assemble(pattern, channels, scenario, p)
        sol = conic.solve(problem)
        if sol.solver_status == "infeasible" and f_cur is None:
            return BeamDesign(f_list=empty, f_stacked=np.zeros(0, dtype=complex),
                              p=p, trace=trace, status="infeasible", iterations=it,
                              detail="SINR thresholds unreachable under the power budget")
        if sol.solver_status not in ("optimal", "near-optimal"):
            if f_cur is None:
                return BeamDesign(f_list=empty, f_stacked=np.zeros(0, dtype=complex),
                                  p=p, trace=trace, status="failed", iterations=it,
                                  detail=f"conic solver {sol.solver_status} on first iteration")
            status = "failed"
            detail = f"conic solver {sol.solver_status} at iteration {it}; keeping previous iterate"
            it -= 1
            break

        obj_f = design_objective(pattern, s_map.combine(sol.f_stacked), p)
        if trace and obj_f > trace[-1] + 1e-9:
            # reduced-accuracy solve made no progress; keep the previous iterate
            status = "converged"
            detail = "stopped: conic step no longer improves the objective"
            it -= 1
            break
        f_cur = sol.f_stacked
        trace.append(obj_f)

        p = update_phase(w, s_map.split(f_cur), p)
        obj_p = design_objective(pattern, s_map.combine(f_cur), p)
        trace.append(obj_p)

        if stop.objective_threshold is not None and obj_p <= stop.objective_threshold:
            status = "converged"
            break
        if stop.relative_change_threshold is not None and prev_full is not None:
            rel = abs(prev_full - obj_p) / max(prev_full, 1e-15)
            if rel < stop.relative_change_threshold:
                status = "converged"
                break
        prev_full = obj_p

    return BeamDesign(f_list=s_map.split(f_cur), f_stacked=f_cur, p=p,
                      trace=trace, status=status, iterations=it, detail=detail)
