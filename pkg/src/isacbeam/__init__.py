"""Hybrid beamforming design toolkit for mmWave MIMO integrated sensing and
communications: objective-pattern matched transmit-beam design under SINR and
power constraints, plus constant-modulus hybrid factorization."""

__version__ = "0.1.0"

from .model import (
    Scenario,
    ChannelSet,
    steering_vector,
    generate_channels,
    channel_row,
    dbm_to_mw,
    db_to_linear,
)
from .pattern import (
    PatternSpec,
    build_grid,
    build_objective,
    make_pattern_spec,
    beam_pattern,
    pattern_mse,
    design_objective,
)
from .conic import SelectorMap, StackedProblem, ConicSolution, assemble, solve
from .phase import precompute_w, update_phase, random_phase_vector
from .altmin import StopRule, BeamDesign, design_transmit_beam
from .factorize import (
    ManifoldSettings,
    HybridFactors,
    update_digital,
    update_analog,
    factorize,
)
from .metrics import EvaluationReport, sinr, evaluate

__all__ = [
    "Scenario", "ChannelSet", "steering_vector", "generate_channels", "channel_row",
    "dbm_to_mw", "db_to_linear",
    "PatternSpec", "build_grid", "build_objective", "make_pattern_spec",
    "beam_pattern", "pattern_mse", "design_objective",
    "SelectorMap", "StackedProblem", "ConicSolution", "assemble", "solve",
    "precompute_w", "update_phase", "random_phase_vector",
    "StopRule", "BeamDesign", "design_transmit_beam",
    "ManifoldSettings", "HybridFactors", "update_digital", "update_analog", "factorize",
    "EvaluationReport", "sinr", "evaluate",
    "__version__",
]
