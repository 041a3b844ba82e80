"""Figure rendering for beamforming-run CSV outputs: beam-pattern overlays
and MSE-versus-threshold sweep curves."""

__version__ = "0.1.0"

from .tables import SchemaError, read_table
from .plots import plot_pattern, plot_mse_sweep

__all__ = ["SchemaError", "read_table", "plot_pattern", "plot_mse_sweep", "__version__"]
