"""Batch figure generation from simulation sweep CSVs."""

from .tables import FractionTable, SchemaError, SweepTable
from .figures import plot_delay, plot_fraction

__all__ = [
    "FractionTable",
    "SchemaError",
    "SweepTable",
    "plot_delay",
    "plot_fraction",
]
