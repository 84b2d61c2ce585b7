"""File-to-file plotting of ringrepeater CSV sweeps."""

from figplots.plotting import PlotSpec, plot

__all__ = ["PlotSpec", "plot"]

__version__ = "0.1.0"
