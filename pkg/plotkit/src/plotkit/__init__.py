"""Static figure regeneration from omarray CSV artifacts.

plotkit never computes physics: every number it draws exists verbatim in a
CSV produced by the simulation CLI, and rendering is a deterministic pure
function of those bytes plus the figure spec.
"""

from .csvdata import PlotDataError
from .figures import FIGURE_IDS, FigureSpec, RenderResult, render

__version__ = "0.1.0"

__all__ = ["FIGURE_IDS", "FigureSpec", "PlotDataError", "RenderResult", "render"]
