"""defectlab-plot: figures from defectlab CSV artifacts."""

from .figures import (KINDS, FigureSpec, SchemaError, load_table, render)

__version__ = "0.1.0"

__all__ = ["FigureSpec", "SchemaError", "KINDS", "load_table", "render",
           "__version__"]
