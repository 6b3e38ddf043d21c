"""QKD feasibility planner for shared metro optical networks."""

__version__ = "0.1.0"

from .backend import BACKEND_NAME

__all__ = ["BACKEND_NAME", "__version__"]
