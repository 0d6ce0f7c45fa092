"""ipdsaw: interacting partially directed self-avoiding walks.

Exact partition functions, free energies and critical constants, exact and
Markov-chain sampling, geometric estimators, the collapsed-phase limit shape, and
enumeration of related lattice path families.
"""

from .constants import TOOL_VERSION
from .errors import IpdsawError
from .model import StretchConfig
from .walk import ModelParams, WalkPath, make_params

__version__ = TOOL_VERSION

__all__ = ["IpdsawError", "ModelParams", "StretchConfig", "WalkPath", "make_params", "__version__"]
