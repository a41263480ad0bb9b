"""Exact numerics for a collapsed partially directed polymer above a hard wall.

Submodules
----------
steps     two-sided geometric step law and its cumulant generating function
wetting   first-return kernel, pinned-walk partition function, critical curves
polymer   stretch configurations, Hamiltonian, beads and envelope walks
exactz    exact partition functions: brute force, transfer DP, walk identities
largedev  Legendre layer, tilted walks, collapse profile, meander rate
cli       command-line front end
"""

__version__ = "0.1.0"

from . import steps, wetting, polymer, exactz, largedev  # noqa: E402,F401

__all__ = ["steps", "wetting", "polymer", "exactz", "largedev", "__version__"]
