"""Exact invariants of parabolic Higgs bundle moduli spaces.

Weight calculus for parabolic bundles, line V-bundle arithmetic over
orbifold curves, spectral cover bookkeeping, the Sp(2n,R) minima layer
and connected-component counts for maximal parabolic Sp(2n,R)-Higgs
bundles, each count paired with a brute-force enumeration.
"""

from parhiggs.errors import ParhiggsError, RegimeError, ValidationError

__version__ = "0.1.0"

__all__ = ["ParhiggsError", "RegimeError", "ValidationError", "__version__"]
