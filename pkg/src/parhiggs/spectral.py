"""Bookkeeping for spectral covers of orbifold curves.

For a rank-n Higgs field twisted by a line bundle of degree ``twist_degree``
the spectral curve is a degree-n cover of the base. Its branch degree and
genus below are the generic values (discriminant of degree
``n(n-1) * twist_degree``, then Riemann-Hurwitz); the cover is assumed
smooth with branch points away from the marked points. That regularity is
recorded in every report but never checked.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from parhiggs.errors import RegimeError, ValidationError
from parhiggs.vgeom import OrbifoldSignature, picard_component_count

GENUS_SOURCE = "Riemann-Hurwitz with generic discriminant degree n(n-1)*twist_degree"


@dataclass(frozen=True)
class SpectralCoverData:
    base: OrbifoldSignature
    rank: int
    twist_degree: int
    regular_assumed: bool = field(default=True, compare=False)

    def __post_init__(self) -> None:
        if not isinstance(self.rank, int) or self.rank < 1:
            raise ValidationError(f"cover degree n must be >= 1, got {self.rank!r}")
        if not isinstance(self.twist_degree, int) or self.twist_degree < 0:
            raise ValidationError(f"twist degree must be a non-negative integer, got {self.twist_degree!r}")
        euler = self.rank * (2 * self.base.genus - 2) + self.branch_degree
        if euler < -2:
            raise ValidationError(
                f"Riemann-Hurwitz gives 2g'-2 = {euler} < -2; no connected smooth cover with these data"
            )

    @property
    def branch_degree(self) -> int:
        return self.rank * (self.rank - 1) * self.twist_degree

    @property
    def spectral_genus(self) -> int:
        return (self.rank * (2 * self.base.genus - 2) + self.branch_degree + 2) // 2

    @property
    def spectral_signature(self) -> OrbifoldSignature:
        """Each base point of order ``m_i`` has ``n`` preimages of order ``m_i``, grouped by fiber."""
        orders = tuple(m for m in self.base.orders for _ in range(self.rank))
        return OrbifoldSignature(self.spectral_genus, orders)

    def to_json(self) -> dict:
        sig = self.spectral_signature
        return {
            "base": self.base.to_json(),
            "rank": self.rank,
            "twist_degree": self.twist_degree,
            "branch_degree": self.branch_degree,
            "spectral_genus": self.spectral_genus,
            "spectral_signature": sig.to_json(),
            "regular_assumed": self.regular_assumed,
            "genus_source": GENUS_SOURCE,
        }


def spectral_cover_data(base: OrbifoldSignature, n: int, twist_degree: int | None = None) -> SpectralCoverData:
    """Cover data for the ``twist_degree``-twisted spectral curve (default twist ``K(D)``)."""
    if twist_degree is None:
        twist_degree = base.kd_degree
    return SpectralCoverData(base, n, twist_degree)


def lift_weights(
    base_weights: Sequence[Sequence[Fraction]],
    orders: Sequence[Sequence[int]] | None = None,
) -> tuple[tuple[Fraction, ...], ...]:
    """Strictly compatible lift of a parabolic structure to the spectral curve.

    ``base_weights[x]`` is the ascending tuple ``alpha_1(x) <= ... <= alpha_n(x)``.
    ``orders[x]`` is a permutation of ``range(n)``; the i-th preimage of ``x``
    gets weight ``alpha[orders[x][i]]``. The identity order is the default.
    """
    if orders is None:
        orders = [tuple(range(len(ws))) for ws in base_weights]
    if len(orders) != len(base_weights):
        raise ValidationError("need one preimage order per marked point")
    n = len(base_weights[0]) if base_weights else 0
    lifted = []
    for x, (ws, perm) in enumerate(zip(base_weights, orders)):
        ws = tuple(Fraction(w) for w in ws)
        if len(ws) != n:
            raise ValidationError(f"point {x} has {len(ws)} weights, expected n = {n}")
        if list(ws) != sorted(ws):
            raise ValidationError(f"weights at point {x} are not ascending")
        perm = tuple(perm)
        if len(perm) != n:
            raise ValidationError(f"order at point {x} has length {len(perm)}, expected {n}")
        if len(set(perm)) != n:
            raise ValidationError(f"order at point {x} assigns a weight twice: {perm}")
        if any(not 0 <= i < n for i in perm):
            raise ValidationError(f"order at point {x} refers outside 0..{n - 1}: {perm}")
        lifted.append(tuple(ws[i] for i in perm))
    return tuple(lifted)


def compatibility_multiplicity(weights: Sequence[Fraction]) -> int:
    """How many strictly compatible lifts give the same compatible lift: ``n! / prod(k_j!)``."""
    if not weights:
        raise ValidationError("empty weight tuple")
    counts = Counter(Fraction(w) for w in weights)
    result = math.factorial(len(weights))
    for k in counts.values():
        result //= math.factorial(k)
    return result


def _h0_nonspecial(degree: int, genus: int) -> int:
    if degree <= 2 * genus - 2:
        raise RegimeError(f"degree {degree} is not above 2g-2 = {2 * genus - 2}; h^1 may not vanish")
    return degree - genus + 1


def hitchin_base_dim(g: int, s: int, n: int, strong: bool = False) -> int:
    """Dimension of the parabolic Hitchin base.

    Non-strong: ``sum_i h^0(K(D)^i)``. Strong: the coefficients vanish on D,
    giving ``h^0(K) = g`` for ``i = 1`` and ``h^0(K^i D^{i-1})`` above.
    """
    if s < 1:
        raise ValidationError("the Hitchin base count needs at least one marked point")
    kd = 2 * g - 2 + s
    if kd <= 0:
        raise ValidationError(f"2g - 2 + s = {kd} must be positive")
    if n < 1:
        raise ValidationError(f"rank must be positive, got {n}")
    total = 0
    for i in range(1, n + 1):
        if strong and i == 1:
            total += g
        elif strong:
            total += _h0_nonspecial(i * kd - s, g)
        else:
            total += _h0_nonspecial(i * kd, g)
    return total


def hitchin_fiber_components(base: OrbifoldSignature, n: int) -> int:
    """Components of a regular fiber ``Pic_V(M_eta)``: ``prod m_i^n``."""
    if n < 1:
        raise ValidationError(f"rank must be positive, got {n}")
    orders = tuple(m for m in base.orders for _ in range(n))
    return picard_component_count(OrbifoldSignature(base.genus, orders))


@dataclass(frozen=True)
class PrymData:
    dimension: int
    component_count: int
    spectral_genus: int
    copy_count_resolved: bool = False

    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "component_count": self.component_count,
            "spectral_genus": self.spectral_genus,
            "copy_count_resolved": self.copy_count_resolved,
            "genus_source": GENUS_SOURCE,
        }


def prym_data(base: OrbifoldSignature, twist_degree: int | None = None) -> PrymData:
    """Prym data of a double spectral cover with isotropy ``Z_2`` at every marked point.

    ``dimension`` is ``dim Prym(X_eta, X) = g(X_eta) - g``; ``component_count``
    is ``2^s``, one component per class in the ``Z_2^s`` quotient. The number
    of Prym copies in a Hitchin fiber is not determined here.
    """
    if any(m != 2 for m in base.orders):
        raise RegimeError("Prym data is only available for isotropy order 2 at every marked point")
    cover = spectral_cover_data(base, 2, twist_degree)
    return PrymData(cover.spectral_genus - base.genus, 2**base.s, cover.spectral_genus)
