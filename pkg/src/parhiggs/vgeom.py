"""Orbifold curves (V-surfaces) and their line V-bundles.

An :class:`OrbifoldSignature` is a genus together with the isotropy orders
``m_i >= 2`` of the marked points. A :class:`LineVBundle` over it is a
background degree ``d`` and an isotropy vector ``0 <= k_i < m_i``; its
V-degree is ``d + sum(k_i / m_i)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from parhiggs.errors import RegimeError, ValidationError
from parhiggs.parabolic import ParabolicBundleData, PointWeights


@dataclass(frozen=True)
class OrbifoldSignature:
    genus: int
    orders: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if not isinstance(self.genus, int) or isinstance(self.genus, bool) or self.genus < 0:
            raise ValidationError(f"genus must be a non-negative integer, got {self.genus!r}")
        orders = tuple(self.orders)
        object.__setattr__(self, "orders", orders)
        for m in orders:
            if not isinstance(m, int) or isinstance(m, bool) or m < 2:
                raise ValidationError(f"isotropy orders must be integers >= 2, got {m!r}")

    @property
    def s(self) -> int:
        return len(self.orders)

    @property
    def s0(self) -> int:
        """Number of even isotropy orders."""
        return sum(1 for m in self.orders if m % 2 == 0)

    @property
    def s1(self) -> int:
        return self.s - self.s0

    @property
    def kd_degree(self) -> int:
        """Degree of ``K(D)``, i.e. ``2g - 2 + s``."""
        return 2 * self.genus - 2 + self.s

    def to_json(self) -> dict:
        return {"genus": self.genus, "orders": list(self.orders)}

    @classmethod
    def from_json(cls, obj: object) -> "OrbifoldSignature":
        if not isinstance(obj, dict) or "genus" not in obj:
            raise ValidationError(f"signature JSON needs 'genus' and 'orders': {obj!r}")
        orders = obj.get("orders", [])
        if not isinstance(orders, list):
            raise ValidationError("'orders' must be a list")
        return cls(obj["genus"], tuple(orders))


@dataclass(frozen=True)
class LineVBundle:
    """Topological class of a line V-bundle: ``(d, k_1, ..., k_s)``."""

    signature: OrbifoldSignature
    degree: int
    isotropy: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if not isinstance(self.degree, int) or isinstance(self.degree, bool):
            raise ValidationError(f"background degree must be an integer, got {self.degree!r}")
        isotropy = tuple(self.isotropy)
        object.__setattr__(self, "isotropy", isotropy)
        if len(isotropy) != self.signature.s:
            raise ValidationError(
                f"isotropy vector has length {len(isotropy)}, signature has {self.signature.s} points"
            )
        for k, m in zip(isotropy, self.signature.orders):
            if not isinstance(k, int) or isinstance(k, bool) or not 0 <= k < m:
                raise ValidationError(f"isotropy {k!r} outside [0, {m})")

    @classmethod
    def trivial(cls, signature: OrbifoldSignature) -> "LineVBundle":
        return cls(signature, 0, (0,) * signature.s)

    @classmethod
    def canonical_kd(cls, signature: OrbifoldSignature) -> "LineVBundle":
        """``K(D)`` with trivial monodromy at every marked point."""
        return cls(signature, signature.kd_degree, (0,) * signature.s)

    @property
    def v_degree(self) -> Fraction:
        return self.degree + sum((Fraction(k, m) for k, m in zip(self.isotropy, self.signature.orders)), Fraction(0))

    def __mul__(self, other: "LineVBundle") -> "LineVBundle":
        return line_v_tensor(self, other)

    def inverse(self) -> "LineVBundle":
        return line_v_inverse(self)

    def __pow__(self, exponent: int) -> "LineVBundle":
        return line_v_power(self, exponent)

    def to_json(self) -> dict:
        return {"degree": self.degree, "isotropy": list(self.isotropy)}

    @classmethod
    def from_json(cls, obj: object, signature: OrbifoldSignature) -> "LineVBundle":
        if not isinstance(obj, dict) or "degree" not in obj:
            raise ValidationError(f"line V-bundle JSON needs 'degree' and 'isotropy': {obj!r}")
        isotropy = obj.get("isotropy", [])
        if not isinstance(isotropy, list):
            raise ValidationError("'isotropy' must be a list")
        return cls(signature, obj["degree"], tuple(isotropy))


def line_v_tensor(a: LineVBundle, b: LineVBundle) -> LineVBundle:
    """Group law on the Picard V-group; each isotropy overflow past ``m_i`` adds 1 to ``d``."""
    if a.signature != b.signature:
        raise ValidationError("line V-bundles over different signatures")
    degree = a.degree + b.degree
    isotropy = []
    for ka, kb, m in zip(a.isotropy, b.isotropy, a.signature.orders):
        total = ka + kb
        if total >= m:
            total -= m
            degree += 1
        isotropy.append(total)
    return LineVBundle(a.signature, degree, tuple(isotropy))


def line_v_inverse(a: LineVBundle) -> LineVBundle:
    degree = -a.degree
    isotropy = []
    for k, m in zip(a.isotropy, a.signature.orders):
        if k:
            isotropy.append(m - k)
            degree -= 1
        else:
            isotropy.append(0)
    return LineVBundle(a.signature, degree, tuple(isotropy))


def line_v_power(a: LineVBundle, exponent: int) -> LineVBundle:
    base = a if exponent >= 0 else line_v_inverse(a)
    result = LineVBundle.trivial(a.signature)
    for _ in range(abs(exponent)):
        result = line_v_tensor(result, base)
    return result


def line_v_to_parabolic(line: LineVBundle) -> ParabolicBundleData:
    """The parabolic line bundle with weight ``k_i / m_i`` at the i-th point."""
    points = tuple(
        PointWeights(((Fraction(k, m), 1),)) for k, m in zip(line.isotropy, line.signature.orders)
    )
    return ParabolicBundleData(1, line.degree, points)


def euler_characteristic(line: LineVBundle, sig: OrbifoldSignature) -> int:
    """Riemann-Roch for line V-bundles: ``1 - g + c_1(L) - sum(k_i / m_i)``.

    With ``c_1`` the V-degree the fractional parts cancel and the result is
    ``1 - g + d``.
    """
    if line.signature != sig:
        raise ValidationError("line V-bundle not aligned with the given signature")
    chi = 1 - sig.genus + line.v_degree - sum(
        (Fraction(k, m) for k, m in zip(line.isotropy, sig.orders)), Fraction(0)
    )
    assert chi.denominator == 1
    return int(chi)


def group_cohomology_rank_z2(m: int, degree: int) -> int:
    """``dim H^i(Z_m; Z_2)`` for ``i = 0, 1, 2``.

    ``H^0`` is always ``Z_2``; ``H^1`` is the m-torsion of ``Z_2`` and ``H^2``
    is ``Z_2 / m Z_2``, both ``Z_2`` exactly when ``m`` is even.
    """
    if m < 1:
        raise ValidationError(f"group order must be positive, got {m}")
    if degree == 0:
        return 1
    if degree == 1:
        torsion = [x for x in range(2) if (m * x) % 2 == 0]
        return 1 if len(torsion) == 2 else 0
    if degree == 2:
        multiples = {(m * x) % 2 for x in range(2)}
        return 1 if 2 // len(multiples) == 2 else 0
    raise ValidationError(f"only degrees 0, 1, 2 are supported, got {degree}")


def _require_even_order(sig: OrbifoldSignature) -> None:
    if sig.s0 == 0:
        raise RegimeError(
            f"signature {sig.orders} has no even isotropy order (s0 = 0); "
            "the Z/2 cohomology rank formulas are not available there"
        )


def z2_cohomology_ranks(sig: OrbifoldSignature) -> tuple[int, int]:
    """``(rk H^1, rk H^2)`` of the V-surface with ``Z_2`` coefficients: ``(2g + s0 - 1, s0)``."""
    _require_even_order(sig)
    return 2 * sig.genus + sig.s0 - 1, sig.s0


@dataclass(frozen=True)
class MayerVietorisCheck:
    """Ranks along the nine-term Mayer-Vietoris sequence and derived image ranks."""

    terms: tuple[tuple[str, int], ...]
    image_ranks: tuple[int, ...]
    alternating_sum: int

    @property
    def ok(self) -> bool:
        return self.alternating_sum == 0 and all(r >= 0 for r in self.image_ranks) and self.image_ranks[-1] == 0


def mv_alternating_check(sig: OrbifoldSignature) -> MayerVietorisCheck:
    """Check the Mayer-Vietoris sequence ``V_1 = X - D``, ``V_2 = disks x_{Z_m} EZ_m``.

    Piece ranks: ``V_1`` is a genus-g surface with s punctures, the overlap is
    s circles, and each orbifold disk contributes ``H^i(Z_m; Z_2)``. Exactness
    forces each term to split as (image in) + (image out); the derived image
    ranks must be non-negative and the last must vanish.
    """
    rk_h1, rk_h2 = z2_cohomology_ranks(sig)
    g, s = sig.genus, sig.s
    v2 = [sum(group_cohomology_rank_z2(m, i) for m in sig.orders) for i in range(3)]
    terms = (
        ("H0(M)", 1),
        ("H0(V1)+H0(V2)", 1 + v2[0]),
        ("H0(V12)", s),
        ("H1(M)", rk_h1),
        ("H1(V1)+H1(V2)", (2 * g + s - 1) + v2[1]),
        ("H1(V12)", s),
        ("H2(M)", rk_h2),
        ("H2(V1)+H2(V2)", 0 + v2[2]),
        ("H2(V12)", 0),
    )
    images = []
    incoming = 0
    for _, rank in terms:
        outgoing = rank - incoming
        images.append(outgoing)
        incoming = outgoing
    alternating = sum((-1) ** i * rank for i, (_, rank) in enumerate(terms))
    return MayerVietorisCheck(terms, tuple(images), alternating)


@dataclass(frozen=True)
class SqrtSolutions:
    """Square roots of a line V-bundle, up to the Jacobian factor.

    ``solutions`` are the topological classes ``(d, k)`` with ``L^2`` equal to
    the target; each is hit by ``2**jacobian_exponent`` square roots
    (2-torsion of the Jacobian), counted symbolically.
    """

    solutions: tuple[LineVBundle, ...]
    jacobian_exponent: int
    diagnostic: str = ""

    @property
    def total(self) -> int:
        return len(self.solutions) * 2**self.jacobian_exponent


def sqrt_solutions(target: LineVBundle, sig: OrbifoldSignature) -> SqrtSolutions:
    """Enumerate topological square roots of ``target`` (trivial isotropy).

    Scans every isotropy vector, keeps those with ``2 k_i = 0 mod m_i``, and
    solves ``2 d + sum(carries) = deg(target)`` for the background degree.
    """
    if target.signature != sig:
        raise ValidationError("target not aligned with the given signature")
    if any(target.isotropy):
        raise ValidationError("square-root counting expects a target with trivial isotropy")
    found = []
    for k in itertools.product(*(range(m) for m in sig.orders)):
        if any((2 * ki) % m for ki, m in zip(k, sig.orders)):
            continue
        carries = sum((2 * ki) // m for ki, m in zip(k, sig.orders))
        rest = target.degree - carries
        if rest % 2:
            continue
        found.append(LineVBundle(sig, rest // 2, tuple(k)))
    diagnostic = ""
    if not found:
        diagnostic = (
            f"no square root: every isotropy solution leaves odd degree (target degree {target.degree}, "
            f"{sig.s0} even orders)"
        )
    return SqrtSolutions(tuple(found), 2 * sig.genus, diagnostic)


def picard_component_count(sig: OrbifoldSignature) -> int:
    """Connected components of ``Pic_V(M)`` in fixed degree: one per isotropy class."""
    return math.prod(sig.orders)


def isotropy_to_weights(k: Sequence[int], m: int) -> PointWeights:
    for kj in k:
        if not isinstance(kj, int) or not 0 <= kj < m:
            raise ValidationError(f"isotropy {kj!r} outside [0, {m})")
    return PointWeights.from_multiset(Fraction(kj, m) for kj in k)


def weights_to_isotropy(weights: PointWeights, m: int) -> tuple[int, ...]:
    """Sorted isotropy vector for weights whose denominators divide ``m``."""
    out = []
    for w in weights.expanded():
        if m % w.denominator:
            raise ValidationError(f"weight {w} is not a multiple of 1/{m}")
        out.append(w.numerator * (m // w.denominator))
    return tuple(out)
