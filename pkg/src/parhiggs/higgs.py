"""Parabolic Sp(2n,R)-Higgs data: Toledo invariant, Cayley partner, minima.

The Higgs fields ``beta: V^dual -> V (x) K(D)`` and
``gamma: V -> V^dual (x) K(D)`` are modelled only by presence flags; block
shapes are recorded where the minima classification fixes them.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

from parhiggs.errors import ValidationError
from parhiggs.parabolic import ParabolicBundleData, direct_sum, dual, pardeg, tensor_line
from parhiggs.vgeom import LineVBundle, OrbifoldSignature, line_v_inverse, line_v_tensor, line_v_to_parabolic


@dataclass(frozen=True)
class SpHiggsData:
    """A triple ``(V, beta, gamma)`` reduced to its combinatorial shadow."""

    n: int
    V: ParabolicBundleData
    signature: OrbifoldSignature
    beta_present: bool = True
    gamma_present: bool = True

    def __post_init__(self) -> None:
        if self.V.rank != self.n:
            raise ValidationError(f"V has rank {self.V.rank}, expected n = {self.n}")
        if len(self.V.points) != self.signature.s:
            raise ValidationError(
                f"V has {len(self.V.points)} marked points, signature has {self.signature.s}"
            )
        for i, (point, m) in enumerate(zip(self.V.points, self.signature.orders)):
            for w in point.weights:
                if m % w.denominator:
                    raise ValidationError(f"weight {w} at point {i} is not a multiple of 1/{m}")
        assert pardeg(self.E) == 0

    @property
    def E(self) -> ParabolicBundleData:
        """The underlying parabolic bundle ``V (+) V^dual``."""
        return direct_sum(self.V, dual(self.V))

    @property
    def toledo(self) -> Fraction:
        return pardeg(self.V)

    def dualized(self) -> "SpHiggsData":
        """``(V, beta, gamma) -> (V^dual, gamma, beta)``; negates the Toledo invariant."""
        return SpHiggsData(self.n, dual(self.V), self.signature, self.gamma_present, self.beta_present)


class MilnorWoodViolation(ValidationError):
    """Toledo invariant beyond ``n(g - 1 + s/2)``: not a semistable triple."""


def toledo_bound(n: int, g: int, s: int) -> Fraction:
    return n * (Fraction(g - 1) + Fraction(s, 2))


@dataclass(frozen=True)
class ToledoReport:
    tau: Fraction
    bound: Fraction
    maximal: bool


def toledo_report(n: int, g: int, s: int, tau: Fraction) -> ToledoReport:
    bound = toledo_bound(n, g, s)
    tau = Fraction(tau)
    if abs(tau) > bound:
        raise MilnorWoodViolation(f"|tau| = {abs(tau)} violates the Milnor-Wood-type bound {bound}")
    return ToledoReport(tau, bound, tau == bound)


def toledo_and_bound(d: SpHiggsData) -> ToledoReport:
    return toledo_report(d.n, d.signature.genus, d.signature.s, pardeg(d.V))


def is_kd_square_root(l0: LineVBundle) -> bool:
    return line_v_tensor(l0, l0) == LineVBundle.canonical_kd(l0.signature)


def cayley_partner(d: SpHiggsData, l0: LineVBundle) -> ParabolicBundleData:
    """``W = V (x) L0^{-1}`` for a maximal triple and a square root ``L0`` of ``K(D)``."""
    if l0.signature != d.signature:
        raise ValidationError("L0 is not over the triple's signature")
    if not is_kd_square_root(l0):
        raise ValidationError(
            f"L0 with V-degree {l0.v_degree} is not a square root of K(D) (degree {d.signature.kd_degree})"
        )
    if not toledo_and_bound(d).maximal:
        raise ValidationError("the Cayley partner is only defined for maximal triples")
    w = tensor_line(d.V, line_v_to_parabolic(line_v_inverse(l0)))
    assert pardeg(w) == 0
    return w


def morse_index_case_b(g: int, s: int, pardeg_v: Fraction) -> Fraction:
    """``dim H^1`` of the positive-weight deformation complex for the four-piece split."""
    kd = 2 * g - 2 + s
    if kd <= 0:
        raise ValidationError(f"2g - 2 + s = {kd} must be positive")
    return kd - Fraction(pardeg_v)


class MinimumCase(str, Enum):
    TYPE_1 = "type-1"  # beta = 0
    TYPE_2 = "type-2"  # V = L1 (+) L2 with the fixed block shape below
    NOT_MINIMUM = "not-minimum"


# Block presence for the type-2 minimum, with respect to V = L1 (+) L2.
TYPE_2_BETA_SHAPE = ((False, False), (False, True))
TYPE_2_GAMMA_SHAPE = ((False, True), (True, False))


@dataclass(frozen=True)
class MinimumVerdict:
    is_minimum: bool
    case: MinimumCase
    index: Fraction | None = None
    beta_shape: tuple[tuple[bool, ...], ...] | None = None
    gamma_shape: tuple[tuple[bool, ...], ...] | None = None
    dualized: bool = False


def classify_sp4(g: int, s: int, pardeg_v: Fraction, beta_present: bool) -> MinimumVerdict:
    """Local-minimum classification for Sp(4,R) from the numerical data alone.

    A negative Toledo invariant is first moved to the positive side by
    duality, which swaps the roles of beta and gamma; the caller passes the
    flag of the morphism that plays beta after that swap.
    """
    pardeg_v = Fraction(pardeg_v)
    toledo_report(2, g, s, pardeg_v)
    kd = 2 * g - 2 + s
    if not beta_present and pardeg_v > 0:
        return MinimumVerdict(True, MinimumCase.TYPE_1)
    if pardeg_v == kd:
        return MinimumVerdict(True, MinimumCase.TYPE_2, Fraction(0), TYPE_2_BETA_SHAPE, TYPE_2_GAMMA_SHAPE)
    return MinimumVerdict(False, MinimumCase.NOT_MINIMUM, morse_index_case_b(g, s, pardeg_v))


def classify_minimum_sp4(d: SpHiggsData) -> MinimumVerdict:
    if d.n != 2:
        raise ValidationError(f"the Sp(4,R) classification needs n = 2, got n = {d.n}")
    flipped = pardeg(d.V) < 0
    if flipped:
        d = d.dualized()
    verdict = classify_sp4(d.signature.genus, d.signature.s, pardeg(d.V), d.beta_present)
    if flipped:
        verdict = MinimumVerdict(
            verdict.is_minimum, verdict.case, verdict.index, verdict.beta_shape, verdict.gamma_shape, True
        )
    return verdict


def minima_decomposition_exponents(n: int) -> tuple[int, tuple[int, ...]]:
    """``(sign, exponents)`` with summands ``L^sign (x) K(D)^e``.

    Odd n: ``L K(D)^e`` for ``e = -2[n/2], ..., 2[n/2]`` in steps of 2.
    Even n: ``L^{-1} K(D)^e`` for ``e = 2 - n, ..., n`` in steps of 2.
    """
    if n < 3:
        raise ValidationError(f"the Sp(2n,R) decomposition needs n >= 3, got {n}")
    if n % 2:
        half = n // 2
        return 1, tuple(range(-2 * half, 2 * half + 1, 2))
    return -1, tuple(range(2 - n, n + 1, 2))


def minima_decomposition_sp2n(n: int, g: int, s: int) -> tuple[Fraction, ...]:
    """Parabolic degrees of the summands of V at a ``beta != 0`` minimum (ascending)."""
    kd = 2 * g - 2 + s
    if kd <= 0:
        raise ValidationError(f"2g - 2 + s = {kd} must be positive")
    sign, exponents = minima_decomposition_exponents(n)
    root = Fraction(kd, 2)
    return tuple(sign * root + e * kd for e in exponents)


def allowed_local_pattern(
    kvec: Sequence[int], m: int, twist_k: int = 0
) -> tuple[tuple[int | None, ...], ...]:
    """Local shape of a (twisted) V-Higgs field in an isotropy frame.

    Entry ``(i, j)`` is ``None`` when ``k_i < k_j`` (forced zero), otherwise the
    exponent ``k_i - k_j + twist_k`` of ``z`` in front of ``phi_ij(z^m)``.
    """
    for k in list(kvec) + [twist_k]:
        if not isinstance(k, int) or not 0 <= k < m:
            raise ValidationError(f"isotropy {k!r} outside [0, {m})")
    return tuple(tuple(ki - kj + twist_k if ki >= kj else None for kj in kvec) for ki in kvec)
