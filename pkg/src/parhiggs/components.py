"""Connected components of maximal parabolic Sp(2n,R)-Higgs moduli.

Components are labelled by three families of topological invariants of
the Cayley partner ``W``:

``uv``
    Stiefel-Whitney type pairs ``(u, v)`` in ``H^1_V(M; Z_2) x H^2_V(M; Z_2)``.
    For Sp(4,R) only ``u != 0`` occurs here.
``dw``
    Sp(4,R) only: ``W = L (+) L^dual`` with ``L`` of class ``(d, w)`` and
    parabolic degree in ``[0, 2g - 2 + s)``.
``sqrt``
    square roots of ``K(D)``: a carry vector over the even-order points
    times a symbolic Jacobian 2-torsion label in ``[0, 2^{2g})``.

Two independent routes are provided. :func:`count_components` evaluates
closed-form expressions; :func:`iter_invariant_classes` materializes
every label from the cohomology ranks, the Picard V-group window and the
square-root solver, and :func:`enumeration_count` counts them.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator, Sequence, Union

from parhiggs.errors import RegimeError, ValidationError
from parhiggs.vgeom import LineVBundle, OrbifoldSignature, sqrt_solutions, z2_cohomology_ranks

# Above this genus the 2^{2g} Jacobian labels are counted, not listed.
MATERIALIZE_MAX_GENUS = 3


class Mode(str, Enum):
    WEIGHT_TYPE = "weight-type"
    FIXED_HALF = "fixed-half"
    NON_REDUCED = "non-reduced"


@dataclass(frozen=True, order=True)
class UVClass:
    u: tuple[int, ...]
    v: tuple[int, ...]
    u_nonzero_required: bool = False

    family = "uv"

    def __post_init__(self) -> None:
        if self.u_nonzero_required and not any(self.u):
            raise ValidationError("u must be nonzero for this family")

    def to_json(self) -> dict:
        return {"family": "uv", "u": list(self.u), "v": list(self.v), "u_nonzero_required": self.u_nonzero_required}


@dataclass(frozen=True, order=True)
class DWClass:
    d: int
    w: tuple[int, ...]

    family = "dw"

    def to_json(self) -> dict:
        return {"family": "dw", "d": self.d, "w": list(self.w)}


@dataclass(frozen=True, order=True)
class SqrtKDClass:
    carry_vector: tuple[int, ...]
    jacobian_label: int

    family = "sqrt"

    def to_json(self) -> dict:
        return {"family": "sqrt", "carry_vector": list(self.carry_vector), "jacobian_label": self.jacobian_label}


InvariantClass = Union[UVClass, DWClass, SqrtKDClass]

_FAMILY_ORDER = {"uv": 0, "dw": 1, "sqrt": 2}


def class_sort_key(c: InvariantClass) -> tuple:
    return (_FAMILY_ORDER[c.family], c)


def class_from_json(obj: dict) -> InvariantClass:
    family = obj.get("family")
    if family == "uv":
        return UVClass(tuple(obj["u"]), tuple(obj["v"]), bool(obj.get("u_nonzero_required", False)))
    if family == "dw":
        return DWClass(obj["d"], tuple(obj["w"]))
    if family == "sqrt":
        return SqrtKDClass(tuple(obj["carry_vector"]), obj["jacobian_label"])
    raise ValidationError(f"unknown invariant family {family!r}")


def check_regime(sig: OrbifoldSignature, n: int, mode: Mode | str = Mode.WEIGHT_TYPE) -> Mode:
    mode = Mode(mode)
    if not isinstance(n, int) or n < 2:
        raise ValidationError(f"Sp(2n,R) component counts need n >= 2, got {n!r}")
    if sig.s < 1:
        raise RegimeError("component counts need at least one marked point (s >= 1)")
    if sig.s0 < 1:
        raise RegimeError(
            f"orders {sig.orders} contain no even order (s0 = 0); the square-root family "
            "then depends on the parity of s and the counts are not defined"
        )
    if sig.kd_degree <= 0:
        raise RegimeError(f"2g - 2 + s = {sig.kd_degree} must be positive")
    if mode is Mode.FIXED_HALF and any(m != 2 for m in sig.orders):
        raise RegimeError("fixed-half mode (trivial flag, weight 1/2) needs every isotropy order equal to 2")
    return mode


def is_non_reduced(weights: Sequence[Sequence[int]], orders: Sequence[int]) -> bool:
    """True iff every point carries a weight numerator coprime to its denominator."""
    if len(weights) != len(orders):
        raise ValidationError(f"{len(weights)} weight lists for {len(orders)} points")
    for ks, m in zip(weights, orders):
        for k in ks:
            if not isinstance(k, int) or not 0 <= k < m:
                raise ValidationError(f"numerator {k!r} outside [0, {m})")
    return all(any(math.gcd(k, m) == 1 for k in ks) for ks, m in zip(weights, orders))


def fixed_isotropy(
    sig: OrbifoldSignature, mode: Mode, weights: Sequence[Sequence[int]] | None = None
) -> tuple[int, ...]:
    """The single isotropy label of ``L`` when the parabolic structure is fixed.

    Fixed weight 1/2 gives ``w = (1, ..., 1)``. For a non-reduced structure
    the label at each point is its smallest numerator coprime to ``m_i``;
    with no structure given, the structure with all weights ``1/m_i`` is used.
    """
    if mode is Mode.FIXED_HALF:
        return (1,) * sig.s
    if weights is None:
        return (1,) * sig.s
    if not is_non_reduced(weights, sig.orders):
        raise ValidationError(
            "parabolic structure is reducible; reduce the fractions and pass the reduced weight type"
        )
    return tuple(min(k for k in ks if math.gcd(k, m) == 1) for ks, m in zip(weights, sig.orders))


# ---------------------------------------------------------------- enumeration


def iter_uv_classes(sig: OrbifoldSignature, n: int) -> Iterator[UVClass]:
    rk1, rk2 = z2_cohomology_ranks(sig)
    nonzero = n == 2
    for u in itertools.product((0, 1), repeat=rk1):
        if nonzero and not any(u):
            continue
        for v in itertools.product((0, 1), repeat=rk2):
            yield UVClass(u, v, nonzero)


def _degree_window(frac: Fraction, upper: int) -> Iterator[int]:
    # scan a slightly wider integer range than needed and filter
    lo = math.floor(-frac) - 1
    hi = math.ceil(upper - frac) + 1
    for d in range(lo, hi + 1):
        if 0 <= d + frac < upper:
            yield d


def iter_dw_classes(
    sig: OrbifoldSignature, n: int, mode: Mode = Mode.WEIGHT_TYPE, weights: Sequence[Sequence[int]] | None = None
) -> Iterator[DWClass]:
    if n != 2:
        return
    if mode is Mode.WEIGHT_TYPE:
        labels = itertools.product(*(range(m) for m in sig.orders))
    else:
        labels = [fixed_isotropy(sig, mode, weights)]
    for w in labels:
        frac = sum((Fraction(k, m) for k, m in zip(w, sig.orders)), Fraction(0))
        for d in _degree_window(frac, sig.kd_degree):
            yield DWClass(d, tuple(w))


def _sqrt_carry_vectors(sig: OrbifoldSignature) -> list[tuple[int, ...]]:
    roots = sqrt_solutions(LineVBundle.canonical_kd(sig), sig)
    even = [i for i, m in enumerate(sig.orders) if m % 2 == 0]
    vectors = []
    for root in roots.solutions:
        vectors.append(tuple((2 * root.isotropy[i]) // sig.orders[i] for i in even))
    return vectors


def iter_sqrt_classes(sig: OrbifoldSignature) -> Iterator[SqrtKDClass]:
    for carry in _sqrt_carry_vectors(sig):
        for label in range(2 ** (2 * sig.genus)):
            yield SqrtKDClass(carry, label)


def iter_invariant_classes(
    sig: OrbifoldSignature,
    n: int,
    mode: Mode | str = Mode.WEIGHT_TYPE,
    weights: Sequence[Sequence[int]] | None = None,
) -> Iterator[InvariantClass]:
    """All invariant classes, family by family, each family in sorted order."""
    mode = check_regime(sig, n, mode)
    yield from iter_uv_classes(sig, n)
    yield from iter_dw_classes(sig, n, mode, weights)
    yield from iter_sqrt_classes(sig)


def enumerate_invariant_classes(
    sig: OrbifoldSignature,
    n: int,
    mode: Mode | str = Mode.WEIGHT_TYPE,
    weights: Sequence[Sequence[int]] | None = None,
) -> list[InvariantClass]:
    if sig.genus > MATERIALIZE_MAX_GENUS:
        raise ValidationError(
            f"materializing classes is limited to genus <= {MATERIALIZE_MAX_GENUS}; use enumeration_count"
        )
    return sorted(iter_invariant_classes(sig, n, mode, weights), key=class_sort_key)


def validate_class(c: InvariantClass, sig: OrbifoldSignature) -> None:
    """Check a class against the invariants of its family over ``sig``."""
    if isinstance(c, UVClass):
        rk1, rk2 = z2_cohomology_ranks(sig)
        if len(c.u) != rk1 or len(c.v) != rk2 or set(c.u + c.v) - {0, 1}:
            raise ValidationError(f"{c} does not match ranks ({rk1}, {rk2})")
    elif isinstance(c, DWClass):
        if len(c.w) != sig.s or any(not 0 <= k < m for k, m in zip(c.w, sig.orders)):
            raise ValidationError(f"{c} has an isotropy label out of range")
        pd = c.d + sum((Fraction(k, m) for k, m in zip(c.w, sig.orders)), Fraction(0))
        if not 0 <= pd < sig.kd_degree:
            raise ValidationError(f"{c} has parabolic degree {pd} outside [0, {sig.kd_degree})")
    elif isinstance(c, SqrtKDClass):
        if len(c.carry_vector) != sig.s0 or set(c.carry_vector) - {0, 1}:
            raise ValidationError(f"{c} carry vector does not match the {sig.s0} even-order points")
        if (sig.kd_degree - sum(c.carry_vector)) % 2:
            raise ValidationError(f"{c} carries have the wrong parity for K(D)")
        if not 0 <= c.jacobian_label < 2 ** (2 * sig.genus):
            raise ValidationError(f"{c} Jacobian label out of range")
    else:
        raise ValidationError(f"not an invariant class: {c!r}")


@dataclass(frozen=True)
class FamilyCounts:
    uv: int
    dw: int
    sqrt: int

    @property
    def total(self) -> int:
        return self.uv + self.dw + self.sqrt

    def to_json(self) -> dict:
        return {"uv": self.uv, "dw": self.dw, "sqrt": self.sqrt}


def enumeration_family_counts(
    sig: OrbifoldSignature,
    n: int,
    mode: Mode | str = Mode.WEIGHT_TYPE,
    weights: Sequence[Sequence[int]] | None = None,
) -> FamilyCounts:
    """Family sizes from the enumeration route.

    Up to genus :data:`MATERIALIZE_MAX_GENUS` every class is generated. Above
    it the ``2g`` Jacobian bits of ``u`` and the Jacobian labels are counted
    as ``2^{2g}`` while everything else is still generated.
    """
    mode = check_regime(sig, n, mode)
    dw = sum(1 for _ in iter_dw_classes(sig, n, mode, weights))
    if sig.genus <= MATERIALIZE_MAX_GENUS:
        uv = sum(1 for _ in iter_uv_classes(sig, n))
        sq = sum(1 for _ in iter_sqrt_classes(sig))
        return FamilyCounts(uv, dw, sq)
    rk1, rk2 = z2_cohomology_ranks(sig)
    jac = 2 ** (2 * sig.genus)
    puncture_bits = rk1 - 2 * sig.genus
    uv = 0
    for _v in itertools.product((0, 1), repeat=rk2):
        for u_p in itertools.product((0, 1), repeat=puncture_bits):
            uv += jac - (1 if n == 2 and not any(u_p) else 0)
    sq = len(_sqrt_carry_vectors(sig)) * jac
    return FamilyCounts(uv, dw, sq)


def enumeration_count(
    sig: OrbifoldSignature,
    n: int,
    mode: Mode | str = Mode.WEIGHT_TYPE,
    weights: Sequence[Sequence[int]] | None = None,
) -> int:
    return enumeration_family_counts(sig, n, mode, weights).total


# ---------------------------------------------------------------- closed forms


def count_sp4_denominator_two(g: int, s: int) -> int:
    """All weights of denominator 2: ``(2^s+1) 2^{2g+s-1} + (2g-3+s) 2^s``."""
    return (2**s + 1) * 2 ** (2 * g + s - 1) + (2 * g - 3 + s) * 2**s


def count_sp2n_denominator_two(g: int, s: int) -> int:
    """``n >= 3``, denominator 2: ``(2^s+1) 2^{2g+s-1}``."""
    return (2**s + 1) * 2 ** (2 * g + s - 1)


def count_sp4_fixed_half(g: int, s: int) -> int:
    """Trivial flag with weight 1/2: ``(2^s+1) 2^{2g+s-1} + (2g-2+s) - 2^s``."""
    return (2**s + 1) * 2 ** (2 * g + s - 1) + (2 * g - 2 + s) - 2**s


def count_sp4_weight_type(g: int, orders: Sequence[int]) -> int:
    s, s0 = len(orders), sum(1 for m in orders if m % 2 == 0)
    return (2**s0 + 1) * 2 ** (2 * g + s0 - 1) - 2**s0 + (2 * g - 2 + s) * math.prod(orders)


def count_sp2n_weight_type(g: int, orders: Sequence[int]) -> int:
    s0 = sum(1 for m in orders if m % 2 == 0)
    return (2**s0 + 1) * 2 ** (2 * g + s0 - 1)


def count_sp4_non_reduced(g: int, orders: Sequence[int]) -> int:
    s, s0 = len(orders), sum(1 for m in orders if m % 2 == 0)
    return (2**s0 + 1) * 2 ** (2 * g + s0 - 1) - 2**s0 + (2 * g - 2 + s)


_EXPRESSIONS = {
    "sp4-two": "(2^s+1)*2^(2g+s-1) + (2g-3+s)*2^s",
    "sp2n-two": "(2^s+1)*2^(2g+s-1)",
    "sp4-half": "(2^s+1)*2^(2g+s-1) + (2g-2+s) - 2^s",
    "sp4-type": "(2^s0+1)*2^(2g+s0-1) - 2^s0 + (2g-2+s)*prod(m_i)",
    "sp2n-type": "(2^s0+1)*2^(2g+s0-1)",
    "sp4-nonred": "(2^s0+1)*2^(2g+s0-1) - 2^s0 + (2g-2+s)",
}


def closed_form(sig: OrbifoldSignature, n: int, mode: Mode | str = Mode.WEIGHT_TYPE) -> tuple[int, str]:
    """``(value, expression)`` of the component count for ``(sig, n, mode)``."""
    mode = check_regime(sig, n, mode)
    g, s = sig.genus, sig.s
    all_two = all(m == 2 for m in sig.orders)
    if n >= 3:
        if all_two:
            return count_sp2n_denominator_two(g, s), _EXPRESSIONS["sp2n-two"]
        return count_sp2n_weight_type(g, sig.orders), _EXPRESSIONS["sp2n-type"]
    if mode is Mode.FIXED_HALF:
        return count_sp4_fixed_half(g, s), _EXPRESSIONS["sp4-half"]
    if mode is Mode.NON_REDUCED:
        return count_sp4_non_reduced(g, sig.orders), _EXPRESSIONS["sp4-nonred"]
    if all_two:
        return count_sp4_denominator_two(g, s), _EXPRESSIONS["sp4-two"]
    return count_sp4_weight_type(g, sig.orders), _EXPRESSIONS["sp4-type"]


def count_components(
    sig: OrbifoldSignature,
    n: int,
    mode: Mode | str = Mode.WEIGHT_TYPE,
    weights: Sequence[Sequence[int]] | None = None,
) -> int:
    mode = check_regime(sig, n, mode)
    if mode is Mode.NON_REDUCED and weights is not None and not is_non_reduced(weights, sig.orders):
        raise ValidationError(
            "parabolic structure is reducible; reduce the fractions and pass the reduced weight type"
        )
    return closed_form(sig, n, mode)[0]


def family_counts(sig: OrbifoldSignature, n: int, mode: Mode | str = Mode.WEIGHT_TYPE) -> FamilyCounts:
    """Closed-form family sizes ``(uv, dw, sqrt)``; they sum to :func:`count_components`."""
    mode = check_regime(sig, n, mode)
    g, s, s0 = sig.genus, sig.s, sig.s0
    sqrt_count = 2 ** (2 * g + s0 - 1)
    if n >= 3:
        return FamilyCounts(2**s0 * 2 ** (2 * g + s0 - 1), 0, sqrt_count)
    uv = 2**s0 * (2 ** (2 * g + s0 - 1) - 1)
    if mode is Mode.WEIGHT_TYPE:
        dw = (2 * g - 2 + s) * math.prod(sig.orders)
    else:
        dw = 2 * g - 2 + s
    return FamilyCounts(uv, dw, sqrt_count)


def component_report(
    sig: OrbifoldSignature,
    n: int,
    mode: Mode | str = Mode.WEIGHT_TYPE,
    weights: Sequence[Sequence[int]] | None = None,
) -> dict:
    """``{"total", "families", "formula", "enumeration_agrees"}`` for one cell."""
    total = count_components(sig, n, mode, weights)
    _, expression = closed_form(sig, n, mode)
    families = family_counts(sig, n, mode)
    enumerated = enumeration_family_counts(sig, n, mode, weights)
    return {
        "total": total,
        "families": families.to_json(),
        "formula": expression,
        "enumeration_agrees": enumerated == families and enumerated.total == total,
    }
