"""Exact calculus of parabolic weight systems.

A parabolic bundle is represented only by its combinatorial shadow: rank,
underlying integer degree, and at each marked point the strictly increasing
weights in [0, 1) with their multiplicities. Everything is exact
(:class:`fractions.Fraction`); no floating point is involved.

Weights that leave [0, 1) during a construction are reduced mod 1 and the
integer part is pushed into the underlying degree, so that the parabolic
degree is preserved.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from parhiggs.errors import ValidationError
from parhiggs.rational import parse_rational

_ZERO = Fraction(0)
_ONE = Fraction(1)


def as_weight(value) -> Fraction:
    """Coerce ``value`` to a weight, checking ``0 <= value < 1``."""
    w = value if type(value) is Fraction else parse_rational(value)
    if w.numerator < 0 or w.numerator >= w.denominator:
        raise ValidationError(f"weight {w} outside [0, 1)")
    return w


@dataclass(frozen=True)
class PointWeights:
    """Weights at one marked point, as ``((weight, multiplicity), ...)``."""

    entries: tuple[tuple[Fraction, int], ...]

    def __post_init__(self) -> None:
        entries = tuple((w if type(w) is Fraction else parse_rational(w), k) for w, k in self.entries)
        object.__setattr__(self, "entries", entries)
        # integer comparisons: this runs for every intermediate bundle
        prev_n, prev_d = -1, 1
        for w, k in entries:
            n, d = w.numerator, w.denominator
            if n < 0 or n >= d:
                raise ValidationError(f"weight {w} outside [0, 1)")
            if type(k) is not int or k < 1:
                raise ValidationError(f"multiplicity must be a positive integer, got {k!r}")
            if n * prev_d <= prev_n * d:
                raise ValidationError("weights must be strictly increasing")
            prev_n, prev_d = n, d

    @classmethod
    def of(cls, *pairs) -> "PointWeights":
        """``PointWeights.of(("1/3", 1), ("2/3", 2))``; a bare weight means multiplicity 1."""
        entries = []
        for pair in pairs:
            if isinstance(pair, tuple):
                w, k = pair
            else:
                w, k = pair, 1
            entries.append((parse_rational(w), k))
        return cls(tuple(entries))

    @classmethod
    def from_multiset(cls, weights: Iterable) -> "PointWeights":
        """Build from an unsorted weight list with repetitions."""
        counts = Counter(as_weight(w) for w in weights)
        return cls(tuple(sorted(counts.items())))

    @property
    def weights(self) -> tuple[Fraction, ...]:
        return tuple(w for w, _ in self.entries)

    @property
    def multiplicities(self) -> tuple[int, ...]:
        return tuple(k for _, k in self.entries)

    @property
    def rank(self) -> int:
        return sum(k for _, k in self.entries)

    def expanded(self) -> tuple[Fraction, ...]:
        """Weights repeated by multiplicity, ascending: ``alpha_1 <= ... <= alpha_n``."""
        return tuple(w for w, k in self.entries for _ in range(k))

    def weighted_sum(self) -> Fraction:
        return sum((k * w for w, k in self.entries), _ZERO)


def _reduce_point(pairs: Iterable[tuple[Fraction, int]]) -> tuple[PointWeights, int]:
    """Reduce arbitrary rational weights mod 1, merging ties.

    Returns the normalized point and the integer carry (sum of
    ``multiplicity * floor(weight)``) that must be added to the degree.
    """
    counts: dict[Fraction, int] = {}
    carry = 0
    for w, k in pairs:
        if k == 0:
            continue
        if k < 0:
            raise ValidationError(f"negative multiplicity {k}")
        whole = math.floor(w)
        carry += k * whole
        frac = w - whole
        counts[frac] = counts.get(frac, 0) + k
    return PointWeights(tuple(sorted(counts.items()))), carry


@dataclass(frozen=True)
class ParabolicBundleData:
    """Rank, underlying degree and one :class:`PointWeights` per marked point."""

    rank: int
    degree: int
    points: tuple[PointWeights, ...] = ()

    def __post_init__(self) -> None:
        if not isinstance(self.rank, int) or isinstance(self.rank, bool) or self.rank < 1:
            raise ValidationError(f"rank must be a positive integer, got {self.rank!r}")
        if not isinstance(self.degree, int) or isinstance(self.degree, bool):
            raise ValidationError(f"degree must be an integer, got {self.degree!r}")
        points = tuple(self.points)
        object.__setattr__(self, "points", points)
        for i, p in enumerate(points):
            if not isinstance(p, PointWeights):
                raise ValidationError(f"point {i} is not a PointWeights")
            if p.rank != self.rank:
                raise ValidationError(
                    f"multiplicities at point {i} sum to {p.rank}, expected rank {self.rank}"
                )

    @classmethod
    def normalized(cls, rank: int, degree: int, points: Sequence[Iterable[tuple]]) -> "ParabolicBundleData":
        """Build from unnormalized data: weights may be any rationals.

        Each weight is reduced into [0, 1); the integer parts are carried
        into the degree so that the parabolic degree is unchanged.
        """
        new_points = []
        for raw in points:
            point, carry = _reduce_point((parse_rational(w), k) for w, k in raw)
            degree += carry
            new_points.append(point)
        return cls(rank, degree, tuple(new_points))

    @property
    def s(self) -> int:
        return len(self.points)

    @property
    def pardeg(self) -> Fraction:
        return pardeg(self)

    @property
    def slope(self) -> Fraction:
        return parabolic_slope(self)


def parabolic_line(degree: int, weights: Sequence = ()) -> ParabolicBundleData:
    """Rank-one parabolic bundle with one weight per marked point."""
    return ParabolicBundleData(1, degree, tuple(PointWeights(((as_weight(w), 1),)) for w in weights))


def pardeg(b: ParabolicBundleData) -> Fraction:
    num, den = b.degree, 1
    for p in b.points:
        for w, k in p.entries:
            wn, wd = w.numerator, w.denominator
            if wd != den:
                lcm = den * wd // math.gcd(den, wd)
                num *= lcm // den
                den = lcm
            num += k * wn * (den // wd)
    return Fraction(num, den)


def parabolic_slope(b: ParabolicBundleData) -> Fraction:
    return pardeg(b) / b.rank


def dual(b: ParabolicBundleData) -> ParabolicBundleData:
    """Parabolic dual.

    Weights become ``1 - alpha`` except that weight 0 stays 0; the degree is
    the unique integer making ``pardeg(dual(b)) == -pardeg(b)``, namely
    ``-deg - (number of nonzero weights counted with multiplicity)``.
    """
    degree = -b.degree
    points = []
    for p in b.points:
        entries = []
        for w, k in reversed(p.entries):
            if w == 0:
                entries.append((w, k))
            else:
                entries.append((_ONE - w, k))
                degree -= k
        # weight 0 is the smallest before and after; move it to the front
        if entries and entries[-1][0] == 0:
            entries.insert(0, entries.pop())
        points.append(PointWeights(tuple(entries)))
    return ParabolicBundleData(b.rank, degree, tuple(points))


def _check_same_divisor(a: ParabolicBundleData, b: ParabolicBundleData) -> None:
    if len(a.points) != len(b.points):
        raise ValidationError(
            f"bundles live over different divisors: {len(a.points)} vs {len(b.points)} marked points"
        )


def _merge_entries(a: PointWeights, b: PointWeights) -> PointWeights:
    """Union of two weight systems, adding multiplicities of equal weights."""
    out = []
    ea, eb = a.entries, b.entries
    i = j = 0
    while i < len(ea) and j < len(eb):
        (wa, ka), (wb, kb) = ea[i], eb[j]
        lhs, rhs = wa.numerator * wb.denominator, wb.numerator * wa.denominator
        if lhs == rhs:
            out.append((wa, ka + kb))
            i += 1
            j += 1
        elif lhs < rhs:
            out.append((wa, ka))
            i += 1
        else:
            out.append((wb, kb))
            j += 1
    out.extend(ea[i:])
    out.extend(eb[j:])
    return PointWeights(tuple(out))


def direct_sum(a: ParabolicBundleData, b: ParabolicBundleData) -> ParabolicBundleData:
    _check_same_divisor(a, b)
    points = tuple(_merge_entries(pa, pb) for pa, pb in zip(a.points, b.points))
    return ParabolicBundleData(a.rank + b.rank, a.degree + b.degree, points)


def tensor_line(b: ParabolicBundleData, line: ParabolicBundleData) -> ParabolicBundleData:
    """Tensor product with a parabolic line bundle.

    At each point every weight moves to ``alpha + beta`` mod 1. Entries that
    wrap past 1 come from the ``L(D)`` part of the kernel construction and
    each contributes one unit to the degree.
    """
    if line.rank != 1:
        raise ValidationError(f"tensor_line needs a rank-one bundle, got rank {line.rank}")
    _check_same_divisor(b, line)
    degree = b.degree + b.rank * line.degree
    points = []
    for p, lp in zip(b.points, line.points):
        beta = lp.entries[0][0]
        low, high = [], []
        for w, k in p.entries:
            shifted = w + beta
            if shifted >= 1:
                high.append((shifted - 1, k))
                degree += k
            else:
                low.append((shifted, k))
        points.append(PointWeights(tuple(high + low)))
    return ParabolicBundleData(b.rank, degree, tuple(points))


def tensor_pardeg(a: ParabolicBundleData, b: ParabolicBundleData) -> Fraction:
    """Parabolic degree of ``a (x) b`` for arbitrary ranks (weight data not built)."""
    _check_same_divisor(a, b)
    return b.rank * pardeg(a) + a.rank * pardeg(b)


def induced_sub_weights(
    ambient: PointWeights,
    incidence: Sequence[int],
    multiplicities: Sequence[int] | None = None,
) -> PointWeights:
    """Weights of a parabolic subbundle at one point.

    ``incidence[i]`` is the 1-based index ``j`` of the smallest ambient flag
    step ``E_j`` still containing the i-th sub-flag step, so the sub-step
    receives weight ``alpha_j``. ``multiplicities`` gives the dimension of
    each sub-flag graded piece (default: full flag, all ones).
    """
    if multiplicities is None:
        multiplicities = [1] * len(incidence)
    if len(multiplicities) != len(incidence):
        raise ValidationError("incidence and multiplicities differ in length")
    if not incidence:
        raise ValidationError("empty incidence")
    r = len(ambient.entries)
    for j in incidence:
        if not isinstance(j, int) or not 1 <= j <= r:
            raise ValidationError(f"incidence index {j!r} outside 1..{r}")
    steps = list(incidence)
    if not (steps == sorted(steps) or steps == sorted(steps, reverse=True)):
        raise ValidationError(f"incidence {tuple(steps)} is not monotone along the sub-flag")
    merged: dict[Fraction, int] = {}
    for j, k in zip(steps, multiplicities):
        if k < 1:
            raise ValidationError(f"sub-flag multiplicity must be positive, got {k}")
        w = ambient.entries[j - 1][0]
        merged[w] = merged.get(w, 0) + k
    return PointWeights(tuple(sorted(merged.items())))


def allowed_block_pattern(src: PointWeights, dst: PointWeights, strong: bool = False) -> tuple[tuple[bool, ...], ...]:
    """Which graded blocks of a (strongly) parabolic morphism may be nonzero.

    Entry ``(i, j)`` refers to the piece of weight ``src.weights[i]`` mapping
    to the piece of weight ``dst.weights[j]``: allowed iff ``alpha_i <= alpha'_j``,
    or ``alpha_i < alpha'_j`` for strongly parabolic maps.
    """
    if strong:
        return tuple(tuple(a < b for b in dst.weights) for a in src.weights)
    return tuple(tuple(a <= b for b in dst.weights) for a in src.weights)


def boolean_matrix_product(a: Sequence[Sequence[bool]], b: Sequence[Sequence[bool]]) -> tuple[tuple[bool, ...], ...]:
    cols = len(b[0]) if b else 0
    return tuple(
        tuple(any(row[k] and b[k][j] for k in range(len(row))) for j in range(cols)) for row in a
    )


def nilpotency_index(matrix: Sequence[Sequence[bool]]) -> int | None:
    """Smallest ``p >= 1`` with ``matrix**p == 0`` (boolean), or ``None``.

    Only powers up to the matrix size are tried; a nilpotent boolean
    square matrix always vanishes by then.
    """
    size = len(matrix)
    if size == 0:
        return 1
    power = tuple(tuple(bool(x) for x in row) for row in matrix)
    for p in range(1, size + 1):
        if not any(any(row) for row in power):
            return p
        power = boolean_matrix_product(power, matrix)
    return None


@dataclass(frozen=True)
class SlopeVerdict:
    violates: bool
    sub_slope: Fraction
    ambient_slope: Fraction
    semistable: bool


def destabilizing_check(ambient: ParabolicBundleData, sub: ParabolicBundleData, semistable: bool = False) -> SlopeVerdict:
    """Compare the parabolic slope of candidate sub-data against the ambient.

    Stability is violated when ``parmu(sub) >= parmu(ambient)``, semistability
    when ``parmu(sub) > parmu(ambient)``. No subbundle search is done.
    """
    if not 1 <= sub.rank < ambient.rank:
        raise ValidationError(f"sub rank {sub.rank} must satisfy 1 <= rank < {ambient.rank}")
    mu_sub = parabolic_slope(sub)
    mu_amb = parabolic_slope(ambient)
    violates = mu_sub > mu_amb if semistable else mu_sub >= mu_amb
    return SlopeVerdict(violates, mu_sub, mu_amb, semistable)


# JSON: {"rank": int, "degree": int, "points": [{"weights": [{"num","den","mult"}, ...]}, ...]}


def bundle_to_json(b: ParabolicBundleData) -> dict:
    return {
        "rank": b.rank,
        "degree": b.degree,
        "points": [
            {"weights": [{"num": w.numerator, "den": w.denominator, "mult": k} for w, k in p.entries]}
            for p in b.points
        ],
    }


def _int_field(obj: dict, key: str) -> int:
    value = obj.get(key)
    if not isinstance(value, int) or isinstance(value, bool):
        raise ValidationError(f"field {key!r} must be an integer, got {value!r}")
    return value


def point_from_json(obj: object) -> PointWeights:
    if not isinstance(obj, dict) or not isinstance(obj.get("weights"), list):
        raise ValidationError(f"point must be an object with a 'weights' list: {obj!r}")
    entries = []
    for item in obj["weights"]:
        if not isinstance(item, dict):
            raise ValidationError(f"weight entry must be an object: {item!r}")
        den = _int_field(item, "den")
        if den <= 0:
            raise ValidationError(f"denominator must be positive: {item!r}")
        entries.append((Fraction(_int_field(item, "num"), den), _int_field(item, "mult")))
    return PointWeights(tuple(entries))


def bundle_from_json(obj: object) -> ParabolicBundleData:
    if not isinstance(obj, dict):
        raise ValidationError("bundle JSON must be an object")
    points = obj.get("points", [])
    if not isinstance(points, list):
        raise ValidationError("'points' must be a list")
    return ParabolicBundleData(_int_field(obj, "rank"), _int_field(obj, "degree"), tuple(point_from_json(p) for p in points))
