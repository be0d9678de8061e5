"""Acceptance suite: one test per criterion, each reported as a PASS/FAIL line.

Every closed form is compared with an independent route (enumeration of
invariant classes, symbolic algebra or brute force), with exact integer or
rational equality throughout.
"""

import itertools
import math
import random
import time
from fractions import Fraction as F

import pytest
import sympy

from parhiggs.components import (
    Mode,
    count_components,
    count_sp4_denominator_two,
    count_sp4_weight_type,
    enumerate_invariant_classes,
    family_counts,
)
from parhiggs.higgs import (
    MinimumCase,
    SpHiggsData,
    classify_minimum_sp4,
    minima_decomposition_sp2n,
    morse_index_case_b,
    toledo_bound,
)
from parhiggs.parabolic import (
    ParabolicBundleData,
    PointWeights,
    allowed_block_pattern,
    direct_sum,
    dual,
    nilpotency_index,
    parabolic_line,
    pardeg,
    tensor_line,
)
from parhiggs.spectral import compatibility_multiplicity, spectral_cover_data
from parhiggs.vgeom import LineVBundle, OrbifoldSignature, mv_alternating_check, sqrt_solutions

from conftest import random_bundle

criterion = pytest.mark.criterion


def all_two_grid():
    for g in range(4):
        for s in range(1, 5):
            if 2 * g - 2 + s > 0:
                yield g, s


def mixed_grid(max_g=2, max_s=3, values=(2, 3, 4, 5)):
    for g in range(max_g + 1):
        for s in range(1, max_s + 1):
            for orders in itertools.combinations_with_replacement(values, s):
                sig = OrbifoldSignature(g, orders)
                if sig.s0 >= 1 and sig.kd_degree > 0:
                    yield sig


@criterion(1, "Sp(4,R), all weights of denominator two: closed form equals enumeration")
def test_sp4_denominator_two():
    start = time.perf_counter()
    for g, s in all_two_grid():
        sig = OrbifoldSignature(g, (2,) * s)
        closed = (2**s + 1) * 2 ** (2 * g + s - 1) + (2 * g - 3 + s) * 2**s
        assert count_components(sig, 2) == closed
        assert len(enumerate_invariant_classes(sig, 2)) == closed
    assert count_components(OrbifoldSignature(2, (2,)), 2) == 52
    assert time.perf_counter() - start < 5


@criterion(2, "Sp(2n,R) for n = 3, 4, denominator two: closed form equals enumeration")
def test_sp2n_denominator_two():
    for n in (3, 4):
        for g, s in all_two_grid():
            sig = OrbifoldSignature(g, (2,) * s)
            closed = (2**s + 1) * 2 ** (2 * g + s - 1)
            assert count_components(sig, n) == closed
            assert len(enumerate_invariant_classes(sig, n)) == closed
    assert count_components(OrbifoldSignature(2, (2,)), 3) == 48


@criterion(3, "mixed isotropy orders: closed forms equal enumeration")
def test_mixed_orders():
    cells = 0
    for sig in mixed_grid():
        g, s0 = sig.genus, sig.s0
        sp2n = (2**s0 + 1) * 2 ** (2 * g + s0 - 1)
        sp4 = sp2n - 2**s0 + sig.kd_degree * math.prod(sig.orders)
        for n, closed in ((2, sp4), (3, sp2n), (4, sp2n)):
            assert count_components(sig, n) == closed
            assert len(enumerate_invariant_classes(sig, n)) == closed
            cells += 1
    assert cells > 100
    assert count_components(OrbifoldSignature(1, (2, 3)), 2) == 22


@criterion(4, "fixed weight one half: closed form equals enumeration")
def test_fixed_half():
    for g, s in all_two_grid():
        sig = OrbifoldSignature(g, (2,) * s)
        closed = (2**s + 1) * 2 ** (2 * g + s - 1) + (2 * g - 2 + s) - 2**s
        assert count_components(sig, 2, Mode.FIXED_HALF) == closed
        assert len(enumerate_invariant_classes(sig, 2, Mode.FIXED_HALF)) == closed
    assert count_components(OrbifoldSignature(2, (2,)), 2, Mode.FIXED_HALF) == 49


@criterion(5, "weight-type count at all orders two specializes to the denominator-two count")
def test_specialization():
    g, s = sympy.symbols("g s", integer=True, nonnegative=True)
    s0 = s  # every order is even
    weight_type = (2**s0 + 1) * 2 ** (2 * g + s0 - 1) - 2**s0 + (2 * g - 2 + s) * 2**s
    two = (2**s + 1) * 2 ** (2 * g + s - 1) + (2 * g - 3 + s) * 2**s
    assert sympy.simplify(sympy.expand(weight_type - two)) == 0
    for gv, sv in all_two_grid():
        assert count_sp4_weight_type(gv, (2,) * sv) == count_sp4_denominator_two(gv, sv)


@criterion(6, "family sizes uv + dw + sqrt sum to the denominator-two count")
def test_family_decomposition():
    for g, s in all_two_grid():
        fam = family_counts(OrbifoldSignature(g, (2,) * s), 2)
        assert fam.uv == 2**s * (2 ** (2 * g + s - 1) - 1)
        assert fam.dw == (2 * g - 2 + s) * 2**s
        assert fam.sqrt == 2 ** (2 * g + s - 1)
        assert fam.total == count_sp4_denominator_two(g, s)


def brute_force_roots(sig):
    """Count square roots of K(D): isotropy in {0, m/2}, carries fixing the degree parity."""
    count = 0
    for carries in itertools.product(*([0, 1] if m % 2 == 0 else [0] for m in sig.orders)):
        if (sig.kd_degree - sum(carries)) % 2 == 0:
            count += 1
    return count * 4**sig.genus


@criterion(7, "square roots of K(D) number 2^(2g+s0-1)")
def test_sqrt_count():
    checked = 0
    for g in range(5):
        for s in range(1, 5):
            for orders in itertools.combinations_with_replacement(range(2, 7), s):
                sig = OrbifoldSignature(g, orders)
                if sig.s0 == 0:
                    continue
                roots = sqrt_solutions(LineVBundle.canonical_kd(sig), sig)
                assert roots.total == 2 ** (2 * g + sig.s0 - 1) == brute_force_roots(sig)
                checked += 1
    assert checked > 500


@criterion(8, "parabolic calculus identities on 10^4 random bundles")
def test_parabolic_properties():
    rng = random.Random(8)
    cases = []
    for _ in range(10_000):
        s = rng.randint(0, 3)
        weights = [F(rng.randrange(q), q) for q in (rng.randint(1, 12) for _ in range(s))]
        cases.append((random_bundle(rng, s), random_bundle(rng, s), parabolic_line(rng.randint(-5, 5), weights)))
    start = time.perf_counter()
    for a, b, line in cases:
        da = dual(a)
        assert pardeg(da) == -pardeg(a)
        assert dual(da) == a
        assert pardeg(direct_sum(a, b)) == pardeg(a) + pardeg(b)
        t = tensor_line(a, line)
        assert pardeg(t) == pardeg(a) + a.rank * pardeg(line)
        for bundle in (da, t):
            for p in bundle.points:
                assert p.rank == a.rank
                assert all(0 <= w < 1 for w in p.weights)
    elapsed = time.perf_counter() - start
    assert elapsed < 2, f"{elapsed:.2f} s"


@criterion(9, "Mayer-Vietoris alternating sum vanishes")
def test_mayer_vietoris():
    for g in range(11):
        for s in range(1, 7):
            for orders in itertools.combinations_with_replacement((2, 3, 4, 5), s):
                sig = OrbifoldSignature(g, orders)
                if sig.s0 == 0:
                    continue
                check = mv_alternating_check(sig)
                assert check.alternating_sum == 0 and check.ok


def discriminant_zero_count(n, ell, rng):
    """Degree and squarefreeness of the discriminant of a generic spectral polynomial."""
    z, lam = sympy.symbols("z lam")
    coeffs = [sympy.Poly([rng.randint(-9, 9) or 1 for _ in range(i * ell + 1)], z).as_expr() for i in range(1, n + 1)]
    char = lam**n + sum(c * lam ** (n - i) for i, c in enumerate(coeffs, start=1))
    disc = sympy.Poly(sympy.discriminant(char, lam), z)
    return disc.degree(), sympy.gcd(disc, disc.diff(z)).degree() == 0


@criterion(10, "discriminant degree oracle and Riemann-Hurwitz genus")
def test_spectral_oracle():
    rng = random.Random(10)
    base = OrbifoldSignature(1, (2,))
    for ell in range(1, 11):
        degree, squarefree = discriminant_zero_count(2, ell, rng)
        assert squarefree
        assert degree == 2 * ell == spectral_cover_data(base, 2, ell).branch_degree
    for g in range(6):
        for s in range(0, 5):
            for n in range(1, 6):
                sig = OrbifoldSignature(g, (2,) * s)
                if sig.kd_degree <= 0:
                    continue
                c = spectral_cover_data(sig, n)
                assert isinstance(c.spectral_genus, int) and c.spectral_genus >= 0
                assert 2 * c.spectral_genus - 2 == n * (2 * g - 2) + c.branch_degree


@criterion(11, "compatibility multiplicity equals distinct orderings")
def test_multiplicity():
    pool = sorted({F(p, q) for q in range(1, 5) for p in range(q)})
    checked = 0
    for length in range(1, 7):
        for ws in itertools.combinations_with_replacement(pool, length):
            assert compatibility_multiplicity(ws) == len(set(itertools.permutations(ws)))
            checked += 1
    assert checked == sum(math.comb(len(pool) + k - 1, k) for k in range(1, 7))


def sp4_triple(g, s, p, beta):
    """A rank-two V over orders (2,...,2) with parabolic degree p (a half-integer)."""
    half = p.denominator == 2
    weights = [[F(1, 2) if (i == 0 and half) else F(0), F(0)] for i in range(s)]
    V = ParabolicBundleData(2, math.floor(p), tuple(PointWeights.from_multiset(w) for w in weights))
    return SpHiggsData(2, V, OrbifoldSignature(g, (2,) * s), beta_present=beta, gamma_present=True)


@criterion(12, "Sp(4,R) minima dichotomy and index vanishing on the maximal locus")
def test_minima_logic():
    for g in range(4):
        for s in range(1, 5):
            kd = 2 * g - 2 + s
            if kd <= 0:
                continue
            for twice in range(0, 2 * kd + 1):
                p = F(twice, 2)
                index = morse_index_case_b(g, s, p)
                assert (index == 0) == (p == toledo_bound(2, g, s))
                for beta in (True, False):
                    v = classify_minimum_sp4(sp4_triple(g, s, p, beta))
                    if not beta and p > 0:
                        assert v.is_minimum and v.case is MinimumCase.TYPE_1
                    elif p == kd:
                        assert v.is_minimum and v.case is MinimumCase.TYPE_2 and v.index == 0
                    else:
                        assert not v.is_minimum and v.index == index > 0


@criterion(13, "Sp(2n,R) minima summands have total degree n(g - 1 + s/2)")
def test_decomposition_totals():
    for n in range(3, 9):
        for g in range(6):
            for s in range(0, 7):
                if 2 * g - 2 + s <= 0:
                    continue
                degrees = minima_decomposition_sp2n(n, g, s)
                assert len(degrees) == n
                assert sum(degrees) == n * (F(g - 1) + F(s, 2))


@criterion(14, "strongly parabolic block patterns are nilpotent")
def test_strong_nilpotency():
    pool = [F(k, 12) for k in range(12)]
    for size in range(1, 7):
        for ws in itertools.combinations(pool, size):
            pw = PointWeights(tuple((w, 1) for w in ws))
            index = nilpotency_index(allowed_block_pattern(pw, pw, strong=True))
            assert index is not None and index <= size
            assert nilpotency_index(allowed_block_pattern(pw, pw)) is None
