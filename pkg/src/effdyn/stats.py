"""Statistical behavior of orbits: Birkhoff averages, typicality against
a family of almost decidable sets, and recurrence statistics.

Orbit membership is certified through enclosures, so boundary-straddling
steps are counted as undecided and reported, never silently assigned;
exactly rational orbits leave undecided counts at zero except for honest
boundary hits.  Pseudo-random seeds are dyadic rationals from a recorded
generator and seed: algorithmically random points cannot be exhibited, so
the experiments test their predicted consequences on such seeds instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from effdyn import dynamics as dy
from effdyn import symbolic as sb
from effdyn.measure import AlmostDecidableSet, ComputableMeasure, measure_of_ad_set
from effdyn.space import Kind, Point, Space, SpaceMismatch

F = Fraction


@dataclass(frozen=True)
class BirkhoffResult:
    inside: int
    outside: int
    undecided: int
    horizon: int

    @property
    def average(self) -> F:
        return F(self.inside, self.horizon)

    @property
    def complement_average(self) -> F:
        return F(self.outside, self.horizon)


def _ad_partition(ad: AlmostDecidableSet, budget: int = 16) -> sb.ComputablePartition:
    """Two-atom partition {inner, outer} of an almost decidable set."""
    space = ad.space

    def pieces_of(balls):
        out = []
        for ball in balls:
            c = ball.center_desc
            out.append((c - ball.radius, c + ball.radius))
        return tuple(out)

    inner = pieces_of(ad.inside.enumerate(budget))
    outer = pieces_of(ad.outside.enumerate(budget))
    boundary = set()
    for a, b in inner + outer:
        for q in (a, b):
            q = F(q)
            if space.kind is Kind.CIRCLE:
                boundary.add(q - (q.numerator // q.denominator))
            elif 0 < q < 1:
                boundary.add(q)
    return sb.ComputablePartition(
        space, (inner, outer), tuple(sorted(boundary)), name="ad-indicator"
    )


def birkhoff_average(
    sys: dy.System,
    x: Point,
    target: AlmostDecidableSet,
    n: int,
    precision: int = 24,
) -> BirkhoffResult:
    """Certified visit frequency of the first n orbit steps.

    Returns inside/outside/undecided counts; inside + outside + undecided
    equals the horizon exactly.
    """
    partition = _ad_partition(target)
    word = sb.code_orbit(sys, x, partition, n, precision)
    inside = sum(1 for s in word.symbols if s == 0)
    outside = sum(1 for s in word.symbols if s == 1)
    return BirkhoffResult(inside, outside, n - inside - outside, n)


@dataclass(frozen=True)
class EmpiricalMeasure:
    """Visit frequencies of one orbit, queried per almost decidable set."""

    system: dy.System
    base: Point
    horizon: int

    def frequency(self, target: AlmostDecidableSet) -> BirkhoffResult:
        return birkhoff_average(self.system, self.base, target, self.horizon)


@dataclass(frozen=True)
class TypicalityResult:
    residuals: Tuple[Tuple[str, float], ...]
    max_residual: float
    undecided_fraction: float
    tolerance: float
    verdict: Optional[bool]  # None: inconclusive or below the minimum horizon

    @property
    def passed(self) -> bool:
        return bool(self.verdict)


def dyadic_ball_family(space: Space, max_level: int) -> List[Tuple[str, AlmostDecidableSet]]:
    """All dyadic intervals [j/2^l, (j+1)/2^l) with 1 <= l <= max_level."""
    family = []
    for level in range(1, max_level + 1):
        cells = 1 << level
        for j in range(cells):
            ad = AlmostDecidableSet.from_interval(space, F(j, cells), F(j + 1, cells))
            family.append((f"[{j}/{cells},{j + 1}/{cells})", ad))
    return family


def typicality_test(
    sys: dy.System,
    mu: ComputableMeasure,
    x: Point,
    family: Sequence[Tuple[str, AlmostDecidableSet]],
    n: int,
    tol: float,
    n_min: int = 100,
    precision: int = 24,
) -> TypicalityResult:
    """Max deviation of orbit frequencies from mu over the family.

    Fails closed: an undecided fraction above tol/2 yields an inconclusive
    verdict, as does a horizon below n_min.
    """
    if sys.map_kind is dy.MapKind.DOUBLING and isinstance(x.exact, F):
        return _typicality_dyadic_fast(sys, mu, x, family, n, tol, n_min)
    residuals = []
    worst_undecided = 0
    for label, ad in family:
        result = birkhoff_average(sys, x, ad, n, precision)
        worst_undecided = max(worst_undecided, result.undecided)
        target = measure_of_ad_set(mu, ad, 20).midpoint
        residuals.append((label, abs(float(result.average) - float(target))))
    return _verdict(residuals, worst_undecided / n, tol, n >= n_min)


def _typicality_dyadic_fast(sys, mu, x, family, n, tol, n_min) -> TypicalityResult:
    """One coding pass at the finest level; coarser sets aggregate counts."""
    finest = 1
    for _, ad in family:
        for ball in ad.inside.enumerate(4):
            den = ball.center_desc.denominator
            finest = max(finest, den.bit_length() - 1)
    partition = sb.dyadic_intervals(sys.space, finest)
    word = sb.code_orbit(sys, x, partition, n)
    cells = 1 << finest
    counts = [0] * cells
    undecided = 0
    for s in word.symbols:
        if s is None:
            undecided += 1
        else:
            counts[s] += 1
    residuals = []
    for label, ad in family:
        region = mu.region(ad.inside.enumerate(4))
        hits = sum(
            counts[j]
            for j in range(cells)
            if region.contains(F(2 * j + 1, 2 * cells))
        )
        target = measure_of_ad_set(mu, ad, 20).midpoint
        residuals.append((label, abs(hits / n - float(target))))
    return _verdict(residuals, undecided / n, tol, n >= n_min)


def _verdict(residuals, undecided_fraction, tol, horizon_ok) -> TypicalityResult:
    worst = max(r for _, r in residuals)
    verdict: Optional[bool]
    if not horizon_ok or undecided_fraction > tol / 2:
        verdict = None
    else:
        verdict = worst <= tol
    return TypicalityResult(tuple(residuals), worst, undecided_fraction, tol, verdict)


def recurrence_stat(
    sys: dy.System, x: Point, n: int, precision: int = 20, prefix_cap: int = 96
) -> F:
    """Min over 1 <= k <= n of a certified upper bound on d(x, T^k x).

    Non-increasing in n.  Sequence-space points are compared symbolwise up
    to prefix_cap; interval and circle orbits through enclosures (exact
    for rational data).
    """
    if n < 1:
        raise ValueError("need n >= 1")
    if sys.map_kind is dy.MapKind.SHIFT:
        if not callable(x.exact):
            raise SpaceMismatch("shift recurrence needs a symbol oracle")
        window = [x.exact(j) for j in range(n + prefix_cap)]
        best = F(1)
        for k in range(1, n + 1):
            first_diff = next(
                (j for j in range(prefix_cap) if window[j] != window[j + k]), None
            )
            bound = F(1, 1 << prefix_cap) if first_diff is None else F(1, 1 << first_diff)
            best = min(best, bound)
        return best
    seg = dy.iterate(sys, x, n + 1, precision)
    base = seg.enclosures[0]
    best = None
    for k in range(1, n + 1):
        d = dy.enclosure_dist(sys.space, base, seg.enclosures[k])
        best = d.hi if best is None else min(best, d.hi)
    return best
