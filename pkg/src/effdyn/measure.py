"""Computable probability measures and almost decidable sets.

The built-in measure zoo (Lebesgue on the interval and circle, finite
mixtures with point masses, Bernoulli and Markov measures on sequence
space) admits exact rational values on finite unions of ideal balls.  The
budgeted lower-bound oracle floors the exact value onto the dyadic grid
2**-budget, which keeps it a monotone, converging lower bound; a separate
grid-exhaustion oracle provides an independent route for cross-checks.

Prokhorov distances between finitely supported measures are computed
exactly by sweeping all support subsets.  The continuity-radius search
runs the trisection scheme: maintain a nested interval of radii, each
stage certifying that the closed annulus between its endpoints has small
mass by lower-bounding the measure of the annulus complement.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence, Tuple

from effdyn.numerics import Interval, dyadic_floor
from effdyn.space import (
    EnumeratedOpenSet,
    IdealBall,
    Kind,
    Space,
    SpaceMismatch,
)

F = Fraction


class SupportTooLarge(ValueError):
    """Combined support exceeds the brute-force bound."""


class ZeroMassCondition(ValueError):
    """Conditioning set has no certified positive mass."""


class InvalidWitness(ValueError):
    """Almost-decidable gap witness failed to certify."""


class RadiusStall(RuntimeError):
    """Neither trisection candidate certified within the step budget."""

    def __init__(self, stage: int, certificate):
        super().__init__(f"radius search stalled at stage {stage}")
        self.stage = stage
        self.certificate = certificate


# ---------------------------------------------------------------------------
# Regions: normalized geometry for finite unions of ideal balls
# ---------------------------------------------------------------------------


def _merge_pieces(pieces):
    """Merge open intervals on strict overlap only.

    Touching pieces like (0, 1/2) and (1/2, 1) stay separate: their union
    genuinely excludes the shared endpoint, which matters for point masses.
    """
    pieces = sorted((a, b) for a, b in pieces if a < b)
    merged = []
    for a, b in pieces:
        if merged and a < merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], b))
        else:
            merged.append((a, b))
    return merged


@dataclass(frozen=True)
class LineRegion:
    """Open subset of [0, 1] as merged open pieces (may overhang [0, 1])."""

    pieces: Tuple[Tuple[F, F], ...]

    def contains(self, q: F) -> bool:
        return any(a < q < b for a, b in self.pieces)

    def length(self) -> F:
        total = F(0)
        for a, b in self.pieces:
            lo, hi = max(a, F(0)), min(b, F(1))
            if lo < hi:
                total += hi - lo
        return total

    def intersect(self, other: "LineRegion") -> "LineRegion":
        out = []
        for a, b in self.pieces:
            for c, d in other.pieces:
                lo, hi = max(a, c), min(b, d)
                if lo < hi:
                    out.append((lo, hi))
        return LineRegion(tuple(_merge_pieces(out)))


@dataclass(frozen=True)
class CircleRegion:
    """Open subset of the circle as arcs (a, b) with a in [0,1), b <= a+1."""

    pieces: Tuple[Tuple[F, F], ...]
    full: bool = False

    def contains(self, q: F) -> bool:
        if self.full:
            return True
        q = q - (q.numerator // q.denominator)
        return any(a < q + t < b for a, b in self.pieces for t in (0, 1))

    def length(self) -> F:
        if self.full:
            return F(1)
        return sum((b - a for a, b in self.pieces), F(0))

    def intersect(self, other: "CircleRegion") -> "CircleRegion":
        if self.full:
            return other
        if other.full:
            return self
        out = []
        for a, b in self.pieces:
            for c, d in other.pieces:
                for t in (-1, 0, 1):
                    lo, hi = max(a, c + t), min(b, d + t)
                    if lo < hi:
                        out.append((lo, hi))
        return _circle_region(out)


def _circle_region(arcs) -> CircleRegion:
    """Normalize raw arcs (any rational endpoints, length <= 1) to a region.

    Strategy: an uncovered cut point always exists among arc endpoints when
    the union is proper (the closure of each complement component starts at
    an arc end), so shift coordinates to such a point, merge linearly, and
    shift back.
    """
    raw = []
    for a, b in arcs:
        if a >= b:
            continue
        if b - a >= 1:
            return CircleRegion((), full=True)
        shift = a.numerator // a.denominator
        raw.append((a - shift, b - shift))  # start in [0,1), end <= start+1
    if not raw:
        return CircleRegion(())

    def covered(q: F) -> bool:
        return any(a < q + t < b for a, b in raw for t in (0, 1))

    cut = None
    for _, b in raw:
        candidate = b - (b.numerator // b.denominator) if b >= 1 else b
        if not covered(candidate):
            cut = candidate
            break
    if cut is None:
        return CircleRegion((), full=True)
    shifted = []
    for a, b in raw:
        s = a - cut if a >= cut else a - cut + 1
        shifted.append((s, s + (b - a)))
    merged = _merge_pieces(shifted)
    out = []
    for a, b in merged:
        start = a + cut
        if start >= 1:
            start -= 1
        out.append((start, start + (b - a)))
    return CircleRegion(tuple(sorted(out)))


@dataclass(frozen=True)
class CylinderRegion:
    """Union of cylinders given by a canonical prefix-free word list."""

    words: Tuple[Tuple[int, ...], ...]

    def contains_prefix(self, word: Tuple[int, ...]) -> bool:
        """Does the cylinder of `word` sit inside the region?"""
        return any(word[: len(w)] == w for w in self.words)

    def intersect(self, other: "CylinderRegion") -> "CylinderRegion":
        out = []
        for u in self.words:
            for v in other.words:
                if u[: len(v)] == v or v[: len(u)] == u:
                    out.append(u if len(u) >= len(v) else v)
        return CylinderRegion(_canonical_words(out))


def _canonical_words(words) -> Tuple[Tuple[int, ...], ...]:
    kept = []
    for w in sorted(set(words), key=len):
        if not any(w[: len(v)] == v for v in kept):
            kept.append(w)
    return tuple(sorted(kept))


def ball_to_cylinder(ball: IdealBall) -> Optional[Tuple[int, ...]]:
    """Cylinder word of a sequence-space ball: agreement forced wherever
    2**-i >= radius.  Radius > 1 covers the whole space (empty word)."""
    length = 0
    while F(1, 1 << length) >= ball.radius:
        length += 1
    word = tuple(ball.center_desc)
    if len(word) < length:
        word = word + (0,) * (length - len(word))
    return word[:length]


def region_of_balls(space: Space, balls: Sequence[IdealBall]):
    for ball in balls:
        if ball.space != space:
            raise SpaceMismatch(f"{ball.space} vs {space}")
    if space.kind is Kind.UNIT_INTERVAL:
        return LineRegion(
            tuple(_merge_pieces((b.center_desc - b.radius, b.center_desc + b.radius) for b in balls))
        )
    if space.kind is Kind.CIRCLE:
        arcs = []
        for b in balls:
            if b.radius >= F(1, 2):
                return CircleRegion((), full=True)
            arcs.append((b.center_desc - b.radius, b.center_desc + b.radius))
        return _circle_region(arcs)
    if space.kind is Kind.CANTOR:
        return CylinderRegion(_canonical_words(ball_to_cylinder(b) for b in balls))
    raise SpaceMismatch(f"no measure support for {space}")


def interval_as_balls(space: Space, a: F, b: F) -> Tuple[IdealBall, ...]:
    """Exact ideal-ball presentation of the open interval/arc (a, b)."""
    a, b = F(a), F(b)
    if not a < b:
        return ()
    if space.kind is Kind.CIRCLE and b - a >= 1:
        return (IdealBall(space, space.encode_dyadic(F(0)), F(1)),)
    mid = (a + b) / 2
    if mid.denominator & (mid.denominator - 1) == 0:
        return (IdealBall(space, space.encode_dyadic(mid), mid - a),)
    # dyadic just below and above the midpoint, fine enough to overlap
    level = (b - a).denominator.bit_length() + (b - a).numerator.bit_length() + 4
    m1 = dyadic_floor(mid, level)
    m2 = m1 + F(1, 1 << level)
    return (
        IdealBall(space, space.encode_dyadic(m1), m1 - a),
        IdealBall(space, space.encode_dyadic(m2), b - m2),
    )


def cylinder_as_ball(space: Space, word) -> IdealBall:
    word = tuple(word)
    radius = F(3, 2 << len(word)) if word else F(2)
    return IdealBall(space, space.encode_word(word), radius)


# ---------------------------------------------------------------------------
# Measure models (exact on regions)
# ---------------------------------------------------------------------------


class _LebesgueModel:
    def region_measure(self, region) -> F:
        return region.length()


@dataclass(frozen=True)
class _MixtureModel:
    base_weight: F
    atoms: Tuple[Tuple[F, F], ...]  # (position, weight)

    def region_measure(self, region) -> F:
        total = self.base_weight * region.length()
        for position, weight in self.atoms:
            if region.contains(position):
                total += weight
        return total


@dataclass(frozen=True)
class _ProductWordModel:
    """Bernoulli or Markov measure on sequence space via word probabilities."""

    initial: Tuple[F, ...]
    rows: Optional[Tuple[Tuple[F, ...], ...]]  # None for Bernoulli

    def word_measure(self, word) -> F:
        if not word:
            return F(1)
        p = self.initial[word[0]]
        if self.rows is None:
            for c in word[1:]:
                p *= self.initial[c]
        else:
            for prev, cur in zip(word, word[1:]):
                p *= self.rows[prev][cur]
        return p

    def region_measure(self, region: CylinderRegion) -> F:
        return sum((self.word_measure(w) for w in region.words), F(0))


def stationary_distribution(rows: Sequence[Sequence[F]]) -> Tuple[F, ...]:
    """Exact stationary row vector of a rational stochastic matrix."""
    k = len(rows)
    # solve pi (P - I) = 0 with sum(pi) = 1 by Gaussian elimination
    cols = [[F(rows[i][j]) - (1 if i == j else 0) for i in range(k)] for j in range(k)]
    cols[-1] = [F(1)] * k  # replace one equation by the normalization
    rhs = [F(0)] * (k - 1) + [F(1)]
    n = k
    mat = [cols[j] + [rhs[j]] for j in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if mat[r][col] != 0), None)
        if pivot is None:
            raise ValueError("transition matrix has no unique stationary law")
        mat[col], mat[pivot] = mat[pivot], mat[col]
        inv = 1 / mat[col][col]
        mat[col] = [v * inv for v in mat[col]]
        for r in range(n):
            if r != col and mat[r][col] != 0:
                factor = mat[r][col]
                mat[r] = [v - factor * w for v, w in zip(mat[r], mat[col])]
    return tuple(mat[i][n] for i in range(k))


@dataclass(frozen=True)
class _ConditionedModel:
    base: object
    window: object  # Region of the conditioning set's inner open set
    mass: F

    def region_measure(self, region) -> F:
        return self.base.region_measure(region.intersect(self.window)) / self.mass


@dataclass(frozen=True)
class ComputableMeasure:
    """A probability measure with an exact oracle on ideal-ball unions.

    `lower(balls, budget)` floors the exact union measure to the grid
    2**-budget: a monotone (in budget and in the union) lower bound
    converging to the truth, matching lower-semicomputation semantics.
    """

    space: Space
    name: str
    model: object

    def region(self, balls: Sequence[IdealBall]):
        return region_of_balls(self.space, balls)

    def exact_union(self, balls: Sequence[IdealBall]) -> F:
        return self.model.region_measure(self.region(balls))

    def lower(self, balls: Sequence[IdealBall], budget: int) -> F:
        return dyadic_floor(self.exact_union(balls), budget)

    # -- zoo constructors --------------------------------------------------

    @classmethod
    def lebesgue(cls, space: Space) -> "ComputableMeasure":
        if space.kind not in (Kind.UNIT_INTERVAL, Kind.CIRCLE):
            raise SpaceMismatch("lebesgue lives on the interval or circle")
        return cls(space, "lebesgue", _LebesgueModel())

    @classmethod
    def lebesgue_with_atoms(cls, space: Space, base_weight, atoms) -> "ComputableMeasure":
        atoms = tuple((F(q), F(w)) for q, w in atoms)
        base_weight = F(base_weight)
        if base_weight + sum(w for _, w in atoms) != 1:
            raise ValueError("weights must sum to 1")
        return cls(space, "lebesgue+atoms", _MixtureModel(base_weight, atoms))

    @classmethod
    def bernoulli(cls, space: Space, probs) -> "ComputableMeasure":
        probs = tuple(F(p) for p in probs)
        if space.kind is not Kind.CANTOR or len(probs) != space.alphabet:
            raise SpaceMismatch("bernoulli needs a matching sequence space")
        if sum(probs) != 1:
            raise ValueError("probabilities must sum to 1")
        return cls(space, "bernoulli", _ProductWordModel(probs, None))

    @classmethod
    def markov(cls, space: Space, rows, initial=None) -> "ComputableMeasure":
        rows = tuple(tuple(F(p) for p in row) for row in rows)
        if space.kind is not Kind.CANTOR or len(rows) != space.alphabet:
            raise SpaceMismatch("markov needs a matching sequence space")
        for row in rows:
            if sum(row) != 1:
                raise ValueError("each transition row must sum to 1")
        initial = stationary_distribution(rows) if initial is None else tuple(F(p) for p in initial)
        return cls(space, "markov", _ProductWordModel(initial, rows))

    def word_measure(self, word) -> F:
        """Exact cylinder measure (sequence-space zoo measures only)."""
        if not isinstance(self.model, _ProductWordModel):
            raise SpaceMismatch(f"{self.name} has no cylinder oracle")
        return self.model.word_measure(tuple(word))


def measure_lower(mu: ComputableMeasure, balls: Sequence[IdealBall], precision: int) -> F:
    """Lower bound within 2**-precision of the exact union measure."""
    return mu.lower(balls, precision + 1)


def exhaustion_lower(mu: ComputableMeasure, balls: Sequence[IdealBall], budget: int) -> F:
    """Independent lower-bound route: certify grid cells inside the union.

    Uses only certified inclusions of closed dyadic cells (or cylinders)
    in the open union, so it converges from below without consulting the
    merged-geometry length computation.
    """
    region = mu.region(balls)
    model = mu.model
    kind = mu.space.kind
    if kind in (Kind.UNIT_INTERVAL, Kind.CIRCLE):
        cells = 1 << budget
        step = F(1, cells)
        covered = F(0)
        full = kind is Kind.CIRCLE and region.full
        for j in range(cells):
            lo, hi = j * step, (j + 1) * step
            inside = full or any(a < lo and hi < b for a, b in region.pieces)
            if not inside and kind is Kind.CIRCLE:
                inside = any(a < lo + 1 and hi + 1 < b for a, b in region.pieces)
            if inside:
                covered += step
        if isinstance(model, _MixtureModel):
            total = model.base_weight * covered
            for position, weight in model.atoms:
                if region.contains(position):
                    total += weight
            return total
        return covered
    if kind is Kind.CANTOR:
        k = mu.space.alphabet
        total = F(0)
        word = [0] * budget
        for index in range(k**budget):
            value = index
            for pos in range(budget - 1, -1, -1):
                word[pos] = value % k
                value //= k
            if region.contains_prefix(tuple(word)):
                total += model.word_measure(tuple(word))
        return total
    raise SpaceMismatch(f"no exhaustion route for {mu.space}")


# ---------------------------------------------------------------------------
# Ideal measures and the Prokhorov metric
# ---------------------------------------------------------------------------

PROKHOROV_SUPPORT_CAP = 20


@dataclass(frozen=True)
class IdealMeasure:
    """Finitely supported measure with rational weights summing to one."""

    space: Space
    support: Tuple[int, ...]
    weights: Tuple[F, ...]

    def __post_init__(self):
        if len(self.support) != len(self.weights) or not self.support:
            raise ValueError("support and weights must align and be nonempty")
        if len(set(self.support)) != len(self.support):
            raise ValueError("support entries must be distinct")
        if sum(self.weights, F(0)) != 1 or any(w <= 0 for w in self.weights):
            raise ValueError("weights must be positive and sum to 1")

    @classmethod
    def from_points(cls, space: Space, pairs) -> "IdealMeasure":
        support, weights = zip(*((space.encode_dyadic(F(q)), F(w)) for q, w in pairs))
        return cls(space, tuple(support), tuple(weights))


def prokhorov(mu: IdealMeasure, nu: IdealMeasure, precision: int = 20) -> Interval:
    """Exact Prokhorov distance between ideal measures (degenerate interval).

    Sweeps every support subset A, and for each finds the least eps with
    mu(A) <= nu(A^eps) + eps; the distance is the largest such threshold.
    """
    if mu.space != nu.space:
        raise SpaceMismatch(f"{mu.space} vs {nu.space}")
    if len(mu.support) + len(nu.support) > PROKHOROV_SUPPORT_CAP:
        raise SupportTooLarge(
            f"combined support {len(mu.support) + len(nu.support)} exceeds {PROKHOROV_SUPPORT_CAP}"
        )
    space = mu.space
    mu_desc = [space.decode(i) for i in mu.support]
    nu_desc = [space.decode(i) for i in nu.support]
    dist_rows = [[space.dist_desc(t, s) for s in mu_desc] for t in nu_desc]

    def one_sided(a_weights, b_weights, rows):
        worst = F(0)
        m = len(a_weights)
        for mask in range(1, 1 << m):
            members = [i for i in range(m) if mask >> i & 1]
            mass = sum((a_weights[i] for i in members), F(0))
            reach = [min(rows[j][i] for i in members) for j in range(len(b_weights))]
            order = sorted(set(reach) | {F(0)})
            threshold = None
            for idx, delta in enumerate(order):
                covered = sum(
                    (b_weights[j] for j in range(len(b_weights)) if reach[j] <= delta), F(0)
                )
                candidate = max(delta, mass - covered)
                upper = order[idx + 1] if idx + 1 < len(order) else None
                if upper is None or candidate <= upper:
                    threshold = candidate if threshold is None else min(threshold, candidate)
            worst = max(worst, threshold)
        return worst

    forward = one_sided(mu.weights, nu.weights, dist_rows)
    transposed = [[dist_rows[j][i] for j in range(len(nu_desc))] for i in range(len(mu_desc))]
    backward = one_sided(nu.weights, mu.weights, transposed)
    value = max(forward, backward)
    del precision  # the sweep is exact; any requested width is satisfied
    return Interval.point(value)


def total_variation(mu: IdealMeasure, nu: IdealMeasure) -> F:
    points = {}
    for idx, w in zip(mu.support, mu.weights):
        key = mu.space.decode(idx)
        points[key] = points.get(key, F(0)) + w
    for idx, w in zip(nu.support, nu.weights):
        key = nu.space.decode(idx)
        points[key] = points.get(key, F(0)) - w
    return sum((abs(v) for v in points.values()), F(0)) / 2


# ---------------------------------------------------------------------------
# Almost decidable sets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AlmostDecidableSet:
    """A set sandwiched between an inner and outer-complement open set.

    For the zoo both sides are finite ball unions, so the measure gap
    certifies at any budget; `gap_budget` records the schedule to use.
    """

    inside: EnumeratedOpenSet
    outside: EnumeratedOpenSet
    gap_budget: Callable[[int], int] = field(default=lambda k: k + 2)

    @property
    def space(self) -> Space:
        return self.inside.space

    @classmethod
    def from_balls(cls, space: Space, inner_balls, outer_balls) -> "AlmostDecidableSet":
        return cls(
            EnumeratedOpenSet.from_balls(space, inner_balls),
            EnumeratedOpenSet.from_balls(space, outer_balls),
        )

    @classmethod
    def from_interval(cls, space: Space, a, b) -> "AlmostDecidableSet":
        """The set [a, b): inner open version, outer open complement."""
        a, b = F(a), F(b)
        if space.kind is Kind.CIRCLE:
            inner = interval_as_balls(space, a, b)
            outer = interval_as_balls(space, b, a + 1)
        else:
            if not 0 <= a < b <= 1:
                raise ValueError("interval sets need 0 <= a < b <= 1")
            inner = (
                (IdealBall(space, space.encode_dyadic(F(0)), b),)
                if a == 0
                else interval_as_balls(space, a, b)
            )
            outer = ()
            if a > 0:
                outer += (IdealBall(space, space.encode_dyadic(F(0)), a),)
            if b < 1:
                outer += (IdealBall(space, space.encode_dyadic(F(1)), 1 - b),)
        return cls.from_balls(space, inner, outer)

    @classmethod
    def from_cylinder(cls, space: Space, word) -> "AlmostDecidableSet":
        word = tuple(word)
        k = space.alphabet
        others = []
        for length in range(1, len(word) + 1):
            prefix = word[: length - 1]
            others.extend(prefix + (c,) for c in range(k) if c != word[length - 1])
        return cls.from_balls(
            space,
            [cylinder_as_ball(space, word)],
            [cylinder_as_ball(space, w) for w in others],
        )


def measure_of_ad_set(
    mu: ComputableMeasure, ad: AlmostDecidableSet, precision: int, budget_cap: int = 64
) -> Interval:
    """Two-sided enclosure of mu(A), width <= 2**-precision."""
    if ad.space != mu.space:
        raise SpaceMismatch(f"{ad.space} vs {mu.space}")
    target = F(1, 1 << precision)
    budget = ad.gap_budget(precision)
    while True:
        low_in = mu.lower(ad.inside.enumerate(budget), budget)
        low_out = mu.lower(ad.outside.enumerate(budget), budget)
        if low_in + low_out > 1 - target:
            return Interval(low_in, 1 - low_out)
        if budget > budget_cap:
            raise InvalidWitness(
                f"gap witness failed: mu(U)+mu(V) lower bounds reach {low_in + low_out}"
            )
        budget += 4


def condition(
    mu: ComputableMeasure, ad: AlmostDecidableSet, precision: int = 24, budget_cap: int = 64
) -> ComputableMeasure:
    """The induced measure mu(. | A), exact for zoo measures.

    mu(A) equals the exact mass of the inner open set once the gap
    certifies, and conditional values are mu(W n U) / mu(A).
    """
    enclosure = measure_of_ad_set(mu, ad, precision, budget_cap)
    if enclosure.lo <= 0:
        raise ZeroMassCondition("no positive lower bound on the conditioning set")
    inner_balls = ad.inside.enumerate(ad.gap_budget(precision) + budget_cap)
    mass = mu.exact_union(inner_balls)
    window = mu.region(inner_balls)
    return ComputableMeasure(
        mu.space, f"{mu.name}|conditioned", _ConditionedModel(mu.model, window, mass)
    )


# ---------------------------------------------------------------------------
# Almost-decidable radius search (trisection on annulus mass)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RadiusStage:
    stage: int
    window: Tuple[F, F]
    complement_lower: F

    @property
    def annulus_upper(self) -> F:
        return 1 - self.complement_lower


def annulus_complement_balls(space: Space, center_desc, inner: F, outer: F):
    """The complement of closed-ball(outer) minus open-ball(inner) as balls."""
    if space.kind is Kind.UNIT_INTERVAL:
        c = center_desc
        balls = list(interval_as_balls(space, c - inner, c + inner))
        if c - outer > 0:
            balls.append(IdealBall(space, space.encode_dyadic(F(0)), c - outer))
        if c + outer < 1:
            balls.append(IdealBall(space, space.encode_dyadic(F(1)), 1 - c - outer))
        return tuple(balls)
    if space.kind is Kind.CIRCLE:
        c = center_desc
        balls = list(interval_as_balls(space, c - inner, c + inner))
        if outer < F(1, 2):
            balls.extend(interval_as_balls(space, c + outer, c + 1 - outer))
        return tuple(balls)
    if space.kind is Kind.CANTOR:
        k = space.alphabet
        # closed ball of radius `outer`: agreement wherever 2**-i > outer
        closed_len = 0
        while F(1, 1 << closed_len) > outer:
            closed_len += 1
        open_len = 0
        while F(1, 1 << open_len) >= inner:
            open_len += 1
        word = tuple(center_desc)
        word = word + (0,) * max(0, max(closed_len, open_len) - len(word))
        balls = [cylinder_as_ball(space, word[:open_len])]
        for length in range(1, closed_len + 1):
            prefix = word[: length - 1]
            balls.extend(
                cylinder_as_ball(space, prefix + (c,)) for c in range(k) if c != word[length - 1]
            )
        return tuple(balls)
    raise SpaceMismatch(f"no annulus geometry for {space}")


def almost_decidable_radius(
    mu: ComputableMeasure,
    center: int,
    window: Tuple[F, F],
    depth: int,
    budget_cap: int = 48,
):
    """Trisection search for a continuity radius inside `window`.

    Returns (radius, certificate): the midpoint of the deepest interval
    plus per-stage annulus-mass certificates mu(annulus) < 2**-(m-1).
    """
    lo, hi = F(window[0]), F(window[1])
    if not 0 < lo < hi:
        raise ValueError("window must satisfy 0 < lo < hi")
    center_desc = mu.space.decode(center)
    certificate = [RadiusStage(0, (lo, hi), F(0))]
    for stage in range(depth):
        third = (hi - lo) / 3
        threshold = F(1, 1 << stage)
        candidates = ((lo, lo + third), (hi - third, hi))
        chosen = None
        for budget in range(2, budget_cap):
            for cand_lo, cand_hi in candidates:  # left first: deterministic
                comp = annulus_complement_balls(mu.space, center_desc, cand_lo, cand_hi)
                bound = mu.lower(comp, budget)
                if bound > 1 - threshold:
                    chosen = (cand_lo, cand_hi, bound)
                    break
            if chosen:
                break
        if not chosen:
            raise RadiusStall(stage + 1, tuple(certificate))
        lo, hi, bound = chosen
        certificate.append(RadiusStage(stage + 1, (lo, hi), bound))
    return (lo + hi) / 2, tuple(certificate)
