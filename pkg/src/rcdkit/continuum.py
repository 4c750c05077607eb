"""Semi-analytic measures on [0,1] × {0,1} and the triviality counterexample.

The space is a pair of unit-interval fibers. Measures are piecewise-constant
densities (rational breakpoints and values) per fiber plus finitely many
atoms, so every mass is a finite sum of rational products and all identity
checks are strict equalities.

The conditioning σ-algebra of interest is generated by the fiber-symmetric
Borel sets B × {0,1} together with all null sets; it is represented here by
the π-system of fiber-symmetric rectangle unions modified by finite null
point sets (GEvent), which suffices both for verifying the conditioning
identity of the kernel (x,i) ↦ δ_x ⊗ m and for exhibiting the failure of
conditional triviality: the conditioned measure at (x,i) puts mass
m({0}) ∈ (0,1) on the conditioning-measurable singleton {(x,0)}.

The base measure is fixed to ρ = Lebesgue ⊗ m: the conditioning identity
forces the fiber conditional of ρ to equal the kernel's m, and Lebesgue ⊗ m
is the simplest representable measure with atomless projection satisfying
that constraint.

Every exact value is cross-checked by a midpoint-rule quadrature oracle that
evaluates indicators and densities pointwise (no interval intersection
arithmetic), with panels aligned to the integrand's breakpoints so the only
deviation is float rounding.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence, Union

from . import _backend
from .engine import conditional_triviality
from .errors import AtomlessViolation, InconsistentVerdict, InvariantViolation
from .measures import RationalMeasure, ZERO, ONE
from .rationals import format_fraction
from .spaces import FiniteSpace, make_partition

Location = tuple[Fraction, int]  # (position in [0,1], fiber index)


def _as_unit_fraction(value) -> Fraction:
    f = Fraction(value)
    if not 0 <= f <= 1:
        raise InvariantViolation(f"{f} outside the unit interval")
    return f


@dataclass(frozen=True, order=True)
class Interval:
    """An interval [lo, hi) inside [0,1] with rational endpoints.

    Intervals are right-open, except that hi == 1 closes the right end so the
    unit interval is coverable. The convention makes finite unions tile the
    space: touching pieces never share a point, so atom weights are never
    double-counted by piecewise decompositions.
    """

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", _as_unit_fraction(self.lo))
        object.__setattr__(self, "hi", _as_unit_fraction(self.hi))
        if self.lo > self.hi:
            raise InvariantViolation(f"interval endpoints out of order: {self.lo} > {self.hi}")

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    def __contains__(self, x: Fraction) -> bool:
        return self.lo <= x and (x < self.hi or x == self.hi == 1)


def merge_intervals(intervals: Iterable[Interval]) -> tuple[Interval, ...]:
    """Sort and merge overlapping or touching closed intervals."""
    items = sorted(intervals)
    merged: list[Interval] = []
    for iv in items:
        if merged and iv.lo <= merged[-1].hi:
            if iv.hi > merged[-1].hi:
                merged[-1] = Interval(merged[-1].lo, iv.hi)
        else:
            merged.append(iv)
    return tuple(merged)


def intersect_unions(
    left: Sequence[Interval], right: Sequence[Interval]
) -> tuple[Interval, ...]:
    """Intersection of two disjoint-union-of-intervals sets."""
    out = []
    for a in left:
        for b in right:
            lo = max(a.lo, b.lo)
            hi = min(a.hi, b.hi)
            if lo <= hi:
                out.append(Interval(lo, hi))
    return merge_intervals(out)


def point_in_union(x: Fraction, intervals: Sequence[Interval]) -> bool:
    return any(x in iv for iv in intervals)


@dataclass(frozen=True)
class PiecewiseDensity:
    """A nonnegative step function on [0,1]: rational breakpoints and values."""

    breaks: tuple[Fraction, ...]
    values: tuple[Fraction, ...]

    def __post_init__(self):
        breaks = tuple(_as_unit_fraction(b) for b in self.breaks)
        values = tuple(Fraction(v) for v in self.values)
        object.__setattr__(self, "breaks", breaks)
        object.__setattr__(self, "values", values)
        if len(breaks) < 2 or breaks[0] != 0 or breaks[-1] != 1:
            raise InvariantViolation("breakpoints must run from 0 to 1")
        if any(b >= c for b, c in zip(breaks, breaks[1:])):
            raise InvariantViolation("breakpoints must be strictly increasing")
        if len(values) != len(breaks) - 1:
            raise InvariantViolation("need one value per cell")
        if any(v < 0 for v in values):
            raise InvariantViolation("density values must be nonnegative")

    @classmethod
    def constant(cls, value) -> PiecewiseDensity:
        return cls((Fraction(0), Fraction(1)), (Fraction(value),))

    @property
    def total(self) -> Fraction:
        return sum(
            (v * (hi - lo) for v, lo, hi in zip(self.values, self.breaks, self.breaks[1:])),
            ZERO,
        )

    def value_at(self, x: Fraction) -> Fraction:
        """Value of the cell containing x (right-open cells, last cell closed)."""
        for lo, hi, v in zip(self.breaks, self.breaks[1:], self.values):
            if lo <= x < hi:
                return v
        return self.values[-1]

    def integral_over(self, intervals: Sequence[Interval]) -> Fraction:
        """Exact integral over a disjoint union of intervals."""
        acc = ZERO
        for iv in intervals:
            for lo, hi, v in zip(self.breaks, self.breaks[1:], self.values):
                if v == 0:
                    continue
                olo = max(lo, iv.lo)
                ohi = min(hi, iv.hi)
                if olo < ohi:
                    acc += v * (ohi - olo)
        return acc


@dataclass(frozen=True)
class HybridMeasure:
    """A probability measure on the fiber pair: two densities plus finitely many atoms."""

    dens0: PiecewiseDensity
    dens1: PiecewiseDensity
    atoms: tuple[tuple[Location, Fraction], ...] = ()

    def __post_init__(self):
        atoms = tuple(
            ((_as_unit_fraction(x), int(i)), Fraction(w)) for (x, i), w in self.atoms
        )
        object.__setattr__(self, "atoms", atoms)
        locations = [loc for loc, _ in atoms]
        if len(set(locations)) != len(locations):
            raise InvariantViolation("atom locations must be distinct")
        for (x, i), w in atoms:
            if i not in (0, 1):
                raise InvariantViolation(f"fiber index must be 0 or 1, got {i}")
            if w <= 0:
                raise InvariantViolation("atom weights must be positive")
        total = self.dens0.total + self.dens1.total + sum((w for _, w in atoms), ZERO)
        if total != ONE:
            raise InvariantViolation(f"total mass must be exactly 1, got {total}")

    @classmethod
    def lebesgue_times(cls, m0) -> HybridMeasure:
        """Uniform position with fiber law (m0, 1-m0): densities are constants."""
        m0 = Fraction(m0)
        return cls(PiecewiseDensity.constant(m0), PiecewiseDensity.constant(1 - m0))

    @classmethod
    def dirac_product(cls, x, m0) -> HybridMeasure:
        """Point mass at position x with fiber law (m0, 1-m0): pure atoms."""
        x = _as_unit_fraction(x)
        m0 = Fraction(m0)
        zero = PiecewiseDensity.constant(0)
        atoms = tuple(
            ((x, i), w) for i, w in ((0, m0), (1, 1 - m0)) if w > 0
        )
        return cls(zero, zero, atoms)

    @property
    def is_atomless(self) -> bool:
        return not self.atoms

    def density(self, i: int) -> PiecewiseDensity:
        return self.dens1 if i else self.dens0


@dataclass(frozen=True)
class RectEvent:
    """A finite union of (interval × fiber set) pieces, canonicalized per fiber.

    Construction merges the pieces into one disjoint interval union per fiber,
    which makes the stored pieces pairwise disjoint as subsets of the space.
    """

    fiber0: tuple[Interval, ...]
    fiber1: tuple[Interval, ...]

    def __post_init__(self):
        object.__setattr__(self, "fiber0", merge_intervals(self.fiber0))
        object.__setattr__(self, "fiber1", merge_intervals(self.fiber1))

    @classmethod
    def from_pieces(cls, pieces: Iterable[tuple[Interval, Iterable[int]]]) -> RectEvent:
        per_fiber: tuple[list[Interval], list[Interval]] = ([], [])
        for interval, fibers in pieces:
            for i in set(fibers):
                if i not in (0, 1):
                    raise InvariantViolation(f"fiber index must be 0 or 1, got {i}")
                per_fiber[i].append(interval)
        return cls(tuple(per_fiber[0]), tuple(per_fiber[1]))

    @classmethod
    def full(cls) -> RectEvent:
        unit = (Interval(Fraction(0), Fraction(1)),)
        return cls(unit, unit)

    @classmethod
    def empty(cls) -> RectEvent:
        return cls((), ())

    def fiber(self, i: int) -> tuple[Interval, ...]:
        return self.fiber1 if i else self.fiber0

    def __contains__(self, location: Location) -> bool:
        x, i = location
        return point_in_union(x, self.fiber(i))

    @cached_property
    def pieces(self) -> tuple[tuple[Interval, frozenset[int]], ...]:
        """Canonical pieces: cells split at every endpoint, adjacent cells with
        equal fiber sets merged. Right-open intervals make the pieces pairwise
        disjoint as subsets of the space."""
        cuts = sorted(
            {ZERO, ONE}
            | {iv.lo for iv in self.fiber0}
            | {iv.hi for iv in self.fiber0}
            | {iv.lo for iv in self.fiber1}
            | {iv.hi for iv in self.fiber1}
        )
        out: list[tuple[Interval, frozenset[int]]] = []
        for lo, hi in zip(cuts, cuts[1:]):
            mid = (lo + hi) / 2
            fibers = frozenset(
                i for i in (0, 1) if point_in_union(mid, self.fiber(i))
            )
            if not fibers:
                continue
            if out and out[-1][0].hi == lo and out[-1][1] == fibers:
                out[-1] = (Interval(out[-1][0].lo, hi), fibers)
            else:
                out.append((Interval(lo, hi), fibers))
        return tuple(out)


@dataclass(frozen=True)
class GEvent:
    """A conditioning-measurable test event: fiber-symmetric base modified by
    finite null point sets.

    The base is a union of intervals taken on both fibers; added_null points
    lie outside the base, removed_null points inside it. Under a measure with
    atomless projection the modifications are invisible to every integral.
    """

    base: tuple[Interval, ...]
    added_null: frozenset[Location] = field(default_factory=frozenset)
    removed_null: frozenset[Location] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "base", merge_intervals(self.base))
        added = frozenset((_as_unit_fraction(x), int(i)) for x, i in self.added_null)
        removed = frozenset((_as_unit_fraction(x), int(i)) for x, i in self.removed_null)
        object.__setattr__(self, "added_null", added)
        object.__setattr__(self, "removed_null", removed)
        for x, i in added:
            if i not in (0, 1):
                raise InvariantViolation(f"fiber index must be 0 or 1, got {i}")
            if point_in_union(x, self.base):
                raise InvariantViolation(f"added point ({x},{i}) already lies in the base")
        for x, i in removed:
            if i not in (0, 1):
                raise InvariantViolation(f"fiber index must be 0 or 1, got {i}")
            if not point_in_union(x, self.base):
                raise InvariantViolation(f"removed point ({x},{i}) is not in the base")

    @classmethod
    def from_base(cls, *intervals: Interval) -> GEvent:
        return cls(tuple(intervals))

    @classmethod
    def singleton(cls, x, i: int) -> GEvent:
        return cls((), added_null=frozenset(((_as_unit_fraction(x), int(i)),)))

    def __contains__(self, location: Location) -> bool:
        x, i = location
        if (x, i) in self.removed_null:
            return False
        return point_in_union(x, self.base) or (x, i) in self.added_null


@dataclass(frozen=True)
class DiracProductKernel:
    """The conditioning kernel (x, i) ↦ δ_x ⊗ m with non-degenerate fiber law m."""

    m0: Fraction

    def __post_init__(self):
        m0 = Fraction(self.m0)
        object.__setattr__(self, "m0", m0)
        if not 0 < m0 < 1:
            raise InvariantViolation(f"fiber law must be non-degenerate, got m0={m0}")

    @property
    def m1(self) -> Fraction:
        return 1 - self.m0

    def measure_at(self, x) -> HybridMeasure:
        return HybridMeasure.dirac_product(x, self.m0)

    def value(self, x: Fraction, a: RectEvent) -> Fraction:
        """(δ_x ⊗ m)(A): the fiber law restricted to the fibers A reaches at x."""
        acc = ZERO
        if point_in_union(x, a.fiber0):
            acc += self.m0
        if point_in_union(x, a.fiber1):
            acc += self.m1
        return acc


# ---------------------------------------------------------------------------
# exact evaluation


def hybrid_mass(mu: HybridMeasure, e: Union[RectEvent, GEvent]) -> Fraction:
    """Exact mass of an event: density integrals plus matching atom weights."""
    if isinstance(e, RectEvent):
        acc = mu.dens0.integral_over(e.fiber0) + mu.dens1.integral_over(e.fiber1)
        for (x, i), w in mu.atoms:
            if (x, i) in e:
                acc += w
        return acc
    if isinstance(e, GEvent):
        acc = mu.dens0.integral_over(e.base) + mu.dens1.integral_over(e.base)
        for (x, i), w in mu.atoms:
            if (x, i) in e:
                acc += w
        return acc
    raise InvariantViolation(f"unsupported event type {type(e).__name__}")


def intersection_mass(mu: HybridMeasure, a: RectEvent, g: GEvent) -> Fraction:
    """Exact mass of A ∩ G without materializing the intersection event."""
    acc = ZERO
    for i in (0, 1):
        acc += mu.density(i).integral_over(intersect_unions(a.fiber(i), g.base))
    for (x, i), w in mu.atoms:
        if (x, i) in a and (x, i) in g:
            acc += w
    return acc


def kernel_integral(
    mu: HybridMeasure, kernel: DiracProductKernel, a: RectEvent, g: GEvent
) -> Fraction:
    """Exact ∫_G (δ_x ⊗ m)(A) dμ(x, i).

    The integrand is the step function x ↦ m0·1[x ∈ A₀] + m1·1[x ∈ A₁]; the
    density part integrates it cellwise against both fiber densities over the
    base (point modifications carry no density mass), and μ-atoms inside G
    contribute their weight times the integrand.
    """
    cuts = {ZERO, ONE}
    cuts.update(mu.dens0.breaks)
    cuts.update(mu.dens1.breaks)
    for iv in g.base:
        cuts.update((iv.lo, iv.hi))
    for i in (0, 1):
        for iv in a.fiber(i):
            cuts.update((iv.lo, iv.hi))
    grid = sorted(cuts)

    acc = ZERO
    for lo, hi in zip(grid, grid[1:]):
        mid = (lo + hi) / 2
        if not point_in_union(mid, g.base):
            continue
        phi = kernel.value(mid, a)
        if phi == 0:
            continue
        dens = mu.dens0.value_at(mid) + mu.dens1.value_at(mid)
        if dens == 0:
            continue
        acc += (hi - lo) * dens * phi
    for (x, i), w in mu.atoms:
        if (x, i) in g:
            acc += w * kernel.value(x, a)
    return acc


def singleton_is_null(rho: HybridMeasure, x) -> bool:
    """Certify that position x carries no ρ-atom, so singletons at x are null.

    This is what licenses treating finite point sets at x as conditioning-
    measurable modifications. Raises AtomlessViolation if ρ has an atom there.
    """
    x = _as_unit_fraction(x)
    for (loc, _i), _w in rho.atoms:
        if loc == x:
            raise AtomlessViolation(f"measure carries an atom at position {x}")
    return True


# ---------------------------------------------------------------------------
# quadrature cross-checks (numeric oracle; see _backend / _purecore)


def _density_grid(mu: HybridMeasure):
    breaks = sorted(set(mu.dens0.breaks) | set(mu.dens1.breaks))
    vals0 = []
    vals1 = []
    for lo, hi in zip(breaks, breaks[1:]):
        mid = (lo + hi) / 2
        vals0.append(float(mu.dens0.value_at(mid)))
        vals1.append(float(mu.dens1.value_at(mid)))
    return [float(b) for b in breaks], vals0, vals1


def _interval_arrays(intervals: Sequence[Interval]):
    return [float(iv.lo) for iv in intervals], [float(iv.hi) for iv in intervals]


def _event_breakpoints(*interval_sets: Sequence[Interval]):
    pts = []
    for ivs in interval_sets:
        for iv in ivs:
            pts.append(iv.lo)
            pts.append(iv.hi)
    return pts


def quad_intersection_mass(
    mu: HybridMeasure, a: RectEvent, g: GEvent, panels: int = 10_000
) -> float:
    """Midpoint-rule estimate of mass(A ∩ G); membership evaluated pointwise."""
    dbreaks, d0, d1 = _density_grid(mu)
    g_lo, g_hi = _interval_arrays(g.base)
    a0_lo, a0_hi = _interval_arrays(a.fiber0)
    a1_lo, a1_hi = _interval_arrays(a.fiber1)
    seg, cnt = _backend.build_panel_grid(
        dbreaks + [float(p) for p in _event_breakpoints(g.base, a.fiber0, a.fiber1)],
        panels,
    )
    return _backend.quad_integral(
        seg, cnt, dbreaks, d0, d1, g_lo, g_hi, a0_lo, a0_hi, a1_lo, a1_hi, 0.0, 0.0, 0
    )


def quad_kernel_integral(
    mu: HybridMeasure,
    kernel: DiracProductKernel,
    a: RectEvent,
    g: GEvent,
    panels: int = 10_000,
) -> float:
    """Midpoint-rule estimate of ∫_G (δ_x ⊗ m)(A) dμ; pointwise membership."""
    dbreaks, d0, d1 = _density_grid(mu)
    g_lo, g_hi = _interval_arrays(g.base)
    a0_lo, a0_hi = _interval_arrays(a.fiber0)
    a1_lo, a1_hi = _interval_arrays(a.fiber1)
    seg, cnt = _backend.build_panel_grid(
        dbreaks + [float(p) for p in _event_breakpoints(g.base, a.fiber0, a.fiber1)],
        panels,
    )
    return _backend.quad_integral(
        seg,
        cnt,
        dbreaks,
        d0,
        d1,
        g_lo,
        g_hi,
        a0_lo,
        a0_hi,
        a1_lo,
        a1_hi,
        float(kernel.m0),
        float(kernel.m1),
        1,
    )


def quad_event_mass(
    mu: HybridMeasure, e: Union[RectEvent, GEvent], panels: int = 10_000
) -> float:
    """Midpoint-rule estimate of hybrid_mass (atoms excluded: they are null
    for the integral and invisible to midpoints)."""
    if isinstance(e, GEvent):
        a = RectEvent(e.base, e.base)
        g = GEvent((Interval(Fraction(0), Fraction(1)),))
        return quad_intersection_mass(mu, a, g, panels)
    full = GEvent((Interval(Fraction(0), Fraction(1)),))
    return quad_intersection_mass(mu, e, full, panels)


# ---------------------------------------------------------------------------
# identity battery, triviality failure, reports


@dataclass(frozen=True)
class IdentityPairFailure:
    g_index: int
    a_index: int
    lhs: Fraction
    rhs: Fraction

    def to_json_dict(self) -> dict:
        return {
            "g_index": self.g_index,
            "a_index": self.a_index,
            "lhs": format_fraction(self.lhs),
            "rhs": format_fraction(self.rhs),
        }


@dataclass(frozen=True)
class IdentityReport:
    """Outcome of the conditioning-identity battery for the fiber-pair kernel."""

    m0: Fraction
    pairs_checked: int
    all_exact: bool
    failures: tuple[IdentityPairFailure, ...]
    quad_panels: int
    quad_tol: float
    quad_max_error: float

    @property
    def quad_ok(self) -> bool:
        return self.quad_max_error <= self.quad_tol

    def to_json_dict(self) -> dict:
        return {
            "m0": format_fraction(self.m0),
            "identity_pairs_checked": self.pairs_checked,
            "all_exact": self.all_exact,
            "failures": [f.to_json_dict() for f in self.failures],
            "quadrature_panels": self.quad_panels,
            "quadrature_tolerance": self.quad_tol,
            "quadrature_max_error": self.quad_max_error,
            "quadrature_within_tolerance": self.quad_ok,
        }


def remark5_identity_check(
    m0,
    g_events: Sequence[GEvent],
    a_events: Sequence[RectEvent],
    *,
    quad_panels: int = 10_000,
    quad_tol: float = 1e-6,
    max_recorded_failures: int = 10,
) -> IdentityReport:
    """Verify ρ(A ∩ G) = ∫_G (δ_x ⊗ m)(A) dρ over every (G, A) pair, exactly.

    ρ = Lebesgue ⊗ m. Each exact side is additionally cross-checked by the
    midpoint quadrature oracle at the stated panel count and tolerance.
    """
    kernel = DiracProductKernel(Fraction(m0))
    rho = HybridMeasure.lebesgue_times(kernel.m0)
    failures = []
    pairs = 0
    max_err = 0.0
    for gi, g in enumerate(g_events):
        for ai, a in enumerate(a_events):
            pairs += 1
            lhs = intersection_mass(rho, a, g)
            rhs = kernel_integral(rho, kernel, a, g)
            if lhs != rhs and len(failures) < max_recorded_failures:
                failures.append(IdentityPairFailure(gi, ai, lhs, rhs))
            if quad_panels > 0:
                q_lhs = quad_intersection_mass(rho, a, g, quad_panels)
                q_rhs = quad_kernel_integral(rho, kernel, a, g, quad_panels)
                max_err = max(max_err, abs(q_lhs - float(lhs)), abs(q_rhs - float(rhs)))
    return IdentityReport(
        m0=kernel.m0,
        pairs_checked=pairs,
        all_exact=not failures,
        failures=tuple(failures),
        quad_panels=quad_panels,
        quad_tol=quad_tol,
        quad_max_error=max_err,
    )


def triviality_failure(m0, x) -> Fraction:
    """Mass the conditioned measure at x puts on the conditioning-measurable
    singleton {(x, 0)}: always m0, strictly between 0 and 1.

    This single value defeats conditional triviality on the fiber pair.
    """
    kernel = DiracProductKernel(Fraction(m0))
    nu = kernel.measure_at(x)
    value = hybrid_mass(nu, GEvent.singleton(x, 0))
    if not 0 < value < 1:
        raise InconsistentVerdict(
            f"conditioned singleton mass {value} escaped (0,1); arithmetic defect"
        )
    return value


def generate_event_battery(
    seed: int, g_count: int, a_count: int, max_denominator: int = 32
) -> tuple[list[GEvent], list[RectEvent]]:
    """Deterministic battery of conditioning events and test events.

    G-events: one or two base intervals, optionally modified by adding null
    points outside the base and removing null points inside it. A-events: one
    or two interval × fiber-set pieces. All endpoints are rationals with
    bounded denominator, so every downstream check stays exact.
    """
    rng = random.Random(seed)

    def rand_rational() -> Fraction:
        den = rng.randint(1, max_denominator)
        return Fraction(rng.randint(0, den), den)

    def rand_interval() -> Interval:
        a, b = sorted((rand_rational(), rand_rational()))
        return Interval(a, b)

    g_events: list[GEvent] = []
    while len(g_events) < g_count:
        base = merge_intervals(rand_interval() for _ in range(rng.randint(1, 2)))
        added = set()
        removed = set()
        if rng.random() < 0.5:
            for _ in range(rng.randint(1, 2)):
                for _attempt in range(8):
                    x = rand_rational()
                    if not point_in_union(x, base):
                        added.add((x, rng.randint(0, 1)))
                        break
        removable = [iv for iv in base if iv.lo in iv]
        if removable and rng.random() < 0.5:
            for _ in range(rng.randint(1, 2)):
                iv = removable[rng.randrange(len(removable))]
                t = Fraction(rng.randint(0, 15), 16)
                removed.add((iv.lo + t * (iv.hi - iv.lo), rng.randint(0, 1)))
        g_events.append(GEvent(base, frozenset(added), frozenset(removed)))

    fiber_choices = ((0,), (1,), (0, 1))
    a_events: list[RectEvent] = []
    while len(a_events) < a_count:
        pieces = [
            (rand_interval(), rng.choice(fiber_choices))
            for _ in range(rng.randint(1, 2))
        ]
        a_events.append(RectEvent.from_pieces(pieces))
    return g_events, a_events


@dataclass(frozen=True)
class ConsequenceReport:
    """Chained evidence: identity holds, triviality fails, hence no
    block-square-measurable iterated rcd can exist on the fiber pair."""

    identity: IdentityReport
    failure_value: Fraction
    conclusion: str

    def to_json_dict(self) -> dict:
        return {
            "identity": self.identity.to_json_dict(),
            "triviality_failure_value": format_fraction(self.failure_value),
            "theorem7_conclusion": self.conclusion,
        }


NO_MEASURABLE_ITERATED_RCD = "no measurable iterated rcd exists"


def theorem7_consequence_report(
    m0,
    *,
    seed: int = 0,
    g_count: int = 20,
    a_count: int = 20,
    quad_panels: int = 10_000,
    witness_x=Fraction(1, 2),
) -> ConsequenceReport:
    """Assemble the nonexistence conclusion for the fiber-pair instance.

    Premises are computed: (a) the kernel passes the conditioning identity on
    a standard battery; (b) the conditioned singleton mass m0 lies strictly
    inside (0,1), so conditional triviality fails. The conclusion then follows
    from the triviality equivalence theorem by contraposition; no search over
    candidate grids is performed (the search space is not finitely
    representable).
    """
    g_events, a_events = generate_event_battery(seed, g_count, a_count)
    identity = remark5_identity_check(m0, g_events, a_events, quad_panels=quad_panels)
    failure_value = triviality_failure(m0, witness_x)
    return ConsequenceReport(
        identity=identity,
        failure_value=failure_value,
        conclusion=NO_MEASURABLE_ITERATED_RCD,
    )


@dataclass(frozen=True)
class DiscretizationRow:
    bins: int
    conditionally_trivial: bool


def discretization_study(m0, levels: Sequence[int]) -> list[DiscretizationRow]:
    """Finite shadows of the fiber pair: N position bins × 2 fibers.

    Each level builds the finite space with the uniform-bin ⊗ fiber-law
    measure and the bin-pair partition, then asks the finite engine for
    conditional triviality. Every row reads True: the continuum failure has
    no finite counterpart.
    """
    m0 = Fraction(m0)
    rows = []
    for n_bins in levels:
        if n_bins < 1:
            raise InvariantViolation(f"level must be positive, got {n_bins}")
        space = FiniteSpace(2 * n_bins)
        weights = []
        for _k in range(n_bins):
            weights.append(m0 / n_bins)
            weights.append((1 - m0) / n_bins)
        rho = RationalMeasure(space, tuple(weights))
        partition = make_partition(space, [[2 * k, 2 * k + 1] for k in range(n_bins)])
        rows.append(DiscretizationRow(n_bins, conditional_triviality(rho, partition)))
    return rows


def discretization_csv(rows: Sequence[DiscretizationRow]) -> str:
    lines = ["N,conditionally_trivial"]
    for row in rows:
        lines.append(f"{row.bins},{str(row.conditionally_trivial).lower()}")
    return "\n".join(lines) + "\n"
