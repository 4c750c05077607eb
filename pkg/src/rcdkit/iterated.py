"""Iterated conditioning and the triviality equivalence theorem, finitely.

An iterated kernel assigns a measure to every ordered pair (x, y); it is an
iterated rcd of ρ given g when, at every ρ-positive x, the slice y ↦ grid(x,y)
is an rcd of the conditioned measure at x. Two exact evaluators realize the
diagonal identity

    ρ{x : (x,x) ∈ E} = Σ_x ρ({x}) Σ_y 1[(x,y) ∈ E] · kernel(x)({y})

for product events E measurable in (blocks × points), and theorem7_check
wires everything into the two-directional equivalence between conditional
triviality and the existence of a block-square-measurable iterated rcd. On a
finite space both directions are theorems, so any failed sub-verdict raises
InconsistentVerdict: it can only mean a bug in this package.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from . import _backend
from .engine import Kernel, check_rcd, compute_rcd, conditional_triviality
from .errors import InconsistentVerdict, InvariantViolation
from .measures import RationalMeasure, ZERO, weights_over_common_denominator
from .rationals import format_fraction
from .spaces import Event, FinitePartition, FiniteSpace


@dataclass(frozen=True)
class IteratedKernel:
    """An n×n grid of probability measures; entry (x, y) conditions twice."""

    space: FiniteSpace
    grid: tuple[tuple[RationalMeasure, ...], ...]

    def __post_init__(self):
        n = self.space.n
        if len(self.grid) != n or any(len(row) != n for row in self.grid):
            raise InvariantViolation("grid must be n×n")
        for row in self.grid:
            for entry in row:
                if entry.space != self.space:
                    raise InvariantViolation("grid entry lives on a different space")

    def entry(self, x: int, y: int) -> RationalMeasure:
        return self.grid[x][y]


@dataclass(frozen=True)
class ProductEvent:
    """A subset of the product space X × X, stored as a frozen set of pairs."""

    space: FiniteSpace
    members: frozenset[tuple[int, int]]

    def __post_init__(self):
        members = frozenset((int(x), int(y)) for x, y in self.members)
        object.__setattr__(self, "members", members)
        n = self.space.n
        for x, y in members:
            if not (0 <= x < n and 0 <= y < n):
                raise InvariantViolation(f"pair ({x},{y}) outside space of size {n}")

    def __contains__(self, pair: tuple[int, int]) -> bool:
        return pair in self.members

    @classmethod
    def diagonal(cls, space: FiniteSpace) -> ProductEvent:
        return cls(space, frozenset((x, x) for x in space.points))

    @classmethod
    def full(cls, space: FiniteSpace) -> ProductEvent:
        return cls(space, frozenset((x, y) for x in space.points for y in space.points))

    @classmethod
    def rectangle(cls, g_event: Event, a_event: Event) -> ProductEvent:
        if g_event.space != a_event.space:
            raise InvariantViolation("rectangle sides live on different spaces")
        return cls(
            g_event.space,
            frozenset((x, y) for x in g_event.members for y in a_event.members),
        )

    @classmethod
    def union(cls, space: FiniteSpace, events: Iterable[ProductEvent]) -> ProductEvent:
        members: frozenset[tuple[int, int]] = frozenset()
        for e in events:
            members |= e.members
        return cls(space, members)


def in_product_sigma(
    e: ProductEvent, g_left: FinitePartition, g_right: FinitePartition
) -> bool:
    """True iff the indicator of e is constant on every block × block rectangle.

    With g_right the singleton partition this decides membership in the
    product of the block σ-algebra with the full power set.
    """
    if not (e.space == g_left.space == g_right.space):
        raise InvariantViolation("event and partitions must share a space")
    for left in g_left.blocks:
        for right in g_right.blocks:
            it = ((x, y) for x in left for y in right)
            first = next(it) in e.members
            if any((pair in e.members) != first for pair in it):
                return False
    return True


def lemma3_lhs(e: ProductEvent, rho: RationalMeasure) -> Fraction:
    """Mass that ρ puts on the diagonal slice {x : (x,x) ∈ e}."""
    if e.space != rho.space:
        raise InvariantViolation("event and measure live on different spaces")
    return sum((rho.weights[x] for x in rho.space.points if (x, x) in e.members), ZERO)


def lemma3_rhs(e: ProductEvent, k: Kernel, rho: RationalMeasure) -> Fraction:
    """Exact double integral Σ_x ρ({x}) Σ_y 1[(x,y) ∈ e] · k.row(x)({y})."""
    if not (e.space == k.space == rho.space):
        raise InvariantViolation("event, kernel and measure must share a space")
    n = rho.space.n
    q, all_rows = weights_over_common_denominator([rho, *k.rows])
    weights = all_rows[0]
    rows = all_rows[1:]
    mask = bytearray(n * n)
    for x, y in e.members:
        mask[x * n + y] = 1
    num = _backend.product_rhs_numerator(q, weights, rows, mask)
    return Fraction(num, q * q)


def build_iterated(rho: RationalMeasure, g: FinitePartition) -> IteratedKernel:
    """Condition twice: grid row x is the atomwise conditioning of row x of
    the first conditioning. Rows are shared across each block."""
    base = compute_rcd(rho, g)
    per_block: dict[int, tuple[RationalMeasure, ...]] = {}
    grid = []
    for x in rho.space.points:
        b = g.block_of_point[x]
        if b not in per_block:
            per_block[b] = compute_rcd(base.rows[x], g).rows
        grid.append(per_block[b])
    return IteratedKernel(rho.space, tuple(grid))


def check_iterated(k2: IteratedKernel, rho: RationalMeasure, g: FinitePartition) -> bool:
    """True iff every ρ-positive slice y ↦ grid(x, y) is an rcd of the
    conditioned measure at x given g. Grid values at ρ-null points never
    influence the verdict."""
    if not (k2.space == rho.space == g.space):
        raise InvariantViolation("grid, measure and partition must share a space")
    base = compute_rcd(rho, g)
    cache: dict[tuple[int, int], bool] = {}
    for x in rho.support:
        key = (id(k2.grid[x]), id(base.rows[x]))
        verdict = cache.get(key)
        if verdict is None:
            report = check_rcd(Kernel(k2.space, k2.grid[x]), base.rows[x], g)
            verdict = report.measurable and report.identity_holds
            cache[key] = verdict
        if not verdict:
            return False
    return True


def diagonal_agreement_set(k2: IteratedKernel) -> ProductEvent:
    """Pairs (x, y) whose entry equals the diagonal entry (x, x) exactly.

    Always contains the diagonal itself.
    """
    members = set()
    for x in k2.space.points:
        diag = k2.grid[x][x]
        for y in k2.space.points:
            entry = k2.grid[x][y]
            if entry is diag or entry.weights == diag.weights:
                members.add((x, y))
    return ProductEvent(k2.space, frozenset(members))


def is_product_measurable(
    k2: IteratedKernel, g_left: FinitePartition, g_right: FinitePartition
) -> bool:
    """True iff the grid is exactly constant on every block × block rectangle."""
    if not (k2.space == g_left.space == g_right.space):
        raise InvariantViolation("grid and partitions must share a space")
    for left in g_left.blocks:
        for right in g_right.blocks:
            it = ((x, y) for x in left for y in right)
            x0, y0 = next(it)
            first = k2.grid[x0][y0]
            for x, y in it:
                entry = k2.grid[x][y]
                if entry is not first and entry.weights != first.weights:
                    return False
    return True


@dataclass(frozen=True)
class Theorem7Forward:
    """Forward direction: conditional triviality yields a measurable iterated rcd."""

    applicable: bool
    iterated_ok: Optional[bool] = None
    measurable: Optional[bool] = None

    def to_json_dict(self) -> dict:
        return {
            "applicable": self.applicable,
            "iterated_ok": self.iterated_ok,
            "measurable": self.measurable,
        }


@dataclass(frozen=True)
class Theorem7Backward:
    """Backward direction: a measurable iterated rcd forces conditional triviality."""

    applicable: bool
    reason: Optional[str] = None
    candidate_is_iterated: Optional[bool] = None
    candidate_measurable: Optional[bool] = None
    diagonal_mass: Optional[Fraction] = None
    conditionally_trivial: Optional[bool] = None

    def to_json_dict(self) -> dict:
        return {
            "applicable": self.applicable,
            "reason": self.reason,
            "candidate_is_iterated": self.candidate_is_iterated,
            "candidate_measurable": self.candidate_measurable,
            "diagonal_mass": None
            if self.diagonal_mass is None
            else format_fraction(self.diagonal_mass),
            "conditionally_trivial": self.conditionally_trivial,
        }


@dataclass(frozen=True)
class Theorem7Report:
    """Joint verdict of both directions of the triviality equivalence."""

    conditionally_trivial: bool
    forward: Theorem7Forward
    backward: Theorem7Backward

    @property
    def diagonal_mass(self) -> Optional[Fraction]:
        return self.backward.diagonal_mass

    def to_json_dict(self) -> dict:
        return {
            "conditionally_trivial": self.conditionally_trivial,
            "forward": self.forward.to_json_dict(),
            "backward": self.backward.to_json_dict(),
            "diagonal_mass": None
            if self.diagonal_mass is None
            else format_fraction(self.diagonal_mass),
        }


def theorem7_check(
    rho: RationalMeasure,
    g: FinitePartition,
    candidate: Optional[IteratedKernel] = None,
) -> Theorem7Report:
    """Run both directions of the triviality equivalence on one instance.

    Forward: under conditional triviality, the grid (x, y) ↦ conditioned
    measure at x must be a block-square-measurable iterated rcd. Backward:
    a supplied candidate that is an iterated rcd and block-square measurable
    forces diagonal-agreement mass exactly 1 and conditional triviality.
    Both implications are proved for finite spaces, so a failing sub-verdict
    raises InconsistentVerdict (an implementation defect, never a bad input).
    """
    if rho.space != g.space:
        raise InvariantViolation("measure and partition live on different spaces")
    ct = conditional_triviality(rho, g)

    if ct:
        base = compute_rcd(rho, g)
        per_block: dict[int, tuple[RationalMeasure, ...]] = {}
        grid = []
        for x in rho.space.points:
            b = g.block_of_point[x]
            if b not in per_block:
                per_block[b] = (base.rows[x],) * rho.space.n
            grid.append(per_block[b])
        witness = IteratedKernel(rho.space, tuple(grid))
        fwd_ok = check_iterated(witness, rho, g)
        fwd_meas = is_product_measurable(witness, g, g)
        forward = Theorem7Forward(applicable=True, iterated_ok=fwd_ok, measurable=fwd_meas)
        if not (fwd_ok and fwd_meas):
            raise InconsistentVerdict(
                "conditional triviality holds but the constant-slice grid "
                f"failed (iterated_ok={fwd_ok}, measurable={fwd_meas})"
            )
    else:
        forward = Theorem7Forward(applicable=False)

    if candidate is None:
        backward = Theorem7Backward(applicable=False, reason="no candidate supplied")
    else:
        cand_ok = check_iterated(candidate, rho, g)
        cand_meas = is_product_measurable(candidate, g, g)
        if cand_ok and cand_meas:
            agreement = diagonal_agreement_set(candidate)
            diag_mass = lemma3_rhs(agreement, compute_rcd(rho, g), rho)
            backward = Theorem7Backward(
                applicable=True,
                candidate_is_iterated=True,
                candidate_measurable=True,
                diagonal_mass=diag_mass,
                conditionally_trivial=ct,
            )
            if diag_mass != 1:
                raise InconsistentVerdict(
                    f"diagonal agreement set has mass {diag_mass} != 1 under a "
                    "measurable iterated rcd"
                )
            if not ct:
                raise InconsistentVerdict(
                    "measurable iterated rcd exists but conditional triviality fails"
                )
        else:
            backward = Theorem7Backward(
                applicable=False,
                reason="candidate is not a block-square-measurable iterated rcd",
                candidate_is_iterated=cand_ok,
                candidate_measurable=cand_meas,
            )

    return Theorem7Report(conditionally_trivial=ct, forward=forward, backward=backward)
