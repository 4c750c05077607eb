"""Probability measures with exact nonnegative rational weights.

Weights are dense Fraction sequences (spaces stay small by design), so every
mass evaluation, conditioning, and triviality verdict is a strict equality in
exact arithmetic; no tolerances appear anywhere in the finite core.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import lcm
from typing import Iterable, Sequence

from .errors import InvariantViolation, NullConditioningError
from .spaces import Event, FinitePartition, FiniteSpace

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class RationalMeasure:
    """A probability measure on a finite space: one exact weight per point."""

    space: FiniteSpace
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        weights = tuple(Fraction(w) for w in self.weights)
        object.__setattr__(self, "weights", weights)
        if len(weights) != self.space.n:
            raise InvariantViolation(
                f"{len(weights)} weights for a space of {self.space.n} points"
            )
        if any(w < 0 for w in weights):
            raise InvariantViolation("weights must be nonnegative")
        total = sum(weights, ZERO)
        if total != ONE:
            raise InvariantViolation(f"weights must sum to exactly 1, got {total}")

    @classmethod
    def from_weights(cls, space: FiniteSpace, weights: Iterable) -> RationalMeasure:
        return cls(space, tuple(Fraction(w) for w in weights))

    @classmethod
    def uniform(cls, space: FiniteSpace) -> RationalMeasure:
        return cls(space, tuple(Fraction(1, space.n) for _ in space.points))

    @classmethod
    def dirac(cls, space: FiniteSpace, x: int) -> RationalMeasure:
        return cls(space, tuple(ONE if y == x else ZERO for y in space.points))

    def __call__(self, x: int) -> Fraction:
        return self.weights[x]

    @cached_property
    def int_form(self) -> tuple[int, tuple[int, ...]]:
        """(Q, numerators): weights rewritten over one common denominator Q.

        Feeds the integer fast paths; the numerators sum to Q exactly.
        """
        q = lcm(*(w.denominator for w in self.weights))
        return q, tuple(w.numerator * (q // w.denominator) for w in self.weights)

    @cached_property
    def support(self) -> tuple[int, ...]:
        return tuple(x for x in self.space.points if self.weights[x] > 0)


def mass(mu: RationalMeasure, e: Event) -> Fraction:
    """μ(e): the exact weight the measure puts on the event."""
    if mu.space != e.space:
        raise InvariantViolation("measure and event live on different spaces")
    return sum((mu.weights[x] for x in e.members), ZERO)


def condition(mu: RationalMeasure, e: Event) -> RationalMeasure:
    """The conditional measure μ(· ∩ e)/μ(e), renormalized exactly.

    Raises NullConditioningError when the event has measure zero.
    """
    total = mass(mu, e)
    if total == 0:
        raise NullConditioningError("cannot condition on an event of measure zero")
    return RationalMeasure(
        mu.space,
        tuple(mu.weights[x] / total if x in e.members else ZERO for x in mu.space.points),
    )


def is_trivial_on(mu: RationalMeasure, part: FinitePartition) -> bool:
    """True iff every union-of-blocks event has μ-mass 0 or 1.

    Computed by the equivalent finite criterion: exactly one block carries
    μ-mass 1. (The exhaustive union enumeration is kept as a test oracle.)
    """
    if mu.space != part.space:
        raise InvariantViolation("measure and partition live on different spaces")
    full_blocks = 0
    for block in part.blocks:
        block_mass = ZERO
        for x in block:
            w = mu.weights[x]
            if w:
                block_mass += w
        if block_mass == ONE:
            full_blocks += 1
        elif block_mass != ZERO:
            return False
    return full_blocks == 1


def weights_over_common_denominator(
    measures: Sequence[RationalMeasure],
) -> tuple[int, list[list[int]]]:
    """Rewrite several measures over one shared denominator Q.

    Returns (Q, rows) with rows[i][x] an integer numerator and each row
    summing to Q. Shared by the identity and double-sum fast paths.
    """
    q = lcm(*(m.int_form[0] for m in measures))
    rows = []
    for m in measures:
        qm, nums = m.int_form
        scale = q // qm
        rows.append([v * scale for v in nums])
    return q, rows
