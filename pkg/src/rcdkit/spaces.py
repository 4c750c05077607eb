"""Finite measurable spaces, events, and sub-σ-algebras as partitions.

A finite space is the index set {0, ..., n-1} with the full power set as its
σ-algebra. A sub-σ-algebra is stored as the partition whose blocks are its
atoms; on a finite space that correspondence is a bijection, so partitions
are the canonical representation and two sub-σ-algebras are equal exactly
when their partitions are structurally equal. Blocks are kept sorted by
smallest element to make that structural equality well defined.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

from .errors import (
    CoverError,
    EmptyBlockError,
    InvariantViolation,
    OverlapError,
    PartitionError,
)


@dataclass(frozen=True)
class FiniteSpace:
    """The measurable space on points 0..n-1 with the power-set σ-algebra."""

    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise InvariantViolation(f"space needs at least one point, got n={self.n}")

    @property
    def points(self) -> range:
        return range(self.n)

    def full_event(self) -> Event:
        return Event(self, self.points)

    def empty_event(self) -> Event:
        return Event(self, ())


@dataclass(frozen=True)
class Event:
    """A measurable subset of a finite space, stored as a frozen index set."""

    space: FiniteSpace
    members: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        members = frozenset(self.members)
        object.__setattr__(self, "members", members)
        for x in members:
            if not isinstance(x, int) or not 0 <= x < self.space.n:
                raise InvariantViolation(f"point {x!r} outside space of size {self.space.n}")

    def __contains__(self, x: int) -> bool:
        return x in self.members

    def __len__(self) -> int:
        return len(self.members)

    def __and__(self, other: Event) -> Event:
        self._check_same_space(other)
        return Event(self.space, self.members & other.members)

    def __or__(self, other: Event) -> Event:
        self._check_same_space(other)
        return Event(self.space, self.members | other.members)

    def complement(self) -> Event:
        return Event(self.space, frozenset(self.space.points) - self.members)

    def is_subset(self, other: Event) -> bool:
        self._check_same_space(other)
        return self.members <= other.members

    def _check_same_space(self, other: Event):
        if self.space != other.space:
            raise InvariantViolation("events live on different spaces")


def _canonical_blocks(blocks: Iterable[Iterable[int]]) -> tuple[frozenset[int], ...]:
    frozen = [frozenset(b) for b in blocks]
    return tuple(sorted(frozen, key=min))


@dataclass(frozen=True)
class FinitePartition:
    """A partition of a finite space; its blocks are the atoms of a sub-σ-algebra.

    Construct through make_partition / generated_partition, which validate and
    canonicalize. Direct construction expects already-canonical blocks.
    """

    space: FiniteSpace
    blocks: tuple[frozenset[int], ...]

    @cached_property
    def block_of_point(self) -> tuple[int, ...]:
        """Index of the block containing each point."""
        idx = [-1] * self.space.n
        for b, block in enumerate(self.blocks):
            for x in block:
                idx[x] = b
        return tuple(idx)

    @property
    def n_blocks(self) -> int:
        return len(self.blocks)

    def block_event(self, b: int) -> Event:
        return Event(self.space, self.blocks[b])


def make_partition(space: FiniteSpace, blocks: Iterable[Iterable[int]]) -> FinitePartition:
    """Validate a block family and return the canonicalized partition.

    Raises EmptyBlockError, OverlapError, or CoverError when the family is not
    a partition of the full point set.
    """
    frozen = [frozenset(b) for b in blocks]
    if any(not b for b in frozen):
        raise EmptyBlockError("partition blocks must be nonempty")
    canon = _canonical_blocks(frozen)
    seen: set[int] = set()
    total = 0
    for block in canon:
        for x in block:
            if not isinstance(x, int) or not 0 <= x < space.n:
                raise PartitionError(f"point {x!r} outside space of size {space.n}")
        if block & seen:
            raise OverlapError(f"points {sorted(block & seen)} appear in more than one block")
        seen |= block
        total += len(block)
    if total != space.n:
        missing = sorted(set(space.points) - seen)
        raise CoverError(f"blocks do not cover the space, missing {missing}")
    return FinitePartition(space, canon)


def generated_partition(space: FiniteSpace, events: Iterable[Event]) -> FinitePartition:
    """Partition into the atoms of the smallest σ-algebra containing the events.

    Each point's atom is determined by its membership pattern across the
    events, so the blocks are the nonempty cells of the common refinement.
    """
    events = list(events)
    for e in events:
        if e.space != space:
            raise InvariantViolation("generating events live on a different space")
    cells: dict[tuple[bool, ...], set[int]] = {}
    for x in space.points:
        signature = tuple(x in e for e in events)
        cells.setdefault(signature, set()).add(x)
    return FinitePartition(space, _canonical_blocks(cells.values()))


def sigma_contains(part: FinitePartition, e: Event) -> bool:
    """True iff the event is a union of blocks, i.e. measurable for the partition."""
    if e.space != part.space:
        raise InvariantViolation("event lives on a different space")
    for block in part.blocks:
        hit = block & e.members
        if hit and hit != block:
            return False
    return True


def atom_of(part: FinitePartition, x: int) -> Event:
    """The block containing point x, as an event."""
    if not 0 <= x < part.space.n:
        raise InvariantViolation(f"point {x} outside space of size {part.space.n}")
    return part.block_event(part.block_of_point[x])


def singleton_partition(space: FiniteSpace) -> FinitePartition:
    return FinitePartition(space, tuple(frozenset((x,)) for x in space.points))


def one_block_partition(space: FiniteSpace) -> FinitePartition:
    return FinitePartition(space, (frozenset(space.points),))
