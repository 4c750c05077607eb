"""Exception hierarchy for rcdkit.

Input-validation problems derive from InvariantViolation so callers (and the
CLI, which maps them to exit code 2) can catch one base class. Verdict-level
inconsistencies raise InconsistentVerdict: on a finite space the equivalence
theorem is proved, so a failing implication can only mean a bug here, never a
bad instance.
"""


class RcdkitError(Exception):
    """Base class for all rcdkit errors."""


class InvariantViolation(RcdkitError):
    """A constructed value violates a declared invariant."""


class PartitionError(InvariantViolation):
    """A block family does not form a partition."""


class OverlapError(PartitionError):
    """Two blocks share a point."""


class CoverError(PartitionError):
    """The blocks do not cover the full point set."""


class EmptyBlockError(PartitionError):
    """A block is empty."""


class NullConditioningError(RcdkitError):
    """Conditioning on an event of measure zero."""


class AtomlessViolation(RcdkitError):
    """A measure carries an atom where atomlessness is required."""


class InconsistentVerdict(RcdkitError):
    """A proved implication failed on a finite instance: implementation bug."""


class ParseError(RcdkitError):
    """Malformed input document (space descriptions, rationals, flags)."""
