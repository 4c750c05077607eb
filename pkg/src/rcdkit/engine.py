"""Regular conditional distributions on finite spaces.

A kernel maps each point to a probability measure; it is a regular
conditional distribution (rcd) of ρ given a partition G when it is constant
on G-blocks (the finite reading of measurability into the evaluation
σ-algebra) and satisfies, for every event A and every G-measurable event G,

    ρ(A ∩ G) = Σ_{x∈G} kernel(x)({a∈A}) · ρ({x}).

Checking that identity over singleton A and single-block G suffices (both
sides are additive in A and in G); the reduction itself is validated against
an exhaustive enumeration oracle in the test suite, and the heavy scan runs
on the integer backend.

Convention for null atoms: atomwise conditioning assigns ρ itself on blocks
of ρ-mass zero. Any choice there yields a valid rcd, but this one makes the
constant-map equivalence exact rather than almost-everywhere and keeps the
universal conditioner total.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Optional

from . import _backend
from .errors import InvariantViolation
from .measures import (
    RationalMeasure,
    ZERO,
    condition,
    is_trivial_on,
    mass,
    weights_over_common_denominator,
)
from .rationals import format_fraction
from .spaces import Event, FinitePartition, FiniteSpace, atom_of


@dataclass(frozen=True)
class Kernel:
    """A point-indexed family of probability measures (row x is the measure at x)."""

    space: FiniteSpace
    rows: tuple[RationalMeasure, ...]

    def __post_init__(self):
        if len(self.rows) != self.space.n:
            raise InvariantViolation(f"{len(self.rows)} rows for {self.space.n} points")
        for row in self.rows:
            if row.space != self.space:
                raise InvariantViolation("kernel row lives on a different space")

    def row(self, x: int) -> RationalMeasure:
        return self.rows[x]

    @classmethod
    def constant(cls, mu: RationalMeasure) -> Kernel:
        """The kernel sending every point to the same measure."""
        return cls(mu.space, (mu,) * mu.space.n)

    @cached_property
    def int_form(self):
        """(q, weight matrix): all rows over one common denominator q."""
        q, rows = weights_over_common_denominator(self.rows)
        return q, rows


@dataclass(frozen=True)
class IdentityWitness:
    """A failing pair of the conditioning identity, with both exact sides."""

    a_event: Event
    g_event: Event
    lhs: Fraction
    rhs: Fraction

    def to_json_dict(self) -> dict:
        return {
            "A": sorted(self.a_event.members),
            "G": sorted(self.g_event.members),
            "lhs": format_fraction(self.lhs),
            "rhs": format_fraction(self.rhs),
        }


@dataclass(frozen=True)
class RcdReport:
    """Verdict of an rcd check: measurability, the identity, and a witness on failure."""

    measurable: bool
    identity_holds: bool
    failing_witness: Optional[IdentityWitness] = None

    def __post_init__(self):
        if not self.identity_holds:
            if self.failing_witness is None:
                raise InvariantViolation("failed identity requires a witness")
            if self.failing_witness.lhs == self.failing_witness.rhs:
                raise InvariantViolation("witness sides must differ")

    @property
    def is_rcd(self) -> bool:
        return self.measurable and self.identity_holds

    def to_json_dict(self) -> dict:
        return {
            "measurable": self.measurable,
            "identity_holds": self.identity_holds,
            "witness": None if self.failing_witness is None else self.failing_witness.to_json_dict(),
        }


def is_g_measurable(k: Kernel, g: FinitePartition) -> bool:
    """True iff the kernel is exactly constant on every block of the partition."""
    if k.space != g.space:
        raise InvariantViolation("kernel and partition live on different spaces")
    for block in g.blocks:
        it = iter(block)
        first = k.rows[next(it)].weights
        if any(k.rows[x].weights != first for x in it):
            return False
    return True


def compute_rcd(rho: RationalMeasure, g: FinitePartition) -> Kernel:
    """Atomwise conditioning: row x is ρ conditioned on the block containing x.

    Blocks of ρ-mass zero fall back to ρ itself (see module docstring). The
    result is always measurable for g and satisfies the conditioning identity.
    """
    if rho.space != g.space:
        raise InvariantViolation("measure and partition live on different spaces")
    per_block = []
    for b in range(g.n_blocks):
        ev = g.block_event(b)
        per_block.append(condition(rho, ev) if mass(rho, ev) > 0 else rho)
    rows = tuple(per_block[g.block_of_point[x]] for x in rho.space.points)
    return Kernel(rho.space, rows)


def check_rcd(k: Kernel, rho: RationalMeasure, g: FinitePartition) -> RcdReport:
    """Check a candidate kernel against ρ and g; exact verdict with witness.

    The identity is verified over all singletons A = {a} and all single blocks
    G; additivity extends the verdict to arbitrary A and unions of blocks.
    """
    if not (k.space == rho.space == g.space):
        raise InvariantViolation("kernel, measure and partition must share a space")
    measurable = is_g_measurable(k, g)

    q, all_rows = weights_over_common_denominator([rho, *k.rows])
    weights = all_rows[0]
    rows = all_rows[1:]
    code = _backend.identity_first_failure(q, weights, rows, g.block_of_point, g.blocks)
    if code < 0:
        return RcdReport(measurable=measurable, identity_holds=True)

    n = rho.space.n
    b, a = divmod(code, n)
    a_event = Event(rho.space, (a,))
    g_event = g.block_event(b)
    lhs = mass(rho, a_event & g_event)
    rhs = sum((k.rows[x].weights[a] * rho.weights[x] for x in g_event.members), ZERO)
    witness = IdentityWitness(a_event=a_event, g_event=g_event, lhs=lhs, rhs=rhs)
    return RcdReport(measurable=measurable, identity_holds=False, failing_witness=witness)


def essentially_equal(k1: Kernel, k2: Kernel, rho: RationalMeasure) -> bool:
    """True iff the kernels agree exactly at every point of positive ρ-mass."""
    if not (k1.space == k2.space == rho.space):
        raise InvariantViolation("kernels and measure must share a space")
    return all(k1.rows[x].weights == k2.rows[x].weights for x in rho.support)


@dataclass(frozen=True)
class Remark2Verdict:
    """The three equivalent readings of triviality, each evaluated independently.

    trivial:          every g-measurable event has ρ-mass 0 or 1;
    constant_is_rcd:  the constant kernel x ↦ ρ passes the full rcd check;
    almost_constant:  atomwise conditioning yields one measure at all points
                      of positive ρ-mass.
    A disagreement between the three is an implementation defect.
    """

    trivial: bool
    constant_is_rcd: bool
    almost_constant: bool

    @property
    def coherent(self) -> bool:
        return self.trivial == self.constant_is_rcd == self.almost_constant

    def to_json_dict(self) -> dict:
        return {
            "trivial": self.trivial,
            "constant_is_rcd": self.constant_is_rcd,
            "almost_constant": self.almost_constant,
            "coherent": self.coherent,
        }


def remark2_equivalence(rho: RationalMeasure, g: FinitePartition) -> Remark2Verdict:
    """Evaluate the triviality / constant-kernel / almost-constant equivalence."""
    trivial = is_trivial_on(rho, g)

    const_report = check_rcd(Kernel.constant(rho), rho, g)
    constant_is_rcd = const_report.measurable and const_report.identity_holds

    kernel = compute_rcd(rho, g)
    support = rho.support
    almost_constant = True
    if support:
        first = kernel.rows[support[0]].weights
        almost_constant = all(kernel.rows[x].weights == first for x in support)

    return Remark2Verdict(trivial, constant_is_rcd, almost_constant)


def conditional_triviality(rho: RationalMeasure, g: FinitePartition) -> bool:
    """True iff g is trivial under the conditioned measure at every ρ-positive point."""
    kernel = compute_rcd(rho, g)
    verdicts: dict[int, bool] = {}
    for x in rho.support:
        row = kernel.rows[x]
        key = id(row)  # rows are shared per block; one verdict per distinct row
        if key not in verdicts:
            verdicts[key] = is_trivial_on(row, g)
        if not verdicts[key]:
            return False
    return True


def universal_conditioner(
    g: FinitePartition,
) -> Callable[[RationalMeasure, int], RationalMeasure]:
    """One conditioning map (μ, x) ↦ μ(· | block of x) serving every μ at once.

    Falls back to μ itself on μ-null blocks, so the map is total and, for each
    μ, assembling its rows gives a kernel that passes check_rcd(·, μ, g).
    """

    def conditioner(mu: RationalMeasure, x: int) -> RationalMeasure:
        atom = atom_of(g, x)
        return condition(mu, atom) if mass(mu, atom) > 0 else mu

    return conditioner
