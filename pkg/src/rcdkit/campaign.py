"""Seeded verification campaigns over random finite instances.

Instances are generated deterministically from a campaign seed (per-trial and
per-suite streams are derived from it), weights have bounded denominators so
exact arithmetic stays small, and every suite is a theorem on finite spaces:
a failure can only mean an implementation defect, in which case the instance
is greedily shrunk and written out as a reproduction file that is itself a
valid space description.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional

from .engine import (
    Kernel,
    check_rcd,
    compute_rcd,
    essentially_equal,
    remark2_equivalence,
)
from .errors import InconsistentVerdict, InvariantViolation
from .io import SpaceDescription
from .iterated import (
    ProductEvent,
    build_iterated,
    in_product_sigma,
    lemma3_lhs,
    lemma3_rhs,
    theorem7_check,
)
from .measures import RationalMeasure, mass
from .spaces import FiniteSpace, make_partition, singleton_partition

SUITE_ORDER = ("rcd", "remark2", "lemma3", "theorem7", "uniqueness")

MAX_SEED = 2**64 - 1


@dataclass(frozen=True)
class CampaignConfig:
    """Parameters of one campaign run; suites are normalized to canonical order."""

    seed: int
    trials: int
    max_points: int = 10
    suites: tuple[str, ...] = SUITE_ORDER
    max_denominator: int = 64

    def __post_init__(self):
        if not 0 <= self.seed <= MAX_SEED:
            raise InvariantViolation(f"seed must fit 64 bits, got {self.seed}")
        if self.trials < 1:
            raise InvariantViolation(f"trials must be at least 1, got {self.trials}")
        if not 2 <= self.max_points <= 64:
            raise InvariantViolation(
                f"max_points must lie in [2, 64], got {self.max_points}"
            )
        unknown = set(self.suites) - set(SUITE_ORDER)
        if unknown:
            raise InvariantViolation(f"unknown suites: {sorted(unknown)}")
        if not self.suites:
            raise InvariantViolation("at least one suite is required")
        ordered = tuple(s for s in SUITE_ORDER if s in set(self.suites))
        object.__setattr__(self, "suites", ordered)


def derived_rng(*parts) -> random.Random:
    """Deterministic stream derived from the campaign seed and labels."""
    return random.Random(":".join(str(p) for p in parts))


def random_instance(
    rng: random.Random, max_points: int = 10, max_denominator: int = 64
) -> SpaceDescription:
    """One random finite instance: space, partition, bounded-denominator measure.

    Weights are a random composition of the denominator, so zero weights (null
    points and potentially null blocks) occur naturally.
    """
    n = rng.randint(2, max_points)
    space = FiniteSpace(n)

    k = rng.randint(1, n)
    assignment = [rng.randrange(k) for _ in range(n)]
    groups: dict[int, list[int]] = {}
    for x, b in enumerate(assignment):
        groups.setdefault(b, []).append(x)
    partition = make_partition(space, list(groups.values()))

    den = rng.randint(1, max_denominator)
    counts = [0] * n
    for _ in range(den):
        counts[rng.randrange(n)] += 1
    rho = RationalMeasure(space, tuple(Fraction(c, den) for c in counts))
    return SpaceDescription(space, partition, rho)


def random_product_event(
    rng: random.Random, desc: SpaceDescription
) -> ProductEvent:
    """A random member of the product σ-algebra blocks ⊗ points: a union of
    block × singleton rectangles."""
    n = desc.space.n
    members = set()
    for b, block in enumerate(desc.partition.blocks):
        for y in range(n):
            if rng.random() < 0.4:
                members.update((x, y) for x in block)
    return ProductEvent(desc.space, frozenset(members))


@dataclass(frozen=True)
class SuiteResult:
    suite: str
    passed: bool
    detail: dict


def _suite_rcd(desc: SpaceDescription, rng: random.Random) -> SuiteResult:
    kernel = compute_rcd(desc.rho, desc.partition)
    report = check_rcd(kernel, desc.rho, desc.partition)
    return SuiteResult(
        "rcd",
        report.measurable and report.identity_holds,
        report.to_json_dict(),
    )


def _suite_remark2(desc: SpaceDescription, rng: random.Random) -> SuiteResult:
    verdict = remark2_equivalence(desc.rho, desc.partition)
    return SuiteResult("remark2", verdict.coherent, verdict.to_json_dict())


def _suite_lemma3(
    desc: SpaceDescription, rng: random.Random, events: int = 20
) -> SuiteResult:
    kernel = compute_rcd(desc.rho, desc.partition)
    singles = singleton_partition(desc.space)
    mismatches = 0
    not_measurable = 0
    for _ in range(events):
        e = random_product_event(rng, desc)
        if not in_product_sigma(e, desc.partition, singles):
            not_measurable += 1
            continue
        if lemma3_lhs(e, desc.rho) != lemma3_rhs(e, kernel, desc.rho):
            mismatches += 1
    passed = mismatches == 0 and not_measurable == 0
    return SuiteResult(
        "lemma3",
        passed,
        {"events_checked": events, "mismatches": mismatches, "not_measurable": not_measurable},
    )


def _suite_theorem7(desc: SpaceDescription, rng: random.Random) -> SuiteResult:
    candidate = build_iterated(desc.rho, desc.partition)
    try:
        report = theorem7_check(desc.rho, desc.partition, candidate)
    except InconsistentVerdict as exc:
        return SuiteResult("theorem7", False, {"inconsistent_verdict": str(exc)})
    passed = (
        report.conditionally_trivial
        and report.forward.applicable
        and bool(report.forward.iterated_ok)
        and bool(report.forward.measurable)
        and report.backward.applicable
        and report.diagonal_mass == 1
    )
    return SuiteResult("theorem7", passed, report.to_json_dict())


def _null_block_variant(
    desc: SpaceDescription, kernel: Kernel
) -> Optional[Kernel]:
    """Replace rows on measure-zero blocks with the uniform measure; None when
    every block carries mass."""
    uniform = RationalMeasure.uniform(desc.space)
    rows = list(kernel.rows)
    touched = False
    for b in range(desc.partition.n_blocks):
        ev = desc.partition.block_event(b)
        if mass(desc.rho, ev) == 0:
            for x in ev.members:
                rows[x] = uniform
            touched = True
    return Kernel(desc.space, tuple(rows)) if touched else None


def _positive_perturbation(
    desc: SpaceDescription, kernel: Kernel, rng: random.Random
) -> Kernel:
    """Change the kernel at one point of positive mass, guaranteeing a real change."""
    x = desc.rho.support[rng.randrange(len(desc.rho.support))]
    row = kernel.rows[x]
    targets = [y for y in desc.space.points if row.weights[y] != 1]
    y = targets[rng.randrange(len(targets))]
    rows = list(kernel.rows)
    rows[x] = RationalMeasure.dirac(desc.space, y)
    return Kernel(desc.space, tuple(rows))


def _suite_uniqueness(desc: SpaceDescription, rng: random.Random) -> SuiteResult:
    kernel = compute_rcd(desc.rho, desc.partition)
    detail: dict = {}
    ok = True

    variant = _null_block_variant(desc, kernel)
    if variant is not None:
        rep = check_rcd(variant, desc.rho, desc.partition)
        still_valid = rep.measurable and rep.identity_holds
        agree = essentially_equal(kernel, variant, desc.rho)
        detail["null_variant"] = {"still_valid": still_valid, "essentially_equal": agree}
        ok = ok and still_valid and agree
    else:
        detail["null_variant"] = None

    perturbed = _positive_perturbation(desc, kernel, rng)
    rep = check_rcd(perturbed, desc.rho, desc.partition)
    breaks_identity = not rep.identity_holds
    differs = not essentially_equal(kernel, perturbed, desc.rho)
    detail["positive_perturbation"] = {
        "breaks_identity": breaks_identity,
        "essentially_different": differs,
    }
    ok = ok and breaks_identity and differs
    return SuiteResult("uniqueness", ok, detail)


SUITES: dict[str, Callable[[SpaceDescription, random.Random], SuiteResult]] = {
    "rcd": _suite_rcd,
    "remark2": _suite_remark2,
    "lemma3": _suite_lemma3,
    "theorem7": _suite_theorem7,
    "uniqueness": _suite_uniqueness,
}


def run_suite(name: str, desc: SpaceDescription, rng: random.Random) -> SuiteResult:
    if name not in SUITES:
        raise InvariantViolation(f"unknown suite {name!r}")
    return SUITES[name](desc, rng)


# ---------------------------------------------------------------------------
# greedy shrinking


def _remove_point(desc: SpaceDescription, x: int) -> Optional[SpaceDescription]:
    if desc.space.n <= 2:
        return None
    wx = desc.rho.weights[x]
    if wx == 1:
        return None
    space = FiniteSpace(desc.space.n - 1)

    def reindex(y: int) -> int:
        return y if y < x else y - 1

    blocks = []
    for block in desc.partition.blocks:
        reduced = [reindex(y) for y in block if y != x]
        if reduced:
            blocks.append(reduced)
    weights = [
        desc.rho.weights[y] / (1 - wx) for y in desc.space.points if y != x
    ]
    return SpaceDescription(
        space,
        make_partition(space, blocks),
        RationalMeasure(space, tuple(weights)),
    )


def _merge_blocks(desc: SpaceDescription, i: int, j: int) -> Optional[SpaceDescription]:
    if desc.partition.n_blocks < 2:
        return None
    blocks = [set(b) for b in desc.partition.blocks]
    blocks[i] |= blocks[j]
    del blocks[j]
    return SpaceDescription(
        desc.space,
        make_partition(desc.space, [sorted(b) for b in blocks]),
        desc.rho,
    )


def _measure_complexity(rho: RationalMeasure) -> tuple[int, int]:
    return len(rho.support), sum(w.denominator for w in rho.weights)


def _weight_simplifications(desc: SpaceDescription):
    support = desc.rho.support
    for x in support:
        yield RationalMeasure.dirac(desc.space, x)
    if len(support) > 1:
        yield RationalMeasure(
            desc.space,
            tuple(
                Fraction(1, len(support)) if x in support else Fraction(0)
                for x in desc.space.points
            ),
        )
    yield RationalMeasure.uniform(desc.space)


def shrink_instance(
    desc: SpaceDescription, still_failing: Callable[[SpaceDescription], bool]
) -> SpaceDescription:
    """Greedy minimization: drop points, merge blocks, simplify weights, as
    long as the failure predicate keeps holding."""
    current = desc
    progress = True
    while progress:
        progress = False
        for x in range(current.space.n):
            cand = _remove_point(current, x)
            if cand is not None and still_failing(cand):
                current = cand
                progress = True
                break
        if progress:
            continue
        nb = current.partition.n_blocks
        for i in range(nb):
            for j in range(i + 1, nb):
                cand = _merge_blocks(current, i, j)
                if cand is not None and still_failing(cand):
                    current = cand
                    progress = True
                    break
            if progress:
                break
        if progress:
            continue
        bar = _measure_complexity(current.rho)
        for rho in _weight_simplifications(current):
            # only strictly simpler measures, so the loop is well-founded
            if _measure_complexity(rho) >= bar:
                continue
            cand = SpaceDescription(current.space, current.partition, rho)
            if still_failing(cand):
                current = cand
                progress = True
                break
    return current


# ---------------------------------------------------------------------------
# campaign driver


@dataclass(frozen=True)
class CampaignFailure:
    trial: int
    suite: str
    repro_file: str
    detail: dict


@dataclass(frozen=True)
class CampaignResult:
    config: CampaignConfig
    pass_counts: dict
    fail_counts: dict
    failures: tuple[CampaignFailure, ...]

    @property
    def all_passed(self) -> bool:
        return not self.failures

    def to_json_dict(self) -> dict:
        return {
            "seed": self.config.seed,
            "trials": self.config.trials,
            "max_points": self.config.max_points,
            "suites": {
                name: {"pass": self.pass_counts[name], "fail": self.fail_counts[name]}
                for name in self.config.suites
            },
            "failures": [
                {
                    "trial": f.trial,
                    "suite": f.suite,
                    "repro_file": f.repro_file,
                    "detail": f.detail,
                }
                for f in self.failures
            ],
            "all_passed": self.all_passed,
        }


def run_campaign(config: CampaignConfig, repro_dir: Path | str = ".") -> CampaignResult:
    """Run the configured suites over deterministically generated instances.

    On a suite failure the instance is shrunk against that suite (with a fixed
    inner stream, so the reproduction is deterministic) and written to
    <repro_dir>/campaign-seed<seed>-trial<t>-<suite>.repro.json.
    """
    repro_dir = Path(repro_dir)
    pass_counts = {name: 0 for name in config.suites}
    fail_counts = {name: 0 for name in config.suites}
    failures: list[CampaignFailure] = []

    for trial in range(config.trials):
        inst_rng = derived_rng(config.seed, "instance", trial)
        desc = random_instance(inst_rng, config.max_points, config.max_denominator)
        for name in config.suites:
            suite_rng = derived_rng(config.seed, "suite", trial, name)
            result = run_suite(name, desc, suite_rng)
            if result.passed:
                pass_counts[name] += 1
                continue
            fail_counts[name] += 1

            def fails(d: SpaceDescription, _name=name) -> bool:
                return not run_suite(_name, d, derived_rng(config.seed, "shrink", _name)).passed

            shrunk = shrink_instance(desc, fails) if fails(desc) else desc
            repro_path = repro_dir / f"campaign-seed{config.seed}-trial{trial}-{name}.repro.json"
            repro_path.write_text(shrunk.dumps(), encoding="utf-8")
            failures.append(
                CampaignFailure(
                    trial=trial,
                    suite=name,
                    repro_file=repro_path.name,
                    detail=result.detail,
                )
            )
    return CampaignResult(
        config=config,
        pass_counts=pass_counts,
        fail_counts=fail_counts,
        failures=tuple(failures),
    )
