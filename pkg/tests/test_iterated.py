"""Iterated conditioning and the two-directional equivalence checker.

Claims covered:
  - in_product_sigma decides rectangle-constancy of product events
  - the diagonal identity holds exactly: slice mass equals the double sum,
    on random product events (library evaluator vs direct Fraction oracle)
    and on the rectangle base case ρ(A ∩ G)
  - build_iterated conditions twice, handles null atoms, passes check_iterated
  - check_iterated ignores grid values at null points, rejects corrupt slices
  - diagonal_agreement_set always contains the diagonal and equals the
    intersection of its per-singleton relaxations
  - theorem7_check passes both directions on finite instances, reports a
    non-measurable candidate as not applicable, and its inconsistency guard
    fires when a sub-verdict is forced false
"""

import random
from fractions import Fraction

import pytest

import rcdkit.iterated as iterated_module
from rcdkit import (
    Event,
    FiniteSpace,
    InconsistentVerdict,
    IteratedKernel,
    Kernel,
    ProductEvent,
    RationalMeasure,
    build_iterated,
    check_iterated,
    check_rcd,
    compute_rcd,
    diagonal_agreement_set,
    in_product_sigma,
    is_product_measurable,
    lemma3_lhs,
    lemma3_rhs,
    make_partition,
    mass,
    one_block_partition,
    singleton_partition,
    theorem7_check,
)

import oracles
from conftest import instance_stream

F = Fraction


def four_point():
    space = FiniteSpace(4)
    g = make_partition(space, [[0, 1], [2, 3]])
    rho = RationalMeasure(space, (F(1, 6), F(1, 3), F(1, 4), F(1, 4)))
    return space, g, rho


# -- product σ-algebra membership ---------------------------------------------


def test_rectangle_of_generator_is_measurable():
    space, g, _ = four_point()
    e = ProductEvent.rectangle(Event(space, {0, 1}), Event(space, {1, 3}))
    assert in_product_sigma(e, g, singleton_partition(space))


def test_diagonal_measurability_depends_on_partition():
    space = FiniteSpace(2)
    diag = ProductEvent.diagonal(space)
    singles = singleton_partition(space)
    assert in_product_sigma(diag, singles, singles)
    one = one_block_partition(space)
    assert not in_product_sigma(diag, one, one)


# -- the diagonal identity ------------------------------------------------------


def test_lhs_examples():
    space = FiniteSpace(3)
    rho = RationalMeasure.uniform(space)
    assert lemma3_lhs(ProductEvent.full(space), rho) == 1
    assert lemma3_lhs(ProductEvent.diagonal(space), rho) == 1
    off = ProductEvent(
        space, frozenset((x, y) for x in range(3) for y in range(3) if x != y)
    )
    assert lemma3_lhs(off, rho) == 0


def test_rhs_worked_example():
    space = FiniteSpace(4)
    g = make_partition(space, [[0, 1], [2, 3]])
    rho = RationalMeasure.uniform(space)
    k = compute_rcd(rho, g)
    e = ProductEvent.rectangle(Event(space, {0, 1}), Event(space, {1, 2}))
    assert lemma3_rhs(e, k, rho) == F(1, 4)
    assert lemma3_lhs(e, rho) == F(1, 4)


def test_rhs_normalization_and_empty():
    space, g, rho = four_point()
    k = compute_rcd(rho, g)
    assert lemma3_rhs(ProductEvent.full(space), k, rho) == 1
    assert lemma3_rhs(ProductEvent(space, frozenset()), k, rho) == 0


def test_rectangle_base_case_matches_intersection_mass():
    for desc in instance_stream("iter-rect", 60):
        rng = random.Random(desc.space.n * 1000 + desc.partition.n_blocks)
        k = compute_rcd(desc.rho, desc.partition)
        mask = rng.randrange(1 << desc.partition.n_blocks)
        g_pts = set()
        for i, block in enumerate(desc.partition.blocks):
            if mask >> i & 1:
                g_pts |= block
        a_pts = {x for x in desc.space.points if rng.random() < 0.5}
        g_ev = Event(desc.space, g_pts)
        a_ev = Event(desc.space, a_pts)
        e = ProductEvent.rectangle(g_ev, a_ev)
        rhs = lemma3_rhs(e, k, desc.rho)
        assert rhs == mass(desc.rho, g_ev & a_ev)
        assert rhs == sum(
            (
                desc.rho.weights[x] * sum((k.rows[x].weights[a] for a in a_pts), F(0))
                for x in g_pts
            ),
            F(0),
        )


def test_identity_on_random_product_events():
    rng = random.Random(41)
    trials = 0
    for desc in instance_stream("iter-lemma3", 120):
        k = compute_rcd(desc.rho, desc.partition)
        singles = singleton_partition(desc.space)
        for _ in range(4):
            members = set()
            for block in desc.partition.blocks:
                for y in desc.space.points:
                    if rng.random() < 0.4:
                        members.update((x, y) for x in block)
            e = ProductEvent(desc.space, frozenset(members))
            assert in_product_sigma(e, desc.partition, singles)
            lhs = lemma3_lhs(e, desc.rho)
            rhs = lemma3_rhs(e, k, desc.rho)
            assert lhs == rhs
            assert rhs == oracles.double_sum(
                e.members, desc.rho.weights, [row.weights for row in k.rows]
            )
            trials += 1
    assert trials == 480


def test_identity_exhaustive_small():
    space = FiniteSpace(4)
    g = make_partition(space, [[0, 2], [1, 3]])
    rho = RationalMeasure(space, (F(1, 8), F(3, 8), F(1, 2), F(0)))
    k = compute_rcd(rho, g)
    count = 0
    for pairs in oracles.all_product_events(g.blocks, space.n):
        e = ProductEvent(space, pairs)
        assert lemma3_lhs(e, rho) == lemma3_rhs(e, k, rho)
        count += 1
    assert count == 1 << (g.n_blocks * space.n)


# -- building and checking iterated kernels --------------------------------------


def test_build_one_block_entries_are_rho():
    space, _, rho = four_point()
    k2 = build_iterated(rho, one_block_partition(space))
    for x in space.points:
        for y in space.points:
            assert k2.grid[x][y].weights == rho.weights


def test_build_singletons_fully_supported():
    space = FiniteSpace(3)
    rho = RationalMeasure(space, (F(1, 2), F(1, 4), F(1, 4)))
    singles = singleton_partition(space)
    k2 = build_iterated(rho, singles)
    # slice x conditions δ_x again: every stage-two block except {x} is null
    # for it, so the fallback keeps δ_x across the whole row
    for x in space.points:
        for y in space.points:
            assert k2.grid[x][y].weights == RationalMeasure.dirac(space, x).weights
    # the dirac-in-y grid is another valid iterated rcd: it differs from the
    # built one only where the slice measure is null, and both pass the check
    dirac_grid = IteratedKernel(
        space,
        tuple(
            tuple(RationalMeasure.dirac(space, y) for y in space.points)
            for _x in space.points
        ),
    )
    assert check_iterated(dirac_grid, rho, singles)
    assert check_iterated(k2, rho, singles)
    for x in space.points:
        assert dirac_grid.grid[x][x].weights == k2.grid[x][x].weights


def test_build_worked_example_with_null_fallback():
    space, g, rho = four_point()
    k2 = build_iterated(rho, g)
    row0 = (F(1, 3), F(2, 3), F(0), F(0))
    for y in space.points:
        # y in {0,1}: conditioning the conditioned measure on its own block;
        # y in {2,3}: that block is null for it, so the fallback returns it
        assert k2.grid[0][y].weights == row0
    assert check_iterated(k2, rho, g)


def test_check_iterated_rejects_corrupt_positive_slice():
    space, g, rho = four_point()
    k2 = build_iterated(rho, g)
    grid = [list(row) for row in k2.grid]
    grid[0][0] = RationalMeasure.dirac(space, 3)
    corrupt = IteratedKernel(space, tuple(tuple(row) for row in grid))
    assert not check_iterated(corrupt, rho, g)


def test_check_iterated_ignores_null_points():
    space = FiniteSpace(4)
    g = make_partition(space, [[0, 1], [2, 3]])
    rho = RationalMeasure(space, (F(1, 2), F(1, 2), F(0), F(0)))
    k2 = build_iterated(rho, g)
    grid = [list(row) for row in k2.grid]
    for y in space.points:
        grid[2][y] = RationalMeasure.dirac(space, y)  # arbitrary junk at null x
        grid[3][y] = RationalMeasure.uniform(space)
    modified = IteratedKernel(space, tuple(tuple(row) for row in grid))
    assert check_iterated(modified, rho, g) == check_iterated(k2, rho, g) == True  # noqa: E712


def test_build_passes_check_on_random_instances():
    for desc in instance_stream("iter-build", 80):
        k2 = build_iterated(desc.rho, desc.partition)
        assert check_iterated(k2, desc.rho, desc.partition)
        assert is_product_measurable(k2, desc.partition, desc.partition)


def _check_iterated_against_version(k2, rho, g, null_filler):
    """Re-run the slice checks against a first-stage conditioning whose null
    blocks carry an arbitrary other measure (a different version)."""
    from rcdkit.measures import condition, mass

    verdicts = []
    for x in rho.support:
        atom = g.block_event(g.block_of_point[x])
        base_row = condition(rho, atom) if mass(rho, atom) > 0 else null_filler
        report = check_rcd(Kernel(rho.space, k2.grid[x]), base_row, g)
        verdicts.append(report.measurable and report.identity_holds)
    return all(verdicts)


def test_check_iterated_is_version_independent():
    rng = random.Random(71)
    tested = 0
    for desc in instance_stream("iter-version", 60):
        filler = RationalMeasure.uniform(desc.space)
        for corrupt in (False, True):
            k2 = build_iterated(desc.rho, desc.partition)
            if corrupt:
                grid = [list(row) for row in k2.grid]
                x = desc.rho.support[rng.randrange(len(desc.rho.support))]
                grid[x] = [RationalMeasure.dirac(desc.space, 0)] * desc.space.n
                k2 = IteratedKernel(desc.space, tuple(tuple(r) for r in grid))
            ours = check_iterated(k2, desc.rho, desc.partition)
            alt = _check_iterated_against_version(k2, desc.rho, desc.partition, filler)
            assert ours == alt
            tested += 1
    assert tested == 120


# -- diagonal agreement ------------------------------------------------------------


def test_agreement_constant_grid_full_square():
    space = FiniteSpace(3)
    rho = RationalMeasure.uniform(space)
    grid = tuple((rho,) * 3 for _ in range(3))
    assert diagonal_agreement_set(IteratedKernel(space, grid)).members == set(
        ProductEvent.full(space).members
    )


def test_agreement_dirac_grid_is_diagonal():
    space = FiniteSpace(2)
    grid = tuple(
        tuple(RationalMeasure.dirac(space, y) for y in space.points)
        for _x in space.points
    )
    assert diagonal_agreement_set(IteratedKernel(space, grid)).members == {
        (0, 0),
        (1, 1),
    }


def test_agreement_contains_diagonal():
    for desc in instance_stream("iter-diag", 40):
        k2 = build_iterated(desc.rho, desc.partition)
        agreement = diagonal_agreement_set(k2)
        for x in desc.space.points:
            assert (x, x) in agreement.members


def test_agreement_equals_intersection_of_singleton_relaxations():
    for desc in instance_stream("iter-ea", 40, max_points=6):
        k2 = build_iterated(desc.rho, desc.partition)
        n = desc.space.n
        per_singleton = []
        for a in range(n):
            per_singleton.append(
                frozenset(
                    (x, y)
                    for x in range(n)
                    for y in range(n)
                    if k2.grid[x][y].weights[a] == k2.grid[x][x].weights[a]
                )
            )
        expected = frozenset.intersection(*per_singleton)
        assert diagonal_agreement_set(k2).members == expected


# -- the equivalence checker ---------------------------------------------------------


def test_theorem7_full_pipeline():
    space = FiniteSpace(4)
    g = make_partition(space, [[0, 1], [2, 3]])
    rho = RationalMeasure.uniform(space)
    report = theorem7_check(rho, g, build_iterated(rho, g))
    assert report.conditionally_trivial
    assert report.forward.applicable and report.forward.iterated_ok
    assert report.forward.measurable
    assert report.backward.applicable
    assert report.diagonal_mass == 1


def test_theorem7_without_candidate():
    space, _, rho = four_point()
    report = theorem7_check(rho, one_block_partition(space))
    assert report.forward.applicable and report.forward.iterated_ok
    assert not report.backward.applicable
    assert report.diagonal_mass is None


def _nonmeasurable_iterated(rho, g):
    """A genuine iterated rcd that is not constant on block squares: entries
    at slice-null blocks are free, so they can be chosen to differ across x."""
    space = rho.space
    base = compute_rcd(rho, g)
    k2 = build_iterated(rho, g)
    grid = [list(row) for row in k2.grid]
    fillers = [RationalMeasure.dirac(space, 0), RationalMeasure.uniform(space)]
    changed = False
    for b in range(g.n_blocks):
        ev = g.block_event(b)
        for idx, x in enumerate(sorted(ev.members)):
            slice_measure = base.rows[x]
            for c in range(g.n_blocks):
                cev = g.block_event(c)
                if sum(slice_measure.weights[y] for y in cev.members) == 0:
                    filler = fillers[idx % 2]
                    for y in cev.members:
                        grid[x][y] = filler
                    changed = idx > 0 or changed
    return IteratedKernel(space, tuple(tuple(row) for row in grid)), changed


def test_theorem7_nonmeasurable_candidate_not_applicable():
    space, g, rho = four_point()
    candidate, changed = _nonmeasurable_iterated(rho, g)
    assert changed
    assert check_iterated(candidate, rho, g)
    assert not is_product_measurable(candidate, g, g)
    report = theorem7_check(rho, g, candidate)
    assert not report.backward.applicable
    assert report.backward.candidate_is_iterated is True
    assert report.backward.candidate_measurable is False
    assert report.forward.applicable  # forward ran regardless


def test_theorem7_random_instances():
    for desc in instance_stream("iter-thm7", 80):
        report = theorem7_check(desc.rho, desc.partition, build_iterated(desc.rho, desc.partition))
        assert report.conditionally_trivial
        assert report.backward.applicable
        assert report.diagonal_mass == 1


def test_theorem7_guard_fires_on_forced_inconsistency(monkeypatch):
    space, g, rho = four_point()
    candidate = build_iterated(rho, g)
    monkeypatch.setattr(iterated_module, "conditional_triviality", lambda *_: False)
    with pytest.raises(InconsistentVerdict):
        theorem7_check(rho, g, candidate)


def test_report_json_shape():
    space, g, rho = four_point()
    doc = theorem7_check(rho, g, build_iterated(rho, g)).to_json_dict()
    assert doc["conditionally_trivial"] is True
    assert doc["diagonal_mass"] == "1/1"
    assert set(doc["forward"]) == {"applicable", "iterated_ok", "measurable"}
    assert doc["backward"]["diagonal_mass"] == "1/1"
