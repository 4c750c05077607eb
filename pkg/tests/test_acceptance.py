"""Acceptance gate: every criterion at its stated tolerance and budget.

All finite-space checks are exact (zero tolerance); the only numeric
tolerance anywhere is the quadrature cross-check (1e-6 at 1e4 panels). Each
test prints one PASS line with its measured evidence; run with `pytest -s
tests/test_acceptance.py` to see them.

One seeded 500-instance campaign is shared by the criteria that quantify
over campaign instances, so "all campaign instances" means one fixed
population, not per-test resamples.
"""

import json
import random
import subprocess
import sys
import time
from fractions import Fraction

import pytest

from rcdkit import (
    Kernel,
    RationalMeasure,
    build_iterated,
    check_rcd,
    compute_rcd,
    conditional_triviality,
    essentially_equal,
    generate_event_battery,
    lemma3_lhs,
    lemma3_rhs,
    make_partition,
    one_block_partition,
    remark2_equivalence,
    remark5_identity_check,
    theorem7_check,
    triviality_failure,
    universal_conditioner,
    FiniteSpace,
    ProductEvent,
    discretization_study,
)
from rcdkit.campaign import SUITES, SuiteResult, random_instance
from rcdkit.cli import main

import oracles
from conftest import instance_stream

F = Fraction

QUAD_TOL = 1e-6


@pytest.fixture(scope="module")
def campaign():
    return instance_stream("acceptance", 500, max_points=10)


def _passes(report):
    return report.measurable and report.identity_holds


def test_criterion_1_identity_roundtrip_and_reduction(campaign):
    start = time.perf_counter()
    exhaustive = 0
    for desc in campaign:
        kernel = compute_rcd(desc.rho, desc.partition)
        report = check_rcd(kernel, desc.rho, desc.partition)
        assert _passes(report), f"identity failed on {desc.to_json_dict()}"
        if desc.space.n <= 6:
            witness = oracles.exhaustive_rcd_identity(
                desc.rho.weights,
                [row.weights for row in kernel.rows],
                desc.partition.blocks,
            )
            assert witness is None, f"oracle disagrees on {desc.to_json_dict()}"
            exhaustive += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0, f"criterion 1 budget exceeded: {elapsed:.2f}s"
    print(
        f"\nACCEPTANCE 1: PASS — 500 instances exact, {exhaustive} verified "
        f"against the exhaustive oracle, {elapsed:.2f}s"
    )


def test_criterion_2_essential_uniqueness(campaign):
    rng = random.Random("acceptance-2")
    null_cases = 0
    for desc in campaign[:200]:
        kernel = compute_rcd(desc.rho, desc.partition)

        rows = list(kernel.rows)
        touched = False
        for b in range(desc.partition.n_blocks):
            ev = desc.partition.block_event(b)
            if sum(desc.rho.weights[x] for x in ev.members) == 0:
                filler = RationalMeasure.uniform(desc.space)
                for x in ev.members:
                    rows[x] = filler
                touched = True
        if touched:
            variant = Kernel(desc.space, tuple(rows))
            assert _passes(check_rcd(variant, desc.rho, desc.partition))
            assert essentially_equal(kernel, variant, desc.rho)
            null_cases += 1

        x = desc.rho.support[rng.randrange(len(desc.rho.support))]
        targets = [y for y in desc.space.points if kernel.rows[x].weights[y] != 1]
        rows = list(kernel.rows)
        rows[x] = RationalMeasure.dirac(desc.space, targets[rng.randrange(len(targets))])
        broken = Kernel(desc.space, tuple(rows))
        assert not check_rcd(broken, desc.rho, desc.partition).identity_holds
        assert not essentially_equal(kernel, broken, desc.rho)
    print(
        f"\nACCEPTANCE 2: PASS — 200 instances: null perturbations invisible "
        f"({null_cases} had null atoms), positive perturbations always break, exact"
    )


def test_criterion_3_triviality_equivalence(campaign):
    checked = 0
    for desc in campaign:
        assert remark2_equivalence(desc.rho, desc.partition).coherent
        checked += 1
    for n in (2, 3, 5, 8):
        space = FiniteSpace(n)
        forced_trivial = remark2_equivalence(
            RationalMeasure.uniform(space), one_block_partition(space)
        )
        assert forced_trivial.coherent and forced_trivial.trivial
        checked += 1
    for n in (2, 4, 6, 10):
        space = FiniteSpace(n)
        half = n // 2
        g = make_partition(space, [list(range(half)), list(range(half, n))])
        forced_nontrivial = remark2_equivalence(RationalMeasure.uniform(space), g)
        assert forced_nontrivial.coherent and not forced_nontrivial.trivial
        checked += 1
    print(
        f"\nACCEPTANCE 3: PASS — three-way equivalence coherent on {checked} "
        f"instances (500 random + forced trivial + forced nontrivial)"
    )


def test_criterion_4_diagonal_identity(campaign):
    start = time.perf_counter()
    rng = random.Random("acceptance-4")
    for desc in campaign:
        kernel = compute_rcd(desc.rho, desc.partition)
        members = set()
        for block in desc.partition.blocks:
            for y in desc.space.points:
                if rng.random() < 0.4:
                    members.update((x, y) for x in block)
        e = ProductEvent(desc.space, frozenset(members))
        assert lemma3_lhs(e, desc.rho) == lemma3_rhs(e, kernel, desc.rho)

    exhaustive_events = 0
    fixtures = [
        (4, [[0, 1], [2, 3]], (F(1, 8), F(3, 8), F(1, 4), F(1, 4))),
        (5, [[0, 2, 4], [1, 3]], (F(1, 5), F(0), F(2, 5), F(1, 5), F(1, 5))),
        (5, [[0, 1, 2, 3, 4]], (F(1, 2), F(1, 6), F(1, 6), F(1, 6), F(0))),
    ]
    for n, blocks, weights in fixtures:
        space = FiniteSpace(n)
        g = make_partition(space, blocks)
        rho = RationalMeasure(space, weights)
        kernel = compute_rcd(rho, g)
        for pairs in oracles.all_product_events(g.blocks, n):
            e = ProductEvent(space, pairs)
            assert lemma3_lhs(e, rho) == lemma3_rhs(e, kernel, rho)
            exhaustive_events += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0, f"criterion 4 budget exceeded: {elapsed:.2f}s"
    print(
        f"\nACCEPTANCE 4: PASS — 500 sampled product events exact plus "
        f"{exhaustive_events} exhaustive events on n ≤ 5 fixtures, {elapsed:.2f}s"
    )


def test_criterion_5_equivalence_theorem_both_directions(campaign):
    for desc in campaign:
        report = theorem7_check(
            desc.rho, desc.partition, build_iterated(desc.rho, desc.partition)
        )  # raises InconsistentVerdict on any failed implication
        assert report.conditionally_trivial
        assert report.forward.applicable and report.forward.iterated_ok
        assert report.forward.measurable
        assert report.backward.applicable
        assert report.diagonal_mass == F(1)
    print(
        "\nACCEPTANCE 5: PASS — both directions on 500 instances, diagonal "
        "mass exactly 1 in every backward run, no InconsistentVerdict"
    )


def test_criterion_6_universal_conditioner(campaign):
    for i in range(100):
        desc = random_instance(random.Random(f"acceptance-6:{i}"), 10)
        conditioner = universal_conditioner(desc.partition)
        kernel = Kernel(
            desc.space, tuple(conditioner(desc.rho, x) for x in desc.space.points)
        )
        assert _passes(check_rcd(kernel, desc.rho, desc.partition))
    trivial = sum(
        1 for desc in campaign if conditional_triviality(desc.rho, desc.partition)
    )
    assert trivial == len(campaign)
    print(
        "\nACCEPTANCE 6: PASS — 100 assembled conditioner kernels pass the "
        f"check; conditional triviality on {trivial}/{len(campaign)} instances"
    )


def test_criterion_7_continuum_counterexample():
    start = time.perf_counter()
    m0 = F(1, 3)
    g_events, a_events = generate_event_battery(0, 50, 50)
    report = remark5_identity_check(m0, g_events, a_events, quad_panels=10_000)
    assert report.pairs_checked >= 2500
    assert report.all_exact, f"identity failures: {report.failures}"
    assert report.quad_max_error <= QUAD_TOL

    rng = random.Random("acceptance-7")
    for _ in range(100):
        x = F(rng.randint(0, 128), 128)
        assert triviality_failure(m0, x) == m0

    rows = discretization_study(m0, [2, 8, 64, 1024])
    assert [(r.bins, r.conditionally_trivial) for r in rows] == [
        (2, True),
        (8, True),
        (64, True),
        (1024, True),
    ]
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0, f"criterion 7 budget exceeded: {elapsed:.2f}s"
    print(
        f"\nACCEPTANCE 7: PASS — {report.pairs_checked} identity pairs exact, "
        f"quadrature max error {report.quad_max_error:.2e} ≤ 1e-6, triviality "
        f"failure = 1/3 at 100 points, discretizations trivial, {elapsed:.2f}s"
    )


def test_criterion_8_cli_contract(tmp_path, monkeypatch, capsys):
    run = [sys.executable, "-m", "rcdkit.cli"]
    first = subprocess.run(
        run + ["campaign", "--seed", "42", "--trials", "100"],
        capture_output=True,
        cwd=tmp_path,
    )
    second = subprocess.run(
        run + ["campaign", "--seed", "42", "--trials", "100"],
        capture_output=True,
        cwd=tmp_path,
    )
    assert first.returncode == 0 and second.returncode == 0
    assert first.stdout == second.stdout, "campaign output is not byte-identical"
    doc = json.loads(first.stdout)
    assert doc["all_passed"] is True

    valid = tmp_path / "valid.json"
    valid.write_text('{ "n": 4, "blocks": [[0,1],[2,3]], "rho": ["1/6","1/3","1/4","1/4"] }')
    matrix = []

    monkeypatch.chdir(tmp_path)
    matrix.append((main(["check", "--file", str(valid), "--suite", "rcd"]), 0))
    matrix.append((main(["check", "--file", str(valid), "--suite", "theorem7"]), 0))
    matrix.append((main(["campaign", "--seed", "1", "--trials", "2"]), 0))
    matrix.append(
        (main(["remark5", "--m0", "1/3", "--pairs", "1", "--levels", "2", "--panels", "100"]), 0)
    )

    bad_weights = tmp_path / "bad_weights.json"
    bad_weights.write_text('{ "n": 2, "blocks": [[0,1]], "rho": ["1/3","1/3"] }')
    matrix.append((main(["check", "--file", str(bad_weights), "--suite", "rcd"]), 2))
    bad_json = tmp_path / "bad.json"
    bad_json.write_text("{ nope")
    matrix.append((main(["check", "--file", str(bad_json), "--suite", "rcd"]), 2))
    matrix.append((main(["check", "--file", str(tmp_path / "missing.json"), "--suite", "rcd"]), 2))
    matrix.append((main(["campaign", "--seed", "1", "--trials", "0"]), 2))
    matrix.append((main(["remark5", "--m0", "1", "--pairs", "1", "--levels", "2"]), 2))
    matrix.append((main(["remark5", "--m0", "7/3", "--pairs", "1", "--levels", "2"]), 2))

    monkeypatch.setitem(
        SUITES, "rcd", lambda desc, rng: SuiteResult("rcd", False, {"forced": True})
    )
    matrix.append((main(["check", "--file", str(valid), "--suite", "rcd"]), 1))
    capsys.readouterr()

    for got, expected in matrix:
        assert got == expected, f"exit-code matrix mismatch: {matrix}"
    print(
        f"\nACCEPTANCE 8: PASS — byte-identical campaign output "
        f"({len(first.stdout)} bytes), exit-code matrix of {len(matrix)} cases holds"
    )
