"""Acceptance gate: ten end-to-end criteria, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines; each
test also asserts, so the suite stays red if a criterion regresses.
"""

import json
import math
import subprocess
import sys

import oracles
import pytest

from conftest import CLASSICAL_NAMES, CORPUS_INPUTS, ROOT, load_tm
from qtmlab import (
    EndOnly,
    EveryStep,
    HaltOutcome,
    UNHALTED,
    check_wellformed,
    core_well_formed,
    evolve,
    lift_to_qtm,
    pair_image_inner,
    parse_input,
    run_classical,
    run_schedule,
    sample_run,
    superposition_window,
    analyze_halting_subspace,
    Tape,
)

R2 = 1 / math.sqrt(2)
BUDGETS = (1, 5, 20, 50)


def _report(number, label, ok):
    print(f"{'PASS' if ok else 'FAIL'} criterion {number}: {label}")
    return ok


def _cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "qtmlab.cli", *args],
        capture_output=True,
        text=True,
        cwd=str(ROOT),
    )


@pytest.fixture(scope="module")
def gated_corpus(corpus):
    """Corpus machines passing the orthogonality gate, with their inputs.

    The gate requires that no witness joins two running configurations;
    collisions created by halted configurations drifting over running ones
    are inherent to the halt convention and do not disqualify a machine.
    """
    passing = []
    for name, spec, inputs in corpus:
        if core_well_formed(check_wellformed(spec)):
            passing.append((name, spec, inputs))
    return passing


def test_criterion_1_naive_machine_overlap(hadamard_halt_naive):
    proc = _cli("check", "machines/hadamard_halt_naive.qtm")
    result = json.loads(proc.stdout)["result"]
    moduli = [
        abs(complex(w["inner"]["re"], w["inner"]["im"]))
        for w in result["orthogonalityWitnesses"]
        if not w["driftCollision"]
    ]
    ok = (
        proc.returncode == 2
        and result["verdict"] == "violation"
        and any(abs(m - R2) <= 1e-12 for m in moduli)
    )
    assert _report(
        1, "naive branching machine fails check with overlap 1/sqrt(2)", ok
    )


def test_criterion_2_corrected_machine_orthogonal(hadamard_halt, corrected_report):
    c0 = hadamard_halt.config("q0", Tape.from_string("0"), 0)
    c1 = hadamard_halt.config("q0", Tape.from_string("1"), 0)
    inner = pair_image_inner(hadamard_halt, c0, c1)
    # Full verdict pinned to the brute-force sweep's frozen baseline: the
    # corrected machine still shows drift collisions (10692 of them) but
    # none between two running configurations.
    baseline = (
        corrected_report.verdict == "violation"
        and len(corrected_report.witnesses) == 10692
        and len(corrected_report.core_witnesses) == 0
    )
    ok = abs(inner) <= 1e-12 and baseline
    assert _report(
        2, "sign-corrected machine zeroes the (0,1) overlap; verdict frozen", ok
    )


def test_criterion_3_schedule_equivalence(gated_corpus):
    assert sum(1 for name, _, _ in gated_corpus if name in CLASSICAL_NAMES) >= 3
    assert sum(1 for name, _, _ in gated_corpus if name not in CLASSICAL_NAMES) >= 2
    worst = 0.0
    for _, spec, inputs in gated_corpus:
        for text in inputs:
            inp = parse_input(text, spec)
            for n in BUDGETS:
                a = run_schedule(spec, inp, EveryStep(), n).coarsened()
                b = run_schedule(spec, inp, EndOnly(n), n).coarsened()
                keys = set(a) | set(b)
                tv = 0.5 * sum(abs(a.get(k, 0.0) - b.get(k, 0.0)) for k in keys)
                worst = max(worst, tv)
    ok = worst <= 1e-9
    assert _report(
        3, f"measuring every step vs only at the end agree (worst tv {worst:.2e})", ok
    )


def test_criterion_4_cumulative_halt_identity(gated_corpus):
    worst = 0.0
    for _, spec, inputs in gated_corpus:
        for text in inputs:
            inp = parse_input(text, spec)
            for n in BUDGETS:
                dist = run_schedule(spec, inp, EveryStep(), n)
                cumulative = 1.0 - dist.probability(UNHALTED)
                state, _ = evolve(spec, inp, n)
                worst = max(worst, abs(cumulative - state.halted_mass()))
    ok = worst <= 1e-9
    assert _report(
        4,
        f"cumulative halt probability equals unmeasured halted mass "
        f"(worst gap {worst:.2e})",
        ok,
    )


def test_criterion_5_halted_mass_monotone(gated_corpus):
    ok = True
    for _, spec, inputs in gated_corpus:
        for text in inputs:
            _, trace = evolve(spec, parse_input(text, spec), 50)
            for prev, cur in zip(trace.rows, trace.rows[1:]):
                if cur.halted_mass < prev.halted_mass - 1e-12:
                    ok = False
    assert _report(5, "halted mass never decreases over 50 steps", ok)


def test_criterion_6_norm_preserved_for_ten_thousand_steps(seek_right):
    spec = lift_to_qtm(seek_right)
    state, _ = evolve(spec, parse_input("0000", spec), 10_000)
    drift = abs(state.norm2() - 1.0)
    ok = drift <= 1e-8
    assert _report(
        6, f"lifted machine norm drift after 10^4 steps is {drift:.2e}", ok
    )


def test_criterion_7_lift_fidelity():
    ok = True
    for name in CLASSICAL_NAMES:
        tm = load_tm(name)
        spec = lift_to_qtm(tm)
        for text in CORPUS_INPUTS[name]:
            classical = run_classical(tm, text, budget=100)
            dist = run_schedule(
                spec, parse_input(text, spec), EveryStep(), classical.steps
            )
            expected = HaltOutcome(classical.steps, classical.tape)
            point_mass = dist.probability(expected)
            if not classical.halted or abs(point_mass - 1.0) > 1e-9:
                ok = False
    assert _report(
        7, "lifted machines halt on the classical tape with probability 1", ok
    )


def test_criterion_8_two_halting_times_window(seek_right):
    spec = lift_to_qtm(seek_right)
    report = superposition_window(spec, "0", "0000", 8)
    lo, hi = report.window if report.window else (0, -1)
    ok = (
        report.window is not None
        and report.halt_step_a is not None
        and report.halt_step_b is not None
        and report.halt_step_a <= lo <= hi < report.halt_step_b
        and all(abs(m - 0.5) <= 1e-9 for m in report.window_masses)
        and len(report.window_masses) == hi - lo + 1
    )
    assert _report(
        8, "superposed halting times hold the halt flag at mass 1/2 in between", ok
    )


def test_criterion_9_subspace_matches_projection_oracle(gated_corpus):
    ok = True
    for name, spec, inputs in gated_corpus:
        inp = parse_input(inputs[0], spec)
        report = analyze_halting_subspace(spec, inp, 8)
        if report.halted_basis_count == 0 and not report.newly_halting:
            continue  # halts outside the window; nothing to compare
        _, _, gram, _, _, verdict = oracles.projection_subspace(spec, inp, 8)
        if report.gram_deviation > 1e-9 or report.verdict != verdict:
            ok = False
    assert _report(
        9, "halting subspace verdicts match the least-squares oracle", ok
    )


def test_criterion_10_sampler_consistency(hadamard_halt):
    inp = parse_input("0", hadamard_halt)
    report = sample_run(hadamard_halt, inp, EveryStep(), 5, seed=1, samples=10_000)
    empirical = {o: c / report.samples for o, c in report.counts}
    exact = dict(report.distribution.entries)
    keys = set(empirical) | set(exact)
    tv = 0.5 * sum(abs(empirical.get(k, 0.0) - exact.get(k, 0.0)) for k in keys)

    again = sample_run(hadamard_halt, inp, EveryStep(), 5, seed=1, samples=10_000)
    args = (
        "sample", "machines/hadamard_halt.qtm", "--input", "0",
        "--steps", "5", "--seed", "1", "--samples", "10000",
    )
    byte_identical = _cli(*args).stdout == _cli(*args).stdout
    ok = tv < 0.05 and report == again and byte_identical
    assert _report(
        10, f"10k seeded samples track the exact law (tv {tv:.4f}), reproducibly", ok
    )
