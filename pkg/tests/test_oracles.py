"""Cross-checks between the library and the independent oracles.

The integer constants below were produced by the oracles in oracles.py and
confirmed against the library once; they are frozen here as regression
values.  A failure means one side drifted.
"""

import oracles
import pytest

from qtmlab import (
    analyze_halting_subspace,
    check_wellformed,
    core_well_formed,
    parse_input,
)

# Distinct unordered window pairs for two states over a three-symbol
# alphabet, after translation deduplication.
CANDIDATE_COUNT = 459999

# (total witnesses, witnesses between two running configurations)
WITNESS_COUNTS = {
    "hadamard_halt": (10692, 0),
    "hadamard_halt_naive": (10692, 2673),
    "right_shift": (0, 0),
}


def test_candidate_enumeration_matches_dense_oracle(hadamard_halt, candidate_pairs):
    got = {oracles.pair_key(p) for p in candidate_pairs}
    want = oracles.dense_candidate_keys(hadamard_halt)
    assert len(candidate_pairs) == len(got), "generator emitted a duplicate pair"
    assert got == want
    assert len(got) == CANDIDATE_COUNT


@pytest.mark.parametrize("name", sorted(WITNESS_COUNTS))
def test_checker_matches_brute_force_sweep(name, request, candidate_pairs):
    spec = request.getfixturevalue(name)
    report = check_wellformed(spec)
    brute = oracles.brute_force_witnesses(spec, candidate_pairs)

    got = {oracles.pair_key(w): w.inner for w in report.witnesses}
    assert set(got) == set(brute)
    assert all(abs(got[k] - brute[k]) <= 1e-12 for k in got)

    total, core = WITNESS_COUNTS[name]
    assert len(report.witnesses) == total
    assert len(report.core_witnesses) == core
    assert len(report.drift_witnesses) == total - core
    assert core_well_formed(report) == (core == 0)


def test_subspace_matches_projection_oracle(corpus, right_shift):
    cases = [(spec, inputs[0], 6) for _, spec, inputs in corpus]
    cases.append((right_shift, "0", 5))
    for spec, text, steps in cases:
        inp = parse_input(text, spec)
        report = analyze_halting_subspace(spec, inp, steps)
        count, newly, gram, overlap, residual, verdict = oracles.projection_subspace(
            spec, inp, steps
        )
        assert report.halted_basis_count == count
        assert set(report.newly_halting) == set(newly)
        assert report.gram_deviation == pytest.approx(gram, abs=1e-12)
        assert report.max_overlap == pytest.approx(overlap, abs=1e-9)
        assert report.max_residual == pytest.approx(residual, abs=1e-9)
        assert report.verdict == verdict
