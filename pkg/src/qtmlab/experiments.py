"""Two numerical experiments on the halting scheme.

``superposition_window`` runs an equal superposition of two classical
inputs and reports the range of steps during which the halt flag carries
strictly intermediate mass: the window where one branch has halted and the
other has not, so observing the flag is genuinely probabilistic and the
"time of halting" is not a classical quantity.

``analyze_halting_subspace`` inspects how freshly halting amplitude relates
to the drift of amplitude that halted earlier.  It collects the halted
basis configurations seen over a run, checks that their one-step images
stay orthonormal, and measures whether the halted component produced by a
running configuration lies inside the span of those images.  A nonzero
residual means the halt projection keeps extracting amplitude that no
bookkeeping of previously halted branches accounts for.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .evolution import states_through, step
from .machine import (
    Configuration,
    DEFAULT_TOL,
    InputSpec,
    MachineSpec,
    QuantumState,
    initial_state,
    validate_input,
)
from .wellformed import basis_image


@dataclass(frozen=True)
class SuperpositionReport:
    input_a: str
    input_b: str
    budget: int
    per_step: tuple[float, ...]  # halted mass after 0..budget steps
    window: tuple[int, int] | None
    window_masses: tuple[float, ...]
    halt_step_a: int | None
    halt_step_b: int | None


def _halt_step(spec: MachineSpec, text: str, budget: int, tol: float):
    """First step at which a single input's halted mass reaches one."""
    state = initial_state(spec, InputSpec(((complex(1), text),)))
    for t in range(budget + 1):
        if t:
            state = step(spec, state)
        nu = state.norm2()
        if nu > 0.0 and state.halted_mass() / nu >= 1.0 - tol:
            return t
    return None


def superposition_window(
    spec: MachineSpec,
    input_a: str,
    input_b: str,
    budget: int,
    tol: float = DEFAULT_TOL,
) -> SuperpositionReport:
    if budget < 0:
        raise ValueError("budget must be non-negative")
    if input_a == input_b:
        inp = InputSpec(((complex(1), input_a),))
    else:
        r = complex(1.0 / math.sqrt(2.0))
        inp = InputSpec(((r, input_a), (r, input_b)))
    validate_input(spec, inp)
    state = initial_state(spec, inp)
    masses = [state.halted_mass()]
    for _ in range(budget):
        state = step(spec, state)
        nu = state.norm2()
        masses.append(state.halted_mass() / nu if nu > 0.0 else 0.0)
    ambiguous = [
        t for t, m in enumerate(masses) if tol < m < 1.0 - tol
    ]
    window = (ambiguous[0], ambiguous[-1]) if ambiguous else None
    window_masses = (
        tuple(masses[t] for t in range(window[0], window[1] + 1))
        if window
        else ()
    )
    return SuperpositionReport(
        input_a,
        input_b,
        budget,
        tuple(masses),
        window,
        window_masses,
        _halt_step(spec, input_a, budget, tol),
        _halt_step(spec, input_b, budget, tol),
    )


# ---------------------------------------------------------------------------
# halting-subspace analysis

@dataclass(frozen=True)
class SubspaceReport:
    steps: int
    halted_basis_count: int
    newly_halting: tuple[Configuration, ...]
    gram_deviation: float
    max_overlap: float
    max_residual: float
    verdict: str  # "gap_found" | "no_gap_found" | "no_halting_observed"


def _combine(parts) -> QuantumState:
    """Linear combination of states given as (coefficient, state) pairs."""
    amps: dict = {}
    for coeff, vec in parts:
        for cfg, amp in vec.items():
            amps[cfg] = amps.get(cfg, 0j) + coeff * amp
    return QuantumState({c: a for c, a in amps.items() if a != 0})


def analyze_halting_subspace(
    spec: MachineSpec,
    inp: InputSpec,
    steps: int,
    tol: float = DEFAULT_TOL,
) -> SubspaceReport:
    if steps < 0:
        raise ValueError("steps must be non-negative")
    trajectory = states_through(spec, inp, steps)

    halted_basis: set = set()
    for state in trajectory:
        for cfg in state.configurations():
            if cfg.halted:
                halted_basis.add(cfg)
    halted_sorted = sorted(halted_basis, key=lambda c: c.sort_key())

    running: set = set()
    for state in trajectory[:-1]:
        for cfg in state.configurations():
            if not cfg.halted:
                running.add(cfg)
    running_sorted = sorted(running, key=lambda c: c.sort_key())

    images = [basis_image(spec, h) for h in halted_sorted]
    gram_deviation = 0.0
    for i, u in enumerate(images):
        for j, v in enumerate(images):
            expected = 1.0 if i == j else 0.0
            gram_deviation = max(
                gram_deviation, abs(u.inner(v) - expected)
            )

    # orthonormalize the drift images to measure residuals against their span
    ortho: list[QuantumState] = []
    for v in images:
        w = v
        for e in ortho:
            c = e.inner(w)
            if c != 0:
                w = _combine(((complex(1), w), (-c, e)))
        if w.norm2() > tol * tol:
            ortho.append(w.renormalized())

    newly = []
    max_overlap = 0.0
    max_residual = 0.0
    for cfg in running_sorted:
        halted_part = basis_image(spec, cfg).component(True)
        mass = halted_part.norm2()
        if math.sqrt(mass) <= tol:
            continue
        newly.append(cfg)
        for u in images:
            max_overlap = max(max_overlap, abs(u.inner(halted_part)))
        residual_sq = mass - sum(
            abs(e.inner(halted_part)) ** 2 for e in ortho
        )
        max_residual = max(max_residual, math.sqrt(max(residual_sq, 0.0)))

    if not halted_sorted and not newly:
        verdict = "no_halting_observed"
    elif max_residual > tol:
        verdict = "gap_found"
    else:
        verdict = "no_gap_found"
    return SubspaceReport(
        steps,
        len(halted_sorted),
        tuple(newly),
        gram_deviation,
        max_overlap,
        max_residual,
        verdict,
    )
