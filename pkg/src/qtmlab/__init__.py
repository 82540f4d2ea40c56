"""Quantum Turing machines with a halt-flag observable.

The package models machines whose configurations carry a halting flag
derived from the internal state, checks rule tables for the isometry
property, evolves superpositions, measures the halt flag under arbitrary
schedules, lifts reversible classical machines, and runs two experiments
probing what halting means for superposed inputs.
"""

__version__ = "0.1.0"

from .classical import (
    ClassicalRun,
    ClassicalTM,
    InjectivityWitness,
    ReversibilityReport,
    check_reversible,
    classical_trajectory,
    lift_to_qtm,
    run_classical,
)
from .errors import MissingRuleError, NotReversibleError, ParseError, QtmError
from .evolution import EvolutionTrace, TraceRow, evolve, states_through, step
from .experiments import (
    SubspaceReport,
    SuperpositionReport,
    analyze_halting_subspace,
    superposition_window,
)
from .machine import (
    BLANK,
    BY_CONSTRUCTION,
    DEFAULT_TOL,
    Configuration,
    InputSpec,
    MachineSpec,
    QuantumState,
    RuleTarget,
    StructureViolation,
    Tape,
    initial_state,
    validate_input,
    validate_structure,
)
from .measurement import (
    AtSteps,
    ComparisonReport,
    EndOnly,
    EveryStep,
    HaltOutcome,
    MeasurementRecord,
    OutputDistribution,
    SampleReport,
    UNHALTED,
    compare_schedules,
    measure_halt,
    parse_schedule,
    run_schedule,
    sample_run,
    total_variation,
)
from .parsing import (
    parse_amplitude,
    parse_classical,
    parse_input,
    parse_machine,
    render_amplitude,
    render_machine,
)
from .wellformed import (
    CollisionCandidatePair,
    CollisionWitness,
    WellformednessReport,
    basis_image,
    check_wellformed,
    collision_candidates,
    core_well_formed,
    pair_image_inner,
)

__all__ = [
    "AtSteps",
    "BLANK",
    "BY_CONSTRUCTION",
    "ClassicalRun",
    "ClassicalTM",
    "CollisionCandidatePair",
    "CollisionWitness",
    "ComparisonReport",
    "Configuration",
    "DEFAULT_TOL",
    "EndOnly",
    "EveryStep",
    "EvolutionTrace",
    "HaltOutcome",
    "InjectivityWitness",
    "InputSpec",
    "MachineSpec",
    "MeasurementRecord",
    "MissingRuleError",
    "NotReversibleError",
    "OutputDistribution",
    "ParseError",
    "QtmError",
    "QuantumState",
    "ReversibilityReport",
    "RuleTarget",
    "SampleReport",
    "StructureViolation",
    "SubspaceReport",
    "SuperpositionReport",
    "Tape",
    "TraceRow",
    "UNHALTED",
    "WellformednessReport",
    "analyze_halting_subspace",
    "basis_image",
    "check_reversible",
    "check_wellformed",
    "classical_trajectory",
    "collision_candidates",
    "compare_schedules",
    "core_well_formed",
    "evolve",
    "initial_state",
    "lift_to_qtm",
    "measure_halt",
    "pair_image_inner",
    "parse_amplitude",
    "parse_classical",
    "parse_input",
    "parse_machine",
    "parse_schedule",
    "render_amplitude",
    "render_machine",
    "run_classical",
    "run_schedule",
    "sample_run",
    "states_through",
    "step",
    "superposition_window",
    "total_variation",
    "validate_input",
    "validate_structure",
]
