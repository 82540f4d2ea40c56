"""Deterministic Turing machines and their lift to quantum rule tables.

A classical machine with no rule for some (state, symbol) key is treated as
halting there: the effective rule is "enter the halt state, leave the
symbol, move right".  The lift materializes exactly that rule, so a
classical trajectory and the evolution of the lifted machine agree
configuration for configuration, including the rightward drift of halted
configurations.

Lifting assigns every effective rule amplitude 1.  The result preserves
norm automatically; it is an isometry on running configurations exactly
when the classical transition function is injective there, which
``check_reversible`` decides.  Collisions between a newly-halting image and
the drift of an already-halted configuration are inherent to the halting
scheme (see ``wellformed``) and are not counted against reversibility.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator

from .errors import NotReversibleError
from .machine import (
    BLANK,
    Configuration,
    MachineSpec,
    MOVE_DELTA,
    MOVES,
    RuleTarget,
    Tape,
)
from .wellformed import HEAD_POSITIONS, WINDOW, _canonical_pair, _cells


@dataclass(frozen=True)
class ClassicalTM:
    states: tuple[str, ...]
    initial: str
    halt: str
    alphabet: tuple[str, ...]
    rules: dict  # (state, symbol) -> (state, write, move)

    def config(self, state: str, tape: Tape, head: int) -> Configuration:
        return Configuration(state == self.halt, state, tape, head)

    def rule(self, state: str, symbol: str) -> tuple[str, str, str]:
        """Effective rule, with missing keys materialized as halting moves.

        Querying the halt state yields the drift rule (keep the symbol,
        move right), matching the lifted machine's behaviour.
        """
        got = self.rules.get((state, symbol))
        if got is None:
            return (self.halt, symbol, "R")
        return got


@dataclass(frozen=True, slots=True)
class ClassicalRun:
    halted: bool
    steps: int
    state: str
    tape: Tape
    head: int


@dataclass(frozen=True, slots=True)
class InjectivityWitness:
    """Two distinct running configurations sharing one successor."""

    c1: Configuration
    c2: Configuration
    image: Configuration


@dataclass(frozen=True)
class ReversibilityReport:
    reversible: bool
    witnesses: tuple[InjectivityWitness, ...]


def run_classical(tm: ClassicalTM, text: str, budget: int) -> ClassicalRun:
    """Run from head 0 on ``text`` until halting or exhausting ``budget``.

    Entering the halt state consumes the step that got there; the run stops
    at that point rather than drifting on.
    """
    if budget < 0:
        raise ValueError("budget must be non-negative")
    for ch in text:
        if ch not in tm.alphabet:
            raise ValueError(f"input symbol {ch!r} not in alphabet")
    cells = {i: ch for i, ch in enumerate(text) if ch != BLANK}
    state, head, steps = tm.initial, 0, 0
    while steps < budget and state != tm.halt:
        symbol = cells.get(head, BLANK)
        state, write, move = tm.rule(state, symbol)
        if write == BLANK:
            cells.pop(head, None)
        else:
            cells[head] = write
        head += MOVE_DELTA[move]
        steps += 1
    return ClassicalRun(state == tm.halt, steps, state, Tape(cells), head)


def classical_trajectory(
    tm: ClassicalTM, text: str, steps: int
) -> list[Configuration]:
    """Configurations S_0 .. S_steps, drifting right after halting."""
    cfg = tm.config(tm.initial, Tape.from_string(text), 0)
    out = [cfg]
    for _ in range(steps):
        cfg = _image(tm, cfg)
        out.append(cfg)
    return out


def _image(tm: ClassicalTM, cfg: Configuration) -> Configuration:
    state, write, move = tm.rule(cfg.state, cfg.tape.read(cfg.head))
    return Configuration(
        state == tm.halt,
        state,
        cfg.tape.write(cfg.head, write),
        cfg.head + MOVE_DELTA[move],
    )


def _running_keys(tm: ClassicalTM) -> list[tuple[str, str]]:
    return [
        (q, s) for q in tm.states if q != tm.halt for s in tm.alphabet
    ]


def _window_cfg(tm, state, cell_pairs, head) -> Configuration:
    return tm.config(state, Tape(_cells(cell_pairs)), head)


def _expand_same_head(tm, k1, k2) -> set:
    (q1, s1), (q2, s2) = k1, k2
    pairs = set()
    for x in HEAD_POSITIONS:
        rest = [c for c in WINDOW if c != x]
        for assign in product(tm.alphabet, repeat=len(rest)):
            base = list(zip(rest, assign))
            c1 = _window_cfg(tm, q1, base + [(x, s1)], x)
            c2 = _window_cfg(tm, q2, base + [(x, s2)], x)
            pairs.add(_canonical_pair(c1, c2))
    return pairs


def _expand_apart(tm, d, k1, a, k2, b) -> set:
    (q1, s1), (q2, s2) = k1, k2
    pairs = set()
    for x1 in range(-2, 3 - d):
        x2 = x1 + d
        rest = [c for c in WINDOW if c != x1 and c != x2]
        for assign in product(tm.alphabet, repeat=len(rest)):
            base = list(zip(rest, assign))
            c1 = _window_cfg(tm, q1, base + [(x1, s1), (x2, a)], x1)
            c2 = _window_cfg(tm, q2, base + [(x1, b), (x2, s2)], x2)
            pairs.add(_canonical_pair(c1, c2))
    return pairs


def check_reversible(tm: ClassicalTM) -> ReversibilityReport:
    """Decide injectivity of the effective transition on running
    configurations.

    Only pairs with both members running are considered: halted
    configurations drift injectively among themselves, and a running
    configuration colliding with a halted one is the unavoidable signature
    of the halting scheme, not of the machine under test.  The sweep runs
    over local rule patterns exactly as in ``wellformed``; witnesses are
    materialized for the failing patterns only.
    """
    keys = _running_keys(tm)
    effective = {k: tm.rule(*k) for k in keys}
    failing_pairs = set()
    for i in range(len(keys)):
        p1, w1, m1 = effective[keys[i]]
        for j in range(i + 1, len(keys)):
            if effective[keys[j]] == (p1, w1, m1):
                failing_pairs |= _expand_same_head(tm, keys[i], keys[j])
    for d in (1, 2):
        for k1 in keys:
            p1, w1, m1 = effective[k1]
            for k2 in keys:
                p2, w2, m2 = effective[k2]
                if (
                    p1 == p2
                    and MOVE_DELTA[m1] - MOVE_DELTA[m2] == d
                ):
                    # member 1 must see w2 at the far cell and member 2
                    # must see w1 under member 1's head
                    failing_pairs |= _expand_apart(tm, d, k1, w2, k2, w1)
    witnesses = tuple(
        InjectivityWitness(c1, c2, _image(tm, c1))
        for c1, c2 in sorted(
            failing_pairs, key=lambda p: (p[0].sort_key(), p[1].sort_key())
        )
    )
    return ReversibilityReport(not witnesses, witnesses)


def lift_to_qtm(tm: ClassicalTM) -> MachineSpec:
    """Total quantum rule table with every effective rule at amplitude 1.

    Raises ``NotReversibleError`` when the classical transition is not
    injective on running configurations; the error carries the witnesses.
    """
    report = check_reversible(tm)
    if not report.reversible:
        raise NotReversibleError(report.witnesses)
    rules = {}
    for q in tm.states:
        for s in tm.alphabet:
            if q == tm.halt:
                state, write, move = tm.halt, s, "R"
            else:
                state, write, move = tm.rule(q, s)
            rules[(q, s)] = (RuleTarget(complex(1), state, write, move),)
    return MachineSpec(
        states=tm.states,
        initial=tm.initial,
        halt=tm.halt,
        alphabet=tm.alphabet,
        rules=rules,
    )
