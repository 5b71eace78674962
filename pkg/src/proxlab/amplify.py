"""Classical simulation of amplitude amplification over one-sided subroutines.

A base subroutine that rejects a bad input with probability p, when
amplified with m Grover-style iterations, rejects with probability
sin^2((2m+1) * arcsin(sqrt(p))).  The simulator samples verdicts from
this closed form and charges 2m+1 base invocations per amplified trial
(one state preparation plus forward/inverse applications per iteration).

Because the true rejection probability of the base routine is unknown a
priori (only a floor gamma_floor is promised), iteration counts are
drawn from a doubling schedule of stages; the top stage is sized to the
floor's resonant iteration count and repeated when the invocation
budget c_amp / sqrt(gamma_floor) allows.  The schedule is fitted so the
worst-case draw never exceeds that budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np


class ConfigurationError(ValueError):
    """Bad protocol parameters (not a protocol verdict)."""


def amplified_success(p, m):
    """Probability that an m-iteration amplified run flags a base event of probability p."""
    if not 0.0 <= p <= 1.0:
        raise ConfigurationError(f"probability {p} outside [0, 1]")
    if m < 0:
        raise ConfigurationError("iteration count must be nonnegative")
    theta = math.asin(math.sqrt(p))
    return math.sin((2 * m + 1) * theta) ** 2


def stage_average_success(p, cap):
    """Mean of amplified_success(p, m) over m uniform in [0, cap).

    Closed form: 1/2 - sin(4*cap*theta) / (4*cap*sin(2*theta)).
    """
    if cap < 1:
        raise ConfigurationError("stage cap must be >= 1")
    if p <= 0.0:
        return 0.0
    if p >= 1.0:
        return 1.0
    theta = math.asin(math.sqrt(p))
    s2 = math.sin(2 * theta)
    if abs(s2) < 1e-15:
        return p
    return 0.5 - math.sin(4 * cap * theta) / (4 * cap * s2)


def worst_case_invocations(caps):
    """Deterministic upper bound on total base invocations for a schedule."""
    return sum(2 * (c - 1) + 1 for c in caps)


def _geometric_caps(m_top):
    """Stage caps 1, 2, 4, ... truncated at m_top + 1."""
    caps = []
    s = 0
    while True:
        c = min(2 ** s, m_top + 1)
        caps.append(c)
        if c == m_top + 1:
            return caps
        s += 1


def build_schedule(gamma_floor, c_amp):
    """Stage caps (iteration count for stage s drawn uniformly from [0, caps[s])).

    Strongest schedule fitting the budget c_amp / sqrt(gamma_floor):
    geometric stages up to the floor's resonant iteration count, with the
    top stage doubled when it still fits, shrinking the top otherwise.
    """
    if gamma_floor <= 0 or gamma_floor > 1:
        raise ConfigurationError(f"gamma_floor {gamma_floor} outside (0, 1]")
    if c_amp < 1:
        raise ConfigurationError("c_amp must be >= 1")
    budget = c_amp / math.sqrt(gamma_floor)
    theta = math.asin(min(1.0, math.sqrt(gamma_floor)))
    m_top = max(0, math.ceil(math.pi / (4 * theta) - 0.5))
    m = m_top
    while m > 0:
        base = _geometric_caps(m)
        for caps in (base + [base[-1]], base):
            if worst_case_invocations(caps) <= budget:
                return caps
        m -= 1
    return [1]


def exact_reject_probability(p, caps):
    """Exact rejection probability of the full schedule on base rejection rate p."""
    keep = 1.0
    for c in caps:
        keep *= 1.0 - stage_average_success(p, c)
    return 1.0 - keep


@dataclass
class VerdictTrace:
    """Outcome of one verifier run, with exact accounting for replay."""

    accept: bool
    classical_queries: int
    modeled_quantum_queries: int
    proof_bits_consumed: int = 0
    seed: int = 0

    @property
    def verdict(self):
        return "accept" if self.accept else "reject"


@dataclass
class AmplifiedRoutine:
    """A one-sided base subroutine bundled with its amplification parameters.

    rejection_probability is the exact per-invocation rejection rate of
    the base routine on the bound instance (0 on yes-instances).  The
    optional run_base callable performs one genuine sampled execution,
    charging classical reads on whatever oracle it closes over; it
    realises the post-measurement verification run.
    """

    rejection_probability: float
    gamma_floor: float
    cost_multiplier: float = 1.0
    run_base: Optional[Callable[[np.random.Generator], bool]] = None
    c_amp: float = 5.0
    schedule: list = field(default_factory=list)

    def __post_init__(self):
        if self.gamma_floor <= 0:
            raise ConfigurationError("gamma_floor must be positive")
        if not 0.0 <= self.rejection_probability <= 1.0:
            raise ConfigurationError("rejection probability outside [0, 1]")
        if not self.schedule:
            self.schedule = build_schedule(self.gamma_floor, self.c_amp)


def run_amplified(routine, rng, oracle=None, execute_final=True):
    """Run the full amplification schedule; reject if any stage flags.

    The schedule is executed in full regardless of intermediate outcomes
    (the circuit layout cannot depend on the input), so the modeled query
    charge depends only on the drawn iteration counts.
    """
    p = routine.rejection_probability
    total_invocations = 0
    rejected = False
    for cap in routine.schedule:
        m = int(rng.integers(cap))
        total_invocations += 2 * m + 1
        if rng.random() < amplified_success(p, m):
            rejected = True
    budget = routine.c_amp / math.sqrt(routine.gamma_floor)
    assert total_invocations <= budget + 1e-9, "schedule exceeded invocation budget"
    modeled = int(math.ceil(total_invocations * routine.cost_multiplier))
    classical = 0
    if oracle is not None:
        oracle.charge_modeled(modeled)
        before = oracle.query_count
        if execute_final and routine.run_base is not None:
            routine.run_base(rng)
        classical = oracle.query_count - before
    elif execute_final and routine.run_base is not None:
        routine.run_base(rng)
    return VerdictTrace(
        accept=not rejected,
        classical_queries=classical,
        modeled_quantum_queries=modeled,
    )
