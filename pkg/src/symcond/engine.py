"""Instrument action, outcome probabilities, and conditional values.

The central objects are the outcome-conditioned expectation values of a
system observable taken after the measurement interaction,

    after(x)  = tr[(O ⊗ P^x) U (ρ ⊗ ϱ) U†] / p(x),

and assigned retrodictively to the pre-measurement state,

    before(x) = Re tr[M(x) O ρ] / p(x),

the generalized weak value. ``before`` is computable through two
independent routes (the induced POVM, or the instrument applied to the
symmetrized operand (Oρ + ρO)/2) which must agree; both are exposed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import kron, partial_trace
from .objects import (
    DensityState,
    EffectSet,
    MeasurementModel,
    ObservableOp,
    born_probability,
)

# Conditional values are undefined at p(x) = 0; probabilities at or below
# this floor raise ZeroProbabilityOutcome instead of returning junk.
P_FLOOR = 1e-12


class ZeroProbabilityOutcome(ValueError):
    """Raised when a conditional value is requested at p(x) ≤ P_FLOOR."""


@dataclass(frozen=True)
class ConditionalReport:
    """Before/after conditional values for one outcome."""

    outcome: str
    probability: float
    before: float
    after: float
    delta: float


def apply_instrument(
    model: MeasurementModel, operand: np.ndarray, outcome: str
) -> np.ndarray:
    """Unnormalized outcome branch tr_A[(1 ⊗ P^x) U (operand ⊗ ϱ) U†].

    Linear in ``operand``, which need not be Hermitian; the weak-value
    route feeds it Oρ.
    """
    proj = kron(np.eye(model.dim_s), model.pointer.projector(outcome))
    joint = model.unitary @ kron(operand, model.apparatus_state.matrix) @ model.unitary.conj().T
    return partial_trace(proj @ joint, model.dim_s, model.dim_a, over="apparatus")


def outcome_probability(model: MeasurementModel, state: DensityState, outcome: str) -> float:
    """p(x) as the trace of the instrument branch, clamped to [0, 1]."""
    p = float(np.trace(apply_instrument(model, state.matrix, outcome)).real)
    return min(max(p, 0.0), 1.0)


def _checked_probability(p: float, outcome: str) -> float:
    if p <= P_FLOOR:
        raise ZeroProbabilityOutcome(
            f"outcome {outcome!r} has probability {p:.3e} <= {P_FLOOR:.0e}"
        )
    return p


def conditional_after(
    model: MeasurementModel,
    state: DensityState,
    observable: ObservableOp,
    outcome: str,
) -> float:
    """Expectation of the observable in the normalized post-outcome state."""
    branch = apply_instrument(model, state.matrix, outcome)
    p = _checked_probability(float(np.trace(branch).real), outcome)
    return float(np.trace(observable.matrix @ branch).real) / p


def conditional_before(
    source: MeasurementModel | EffectSet,
    state: DensityState,
    observable: ObservableOp,
    outcome: str,
) -> float:
    """Generalized weak value Re tr[M(x)Oρ]/p(x) of the pre-measurement state.

    Accepts either an ``EffectSet`` (POVM route, the formula above) or a
    ``MeasurementModel`` (model route: the instrument applied to the
    symmetrized operand (Oρ + ρO)/2). The two routes agree identically in
    exact arithmetic; keeping both makes each an oracle for the other.
    """
    rho = state.matrix
    obs = observable.matrix
    if isinstance(source, EffectSet):
        m = source.effect(outcome)
        p = _checked_probability(born_probability(state, m), outcome)
        return float(np.trace(m @ obs @ rho).real) / p
    sym = (obs @ rho + rho @ obs) / 2
    p = _checked_probability(outcome_probability(source, state, outcome), outcome)
    return float(np.trace(apply_instrument(source, sym, outcome)).real) / p


def weak_value(
    source: MeasurementModel | EffectSet,
    state: DensityState,
    observable: ObservableOp,
    outcome: str,
) -> complex:
    """Full complex weak value tr[M(x)Oρ]/p(x).

    ``conditional_before`` is the real part; the imaginary part is exposed
    here purely as a diagnostic and never enters any conditional change.
    """
    op_rho = observable.matrix @ state.matrix
    if isinstance(source, EffectSet):
        m = source.effect(outcome)
        p = _checked_probability(born_probability(state, m), outcome)
        return complex(np.trace(m @ op_rho)) / p
    p = _checked_probability(outcome_probability(source, state, outcome), outcome)
    return complex(np.trace(apply_instrument(source, op_rho, outcome))) / p


def conditional_change(
    model: MeasurementModel,
    state: DensityState,
    observable: ObservableOp,
    outcome: str,
) -> ConditionalReport:
    """Before/after/delta report for one outcome (delta = after − before)."""
    p = _checked_probability(outcome_probability(model, state, outcome), outcome)
    before = conditional_before(model, state, observable, outcome)
    after = conditional_after(model, state, observable, outcome)
    return ConditionalReport(
        outcome=outcome,
        probability=p,
        before=before,
        after=after,
        delta=after - before,
    )


def average_before(
    model: MeasurementModel, state: DensityState, observable: ObservableOp
) -> float:
    """Σ_x p(x)·before(x); equals tr[Oρ]. Zero-probability outcomes add 0."""
    total = 0.0
    for outcome in model.outcomes:
        p = outcome_probability(model, state, outcome)
        if p <= P_FLOOR:
            continue
        total += p * conditional_before(model, state, observable, outcome)
    return total


def average_after(
    model: MeasurementModel, state: DensityState, observable: ObservableOp
) -> float:
    """Σ_x p(x)·after(x); equals the post-interaction expectation
    tr[(O ⊗ 1) U (ρ ⊗ ϱ) U†]. Zero-probability outcomes add 0."""
    total = 0.0
    for outcome in model.outcomes:
        p = outcome_probability(model, state, outcome)
        if p <= P_FLOOR:
            continue
        total += p * conditional_after(model, state, observable, outcome)
    return total
