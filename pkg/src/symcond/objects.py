"""Validated domain objects: states, observables, pointers, effects, models.

Constructors only enforce structural consistency (shapes, matching label
counts); the physics invariants are checked separately by :func:`validate`,
which reports the first violation instead of raising. That split lets the
command-line layer construct objects from untrusted input and turn reports
into clean exit codes, and lets tests build deliberately broken objects.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    PSD_TOL,
    as_matrix,
    dagger,
    ensure_hermitian,
    frob,
    kron,
    partial_trace,
    psd_sqrt,
)


@dataclass
class DensityState:
    """A density operator: Hermitian, positive semidefinite, unit trace."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        self.matrix = as_matrix(self.matrix)
        if self.matrix.shape[0] != self.matrix.shape[1]:
            raise ValueError(f"density matrix must be square, got {self.matrix.shape}")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass
class ObservableOp:
    """A self-adjoint operator (observable or conserved-quantity part)."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        self.matrix = as_matrix(self.matrix)
        if self.matrix.shape[0] != self.matrix.shape[1]:
            raise ValueError(f"observable must be square, got {self.matrix.shape}")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass
class PointerObservable:
    """Projective pointer readout: outcome labels with orthogonal projectors.

    Outcome labels are opaque strings. ``values`` optionally attaches a real
    eigenvalue to each outcome; it is only needed where the pointer enters a
    formula as an operator (e.g. commutator checks), in which case
    :meth:`as_operator` assembles Σ_x x·P^x.
    """

    outcomes: tuple[str, ...]
    projectors: tuple[np.ndarray, ...]
    values: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        self.outcomes = tuple(str(x) for x in self.outcomes)
        self.projectors = tuple(as_matrix(p) for p in self.projectors)
        if len(self.outcomes) != len(self.projectors):
            raise ValueError(
                f"{len(self.outcomes)} outcome labels for {len(self.projectors)} projectors"
            )
        if len(set(self.outcomes)) != len(self.outcomes):
            raise ValueError(f"duplicate outcome labels in {self.outcomes}")
        dims = {p.shape for p in self.projectors}
        if len(dims) != 1 or any(s[0] != s[1] for s in dims):
            raise ValueError(f"projectors must share one square shape, got {dims}")
        if self.values is not None:
            self.values = tuple(float(v) for v in self.values)
            if len(self.values) != len(self.outcomes):
                raise ValueError("values length does not match outcomes")

    @property
    def dim(self) -> int:
        return self.projectors[0].shape[0]

    def projector(self, outcome: str) -> np.ndarray:
        try:
            return self.projectors[self.outcomes.index(outcome)]
        except ValueError:
            raise KeyError(f"unknown outcome label {outcome!r}; have {self.outcomes}") from None

    def as_operator(self) -> np.ndarray:
        """Assemble Σ_x x·P^x; requires outcome values."""
        if self.values is None:
            raise ValueError("pointer has label-only outcomes, no eigenvalues attached")
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for val, proj in zip(self.values, self.projectors):
            out += val * proj
        return out


@dataclass
class EffectSet:
    """A discrete POVM: PSD effects summing to the identity."""

    outcomes: tuple[str, ...]
    effects: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        self.outcomes = tuple(str(x) for x in self.outcomes)
        self.effects = tuple(as_matrix(m) for m in self.effects)
        if len(self.outcomes) != len(self.effects):
            raise ValueError(
                f"{len(self.outcomes)} outcome labels for {len(self.effects)} effects"
            )
        if len(set(self.outcomes)) != len(self.outcomes):
            raise ValueError(f"duplicate outcome labels in {self.outcomes}")

    @property
    def dim(self) -> int:
        return self.effects[0].shape[0]

    def effect(self, outcome: str) -> np.ndarray:
        try:
            return self.effects[self.outcomes.index(outcome)]
        except ValueError:
            raise KeyError(f"unknown outcome label {outcome!r}; have {self.outcomes}") from None


@dataclass
class MeasurementModel:
    """Apparatus state + premeasurement unitary + pointer readout.

    The apparatus dimension comes from the apparatus state; the system
    dimension is what remains of the unitary's size after dividing it out.
    """

    apparatus_state: DensityState
    unitary: np.ndarray
    pointer: PointerObservable
    dim_s: int = field(init=False)
    dim_a: int = field(init=False)

    def __post_init__(self) -> None:
        self.unitary = as_matrix(self.unitary)
        n = self.unitary.shape[0]
        if self.unitary.shape[0] != self.unitary.shape[1]:
            raise ValueError(f"unitary must be square, got {self.unitary.shape}")
        self.dim_a = self.apparatus_state.dim
        if n % self.dim_a != 0:
            raise ValueError(
                f"unitary size {n} is not a multiple of apparatus dimension {self.dim_a}"
            )
        self.dim_s = n // self.dim_a
        if self.pointer.dim != self.dim_a:
            raise ValueError(
                f"pointer dimension {self.pointer.dim} does not match apparatus "
                f"dimension {self.dim_a}"
            )

    @property
    def outcomes(self) -> tuple[str, ...]:
        return self.pointer.outcomes


@dataclass(frozen=True)
class Violation:
    """First failed invariant of an object, with the measured residual."""

    invariant: str
    residual: float

    def __str__(self) -> str:
        return f"invariant {self.invariant!r} violated (residual {self.residual:.3e})"


def _check_projector_family(
    pointer: PointerObservable, tol: float
) -> Violation | None:
    eye = np.eye(pointer.dim)
    for p in pointer.projectors:
        r = frob(p - dagger(p))
        if r > tol:
            return Violation("hermiticity", r)
    for p in pointer.projectors:
        r = frob(p @ p - p)
        if r > tol:
            return Violation("idempotence", r)
    for i, p in enumerate(pointer.projectors):
        for q in pointer.projectors[i + 1 :]:
            r = frob(p @ q)
            if r > tol:
                return Violation("orthogonality", r)
    r = frob(sum(pointer.projectors) - eye)
    if r > tol:
        return Violation("completeness", r)
    return None


def validate(obj, tol: float = DEFAULT_TOL) -> Violation | None:
    """Report the first violated invariant of a domain object, or None.

    PSD checks use the dedicated ``PSD_TOL`` clamp threshold rather than
    ``tol``, matching how negative round-off eigenvalues are treated
    everywhere else in the package.
    """
    if isinstance(obj, DensityState):
        m = obj.matrix
        r = frob(m - dagger(m))
        if r > tol:
            return Violation("hermiticity", r)
        wmin = float(np.linalg.eigvalsh((m + dagger(m)) / 2).min())
        if wmin < -PSD_TOL:
            return Violation("psd", -wmin)
        r = abs(float(np.trace(m).real) - 1.0)
        if r > tol:
            return Violation("trace", r)
        return None
    if isinstance(obj, ObservableOp):
        r = frob(obj.matrix - dagger(obj.matrix))
        if r > tol:
            return Violation("hermiticity", r)
        return None
    if isinstance(obj, PointerObservable):
        return _check_projector_family(obj, tol)
    if isinstance(obj, EffectSet):
        for m in obj.effects:
            r = frob(m - dagger(m))
            if r > tol:
                return Violation("hermiticity", r)
        for m in obj.effects:
            wmin = float(np.linalg.eigvalsh((m + dagger(m)) / 2).min())
            if wmin < -PSD_TOL:
                return Violation("psd", -wmin)
        r = frob(sum(obj.effects) - np.eye(obj.dim))
        if r > tol:
            return Violation("completeness", r)
        return None
    if isinstance(obj, MeasurementModel):
        inner = validate(obj.apparatus_state, tol)
        if inner is not None:
            return Violation(f"apparatus_state.{inner.invariant}", inner.residual)
        n = obj.unitary.shape[0]
        r = frob(dagger(obj.unitary) @ obj.unitary - np.eye(n))
        if r > tol:
            return Violation("unitarity", r)
        inner = validate(obj.pointer, tol)
        if inner is not None:
            return Violation(f"pointer.{inner.invariant}", inner.residual)
        return None
    raise TypeError(f"no invariants registered for {type(obj).__name__}")


def born_probability(state: DensityState, effect: np.ndarray) -> float:
    """Outcome probability tr[M(x)ρ], clamped to [0, 1]."""
    p = float(np.trace(as_matrix(effect) @ state.matrix).real)
    return min(max(p, 0.0), 1.0)


def induced_povm(model: MeasurementModel) -> EffectSet:
    """Effects of the POVM the measurement model implements on the system.

    Built through the apparatus-state square root,

        M(x) = tr_A[(1 ⊗ ϱ^{1/2}) U† (1 ⊗ P^x) U (1 ⊗ ϱ^{1/2})],

    which is Hermitian and PSD by construction. The set reproduces the
    model's outcome statistics: tr[M(x)ρ] equals the trace of the
    instrument output for every ρ.
    """
    eye_s = np.eye(model.dim_s)
    sandwich = kron(eye_s, psd_sqrt(model.apparatus_state.matrix))
    udag = dagger(model.unitary)
    effects = []
    for label in model.pointer.outcomes:
        big = sandwich @ udag @ kron(eye_s, model.pointer.projector(label)) @ model.unitary @ sandwich
        m = partial_trace(big, model.dim_s, model.dim_a, over="apparatus")
        effects.append(ensure_hermitian(m))
    return EffectSet(model.pointer.outcomes, tuple(effects))
