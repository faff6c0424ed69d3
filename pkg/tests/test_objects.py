"""Tests for state, observable, pointer, and model containers."""

from __future__ import annotations

import numpy as np
import pytest
from numpy.testing import assert_allclose

from symcond import (
    DensityState,
    EffectSet,
    MeasurementModel,
    ObservableOp,
    PointerObservable,
    born_probability,
    build_fig1_model,
    induced_povm,
    validate,
)


def number_state(dim: int, k: int) -> DensityState:
    m = np.zeros((dim, dim), dtype=complex)
    m[k, k] = 1.0
    return DensityState(m)


def test_density_state_rejects_non_square():
    with pytest.raises(ValueError, match="square"):
        DensityState(np.zeros((2, 3), dtype=complex))


def test_validate_density_trace_deficit():
    v = validate(DensityState(np.diag([0.25, 0.25]).astype(complex)))
    assert v is not None
    assert v.invariant == "trace"
    assert v.residual == pytest.approx(0.5)


def test_validate_density_hermiticity():
    m = np.array([[0.5, 0.3], [0.0, 0.5]], dtype=complex)
    v = validate(DensityState(m))
    assert v is not None
    assert v.invariant == "hermiticity"


def test_validate_density_negativity():
    v = validate(DensityState(np.diag([1.5, -0.5]).astype(complex)))
    assert v is not None
    assert v.invariant == "psd"
    assert v.residual == pytest.approx(0.5)


def test_validate_observable():
    assert validate(ObservableOp(np.diag([-1.0, 1.0]))) is None
    bad = ObservableOp(np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex))
    v = validate(bad)
    assert v is not None
    assert v.invariant == "hermiticity"


def test_validate_pointer_idempotence():
    soft = PointerObservable(("a", "b"), (0.5 * np.eye(2), 0.5 * np.eye(2)))
    v = validate(soft)
    assert v is not None
    assert v.invariant == "idempotence"


def test_validate_pointer_orthogonality():
    p0 = np.diag([1.0, 0.0]).astype(complex)
    overlapping = PointerObservable(("a", "b"), (p0, p0))
    v = validate(overlapping)
    assert v is not None
    assert v.invariant == "orthogonality"


def test_validate_pointer_completeness():
    lone = PointerObservable(("a",), (np.diag([1.0, 0.0]).astype(complex),))
    v = validate(lone)
    assert v is not None
    assert v.invariant == "completeness"


def test_validate_model_flags_bad_apparatus_state():
    ptr = PointerObservable(
        ("-", "+"), (np.diag([1.0, 0.0]).astype(complex), np.diag([0.0, 1.0]).astype(complex))
    )
    bad = MeasurementModel(
        DensityState(np.diag([0.4, 0.4]).astype(complex)), np.eye(4, dtype=complex), ptr
    )
    v = validate(bad)
    assert v is not None
    assert v.invariant == "apparatus_state.trace"


def test_validate_model_flags_non_unitary():
    ptr = PointerObservable(
        ("-", "+"), (np.diag([1.0, 0.0]).astype(complex), np.diag([0.0, 1.0]).astype(complex))
    )
    bad = MeasurementModel(number_state(2, 0), 0.5 * np.eye(4, dtype=complex), ptr)
    v = validate(bad)
    assert v is not None
    assert v.invariant == "unitarity"


def test_validate_fig1_model_is_clean():
    setup = build_fig1_model()
    assert validate(setup.model) is None
    assert validate(setup.observable) is None
    assert validate(setup.system_state(0.7)) is None


def test_pointer_dimensions_and_lookup():
    ptr = PointerObservable(
        ("-", "+"),
        (np.diag([1.0, 0.0]).astype(complex), np.diag([0.0, 1.0]).astype(complex)),
        (-1.0, 1.0),
    )
    assert ptr.dim == 2
    assert_allclose(ptr.projector("+"), np.diag([0.0, 1.0]))
    with pytest.raises(KeyError, match="unknown outcome"):
        ptr.projector("sideways")


def test_pointer_as_operator():
    ptr = PointerObservable(
        ("-", "+"),
        (np.diag([1.0, 0.0]).astype(complex), np.diag([0.0, 1.0]).astype(complex)),
        (-1.0, 1.0),
    )
    assert_allclose(ptr.as_operator(), np.diag([-1.0, 1.0]))
    unlabeled = PointerObservable(
        ("-", "+"), (np.diag([1.0, 0.0]).astype(complex), np.diag([0.0, 1.0]).astype(complex))
    )
    with pytest.raises(ValueError, match="label-only"):
        unlabeled.as_operator()


def test_pointer_rejects_duplicate_labels():
    p0 = np.diag([1.0, 0.0]).astype(complex)
    p1 = np.diag([0.0, 1.0]).astype(complex)
    with pytest.raises(ValueError, match="duplicate"):
        PointerObservable(("x", "x"), (p0, p1))


def test_model_dimension_split():
    ptr = PointerObservable(
        ("-", "+"), (np.diag([1.0, 0.0]).astype(complex), np.diag([0.0, 1.0]).astype(complex))
    )
    m = MeasurementModel(number_state(2, 0), np.eye(6, dtype=complex), ptr)
    assert m.dim_s == 3
    assert m.dim_a == 2
    assert m.outcomes == ("-", "+")


def test_model_rejects_mismatched_pointer():
    ptr3 = PointerObservable(
        ("a", "b", "c"),
        tuple(np.diag([1.0 if i == k else 0.0 for i in range(3)]).astype(complex) for k in range(3)),
    )
    with pytest.raises(ValueError, match="pointer dimension"):
        MeasurementModel(number_state(2, 0), np.eye(4, dtype=complex), ptr3)


def test_born_probability_limits():
    plus = DensityState(np.full((2, 2), 0.5, dtype=complex))
    assert born_probability(number_state(2, 1), np.eye(2, dtype=complex)) == pytest.approx(1.0)
    assert born_probability(number_state(2, 1), np.diag([1.0, 0.0]).astype(complex)) == pytest.approx(0.0)
    assert born_probability(plus, np.diag([1.0, 0.0]).astype(complex)) == pytest.approx(0.5)


def test_induced_povm_identity_unitary_ignores_system():
    # With U = 1 the effect is tr[P xi] times the system identity.
    rng = np.random.default_rng(9)
    g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    xi = g @ g.conj().T
    xi /= np.trace(xi).real
    ptr = PointerObservable(
        ("-", "+"), (np.diag([1.0, 0.0]).astype(complex), np.diag([0.0, 1.0]).astype(complex))
    )
    model = MeasurementModel(DensityState(xi), np.eye(4, dtype=complex), ptr)
    effects = induced_povm(model)
    for label in ("-", "+"):
        weight = np.trace(ptr.projector(label) @ xi).real
        assert_allclose(effects.effect(label), weight * np.eye(2), atol=1e-12)


def test_induced_povm_fig1_values():
    # theta = pi/3 and a polar-angle pi/3 apparatus qubit give effects with
    # rational entries: diag(3/16, 15/16) plus a +-3i/16 off-diagonal pair.
    setup = build_fig1_model()
    effects = induced_povm(setup.model)
    want_plus = np.array([[3.0 / 16.0, -3j / 16.0], [3j / 16.0, 15.0 / 16.0]])
    assert_allclose(effects.effect("+"), want_plus, atol=1e-12)
    assert_allclose(effects.effect("-"), np.eye(2) - want_plus, atol=1e-12)


def test_induced_povm_reproduces_probabilities():
    from symcond.sampling import random_density, random_model

    rng = np.random.default_rng(2024)
    model = random_model(2, 3, rng)
    effects = induced_povm(model)
    from symcond.engine import outcome_probability

    for _ in range(20):
        rho = random_density(2, rng)
        for label in model.outcomes:
            p_model = outcome_probability(model, rho, label)
            p_povm = born_probability(rho, effects.effect(label))
            assert abs(p_model - p_povm) < 1e-10


def test_effect_set_lookup_errors():
    es = EffectSet(("a",), (np.eye(2, dtype=complex),))
    with pytest.raises(KeyError, match="unknown outcome"):
        es.effect("b")
