"""Tests for the JSON scenario loader."""

from __future__ import annotations

import json

import numpy as np
import pytest
from numpy.testing import assert_allclose

from symcond import (
    InvariantViolation,
    Scenario,
    ScenarioError,
    fig1_scenario_path,
    load_scenario,
    parse_scenario,
)
from symcond.engine import conditional_change, outcome_probability
from symcond.scenario import matrix_to_pairs, parse_complex_matrix


def fig1_doc() -> dict:
    return json.loads(fig1_scenario_path().read_text())


def test_bundled_scenario_parses():
    sc = load_scenario(fig1_scenario_path())
    assert isinstance(sc, Scenario)
    assert sc.model.dim_s == 2
    assert sc.model.dim_a == 2
    assert sc.model.outcomes == ("+", "-")
    assert sc.conserved is not None
    assert sc.sweepable
    assert sc.sweep is not None
    assert sc.sweep.steps == 201
    assert sc.tolerance == pytest.approx(1e-9)


def test_bundled_scenario_state_family():
    sc = load_scenario(fig1_scenario_path())
    rho0 = sc.system_state(0.0)
    assert rho0.matrix[1, 1].real == pytest.approx(np.cos(np.pi / 8) ** 2)
    rho_pi = sc.system_state(np.pi)
    assert_allclose(rho_pi.matrix[0, 1], -rho0.matrix[0, 1], atol=1e-12)


def test_parse_complex_matrix_roundtrip():
    m = np.array([[0.5, 0.25 - 0.1j], [0.25 + 0.1j, 0.5]], dtype=complex)
    again = parse_complex_matrix(matrix_to_pairs(m), "x")
    assert_allclose(again, m, atol=0)


def test_parse_complex_matrix_error_paths():
    with pytest.raises(ScenarioError) as err:
        parse_complex_matrix([[[0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]], "m")
    assert err.value.path == "m[1]"
    with pytest.raises(ScenarioError) as err:
        parse_complex_matrix([[[0.0, 0.0], [1.0]]], "m")
    assert err.value.path == "m[0][1]"


def test_malformed_json_is_a_scenario_error():
    with pytest.raises(ScenarioError) as err:
        parse_scenario("{not json", source="inline")
    assert err.value.path == "$"


def test_missing_field_reports_its_path():
    doc = fig1_doc()
    del doc["model"]["theta"]
    with pytest.raises(ScenarioError) as err:
        parse_scenario(json.dumps(doc))
    assert err.value.path == "model.theta"


def test_unknown_model_kind():
    doc = fig1_doc()
    doc["model"]["kind"] = "dephasing"
    with pytest.raises(ScenarioError) as err:
        parse_scenario(json.dumps(doc))
    assert err.value.path == "model.kind"


def test_unknown_named_observable():
    doc = fig1_doc()
    doc["observable"] = "sigma_w"
    with pytest.raises(ScenarioError):
        parse_scenario(json.dumps(doc))


def test_trace_violation_is_flagged_by_object():
    doc = fig1_doc()
    doc["system_state"] = {"matrix": matrix_to_pairs(np.diag([0.45, 0.45]).astype(complex))}
    with pytest.raises(InvariantViolation) as err:
        parse_scenario(json.dumps(doc))
    assert err.value.object_name == "system_state"
    assert err.value.violation.invariant == "trace"


def test_explicit_model_roundtrip():
    # A hand-assembled swap-style model goes through the explicit path and
    # produces the same numbers as direct construction.
    u = np.eye(4, dtype=complex)
    xi = np.diag([0.3, 0.7]).astype(complex)
    doc = {
        "model": {
            "kind": "explicit",
            "unitary": matrix_to_pairs(u),
            "apparatus_state": {"matrix": matrix_to_pairs(xi)},
            "pointer": {
                "outcomes": ["-", "+"],
                "projectors": [
                    matrix_to_pairs(np.diag([1.0, 0.0]).astype(complex)),
                    matrix_to_pairs(np.diag([0.0, 1.0]).astype(complex)),
                ],
                "values": [-1.0, 1.0],
            },
        },
        "system_state": {"matrix": matrix_to_pairs(np.diag([0.2, 0.8]).astype(complex))},
        "observable": {"matrix": matrix_to_pairs(np.diag([-1.0, 1.0]).astype(complex))},
    }
    sc = parse_scenario(json.dumps(doc))
    assert sc.conserved is None
    assert not sc.sweepable
    assert outcome_probability(sc.model, sc.system_state(), "+") == pytest.approx(0.7)
    rep = conditional_change(sc.model, sc.system_state(), sc.observable, "+")
    assert rep.delta == pytest.approx(0.0, abs=1e-12)


def test_explicit_model_non_unitary_is_invariant_violation():
    doc = {
        "model": {
            "kind": "explicit",
            "unitary": matrix_to_pairs(0.5 * np.eye(4, dtype=complex)),
            "apparatus_state": {"matrix": matrix_to_pairs(np.diag([0.3, 0.7]).astype(complex))},
            "pointer": {
                "outcomes": ["-", "+"],
                "projectors": [
                    matrix_to_pairs(np.diag([1.0, 0.0]).astype(complex)),
                    matrix_to_pairs(np.diag([0.0, 1.0]).astype(complex)),
                ],
            },
        },
        "system_state": {"matrix": matrix_to_pairs(np.diag([0.2, 0.8]).astype(complex))},
        "observable": "sigma_z",
    }
    with pytest.raises(InvariantViolation) as err:
        parse_scenario(json.dumps(doc))
    assert err.value.object_name == "model"
    assert err.value.violation.invariant == "unitarity"


def test_explicit_conserved_quantity():
    doc = fig1_doc()
    doc["conserved"] = {
        "system": matrix_to_pairs(np.diag([0.0, 1.0]).astype(complex)),
        "apparatus": matrix_to_pairs(np.diag([0.0, 1.0]).astype(complex)),
    }
    sc = parse_scenario(json.dumps(doc))
    assert sc.conserved is not None
    assert_allclose(sc.conserved.system_part.matrix, np.diag([0.0, 1.0]))


def test_conserved_dimension_mismatch():
    doc = fig1_doc()
    doc["conserved"] = {
        "system": matrix_to_pairs(np.diag([0.0, 1.0, 2.0]).astype(complex)),
        "apparatus": matrix_to_pairs(np.diag([0.0, 1.0]).astype(complex)),
    }
    with pytest.raises(ScenarioError) as err:
        parse_scenario(json.dumps(doc))
    assert err.value.path == "conserved.system"


def test_sweep_validation():
    doc = fig1_doc()
    doc["sweep"]["steps"] = 1
    with pytest.raises(ScenarioError) as err:
        parse_scenario(json.dumps(doc))
    assert err.value.path == "sweep.steps"
    doc = fig1_doc()
    doc["sweep"]["parameter"] = "theta"
    with pytest.raises(ScenarioError) as err:
        parse_scenario(json.dumps(doc))
    assert err.value.path == "sweep.parameter"


def test_coherent_system_state_needs_qubit():
    doc = fig1_doc()
    doc["model"]["dim_s"] = 3
    doc["observable"] = {"matrix": matrix_to_pairs(np.diag([0.0, 1.0, 2.0]).astype(complex))}
    with pytest.raises(ScenarioError) as err:
        parse_scenario(json.dumps(doc))
    assert err.value.path == "system_state"


def test_phase_override_requires_coherent_family():
    doc = fig1_doc()
    doc["system_state"] = {
        "matrix": matrix_to_pairs(np.diag([0.5, 0.5]).astype(complex))
    }
    del doc["sweep"]
    sc = parse_scenario(json.dumps(doc))
    assert not sc.sweepable
    with pytest.raises(ScenarioError):
        sc.system_state(0.3)


def test_load_scenario_missing_file(tmp_path):
    with pytest.raises(ScenarioError) as err:
        load_scenario(tmp_path / "absent.scenario")
    assert "cannot read" in str(err.value)
