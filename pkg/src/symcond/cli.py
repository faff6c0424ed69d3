"""Command-line front end.

Subcommands: ``run`` (full report for one scenario), ``sweep`` (phase
sweep), ``fig1`` (the canonical qubit-qubit sweep to a CSV file),
``theorems`` (hypothesis/equality verdicts with assertion exit codes),
``selftest`` (seeded randomized property checks).

Exit codes: 0 ok, 2 parse/schema error, 3 invariant violation, 4 I/O
failure, 5 assertion failed. All numeric output uses 17 significant
digits and "\\n" line endings so identical inputs give byte-identical
output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from math import pi

import numpy as np

from . import __version__
from .engine import (
    P_FLOOR,
    ZeroProbabilityOutcome,
    average_after,
    average_before,
    conditional_before,
    conditional_change,
    outcome_probability,
    weak_value,
)
from .jaynes_cummings import build_fig1_model, jc_hamiltonian, jc_unitary_closed_form, JCModelSpec
from .linalg import frob, kron, unitary_from_generator
from .objects import (
    DensityState,
    ObservableOp,
    born_probability,
    induced_povm,
)
from .sampling import (
    random_density,
    random_diagonal_density,
    random_diagonal_observable,
    random_hermitian,
    random_model,
    random_number_conserving_model,
    random_observable,
)
from .scenario import (
    InvariantViolation,
    Scenario,
    ScenarioError,
    SweepSpec,
    load_scenario,
)
from .symmetry import (
    ConservedQuantity,
    blockwise_conditional_values,
    check_conservation,
    check_symmetric_product_state,
    check_yanase,
    decohere,
    verify_theorem1,
    verify_theorem2,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INVARIANT = 3
EXIT_IO = 4
EXIT_ASSERT = 5

SEED_ENV_VAR = "SYMCOND_SEED"
DEFAULT_SEED = 42


def fmt(x: float) -> str:
    """Fixed 17-significant-digit decimal formatting for reproducible files."""
    return format(float(x), ".17g")


@dataclass(frozen=True)
class SweepRecord:
    """One (phase, outcome) evaluation of the coherent/decohered contrast."""

    phi: float
    outcome: str
    probability: float
    delta_coherent: float
    delta_decohered: float
    difference: float


def sweep_records(
    model,
    observable: ObservableOp,
    conserved: ConservedQuantity,
    state_at,
    grid: np.ndarray,
) -> tuple[list[SweepRecord], list[str]]:
    """Evaluate the conditional-change contrast on a phase grid.

    For each grid point the system state and its decohered counterpart
    (pinched by the system part of the conserved quantity) are measured;
    ``difference`` is delta_coherent − delta_decohered. Rows are ordered
    by (grid index, outcome label). A zero-probability outcome at one
    point is recorded as an error string and does not abort the sweep.
    """
    records: list[SweepRecord] = []
    errors: list[str] = []
    for phi in grid:
        state = state_at(float(phi))
        state_dec = DensityState(decohere(state.matrix, conserved.system_part))
        for outcome in sorted(model.outcomes):
            try:
                rep = conditional_change(model, state, observable, outcome)
                rep_dec = conditional_change(model, state_dec, observable, outcome)
            except ZeroProbabilityOutcome as exc:
                errors.append(f"phi={fmt(phi)} outcome={outcome}: {exc}")
                continue
            records.append(
                SweepRecord(
                    phi=float(phi),
                    outcome=outcome,
                    probability=rep.probability,
                    delta_coherent=rep.delta,
                    delta_decohered=rep_dec.delta,
                    difference=rep.delta - rep_dec.delta,
                )
            )
    return records, errors


def sweep_phase(scenario: Scenario, grid: np.ndarray) -> tuple[list[SweepRecord], list[str]]:
    """Sweep a scenario's coherent system-state phase over a grid."""
    if scenario.conserved is None:
        raise ScenarioError("conserved", "phase sweeps need a conserved quantity for the decohered branch")
    return sweep_records(
        scenario.model, scenario.observable, scenario.conserved, scenario.system_state, grid
    )


def sweep_to_csv(records: list[SweepRecord], errors: list[str]) -> str:
    """Render sweep records as deterministic CSV with a gnuplot-style header."""
    buf = io.StringIO()
    buf.write("# conditional-change sweep: difference = delta_coherent - delta_decohered\n")
    buf.write("# columns: 1:phi(rad) 2:outcome 3:probability 4:delta_coherent 5:delta_decohered 6:difference\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["phi", "outcome", "probability", "delta_coherent", "delta_decohered", "difference"])
    for r in records:
        writer.writerow(
            [fmt(r.phi), r.outcome, fmt(r.probability), fmt(r.delta_coherent), fmt(r.delta_decohered), fmt(r.difference)]
        )
    for e in errors:
        buf.write(f"# error: {e}\n")
    return buf.getvalue()


def sweep_to_json(records: list[SweepRecord], errors: list[str]) -> str:
    payload = {
        "records": [
            {
                "phi": r.phi,
                "outcome": r.outcome,
                "probability": r.probability,
                "delta_coherent": r.delta_coherent,
                "delta_decohered": r.delta_decohered,
                "difference": r.difference,
            }
            for r in records
        ],
        "errors": errors,
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def verdict_to_dict(verdict) -> dict:
    return {
        "tolerance": verdict.tolerance,
        "hypotheses": {
            name: {"residual": residual, "held": held}
            for (name, residual), held in zip(
                verdict.hypotheses.items(), verdict.hypotheses_held.values()
            )
        },
        "equalities": {
            name: {
                "residual": residual,
                "held": verdict.equalities_held[name],
                "claimed": verdict.equality_claimed(name),
            }
            for name, residual in verdict.equalities.items()
        },
        "claimed_equalities_hold": verdict.claimed_equalities_hold,
    }


def run_report(scenario: Scenario, tol: float) -> dict:
    """Full structured report for one scenario at its own phase."""
    model, observable = scenario.model, scenario.observable
    state = scenario.system_state()
    outcomes = []
    for outcome in sorted(model.outcomes):
        p = outcome_probability(model, state, outcome)
        if p <= P_FLOOR:
            outcomes.append(
                {"outcome": outcome, "probability": p, "error": "zero-probability outcome"}
            )
            continue
        rep = conditional_change(model, state, observable, outcome)
        wv = weak_value(model, state, observable, outcome)
        outcomes.append(
            {
                "outcome": outcome,
                "probability": rep.probability,
                "before": rep.before,
                "after": rep.after,
                "delta": rep.delta,
                "weak_value_imag": wv.imag,
            }
        )
    report = {
        "scenario": scenario.source,
        "tolerance": tol,
        "validation": "ok",
        "outcomes": outcomes,
        "averages": {
            "before": average_before(model, state, observable),
            "after": average_after(model, state, observable),
        },
    }
    if scenario.conserved is not None:
        q = scenario.conserved
        checks = {
            "conservation": check_conservation(model, q),
            "yanase": check_yanase(model, q),
            "symmetric_product_state": check_symmetric_product_state(
                state, model.apparatus_state, q
            ),
        }
        report["checks"] = {
            name: {"residual": residual, "tolerance": tol, "held": residual < tol}
            for name, residual in checks.items()
        }
        report["theorems"] = {
            "theorem1": verdict_to_dict(verify_theorem1(model, state, observable, q, tol)),
            "theorem2": verdict_to_dict(verify_theorem2(model, state, observable, q, tol)),
        }
    return report


def run_report_csv(report: dict) -> str:
    """Flat CSV rendering of a run report (checks become comments)."""
    buf = io.StringIO()
    buf.write(f"# scenario: {report['scenario']}\n")
    buf.write(f"# tolerance: {fmt(report['tolerance'])}\n")
    for name, entry in report.get("checks", {}).items():
        buf.write(f"# check {name}: residual {fmt(entry['residual'])} held {entry['held']}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["outcome", "probability", "before", "after", "delta", "weak_value_imag"])
    for entry in report["outcomes"]:
        if "error" in entry:
            buf.write(f"# outcome {entry['outcome']}: {entry['error']} (p={fmt(entry['probability'])})\n")
            continue
        writer.writerow(
            [
                entry["outcome"],
                fmt(entry["probability"]),
                fmt(entry["before"]),
                fmt(entry["after"]),
                fmt(entry["delta"]),
                fmt(entry["weak_value_imag"]),
            ]
        )
    return buf.getvalue()


def _effective_tol(args, scenario: Scenario | None = None) -> float:
    if args.tol is not None:
        return args.tol
    if scenario is not None:
        return scenario.tolerance
    return 1e-9


def cmd_run(args) -> int:
    scenario = load_scenario(args.scenario)
    tol = _effective_tol(args, scenario)
    report = run_report(scenario, tol)
    if args.format == "csv":
        sys.stdout.write(run_report_csv(report))
    else:
        sys.stdout.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_sweep(args) -> int:
    scenario = load_scenario(args.scenario)
    base = scenario.sweep
    start = args.start if args.start is not None else (base.start if base else None)
    stop = args.stop if args.stop is not None else (base.stop if base else None)
    steps = args.steps if args.steps is not None else (base.steps if base else None)
    missing = [
        flag
        for flag, value in (("--from", start), ("--to", stop), ("--steps", steps))
        if value is None
    ]
    if missing:
        raise ScenarioError(
            "sweep", f"scenario declares no sweep and {', '.join(missing)} not given"
        )
    if steps < 2:
        raise ScenarioError("sweep.steps", f"need at least 2 grid points, got {steps}")
    grid = SweepSpec("phase", start, stop, steps).grid()
    records, errors = sweep_phase(scenario, grid)
    if args.format == "json":
        sys.stdout.write(sweep_to_json(records, errors))
    else:
        sys.stdout.write(sweep_to_csv(records, errors))
    return EXIT_OK


def cmd_fig1(args) -> int:
    setup = build_fig1_model()
    grid = np.linspace(0.0, 2 * pi, 201)
    records, errors = sweep_records(
        setup.model, setup.observable, setup.conserved, setup.system_state, grid
    )
    text = sweep_to_json(records, errors) if args.format == "json" else sweep_to_csv(records, errors)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    if not args.quiet:
        print(f"wrote {len(records)} records to {args.out}")
    return EXIT_OK


def cmd_theorems(args) -> int:
    scenario = load_scenario(args.scenario)
    if scenario.conserved is None:
        raise ScenarioError("conserved", "theorem checks need a conserved quantity")
    tol = _effective_tol(args, scenario)
    state = scenario.system_state()
    verdicts = {
        "theorem1": verify_theorem1(
            scenario.model, state, scenario.observable, scenario.conserved, tol
        ),
        "theorem2": verify_theorem2(
            scenario.model, state, scenario.observable, scenario.conserved, tol
        ),
    }
    if args.format == "json":
        payload = {name: verdict_to_dict(v) for name, v in verdicts.items()}
        sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    elif not args.quiet:
        for name, verdict in verdicts.items():
            for hyp, residual in verdict.hypotheses.items():
                state_word = "held" if verdict.hypotheses_held[hyp] else "broken"
                print(f"{name} hypothesis {hyp}: residual {residual:.3e} (tolerance {tol:.3e}, {state_word})")
            for eq, residual in verdict.equalities.items():
                claim_word = "claimed" if verdict.equality_claimed(eq) else "not claimed"
                state_word = "held" if verdict.equalities_held[eq] else "broken"
                print(f"{name} equality {eq}: residual {residual:.3e} (tolerance {tol:.3e}, {claim_word}, {state_word})")
            if verdict.all_hypotheses_hold:
                summary = "hypotheses satisfied; " + (
                    "equalities hold" if verdict.all_equalities_hold else "EQUALITY FAILED"
                )
            else:
                summary = "hypothesis not satisfied" + (
                    "" if verdict.claimed_equalities_hold else "; CLAIMED EQUALITY FAILED"
                )
            print(f"{name}: {summary}")

    if args.require is not None:
        required = verdicts[args.require]
        if not (required.all_hypotheses_hold and required.all_equalities_hold):
            if not args.quiet:
                print(f"required {args.require} does not hold", file=sys.stderr)
            return EXIT_ASSERT
        return EXIT_OK
    ok = all(v.claimed_equalities_hold for v in verdicts.values())
    return EXIT_OK if ok else EXIT_ASSERT


def selftest_checks(seed: int) -> list[tuple[str, float, float]]:
    """Seeded randomized property checks: (name, worst residual, threshold)."""
    rng = np.random.default_rng(seed)
    checks: list[tuple[str, float, float]] = []

    # Induced POVM reproduces instrument outcome statistics.
    worst = 0.0
    for _ in range(20):
        dims = rng.integers(2, 4, size=2)
        model = random_model(int(dims[0]), int(dims[1]), rng)
        effects = induced_povm(model)
        for _ in range(5):
            state = random_density(model.dim_s, rng)
            for outcome in model.outcomes:
                worst = max(
                    worst,
                    abs(
                        born_probability(state, effects.effect(outcome))
                        - outcome_probability(model, state, outcome)
                    ),
                )
    checks.append(("probability_reproducibility", worst, 1e-10))

    # Outcome-averaged before/after values match their closed forms.
    worst = 0.0
    for _ in range(20):
        dims = rng.integers(2, 4, size=2)
        model = random_model(int(dims[0]), int(dims[1]), rng)
        state = random_density(model.dim_s, rng)
        observable = random_observable(model.dim_s, rng)
        joint = kron(state.matrix, model.apparatus_state.matrix)
        evolved = model.unitary @ joint @ model.unitary.conj().T
        target_after = float(
            np.trace(kron(observable.matrix, np.eye(model.dim_a)) @ evolved).real
        )
        target_before = float(np.trace(observable.matrix @ state.matrix).real)
        worst = max(worst, abs(average_before(model, state, observable) - target_before))
        worst = max(worst, abs(average_after(model, state, observable) - target_after))
    checks.append(("average_identities", worst, 1e-9))

    # POVM route and model route of the weak value agree.
    worst = 0.0
    for _ in range(20):
        dims = rng.integers(2, 4, size=2)
        model = random_model(int(dims[0]), int(dims[1]), rng)
        effects = induced_povm(model)
        state = random_density(model.dim_s, rng)
        observable = random_observable(model.dim_s, rng)
        for outcome in model.outcomes:
            if outcome_probability(model, state, outcome) <= 1e-6:
                continue
            worst = max(
                worst,
                abs(
                    conditional_before(model, state, observable, outcome)
                    - conditional_before(effects, state, observable, outcome)
                ),
            )
    checks.append(("weak_value_dual_route", worst, 1e-9))

    # Both coherence-irrelevance branches on conserving random instances.
    worst = 0.0
    for _ in range(10):
        dims = rng.integers(2, 4, size=2)
        model, quantity = random_number_conserving_model(int(dims[0]), int(dims[1]), rng)
        observable = random_diagonal_observable(model.dim_s, rng)
        diag_state = random_diagonal_density(model.dim_s, rng)
        v = verify_theorem1(model, diag_state, observable, quantity)
        worst = max(worst, v.equalities["system_commutes_before"], v.equalities["system_commutes_after"])
        full_state = random_density(model.dim_s, rng)
        v = verify_theorem1(model, full_state, observable, quantity)
        worst = max(worst, v.equalities["ancilla_commutes_before"], v.equalities["ancilla_commutes_after"])
    checks.append(("theorem1_instances", worst, 1e-9))

    # Pinching algebra: idempotent, trace-preserving, L-compatible, fixed points.
    worst = 0.0
    for _ in range(20):
        dim = int(rng.integers(2, 7))
        l_op = ObservableOp(random_hermitian(dim, rng))
        a = random_density(dim, rng).matrix
        pinched = decohere(a, l_op)
        worst = max(worst, frob(decohere(pinched, l_op) - pinched))
        worst = max(worst, abs(np.trace(pinched).real - np.trace(a).real))
        worst = max(worst, frob(pinched @ l_op.matrix - l_op.matrix @ pinched))
        worst = max(worst, max(0.0, -float(np.linalg.eigvalsh(pinched).min())))
        commuting = l_op.matrix @ l_op.matrix
        worst = max(worst, frob(decohere(commuting, l_op) - commuting))
    checks.append(("decoherence_algebra", worst, 1e-10))

    # Blocked closed-form unitary against the spectral exponential.
    worst = 0.0
    for dim_a in range(2, 7):
        for _ in range(3):
            theta = float(rng.uniform(-2 * pi, 2 * pi))
            spec = JCModelSpec(dim_s=2, dim_a=dim_a, theta=theta)
            direct = jc_unitary_closed_form(spec)
            spectral = unitary_from_generator(jc_hamiltonian(2, dim_a).matrix, theta)
            worst = max(worst, frob(direct - spectral))
    checks.append(("closed_form_unitary", worst, 1e-10))

    # Blockwise sector path against the direct conditional values.
    worst = 0.0
    for _ in range(10):
        dims = rng.integers(2, 4, size=2)
        model, quantity = random_number_conserving_model(int(dims[0]), int(dims[1]), rng)
        observable = random_diagonal_observable(model.dim_s, rng)
        state = random_density(model.dim_s, rng)
        for outcome in model.outcomes:
            if outcome_probability(model, state, outcome) <= 1e-6:
                continue
            before_bw, after_bw = blockwise_conditional_values(
                model, state, observable, quantity, outcome
            )
            rep = conditional_change(model, state, observable, outcome)
            worst = max(worst, abs(before_bw - rep.before), abs(after_bw - rep.after))
    checks.append(("blockwise_crosspath", worst, 1e-9))

    return checks


def cmd_selftest(args) -> int:
    seed = int(os.environ.get(SEED_ENV_VAR, DEFAULT_SEED))
    failures = 0
    for name, residual, threshold in selftest_checks(seed):
        ok = residual < threshold
        failures += 0 if ok else 1
        if not args.quiet:
            word = "PASS" if ok else "FAIL"
            print(f"selftest {name}: {word} (max residual {residual:.3e}, threshold {threshold:.0e})")
    if not args.quiet:
        print(f"selftest seed {seed}: {'all checks passed' if failures == 0 else f'{failures} check(s) failed'}")
    return EXIT_OK if failures == 0 else EXIT_ASSERT


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--tol",
        type=float,
        default=None,
        help="comparison tolerance (default: the scenario's, else 1e-9)",
    )
    parser.add_argument(
        "--format",
        choices=("csv", "json"),
        default=None,
        help="output format (default: json for run/theorems, csv for sweep/fig1)",
    )
    parser.add_argument("--quiet", action="store_true", help="suppress informational output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="symcond",
        description="Outcome-conditioned expectation values under symmetry constraints.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("run", help="evaluate one scenario and emit a structured report")
    p.add_argument("scenario", help="path to a .scenario file")
    _add_common_flags(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="sweep the system-state phase over a grid")
    p.add_argument("scenario", help="path to a .scenario file")
    p.add_argument("--from", dest="start", type=float, default=None, help="grid start (radians)")
    p.add_argument("--to", dest="stop", type=float, default=None, help="grid end (radians)")
    p.add_argument("--steps", type=int, default=None, help="number of grid points")
    _add_common_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("fig1", help="write the canonical 201-point qubit-qubit sweep")
    p.add_argument("--out", required=True, help="output file path")
    _add_common_flags(p)
    p.set_defaults(func=cmd_fig1)

    p = sub.add_parser("theorems", help="verify the coherence-irrelevance theorems on a scenario")
    p.add_argument("scenario", help="path to a .scenario file")
    p.add_argument(
        "--require",
        choices=("theorem1", "theorem2"),
        default=None,
        help="exit 5 unless this theorem's hypotheses and equalities all hold",
    )
    _add_common_flags(p)
    p.set_defaults(func=cmd_theorems)

    p = sub.add_parser("selftest", help="run seeded randomized property checks")
    _add_common_flags(p)
    p.set_defaults(func=cmd_selftest)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InvariantViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
