"""Conservation-law checks, decoherence maps, and the theorem verifiers.

An additive conserved quantity is a pair (L_S, L_A) with the premeasurement
unitary commuting with L_S ⊗ 1 + 1 ⊗ L_A. Decohering a state with respect
to L means pinching it by the spectral projectors of L, which removes
coherence between distinct eigenvalue sectors.

The two verifiers measure (never assume) their hypotheses and report
residuals for every claimed equality, so a caller can tell "hypothesis
broken, nothing asserted" apart from "hypothesis held, equality failed".
A blockwise evaluation of the conditional values over total-eigenvalue
sectors is included as an independent cross-check path.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .engine import P_FLOOR, ZeroProbabilityOutcome, apply_instrument, conditional_after, conditional_before
from .linalg import (
    commutator,
    cluster_labels,
    cluster_tolerance,
    dagger,
    frob,
    hermitian_eig,
    kron,
    unitary_from_generator,
)
from .objects import DensityState, MeasurementModel, ObservableOp


@dataclass
class ConservedQuantity:
    """Additive pair (L_S, L_A) of self-adjoint system/apparatus parts."""

    system_part: ObservableOp
    apparatus_part: ObservableOp

    def total_operator(self) -> np.ndarray:
        """L_S ⊗ 1 + 1 ⊗ L_A on the product space."""
        ls, la = self.system_part.matrix, self.apparatus_part.matrix
        return kron(ls, np.eye(la.shape[0])) + kron(np.eye(ls.shape[0]), la)


def decohere(a: np.ndarray, l: ObservableOp | np.ndarray) -> np.ndarray:
    """Pinch ``a`` by the spectral projectors of ``l``: Σ_l Q^l a Q^l.

    Idempotent; the output commutes with ``l``; operators already
    commuting with ``l`` are fixed points.
    """
    lmat = l.matrix if isinstance(l, ObservableOp) else l
    dec = hermitian_eig(lmat)
    out = np.zeros_like(np.asarray(a, dtype=complex))
    for q in dec.projectors:
        out += q @ a @ q
    return out


def check_conservation(model: MeasurementModel, quantity: ConservedQuantity) -> float:
    """Residual ‖[U, L_S ⊗ 1 + 1 ⊗ L_A]‖_F of the additive conservation law."""
    total = quantity.total_operator()
    if total.shape != model.unitary.shape:
        raise ValueError(
            f"conserved quantity acts on dimension {total.shape[0]}, "
            f"model on {model.unitary.shape[0]}"
        )
    return frob(commutator(model.unitary, total))


def check_yanase(model: MeasurementModel, quantity: ConservedQuantity) -> float:
    """Residual of the pointer/conserved-quantity compatibility condition.

    With outcome values attached this is ‖[Z_A, L_A]‖_F for the assembled
    pointer operator; for label-only pointers every projector must commute
    with L_A individually, and the max residual is returned.
    """
    la = quantity.apparatus_part.matrix
    if model.pointer.values is not None:
        return frob(commutator(model.pointer.as_operator(), la))
    return max(frob(commutator(p, la)) for p in model.pointer.projectors)


def _pinned_eigenbasis(quantity: ConservedQuantity) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Deterministic product eigenbasis of (L_S, L_A), with eigenvalues.

    Within a degenerate eigenspace the basis is whatever ``eigh`` returns;
    that choice is stable across calls for identical input, which is what
    the symmetry notion below needs (it is basis-dependent inside
    degenerate sectors, so one convention is pinned and reused).
    """
    ws, vs = np.linalg.eigh(quantity.system_part.matrix)
    wa, va = np.linalg.eigh(quantity.apparatus_part.matrix)
    return ws, vs, wa, va


def check_symmetric_product_state(
    state_s: DensityState, state_a: DensityState, quantity: ConservedQuantity
) -> float:
    """Transpose-invariance residual of ρ ⊗ ϱ in the conserved eigenbasis.

    The product state is rotated into the pinned product eigenbasis of
    (L_S, L_A) and compared against its transpose there; for a Hermitian
    matrix this residual vanishes exactly when all entries are real.
    """
    _, vs, _, va = _pinned_eigenbasis(quantity)
    basis = kron(vs, va)
    x = dagger(basis) @ kron(state_s.matrix, state_a.matrix) @ basis
    return frob(x - x.T)


def check_cross_elements_imaginary(
    model: MeasurementModel, observable: ObservableOp, quantity: ConservedQuantity
) -> float:
    """Largest real part of a doubly-off-diagonal element of U†(O ⊗ P^x)U.

    Elements are taken in the pinned product eigenbasis between basis
    vectors whose L_S eigenvalues differ AND whose L_A eigenvalues differ;
    all outcomes are scanned and the overall max |Re| returned. (This is
    the second hypothesis of the four-way equality chain; it is checked
    per outcome because the source statement does not single one out.)
    """
    ws, vs, wa, va = _pinned_eigenbasis(quantity)
    ls_label = cluster_labels(ws, cluster_tolerance(ws))
    la_label = cluster_labels(wa, cluster_tolerance(wa))
    dim_a = len(wa)
    sys_of = np.repeat(ls_label, dim_a)
    app_of = np.tile(la_label, len(ws))
    mask = (sys_of[:, None] != sys_of[None, :]) & (app_of[:, None] != app_of[None, :])
    if not mask.any():
        return 0.0
    basis = kron(vs, va)
    eye_s = np.eye(model.dim_s)
    residual = 0.0
    for label in model.pointer.outcomes:
        op = kron(observable.matrix, model.pointer.projector(label))
        w = dagger(basis) @ dagger(model.unitary) @ op @ model.unitary @ basis
        residual = max(residual, float(np.abs(w.real[mask]).max()))
    return residual


@dataclass
class TheoremVerdict:
    """Measured hypothesis residuals and equality residuals, plus the
    tolerance they are judged against.

    A hypothesis or equality "holds" iff its residual is below the
    tolerance. ``requires`` records which hypotheses each equality is
    conditioned on; an equality is a *claim* only when those all hold
    (the theorems give sufficient conditions, so a broken hypothesis
    asserts nothing). Residuals are reported unconditionally either way.
    """

    hypotheses: dict[str, float]
    equalities: dict[str, float]
    tolerance: float
    requires: dict[str, tuple[str, ...]] = field(default_factory=dict)

    def _held(self, residuals: dict[str, float]) -> dict[str, bool]:
        return {name: r < self.tolerance for name, r in residuals.items()}

    @property
    def hypotheses_held(self) -> dict[str, bool]:
        return self._held(self.hypotheses)

    @property
    def equalities_held(self) -> dict[str, bool]:
        return self._held(self.equalities)

    @property
    def all_hypotheses_hold(self) -> bool:
        return all(self.hypotheses_held.values())

    @property
    def all_equalities_hold(self) -> bool:
        return all(self.equalities_held.values())

    def equality_claimed(self, name: str) -> bool:
        """Whether the named equality's required hypotheses all hold."""
        held = self.hypotheses_held
        return all(held[h] for h in self.requires.get(name, tuple(self.hypotheses)))

    @property
    def claimed_equalities_hold(self) -> bool:
        """True when every equality whose hypotheses hold also holds.

        Vacuously true when no equality is claimed.
        """
        held = self.equalities_held
        return all(held[name] for name in self.equalities if self.equality_claimed(name))


def _decohered_model(model: MeasurementModel, quantity: ConservedQuantity) -> MeasurementModel:
    """The same model with its apparatus state pinched by L_A."""
    return MeasurementModel(
        apparatus_state=DensityState(decohere(model.apparatus_state.matrix, quantity.apparatus_part)),
        unitary=model.unitary,
        pointer=model.pointer,
    )


def _pair_residuals(
    pairs: list[tuple[MeasurementModel, DensityState]],
    observable: ObservableOp,
) -> tuple[float, float]:
    """Max spread of before/after values across (model, state) evaluations.

    Outcomes where any evaluation in the family falls below the
    probability floor are skipped; the conditional values are undefined
    there, so nothing is claimed.
    """
    model0 = pairs[0][0]
    res_before = 0.0
    res_after = 0.0
    for outcome in model0.outcomes:
        befores = []
        afters = []
        try:
            for model, state in pairs:
                befores.append(conditional_before(model, state, observable, outcome))
                afters.append(conditional_after(model, state, observable, outcome))
        except ZeroProbabilityOutcome:
            continue
        res_before = max(res_before, max(befores) - min(befores))
        res_after = max(res_after, max(afters) - min(afters))
    return res_before, res_after


def verify_theorem1(
    model: MeasurementModel,
    state: DensityState,
    observable: ObservableOp,
    quantity: ConservedQuantity,
    tol: float = 1e-9,
) -> TheoremVerdict:
    """Check both coherence-irrelevance branches for a decohered apparatus.

    Builds the companion model with apparatus state Φ_{L_A}(ϱ) and
    measures:

    hypotheses
        ``conservation``        ‖[U, L_S⊗1 + 1⊗L_A]‖
        ``yanase``              pointer/L_A compatibility residual
        ``observable_commutes`` ‖[O, L_S]‖
        ``state_commutes``      ‖[ρ, L_S]‖ (needed by the first branch only)

    equalities
        ``system_commutes_{before,after}``: values agree between the
            original and decohered-apparatus models (claimed when all four
            hypotheses hold);
        ``ancilla_commutes_{before,after}``: on the decohered-apparatus
            model, values agree between ρ and Φ_{L_S}(ρ) (claimed without
            ``state_commutes``).
    """
    ls = quantity.system_part.matrix
    hypotheses = {
        "conservation": check_conservation(model, quantity),
        "yanase": check_yanase(model, quantity),
        "observable_commutes": frob(commutator(observable.matrix, ls)),
        "state_commutes": frob(commutator(state.matrix, ls)),
    }
    model2 = _decohered_model(model, quantity)
    state_dec = DensityState(decohere(state.matrix, quantity.system_part))

    sys_before, sys_after = _pair_residuals([(model, state), (model2, state)], observable)
    anc_before, anc_after = _pair_residuals([(model2, state), (model2, state_dec)], observable)
    equalities = {
        "system_commutes_before": sys_before,
        "system_commutes_after": sys_after,
        "ancilla_commutes_before": anc_before,
        "ancilla_commutes_after": anc_after,
    }
    base = ("conservation", "yanase", "observable_commutes")
    requires = {
        "system_commutes_before": base + ("state_commutes",),
        "system_commutes_after": base + ("state_commutes",),
        "ancilla_commutes_before": base,
        "ancilla_commutes_after": base,
    }
    return TheoremVerdict(hypotheses, equalities, tol, requires)


def verify_theorem2(
    model: MeasurementModel,
    state: DensityState,
    observable: ObservableOp,
    quantity: ConservedQuantity,
    tol: float = 1e-9,
) -> TheoremVerdict:
    """Check the four-way equality chains for symmetric product states.

    hypotheses
        ``conservation``, ``yanase``, ``observable_commutes`` as in
        :func:`verify_theorem1`;
        ``symmetric_state``: transpose-invariance residual of ρ ⊗ ϱ in
            the pinned eigenbasis, for both the original and the decohered
            apparatus state (max of the two);
        ``cross_elements``: max |Re| of doubly-off-diagonal elements of
            U†(O ⊗ P^x)U.

    equalities
        ``before_chain``/``after_chain``: the max spread of the four
        values over {ρ, Φ_{L_S}(ρ)} × {original, decohered apparatus}.
    """
    model2 = _decohered_model(model, quantity)
    state_dec = DensityState(decohere(state.matrix, quantity.system_part))
    hypotheses = {
        "conservation": check_conservation(model, quantity),
        "yanase": check_yanase(model, quantity),
        "observable_commutes": frob(commutator(observable.matrix, quantity.system_part.matrix)),
        "symmetric_state": max(
            check_symmetric_product_state(state, model.apparatus_state, quantity),
            check_symmetric_product_state(state, model2.apparatus_state, quantity),
        ),
        "cross_elements": check_cross_elements_imaginary(model, observable, quantity),
    }
    chain = [(model, state), (model2, state), (model, state_dec), (model2, state_dec)]
    before_chain, after_chain = _pair_residuals(chain, observable)
    equalities = {"before_chain": before_chain, "after_chain": after_chain}
    all_hyp = tuple(hypotheses)
    requires = {"before_chain": all_hyp, "after_chain": all_hyp}
    return TheoremVerdict(hypotheses, equalities, tol, requires)


def blockwise_conditional_values(
    model: MeasurementModel,
    state: DensityState,
    observable: ObservableOp,
    quantity: ConservedQuantity,
    outcome: str,
    tol: float = 1e-9,
) -> tuple[float, float]:
    """Conditional (before, after) evaluated blockwise over total-eigenvalue
    sectors, an independent path that must agree with the direct formulas.

    The conservation law confines U to blocks of fixed total eigenvalue
    l = m + μ, so each conditional value decomposes into a sum over sector
    pairs (m, μ), (n, ν) with m + μ = n + ν = l of projected traces:

        after  = (1/p)  Σ_l Σ_{(m,μ)_l} Σ_{(n,ν)_l}
                 tr[(O ⊗ P^x) U (Q_S^m ρ Q_S^n ⊗ Q_A^μ ϱ Q_A^ν) U†]
        before = (1/2p) Σ_l Σ_{(m,μ)_l} Σ_{(n,ν)_l}
                 tr[(1 ⊗ P^x) U (Q_S^m (Oρ + ρO) Q_S^n ⊗ Q_A^μ ϱ Q_A^ν) U†]

    The derivation needs the conservation law, pointer compatibility, and
    [O, L_S] = 0; their residuals are measured first and any at or above
    ``tol`` raises. p(x) is computed directly here, not through the engine.
    """
    pre = {
        "conservation": check_conservation(model, quantity),
        "yanase": check_yanase(model, quantity),
        "observable_commutes": frob(commutator(observable.matrix, quantity.system_part.matrix)),
    }
    for name, residual in pre.items():
        if residual >= tol:
            raise ValueError(
                f"blockwise path precondition {name!r} violated: "
                f"residual {residual:.3e} >= {tol:.3e}"
            )

    dec_s = hermitian_eig(quantity.system_part.matrix)
    dec_a = hermitian_eig(quantity.apparatus_part.matrix)
    rho = state.matrix
    varrho = model.apparatus_state.matrix
    u = model.unitary
    proj = model.pointer.projector(outcome)
    eye_s = np.eye(model.dim_s)

    joint = u @ kron(rho, varrho) @ dagger(u)
    p = float(np.trace(kron(eye_s, proj) @ joint).real)
    if p <= P_FLOOR:
        raise ZeroProbabilityOutcome(
            f"outcome {outcome!r} has probability {p:.3e} <= {P_FLOOR:.0e}"
        )

    # Pairs (m, μ) grouped by their total eigenvalue m + μ.
    sector_pairs = list(itertools.product(range(len(dec_s.eigenvalues)), range(len(dec_a.eigenvalues))))
    totals = np.array([dec_s.eigenvalues[m] + dec_a.eigenvalues[mu] for m, mu in sector_pairs])
    order = np.argsort(totals, kind="stable")
    labels_sorted = cluster_labels(totals[order], cluster_tolerance(totals))
    label_of = np.empty(len(sector_pairs), dtype=int)
    label_of[order] = labels_sorted
    blocks: dict[int, list[tuple[int, int]]] = {}
    for pair, lab in zip(sector_pairs, label_of):
        blocks.setdefault(int(lab), []).append(pair)

    # Heisenberg-picture operators make each projected trace a single
    # contraction: tr[A U B U†] = tr[(U† A U) B].
    op_after = dagger(u) @ kron(observable.matrix, proj) @ u
    op_before = dagger(u) @ kron(eye_s, proj) @ u
    sym = observable.matrix @ rho + rho @ observable.matrix

    after_sum = 0.0 + 0.0j
    before_sum = 0.0 + 0.0j
    for pairs in blocks.values():
        for (m, mu), (n, nu) in itertools.product(pairs, pairs):
            qs_m, qa_mu = dec_s.projectors[m], dec_a.projectors[mu]
            qs_n, qa_nu = dec_s.projectors[n], dec_a.projectors[nu]
            after_sum += np.trace(op_after @ kron(qs_m @ rho @ qs_n, qa_mu @ varrho @ qa_nu))
            before_sum += np.trace(op_before @ kron(qs_m @ sym @ qs_n, qa_mu @ varrho @ qa_nu))
    return float(before_sum.real) / (2 * p), float(after_sum.real) / p


def random_conserving_unitary(
    quantity: ConservedQuantity, rng: np.random.Generator, scale: float = 1.0
) -> np.ndarray:
    """Random unitary commuting with the additive conserved quantity.

    A complex Gaussian matrix is hermitized, pinched onto the
    fixed-total-eigenvalue blocks of L (so the generator commutes with L
    exactly up to round-off), then exponentiated. No rejection sampling.
    """
    total = quantity.total_operator()
    n = total.shape[0]
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    g = (g + dagger(g)) / 2
    return unitary_from_generator(decohere(g, total), scale)
