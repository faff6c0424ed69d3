"""Dense complex linear-algebra kernel.

Everything downstream works with plain ``numpy.complex128`` 2-D arrays
(row-major). This module collects the small set of primitives the rest of
the package is built on: tensor products, partial traces, clustered
Hermitian eigendecompositions, spectral matrix functions, and the
tolerance conventions shared by all modules.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Default Frobenius tolerance for "equal within tol" checks.
DEFAULT_TOL = 1e-10
# Inputs with Hermitian defect below this are silently symmetrized.
SYMMETRIZE_TOL = 1e-8
# Eigenvalues in [-PSD_TOL, 0) are treated as round-off and clamped to 0.
PSD_TOL = 1e-9


def as_matrix(a) -> np.ndarray:
    """Coerce input to a 2-D complex128 array (copying if needed)."""
    m = np.array(a, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got ndim={m.ndim}")
    return m


def frob(a: np.ndarray) -> float:
    """Frobenius norm as a plain float."""
    return float(np.linalg.norm(a))


def dagger(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return a.conj().T


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def is_hermitian(a: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    return frob(a - dagger(a)) <= tol


def is_unitary(a: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    n = a.shape[0]
    return a.shape[0] == a.shape[1] and frob(dagger(a) @ a - np.eye(n)) <= tol


def is_psd(a: np.ndarray, tol: float = PSD_TOL) -> bool:
    """Hermitian with spectrum bounded below by ``-tol``."""
    if not is_hermitian(a, max(tol, DEFAULT_TOL)):
        return False
    w = np.linalg.eigvalsh((a + dagger(a)) / 2)
    return bool(w.min() >= -tol)


def ensure_hermitian(a: np.ndarray, tol: float = SYMMETRIZE_TOL) -> np.ndarray:
    """Return the Hermitian part (a + a†)/2, rejecting large defects.

    Symmetrization is silent while ``‖a − a†‖_F < tol``; a defect at or
    above ``tol`` raises, since downstream spectral formulas assume exact
    self-adjointness.
    """
    defect = frob(a - dagger(a))
    if defect >= tol:
        raise ValueError(
            f"matrix is not Hermitian: defect {defect:.3e} >= tolerance {tol:.3e}"
        )
    return (a + dagger(a)) / 2


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product (system factor first)."""
    return np.kron(a, b)


def partial_trace(x: np.ndarray, dim_s: int, dim_a: int, over: str) -> np.ndarray:
    """Trace out one factor of a bipartite operator.

    Parameters
    ----------
    x : ndarray
        Operator on the product space, shape ``(dim_s*dim_a, dim_s*dim_a)``,
        with the system factor first in the Kronecker ordering.
    dim_s, dim_a : int
        Factor dimensions.
    over : {"system", "apparatus"}
        Which factor to trace out.

    Returns
    -------
    ndarray
        Operator on the remaining factor. The full trace is preserved.
    """
    n = dim_s * dim_a
    if x.shape != (n, n):
        raise ValueError(f"operator shape {x.shape} does not match dims {dim_s}x{dim_a}")
    x4 = x.reshape(dim_s, dim_a, dim_s, dim_a)
    if over == "apparatus":
        return np.trace(x4, axis1=1, axis2=3)
    if over == "system":
        return np.trace(x4, axis1=0, axis2=2)
    raise ValueError(f"unknown subsystem tag {over!r}; expected 'system' or 'apparatus'")


def cluster_tolerance(eigenvalues: np.ndarray) -> float:
    """Clustering width for near-degenerate eigenvalues.

    Relative to the operator norm but never below 1e-9 in absolute terms,
    so exact degeneracies survive round-off while distinct physical levels
    (spaced O(1) in every model here) are never merged.
    """
    scale = float(np.max(np.abs(eigenvalues))) if len(eigenvalues) else 0.0
    return 1e-9 * max(1.0, scale)


def cluster_labels(values: np.ndarray, tol: float) -> np.ndarray:
    """Group ascending values into clusters of width ``tol``.

    Returns an integer label per entry; entries whose gap to the previous
    one is below ``tol`` share a label. Input must be sorted ascending.
    """
    values = np.asarray(values, dtype=float)
    labels = np.zeros(len(values), dtype=int)
    for i in range(1, len(values)):
        labels[i] = labels[i - 1] + (1 if values[i] - values[i - 1] >= tol else 0)
    return labels


@dataclass
class SpectralDecomposition:
    """Clustered eigensystem of a Hermitian matrix.

    ``eigenvalues`` holds one representative (cluster mean) per distinct
    eigenvalue, ascending; ``projectors`` the matching orthogonal
    projectors, which sum to the identity.
    """

    eigenvalues: np.ndarray
    projectors: list[np.ndarray] = field(default_factory=list)

    def reconstruct(self) -> np.ndarray:
        """Rebuild the decomposed matrix as Σ_l λ_l Q^l."""
        out = np.zeros_like(self.projectors[0])
        for lam, q in zip(self.eigenvalues, self.projectors):
            out = out + lam * q
        return out


def hermitian_eig(h: np.ndarray, tol: float = SYMMETRIZE_TOL) -> SpectralDecomposition:
    """Clustered spectral decomposition of a Hermitian matrix.

    Eigenvalues within ``cluster_tolerance`` of each other are merged into
    a single degenerate projector, so exact degeneracies broken only by
    round-off come back as one spectral projection.

    Parameters
    ----------
    h : ndarray
        Matrix to decompose; Hermitian within ``tol`` (symmetrized first).
    tol : float
        Largest acceptable Hermitian defect.
    """
    h = ensure_hermitian(as_matrix(h), tol)
    w, v = np.linalg.eigh(h)
    labels = cluster_labels(w, cluster_tolerance(w))
    eigenvalues = []
    projectors = []
    for lab in range(labels[-1] + 1 if len(labels) else 0):
        idx = np.flatnonzero(labels == lab)
        block = v[:, idx]
        eigenvalues.append(float(w[idx].mean()))
        projectors.append(block @ dagger(block))
    return SpectralDecomposition(np.array(eigenvalues), projectors)


def unitary_from_generator(h: np.ndarray, theta: float) -> np.ndarray:
    """Spectral exponential ``e^{−iθh}`` of a Hermitian generator h."""
    h = ensure_hermitian(as_matrix(h))
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * theta * w)) @ dagger(v)


def psd_sqrt(p: np.ndarray, tol: float = PSD_TOL) -> np.ndarray:
    """Hermitian square root of a positive semidefinite matrix.

    Eigenvalues in ``[-tol, 0)`` are clamped to zero; anything below
    ``-tol`` is a genuine negativity and raises.
    """
    p = ensure_hermitian(as_matrix(p))
    w, v = np.linalg.eigh(p)
    if w.min() < -tol:
        raise ValueError(
            f"matrix is not PSD: smallest eigenvalue {w.min():.3e} < -{tol:.3e}"
        )
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ dagger(v)
