"""Cyclic Jacobi eigensolver for small dense Hermitian matrices."""

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, StructureError

OFFDIAG_THRESHOLD = 1e-13
MAX_SWEEPS = 100
HERMITIAN_TOL = 1e-10


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues in ascending order with eigenvectors as matrix columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self):
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _offdiag_norm(a):
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(off.real**2 + off.imag**2)))


def eig_hermitian(a, *, threshold=OFFDIAG_THRESHOLD, max_sweeps=MAX_SWEEPS):
    """Diagonalise a Hermitian matrix with cyclic complex Jacobi rotations.

    Each rotation first removes the phase of the pivot ``a[p, q]`` and then
    applies the real symmetric Jacobi rotation that annihilates it. Sweeps
    stop once the off-diagonal Frobenius norm drops below
    ``threshold * max(1, ||a||_F)``.

    Parameters
    ----------
    a : array_like
        Square complex matrix, Hermitian within ``1e-10``.
    threshold : float
        Relative off-diagonal convergence threshold.
    max_sweeps : int
        Number of full sweeps before giving up.

    Returns
    -------
    SpectralDecomposition

    Raises
    ------
    StructureError
        If ``a`` is not square or not Hermitian.
    NumericalError
        If the sweeps do not converge.
    """
    a = np.array(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise StructureError(f"expected a square matrix, got shape {a.shape}")
    defect = np.max(np.abs(a - a.conj().T)) if a.size else 0.0
    if defect > HERMITIAN_TOL:
        raise StructureError(f"matrix is not Hermitian (defect {defect:.3e})")
    a = 0.5 * (a + a.conj().T)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    scale = max(1.0, float(np.linalg.norm(a)))

    for _ in range(max_sweeps):
        if _offdiag_norm(a) <= threshold * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                phase = apq / mag
                app = a[p, p].real
                aqq = a[q, q].real
                theta = (aqq - app) / (2.0 * mag)
                t = np.copysign(1.0, theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # J acts on columns p, q: [c, s*phase; -s*conj(phase), c]
                sp = s * phase
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * np.conj(phase) * col_q
                a[:, q] = sp * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * phase * row_q
                a[q, :] = np.conj(sp) * row_p + c * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * np.conj(phase) * vq
                v[:, q] = sp * vp + c * vq
    else:
        if _offdiag_norm(a) > threshold * scale:
            raise NumericalError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")

    w = np.real(np.diag(a))
    order = np.argsort(w, kind="stable")
    return SpectralDecomposition(w[order], v[:, order])


def eigvalsh(a):
    """Ascending eigenvalues of a Hermitian matrix."""
    return eig_hermitian(a).eigenvalues
