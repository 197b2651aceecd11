"""Hermitian operator bases and Bloch/correlation-tensor coordinates.

All bases here use the normalisation ``Tr(X_i X_j) = d δ_ij`` with
``X_0 = 1``, so that a state reads ``rho = (1 + sum_i b_i X_i) / d`` with
``b_i = Tr(rho X_i)`` and ``Tr(rho^2) = (1 + |b|^2) / d``.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, StructureError
from .linalg import eig_hermitian

DEGENERATE_MARGINAL_TOL = 1e-12
PIVOT_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class OperatorBasis:
    """``d^2`` Hermitian ``d x d`` matrices stacked along axis 0, identity first."""

    dim: int
    elements: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.elements, dtype=np.complex128)
        d = int(self.dim)
        if e.shape != (d * d, d, d):
            raise StructureError(f"basis for d={d} needs shape {(d * d, d, d)}, got {e.shape}")
        e.setflags(write=False)
        object.__setattr__(self, "elements", e)
        object.__setattr__(self, "dim", d)

    def __len__(self):
        return self.elements.shape[0]

    def __getitem__(self, i):
        return self.elements[i]

    def gram(self):
        """Real Hilbert-Schmidt Gram matrix ``Tr(X_i X_j)``."""
        e = self.elements
        return np.real(np.einsum("iab,jba->ij", e, e))

    def to_json(self):
        return {
            "dim": self.dim,
            "elements": [
                [[[float(z.real), float(z.imag)] for z in row] for row in x]
                for x in self.elements
            ],
        }


@dataclass(frozen=True)
class BlochVector:
    dim: int
    components: np.ndarray

    @property
    def norm_squared(self):
        return float(np.dot(self.components, self.components))

    def to_matrix(self, basis):
        """``(1 + sum_i b_i X_i) / d`` in ``basis``."""
        if basis.dim != self.dim:
            raise StructureError(f"basis dimension {basis.dim} != Bloch dimension {self.dim}")
        m = basis.elements[0] + np.tensordot(self.components, basis.elements[1:], axes=1)
        return m / self.dim


@dataclass(frozen=True)
class CorrelationTensor:
    """Expectation values ``<X_i ⊗ 1>``, ``<1 ⊗ Y_j>`` and ``<X_i ⊗ Y_j>`` for i, j >= 1."""

    local_a: np.ndarray
    local_b: np.ndarray
    joint: np.ndarray

    @property
    def dims(self):
        return (math.isqrt(self.local_a.size + 1), math.isqrt(self.local_b.size + 1))

    def full(self):
        """``(d_A^2) x (d_B^2)`` table with the constant term 1 at ``[0, 0]``."""
        na, nb = self.local_a.size, self.local_b.size
        t = np.empty((na + 1, nb + 1))
        t[0, 0] = 1.0
        t[1:, 0] = self.local_a
        t[0, 1:] = self.local_b
        t[1:, 1:] = self.joint
        return t

    def to_matrix(self, basis_a, basis_b):
        """Rebuild ``rho_AB`` from the product-basis expansion."""
        t = self.full()
        da, db = basis_a.dim, basis_b.dim
        m = np.einsum("ij,iac,jbd->abcd", t, basis_a.elements, basis_b.elements)
        return m.reshape(da * db, da * db) / (da * db)


# ---------------------------------------------------------------------------
# bases

def _gellmann_unscaled(d):
    mats = [np.eye(d, dtype=np.complex128)]
    pairs = [(j, k) for j in range(d) for k in range(j + 1, d)]
    for j, k in pairs:
        m = np.zeros((d, d), dtype=np.complex128)
        m[j, k] = m[k, j] = 1.0
        mats.append(m)
    for j, k in pairs:
        m = np.zeros((d, d), dtype=np.complex128)
        m[j, k] = -1j
        m[k, j] = 1j
        mats.append(m)
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1.0
        diag[l] = -l
        mats.append(np.diag(diag * math.sqrt(2.0 / (l * (l + 1)))).astype(np.complex128))
    return mats


def gellmann_basis(d):
    """Generalised Gell-Mann basis scaled to ``Tr(X_i^2) = d``.

    Order: identity, then the symmetric, antisymmetric and diagonal families,
    each over index pairs ``j < k`` in lexicographic order. For ``d = 2``
    this gives ``(1, sigma_x, sigma_y, sigma_z)``.
    """
    if int(d) != d or d < 2:
        raise ParameterError(f"basis dimension must be an integer >= 2, got {d}")
    d = int(d)
    mats = _gellmann_unscaled(d)
    scale = math.sqrt(d / 2.0)
    elements = [mats[0]] + [scale * m for m in mats[1:]]
    return OperatorBasis(d, np.array(elements))


def adapted_rotations(b, *, degenerate_tol=DEGENERATE_MARGINAL_TOL):
    """Orthogonal changes of Bloch coordinates that align each ``b`` with the first axis.

    Parameters
    ----------
    b : ndarray, shape (..., n)
        Bloch vectors in the standard Gell-Mann basis, ``n = d^2 - 1``.

    Returns
    -------
    ndarray, shape (..., n, n)
        Rows are the new basis directions: row 0 is ``b / |b|``, the rest
        come from Gram-Schmidt over the standard axes in index order, with
        the axis of largest overlap with ``b`` left out. Vectors whose
        state is within ``degenerate_tol`` (Frobenius) of ``1/d`` get the
        identity.
    """
    b = np.asarray(b, dtype=float)
    batch = b.shape[:-1]
    n = b.shape[-1]
    d = math.isqrt(n + 1)
    flat = b.reshape(-1, n)
    m = flat.shape[0]
    norm = np.linalg.norm(flat, axis=1)
    degenerate = norm / math.sqrt(d) < degenerate_tol
    u = flat / np.where(degenerate, 1.0, norm)[:, None]

    drop = np.argmax(np.abs(u), axis=1)
    keep = np.array([[l for l in range(n) if l != k] for k in range(n)])[drop]
    cols = np.zeros((m, n, n))
    cols[:, 0, :] = u
    rows = np.arange(m)[:, None]
    cols[rows, np.arange(1, n)[None, :], keep] = 1.0

    out = np.empty_like(cols)
    for i in range(n):
        v = cols[:, i, :].copy()
        for j in range(i):
            v -= np.einsum("kl,kl->k", out[:, j, :], v)[:, None] * out[:, j, :]
        nv = np.linalg.norm(v, axis=1)
        if np.any(nv[~degenerate] < PIVOT_TOL):
            raise StructureError(f"Gram-Schmidt pivot below {PIVOT_TOL} at element {i + 1}")
        out[:, i, :] = v / np.where(nv > 0, nv, 1.0)[:, None]
    out[degenerate] = np.eye(n)
    return out.reshape(batch + (n, n))


def rotate_basis(basis, rotation):
    """Basis ``X'_i = sum_l O_il X_l`` for an orthogonal ``O`` on the traceless part."""
    e = basis.elements
    rotated = np.tensordot(rotation, e[1:], axes=1)
    rotated = 0.5 * (rotated + np.conj(np.swapaxes(rotated, -1, -2)))
    return OperatorBasis(basis.dim, np.concatenate([e[:1], rotated]))


def adapted_basis(rho, *, degenerate_tol=DEGENERATE_MARGINAL_TOL):
    """Basis whose first element is proportional to ``rho - 1/d``.

    In this basis the Bloch vector of ``rho`` is ``(r, 0, ..., 0)`` with
    ``r >= 0``. The remaining elements are the standard Gell-Mann elements
    orthogonalised against the first one (see :func:`adapted_rotations`).
    A maximally mixed ``rho`` keeps the standard basis.
    """
    standard = gellmann_basis(rho.dim)
    b = bloch_vector(rho, standard).components
    return rotate_basis(standard, adapted_rotations(b, degenerate_tol=degenerate_tol))


# ---------------------------------------------------------------------------
# coordinates

def bloch_vector(rho, basis):
    if rho.dim != basis.dim:
        raise StructureError(f"state dimension {rho.dim} != basis dimension {basis.dim}")
    b = np.real(np.einsum("ab,iba->i", rho.matrix, basis.elements[1:]))
    return BlochVector(basis.dim, b)


def purity_from_bloch(b):
    return (1.0 + b.norm_squared) / b.dim


def correlation_tensor(rho, basis_a, basis_b):
    """Expansion coefficients of a bipartite state in ``{X_i ⊗ Y_j}``."""
    if len(rho.dims) != 2:
        raise StructureError(f"expected a bipartite state, got dims {rho.dims}")
    da, db = rho.dims
    if (basis_a.dim, basis_b.dim) != (da, db):
        raise StructureError(
            f"basis dims {(basis_a.dim, basis_b.dim)} do not match state dims {rho.dims}")
    t = rho.matrix.reshape(da, db, da, db)
    full = np.real(np.einsum("abcd,ica,jdb->ij", t, basis_a.elements, basis_b.elements))
    return CorrelationTensor(full[1:, 0].copy(), full[0, 1:].copy(), full[1:, 1:].copy())


def tensor_qnorms(c, q):
    """Entrywise q-norms ``(||C_A||_q, ||C_B||_q, ||C_AB||_q)``."""
    if not q >= 1:
        raise ParameterError(f"q-norm needs q >= 1, got {q}")

    def qn(a):
        a = np.abs(np.ravel(a))
        if not a.size or a.max() == 0.0:
            return 0.0
        m = a.max()
        return float(m * np.sum((a / m) ** q) ** (1.0 / q))

    return qn(c.local_a), qn(c.local_b), qn(c.joint)


# ---------------------------------------------------------------------------
# structural inequalities

@dataclass(frozen=True)
class OperatorBoundVerdict:
    passed: bool
    failing_index: int | None
    min_margin: float


def check_operator_bound(basis, tol=1e-10):
    """Check ``sqrt(d-1) 1 ± X_i >= 0`` for every non-identity element.

    ``min_margin`` is the smallest eigenvalue over all ``2 (d^2 - 1)``
    operators; the first element pushing it below ``-tol`` is reported.
    """
    bound = math.sqrt(basis.dim - 1)
    worst = math.inf
    failing = None
    for i in range(1, len(basis)):
        w = eig_hermitian(basis.elements[i]).eigenvalues
        margin = bound - max(abs(w[0]), abs(w[-1]))
        worst = min(worst, margin)
        if failing is None and margin < -tol:
            failing = i
    return OperatorBoundVerdict(failing is None, failing, float(worst))


def pairwise_correlation_slack(c):
    """Smallest slack of ``|b_ij| >= sqrt(d_B-1)|b_i0| + sqrt(d_A-1)|b_0j| - sqrt((d_A-1)(d_B-1))``."""
    da, db = c.dims
    sa, sb = math.sqrt(da - 1), math.sqrt(db - 1)
    rhs = sb * np.abs(c.local_a)[:, None] + sa * np.abs(c.local_b)[None, :] - sa * sb
    return float(np.min(np.abs(c.joint) - rhs))


def tensor_norm_slack(c, q):
    """Slack of ``||C_AB||_q >= sqrt(d_B-1)||C_A||_q + sqrt(d_A-1)||C_B||_q - sqrt((d_A-1)(d_B-1))``."""
    da, db = c.dims
    sa, sb = math.sqrt(da - 1), math.sqrt(db - 1)
    na, nb, nab = tensor_qnorms(c, q)
    return nab - (sb * na + sa * nb - sa * sb)
