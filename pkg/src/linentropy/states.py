"""Density matrices on tensor-product spaces and the quantities built on them.

A :class:`DensityMatrix` is a dense ``complex128`` array together with the
dimensions of its tensor factors. Construction only checks structure; use
:meth:`DensityMatrix.checked` (or :func:`validate_density`) to additionally
enforce Hermiticity, unit trace and positivity.
"""

import json
import math
from dataclasses import dataclass, field
from functools import reduce
from operator import mul
from pathlib import Path

import numpy as np

from .errors import ParameterError, StructureError, ValidationError
from .linalg import eig_hermitian


@dataclass(frozen=True)
class Tolerances:
    herm: float = 1e-10
    trace: float = 1e-10
    psd: float = 1e-10


DEFAULT_TOLERANCES = Tolerances()


def _as_dims(dims):
    dims = tuple(int(d) for d in dims)
    if not dims:
        raise StructureError("at least one subsystem dimension is required")
    if any(d < 2 for d in dims):
        raise StructureError(f"subsystem dimensions must be >= 2, got {dims}")
    return dims


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A state on ``H_1 ⊗ ... ⊗ H_n`` with ``dims = (d_1, ..., d_n)``."""

    matrix: np.ndarray
    dims: tuple = field(default=None)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise StructureError(f"density matrix must be square, got shape {m.shape}")
        dims = (m.shape[0],) if self.dims is None else _as_dims(self.dims)
        if reduce(mul, dims, 1) != m.shape[0]:
            raise StructureError(f"dims {dims} do not multiply to matrix size {m.shape[0]}")
        if not np.all(np.isfinite(m)):
            raise StructureError("density matrix has non-finite entries")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", dims)

    @classmethod
    def checked(cls, matrix, dims=None, tolerances=DEFAULT_TOLERANCES):
        """Build a state and raise :class:`ValidationError` unless it is valid."""
        rho = cls(matrix, dims)
        report = validate_density(rho.matrix, rho.dims, tolerances)
        if not report.accepted:
            raise ValidationError("; ".join(report.reasons), report)
        return rho

    @property
    def dim(self):
        return self.matrix.shape[0]

    def __repr__(self):
        return f"DensityMatrix(dims={self.dims})"


@dataclass(frozen=True)
class ValidationReport:
    hermiticity_defect: float
    trace_defect: float
    min_eigenvalue: float
    tolerances: Tolerances
    reasons: tuple = ()

    @property
    def accepted(self):
        return not self.reasons

    def to_dict(self):
        return {
            "accepted": self.accepted,
            "hermiticity_defect": self.hermiticity_defect,
            "trace_defect": self.trace_defect,
            "min_eigenvalue": self.min_eigenvalue,
            "reasons": list(self.reasons),
        }


def validate_density(m, dims=None, tolerances=DEFAULT_TOLERANCES):
    """Measure how far ``m`` is from being a density matrix.

    Nothing is repaired: the report lists the Hermiticity defect
    ``max|m - m^†|``, the trace defect ``|Tr m - 1|`` and the smallest
    eigenvalue of the Hermitian part, and is accepted only if all three are
    within ``tolerances``.

    Raises
    ------
    StructureError
        If ``m`` is not square or ``dims`` does not match its size.
    """
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise StructureError(f"expected a square matrix, got shape {m.shape}")
    if dims is not None:
        dims = _as_dims(dims)
        if reduce(mul, dims, 1) != m.shape[0]:
            raise StructureError(f"dims {dims} do not multiply to matrix size {m.shape[0]}")
    if not np.all(np.isfinite(m)):
        raise StructureError("matrix has non-finite entries")

    herm = float(np.max(np.abs(m - m.conj().T)))
    trace = float(abs(np.trace(m) - 1.0))
    min_eig = float(eig_hermitian(0.5 * (m + m.conj().T)).eigenvalues[0])

    reasons = []
    if herm > tolerances.herm:
        reasons.append(f"hermiticity defect {herm:.3e} exceeds {tolerances.herm:.1e}")
    if trace > tolerances.trace:
        reasons.append(f"trace defect {trace:.3e} exceeds {tolerances.trace:.1e}")
    if min_eig < -tolerances.psd:
        reasons.append(f"minimum eigenvalue {min_eig:.3e} below {-tolerances.psd:.1e}")
    return ValidationReport(herm, trace, min_eig, tolerances, tuple(reasons))


# ---------------------------------------------------------------------------
# scalar functionals

def purity(rho):
    """``Tr(rho^2)``, evaluated entrywise as ``sum |rho_ij|^2``."""
    m = rho.matrix
    return float(np.sum(m.real**2 + m.imag**2))


def linear_entropy(rho):
    """Tsallis-2 entropy ``1 - Tr(rho^2)``."""
    return 1.0 - purity(rho)


def renyi2_entropy(rho):
    """Collision entropy ``-log2 Tr(rho^2)`` in bits."""
    return -math.log2(purity(rho))


def max_linear_entropy(d):
    """``1 - 1/d``, attained only by the maximally mixed state."""
    return 1.0 - 1.0 / d


def clamped_spectrum(rho, tol_psd=DEFAULT_TOLERANCES.psd):
    w = eig_hermitian(rho.matrix).eigenvalues
    if w[0] < -tol_psd:
        raise ValidationError(f"negative eigenvalue {w[0]:.3e} below {-tol_psd:.1e}")
    return np.clip(w, 0.0, None)


def schatten_qnorm(rho, q, tol_psd=DEFAULT_TOLERANCES.psd):
    """Schatten q-norm ``(sum_i lambda_i^q)^(1/q)`` of a state.

    Eigenvalues in ``[-tol_psd, 0)`` are treated as zero.
    """
    if not q >= 1:
        raise ParameterError(f"Schatten norm needs q >= 1, got {q}")
    w = clamped_spectrum(rho, tol_psd)
    return float(np.sum(w**q) ** (1.0 / q))


# ---------------------------------------------------------------------------
# composition

def partial_trace(rho, keep):
    """Reduced state on the subsystems listed in ``keep``.

    The kept factors appear in their original order regardless of the order
    of ``keep``.
    """
    keep = sorted(set(int(k) for k in keep))
    n = len(rho.dims)
    if not keep:
        raise StructureError("partial trace must keep at least one subsystem")
    if keep[0] < 0 or keep[-1] >= n:
        raise StructureError(f"subsystem indices {keep} out of range for {n} factors")
    if len(keep) == n:
        return rho

    t = rho.matrix.reshape(rho.dims + rho.dims)
    letters = "abcdefghijklmnopqrstuvwxyz"
    row = list(letters[:n])
    col = list(letters[n:2 * n])
    for i in range(n):
        if i not in keep:
            col[i] = row[i]
    out = "".join(row[i] for i in keep) + "".join(col[i] for i in keep)
    reduced = np.einsum("".join(row) + "".join(col) + "->" + out, t)
    kept_dims = tuple(rho.dims[i] for i in keep)
    d = reduce(mul, kept_dims, 1)
    return DensityMatrix(reduced.reshape(d, d), kept_dims)


def tensor_product(*states):
    """Kronecker product of states; the factor lists are concatenated."""
    if not states:
        raise StructureError("tensor_product needs at least one state")
    m = states[0].matrix
    dims = states[0].dims
    for s in states[1:]:
        m = np.kron(m, s.matrix)
        dims = dims + s.dims
    return DensityMatrix(m, dims)


def marginal_entropies(rho):
    """``(S_L(rho_A), S_L(rho_B), S_L(rho_AB))`` for a bipartite state."""
    if len(rho.dims) != 2:
        raise StructureError(f"expected a bipartite state, got dims {rho.dims}")
    return (
        linear_entropy(partial_trace(rho, [0])),
        linear_entropy(partial_trace(rho, [1])),
        linear_entropy(rho),
    )


# ---------------------------------------------------------------------------
# pure states

@dataclass(frozen=True)
class SchmidtDecomposition:
    coefficients: np.ndarray
    left_basis: np.ndarray
    right_basis: np.ndarray

    def reconstruct(self):
        return np.einsum("i,ai,bi->ab", self.coefficients, self.left_basis,
                         self.right_basis).reshape(-1)


def schmidt_decompose(v, d_a, d_b, *, tol=1e-10):
    """Schmidt form ``v = sum_i c_i |x_i> ⊗ |y_i>`` with ``c`` descending.

    The bases are returned as matrix columns (``d_a x N`` and ``d_b x N``
    with ``N = min(d_a, d_b)``).
    """
    v = np.asarray(v, dtype=np.complex128).reshape(-1)
    if v.size != d_a * d_b:
        raise StructureError(f"vector of length {v.size} is not {d_a}x{d_b}")
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > tol:
        raise ParameterError(f"state vector is not normalised (norm {norm:.12g})")
    u, c, vh = np.linalg.svd(v.reshape(d_a, d_b), full_matrices=False)
    return SchmidtDecomposition(c, u, vh.T)


def purify(rho, tol_psd=DEFAULT_TOLERANCES.psd):
    """Purification ``sum_i sqrt(lambda_i) |v_i> ⊗ |i>`` on ``d x d``.

    Eigenvalues are taken in descending order, so a pure input ``|psi><psi|``
    maps to ``|psi> ⊗ |0>`` up to a global phase.
    """
    dec = eig_hermitian(rho.matrix)
    w = dec.eigenvalues[::-1]
    if w[-1] < -tol_psd:
        raise ValidationError(f"negative eigenvalue {w[-1]:.3e} below {-tol_psd:.1e}")
    vecs = dec.eigenvectors[:, ::-1]
    amp = np.sqrt(np.clip(w, 0.0, None))
    # phi[a, i] = sqrt(lambda_i) v_i[a]
    return (vecs * amp).reshape(-1)


def pure_density(v, dims):
    v = np.asarray(v, dtype=np.complex128).reshape(-1)
    return DensityMatrix(np.outer(v, v.conj()), dims)


def basis_state(dims, index=0):
    dims = _as_dims(dims)
    d = reduce(mul, dims, 1)
    m = np.zeros((d, d), dtype=np.complex128)
    m[index, index] = 1.0
    return DensityMatrix(m, dims)


def maximally_mixed(dims):
    dims = _as_dims(dims)
    d = reduce(mul, dims, 1)
    return DensityMatrix(np.eye(d, dtype=np.complex128) / d, dims)


def bell_state(d=2):
    """Maximally entangled ``(1/sqrt d) sum_i |ii>`` on ``d x d``."""
    v = np.zeros(d * d, dtype=np.complex128)
    v[[i * d + i for i in range(d)]] = 1.0 / math.sqrt(d)
    return pure_density(v, (d, d))


def ghz_state(n=3):
    v = np.zeros(2**n, dtype=np.complex128)
    v[0] = v[-1] = 1.0 / math.sqrt(2)
    return pure_density(v, (2,) * n)


def mixture(weights, states):
    """Convex combination of states sharing the same ``dims``."""
    dims = states[0].dims
    if any(s.dims != dims for s in states):
        raise StructureError("mixture components must share dims")
    m = sum(w * s.matrix for w, s in zip(weights, states))
    return DensityMatrix(m, dims)


# ---------------------------------------------------------------------------
# JSON state files: {"dims": [...], "matrix": [[[re, im], ...], ...]}

def state_to_json(rho):
    m = rho.matrix
    return {
        "dims": list(rho.dims),
        "matrix": [[[float(z.real), float(z.imag)] for z in row] for row in m],
    }


def state_from_json(obj, tolerances=DEFAULT_TOLERANCES, validate=True):
    try:
        dims = [int(d) for d in obj["dims"]]
        rows = obj["matrix"]
    except (KeyError, TypeError, ValueError) as exc:
        raise StructureError(f"malformed state file: {exc}") from exc
    d = reduce(mul, dims, 1) if dims else 0
    if not isinstance(rows, list) or len(rows) != d:
        raise StructureError(f"matrix must have {d} rows for dims {dims}")
    m = np.empty((d, d), dtype=np.complex128)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != d:
            raise StructureError(f"row {i} must have {d} entries")
        for j, z in enumerate(row):
            if not isinstance(z, (list, tuple)) or len(z) != 2:
                raise StructureError(f"entry ({i}, {j}) must be a [re, im] pair")
            m[i, j] = complex(float(z[0]), float(z[1]))
    if validate:
        return DensityMatrix.checked(m, dims, tolerances)
    return DensityMatrix(m, dims)


def load_state(path, tolerances=DEFAULT_TOLERANCES, validate=True):
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise StructureError(f"{path}: invalid JSON ({exc})") from exc
    return state_from_json(obj, tolerances, validate)


def save_state(rho, path):
    Path(path).write_text(json.dumps(state_to_json(rho)) + "\n")
