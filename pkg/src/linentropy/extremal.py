"""State families whose entropy points lie on the sharp bound.

With ``|0>`` the first computational basis vector,

* ``mu_1 = |0><0| ⊗ 1/d_B``, ``mu_2 = 1/d_A ⊗ |0><0|``, ``mu_3 = |00><00|``;
* the line family ``alpha mu_1 + (1 - alpha) mu_2`` traces the curve where
  the two pieces of ``f`` meet;
* the simplex family ``alpha mu_1 + beta mu_2 + (1 - alpha - beta) mu_3``
  saturates the nonlinear piece;
* mixing any state with ``1/d`` moves its entropy point along a straight
  line towards the maximally mixed corner, which fills the linear piece.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import bounds
from .errors import NumericalError, ParameterError
from .states import DensityMatrix, basis_state, maximally_mixed, tensor_product

COLLINEAR_TOL = 1e-10
COLLINEAR_MAX_ITER = 120

ISA_LINE, DSSA_SIMPLEX, MIX_LINE = "isa-line", "dssa-simplex", "mix-line"


@dataclass(frozen=True)
class ExtremalParams:
    family: str
    alpha: float
    beta: float = 0.0

    def __post_init__(self):
        if self.family not in (ISA_LINE, DSSA_SIMPLEX, MIX_LINE):
            raise ParameterError(f"unknown family {self.family!r}")
        _unit("alpha", self.alpha)
        _unit("beta", self.beta)
        if self.family == DSSA_SIMPLEX and self.alpha + self.beta > 1.0 + 1e-15:
            raise ParameterError(f"alpha + beta = {self.alpha + self.beta} exceeds 1")


def _unit(name, v):
    if not 0.0 <= v <= 1.0:
        raise ParameterError(f"{name}={v!r} outside [0, 1]")


def _building_blocks(dims):
    da, db = bounds.as_dims(dims)
    zero_a, zero_b = basis_state((da,)), basis_state((db,))
    mu1 = tensor_product(zero_a, maximally_mixed((db,)))
    mu2 = tensor_product(maximally_mixed((da,)), zero_b)
    mu3 = tensor_product(zero_a, zero_b)
    return mu1, mu2, mu3


def isa_family(alpha, dims):
    """``alpha |0><0| ⊗ 1/d_B + (1 - alpha) 1/d_A ⊗ |0><0|``."""
    _unit("alpha", alpha)
    mu1, mu2, _ = _building_blocks(dims)
    return DensityMatrix(alpha * mu1.matrix + (1.0 - alpha) * mu2.matrix, mu1.dims)


def isa_family_entropies(alpha, dims):
    """Closed-form ``(S_A, S_B, S_AB)`` of :func:`isa_family`."""
    dims = bounds.as_dims(dims)
    da, db = dims.d_a, dims.d_b
    return (
        dims.D_a * (1.0 - alpha**2),
        dims.D_b * (2.0 * alpha - alpha**2),
        dims.D_a + 2.0 * (db - 1) / (da * db) * alpha - (da + db - 2) / (da * db) * alpha**2,
    )


def dssa_family(alpha, beta, dims):
    """``alpha mu_1 + beta mu_2 + (1 - alpha - beta) |00><00|`` for ``alpha + beta <= 1``."""
    ExtremalParams(DSSA_SIMPLEX, alpha, beta)
    mu1, mu2, mu3 = _building_blocks(dims)
    m = alpha * mu1.matrix + beta * mu2.matrix + (1.0 - alpha - beta) * mu3.matrix
    return DensityMatrix(m, mu1.dims)


def dssa_family_entropies(alpha, beta, dims):
    """Closed-form ``(S_A, S_B, S_AB)`` of :func:`dssa_family`."""
    dims = bounds.as_dims(dims)
    sa = dims.D_a * (2.0 * beta - beta**2)
    sb = dims.D_b * (2.0 * alpha - alpha**2)
    return sa, sb, sa + sb - 2.0 * dims.D_a * dims.D_b * alpha * beta


def mix_with_maximally_mixed(mu, alpha):
    """``alpha mu + (1 - alpha) 1/d``.

    The entropy point moves as ``v_mixed + alpha^2 (v_mu - v_mixed)``.
    """
    _unit("alpha", alpha)
    d = mu.dim
    return DensityMatrix(alpha * mu.matrix + (1.0 - alpha) * np.eye(d) / d, mu.dims)


def _collinear_alpha(x, y, dims):
    """Line-family parameter whose curve point is collinear with ``(x, y)`` and the corner.

    Uses the sign of the 2D cross product of ``corner - target`` and
    ``corner - curve(alpha)``, which is ``>= 0`` at ``alpha = 0`` and
    ``<= 0`` at ``alpha = 1``.
    """
    dx, dy = dims.D_a - x, dims.D_b - y

    def cross(a):
        ga, gb, _ = isa_family_entropies(a, dims)
        return dx * (dims.D_b - gb) - dy * (dims.D_a - ga)

    lo, hi = 0.0, 1.0
    c_lo, c_hi = cross(lo), cross(hi)
    if c_lo < 0.0 or c_hi > 0.0:
        raise NumericalError(f"target ({x}, {y}) is not bracketed by the line family")
    for _ in range(COLLINEAR_MAX_ITER):
        if hi - lo <= COLLINEAR_TOL:
            break
        mid = 0.5 * (lo + hi)
        if cross(mid) >= 0.0:
            lo = mid
        else:
            hi = mid
    else:
        raise NumericalError("collinearity bisection did not converge")
    return 0.5 * (lo + hi)


def boundary_state_for(x, y, dims):
    """A state with entropy point ``(x, y, f(x, y))``.

    For ``x <= r(y)`` the simplex family is used with
    ``beta = 1 - sqrt(1 - x/D_A)`` and ``alpha = 1 - sqrt(1 - y/D_B)``.
    Otherwise the line-family state whose entropy point is collinear with
    the target and the maximally mixed corner is mixed with ``1/d`` so that
    the point slides down the line onto the target.
    """
    dims = bounds.as_dims(dims)
    for name, v, top in (("x", x, dims.D_a), ("y", y, dims.D_b)):
        if not -bounds.DOMAIN_TOL <= v <= top + bounds.DOMAIN_TOL:
            raise ParameterError(f"{name}={v!r} outside [0, {top!r}]")
    x = min(max(float(x), 0.0), dims.D_a)
    y = min(max(float(y), 0.0), dims.D_b)

    if bounds.dssa_region(x, y, dims):
        beta = 1.0 - math.sqrt(max(1.0 - x / dims.D_a, 0.0))
        alpha = 1.0 - math.sqrt(max(1.0 - y / dims.D_b, 0.0))
        # alpha + beta <= 1 is the region condition; trim roundoff
        excess = alpha + beta - 1.0
        if excess > 0.0:
            alpha -= excess
        return dssa_family(alpha, beta, dims)

    dx, dy = dims.D_a - x, dims.D_b - y
    if dx + dy <= 1e-15:
        return maximally_mixed((dims.d_a, dims.d_b))
    a0 = _collinear_alpha(x, y, dims)
    ga, gb, _ = isa_family_entropies(a0, dims)
    lam2 = (dx + dy) / ((dims.D_a - ga) + (dims.D_b - gb))
    return mix_with_maximally_mixed(isa_family(a0, dims), math.sqrt(min(lam2, 1.0)))


def family_state(params, dims):
    """State for :class:`ExtremalParams`.

    ``mix-line`` mixes the line-family state at parameter ``beta`` with
    ``1/d`` at weight ``alpha``.
    """
    if params.family == ISA_LINE:
        return isa_family(params.alpha, dims)
    if params.family == DSSA_SIMPLEX:
        return dssa_family(params.alpha, params.beta, dims)
    return mix_with_maximally_mixed(isa_family(params.beta, dims), params.alpha)


def family_sweep(family, dims, step=0.1, beta=0.0):
    """Measured entropy points and sharp-bound slack along a family.

    Returns rows ``(alpha, beta, x, y, z, slack)`` with ``slack = f(x, y) - z``.
    ``alpha`` (and for the simplex also ``beta``) runs over multiples of
    ``step`` in ``[0, 1]``; the simplex keeps ``alpha + beta <= 1``.
    """
    from .states import marginal_entropies

    if not 0.0 < step <= 1.0:
        raise ParameterError(f"step={step!r} outside (0, 1]")
    n = int(math.floor(1.0 / step + 1e-9))
    grid = [min(i * step, 1.0) for i in range(n + 1)]
    if family == DSSA_SIMPLEX:
        pairs = [(a, b) for a in grid for b in grid if a + b <= 1.0 + 1e-12]
    else:
        pairs = [(a, beta) for a in grid]
    rows = []
    for a, b in pairs:
        b = min(b, 1.0 - a) if family == DSSA_SIMPLEX else b
        rho = family_state(ExtremalParams(family, a, b), dims)
        x, y, z = marginal_entropies(rho)
        rows.append((a, b, x, y, z, float(bounds.sharp_bound(x, y, dims)) - z))
    return rows
