"""Upper and lower bounds on the joint linear entropy of a bipartite state.

Every bound is a function of the marginal entropies ``x = S_L(rho_A)`` and
``y = S_L(rho_B)`` and the local dimensions. Functions accept scalars or
numpy arrays (broadcast together) and return the same kind.

The central object is the sharp bound ``f``: the nonlinear bound ``g`` on
the region ``x <= r(y)`` and the linear bound ``h`` beyond it. The two
pieces meet with matching gradients on the curve ``x = r(y)``.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, ParameterError

DOMAIN_TOL = 1e-12
RADICAND_TOL = 1e-12
OMEGA_TOL = 1e-12
BISECTION_TOL = 1e-12
BISECTION_MAX_ITER = 200
VIOLATION_TOL = 1e-9

DSSA, ISA, OMEGA = "dssa", "isa", "omega"


@dataclass(frozen=True)
class DimPair:
    d_a: int
    d_b: int

    def __post_init__(self):
        for d in (self.d_a, self.d_b):
            if int(d) != d or d < 2:
                raise ParameterError(f"local dimensions must be integers >= 2, got {d}")

    @property
    def D_a(self):
        return 1.0 - 1.0 / self.d_a

    @property
    def D_b(self):
        return 1.0 - 1.0 / self.d_b

    @property
    def D_ab(self):
        return 1.0 - 1.0 / (self.d_a * self.d_b)

    def swapped(self):
        return DimPair(self.d_b, self.d_a)

    def __iter__(self):
        return iter((self.d_a, self.d_b))


def as_dims(dims):
    if isinstance(dims, DimPair):
        return dims
    d_a, d_b = dims
    return DimPair(int(d_a), int(d_b))


def _wrap(values, scalar):
    if scalar:
        return float(values) + 0.0
    return values


def _is_scalar(*args):
    return all(np.ndim(a) == 0 for a in args)


def _domain(v, upper, name):
    v = np.asarray(v, dtype=float)
    if np.any(np.isnan(v)):
        raise ParameterError(f"{name} contains NaN")
    if np.any(v < -DOMAIN_TOL) or np.any(v > upper + DOMAIN_TOL):
        bad = v[(v < -DOMAIN_TOL) | (v > upper + DOMAIN_TOL)].ravel()[0]
        raise ParameterError(f"{name}={bad!r} outside [0, {upper!r}]")
    return np.clip(v, 0.0, upper)


def _sqrt(r):
    r = np.asarray(r, dtype=float)
    if np.any(r < -RADICAND_TOL):
        raise ParameterError(f"negative radicand {np.min(r)!r}")
    return np.sqrt(np.clip(r, 0.0, None))


# ---------------------------------------------------------------------------
# classical and earlier bounds

def classic_bounds(x, y):
    """``(x + y, |x - y|)``: subadditivity and Araki-Lieb."""
    scalar = _is_scalar(x, y)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return _wrap(x + y, scalar), _wrap(np.abs(x - y), scalar)


def audenaert_bound(x, y):
    """Dimension-free nonlinear bound, defined where ``sqrt(1-x) + sqrt(1-y) >= 1``.

    Returns ``None`` (scalars) or NaN entries (arrays) outside that region.
    """
    scalar = _is_scalar(x, y)
    x = _domain(x, 1.0, "x")
    y = _domain(y, 1.0, "y")
    sx, sy = np.sqrt(1.0 - x), np.sqrt(1.0 - y)
    val = x + y - 2.0 * (1.0 - sx) * (1.0 - sy)
    val = np.where(sx + sy >= 1.0, val, np.nan)
    if scalar:
        v = float(val)
        return None if math.isnan(v) else v
    return val


def appel_nonlinear_bound(x, y, dims):
    """``1 + 1/(d_A d_B) - 2 sqrt((1-x)(1-y)/(d_A d_B))``."""
    dims = as_dims(dims)
    scalar = _is_scalar(x, y)
    x = _domain(x, dims.D_a, "x")
    y = _domain(y, dims.D_b, "y")
    n = dims.d_a * dims.d_b
    val = 1.0 + 1.0 / n - 2.0 * np.sqrt((1.0 - x) * (1.0 - y) / n)
    return _wrap(val, scalar)


# ---------------------------------------------------------------------------
# the two pieces of the sharp bound

def isa_h(x, y, dims):
    """Linear bound ``x/d_B + y/d_A + D_A D_B``."""
    dims = as_dims(dims)
    scalar = _is_scalar(x, y)
    x = _domain(x, dims.D_a, "x")
    y = _domain(y, dims.D_b, "y")
    return _wrap(x / dims.d_b + y / dims.d_a + dims.D_a * dims.D_b, scalar)


def dssa_g(x, y, dims):
    """Nonlinear bound ``x + y - 2 D_A D_B (1 - sqrt(1 - x/D_A))(1 - sqrt(1 - y/D_B))``.

    Only valid as an upper bound where ``x <= dssa_restriction_r(y)``.
    """
    dims = as_dims(dims)
    scalar = _is_scalar(x, y)
    x = _domain(x, dims.D_a, "x")
    y = _domain(y, dims.D_b, "y")
    ca = 1.0 - _sqrt(1.0 - x / dims.D_a)
    cb = 1.0 - _sqrt(1.0 - y / dims.D_b)
    return _wrap(x + y - 2.0 * dims.D_a * dims.D_b * ca * cb, scalar)


def dssa_restriction_r(y, dims):
    """``D_A (y/D_B - 1 + 2 sqrt(1 - y/D_B))``; the nonlinear piece applies for ``x <= r(y)``."""
    dims = as_dims(dims)
    scalar = _is_scalar(y)
    y = _domain(y, dims.D_b, "y")
    u = y / dims.D_b
    return _wrap(dims.D_a * (u - 1.0 + 2.0 * _sqrt(1.0 - u)), scalar)


def dssa_region(x, y, dims):
    """Boolean mask of points where the nonlinear piece is used (ties included)."""
    dims = as_dims(dims)
    x = _domain(x, dims.D_a, "x")
    return x <= np.asarray(dssa_restriction_r(y, dims))


def sharp_bound(x, y, dims):
    """Values of the sharp bound ``f`` without branch tags."""
    dims = as_dims(dims)
    scalar = _is_scalar(x, y)
    x = _domain(x, dims.D_a, "x")
    y = _domain(y, dims.D_b, "y")
    val = np.where(dssa_region(x, y, dims), dssa_g(x, y, dims), isa_h(x, y, dims))
    return _wrap(val, scalar)


def branch_tag(x, y, dims):
    """``"dssa"``, ``"isa"`` or ``"omega"`` (within 1e-12 of the switching curve)."""
    dims = as_dims(dims)
    scalar = _is_scalar(x, y)
    x = _domain(x, dims.D_a, "x")
    r = np.asarray(dssa_restriction_r(y, dims))
    tag = np.where(np.abs(x - r) <= OMEGA_TOL, OMEGA, np.where(x <= r, DSSA, ISA))
    return str(tag) if scalar else tag


def sharp_f(x, y, dims):
    """Tight upper bound on ``S_L(rho_AB)`` and the branch that produced it.

    Returns
    -------
    value : float or ndarray
    branch : str or ndarray of str
        ``"dssa"`` where ``x < r(y)``, ``"isa"`` where ``x > r(y)`` and
        ``"omega"`` on the switching curve, where both pieces agree.
    """
    return sharp_bound(x, y, dims), branch_tag(x, y, dims)


def gamma_curve(t, dims):
    """Curve on which the two pieces of ``f`` meet, parametrised by ``x = t``.

    Returns ``(x, y, z)`` with ``x = r(y)`` and ``z = h(x, y) = g(x, y)``.
    """
    dims = as_dims(dims)
    scalar = _is_scalar(t)
    t = _domain(t, dims.D_a, "t")
    da, db = dims.d_a, dims.d_b
    s = _sqrt(1.0 - t / dims.D_a)
    g1 = t
    g2 = dims.D_b * (t / dims.D_a - 1.0 + 2.0 * s)
    g3 = ((da + db - 2) / (db * (da - 1)) * t
          + 2.0 * (db - 1) / (db * da) * s
          + (da - 2) * (db - 1) / (da * db))
    return tuple(_wrap(np.asarray(c, dtype=float), scalar) for c in (g1, g2, g3))


# ---------------------------------------------------------------------------
# tripartite

def sisa_bound(s_ac, s_bc, s_c, dims):
    """Upper bound on ``S_L(rho_ABC)`` from the tripartite inequality.

    ``S_ABC <= S_AC/d_B + S_BC/d_A + (d_A d_B + 1 - d_A - d_B)/(d_A d_B) - S_C/(d_A d_B)``.
    Only the dimensions of ``A`` and ``B`` enter.
    """
    dims = as_dims(dims)
    scalar = _is_scalar(s_ac, s_bc, s_c)
    da, db = dims.d_a, dims.d_b
    n = da * db
    val = (np.asarray(s_ac, dtype=float) / db + np.asarray(s_bc, dtype=float) / da
           + (n + 1 - da - db) / n - np.asarray(s_c, dtype=float) / n)
    return _wrap(val, scalar)


# ---------------------------------------------------------------------------
# Renyi-2 and purity forms

def _expo(s):
    return 1.0 - np.exp2(-np.asarray(s, dtype=float))


def _renyi_domain(v, d, name):
    return _domain(v, math.log2(d), name)


def renyi_f(x, y, dims):
    """Upper bound on ``S^2(rho_AB)`` from the Renyi-2 marginals.

    Computed by mapping ``t -> 1 - 2^-t`` into linear entropies, applying
    :func:`sharp_f` and mapping back.
    """
    dims = as_dims(dims)
    scalar = _is_scalar(x, y)
    x = _renyi_domain(x, dims.d_a, "x")
    y = _renyi_domain(y, dims.d_b, "y")
    lx = np.clip(_expo(x), 0.0, dims.D_a)
    ly = np.clip(_expo(y), 0.0, dims.D_b)
    f, tag = sharp_f(lx, ly, dims)
    val = -np.log2(1.0 - np.asarray(f))
    return _wrap(val, scalar), (str(tag) if scalar else tag)


def renyi_isa(x, y, dims):
    """Closed form ``-log2(2^-x/d_B + 2^-y/d_A - 1/(d_A d_B))`` of the linear piece."""
    dims = as_dims(dims)
    scalar = _is_scalar(x, y)
    da, db = dims.d_a, dims.d_b
    px, py = np.exp2(-np.asarray(x, dtype=float)), np.exp2(-np.asarray(y, dtype=float))
    return _wrap(-np.log2(px / db + py / da - 1.0 / (da * db)), scalar)


def renyi_dssa(x, y, dims):
    """Closed form of the nonlinear piece in Renyi-2 coordinates."""
    dims = as_dims(dims)
    scalar = _is_scalar(x, y)
    da, db = dims.d_a, dims.d_b
    px, py = np.exp2(-np.asarray(x, dtype=float)), np.exp2(-np.asarray(y, dtype=float))
    ca = 1.0 - _sqrt((da * px - 1.0) / (da - 1))
    cb = 1.0 - _sqrt((db * py - 1.0) / (db - 1))
    inner = px + py - 1.0 + 2.0 * dims.D_a * dims.D_b * ca * cb
    return _wrap(-np.log2(inner), scalar)


def renyi_restriction(y, dims):
    """Switching curve in Renyi-2 coordinates: the nonlinear piece applies for ``x <= r_R(y)``."""
    dims = as_dims(dims)
    scalar = _is_scalar(y)
    db = dims.d_b
    py = np.exp2(-np.asarray(y, dtype=float))
    r = dims.D_a * ((1.0 - db * py) / (db - 1) + 2.0 * _sqrt((db * py - 1.0) / (db - 1)))
    return _wrap(-np.log2(1.0 - r), scalar)


def renyi_piecewise(x, y, dims):
    """Renyi-2 bound assembled from the closed-form pieces (cross-check of :func:`renyi_f`)."""
    scalar = _is_scalar(x, y)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    r = np.asarray(renyi_restriction(y, dims))
    val = np.where(x <= r, renyi_dssa(x, y, dims), renyi_isa(x, y, dims))
    return _wrap(val, scalar)


def purity_f(gamma_a, gamma_b, dims):
    """Lower bound on ``Tr(rho_AB^2)`` from the marginal purities: ``1 - f(1-gamma_A, 1-gamma_B)``."""
    dims = as_dims(dims)
    scalar = _is_scalar(gamma_a, gamma_b)
    ga = np.asarray(gamma_a, dtype=float)
    gb = np.asarray(gamma_b, dtype=float)
    if np.any(ga < 1.0 / dims.d_a - DOMAIN_TOL) or np.any(ga > 1.0 + DOMAIN_TOL):
        raise ParameterError(f"gamma_A outside [1/{dims.d_a}, 1]")
    if np.any(gb < 1.0 / dims.d_b - DOMAIN_TOL) or np.any(gb > 1.0 + DOMAIN_TOL):
        raise ParameterError(f"gamma_B outside [1/{dims.d_b}, 1]")
    return _wrap(1.0 - np.asarray(sharp_bound(1.0 - ga, 1.0 - gb, dims)), scalar)


def purity_isa(gamma_a, gamma_b, dims):
    """Linear piece in purity form: ``gamma_A/d_B + gamma_B/d_A - 1/(d_A d_B)``."""
    dims = as_dims(dims)
    return gamma_a / dims.d_b + gamma_b / dims.d_a - 1.0 / (dims.d_a * dims.d_b)


def purity_dssa(gamma_a, gamma_b, dims):
    """Nonlinear piece in purity form.

    ``gamma_A + gamma_B - 1 + 2 D_A D_B (1 - sqrt((d_A gamma_A - 1)/(d_A - 1)))
    (1 - sqrt((d_B gamma_B - 1)/(d_B - 1)))``
    """
    dims = as_dims(dims)
    scalar = _is_scalar(gamma_a, gamma_b)
    da, db = dims.d_a, dims.d_b
    ga = np.asarray(gamma_a, dtype=float)
    gb = np.asarray(gamma_b, dtype=float)
    ca = 1.0 - _sqrt((da * ga - 1.0) / (da - 1))
    cb = 1.0 - _sqrt((db * gb - 1.0) / (db - 1))
    return _wrap(ga + gb - 1.0 + 2.0 * dims.D_a * dims.D_b * ca * cb, scalar)


# ---------------------------------------------------------------------------
# lower bounds from purification

def _purifier_dims(dims, side):
    """Dimension pair ``(d_side, d_A d_B)`` for the system ``side`` + purifying copy."""
    d_r = dims.d_a * dims.d_b
    return DimPair(dims.d_a if side == 1 else dims.d_b, d_r)


def _invert_increasing(func, target, hi, *, tol=BISECTION_TOL, max_iter=BISECTION_MAX_ITER):
    """Smallest ``z`` in ``[0, hi]`` with ``func(z) >= target`` (elementwise bisection)."""
    target = np.asarray(target, dtype=float)
    lo = np.zeros_like(target)
    up = np.full_like(target, hi)
    f_lo = np.asarray(func(lo))
    f_hi = np.asarray(func(up))
    if np.any(f_hi < target - VIOLATION_TOL):
        raise NumericalError("inversion target is not bracketed by [0, D_R]")
    done = f_lo >= target
    for _ in range(max_iter):
        if np.all(done | (up - lo <= tol)):
            break
        mid = 0.5 * (lo + up)
        above = np.asarray(func(mid)) >= target
        up = np.where(above, mid, up)
        lo = np.where(above, lo, mid)
    else:
        if not np.all(done | (up - lo <= tol)):
            raise NumericalError(f"bisection did not reach {tol} in {max_iter} steps")
    return np.where(done, 0.0, 0.5 * (lo + up))


def _inverted_side(x, y, dims, side):
    """Lower bound on ``z`` from ``own <= f_{own,R}(other, z)`` for one purified pair.

    ``side == 1`` inverts ``y <= f_{A,R}(x, z)``, ``side == 2`` inverts
    ``x <= f_{B,R}(y, z)``; ``R`` is a copy of ``AB`` so ``S_L(rho_R) = z``.
    """
    pdims = _purifier_dims(dims, side)
    arg, target = (x, y) if side == 1 else (y, x)
    z = _invert_increasing(lambda z: sharp_bound(arg, z, pdims), target, pdims.D_b)
    on_dssa = np.asarray(dssa_region(arg, z, pdims))
    return z, on_dssa


def inverted_lower_f(x, y, dims):
    """Lower bound on ``S_L(rho_AB)`` obtained by applying ``f`` to a purification.

    Both inequalities ``y <= f_{A,R}(x, z)`` and ``x <= f_{B,R}(y, z)`` with
    ``d_R = d_A d_B`` are inverted for ``z`` by monotone bisection and the
    larger result is returned.

    Returns
    -------
    value : float or ndarray
    method : str or ndarray of str
        ``"zero"`` when both inversions give 0, otherwise ``"g1"``, ``"h1"``,
        ``"g2"`` or ``"h2"``: the binding inversion (1 = via A, 2 = via B)
        and the piece of ``f`` active at the solution.
    """
    dims = as_dims(dims)
    scalar = _is_scalar(x, y)
    x = _domain(x, dims.D_a, "x")
    y = _domain(y, dims.D_b, "y")
    x, y = np.broadcast_arrays(x, y)
    z1, d1 = _inverted_side(x, y, dims, 1)
    z2, d2 = _inverted_side(x, y, dims, 2)
    val = np.maximum(z1, z2)
    first = z1 >= z2
    tag = np.where(first, np.where(d1, "g1", "h1"), np.where(d2, "g2", "h2"))
    tag = np.where(val == 0.0, "zero", tag)
    return _wrap(val, scalar), (str(tag) if scalar else tag)


def h_tilde_1(x, y, dims):
    """Inversion of the linear piece via ``A``: ``d_A y - x/d_B - (d_A d_B - 1)(d_A - 1)/(d_A d_B)``."""
    dims = as_dims(dims)
    da, db = dims.d_a, dims.d_b
    return da * np.asarray(y) - np.asarray(x) / db - (da * db - 1) * (da - 1) / (da * db)


def h_tilde_2(x, y, dims):
    """Inversion of the linear piece via ``B``: ``d_B x - y/d_A - (d_A d_B - 1)(d_B - 1)/(d_A d_B)``."""
    dims = as_dims(dims)
    da, db = dims.d_a, dims.d_b
    return db * np.asarray(x) - np.asarray(y) / da - (da * db - 1) * (db - 1) / (da * db)


def _g_tilde(own, other, d_own_max, d_ab_max):
    # z = D_AB (1 - (D a + sqrt((1 - D a)^2 + (own - other)/D_AB))^2), a = 1 - sqrt(1 - own/D)
    a = 1.0 - _sqrt(1.0 - np.asarray(own) / d_own_max)
    rad = (1.0 - d_own_max * a) ** 2 + (np.asarray(own) - np.asarray(other)) / d_ab_max
    s = d_own_max * a + np.sqrt(np.clip(rad, 0.0, None))
    return d_ab_max * (1.0 - s * s), rad


def g_tilde_1(x, y, dims):
    """Inversion of the nonlinear piece via ``A`` (NaN where it has no real solution)."""
    dims = as_dims(dims)
    z, rad = _g_tilde(x, y, dims.D_a, dims.D_ab)
    return np.where(rad >= 0.0, z, np.nan)


def g_tilde_2(x, y, dims):
    """Inversion of the nonlinear piece via ``B`` (NaN where it has no real solution)."""
    dims = as_dims(dims)
    z, rad = _g_tilde(y, x, dims.D_b, dims.D_ab)
    return np.where(rad >= 0.0, z, np.nan)


def r_tilde_1(x, dims):
    """The nonlinear inversion via ``A`` is valid for ``z <= D_AB (x/D_A - 1 + 2 sqrt(1 - x/D_A))``."""
    dims = as_dims(dims)
    u = np.asarray(x) / dims.D_a
    return dims.D_ab * (u - 1.0 + 2.0 * _sqrt(1.0 - u))


def r_tilde_2(y, dims):
    dims = as_dims(dims)
    u = np.asarray(y) / dims.D_b
    return dims.D_ab * (u - 1.0 + 2.0 * _sqrt(1.0 - u))


def inverted_closed_form(x, y, dims):
    """Closed-form lower bound from the explicit inversions of both pieces.

    For each side the nonlinear inversion is used when it is real and its
    value lies below the switching level ``r~``; otherwise the linear one.
    Negative values are raised to 0.
    """
    dims = as_dims(dims)
    scalar = _is_scalar(x, y)
    x = _domain(x, dims.D_a, "x")
    y = _domain(y, dims.D_b, "y")

    def side(g, r, h):
        g = np.asarray(g)
        use_g = np.isfinite(g) & (np.nan_to_num(g, nan=np.inf) <= r)
        return np.maximum(np.where(use_g, g, h), 0.0)

    z1 = side(g_tilde_1(x, y, dims), r_tilde_1(x, dims), h_tilde_1(x, y, dims))
    z2 = side(g_tilde_2(x, y, dims), r_tilde_2(y, dims), h_tilde_2(x, y, dims))
    return _wrap(np.maximum(z1, z2), scalar)


# ---------------------------------------------------------------------------
# reports

UPPER, LOWER = "upper", "lower"

BOUND_KINDS = {
    "subadditivity": UPPER,
    "audenaert": UPPER,
    "appel": UPPER,
    "isa": UPPER,
    "dssa": UPPER,
    "sharp": UPPER,
    "araki_lieb": LOWER,
    "inverted": LOWER,
}


def evaluate_points(x, y, z, dims):
    """Evaluate every bipartite bound on arrays of entropy points.

    Returns a dict ``name -> {"value", "slack", "applicable", "branch"}``
    of arrays. Slack is ``bound - z`` for upper bounds and ``z - bound``
    for lower bounds; entries where a bound does not apply have NaN value
    and slack.
    """
    dims = as_dims(dims)
    x = _domain(x, dims.D_a, "x")
    y = _domain(y, dims.D_b, "y")
    z = _domain(z, dims.D_ab, "z")
    x, y, z = np.broadcast_arrays(x, y, z)
    everywhere = np.ones(x.shape, dtype=bool)
    none = np.full(x.shape, "", dtype=object)

    sa, al = classic_bounds(x, y)
    aud = audenaert_bound(x, y)
    in_dssa = dssa_region(x, y, dims)
    sharp, sharp_tag = sharp_f(x, y, dims)
    inv, inv_tag = inverted_lower_f(x, y, dims)
    raw = {
        "subadditivity": (sa, everywhere, none),
        "audenaert": (aud, np.isfinite(aud), none),
        "appel": (appel_nonlinear_bound(x, y, dims), everywhere, none),
        "isa": (isa_h(x, y, dims), everywhere, none),
        "dssa": (np.where(in_dssa, dssa_g(x, y, dims), np.nan), in_dssa, none),
        "sharp": (sharp, everywhere, np.asarray(sharp_tag, dtype=object)),
        "araki_lieb": (al, everywhere, none),
        "inverted": (inv, everywhere, np.asarray(inv_tag, dtype=object)),
    }
    table = {}
    for name, (value, applicable, branch) in raw.items():
        value = np.where(applicable, value, np.nan)
        slack = value - z if BOUND_KINDS[name] == UPPER else z - value
        table[name] = {"value": value, "slack": slack, "applicable": applicable,
                       "branch": branch}
    return table


@dataclass(frozen=True)
class BoundRecord:
    name: str
    kind: str
    value: float | None
    branch: str
    slack: float | None
    applicable: bool
    satisfied: bool

    def to_dict(self):
        return {"value": self.value, "slack": self.slack, "branch": self.branch,
                "kind": self.kind, "applicable": self.applicable,
                "satisfied": self.satisfied}


@dataclass(frozen=True)
class BoundReport:
    dims: tuple
    x: float
    y: float
    z: float
    records: tuple
    witness: bool

    def __getitem__(self, name):
        for r in self.records:
            if r.name == name:
                return r
        raise KeyError(name)

    @property
    def all_satisfied(self):
        return all(r.satisfied for r in self.records)

    def to_dict(self):
        return {
            "dims": list(self.dims),
            "x": self.x, "y": self.y, "z": self.z,
            "bounds": {r.name: r.to_dict() for r in self.records},
            "witness": self.witness,
        }


def report_for_point(x, y, z, dims, tol=VIOLATION_TOL):
    """:class:`BoundReport` for a single entropy point."""
    dims = as_dims(dims)
    table = evaluate_points(x, y, z, dims)
    records = []
    for name, row in table.items():
        applicable = bool(row["applicable"])
        value = float(row["value"]) if applicable else None
        slack = float(row["slack"]) if applicable else None
        records.append(BoundRecord(
            name, BOUND_KINDS[name], value, str(row["branch"]), slack, applicable,
            (not applicable) or slack >= -tol))
    witness = bool(x > z or y > z)
    return BoundReport((dims.d_a, dims.d_b), float(x), float(y), float(z), tuple(records),
                       witness)


MEASURE_TOL = 1e-6


def evaluate_all(rho, tol=VIOLATION_TOL, measure_tol=MEASURE_TOL):
    """Measure ``(x, y, z)`` of a bipartite state and evaluate every bound on it.

    States accepted under loose validation tolerances can have entropies a
    little outside their ranges; excesses up to ``measure_tol`` are clamped.
    ``witness`` is set when a marginal is more mixed than the joint state,
    which no classical distribution allows.
    """
    from .states import marginal_entropies

    dims = as_dims(rho.dims)
    point = []
    for name, v, top in zip("xyz", marginal_entropies(rho), (dims.D_a, dims.D_b, dims.D_ab)):
        if not -measure_tol <= v <= top + measure_tol:
            raise ParameterError(f"measured {name}={v!r} outside [0, {top!r}]")
        point.append(min(max(v, 0.0), top))
    return report_for_point(*point, dims, tol)
