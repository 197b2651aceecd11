"""Random states, Monte Carlo checks of every inequality, and identity checks.

Sample ``i`` of a campaign is drawn from its own Philox stream keyed by
``(seed, i)``, and samples are processed in fixed-size chunks, so results
do not depend on how many worker processes share the chunks.
"""

import json
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import reduce
from operator import mul
from pathlib import Path

import numpy as np

from . import bloch, bounds, extremal
from .errors import NumericalError, ParameterError
from .states import DensityMatrix, marginal_entropies, partial_trace, purity

log = logging.getLogger(__name__)

CHUNK = 2048
VIOLATION_TOL = bounds.VIOLATION_TOL
ABORT_TOL = 1e-6
PEF_QS = (1.5, 2.0, 3.0)
NORM_QS = (1.0, 2.0, 3.0)
ENSEMBLES = ("hs", "pure", "rank")


# ---------------------------------------------------------------------------
# samplers

def substream(seed, index):
    """Independent generator for sample ``index`` of a campaign seeded with ``seed``."""
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(index),))
    return np.random.Generator(np.random.Philox(ss))


def _ginibre(rng, rows, cols):
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / math.sqrt(2)


def hs_matrix(d, rng, rank=None):
    g = _ginibre(rng, d, d if rank is None else rank)
    m = g @ g.conj().T
    return m / np.trace(m).real


def sample_hs_state(d, rng, dims=None):
    """Hilbert-Schmidt random state ``G G^† / Tr(G G^†)`` with complex Gaussian ``G``."""
    if d < 2:
        raise ParameterError(f"dimension must be >= 2, got {d}")
    return DensityMatrix(hs_matrix(d, rng), dims)


def sample_rank_state(d, k, rng, dims=None):
    """Random state of rank ``k`` from a ``d x k`` Ginibre matrix."""
    if not 1 <= k <= d:
        raise ParameterError(f"rank {k} outside [1, {d}]")
    return DensityMatrix(hs_matrix(d, rng, rank=k), dims)


def pure_matrix(d, rng):
    v = _ginibre(rng, d, 1)[:, 0]
    v /= np.linalg.norm(v)
    return np.outer(v, v.conj())


def sample_pure_bipartite(d_a, d_b, rng):
    """Pure state from a normalised complex Gaussian vector on ``d_a x d_b``."""
    if d_a < 2 or d_b < 2:
        raise ParameterError(f"dimensions must be >= 2, got {(d_a, d_b)}")
    return DensityMatrix(pure_matrix(d_a * d_b, rng), (d_a, d_b))


# ---------------------------------------------------------------------------
# batched quantities

def batch_reduce(mats, dims, keep):
    """Partial traces of a stack of matrices, keeping the factors in ``keep``."""
    n = len(dims)
    t = mats.reshape((mats.shape[0],) + tuple(dims) * 2)
    letters = "abcdefghijklmnopqrstuvwxy"
    row = list(letters[:n])
    col = list(letters[n:2 * n])
    for i in range(n):
        if i not in keep:
            col[i] = row[i]
    out = "".join(row[i] for i in keep) + "".join(col[i] for i in keep)
    r = np.einsum("z" + "".join(row) + "".join(col) + "->z" + out, t)
    d = reduce(mul, (dims[i] for i in keep), 1)
    return r.reshape(-1, d, d)


def batch_purity(mats):
    return np.sum(mats.real**2 + mats.imag**2, axis=(-2, -1))


def _qnorm(values, q, axis):
    return np.sum(np.abs(values) ** q, axis=axis) ** (1.0 / q)


def structural_slacks(mats, dims):
    """Slacks of the operator-level lemmas for a stack of bipartite states.

    Returns a dict with the Schatten-norm inequality for each q in
    ``PEF_QS``, the pairwise correlation bound in the standard bases and
    the correlation-tensor norm bound in adapted bases for each q in
    ``NORM_QS``.
    """
    da, db = dims
    rho_a = batch_reduce(mats, dims, [0])
    rho_b = batch_reduce(mats, dims, [1])
    out = {}

    w = np.clip(np.linalg.eigvalsh(mats), 0.0, None)
    wa = np.clip(np.linalg.eigvalsh(rho_a), 0.0, None)
    wb = np.clip(np.linalg.eigvalsh(rho_b), 0.0, None)
    for q in PEF_QS:
        out[f"schatten_q{q:g}"] = (1.0 + _qnorm(w, q, -1)
                                   - _qnorm(wa, q, -1) - _qnorm(wb, q, -1))

    ba, bb = bloch.gellmann_basis(da), bloch.gellmann_basis(db)
    t = np.real(np.einsum("nabcd,ica,jdb->nij", mats.reshape(-1, da, db, da, db),
                          ba.elements, bb.elements))
    loc_a, loc_b, joint = t[:, 1:, 0], t[:, 0, 1:], t[:, 1:, 1:]
    sa, sb = math.sqrt(da - 1), math.sqrt(db - 1)
    rhs = (sb * np.abs(loc_a)[:, :, None] + sa * np.abs(loc_b)[:, None, :] - sa * sb)
    out["pairwise_correlation"] = np.min(np.abs(joint) - rhs, axis=(1, 2))

    oa = bloch.adapted_rotations(loc_a)
    ob = bloch.adapted_rotations(loc_b)
    joint_ad = oa @ joint @ np.swapaxes(ob, 1, 2)
    na = np.linalg.norm(loc_a, axis=1)
    nb = np.linalg.norm(loc_b, axis=1)
    for q in NORM_QS:
        nab = _qnorm(joint_ad.reshape(joint_ad.shape[0], -1), q, -1)
        out[f"tensor_norm_q{q:g}"] = nab - (sb * na + sa * nb - sa * sb)
    return out


# ---------------------------------------------------------------------------
# campaigns

@dataclass(frozen=True)
class SamplerConfig:
    dims: tuple
    ensemble: str = "hs"
    samples: int = 1000
    seed: int = 0
    workers: int = 1
    rank: int | None = None
    inject: int = 0
    structural: bool = True

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        if len(dims) not in (2, 3) or any(d < 2 for d in dims):
            raise ParameterError(f"dims must be 2 or 3 factors >= 2, got {dims}")
        if self.ensemble not in ENSEMBLES:
            raise ParameterError(f"unknown ensemble {self.ensemble!r}")
        if self.samples < 1:
            raise ParameterError("sample count must be >= 1")
        if self.workers < 1:
            raise ParameterError("worker count must be >= 1")
        d = reduce(mul, dims, 1)
        if self.ensemble == "rank" and not (self.rank and 1 <= self.rank <= d):
            raise ParameterError(f"rank must lie in [1, {d}] for the rank ensemble")
        if self.inject and len(dims) != 2:
            raise ParameterError("extremal injection needs a bipartite campaign")

    @property
    def tripartite(self):
        return len(self.dims) == 3

    def to_dict(self):
        d = asdict(self)
        d["dims"] = list(self.dims)
        del d["workers"]
        return d


def _draw(config, index):
    rng = substream(config.seed, index)
    d = reduce(mul, config.dims, 1)
    if config.ensemble == "hs":
        return hs_matrix(d, rng)
    if config.ensemble == "rank":
        return hs_matrix(d, rng, rank=config.rank)
    return pure_matrix(d, rng)


def _draw_injected(config, index):
    """Boundary state for a random target, alternating between the two pieces of ``f``."""
    rng = substream(config.seed, index)
    dims = bounds.as_dims(config.dims)
    want_dssa = index % 2 == 0
    while True:
        x = rng.uniform(0.0, dims.D_a)
        y = rng.uniform(0.0, dims.D_b)
        if bool(bounds.dssa_region(x, y, dims)) == want_dssa:
            return extremal.boundary_state_for(x, y, dims).matrix


def _run_chunk(config, start, stop):
    mats = np.stack([
        _draw(config, i) if i < config.samples else _draw_injected(config, i)
        for i in range(start, stop)
    ])
    dims = config.dims
    if config.tripartite:
        ent = {
            "S_C": 1.0 - batch_purity(batch_reduce(mats, dims, [2])),
            "S_AC": 1.0 - batch_purity(batch_reduce(mats, dims, [0, 2])),
            "S_BC": 1.0 - batch_purity(batch_reduce(mats, dims, [1, 2])),
            "S_ABC": 1.0 - batch_purity(mats),
        }
        bound = bounds.sisa_bound(ent["S_AC"], ent["S_BC"], ent["S_C"], dims[:2])
        table = {"sisa": {"value": bound, "slack": bound - ent["S_ABC"],
                          "applicable": np.ones(len(mats), bool),
                          "branch": np.full(len(mats), "", dtype=object)}}
        return {"entropies": ent, "bounds": table, "lemmas": {}}

    x = 1.0 - batch_purity(batch_reduce(mats, dims, [0]))
    y = 1.0 - batch_purity(batch_reduce(mats, dims, [1]))
    z = 1.0 - batch_purity(mats)
    table = bounds.evaluate_points(x, y, z, dims)
    lemmas = structural_slacks(mats, dims) if config.structural else {}
    return {"entropies": {"x": x, "y": y, "z": z}, "bounds": table, "lemmas": lemmas}


def _chunks(total):
    return [(s, min(s + CHUNK, total)) for s in range(0, total, CHUNK)]


def _num(v):
    v = float(v)
    return None if math.isnan(v) else v


def _records(config, start, result):
    ent = result["entropies"]
    n = len(next(iter(ent.values())))
    for k in range(n):
        i = start + k
        rec = {"seed_index": i, "dims": list(config.dims)}
        if config.tripartite:
            rec["entropies"] = {name: float(v[k]) for name, v in ent.items()}
        else:
            rec["x"], rec["y"], rec["z"] = (float(ent[c][k]) for c in "xyz")
        rec["bounds"] = {
            name: {"value": _num(row["value"][k]), "slack": _num(row["slack"][k]),
                   "branch": str(row["branch"][k])}
            for name, row in result["bounds"].items()
        }
        if result["lemmas"]:
            rec["lemmas"] = {name: float(v[k]) for name, v in result["lemmas"].items()}
        if not config.tripartite:
            rec["witness"] = bool(ent["x"][k] > ent["z"][k] or ent["y"][k] > ent["z"][k])
        if i >= config.samples:
            rec["injected"] = True
        yield rec


@dataclass
class CheckSummary:
    evaluated: int = 0
    violations: int = 0
    min_slack: float = math.inf
    slacks: list = field(default_factory=list, repr=False)

    def add(self, slack):
        s = np.asarray(slack, dtype=float)
        s = s[np.isfinite(s)]
        if not s.size:
            return
        self.evaluated += int(s.size)
        self.violations += int(np.sum(s < -VIOLATION_TOL))
        self.min_slack = min(self.min_slack, float(np.min(s)))
        self.slacks.append(s)

    def to_dict(self):
        s = np.concatenate(self.slacks) if self.slacks else np.empty(0)
        deciles = [float(v) for v in np.quantile(s, np.linspace(0, 1, 11))] if s.size else []
        return {"evaluated": self.evaluated, "violations": self.violations,
                "min_slack": self.min_slack if self.evaluated else None,
                "slack_deciles": deciles}


@dataclass
class CampaignReport:
    config: SamplerConfig
    checks: dict
    wall_time: float = 0.0
    io_error: str | None = None

    @property
    def violations(self):
        return sum(c.violations for c in self.checks.values())

    @property
    def min_slack(self):
        return min((c.min_slack for c in self.checks.values() if c.evaluated), default=math.inf)

    def summary(self):
        """Deterministic summary; wall time is left out so reruns compare byte-for-byte."""
        return {
            "config": self.config.to_dict(),
            "samples": self.config.samples + self.config.inject,
            "violations": self.violations,
            "checks": {name: c.to_dict() for name, c in sorted(self.checks.items())},
        }

    def summary_json(self):
        return json.dumps(self.summary(), indent=2, sort_keys=True) + "\n"


class CampaignAborted(NumericalError):
    """A slack far below roundoff level was seen; most likely a bug, not a counterexample."""

    def __init__(self, message, report):
        super().__init__(message)
        self.report = report


def _accumulate(checks, result):
    for name, row in result["bounds"].items():
        checks.setdefault(name, CheckSummary()).add(row["slack"])
        if name == "sharp":
            branch = np.asarray(row["branch"]).astype(str)
            for tag in (bounds.DSSA, bounds.ISA, bounds.OMEGA):
                mask = branch == tag
                if np.any(mask):
                    checks.setdefault(f"sharp[{tag}]", CheckSummary()).add(row["slack"][mask])
    for name, slack in result["lemmas"].items():
        checks.setdefault(name, CheckSummary()).add(slack)


def run_campaign(config, output_dir=None):
    """Draw ``config.samples`` states (plus ``config.inject`` boundary states) and check every bound.

    With ``output_dir`` the per-sample records go to ``samples.jsonl``
    (written chunk by chunk) and the summary to ``summary.json``.

    Raises
    ------
    CampaignAborted
        If any slack falls below ``-1e-6``; the partial report is attached.
    """
    t0 = time.perf_counter()
    total = config.samples + config.inject
    chunks = _chunks(total)
    checks = {}
    report = CampaignReport(config, checks)

    jsonl = None
    if output_dir is not None:
        out = Path(output_dir)
        try:
            out.mkdir(parents=True, exist_ok=True)
            jsonl = open(out / "samples.jsonl", "w")
        except OSError as exc:
            report.io_error = str(exc)

    def results():
        if config.workers == 1:
            for s, e in chunks:
                yield s, _run_chunk(config, s, e)
        else:
            with ProcessPoolExecutor(max_workers=config.workers) as pool:
                starts = [s for s, _ in chunks]
                futures = pool.map(_run_chunk, [config] * len(chunks), starts,
                                   [e for _, e in chunks])
                yield from zip(starts, futures)

    try:
        for start, result in results():
            _accumulate(checks, result)
            if jsonl is not None:
                try:
                    for rec in _records(config, start, result):
                        jsonl.write(json.dumps(rec, sort_keys=True) + "\n")
                except OSError as exc:
                    report.io_error = str(exc)
                    jsonl.close()
                    jsonl = None
            if report.min_slack < -ABORT_TOL:
                raise CampaignAborted(
                    f"slack {report.min_slack:.3e} below {-ABORT_TOL:.0e} near sample {start}",
                    report)
    finally:
        if jsonl is not None:
            jsonl.close()
        report.wall_time = time.perf_counter() - t0
        if output_dir is not None and report.io_error is None:
            try:
                (Path(output_dir) / "summary.json").write_text(report.summary_json())
            except OSError as exc:
                report.io_error = str(exc)
    log.info("campaign %s: %d samples, %d violations, %.2fs", config.dims, total,
             report.violations, report.wall_time)
    return report


# ---------------------------------------------------------------------------
# identity checks on deterministic grids

@dataclass(frozen=True)
class IdentityCheck:
    name: str
    dims: tuple
    max_defect: float
    tol: float

    @property
    def passed(self):
        return self.max_defect <= self.tol


@dataclass(frozen=True)
class IdentityReport:
    checks: tuple

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    @property
    def failures(self):
        return [c for c in self.checks if not c.passed]


def domain_grid(dims, step=0.01):
    """All ``(x, y)`` with ``x, y`` multiples of ``step`` inside ``[0, D_A] x [0, D_B]``."""
    dims = bounds.as_dims(dims)
    xs = np.arange(0, int(math.floor(dims.D_a / step + 1e-9)) + 1) * step
    ys = np.arange(0, int(math.floor(dims.D_b / step + 1e-9)) + 1) * step
    x, y = np.meshgrid(xs, ys, indexing="ij")
    return x.ravel(), y.ravel()


def omega_points(dims, n=100, lo=0.0, hi=1.0):
    """``n`` points ``(t, y(t))`` on the switching curve with ``t`` in ``[lo, hi] * D_A``."""
    dims = bounds.as_dims(dims)
    t = np.linspace(lo, hi, n) * dims.D_a
    g1, g2, g3 = bounds.gamma_curve(t, dims)
    return g1, g2, g3


def gap_identity_defect(dims, step=0.01):
    """Max ``|(appel - isa) - (sqrt((1-x)/d_B) - sqrt((1-y)/d_A))^2|`` on the grid."""
    dims = bounds.as_dims(dims)
    x, y = domain_grid(dims, step)
    gap = bounds.appel_nonlinear_bound(x, y, dims) - bounds.isa_h(x, y, dims)
    square = (np.sqrt((1 - x) / dims.d_b) - np.sqrt((1 - y) / dims.d_a)) ** 2
    return float(np.max(np.abs(gap - square)))


def omega_coincidence_defect(dims, n=100):
    x, y, z = omega_points(dims, n)
    g = bounds.dssa_g(x, y, dims)
    h = bounds.isa_h(x, y, dims)
    return float(max(np.max(np.abs(g - h)), np.max(np.abs(z - h))))


def omega_gradient_defect(dims, n=100, step=1e-6):
    """Central-difference gradient of ``g`` on the switching curve minus ``(1/d_B, 1/d_A)``."""
    dims = bounds.as_dims(dims)
    x, y, _ = omega_points(dims, n, 0.05, 0.95)
    gx = (bounds.dssa_g(x + step, y, dims) - bounds.dssa_g(x - step, y, dims)) / (2 * step)
    gy = (bounds.dssa_g(x, y + step, dims) - bounds.dssa_g(x, y - step, dims)) / (2 * step)
    return float(max(np.max(np.abs(gx - 1.0 / dims.d_b)), np.max(np.abs(gy - 1.0 / dims.d_a))))


def bloch_purity_defect(dims, n=50, seed=0):
    """Max ``|S_L - (1 - (1 + |C_A|^2 + |C_B|^2 + |C_AB|^2)/(d_A d_B))|`` over random states."""
    da, db = dims
    ba, bb = bloch.gellmann_basis(da), bloch.gellmann_basis(db)
    worst = 0.0
    for i in range(n):
        rho = DensityMatrix(hs_matrix(da * db, substream(seed, i)), (da, db))
        c = bloch.correlation_tensor(rho, ba, bb)
        na, nb, nab = bloch.tensor_qnorms(c, 2)
        pred = 1.0 - (1.0 + na**2 + nb**2 + nab**2) / (da * db)
        worst = max(worst, abs((1.0 - purity(rho)) - pred))
    return worst


def sisa_reduction_defect(dims, step=0.01):
    """With a pure third party the tripartite bound must reduce to the linear bipartite one."""
    x, y = domain_grid(dims, step)
    return float(np.max(np.abs(bounds.sisa_bound(x, y, 0.0, dims) - bounds.isa_h(x, y, dims))))


def renyi_consistency_defect(dims, step=0.01):
    dims = bounds.as_dims(dims)
    x, y = domain_grid(dims, step)
    rx, ry = -np.log2(1.0 - x), -np.log2(1.0 - y)
    direct = bounds.renyi_f(rx, ry, dims)[0]
    via = -np.log2(1.0 - bounds.sharp_bound(x, y, dims))
    pieces = bounds.renyi_piecewise(rx, ry, dims)
    return float(max(np.max(np.abs(direct - via)), np.max(np.abs(direct - pieces))))


def purity_consistency_defect(dims, step=0.01):
    dims = bounds.as_dims(dims)
    x, y = domain_grid(dims, step)
    ga, gb = 1.0 - x, 1.0 - y
    return float(np.max(np.abs(bounds.purity_f(ga, gb, dims)
                               - (1.0 - bounds.sharp_bound(1.0 - ga, 1.0 - gb, dims)))))


def inversion_recovery_defect(dims, step=0.05):
    """Recover ``z`` from boundary triples ``(x, f_{A,R}(x, z), z)`` by inversion."""
    dims = bounds.as_dims(dims)
    pdims = bounds.DimPair(dims.d_a, dims.d_a * dims.d_b)
    xs = np.arange(0.0, dims.D_a + 1e-12, step)
    zs = np.arange(step, pdims.D_b + 1e-12, step)
    x, z = np.meshgrid(xs, zs, indexing="ij")
    x, z = x.ravel(), z.ravel()
    y = bounds.sharp_bound(x, z, pdims)
    ok = (y <= dims.D_b) & (y > x)
    z_rec = bounds._inverted_side(x[ok], y[ok], dims, 1)[0]
    return float(np.max(np.abs(z_rec - z[ok]))) if np.any(ok) else 0.0


def identity_suite(dims_set=((2, 2), (2, 3), (3, 3), (2, 4)), seed=0):
    """Run every algebraic identity check on deterministic grids."""
    checks = []
    for dims in dims_set:
        dims = tuple(dims)
        checks += [
            IdentityCheck("isa_vs_appel_gap", dims, gap_identity_defect(dims), 1e-12),
            IdentityCheck("omega_coincidence", dims, omega_coincidence_defect(dims), 1e-11),
            IdentityCheck("omega_gradient", dims, omega_gradient_defect(dims), 1e-6),
            IdentityCheck("bloch_purity", dims, bloch_purity_defect(dims, seed=seed), 1e-10),
            IdentityCheck("sisa_reduction", dims, sisa_reduction_defect(dims), 1e-12),
            IdentityCheck("renyi_consistency", dims, renyi_consistency_defect(dims), 1e-10),
            IdentityCheck("purity_consistency", dims, purity_consistency_defect(dims), 1e-12),
            IdentityCheck("inversion_recovery", dims, inversion_recovery_defect(dims), 1e-8),
        ]
    return IdentityReport(tuple(checks))
