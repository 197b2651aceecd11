import json

import numpy as np
import pytest
from numpy.testing import assert_allclose

from linentropy import bounds, verify
from linentropy.errors import NumericalError, ParameterError
from linentropy.states import DensityMatrix, marginal_entropies, purity
from oracles import hs_mean_purity, ptrace_loops


class TestSubstreams:
    def test_reproducible(self):
        a = verify.substream(7, 3).standard_normal(5)
        b = verify.substream(7, 3).standard_normal(5)
        assert_allclose(a, b, atol=0)

    def test_distinct_by_index_and_seed(self):
        a = verify.substream(7, 3).standard_normal(5)
        assert not np.allclose(a, verify.substream(7, 4).standard_normal(5))
        assert not np.allclose(a, verify.substream(8, 3).standard_normal(5))


class TestSamplers:
    def test_hs_trace_and_psd(self):
        rho = verify.sample_hs_state(2, verify.substream(1, 0))
        assert np.trace(rho.matrix).real == pytest.approx(1.0, abs=1e-12)
        rho = verify.sample_hs_state(4, verify.substream(1, 1), (2, 2))
        assert np.linalg.eigvalsh(rho.matrix)[0] >= -1e-12

    @pytest.mark.parametrize("d", [2, 3])
    def test_hs_mean_purity(self, d):
        p = [purity(verify.sample_hs_state(d, verify.substream(11, i))) for i in range(10000)]
        assert np.mean(p) == pytest.approx(hs_mean_purity(d), abs=0.01)

    @pytest.mark.parametrize("dims", [(2, 2), (2, 3)])
    def test_pure_bipartite(self, dims):
        d = bounds.as_dims(dims)
        for i in range(20):
            rho = verify.sample_pure_bipartite(*dims, verify.substream(5, i))
            x, y, z = marginal_entropies(rho)
            assert z == pytest.approx(0.0, abs=1e-12)
            assert x == pytest.approx(y, abs=1e-10)
            assert x <= d.D_a + 1e-12

    def test_rank_k(self):
        rho = verify.sample_rank_state(6, 2, verify.substream(2, 0))
        w = np.linalg.eigvalsh(rho.matrix)
        assert np.sum(w > 1e-10) == 2

    def test_parameter_errors(self):
        with pytest.raises(ParameterError):
            verify.sample_hs_state(1, verify.substream(0, 0))
        with pytest.raises(ParameterError):
            verify.sample_rank_state(3, 4, verify.substream(0, 0))
        with pytest.raises(ParameterError):
            verify.sample_pure_bipartite(1, 2, verify.substream(0, 0))


class TestBatchHelpers:
    def test_batch_reduce_matches_loops(self, rng):
        g = rng.normal(size=(3, 6, 6)) + 1j * rng.normal(size=(3, 6, 6))
        mats = g @ np.conj(np.swapaxes(g, 1, 2))
        for keep in (0, 1):
            got = verify.batch_reduce(mats, (2, 3), [keep])
            for m, r in zip(mats, got):
                assert_allclose(r, ptrace_loops(m, 2, 3, keep), atol=1e-12)

    def test_structural_slacks_nonnegative(self):
        mats = np.stack([verify.hs_matrix(6, verify.substream(9, i)) for i in range(200)])
        for name, s in verify.structural_slacks(mats, (2, 3)).items():
            assert np.min(s) >= -1e-9, name


class TestConfig:
    @pytest.mark.parametrize("kwargs", [
        dict(dims=(2,)), dict(dims=(1, 2)), dict(dims=(2, 2), samples=0),
        dict(dims=(2, 2), ensemble="haar"), dict(dims=(2, 2), ensemble="rank"),
        dict(dims=(2, 2), ensemble="rank", rank=5), dict(dims=(2, 2), workers=0),
        dict(dims=(2, 2, 2), inject=4)])
    def test_invalid(self, kwargs):
        with pytest.raises(ParameterError):
            verify.SamplerConfig(**kwargs)


class TestCampaign:
    def test_files_and_schema(self, tmp_path):
        cfg = verify.SamplerConfig((2, 3), samples=300, seed=4, inject=20)
        rep = verify.run_campaign(cfg, tmp_path)
        assert rep.violations == 0 and rep.io_error is None
        lines = (tmp_path / "samples.jsonl").read_text().splitlines()
        assert len(lines) == 320
        rec = json.loads(lines[0])
        for key in ("seed_index", "dims", "x", "y", "z", "bounds", "witness"):
            assert key in rec
        assert set(rec["bounds"]) == set(bounds.BOUND_KINDS)
        assert set(rec["bounds"]["sharp"]) == {"value", "slack", "branch"}
        assert json.loads(lines[-1])["injected"]
        summary = json.loads((tmp_path / "summary.json").read_text())
        assert summary["violations"] == 0
        assert "wall_time" not in json.dumps(summary)
        assert len(summary["checks"]["sharp"]["slack_deciles"]) == 11

    def test_record_matches_direct_evaluation(self, tmp_path):
        cfg = verify.SamplerConfig((2, 2), samples=5, seed=12)
        verify.run_campaign(cfg, tmp_path)
        rec = json.loads((tmp_path / "samples.jsonl").read_text().splitlines()[3])
        rho = DensityMatrix(verify.hs_matrix(4, verify.substream(12, 3)), (2, 2))
        rep = bounds.evaluate_all(rho)
        assert (rec["x"], rec["y"], rec["z"]) == pytest.approx((rep.x, rep.y, rep.z), abs=1e-14)
        assert rec["bounds"]["sharp"]["value"] == pytest.approx(rep["sharp"].value, abs=1e-14)

    def test_injection_saturates_both_branches(self):
        cfg = verify.SamplerConfig((2, 2), samples=200, seed=1, inject=40)
        rep = verify.run_campaign(cfg)
        assert rep.checks["sharp[dssa]"].min_slack <= 1e-10
        assert rep.checks["sharp[isa]"].min_slack <= 1e-10
        assert rep.violations == 0

    def test_pure_ensemble_saturates_inverted(self):
        cfg = verify.SamplerConfig((2, 2), ensemble="pure", samples=2000, seed=3)
        rep = verify.run_campaign(cfg)
        assert rep.violations == 0
        assert rep.checks["inverted"].min_slack <= 1e-3

    def test_rank_ensemble(self):
        rep = verify.run_campaign(verify.SamplerConfig((3, 3), ensemble="rank", rank=2,
                                                       samples=300, seed=2))
        assert rep.violations == 0

    def test_tripartite(self):
        rep = verify.run_campaign(verify.SamplerConfig((2, 2, 2), samples=500, seed=6))
        assert set(rep.checks) == {"sisa"}
        assert rep.violations == 0

    def test_same_seed_same_summary(self):
        cfg = verify.SamplerConfig((2, 2), samples=400, seed=9, inject=10)
        assert verify.run_campaign(cfg).summary_json() == verify.run_campaign(cfg).summary_json()

    def test_worker_count_irrelevant(self, tmp_path):
        base = dict(dims=(2, 2), samples=verify.CHUNK + 100, seed=5, inject=6)
        verify.run_campaign(verify.SamplerConfig(workers=1, **base), tmp_path / "a")
        verify.run_campaign(verify.SamplerConfig(workers=2, **base), tmp_path / "b")
        for name in ("samples.jsonl", "summary.json"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_abort_on_large_negative_slack(self, monkeypatch):
        real = bounds.evaluate_points

        def broken(x, y, z, dims):
            table = real(x, y, z, dims)
            table["sharp"]["slack"] = table["sharp"]["slack"] - 1.0
            return table

        monkeypatch.setattr(verify.bounds, "evaluate_points", broken)
        with pytest.raises(verify.CampaignAborted) as exc:
            verify.run_campaign(verify.SamplerConfig((2, 2), samples=50, seed=0))
        assert isinstance(exc.value, NumericalError)
        assert exc.value.report.checks["sharp"].violations > 0

    def test_io_failure_keeps_results(self, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("x")
        rep = verify.run_campaign(verify.SamplerConfig((2, 2), samples=30, seed=0), blocker)
        assert rep.io_error
        assert rep.checks["sharp"].evaluated == 30


class TestIdentitySuite:
    def test_all_pass(self):
        rep = verify.identity_suite()
        assert rep.passed, rep.failures
        names = {c.name for c in rep.checks}
        assert {"isa_vs_appel_gap", "omega_coincidence", "omega_gradient", "bloch_purity",
                "sisa_reduction", "renyi_consistency", "purity_consistency",
                "inversion_recovery"} == names

    def test_examples(self):
        assert verify.gap_identity_defect((2, 2)) <= 1e-12
        assert verify.omega_coincidence_defect((3, 3)) <= 1e-11
        assert verify.bloch_purity_defect((2, 3), n=50) <= 1e-10

    def test_failure_is_enumerated(self):
        check = verify.IdentityCheck("fake", (2, 2), 1.0, 1e-12)
        rep = verify.IdentityReport((check,))
        assert not rep.passed and rep.failures == [check]
