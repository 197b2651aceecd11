"""Property-based checks of the invariants over random states and points."""

import math

import numpy as np
from hypothesis import given
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from linentropy import bloch, bounds, extremal
from linentropy.linalg import eigvalsh
from linentropy.states import (
    DensityMatrix,
    marginal_entropies,
    partial_trace,
    purity,
    validate_density,
)
from oracles import random_density, sharp_oracle

DIMS = st.sampled_from([(2, 2), (2, 3), (3, 2), (3, 3), (2, 4)])
UNIT = st.floats(0.0, 1.0, allow_nan=False)


@st.composite
def bipartite_states(draw):
    dims = draw(DIMS)
    d = dims[0] * dims[1]
    rank = draw(st.integers(1, d))
    seed = draw(st.integers(0, 2**32 - 1))
    m = random_density(d, np.random.default_rng(seed), rank)
    return DensityMatrix(m, dims)


@st.composite
def domain_points(draw):
    dims = draw(DIMS)
    d = bounds.as_dims(dims)
    return dims, draw(UNIT) * d.D_a, draw(UNIT) * d.D_b


class TestStateInvariants:
    @given(bipartite_states())
    def test_entropy_ranges(self, rho):
        d = bounds.as_dims(rho.dims)
        x, y, z = marginal_entropies(rho)
        assert -1e-12 <= x <= d.D_a + 1e-10
        assert -1e-12 <= y <= d.D_b + 1e-10
        assert -1e-12 <= z <= d.D_ab + 1e-10
        for keep in (0, 1):
            r = partial_trace(rho, [keep])
            assert abs(np.trace(r.matrix) - 1) <= 1e-12
            assert validate_density(r.matrix).accepted

    @given(bipartite_states())
    def test_all_bounds_hold(self, rho):
        rep = bounds.evaluate_all(rho)
        assert rep.all_satisfied, rep.to_dict()
        assert rep["inverted"].value - 1e-9 <= rep.z <= rep["sharp"].value + 1e-9

    @given(bipartite_states())
    def test_witness_matches_definition(self, rho):
        x, y, z = marginal_entropies(rho)
        assert bounds.evaluate_all(rho).witness == (x > z or y > z)


class TestBoundProperties:
    @given(domain_points())
    def test_matches_oracle_and_swap(self, p):
        dims, x, y = p
        f = bounds.sharp_bound(x, y, dims)
        assert abs(f - sharp_oracle(x, y, *dims)) <= 1e-12
        assert abs(f - bounds.sharp_bound(y, x, dims[::-1])) <= 1e-12

    @given(domain_points())
    def test_below_linear_piece_and_subadditivity(self, p):
        dims, x, y = p
        f = bounds.sharp_bound(x, y, dims)
        assert f <= bounds.isa_h(x, y, dims) + 1e-12
        assert f <= x + y + 1e-12
        assert bounds.isa_h(x, y, dims) <= bounds.appel_nonlinear_bound(x, y, dims) + 1e-12

    @given(domain_points(), st.floats(1e-3, 0.2))
    def test_monotone(self, p, h):
        dims, x, y = p
        d = bounds.as_dims(dims)
        f = bounds.sharp_bound(x, y, dims)
        assert bounds.sharp_bound(min(x + h, d.D_a), y, dims) >= f - 1e-14
        assert bounds.sharp_bound(x, min(y + h, d.D_b), dims) >= f - 1e-14

    @given(domain_points())
    def test_renyi_and_purity_substitution(self, p):
        dims, x, y = p
        f = bounds.sharp_bound(x, y, dims)
        rx, ry = -math.log2(1 - x), -math.log2(1 - y)
        assert abs(bounds.renyi_f(rx, ry, dims)[0] + math.log2(1 - f)) <= 1e-10
        assert abs(bounds.purity_f(1 - x, 1 - y, dims) - (1 - f)) <= 1e-12

    @given(domain_points())
    def test_inverted_between_araki_lieb_and_sharp(self, p):
        dims, x, y = p
        inv = bounds.inverted_lower_f(x, y, dims)[0]
        assert inv >= abs(x - y) - 1e-10
        assert abs(inv - bounds.inverted_closed_form(x, y, dims)) <= 1e-8

    @given(DIMS, UNIT, UNIT)
    def test_inversion_recovers_boundary_triples(self, dims, u, v):
        d = bounds.as_dims(dims)
        pd = bounds.DimPair(d.d_a, d.d_a * d.d_b)
        x, z = u * d.D_a, max(v, 1e-3) * pd.D_b
        y = bounds.sharp_bound(x, z, pd)
        if y <= d.D_b and y > x + 1e-6:
            z_rec = bounds._inverted_side(np.array([x]), np.array([y]), d, 1)[0][0]
            assert abs(z_rec - z) <= 1e-8


class TestExtremalProperties:
    @given(domain_points())
    def test_boundary_state_reaches_target(self, p):
        dims, x, y = p
        rho = extremal.boundary_state_for(x, y, dims)
        assert validate_density(rho.matrix, dims).min_eigenvalue >= -1e-10
        assert_allclose(marginal_entropies(rho), (x, y, sharp_oracle(x, y, *dims)), atol=1e-8)

    @given(bipartite_states(), UNIT)
    def test_mixing_law(self, mu, a):
        d = bounds.as_dims(mu.dims)
        corner = np.array([d.D_a, d.D_b, d.D_ab])
        v = np.array(marginal_entropies(extremal.mix_with_maximally_mixed(mu, a)))
        assert_allclose(v, corner + a * a * (np.array(marginal_entropies(mu)) - corner),
                        atol=1e-10)


class TestBlochProperties:
    @given(st.integers(2, 6), st.integers(0, 2**32 - 1))
    def test_adapted_basis(self, d, seed):
        rho = DensityMatrix(random_density(d, np.random.default_rng(seed)))
        basis = bloch.adapted_basis(rho)
        assert np.max(np.abs(basis.gram() - d * np.eye(d * d))) <= 1e-10
        b = bloch.bloch_vector(rho, basis)
        assert np.max(np.abs(b.components[1:])) <= 1e-10
        assert b.components[0] >= 0
        assert abs(bloch.purity_from_bloch(b) - purity(rho)) <= 1e-12

    @given(bipartite_states())
    def test_correlation_lemmas(self, rho):
        da, db = rho.dims
        c = bloch.correlation_tensor(rho, bloch.gellmann_basis(da), bloch.gellmann_basis(db))
        assert bloch.pairwise_correlation_slack(c) >= -1e-9
        ca = bloch.correlation_tensor(rho, bloch.adapted_basis(partial_trace(rho, [0])),
                                      bloch.adapted_basis(partial_trace(rho, [1])))
        for q in (1, 2, 3):
            assert bloch.tensor_norm_slack(ca, q) >= -1e-9
        assert_allclose(c.to_matrix(bloch.gellmann_basis(da), bloch.gellmann_basis(db)),
                        rho.matrix, atol=1e-10)


class TestJacobiProperty:
    @given(st.integers(1, 8), st.integers(0, 2**32 - 1))
    def test_agrees_with_lapack(self, n, seed):
        rng = np.random.default_rng(seed)
        a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        a = a + a.conj().T
        assert_allclose(eigvalsh(a), np.linalg.eigvalsh(a), atol=1e-11)
