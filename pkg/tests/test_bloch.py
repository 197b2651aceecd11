import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from linentropy import bloch
from linentropy.errors import ParameterError, StructureError
from linentropy.states import (
    DensityMatrix,
    basis_state,
    bell_state,
    maximally_mixed,
    mixture,
    partial_trace,
    purity,
    tensor_product,
)
from oracles import PAULI, random_density


def _state(d, rng, dims=None):
    return DensityMatrix(random_density(d, rng), dims)


class TestGellMann:
    def test_qubit_is_pauli(self):
        b = bloch.gellmann_basis(2)
        for got, want in zip(b.elements, PAULI):
            assert_allclose(got, want, atol=0)

    @pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
    def test_gram_and_traceless(self, d):
        b = bloch.gellmann_basis(d)
        assert len(b) == d * d
        assert_allclose(b.gram(), d * np.eye(d * d), atol=1e-12)
        traces = np.einsum("iaa->i", b.elements[1:])
        assert np.max(np.abs(traces)) <= 1e-11
        assert_allclose(b.elements, np.conj(np.swapaxes(b.elements, 1, 2)), atol=0)

    @pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
    def test_completeness(self, d, rng):
        a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        h = a + a.conj().T
        b = bloch.gellmann_basis(d)
        coeff = np.real(np.einsum("ab,iba->i", h, b.elements)) / d
        assert_allclose(np.tensordot(coeff, b.elements, axes=1), h, atol=1e-10)

    def test_rejects_small_dimension(self):
        with pytest.raises(ParameterError):
            bloch.gellmann_basis(1)

    def test_basis_shape_checked(self):
        with pytest.raises(StructureError):
            bloch.OperatorBasis(2, np.zeros((3, 2, 2)))


class TestBlochVector:
    def test_ket_zero(self):
        b = bloch.bloch_vector(basis_state((2,)), bloch.gellmann_basis(2))
        assert_allclose(b.components, [0, 0, 1], atol=0)
        assert bloch.purity_from_bloch(b) == 1.0

    def test_maximally_mixed(self):
        b = bloch.bloch_vector(maximally_mixed((3,)), bloch.gellmann_basis(3))
        assert_allclose(b.components, 0, atol=1e-16)
        assert bloch.purity_from_bloch(bloch.BlochVector(2, np.zeros(3))) == 0.5

    def test_werner_purity(self):
        w = mixture([0.5, 0.5], [bell_state(2), maximally_mixed((2, 2))])
        b = bloch.bloch_vector(DensityMatrix(w.matrix), bloch.gellmann_basis(4))
        assert bloch.purity_from_bloch(b) == pytest.approx(0.4375, abs=1e-14)

    @pytest.mark.parametrize("d", [2, 3, 4, 5])
    def test_norm_and_round_trip(self, d, rng):
        rho = _state(d, rng)
        basis = bloch.gellmann_basis(d)
        b = bloch.bloch_vector(rho, basis)
        assert b.norm_squared == pytest.approx(d * purity(rho) - 1, abs=1e-10)
        assert b.norm_squared <= d - 1 + 1e-9
        assert_allclose(b.to_matrix(basis), rho.matrix, atol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(StructureError):
            bloch.bloch_vector(maximally_mixed((2,)), bloch.gellmann_basis(3))


class TestAdaptedBasis:
    def test_diagonal_qubit_gives_pauli_z(self):
        rho = DensityMatrix(np.diag([0.75, 0.25]))
        basis = bloch.adapted_basis(rho)
        assert_allclose(basis.elements[1], PAULI[3], atol=1e-15)
        assert_allclose(bloch.bloch_vector(rho, basis).components, [0.5, 0, 0], atol=1e-15)

    def test_maximally_mixed_keeps_standard(self):
        basis = bloch.adapted_basis(maximally_mixed((3,)))
        assert_allclose(basis.elements, bloch.gellmann_basis(3).elements, atol=0)

    @pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
    def test_sparse_gram_round_trip(self, d, rng):
        rho = _state(d, rng)
        basis = bloch.adapted_basis(rho)
        assert_allclose(basis.gram(), d * np.eye(d * d), atol=1e-10)
        b = bloch.bloch_vector(rho, basis)
        assert b.components[0] > 0
        assert np.max(np.abs(b.components[1:])) <= 1e-10
        assert_allclose(b.to_matrix(basis), rho.matrix, atol=1e-10)
        assert bloch.check_operator_bound(basis).passed

    def test_first_element_proportional_to_traceless_part(self, rng):
        rho = _state(3, rng)
        x1 = bloch.adapted_basis(rho).elements[1]
        delta = rho.matrix - np.eye(3) / 3
        scale = np.trace(x1 @ x1).real / np.trace(delta @ x1).real
        assert_allclose(x1, scale * delta, atol=1e-12)

    def test_batched_rotations_orthogonal(self, rng):
        b = rng.normal(size=(50, 8))
        o = bloch.adapted_rotations(b)
        assert_allclose(o @ np.swapaxes(o, 1, 2), np.broadcast_to(np.eye(8), o.shape), atol=1e-12)
        assert_allclose(o[:, 0, :], b / np.linalg.norm(b, axis=1)[:, None], atol=1e-14)


class TestCorrelationTensor:
    def test_bell(self):
        p = bloch.gellmann_basis(2)
        c = bloch.correlation_tensor(bell_state(2), p, p)
        assert_allclose(c.local_a, 0, atol=1e-15)
        assert_allclose(c.local_b, 0, atol=1e-15)
        assert_allclose(c.joint, np.diag([1, -1, 1]), atol=1e-15)
        assert_allclose(bloch.tensor_qnorms(c, 2), (0, 0, math.sqrt(3)), atol=1e-14)

    def test_product_state(self, rng):
        a, b = _state(2, rng), _state(3, rng)
        ba, bb = bloch.gellmann_basis(2), bloch.gellmann_basis(3)
        c = bloch.correlation_tensor(tensor_product(a, b), ba, bb)
        assert c.joint.shape == (3, 8)
        assert_allclose(c.joint, np.outer(c.local_a, c.local_b), atol=1e-12)

    def test_ket_zero_zero_norms(self):
        p = bloch.gellmann_basis(2)
        c = bloch.correlation_tensor(basis_state((2, 2)), p, p)
        assert_allclose(bloch.tensor_qnorms(c, 2), (1, 1, 1), atol=1e-15)

    def test_maximally_mixed_norms(self):
        ba, bb = bloch.gellmann_basis(2), bloch.gellmann_basis(3)
        c = bloch.correlation_tensor(maximally_mixed((2, 3)), ba, bb)
        for q in (1, 2, 3):
            assert_allclose(bloch.tensor_qnorms(c, q), (0, 0, 0), atol=1e-15)

    @pytest.mark.parametrize("dims", [(2, 2), (2, 3), (3, 3)])
    def test_purity_decomposition_and_round_trip(self, dims, rng):
        rho = _state(dims[0] * dims[1], rng, dims)
        ba, bb = bloch.gellmann_basis(dims[0]), bloch.gellmann_basis(dims[1])
        c = bloch.correlation_tensor(rho, ba, bb)
        na, nb, nab = bloch.tensor_qnorms(c, 2)
        s_l = 1 - (1 + na**2 + nb**2 + nab**2) / (dims[0] * dims[1])
        assert s_l == pytest.approx(1 - purity(rho), abs=1e-10)
        assert_allclose(c.to_matrix(ba, bb), rho.matrix, atol=1e-12)
        assert c.dims == dims

    def test_qnorm_rejects_small_q(self):
        p = bloch.gellmann_basis(2)
        c = bloch.correlation_tensor(bell_state(2), p, p)
        with pytest.raises(ParameterError):
            bloch.tensor_qnorms(c, 0.5)


class TestStructuralInequalities:
    @pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
    def test_operator_bound_standard(self, d):
        v = bloch.check_operator_bound(bloch.gellmann_basis(d))
        assert v.passed and v.failing_index is None

    def test_operator_bound_qubit_is_tight(self):
        v = bloch.check_operator_bound(bloch.gellmann_basis(2))
        assert v.min_margin == pytest.approx(0.0, abs=1e-14)

    def test_operator_bound_negative_control(self):
        e = bloch.gellmann_basis(3).elements.copy()
        e[5] *= 2
        v = bloch.check_operator_bound(bloch.OperatorBasis(3, e))
        assert not v.passed
        assert v.failing_index == 5

    @pytest.mark.parametrize("dims", [(2, 2), (2, 3), (3, 3), (2, 4)])
    def test_pairwise_and_norm_lemmas(self, dims, rng):
        for _ in range(20):
            rho = _state(dims[0] * dims[1], rng, dims)
            ba, bb = bloch.gellmann_basis(dims[0]), bloch.gellmann_basis(dims[1])
            c = bloch.correlation_tensor(rho, ba, bb)
            assert bloch.pairwise_correlation_slack(c) >= -1e-9
            aa = bloch.adapted_basis(partial_trace(rho, [0]))
            ab = bloch.adapted_basis(partial_trace(rho, [1]))
            ca = bloch.correlation_tensor(rho, aa, ab)
            for q in (1, 2, 3):
                assert bloch.tensor_norm_slack(ca, q) >= -1e-9

    def test_norm_lemma_saturated_by_pure_product(self):
        p = bloch.gellmann_basis(2)
        rho = basis_state((2, 2))
        c = bloch.correlation_tensor(rho, bloch.adapted_basis(DensityMatrix(np.diag([1.0, 0]))),
                                     p)
        assert bloch.tensor_norm_slack(c, 2) == pytest.approx(0.0, abs=1e-14)
