import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from meanking.fixtures import code3d_basis, code3d_operators
from meanking.isomap import iso_forward, maximal_entangled
from meanking.linalg import (
    Tolerance,
    ValidationError,
    approx_equal,
    gram,
    hs_inner,
    ket,
    lift,
    orthonormalize,
    projector,
    tensor,
)

from conftest import L1, L2, VAA87_OPS, PSI_PLUS, SX, SZ, random_operator


def test_tensor_identity_and_basis():
    assert np.array_equal(tensor(np.eye(2), np.eye(2)), np.eye(4))
    assert np.array_equal(tensor(ket(0, 2), ket(1, 2)), [0, 1, 0, 0])


def test_tensor_rejects_mixed_operands():
    with pytest.raises(ValidationError):
        tensor(np.eye(2), ket(0, 2))


def test_tensor_lifted_l1_on_bell_state_matches_isomorphism():
    v = tensor(np.eye(2), L1) @ PSI_PLUS
    # direct multiply by hand: (|0> (x) L1|0> + |1> (x) L1|1>)/sqrt(2)
    by_hand = np.array([2, 1 + 1j, 1 - 1j, 0]) / (4 * np.sqrt(2))
    assert np.abs(v - by_hand).max() < 1e-15
    w = iso_forward(L1, maximal_entangled(2))
    assert np.abs(np.sqrt(2) * v - w).max() < 1e-15


def test_tensor_associative(rng):
    a, b, c = (random_operator(k, rng) for k in (2, 3, 2))
    assert np.abs(tensor(tensor(a, b), c) - tensor(a, tensor(b, c))).max() < 1e-12


def test_hs_inner_vaa87_values():
    assert abs(hs_inner(L1, L1) - 0.5) < 1e-15
    assert abs(hs_inner(L1, L2)) < 1e-15
    assert hs_inner(np.eye(2), np.eye(2)) == 2


def test_hs_inner_shape_mismatch():
    with pytest.raises(ValidationError):
        hs_inner(np.eye(2), np.eye(3))


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_hs_inner_positive_definite(d, seed):
    A = random_operator(d, np.random.default_rng(seed))
    v = hs_inner(A, A)
    assert abs(v.imag) < 1e-12 and v.real > 0
    assert hs_inner(np.zeros((d, d)), np.zeros((d, d))) == 0


def test_orthonormalize_examples():
    out = orthonormalize([np.array([1, 0]), np.array([2, 0])])
    assert len(out) == 1 and np.allclose(out[0], [1, 0])
    pair = [np.array([1, 1]) / np.sqrt(2), np.array([1, -1]) / np.sqrt(2)]
    out = orthonormalize(pair)
    assert len(out) == 2
    for v in pair:
        assert min(np.linalg.norm(v - w) for w in out) < 1e-12
    assert orthonormalize([]) == []


def test_orthonormalize_drops_annihilated_code_images():
    L3 = code3d_operators()[2]
    images = [lift(L3, 3) @ c for c in code3d_basis()]
    # by direct multiply every image is exactly zero
    assert all(np.abs(v).max() == 0 for v in images)
    assert orthonormalize(images) == []


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_orthonormalize_projector_properties(dim, count, seed):
    rng = np.random.default_rng(seed)
    vs = [rng.standard_normal(dim) + 1j * rng.standard_normal(dim) for _ in range(count)]
    basis = orthonormalize(vs)
    assert len(basis) == min(dim, count)
    eps = Tolerance().abs_eps
    assert np.linalg.norm(gram(basis) - np.eye(len(basis))) <= 10 * eps
    P = projector(basis)
    assert np.linalg.norm(P @ P - P) <= 10 * eps
    assert np.linalg.norm(P - P.conj().T) <= 10 * eps
    # same span: every input vector is fixed by P
    for v in vs:
        assert np.linalg.norm(P @ v - v) <= 1e-9 * max(1, np.linalg.norm(v))


def test_projector_examples():
    assert np.array_equal(projector([ket(0, 2)]), np.diag([1, 0]))
    assert np.allclose(projector([ket(k, 3) for k in range(3)]), np.eye(3))
    P = projector([PSI_PLUS])
    expected = np.zeros((4, 4))
    for r, c in [(0, 0), (0, 3), (3, 0), (3, 3)]:
        expected[r, c] = 0.5
    assert np.abs(P - expected).max() < 1e-15


def test_projector_rejects_non_orthonormal():
    with pytest.raises(ValidationError):
        projector([np.array([1, 0]), np.array([1, 1])])


def test_approx_equal():
    ok, r = approx_equal(np.eye(2), np.eye(2))
    assert ok and r == 0
    ok, r = approx_equal(SX, SZ)
    # sigma_x - sigma_z = [[-1, 1], [1, 1]]: four unit entries
    assert not ok and abs(r - 2.0) < 1e-15
    ok, r = approx_equal(sum(L.conj().T @ L for L in VAA87_OPS), np.eye(2))
    assert ok
    with pytest.raises(ValidationError):
        approx_equal(np.eye(2), np.eye(3))


def test_tolerance_nonnegative():
    with pytest.raises(ValidationError):
        Tolerance(-1.0)
