import numpy as np
import pytest

# vaa87 error operators, typed from the printed matrices.
L1 = np.array([[2, 1 - 1j], [1 + 1j, 0]]) / 4
L2 = np.array([[2, -1 + 1j], [-1 - 1j, 0]]) / 4
L3 = np.array([[0, 1 + 1j], [1 - 1j, 2]]) / 4
L4 = np.array([[0, -1 - 1j], [-1 + 1j, 2]]) / 4
VAA87_OPS = [L1, L2, L3, L4]

VAA87_SETS = {
    (1, 1): {1, 3}, (2, 1): {1, 4}, (3, 1): {1, 2},
    (1, 2): {2, 4}, (2, 2): {2, 3}, (3, 2): {3, 4},
}

COMP3_PAIRS = {
    (1, 1): {(1, 1), (1, 2), (1, 3)},
    (1, 2): {(2, 1), (2, 2), (2, 3)},
    (1, 3): {(3, 1), (3, 2), (3, 3)},
    (2, 1): {(1, 1), (2, 2), (3, 3)},
    (2, 2): {(1, 2), (2, 3), (3, 1)},
    (2, 3): {(1, 3), (2, 1), (3, 2)},
    (3, 1): {(1, 1), (2, 3), (3, 2)},
    (3, 2): {(1, 2), (2, 1), (3, 3)},
    (3, 3): {(1, 3), (2, 2), (3, 1)},
}
COMP3_SETS = {k: {(j - 1) * 3 + l for j, l in v} for k, v in COMP3_PAIRS.items()}

_r3 = 1 / np.sqrt(3)
QUTRIT_OPS = {
    (1, 1): [[1, 0, 0], [1, 0, 0], [1, 0, 0]],
    (1, 2): [[0, 1, 0], [0, 1, 0], [0, 1, 0]],
    (1, 3): [[0, 0, 1], [0, 0, 1], [0, 0, 1]],
    (2, 1): [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
    (2, 2): [[0, 0, 1], [1, 0, 0], [0, 1, 0]],
    (2, 3): [[0, 1, 0], [0, 0, 1], [1, 0, 0]],
    (3, 1): [[1, 0, 0], [0, 0, 1], [0, 1, 0]],
    (3, 2): [[0, 1, 0], [1, 0, 0], [0, 0, 1]],
    (3, 3): [[0, 0, 1], [0, 1, 0], [1, 0, 0]],
}
QUTRIT_OPS = {k: _r3 * np.array(v, dtype=complex) for k, v in QUTRIT_OPS.items()}

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PSI_PLUS = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)


def random_unitary(d, rng):
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_eta(d, rng):
    w = rng.uniform(0.2, 1.0, d)
    return np.sqrt(w / w.sum())


def random_operator(d, rng):
    return rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))


def choi_vector(L, eta=None, A=None, K=None):
    """Loop oracle for sqrt(d) (I (x) L) sum_j eta_j |A_j>|K_j>."""
    d = L.shape[0]
    eta = np.full(d, 1 / np.sqrt(d)) if eta is None else eta
    A = np.eye(d) if A is None else A
    K = np.eye(d) if K is None else K
    out = np.zeros(d * d, dtype=complex)
    for j in range(d):
        for x in range(d):
            for y in range(d):
                out[x * d + y] += np.sqrt(d) * eta[j] * A[x, j] * (L @ K[:, j])[y]
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20261019)


def random_shift_square(d, rng):
    """Entry (offset_i + perm_l) mod d + 1: Latin for any permutations."""
    from meanking.construct import LatinSquare

    offsets, perm = rng.permutation(d), rng.permutation(d)
    return LatinSquare((offsets[:, None] + perm[None, :]) % d + 1)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
