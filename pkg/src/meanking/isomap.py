"""Schmidt states and the operator <-> bipartite vector correspondence.

For ``|Psi_eta> = sum_j eta_j |psi_j> (x) |phi_j>`` the map
``L -> sqrt(d) (I (x) L)|Psi_eta>`` is an isometry from operators with the
state-dependent inner product ``<A|B>_Sc = d sum_j eta_j^2 <phi_j|A^dag B|phi_j>``
onto the d^2-dimensional bipartite space.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    Tolerance,
    ValidationError,
    as_square,
    as_vector,
    dagger,
    is_orthonormal,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SchmidtState:
    eta: np.ndarray
    basisA: np.ndarray  # columns are |psi_j>
    basisK: np.ndarray  # columns are |phi_j>
    vector: np.ndarray = field(repr=False)

    @property
    def d(self) -> int:
        return len(self.eta)

    @property
    def is_maximal(self) -> bool:
        return bool(np.allclose(self.eta, 1 / np.sqrt(self.d), rtol=0, atol=1e-12))


def _basis_matrix(basis, d: int, name: str, tol: Tolerance) -> np.ndarray:
    if basis is None:
        return np.eye(d, dtype=complex)
    if isinstance(basis, np.ndarray) and basis.ndim == 2:
        m = basis.astype(complex)
    else:
        m = np.column_stack([as_vector(b, name) for b in basis])
    if m.shape != (d, d):
        raise ValidationError(f"{name}: expected {d} vectors of dimension {d}, got {m.shape}", name)
    if not is_orthonormal([m[:, k] for k in range(d)], tol):
        raise ValidationError(f"{name}: basis is not orthonormal", name)
    return m


def schmidt_state(eta: Sequence[float], basisA=None, basisK=None,
                  tol: Tolerance = DEFAULT_TOL) -> SchmidtState:
    """Assemble ``sum_j eta_j |psi_j>|phi_j>``.

    Bases are given as a sequence of vectors or a matrix whose columns are the
    basis vectors; ``None`` means the computational basis.
    """
    eta = np.asarray(eta, dtype=float)
    if eta.ndim != 1 or eta.size == 0:
        raise ValidationError("eta: expected a nonempty list of weights", "eta")
    if np.any(eta <= tol.zero_eps):
        raise ValidationError("eta: every Schmidt weight must be strictly positive", "eta")
    if abs(float(np.sum(eta**2)) - 1) > tol.abs_eps:
        raise ValidationError("eta: squared weights must sum to 1", "eta")
    d = eta.size
    A = _basis_matrix(basisA, d, "basisA", tol)
    K = _basis_matrix(basisK, d, "basisK", tol)
    vec = np.zeros(d * d, dtype=complex)
    for j in range(d):
        vec += eta[j] * np.kron(A[:, j], K[:, j])
    return SchmidtState(eta=eta, basisA=A, basisK=K, vector=vec)


def maximal_entangled(d: int, basis=None, tol: Tolerance = DEFAULT_TOL) -> SchmidtState:
    if d < 1:
        raise ValidationError("d must be at least 1", "d")
    return schmidt_state(np.full(d, 1 / np.sqrt(d)), basis, basis, tol)


def _check_dim(op: np.ndarray, s: SchmidtState, name: str):
    if op.shape != (s.d, s.d):
        raise ValidationError(f"{name}: expected a {s.d}x{s.d} operator, got {op.shape}", name)


def sc_inner(a, b, s: SchmidtState) -> complex:
    a = as_square(a, "a")
    b = as_square(b, "b")
    _check_dim(a, s, "a")
    _check_dim(b, s, "b")
    ab = dagger(a) @ b
    phi = s.basisK
    diag = np.einsum("kj,kl,lj->j", np.conj(phi), ab, phi)
    return complex(s.d * np.sum(s.eta**2 * diag))


def iso_forward(L, s: SchmidtState) -> np.ndarray:
    """``sqrt(d) (I (x) L)|Psi_eta>``."""
    L = as_square(L, "L")
    _check_dim(L, s, "L")
    return np.sqrt(s.d) * (np.kron(np.eye(s.d), L) @ s.vector)


def iso_inverse(v, s: SchmidtState) -> np.ndarray:
    """The operator ``L`` with ``iso_forward(L, s) == v``.

    With ``c_jk`` the coefficient of ``v`` on ``|psi_j>|phi_k>``,
    ``<phi_k|L|phi_j> = c_jk / (sqrt(d) eta_j)``.
    """
    v = as_vector(v, "v")
    d = s.d
    if v.shape[0] != d * d:
        raise ValidationError(f"v: expected dimension {d * d}, got {v.shape[0]}", "v")
    c = np.kron(s.basisA, s.basisK).conj().T @ v
    c = c.reshape(d, d)  # c[j, k]
    in_phi = (c / (np.sqrt(d) * s.eta[:, None])).T  # [k, j] = <phi_k|L|phi_j>
    return s.basisK @ in_phi @ dagger(s.basisK)


def sc_gram(Ls: Sequence[np.ndarray], s: SchmidtState) -> np.ndarray:
    vs = np.column_stack([iso_forward(L, s) for L in Ls])
    return dagger(vs) @ vs


def completeness_defect(Ls: Sequence, s: SchmidtState, alpha: float,
                        tol: Tolerance = DEFAULT_TOL) -> float:
    """Frobenius distance between ``sum_a L_a^dag L_a`` and ``sum_j alpha/eta_j^2 |phi_j><phi_j|``.

    ``Ls`` must be a basis of d^2 operators, pairwise orthogonal under
    ``sc_inner`` with a common squared norm.
    """
    d = s.d
    Ls = [as_square(L, f"Ls[{k}]") for k, L in enumerate(Ls)]
    if len(Ls) != d * d:
        raise ValidationError(f"Ls: expected {d * d} operators, got {len(Ls)}", "Ls")
    if alpha <= 0:
        raise ValidationError("alpha must be positive", "alpha")
    g = sc_gram(Ls, s)
    common = g[0, 0].real
    for a in range(len(Ls)):
        for b in range(len(Ls)):
            target = common if a == b else 0.0
            if abs(g[a, b] - target) > tol.abs_eps:
                raise ValidationError(
                    f"Ls: not an orthogonal basis under the Schmidt inner product "
                    f"(pair {a + 1},{b + 1}: {g[a, b]:.3g})",
                    "Ls",
                )
    if abs(alpha - common) > tol.abs_eps:
        log.warning("alpha=%g differs from the measured squared norm %g", alpha, common)
    lhs = sum(dagger(L) @ L for L in Ls)
    phi = s.basisK
    rhs = phi @ np.diag(alpha / s.eta**2) @ dagger(phi)
    return float(np.linalg.norm(lhs - rhs))
