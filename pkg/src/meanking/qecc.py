"""Code subspaces, Knill-Laflamme checks and the syndrome measurement."""

from __future__ import annotations

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
    lift,
    orthonormalize,
    projector,
)


@dataclass(frozen=True)
class CodeSubspace:
    dimA: int
    dimK: int
    basis: tuple  # orthonormal vectors in H_A (x) H_K
    P: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.basis)

    @property
    def dim(self) -> int:
        return self.dimA * self.dimK


def code_subspace(dimA: int, dimK: int, vectors: Sequence,
                  tol: Tolerance = DEFAULT_TOL) -> CodeSubspace:
    """Code spanned by ``vectors``; the spanning set is orthonormalized first.

    All lambda values downstream refer to this orthonormal basis.
    """
    vs = [as_vector(v, "code_basis") for v in vectors]
    if not vs:
        raise ValidationError("code_basis: at least one vector is required", "code_basis")
    for v in vs:
        if v.shape[0] != dimA * dimK:
            raise ValidationError(
                f"code_basis: vector of dimension {v.shape[0]}, expected {dimA * dimK}",
                "code_basis",
            )
    basis = orthonormalize(vs, tol)
    if not basis:
        raise ValidationError("code_basis: vectors span the zero space", "code_basis")
    return CodeSubspace(dimA, dimK, tuple(basis), projector(basis, tol))


@dataclass
class KLReport:
    lam: np.ndarray
    residuals: np.ndarray  # [i, i'] Frobenius residual of P E_i^dag E_i' P - lam P
    psd_check: bool
    passed: bool

    @property
    def max_residual(self) -> float:
        return float(self.residuals.max()) if self.residuals.size else 0.0


def kl_check(code: CodeSubspace, errors: Sequence, tol: Tolerance = DEFAULT_TOL) -> KLReport:
    """Test ``P E_i^dag E_i' P = lam_ii' P`` with lam fitted as ``tr(P E_i^dag E_i' P)/n``."""
    Es = [as_square(E, f"errors[{k}]") for k, E in enumerate(errors)]
    for k, E in enumerate(Es):
        if E.shape[0] != code.dim:
            raise ValidationError(
                f"errors[{k}]: expected dimension {code.dim}, got {E.shape[0]}", "errors")
    P = code.P
    EP = [E @ P for E in Es]
    m = len(Es)
    lam = np.zeros((m, m), dtype=complex)
    res = np.zeros((m, m))
    for a in range(m):
        for b in range(m):
            block = dagger(EP[a]) @ EP[b]
            lam[a, b] = np.trace(block) / code.n
            res[a, b] = np.linalg.norm(block - lam[a, b] * P)
    herm = (lam + dagger(lam)) / 2
    psd = bool(m == 0 or np.linalg.eigvalsh(herm).min() >= -tol.abs_eps)
    passed = bool((m == 0 or res.max() <= tol.abs_eps) and psd)
    return KLReport(lam, res, psd, passed)


@dataclass
class C3Report:
    lam: np.ndarray  # real, one entry per error operator
    residual: float  # worst entry of the KL residual table and of the off-diagonal lambdas
    passed: bool
    kl: KLReport = field(repr=False)


def c3_check(code: CodeSubspace, Ls: Sequence, tol: Tolerance = DEFAULT_TOL) -> C3Report:
    """Orthogonality condition for lifted operators: a diagonal, nonnegative lambda."""
    Ls = [as_square(L, f"Ls[{k}]") for k, L in enumerate(Ls)]
    for k, L in enumerate(Ls):
        if L.shape[0] != code.dimK:
            raise ValidationError(f"Ls[{k}]: expected dimension {code.dimK}", "Ls")
    kl = kl_check(code, [lift(L, code.dimA) for L in Ls], tol)
    lam = kl.lam
    off = lam - np.diag(np.diag(lam))
    worst_off = float(np.abs(off).max()) if lam.size else 0.0
    diag = np.diag(lam)
    residual = max(kl.max_residual, worst_off)
    passed = bool(
        residual <= tol.abs_eps
        and np.all(np.abs(diag.imag) <= tol.abs_eps)
        and np.all(diag.real >= -tol.abs_eps)
    )
    return C3Report(diag.real.copy(), residual, passed, kl)


@dataclass
class SyndromePVM:
    projectors: list  # P_1..P_l then P_perp
    subspace_dims: list
    unreachable: list  # 1-based labels a whose subspace is zero-dimensional

    @property
    def l(self) -> int:
        return len(self.projectors) - 1

    @property
    def perp(self) -> np.ndarray:
        return self.projectors[-1]


def syndrome_pvm(code: CodeSubspace, Ls: Sequence, tol: Tolerance = DEFAULT_TOL,
                 check: bool = True) -> SyndromePVM:
    """Projectors onto ``span (I (x) L_a) C`` for each ``a``, plus the complement.

    Operators that annihilate the code keep their outcome slot as a zero
    projector and are listed in ``unreachable``.
    """
    if check:
        rep = c3_check(code, Ls, tol)
        if not rep.passed:
            raise ValidationError(
                f"Ls: images of the code are not mutually orthogonal "
                f"(residual {rep.residual:.3g})",
                "Ls",
            )
    projs, dims, unreachable = [], [], []
    for a, L in enumerate(Ls, start=1):
        E = lift(L, code.dimA)
        basis = orthonormalize([E @ c for c in code.basis], tol)
        projs.append(projector(basis, tol, dim=code.dim))
        dims.append(len(basis))
        if not basis:
            unreachable.append(a)
    perp = np.eye(code.dim, dtype=complex) - sum(projs)
    projs.append(perp)
    dims.append(code.dim - sum(dims))
    return SyndromePVM(projs, dims, unreachable)


def pvm_validate(projectors: Sequence, tol: Tolerance = DEFAULT_TOL) -> tuple[bool, float]:
    """Hermiticity, idempotence, mutual orthogonality and completeness.

    Accepts a ``SyndromePVM`` or a plain list of matrices.
    """
    if isinstance(projectors, SyndromePVM):
        projectors = projectors.projectors
    Ps = [as_square(P, "projector") for P in projectors]
    if not Ps:
        return False, float("inf")
    dim = Ps[0].shape[0]
    worst = 0.0
    for k, P in enumerate(Ps):
        worst = max(worst, np.linalg.norm(P - dagger(P)), np.linalg.norm(P @ P - P))
        for Q in Ps[k + 1:]:
            worst = max(worst, np.linalg.norm(P @ Q))
    worst = max(worst, np.linalg.norm(sum(Ps) - np.eye(dim)))
    return bool(worst <= tol.abs_eps), float(worst)
