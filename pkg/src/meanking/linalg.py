"""Dense complex linear algebra on small Hilbert spaces.

Operators and state vectors are plain ``numpy`` arrays of dtype complex128;
operators are 2-D, vectors 1-D.  Everything here is pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np


class ValidationError(ValueError):
    """Input that violates a precondition.

    ``field`` names the offending input so that front ends can report it.
    """

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field


@dataclass(frozen=True)
class Tolerance:
    abs_eps: float = 1e-9
    zero_eps: float = 1e-9

    def __post_init__(self):
        if self.abs_eps < 0 or self.zero_eps < 0:
            raise ValidationError("tolerances must be nonnegative", "tol")


DEFAULT_TOL = Tolerance()


def as_operator(a, field: str = "operator") -> np.ndarray:
    out = np.asarray(a, dtype=complex)
    if out.ndim != 2:
        raise ValidationError(f"{field}: expected a matrix, got shape {out.shape}", field)
    if not np.all(np.isfinite(out)):
        raise ValidationError(f"{field}: non-finite entries", field)
    return out


def as_square(a, field: str = "operator") -> np.ndarray:
    out = as_operator(a, field)
    if out.shape[0] != out.shape[1]:
        raise ValidationError(f"{field}: expected a square matrix, got shape {out.shape}", field)
    return out


def as_vector(v, field: str = "vector") -> np.ndarray:
    out = np.asarray(v, dtype=complex)
    if out.ndim != 1:
        raise ValidationError(f"{field}: expected a vector, got shape {out.shape}", field)
    if not np.all(np.isfinite(out)):
        raise ValidationError(f"{field}: non-finite entries", field)
    return out


def ket(index: int, dim: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(a).T


def tensor(a, b) -> np.ndarray:
    """Kronecker product; the left factor is the slow index.

    Both operands must be vectors or both matrices.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != b.ndim or a.ndim not in (1, 2):
        raise ValidationError(
            f"tensor: operands must both be vectors or both be matrices "
            f"(got ndim {a.ndim} and {b.ndim})",
            "operand",
        )
    return np.kron(a, b)


def lift(op, dim_a: int) -> np.ndarray:
    """``I_A (x) op`` for an operator on the second factor."""
    return np.kron(np.eye(dim_a, dtype=complex), as_square(op))


def hs_inner(a, b) -> complex:
    """Hilbert-Schmidt inner product ``tr(a^dagger b)``."""
    a = as_square(a, "a")
    b = as_square(b, "b")
    if a.shape != b.shape:
        raise ValidationError(f"hs_inner: shape mismatch {a.shape} vs {b.shape}", "b")
    return complex(np.vdot(a, b))


def orthonormalize(vs: Sequence, tol: Tolerance = DEFAULT_TOL) -> list[np.ndarray]:
    """Gram-Schmidt with pivoting and a second re-orthogonalization pass.

    At each step the remaining vector with the largest residual norm is taken.
    Vectors whose residual norm falls to ``tol.zero_eps`` or below are dropped.
    """
    if len(vs) == 0:
        return []
    work = [as_vector(v).copy() for v in vs]
    dim = work[0].shape[0]
    if any(w.shape[0] != dim for w in work):
        raise ValidationError("orthonormalize: vectors of differing dimension", "vectors")
    basis: list[np.ndarray] = []
    while work:
        norms = [np.linalg.norm(w) for w in work]
        k = int(np.argmax(norms))
        if norms[k] <= tol.zero_eps:
            break
        v = work.pop(k)
        for _ in range(2):
            for b in basis:
                v = v - np.vdot(b, v) * b
        n = np.linalg.norm(v)
        if n <= tol.zero_eps:
            continue
        v = v / n
        basis.append(v)
        work = [w - np.vdot(v, w) * v for w in work]
    return basis


def gram(vs: Sequence[np.ndarray]) -> np.ndarray:
    if len(vs) == 0:
        return np.zeros((0, 0), dtype=complex)
    m = np.column_stack(vs)
    return dagger(m) @ m


def is_orthonormal(vs: Sequence[np.ndarray], tol: Tolerance = DEFAULT_TOL) -> bool:
    if len(vs) == 0:
        return True
    g = gram(vs)
    return bool(np.linalg.norm(g - np.eye(len(vs))) <= tol.abs_eps)


def projector(basis: Sequence, tol: Tolerance = DEFAULT_TOL, dim: int | None = None) -> np.ndarray:
    """Sum of ``|b><b|`` over an orthonormal basis.

    ``dim`` is needed only when ``basis`` is empty (giving the zero operator).
    """
    vs = [as_vector(b, "basis") for b in basis]
    if not vs:
        if dim is None:
            raise ValidationError("projector: empty basis needs an explicit dim", "basis")
        return np.zeros((dim, dim), dtype=complex)
    if not is_orthonormal(vs, tol):
        raise ValidationError("projector: basis is not orthonormal", "basis")
    m = np.column_stack(vs)
    return m @ dagger(m)


def approx_equal(a, b, tol: Tolerance = DEFAULT_TOL) -> tuple[bool, float]:
    """Compare by Frobenius norm of the difference; returns (equal, residual)."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValidationError(f"approx_equal: shape mismatch {a.shape} vs {b.shape}", "b")
    r = float(np.linalg.norm(a - b))
    return r <= tol.abs_eps, r


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a complex Ginibre matrix."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def columns(m: np.ndarray) -> list[np.ndarray]:
    return [m[:, k].copy() for k in range(m.shape[1])]
