"""Certification of mean king solutions and their reconstruction from a rank-1 PVM.

A setup pairs a code subspace and a set of king measurements with error
operators ``L_a`` and index sets ``X^(J,i)``.  It is a solution when

* c1: ``I (x) M_i^(J)`` equals ``sum_{a in X^(J,i)} f_a I (x) L_a`` on the code,
* c2: for each ``J`` the sets ``X^(J,i)`` are pairwise disjoint,
* c3: the images ``(I (x) L_a) C`` are mutually orthogonal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .construct import Family, Model
from .isomap import SchmidtState, iso_inverse, maximal_entangled, sc_gram, sc_inner
from .linalg import (
    DEFAULT_TOL,
    Tolerance,
    ValidationError,
    as_square,
    as_vector,
    dagger,
    is_orthonormal,
    lift,
)
from .qecc import CodeSubspace, c3_check, code_subspace


@dataclass(frozen=True)
class Setup:
    schmidt: SchmidtState
    code: CodeSubspace
    measurements: Model
    error_ops: list
    family: Family
    name: str = ""
    pair_d: int | None = None  # error labels read as pairs (j, k) when set
    initial_state: np.ndarray | None = field(default=None, repr=False)

    @property
    def l(self) -> int:
        return len(self.error_ops)


def make_setup(measurements: Model, error_ops: Sequence, family: Family,
               schmidt: SchmidtState | None = None, code_basis: Sequence | None = None,
               name: str = "", pair_d: int | None = None, initial_state=None,
               tol: Tolerance = DEFAULT_TOL) -> Setup:
    """Validate dimensions and assemble a :class:`Setup`.

    The Schmidt state defaults to the maximal one on the king's dimension and
    the code defaults to the span of the Schmidt vector.
    """
    if not measurements:
        raise ValidationError("measurements: at least one measurement is required",
                              "measurements")
    model = {}
    dimK = None
    for J, ops in measurements.items():
        if not ops:
            raise ValidationError(f"measurements[{J}]: no outcomes", "measurements")
        model[J] = [as_square(M, f"measurements[{J}]") for M in ops]
        for M in model[J]:
            dimK = dimK or M.shape[0]
            if M.shape[0] != dimK:
                raise ValidationError(f"measurements[{J}]: dimension mismatch", "measurements")
    Ls = [as_square(L, "error_ops") for L in error_ops]
    if not Ls:
        raise ValidationError("error_ops: at least one operator is required", "error_ops")
    if any(L.shape[0] != dimK for L in Ls):
        raise ValidationError(f"error_ops: expected {dimK}x{dimK} operators", "error_ops")
    if schmidt is None:
        schmidt = maximal_entangled(dimK, tol=tol)
    if schmidt.d != dimK:
        raise ValidationError(f"schmidt: dimension {schmidt.d} differs from {dimK}", "schmidt")
    if code_basis is None:
        code = code_subspace(dimK, dimK, [schmidt.vector], tol)
    else:
        vs = [as_vector(v, "code_basis") for v in code_basis]
        if vs[0].shape[0] % dimK:
            raise ValidationError("code_basis: dimension is not a multiple of the king's",
                                  "code_basis")
        code = code_subspace(vs[0].shape[0] // dimK, dimK, vs, tol)
    fam = {}
    for key, xs in family.items():
        J, i = key
        xs = frozenset(int(a) for a in xs)
        if any(a < 1 or a > len(Ls) for a in xs):
            raise ValidationError(f"index_family[{J},{i}]: labels must lie in 1..{len(Ls)}",
                                  "index_family")
        fam[(int(J), int(i))] = xs
    if initial_state is not None:
        initial_state = as_vector(initial_state, "initial_state")
        if initial_state.shape[0] != code.dim:
            raise ValidationError(f"initial_state: expected dimension {code.dim}",
                                  "initial_state")
    return Setup(schmidt, code, model, Ls, fam, name, pair_d, initial_state)


def model_validate(M: Model, tol: Tolerance = DEFAULT_TOL) -> tuple[bool, dict]:
    """Per-measurement residual of ``sum_i M_i^dag M_i = I``."""
    residuals = {}
    for J, ops in M.items():
        d = ops[0].shape[0]
        s = sum(dagger(m) @ m for m in ops)
        residuals[J] = float(np.linalg.norm(s - np.eye(d)))
    return all(r <= tol.abs_eps for r in residuals.values()), residuals


def _project_coefficients(Ls: Sequence[np.ndarray], M: np.ndarray, s: SchmidtState,
                          gram: np.ndarray, diagonal: bool) -> np.ndarray:
    b = np.array([sc_inner(L, M, s) for L in Ls])
    if diagonal:
        return b / np.diag(gram).real
    return np.linalg.lstsq(gram, b, rcond=None)[0]


@dataclass
class C1Result:
    coeffs: dict  # (J, i, a) -> complex, for a in X^(J,i)
    residuals: dict  # (J, i) -> residual on the code
    global_residuals: dict  # (J, i) -> residual on the whole space (informational)
    offenders: list  # (J, i, a, |f|): needed outside X^(J,i)
    zero_members: list  # (J, i, a): in X^(J,i) with a vanishing coefficient
    passed: bool


def c1_decompose(code: CodeSubspace, M: Model, Ls: Sequence, family: Family,
                 s: SchmidtState, tol: Tolerance = DEFAULT_TOL) -> C1Result:
    """Expand each measurement operator over the error operators and test the expansion on C.

    Coefficients come from the Schmidt inner product projection
    ``f_a = <L_a|M>_Sc / <L_a|L_a>_Sc`` (a Gram solve when the ``L_a`` are not
    orthogonal).  The residual is ``||(I (x) M) P - sum_{a in X} f_a (I (x) L_a) P||_F``.
    """
    Ls = [as_square(L, "Ls") for L in Ls]
    gram = sc_gram(Ls, s)
    off = gram - np.diag(np.diag(gram))
    diagonal = bool(np.abs(off).max() <= tol.abs_eps) if len(Ls) > 1 else True
    P = code.P
    LP = [lift(L, code.dimA) @ P for L in Ls]
    coeffs, residuals, global_res, offenders, zeros = {}, {}, {}, [], []
    passed = True
    for J in sorted(M):
        for i, Mi in enumerate(M[J], start=1):
            xs = family.get((J, i), frozenset())
            f = _project_coefficients(Ls, Mi, s, gram, diagonal)
            approx = np.zeros_like(P)
            approx_global = np.zeros_like(Mi)
            for a in sorted(xs):
                coeffs[(J, i, a)] = complex(f[a - 1])
                approx = approx + f[a - 1] * LP[a - 1]
                approx_global = approx_global + f[a - 1] * Ls[a - 1]
                if abs(f[a - 1]) <= tol.zero_eps:
                    zeros.append((J, i, a))
            for a in range(1, len(Ls) + 1):
                if a not in xs and abs(f[a - 1]) > tol.zero_eps \
                        and np.linalg.norm(LP[a - 1]) > tol.zero_eps:
                    offenders.append((J, i, a, float(abs(f[a - 1]))))
            r = float(np.linalg.norm(lift(Mi, code.dimA) @ P - approx))
            residuals[(J, i)] = r
            global_res[(J, i)] = float(np.linalg.norm(Mi - approx_global))
            if not xs or r > tol.abs_eps:
                passed = False
    return C1Result(coeffs, residuals, global_res, offenders, zeros, passed)


def c2_violations(family: Family) -> list:
    """Triples ``(J, i, i')`` whose index sets intersect."""
    bad = []
    keys = sorted(family)
    for x, (J, i) in enumerate(keys):
        for (J2, i2) in keys[x + 1:]:
            if J2 == J and family[(J, i)] & family[(J2, i2)]:
                bad.append((J, i, i2))
    return bad


def common_alpha(Ls: Sequence[np.ndarray], s: SchmidtState, tol: Tolerance = DEFAULT_TOL):
    """Shared squared Schmidt norm of the ``L_a``, or None when they differ."""
    norms = [sc_inner(L, L, s).real for L in Ls]
    if max(norms) - min(norms) <= tol.abs_eps:
        return float(norms[0])
    return None


@dataclass
class SolutionCertificate:
    Ls: list
    family: Family
    coeffs: dict
    lam: np.ndarray
    alpha: float | None
    c1: C1Result
    c2_collisions: list
    c3_residual: float
    c3_passed: bool
    passed: bool

    @property
    def c1_passed(self) -> bool:
        return self.c1.passed

    @property
    def c2_passed(self) -> bool:
        return not self.c2_collisions


def certify(setup: Setup, tol: Tolerance = DEFAULT_TOL) -> SolutionCertificate:
    """Check c1, c2 and c3 for ``setup``; failures are carried in the certificate."""
    code, M, Ls, family, s = (setup.code, setup.measurements, setup.error_ops,
                              setup.family, setup.schmidt)
    c1 = c1_decompose(code, M, Ls, family, s, tol)
    collisions = c2_violations(family)
    c3 = c3_check(code, Ls, tol)
    passed = c1.passed and not collisions and c3.passed
    return SolutionCertificate(
        Ls=list(Ls), family=dict(family), coeffs=c1.coeffs, lam=c3.lam,
        alpha=common_alpha(Ls, s, tol), c1=c1, c2_collisions=collisions,
        c3_residual=c3.residual, c3_passed=c3.passed, passed=passed,
    )


@dataclass
class Derivation:
    Ls: list
    family: Family
    coeffs: dict
    alpha: float
    c2_collisions: list
    completeness: np.ndarray = field(repr=False)  # sum_a L_a^dag L_a

    @property
    def is_solution(self) -> bool:
        return not self.c2_collisions


def derive_from_pvm(s: SchmidtState, pvm_vectors: Sequence, M: Model,
                    tol: Tolerance = DEFAULT_TOL, alpha: float | None = None) -> Derivation:
    """Error operators and index sets from an initial Schmidt state and Alice's rank-1 PVM.

    ``L_a`` is the preimage of ``sqrt(alpha) |p_a>``; ``alpha`` defaults to
    ``1/d`` for the maximal state and to the smallest squared Schmidt weight
    otherwise, which keeps ``sum_a L_a^dag L_a <= I``.  ``X^(J,i)`` collects
    the ``a`` with a nonzero overlap ``<M_i^(J)|L_a>_Sc``.
    """
    d = s.d
    ps = [as_vector(p, "pvm_vectors") for p in pvm_vectors]
    if len(ps) != d * d or any(p.shape[0] != d * d for p in ps):
        raise ValidationError(f"pvm_vectors: expected {d * d} vectors of dimension {d * d}",
                              "pvm_vectors")
    if not is_orthonormal(ps, tol):
        raise ValidationError("pvm_vectors: not an orthonormal basis", "pvm_vectors")
    ok, res = model_validate(M, tol)
    if not ok:
        worst = max(res, key=res.get)
        raise ValidationError(f"measurements[{worst}]: operators are not complete "
                              f"(residual {res[worst]:.3g})", "measurements")
    if alpha is None:
        alpha = 1.0 / d if s.is_maximal else float(np.min(s.eta ** 2))
    Ls = [iso_inverse(np.sqrt(alpha) * p, s) for p in ps]
    family, coeffs = {}, {}
    for J in sorted(M):
        for i, Mi in enumerate(M[J], start=1):
            xs = []
            for a, L in enumerate(Ls, start=1):
                ov = sc_inner(L, Mi, s)
                if abs(ov) > tol.zero_eps:
                    xs.append(a)
                    coeffs[(J, i, a)] = ov / alpha
            family[(J, i)] = frozenset(xs)
    completeness = sum(dagger(L) @ L for L in Ls)
    return Derivation(Ls, family, coeffs, float(alpha), c2_violations(family), completeness)
