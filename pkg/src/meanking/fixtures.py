"""Builtin example setups.

``vaa87``  qubit king measuring sigma_x, sigma_y, sigma_z on half of a Bell pair.
``qubit2`` qubit king measuring sigma_x or sigma_z, one-dimensional Bell code.
``comp3``  qutrit row family plus cyclic and anticyclic squares on the computational basis.
``code3d`` qutrit king with four two-outcome measurements and a three-dimensional code.
"""

from __future__ import annotations

import numpy as np

from .construct import (
    anticyclic_square,
    cyclic_square,
    error_basis_from_onb,
    index_family_from_squares,
    measurements_from_family,
    named_basis,
)
from .isomap import iso_forward, maximal_entangled
from .linalg import ValidationError, ket
from .solutions import Setup, make_setup

NAMES = ("vaa87", "comp3", "code3d", "qubit2")

_r2 = 1 / np.sqrt(2)
PLUS = np.array([_r2, _r2], dtype=complex)
MINUS = np.array([_r2, -_r2], dtype=complex)
PLUS_I = np.array([_r2, 1j * _r2])
MINUS_I = np.array([_r2, -1j * _r2])


def _proj(v):
    return np.outer(v, np.conj(v))


X0, X1 = _proj(PLUS), _proj(MINUS)
Z0, Z1 = _proj(ket(0, 2)), _proj(ket(1, 2))

VAA87_L = [
    np.array([[2, 1 - 1j], [1 + 1j, 0]]) / 4,
    np.array([[2, -1 + 1j], [-1 - 1j, 0]]) / 4,
    np.array([[0, 1 + 1j], [1 - 1j, 2]]) / 4,
    np.array([[0, -1 - 1j], [-1 + 1j, 2]]) / 4,
]

VAA87_FAMILY = {
    (1, 1): {1, 3}, (1, 2): {2, 4},
    (2, 1): {1, 4}, (2, 2): {2, 3},
    (3, 1): {1, 2}, (3, 2): {3, 4},
}

PAULI_MODEL = {
    1: [_proj(PLUS), _proj(MINUS)],
    2: [_proj(PLUS_I), _proj(MINUS_I)],
    3: [Z0, Z1],
}


def vaa87_pvm_vectors() -> list[np.ndarray]:
    """Alice's basis recovered from the printed operators, ``|Phi_a> = iso(L_a)/||iso(L_a)||``."""
    s = maximal_entangled(2)
    vs = [iso_forward(L, s) for L in VAA87_L]
    return [v / np.linalg.norm(v) for v in vs]


def _embed(op2: np.ndarray) -> np.ndarray:
    out = np.zeros((3, 3), dtype=complex)
    out[:2, :2] = op2
    return out


def code3d_operators() -> list[np.ndarray]:
    tX0, tX1, tZ0, tZ1 = (_embed(m) for m in (X0, X1, Z0, Z1))
    return [tX0 @ tZ0, tX1 @ tZ0, tX0 @ tZ1, tX1 @ tZ1, _proj(ket(2, 3))]


CODE3D_FAMILY = {
    (1, 1): {1, 2}, (1, 2): {3, 4, 5},
    (2, 1): {1, 2, 5}, (2, 2): {3, 4},
    (3, 1): {1, 3}, (3, 2): {2, 4, 5},
    (4, 1): {1, 3, 5}, (4, 2): {2, 4},
}


def code3d_basis() -> list[np.ndarray]:
    tail = (ket(0, 3) + ket(2, 3)) / np.sqrt(2)
    return [np.kron(ket(i, 3), tail) for i in range(3)]


def _vaa87() -> Setup:
    return make_setup(PAULI_MODEL, VAA87_L, VAA87_FAMILY, name="vaa87")


def _qubit2() -> Setup:
    Ls = [X0 @ Z0, X1 @ Z0, X0 @ Z1, X1 @ Z1]
    model = {1: [X0, X1], 2: [Z0, Z1]}
    family = {(1, 1): {1, 3}, (1, 2): {2, 4}, (2, 1): {1, 2}, (2, 2): {3, 4}}
    return make_setup(model, Ls, family, name="qubit2")


def _comp3() -> Setup:
    d = 3
    Ls = error_basis_from_onb(named_basis("computational", d))
    family = index_family_from_squares([cyclic_square(d), anticyclic_square(d)], True)
    return make_setup(measurements_from_family(Ls, family), Ls, family,
                      name="comp3", pair_d=d)


def _code3d() -> Setup:
    Ls = code3d_operators()
    model = {J: [sum(Ls[a - 1] for a in sorted(CODE3D_FAMILY[(J, i)])) for i in (1, 2)]
             for J in (1, 2, 3, 4)}
    return make_setup(model, Ls, CODE3D_FAMILY, code_basis=code3d_basis(), name="code3d")


_BUILDERS = {"vaa87": _vaa87, "comp3": _comp3, "code3d": _code3d, "qubit2": _qubit2}


def builtin_example(name: str) -> Setup:
    try:
        return _BUILDERS[name]()
    except KeyError:
        raise ValidationError(f"unknown example {name!r}; choose from {', '.join(NAMES)}",
                              "example") from None
