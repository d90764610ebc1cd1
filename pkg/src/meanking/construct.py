"""Solvable problem families built from an orthonormal basis and Latin squares.

Given a basis ``{f_i}`` the operators ``L_jk`` send ``f_j`` to ``f_k / sqrt(d)``
and annihilate the rest of the basis.  Each Latin square fixes one
measurement by grouping the pairs ``(l, square[i][l])`` into outcome ``i``;
the optional row family groups ``(i, l)`` over ``l``.

Pair ``(j, k)`` is flattened to the 1-based label ``(j - 1) d + k``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .isomap import iso_inverse, maximal_entangled
from .linalg import DEFAULT_TOL, Tolerance, ValidationError, as_vector, is_orthonormal

Family = dict  # (J, i) -> frozenset of 1-based error labels
Model = dict  # J -> list of measurement operators, outcome i at position i - 1


@dataclass(frozen=True)
class LatinSquare:
    entries: np.ndarray  # d x d over symbols 1..d; entries[i - 1, l - 1] = J^(i)(l)

    @property
    def d(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def from_rows(cls, rows) -> "LatinSquare":
        arr = np.array(rows, dtype=int)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValidationError("square: expected a d x d array", "squares")
        return cls(arr)


def shift_square(d: int, row_step: int = 1, col_step: int = 1) -> LatinSquare:
    """Entry ``((row_step (i-1) + col_step (l-1)) mod d) + 1``.

    Latin whenever both steps are coprime to ``d``.
    """
    i, l = np.indices((d, d))
    return LatinSquare((row_step * i + col_step * l) % d + 1)


def cyclic_square(d: int) -> LatinSquare:
    return shift_square(d, 1, 1)


def anticyclic_square(d: int) -> LatinSquare:
    return shift_square(d, 1, -1)


def named_square(name: str, d: int) -> LatinSquare:
    squares = {"cyclic": cyclic_square, "anticyclic": anticyclic_square}
    try:
        return squares[name](d)
    except KeyError:
        raise ValidationError(f"unknown square {name!r}; choose from {sorted(squares)}",
                              "squares") from None


def latin_validate(sq: LatinSquare) -> bool:
    e = np.asarray(sq.entries)
    d = e.shape[0]
    if e.ndim != 2 or e.shape != (d, d):
        raise ValidationError("square: expected a d x d array", "squares")
    if e.min() < 1 or e.max() > d:
        raise ValidationError(f"square: entries must lie in 1..{d}", "squares")
    symbols = set(range(1, d + 1))
    return all(set(e[r]) == symbols for r in range(d)) and \
        all(set(e[:, c]) == symbols for c in range(d))


def pair_label(j: int, k: int, d: int) -> int:
    return (j - 1) * d + k


def label_pair(a: int, d: int) -> tuple[int, int]:
    return (a - 1) // d + 1, (a - 1) % d + 1


def index_family_from_squares(squares: Sequence[LatinSquare], include_J0: bool = True,
                              d: int | None = None) -> Family:
    """Index sets for the row family (if requested) followed by one measurement per square.

    Measurements are numbered from 1 in that order, so with the row family
    included it takes the label 1 and square ``m`` becomes measurement ``m + 1``.
    """
    if squares:
        d = squares[0].d
    if d is None:
        raise ValidationError("d is required when no squares are given", "d")
    for sq in squares:
        if sq.d != d:
            raise ValidationError("squares: all squares must share the same size", "squares")
        if not latin_validate(sq):
            raise ValidationError("squares: not a Latin square", "squares")
    family: Family = {}
    J = 0
    if include_J0:
        J += 1
        for i in range(1, d + 1):
            family[(J, i)] = frozenset(pair_label(i, l, d) for l in range(1, d + 1))
    for sq in squares:
        J += 1
        for i in range(1, d + 1):
            family[(J, i)] = frozenset(
                pair_label(l, int(sq.entries[i - 1, l - 1]), d) for l in range(1, d + 1))
    return family


def error_basis_from_onb(basis: Sequence, tol: Tolerance = DEFAULT_TOL) -> list[np.ndarray]:
    """Operators ``L_jk`` (flattened order) from the isomorphism of the maximal state on ``basis``."""
    vs = [as_vector(b, "basis") for b in basis]
    d = len(vs)
    if d == 0 or any(v.shape[0] != d for v in vs):
        raise ValidationError("basis: expected d vectors of dimension d", "basis")
    if not is_orthonormal(vs, tol):
        raise ValidationError("basis: not orthonormal", "basis")
    s = maximal_entangled(d, vs, tol)
    return [iso_inverse(np.kron(vs[j], vs[k]) / np.sqrt(d), s)
            for j in range(d) for k in range(d)]


def measurements_from_family(Ls: Sequence[np.ndarray], family: Family) -> Model:
    """``M_i^(J) = sum of L_a over a in X^(J,i)``."""
    l = len(Ls)
    model: Model = {}
    for (J, i) in sorted(family):
        xs = family[(J, i)]
        if not xs or any(a < 1 or a > l for a in xs):
            raise ValidationError(f"index_family[{J},{i}]: labels must lie in 1..{l}",
                                  "index_family")
        model.setdefault(J, {})[i] = sum(Ls[a - 1] for a in sorted(xs))
    out: Model = {}
    for J, ops in model.items():
        if sorted(ops) != list(range(1, len(ops) + 1)):
            raise ValidationError(f"index_family: outcomes of measurement {J} are not 1..n",
                                  "index_family")
        out[J] = [ops[i] for i in range(1, len(ops) + 1)]
    return out


def fourier_basis(d: int) -> list[np.ndarray]:
    w = np.exp(2j * np.pi / d)
    return [np.array([w ** (j * k) for j in range(d)]) / np.sqrt(d) for k in range(d)]


def named_basis(name: str, d: int) -> list[np.ndarray]:
    if name == "computational":
        return [np.eye(d, dtype=complex)[:, k] for k in range(d)]
    if name == "fourier":
        return fourier_basis(d)
    raise ValidationError(f"unknown basis {name!r}; choose computational or fourier", "basis")
