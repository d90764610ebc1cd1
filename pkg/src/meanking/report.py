"""JSON and table renderings of setups, certificates, derivations and statistics.

Complex numbers are ``[re, im]`` pairs and matrices are row-major lists of
rows.  Floats are rounded to 12 significant digits and keys are sorted, so a
rendered document parses and re-renders to the same bytes.
"""

from __future__ import annotations

import json
import math
from typing import Any

import numpy as np

from .construct import label_pair
from .isomap import schmidt_state
from .linalg import DEFAULT_TOL, Tolerance, ValidationError
from .simulator import PERP, ExperimentStats
from .solutions import Derivation, Setup, SolutionCertificate, make_setup

SIG = 12


def _num(x: float) -> float:
    if not math.isfinite(x):
        raise ValueError(f"non-finite value {x}")
    y = float(format(x, f".{SIG}g"))
    return 0.0 if y == 0 else y


def canonical(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canonical(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _num(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return [_num(obj.real), _num(obj.imag)]
    if isinstance(obj, np.ndarray):
        return canonical(obj.tolist())
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(canonical(obj), sort_keys=True, indent=2) + "\n"


# -- decoding -----------------------------------------------------------------

def _complex_array(data, ndim: int, field: str) -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError):
        raise ValidationError(f"{field}: expected numbers or [re, im] pairs", field) from None
    if arr.ndim == ndim + 1 and arr.shape[-1] == 2:
        return arr[..., 0] + 1j * arr[..., 1]
    if arr.ndim == ndim:
        return arr.astype(complex)
    raise ValidationError(f"{field}: unexpected shape {arr.shape}", field)


def matrix(data, field: str = "matrix") -> np.ndarray:
    return _complex_array(data, 2, field)


def vector(data, field: str = "vector") -> np.ndarray:
    return _complex_array(data, 1, field)


def _pairs_key(key: str, n: int, field: str) -> tuple:
    try:
        parts = tuple(int(p) for p in key.split(","))
    except ValueError:
        raise ValidationError(f"{field}: bad key {key!r}", field) from None
    if len(parts) != n:
        raise ValidationError(f"{field}: bad key {key!r}", field)
    return parts


def schmidt_from_json(data: dict, d: int, tol: Tolerance = DEFAULT_TOL):
    if not isinstance(data, dict):
        raise ValidationError("schmidt: expected an object", "schmidt")
    eta = data.get("eta")
    if eta is None:
        eta = [1 / math.sqrt(d)] * d
    try:
        eta = [float(e) for e in eta]
    except (TypeError, ValueError):
        raise ValidationError("schmidt.eta: expected a list of numbers", "schmidt.eta") from None
    bases = {}
    for name in ("basisA", "basisK"):
        if data.get(name) is not None:
            bases[name] = [vector(v, f"schmidt.{name}") for v in data[name]]
    return schmidt_state(eta, bases.get("basisA"), bases.get("basisK"), tol)


def setup_from_json(data: dict, tol: Tolerance = DEFAULT_TOL) -> Setup:
    if not isinstance(data, dict):
        raise ValidationError("setup: expected a JSON object", "setup")
    for key in ("measurements", "error_ops", "index_family"):
        if key not in data:
            raise ValidationError(f"{key}: missing", key)
    if not isinstance(data["measurements"], dict):
        raise ValidationError("measurements: expected an object keyed by J", "measurements")
    model = {}
    for J, ops in data["measurements"].items():
        try:
            Jn = int(J)
        except ValueError:
            raise ValidationError(f"measurements: bad key {J!r}", "measurements") from None
        model[Jn] = [matrix(m, f"measurements.{J}") for m in ops]
    Ls = [matrix(m, "error_ops") for m in data["error_ops"]]
    family = {}
    for key, xs in data["index_family"].items():
        family[_pairs_key(key, 2, "index_family")] = xs
    dimK = next(iter(model.values()))[0].shape[0]
    schmidt = None
    if data.get("schmidt") is not None:
        schmidt = schmidt_from_json(data["schmidt"], dimK, tol)
    code_basis = None
    if data.get("code_basis") is not None:
        code_basis = [vector(v, "code_basis") for v in data["code_basis"]]
    initial = None
    if data.get("initial_state") is not None:
        initial = vector(data["initial_state"], "initial_state")
    return make_setup(model, Ls, family, schmidt, code_basis, name=data.get("name", ""),
                      pair_d=data.get("pair_d"), initial_state=initial, tol=tol)


# -- encoding -----------------------------------------------------------------

def _family_json(family: dict) -> dict:
    return {f"{J},{i}": sorted(xs) for (J, i), xs in sorted(family.items())}


def setup_to_json(setup: Setup) -> dict:
    s = setup.schmidt
    out = {
        "name": setup.name,
        "schmidt": {"eta": s.eta, "basisA": s.basisA.T, "basisK": s.basisK.T},
        "code_basis": list(setup.code.basis),
        "measurements": {str(J): ops for J, ops in sorted(setup.measurements.items())},
        "error_ops": setup.error_ops,
        "index_family": _family_json(setup.family),
    }
    if setup.pair_d is not None:
        out["pair_d"] = setup.pair_d
    if setup.initial_state is not None:
        out["initial_state"] = setup.initial_state
    return out


def certificate_to_json(cert: SolutionCertificate, name: str = "") -> dict:
    c1 = cert.c1
    return {
        "name": name,
        "passed": cert.passed,
        "alpha": cert.alpha,
        "lambda": cert.lam,
        "index_family": _family_json(cert.family),
        "coefficients": {f"{J},{i},{a}": f for (J, i, a), f in sorted(cert.coeffs.items())},
        "conditions": {
            "c1": {
                "passed": c1.passed,
                "max_residual": max(c1.residuals.values(), default=0.0),
                "residuals": {f"{J},{i}": r for (J, i), r in sorted(c1.residuals.items())},
                "global_residuals": {f"{J},{i}": r
                                     for (J, i), r in sorted(c1.global_residuals.items())},
                "offenders": [list(o) for o in c1.offenders],
                "zero_members": [list(z) for z in c1.zero_members],
            },
            "c2": {"passed": cert.c2_passed, "collisions": [list(c) for c in cert.c2_collisions]},
            "c3": {"passed": cert.c3_passed, "residual": cert.c3_residual},
        },
    }


def derivation_to_json(der: Derivation, name: str = "") -> dict:
    return {
        "name": name,
        "solution": der.is_solution,
        "alpha": der.alpha,
        "error_ops": der.Ls,
        "index_family": _family_json(der.family),
        "coefficients": {f"{J},{i},{a}": f for (J, i, a), f in sorted(der.coeffs.items())},
        "c2_collisions": [list(c) for c in der.c2_collisions],
        "completeness": der.completeness,
    }


def _slot(a) -> str:
    return "perp" if a is PERP else str(a)


def stats_to_json(stats: ExperimentStats, name: str = "") -> dict:
    return {
        "name": name,
        "seed": stats.seed,
        "rounds": stats.rounds,
        "prior": stats.prior,
        "success_rate": stats.success_rate,
        "exact_success": stats.exact_success,
        "entropy_bits": stats.conditional_entropy,
        "empirical_entropy_bits": stats.empirical_entropy,
        "counts": {f"{J}/{i}/{_slot(a)}": c for (J, i, a), c in stats.counts.items()},
        "joint": {f"{J}/{i}/{_slot(a)}": p for (J, i, a), p in stats.exact_joint.items()},
    }


# -- tables -------------------------------------------------------------------

def _fmt(x) -> str:
    if isinstance(x, complex):
        if abs(x.imag) < 1e-15:
            return format(_num(x.real), f".{SIG}g")
        return f"{_num(x.real):.{SIG}g}{_num(x.imag):+.{SIG}g}j"
    return format(_num(float(x)), f".{SIG}g")


def format_index_set(xs, pair_d: int | None = None) -> str:
    if pair_d:
        return "{" + ",".join("({},{})".format(*label_pair(a, pair_d)) for a in sorted(xs)) + "}"
    return "{" + ",".join(str(a) for a in sorted(xs)) + "}"


def family_table(family: dict, pair_d: int | None = None) -> str:
    rows = [("J", "i", "X^(J,i)")]
    rows += [(str(J), str(i), format_index_set(xs, pair_d)) for (J, i), xs in sorted(family.items())]
    w0 = max(len(r[0]) for r in rows)
    w1 = max(len(r[1]) for r in rows)
    return "\n".join(f"{a:>{w0}}  {b:>{w1}}  {c}" for a, b, c in rows)


def matrix_table(m: np.ndarray) -> str:
    cells = [[_fmt(complex(x)) for x in row] for row in m]
    w = max(len(c) for row in cells for c in row)
    return "\n".join("  [ " + "  ".join(c.rjust(w) for c in row) + " ]" for row in cells)


def certificate_table(cert: SolutionCertificate, name: str = "", pair_d: int | None = None) -> str:
    c1 = cert.c1
    lines = [
        f"certificate {name}".rstrip(),
        f"passed: {cert.passed}",
        f"c1 (decomposition on code): {c1.passed}  max residual "
        f"{_fmt(max(c1.residuals.values(), default=0.0))}",
        f"c2 (disjoint index sets):   {cert.c2_passed}"
        + (f"  collisions {cert.c2_collisions}" if cert.c2_collisions else ""),
        f"c3 (orthogonal images):     {cert.c3_passed}  residual {_fmt(cert.c3_residual)}",
        "lambda: (" + ", ".join(_fmt(x) for x in cert.lam) + ")",
        "alpha: " + ("-" if cert.alpha is None else _fmt(cert.alpha)),
        "",
        family_table(cert.family, pair_d),
    ]
    if c1.offenders:
        lines += ["", "coefficients needed outside X^(J,i):"]
        lines += [f"  J={J} i={i} a={a} |f|={_fmt(f)}" for J, i, a, f in c1.offenders]
    return "\n".join(lines) + "\n"


def derivation_table(der: Derivation, name: str = "", pair_d: int | None = None) -> str:
    lines = [f"derivation {name}".rstrip(), f"alpha: {_fmt(der.alpha)}",
             f"solution (disjoint index sets): {der.is_solution}"]
    if der.c2_collisions:
        lines.append(f"collisions: {der.c2_collisions}")
    for a, L in enumerate(der.Ls, start=1):
        lines += [f"L_{a}:", matrix_table(L)]
    lines += ["", family_table(der.family, pair_d)]
    return "\n".join(lines) + "\n"


def setup_table(setup: Setup) -> str:
    lines = [f"setup {setup.name}".rstrip(),
             f"dims: A={setup.code.dimA} K={setup.code.dimK} code={setup.code.n}"]
    for J, ops in sorted(setup.measurements.items()):
        for i, M in enumerate(ops, start=1):
            lines += [f"M_{i}^({J}):", matrix_table(M)]
    for a, L in enumerate(setup.error_ops, start=1):
        lines += [f"L_{a}:", matrix_table(L)]
    lines += ["", family_table(setup.family, setup.pair_d)]
    return "\n".join(lines) + "\n"


def stats_table(stats: ExperimentStats, name: str = "") -> str:
    lines = [
        f"experiment {name}".rstrip(),
        f"seed: {stats.seed}  rounds: {stats.rounds}",
        f"success_rate: {_fmt(stats.success_rate)}",
        f"exact success probability: {_fmt(stats.exact_success)}",
        f"H(I|J,A) exact: {_fmt(stats.conditional_entropy)} bits",
        "",
        "   J   i     a     count   Pr(J,i,a)",
    ]
    keys = sorted(set(stats.counts) | {k for k, p in stats.exact_joint.items() if p > 1e-15},
                  key=lambda k: (k[0], k[1], math.inf if k[2] is PERP else k[2]))
    for J, i, a in keys:
        lines.append(f"{J:>4} {i:>3} {_slot(a):>5} {stats.counts.get((J, i, a), 0):>9}   "
                     f"{_fmt(stats.exact_joint.get((J, i, a), 0.0))}")
    return "\n".join(lines) + "\n"


def render_report(result, fmt: str = "json", name: str = "", pair_d: int | None = None) -> str:
    if isinstance(result, SolutionCertificate):
        return dumps(certificate_to_json(result, name)) if fmt == "json" \
            else certificate_table(result, name, pair_d)
    if isinstance(result, Derivation):
        return dumps(derivation_to_json(result, name)) if fmt == "json" \
            else derivation_table(result, name, pair_d)
    if isinstance(result, ExperimentStats):
        return dumps(stats_to_json(result, name)) if fmt == "json" else stats_table(result, name)
    if isinstance(result, Setup):
        return dumps(setup_to_json(result)) if fmt == "json" else setup_table(result)
    raise TypeError(f"cannot render {type(result).__name__}")
