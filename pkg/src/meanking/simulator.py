"""Playing the king/Alice game.

One round: the king picks ``J`` from the prior and measures ``I (x) M^(J)``
on Alice's state, Alice measures the syndrome PVM on the post-measurement
state, and then guesses ``i`` from ``(J, a)`` using the index sets.

Randomness is counter based: round ``r`` of seed ``s`` draws its three
uniforms from ``Philox(key=s, counter=[r, 0, 0, 0])``.  Those are exactly
the 4 r .. 4 r + 2 raw words of the single stream ``Philox(key=s)``, so the
vectorized, chunked and threaded paths all reproduce the round-by-round
transcript of :func:`play_round`.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .construct import Family
from .linalg import DEFAULT_TOL, Tolerance, ValidationError, as_vector, lift
from .qecc import SyndromePVM, syndrome_pvm
from .solutions import Setup

PERP = None  # Alice's outcome for the complement projector
CHUNK = 4096


def round_rng(seed: int, r: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed, counter=[r, 0, 0, 0]))


def _uniforms(seed: int, start: int, n: int) -> np.ndarray:
    """Three uniforms per round for rounds ``start .. start + n - 1``."""
    raw = np.random.Philox(key=seed, counter=[start, 0, 0, 0]).random_raw(4 * n)
    raw = raw.reshape(n, 4)[:, :3]
    return (raw >> np.uint64(11)).astype(np.float64) * 2.0 ** -53


def born_probabilities(state: np.ndarray, ops: Sequence[np.ndarray],
                       tol: Tolerance = DEFAULT_TOL) -> tuple[np.ndarray, list]:
    """Outcome probabilities ``||O_k state||^2`` and unnormalized images.

    Probabilities whose amplitude norm is at most ``tol.zero_eps`` are set to
    exactly zero so that rounding noise cannot select an impossible outcome.
    """
    images = [op @ state for op in ops]
    p = np.array([np.vdot(v, v).real for v in images])
    p[p <= tol.zero_eps ** 2] = 0.0
    return p, images


def _pick(p: np.ndarray, u):
    """Inverse-CDF index for uniform(s) ``u``; never lands on a zero-probability slot."""
    cum = np.cumsum(p) / p.sum()
    idx = np.searchsorted(cum, u, side="right")
    last = int(np.flatnonzero(p)[-1])
    return np.minimum(idx, last)


def born_sample(state, ops: Sequence[np.ndarray], rng: np.random.Generator,
                tol: Tolerance = DEFAULT_TOL) -> tuple[int, np.ndarray]:
    """Sample a 1-based outcome and the normalized post-measurement state."""
    state = as_vector(state, "state")
    p, images = born_probabilities(state, ops, tol)
    if p.sum() <= tol.zero_eps:
        raise ValidationError("measurement gives zero total probability", "measurements")
    k = int(_pick(p, rng.random()))
    return k + 1, images[k] / math.sqrt(p[k])


def estimate(J: int, a, family: Family):
    """The unique ``i`` with ``a`` in ``X^(J,i)``, or None to abstain."""
    if a is PERP:
        return None
    hits = [i for (J2, i), xs in family.items() if J2 == J and a in xs]
    if len(hits) > 1:
        raise ValidationError(f"index_family: outcome {a} appears in several sets of "
                              f"measurement {J}", "index_family")
    return hits[0] if hits else None


@dataclass(frozen=True)
class GameConfig:
    setup: Setup
    initial_state: np.ndarray | None = field(default=None, repr=False)
    prior: tuple | None = None  # over sorted measurement labels; uniform when None
    seed: int = 0
    rounds: int = 1000
    tol: Tolerance = DEFAULT_TOL

    def labels(self) -> list:
        return sorted(self.setup.measurements)

    def prior_array(self) -> np.ndarray:
        n = len(self.setup.measurements)
        if self.prior is None:
            return np.full(n, 1.0 / n)
        p = np.asarray(self.prior, dtype=float)
        if p.shape != (n,) or np.any(p < 0) or abs(p.sum() - 1) > self.tol.abs_eps:
            raise ValidationError(f"prior: expected {n} nonnegative weights summing to 1",
                                  "prior")
        return p

    def state(self) -> np.ndarray:
        if self.initial_state is not None:
            v = as_vector(self.initial_state, "initial_state")
        elif self.setup.initial_state is not None:
            v = self.setup.initial_state
        else:
            v = self.setup.code.basis[0]
        if v.shape[0] != self.setup.code.dim:
            raise ValidationError(f"initial_state: expected dimension {self.setup.code.dim}",
                                  "initial_state")
        n = np.linalg.norm(v)
        if abs(n - 1) > self.tol.abs_eps:
            raise ValidationError("initial_state: not normalized", "initial_state")
        return v

    def in_code(self) -> bool:
        v = self.state()
        P = self.setup.code.P
        return bool(np.linalg.norm(v - P @ v) <= self.tol.abs_eps)


def alice_measurement(setup: Setup, tol: Tolerance = DEFAULT_TOL) -> SyndromePVM:
    # Built without the orthogonality gate so that non-solutions can still be played.
    return syndrome_pvm(setup.code, setup.error_ops, tol, check=False)


@dataclass
class RoundRecord:
    J: int
    i: int
    a: int | None
    guess: int | None
    success: bool


def play_round(config: GameConfig, rng: np.random.Generator,
               pvm: SyndromePVM | None = None) -> RoundRecord:
    setup, tol = config.setup, config.tol
    pvm = pvm or alice_measurement(setup, tol)
    labels = config.labels()
    J = labels[int(_pick(config.prior_array(), rng.random()))]
    king_ops = [lift(M, setup.code.dimA) for M in setup.measurements[J]]
    i, post = born_sample(config.state(), king_ops, rng, tol)
    k, _ = born_sample(post, pvm.projectors, rng, tol)
    a = PERP if k == len(pvm.projectors) else k
    guess = estimate(J, a, setup.family)
    return RoundRecord(J, i, a, guess, guess == i)


@dataclass
class _Tables:
    labels: list
    prior: np.ndarray
    king: list  # per J index: outcome probabilities
    alice: list  # per J index, per i: Alice outcome probabilities (PERP last)
    guess: list  # per J index: guessed i per Alice outcome slot


def _tables(config: GameConfig, pvm: SyndromePVM) -> _Tables:
    setup, tol = config.setup, config.tol
    state = config.state()
    labels = config.labels()
    king, alice, guess = [], [], []
    slots = list(range(1, pvm.l + 1)) + [PERP]
    for J in labels:
        ops = [lift(M, setup.code.dimA) for M in setup.measurements[J]]
        p, images = born_probabilities(state, ops, tol)
        if p.sum() <= tol.zero_eps:
            raise ValidationError("measurement gives zero total probability", "measurements")
        king.append(p)
        per_i = []
        for k, v in enumerate(images):
            if p[k] == 0:
                per_i.append(None)
                continue
            q, _ = born_probabilities(v / math.sqrt(p[k]), pvm.projectors, tol)
            per_i.append(q)
        alice.append(per_i)
        guess.append([estimate(J, a, setup.family) for a in slots])
    return _Tables(labels, config.prior_array(), king, alice, guess)


def _sample_chunk(t: _Tables, u: np.ndarray) -> np.ndarray:
    """Rows ``(J index, i index, alice slot)`` for a block of rounds."""
    n = u.shape[0]
    out = np.zeros((n, 3), dtype=np.int64)
    jx = _pick(t.prior, u[:, 0])
    out[:, 0] = jx
    for j in np.unique(jx):
        rows = np.flatnonzero(jx == j)
        ix = _pick(t.king[j], u[rows, 1])
        out[rows, 1] = ix
        for i in np.unique(ix):
            sub = rows[ix == i]
            out[sub, 2] = _pick(t.alice[j][i], u[sub, 2])
    return out


@dataclass
class ExperimentStats:
    counts: dict  # (J, i, a) -> count, a is None for the complement outcome
    success_rate: float
    conditional_entropy: float  # bits, from the exact joint distribution
    empirical_entropy: float  # bits, from the sampled frequencies
    exact_joint: dict
    exact_success: float
    seed: int
    rounds: int
    prior: list


def run_experiment(config: GameConfig, workers: int = 1) -> ExperimentStats:
    """Play ``config.rounds`` independent rounds; identical output for any ``workers``."""
    if config.rounds < 1:
        raise ValidationError("rounds must be at least 1", "rounds")
    pvm = alice_measurement(config.setup, config.tol)
    t = _tables(config, pvm)
    starts = list(range(0, config.rounds, CHUNK))

    def work(start):
        n = min(CHUNK, config.rounds - start)
        return _sample_chunk(t, _uniforms(config.seed, start, n))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(work, starts))
    else:
        parts = [work(s) for s in starts]
    rows = np.concatenate(parts)
    slots = list(range(1, pvm.l + 1)) + [PERP]
    keys, n_keys = np.unique(rows, axis=0, return_counts=True)
    counts, wins = {}, 0
    for (jx, ix, ax), c in zip(keys.tolist(), n_keys.tolist()):
        J, i, a = t.labels[jx], ix + 1, slots[ax]
        counts[(J, i, a)] = c
        if t.guess[jx][ax] == i:
            wins += c
    dist = exact_joint(config.setup, t.prior, config.state(), config.tol, pvm)
    total = config.rounds
    empirical = {k: c / total for k, c in counts.items()}
    return ExperimentStats(
        counts=dict(sorted(counts.items(), key=_key_order)),
        success_rate=wins / total,
        conditional_entropy=conditional_entropy(dist),
        empirical_entropy=conditional_entropy(empirical),
        exact_joint=dist,
        exact_success=success_probability(dist, config.setup.family),
        seed=config.seed,
        rounds=total,
        prior=[float(x) for x in t.prior],
    )


def _key_order(item):
    (J, i, a), _ = item
    return (J, i, math.inf if a is PERP else a)


def exact_joint(setup: Setup, prior=None, state=None, tol: Tolerance = DEFAULT_TOL,
                pvm: SyndromePVM | None = None) -> dict:
    """``Pr(J, i, a) = Pr(J) ||P_a (I (x) M_i^(J)) Phi||^2`` over every triple."""
    labels = sorted(setup.measurements)
    if prior is None:
        prior = np.full(len(labels), 1.0 / len(labels))
    if state is None:
        state = setup.initial_state if setup.initial_state is not None else setup.code.basis[0]
    pvm = pvm or alice_measurement(setup, tol)
    slots = list(range(1, pvm.l + 1)) + [PERP]
    dist = {}
    for pJ, J in zip(prior, labels):
        for i, M in enumerate(setup.measurements[J], start=1):
            v = lift(M, setup.code.dimA) @ state
            for a, Pa in zip(slots, pvm.projectors):
                w = Pa @ v
                dist[(J, i, a)] = float(pJ * np.vdot(w, w).real)
    return dist


def conditional_entropy(dist: dict) -> float:
    """``H(I | J, A)`` in bits; zero-probability terms contribute nothing."""
    marg: dict = {}
    for (J, i, a), p in dist.items():
        marg[(J, a)] = marg.get((J, a), 0.0) + p
    h = 0.0
    for (J, i, a), p in dist.items():
        if p > 0:
            h -= p * math.log2(p / marg[(J, a)])
    return max(h, 0.0)


def success_probability(dist: dict, family: Family) -> float:
    """Probability that the estimate from ``(J, a)`` names the king's outcome."""
    return float(sum(p for (J, i, a), p in dist.items() if estimate(J, a, family) == i))


def support_violations(dist: dict, family: Family, tol: Tolerance = DEFAULT_TOL) -> list:
    """Triples with positive probability whose ``a`` lies outside ``X^(J,i)``."""
    return [(J, i, a) for (J, i, a), p in dist.items()
            if p > tol.abs_eps and (a is PERP or a not in family.get((J, i), ()))]
