"""Exact engines for the aggregate-claims law, plus a seeded sampler.

Three independent routes to the distribution of the n-period payout:

* dynamic programming over (alive state, paid sum) lattice cells,
* literal path enumeration (small n only; used as a cross-check oracle),
* the twisted-transition-matrix characteristic function.

The absorbing state is closed out analytically in the DP: a death at step
k with paid sum s contributes the single final atom s + (n - k + 1) * d,
so dead mass is extracted once per step instead of being iterated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .measures import LatticeMeasure, from_atoms
from .model import ModelParams, State, fourier_transition_matrices, transition_matrix

SUPPORT_CAP_CELLS = 10_000_000
ENUM_MAX_N = 12


class SupportCapError(ValueError):
    """Requested law needs more lattice cells than the configured cap."""


@dataclass(frozen=True)
class DpDiagnostics:
    """Per-run conservation record of the DP engine."""

    mass_drift: float                 # worst |healthy + ill + dead - 1| over steps
    dead_mass_by_step: tuple          # cumulative absorbed probability after each step


def support_bound(params: ModelParams, n: int) -> int:
    """Largest reachable payout: one ill period then dead ever after."""
    return max(n, 1 + (n - 1) * params.d)


def exact_distribution_dp(params: ModelParams, n: int, *,
                          support_cap: int = SUPPORT_CAP_CELLS,
                          return_diagnostics: bool = False):
    """Exact law of the n-period payout started healthy.

    Raises SupportCapError when the output window would exceed the cell cap.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    a, b, g, d = params.alpha, params.beta, params.gamma, params.d
    size = support_bound(params, n) + 1
    if size > support_cap:
        raise SupportCapError(f"law of S_{n} needs {size} cells > cap {support_cap}")

    # healthy[s] / ill[s]: probability of being in that state with paid sum s.
    healthy = np.zeros(n + 1)
    ill = np.zeros(n + 1)
    healthy[0] = 1.0
    out = np.zeros(size)
    dead_total = 0.0
    drift = 0.0
    dead_by_step = []
    for step in range(1, n + 1):
        # ill at step-1 with sum s dies now: pays d for this and all later periods
        die = a * ill
        hi = min(step - 1, n)
        if hi >= 0:
            shift = (n - step + 1) * d
            out[shift: shift + hi + 1] += die[: hi + 1]
        dead_total += die.sum()
        new_healthy = (1.0 - g) * healthy + (1.0 - a - b) * ill
        new_ill = np.zeros_like(ill)
        new_ill[1:] = g * healthy[:-1] + b * ill[:-1]
        healthy, ill = new_healthy, new_ill
        drift = max(drift, abs(healthy.sum() + ill.sum() + dead_total - 1.0))
        dead_by_step.append(dead_total)

    out[: n + 1] += healthy + ill
    measure = LatticeMeasure(0, out)
    if return_diagnostics:
        return measure, DpDiagnostics(mass_drift=drift, dead_mass_by_step=tuple(dead_by_step))
    return measure


def exact_distribution_enum(params: ModelParams, n: int) -> LatticeMeasure:
    """Law of the n-period payout by literal path enumeration (n <= 12).

    Independent of the DP engine: walks every path with nonzero transition
    probability and accumulates the payout at the leaves.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > ENUM_MAX_N:
        raise ValueError(f"path enumeration limited to n <= {ENUM_MAX_N}")
    a, b, g, d = params.alpha, params.beta, params.gamma, params.d
    successors = {
        State.HEALTHY: ((State.HEALTHY, 1.0 - g), (State.ILL, g)),
        State.ILL: ((State.HEALTHY, 1.0 - a - b), (State.ILL, b), (State.DEAD, a)),
        State.DEAD: ((State.DEAD, 1.0),),
    }
    payoff = {State.HEALTHY: 0, State.ILL: 1, State.DEAD: d}
    acc: dict[int, float] = {}

    def walk(state: State, paid: int, prob: float, steps_left: int) -> None:
        if steps_left == 0:
            acc[paid] = acc.get(paid, 0.0) + prob
            return
        for nxt, p in successors[state]:
            if p > 0.0:
                walk(nxt, paid + payoff[nxt], prob * p, steps_left - 1)

    walk(State.HEALTHY, 0, 1.0, n)
    return from_atoms(acc)


def _matrix_power_batched(mats: np.ndarray, n: int) -> np.ndarray:
    """n-th power of a stack of square matrices by repeated squaring."""
    result = np.broadcast_to(np.eye(mats.shape[-1], dtype=mats.dtype),
                             mats.shape).copy()
    base = mats
    k = n
    while k:
        if k & 1:
            result = result @ base
        k >>= 1
        if k:
            base = base @ base
    return result


def exact_charfn(params: ModelParams, n: int, t):
    """Characteristic function of the n-period payout via the twisted matrix.

    Evaluates (1,0,0) P~(t)^n (1,1,1)^T with O(log n) batched 3x3 products;
    accepts a scalar or an array of t values.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    scalar = np.isscalar(t) or np.ndim(t) == 0
    t_arr = np.atleast_1d(np.asarray(t, dtype=np.float64))
    powers = _matrix_power_batched(fourier_transition_matrices(params, t_arr), n)
    vals = powers[:, 0, :].sum(axis=1)
    return complex(vals[0]) if scalar else vals


def death_probability(params: ModelParams, n: int) -> float:
    """Probability that the chain is absorbed by period n."""
    return float(np.linalg.matrix_power(transition_matrix(params), n)[0, 2])


def sample_empirical(params: ModelParams, n: int, count: int, seed: int) -> LatticeMeasure:
    """Empirical payout frequencies from `count` simulated trajectories.

    Reproducible for a fixed seed; the generator stream is an implementation
    detail, only seed-determinism is part of the contract.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if n < 1:
        raise ValueError("n must be >= 1")
    a, b, g = params.alpha, params.beta, params.gamma
    payoffs = params.payoffs
    rng = np.random.default_rng(seed)
    state = np.zeros(count, dtype=np.int8)
    total = np.zeros(count, dtype=np.int64)
    for _ in range(n):
        u = rng.random(count)
        nxt = np.empty_like(state)
        healthy = state == State.HEALTHY
        ill = state == State.ILL
        dead = state == State.DEAD
        nxt[healthy] = np.where(u[healthy] < g, State.ILL, State.HEALTHY)
        nxt[ill] = np.where(u[ill] < a, State.DEAD,
                            np.where(u[ill] < a + b, State.ILL, State.HEALTHY))
        nxt[dead] = State.DEAD
        total += payoffs[nxt]
        state = nxt
    freqs = np.bincount(total) / count
    return LatticeMeasure(0, freqs)
