"""Parameter box, payoffs and transition matrices of the health chain.

The insured person moves between three states per period -- healthy, ill,
dead -- with the dead state absorbing.  The insurer pays nothing per
healthy period, one unit per ill period and ``d`` units per dead period,
so the aggregate payout after ``n`` periods is the lattice random variable
``S_n = payoff(state_1) + ... + payoff(state_n)`` with the chain started
healthy.

Every routine in this package assumes the admissible parameter box

    0 < beta <= 0.15,   0 < gamma <= 0.05,   0 < alpha <= c0 < 1,
    alpha + beta < 1,

where ``alpha`` is the ill->dead probability, ``beta`` ill->ill, ``gamma``
healthy->ill, and ``c0`` an explicit cap on ``alpha``.  The box implies
``beta + 4*gamma <= 0.35``, the margin that keeps the subdominant
eigenvalue of the twisted transition matrix strictly inside the unit disc.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

BETA_MAX = 0.15
GAMMA_MAX = 0.05
DEFAULT_C0 = 0.9

# beta + 4*gamma <= 0.35 is exact in the reals, but the float sum at the
# corner (0.15, 0.05) lands 5.6e-17 above the 0.35 literal.
_EIG_MARGIN_SLACK = 1e-12


class State(IntEnum):
    HEALTHY = 0
    ILL = 1
    DEAD = 2


class ConditionError(ValueError):
    """Parameters violate the admissible box; lists every failed inequality."""

    def __init__(self, violations):
        self.violations = tuple(violations)
        super().__init__("parameter box violated: " + "; ".join(self.violations))


def condition_violations(alpha, beta, gamma, d, c0=DEFAULT_C0):
    """Name every violated box inequality.  Empty list means admissible."""
    out = []
    if not 0.0 < c0 < 1.0:
        out.append("c0 outside (0, 1)")
    if not alpha > 0.0:
        out.append("alpha <= 0")
    elif not alpha <= c0:
        out.append("alpha > c0")
    if not beta > 0.0:
        out.append("beta <= 0")
    elif not beta <= BETA_MAX:
        out.append("beta > 0.15")
    if not gamma > 0.0:
        out.append("gamma <= 0")
    elif not gamma <= GAMMA_MAX:
        out.append("gamma > 0.05")
    if not alpha + beta < 1.0:
        out.append("alpha + beta >= 1")
    if int(d) != d or d < 1:
        out.append("d not a positive integer")
    return out


@dataclass(frozen=True)
class ModelParams:
    """Validated chain parameters.  Immutable; safe to share across threads."""

    alpha: float
    beta: float
    gamma: float
    d: int
    c0: float = DEFAULT_C0

    def __post_init__(self):
        violations = condition_violations(self.alpha, self.beta, self.gamma, self.d, self.c0)
        if violations:
            raise ConditionError(violations)
        assert self.beta + 4.0 * self.gamma <= 0.35 + _EIG_MARGIN_SLACK

    def payoff(self, state) -> int:
        return (0, 1, self.d)[State(state)]

    @property
    def payoffs(self) -> np.ndarray:
        return np.array([0, 1, self.d])

    def to_dict(self) -> dict:
        return {"alpha": self.alpha, "beta": self.beta, "gamma": self.gamma,
                "d": self.d, "c0": self.c0}

    @classmethod
    def from_dict(cls, cfg: dict) -> "ModelParams":
        return cls(alpha=float(cfg["alpha"]), beta=float(cfg["beta"]),
                   gamma=float(cfg["gamma"]), d=int(cfg["d"]),
                   c0=float(cfg.get("c0", DEFAULT_C0)))

    @classmethod
    def from_json(cls, text: str) -> "ModelParams":
        return cls.from_dict(json.loads(text))


def validate(alpha, beta, gamma, d, c0=DEFAULT_C0) -> ModelParams:
    """Construct validated parameters or raise with the full violation list."""
    return ModelParams(alpha=float(alpha), beta=float(beta), gamma=float(gamma),
                       d=int(d), c0=float(c0))


def transition_matrix(params: ModelParams) -> np.ndarray:
    """One-step matrix over (healthy, ill, dead); rows sum to one."""
    a, b, g = params.alpha, params.beta, params.gamma
    return np.array([
        [1.0 - g, g, 0.0],
        [1.0 - a - b, b, a],
        [0.0, 0.0, 1.0],
    ])


def fourier_transition_matrix(params: ModelParams, t: float) -> np.ndarray:
    """Transition matrix with each entry twisted by the payoff phase.

    Entry (j, k) is P[j, k] * exp(i * t * payoff(k)); the modulus of every
    entry equals the untwisted probability, and t = 0 recovers the plain
    matrix exactly.
    """
    return fourier_transition_matrices(params, np.asarray([float(t)]))[0]


def fourier_transition_matrices(params: ModelParams, t: np.ndarray) -> np.ndarray:
    """Stack of twisted matrices, shape (len(t), 3, 3)."""
    a, b, g, d = params.alpha, params.beta, params.gamma, params.d
    t = np.asarray(t, dtype=np.float64)
    eit = np.exp(1j * t)
    deit = np.exp(1j * d * t)
    out = np.zeros(t.shape + (3, 3), dtype=np.complex128)
    out[..., 0, 0] = 1.0 - g
    out[..., 0, 1] = g * eit
    out[..., 1, 0] = 1.0 - a - b
    out[..., 1, 1] = b * eit
    out[..., 1, 2] = a * deit
    out[..., 2, 2] = deit
    return out
