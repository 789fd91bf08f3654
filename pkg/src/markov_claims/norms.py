"""Distances between lattice measures and their inversion-formula bounds.

Exact side (computed directly on the stored weights):

* local norm      -- sup_k |M{k}|
* Kolmogorov norm -- sup_x |M{(-inf, x]}|
* total variation -- sum_k |M{k}|
* non-uniform sequences |k - a| |M{k}| and |k - a| |M(k)|

Bound side (`inversion_bounds`): midpoint-rule quadratures of the classical
inversion inequalities, each of which dominates the matching exact norm,

    K-norm  <= (1/2pi) Int |M^(t)| / |e^{it} - 1| dt
    local   <= (1/2pi) Int |M^(t)| dt
    TV      <= sqrt(1 + b pi) ((1/2pi) Int |M^|^2 + |(e^{-ita} M^)'|^2/b^2 dt)^(1/2)
    |k-a| |M{k}| <= (1/2pi) Int |(M^(t) e^{-ita})'| dt
    |k-a| |M(k)| <= (1/2pi) Int |(M^(t) e^{-ita} / (e^{-it}-1))'| dt

Derivatives default to central differences with step half the node
spacing; one uniform mechanism for every transform, refinable by raising
n_points.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .inversion import midpoint_grid
from .measures import LatticeMeasure


def local_norm(m: LatticeMeasure) -> float:
    return float(np.max(np.abs(m.weights)))


def tv_norm(m: LatticeMeasure) -> float:
    return float(np.sum(np.abs(m.weights)))


def kolmogorov_norm(m: LatticeMeasure) -> float:
    return float(np.max(np.abs(np.cumsum(m.weights))))


def df_value(m: LatticeMeasure, x: int) -> float:
    """Distribution-function analogue M(x): total weight of (-inf, x]."""
    return m.prefix_at(x)


def nonuniform_sequences(m: LatticeMeasure, a: float = 0.0,
                         window: tuple[int, int] | None = None):
    """Weighted sequences |k-a||M{k}| and |k-a||M(k)| on the support window."""
    if window is None:
        k_lo, k_hi = m.support
    else:
        k_lo, k_hi = window
    ks = np.arange(k_lo, k_hi + 1)
    base = m.restrict(k_lo, k_hi).weights if window is not None else m.weights
    if window is not None:
        prefix_start = m.prefix_at(k_lo - 1)
        cums = prefix_start + np.cumsum(base)
    else:
        cums = np.cumsum(base)
    w = np.abs(ks - a)
    return ks, w * np.abs(base), w * np.abs(cums)


@dataclass(frozen=True)
class NormReport:
    local: float
    kolmogorov: float
    total_variation: float
    nonuniform_local: tuple | None = None   # ((k, value), ...)
    nonuniform_df: tuple | None = None

    def to_dict(self) -> dict:
        out = {"local": self.local, "kolmogorov": self.kolmogorov,
               "total_variation": self.total_variation}
        if self.nonuniform_local is not None:
            out["nonuniform_local"] = [[int(k), float(v)] for k, v in self.nonuniform_local]
            out["nonuniform_df"] = [[int(k), float(v)] for k, v in self.nonuniform_df]
        return out


def norm_report(m: LatticeMeasure, *, a: float = 0.0,
                include_nonuniform: bool = False,
                nonuniform_window: tuple[int, int] | None = None) -> NormReport:
    nl = ndf = None
    if include_nonuniform:
        ks, loc, df = nonuniform_sequences(m, a, nonuniform_window)
        nl = tuple((int(k), float(v)) for k, v in zip(ks, loc))
        ndf = tuple((int(k), float(v)) for k, v in zip(ks, df))
    return NormReport(local=local_norm(m), kolmogorov=kolmogorov_norm(m),
                      total_variation=tv_norm(m),
                      nonuniform_local=nl, nonuniform_df=ndf)


@dataclass(frozen=True)
class InversionBounds:
    """Quadrature values of the inversion-inequality right-hand sides."""

    kolmogorov: float
    local: float
    tv: float
    nonuniform_local: float
    nonuniform_df: float
    n_points: int
    a: float
    b: float


def inversion_bounds(fhat, n_points: int, *, a: float = 0.0, b: float = 1.0,
                     fhat_deriv=None) -> InversionBounds:
    """Midpoint-rule upper bounds for the norms of the measure behind fhat.

    fhat maps an array of t values to complex transform values.  When no
    derivative callable is supplied, central differences with step
    pi/n_points (half the node spacing) are used.
    """
    grid = midpoint_grid(n_points)
    f = np.asarray(fhat(grid), dtype=np.complex128)
    if fhat_deriv is None:
        h = np.pi / n_points
        fp = (np.asarray(fhat(grid + h), dtype=np.complex128)
              - np.asarray(fhat(grid - h), dtype=np.complex128)) / (2.0 * h)
    else:
        fp = np.asarray(fhat_deriv(grid), dtype=np.complex128)
    eit = np.exp(1j * grid)
    absf = np.abs(f)
    shifted = np.abs(fp - 1j * a * f)        # |(e^{-ita} f)'|
    emt = np.exp(-1j * grid)
    q = f / (emt - 1.0)
    qp = (fp * (emt - 1.0) + 1j * emt * f) / (emt - 1.0) ** 2
    return InversionBounds(
        kolmogorov=float(np.mean(absf / np.abs(eit - 1.0))),
        local=float(np.mean(absf)),
        tv=float(np.sqrt(1.0 + b * np.pi)
                 * np.sqrt(np.mean(absf ** 2 + shifted ** 2 / b ** 2))),
        nonuniform_local=float(np.mean(shifted)),
        nonuniform_df=float(np.mean(np.abs(qp - 1j * a * q))),
        n_points=n_points, a=a, b=b)


def dominance_report(bounds: InversionBounds, m: LatticeMeasure,
                     *, a: float = 0.0) -> dict:
    """Per-inequality (bound, exact, bound >= exact) comparison."""
    ks, loc, df = nonuniform_sequences(m, a)
    exact = {
        "kolmogorov": kolmogorov_norm(m),
        "local": local_norm(m),
        "tv": tv_norm(m),
        "nonuniform_local": float(np.max(loc)),
        "nonuniform_df": float(np.max(df)),
    }
    return {name: (getattr(bounds, name), exact[name],
                   getattr(bounds, name) >= exact[name])
            for name in exact}
