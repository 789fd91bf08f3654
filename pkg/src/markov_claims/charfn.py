"""Fourier transforms of the approximation measures and the spectral parts.

Everything here evaluates complex-valued functions of t in [-pi, pi],
vectorized over t.  Naming follows the measures they transform:

* ``h`` / ``psi``: geometric building blocks with denominator 1 - beta*e^{it};
* ``a1 .. a6``: correction terms of the expansion of the dominant eigenvalue;
* ``delta``, ``delta1``, ``a``: its partial sums in powers of gamma;
* ``v``, ``v1``, ``v2``: weight factors paired with the convolution powers;
* ``g``, ``g1``: signed compound Poisson exponents (returned with their
  log-expressions so n-fold convolution powers are exact: g^n = exp(n*log));
* ``e``: the absorbed-state component, depending on the horizon n.

Spectral parts: the twisted transition matrix has eigenvalues

    eig1/eig2 = (1 - gamma + beta*e^{it} +- sqrt(disc)) / 2,
    eig3      = e^{i*d*t},

with disc = (1 - gamma + beta*e^{it})^2 - 4 e^{it} (beta - gamma(1-alpha)),
and the characteristic function of the n-period payout decomposes as
eig1^n w1 + eig2^n w2 + eig3^n w3 (`perron_charfn`).

Branch control: the principal square root is applied to the discriminant
directly.  Inside the admissible box Re(1 + gamma - beta*e^{it}) >= 0.85
while the root stays within 5.81*gamma of 1 + gamma - beta*e^{it}, which
pins the value to the right half-plane; a runtime band assertion turns any
branch flip into an immediate BranchError.  The +/- assignment is fixed by
the sign convention (never by magnitude sorting) so the signs inside the
weight formulas stay consistent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ModelParams

#: band half-width (in units of gamma) around 1 + gamma - beta*e^{it}
#: that the discriminant root can never leave inside the admissible box
ROOT_BAND_FACTOR = 5.81
#: lower bound for |sqrt(disc)| inside the admissible box
ROOT_FLOOR = 0.6
#: eigenvalue/eig3 separation below which weight denominators degenerate
DEGENERACY_TOL = 1e-14


class BranchError(ArithmeticError):
    """Square-root branch left its certified band (parameter or code bug)."""


class DegenerateNodeError(ValueError):
    """An eigenvalue collided with e^{i d t}; weight formulas degenerate."""


@dataclass(frozen=True)
class BaseTransforms:
    h: np.ndarray
    psi: np.ndarray
    u: np.ndarray
    h_minus_one: np.ndarray
    psi_minus_one: np.ndarray


@dataclass(frozen=True)
class CorrectionTransforms:
    a1: np.ndarray
    a2: np.ndarray
    a3: np.ndarray
    a4: np.ndarray
    a5: np.ndarray
    a6: np.ndarray
    delta: np.ndarray
    delta1: np.ndarray
    a: np.ndarray


@dataclass(frozen=True)
class SpectralParts:
    lambda1: np.ndarray
    lambda2: np.ndarray
    lambda3: np.ndarray
    w1: np.ndarray
    w2: np.ndarray
    w3: np.ndarray
    sqrt_disc: np.ndarray


@dataclass(frozen=True)
class ApproxTransforms:
    v: np.ndarray
    v1: np.ndarray
    v2: np.ndarray
    g: np.ndarray
    g1: np.ndarray
    e: np.ndarray
    g_exponent: np.ndarray
    g1_exponent: np.ndarray


def _t_array(t) -> np.ndarray:
    return np.asarray(t, dtype=np.float64)


def base_transforms(params: ModelParams, t) -> BaseTransforms:
    """First-layer transforms; h and psi are geometric in beta*e^{it}."""
    al, b = params.alpha, params.beta
    eit = np.exp(1j * _t_array(t))
    den = 1.0 - b * eit
    return BaseTransforms(
        h=(1.0 - b) * eit / den,
        psi=(1.0 - al - b) * eit / den,
        u=(1.0 - al) * eit - 1.0,
        h_minus_one=(eit - 1.0) / den,
        psi_minus_one=((1.0 - al) * eit - 1.0) / den,
    )


def correction_transforms(params: ModelParams, t) -> CorrectionTransforms:
    """Correction terms a1..a6 and their gamma-power partial sums.

    delta, delta1 and a are built literally as 1 + a1*g, delta + (a2+a4)*g^2
    and delta1 + (a3+a5+a6)*g^3, so those compositional identities hold to
    rounding by construction.
    """
    al, b, g = params.alpha, params.beta, params.gamma
    tt = _t_array(t)
    eit = np.exp(1j * tt)
    den = 1.0 - b * eit
    q = 1.0 + g - b
    hm1 = (eit - 1.0) / den
    pm1 = ((1.0 - al) * eit - 1.0) / den
    a1 = (1.0 - b) / q * pm1
    a2 = -b * (1.0 - b) / q ** 2 * hm1 * pm1
    a3 = b ** 2 * (1.0 - b) * hm1 ** 2 * pm1 / q ** 3
    a4 = -(1.0 - b) ** 3 * pm1 ** 2 / (q ** 3 * den)
    a5 = 3.0 * b * (1.0 - b) ** 3 * pm1 ** 2 * hm1 / (q ** 4 * den)
    a6 = 2.0 * (1.0 - b) ** 5 * pm1 ** 3 / (q ** 5 * den ** 2)
    delta = 1.0 + a1 * g
    delta1 = 1.0 + a1 * g + (a2 + a4) * g ** 2
    a = 1.0 + a1 * g + a2 * g ** 2 + a3 * g ** 3 + a4 * g ** 2 + a5 * g ** 3 + a6 * g ** 3
    return CorrectionTransforms(a1=a1, a2=a2, a3=a3, a4=a4, a5=a5, a6=a6,
                                delta=delta, delta1=delta1, a=a)


def discriminant(params: ModelParams, t) -> np.ndarray:
    al, b, g = params.alpha, params.beta, params.gamma
    eit = np.exp(1j * _t_array(t))
    return (1.0 - g + b * eit) ** 2 - 4.0 * eit * (b - g * (1.0 - al))


def sqrt_disc(params: ModelParams, t, *, check: bool = True) -> np.ndarray:
    """Principal square root of the discriminant, band-checked."""
    al, b, g = params.alpha, params.beta, params.gamma
    tt = _t_array(t)
    eit = np.exp(1j * tt)
    root = np.sqrt(((1.0 - g + b * eit) ** 2
                    - 4.0 * eit * (b - g * (1.0 - al))).astype(np.complex128))
    if check:
        band = np.abs(root - (1.0 + g - b * eit))
        if np.any(band > ROOT_BAND_FACTOR * g + 1e-12):
            raise BranchError(
                f"root left the {ROOT_BAND_FACTOR}*gamma band: max deviation "
                f"{float(np.max(band)):.6g} vs {ROOT_BAND_FACTOR * g:.6g}")
        mods = np.abs(root)
        if np.any(mods < ROOT_FLOOR - 1e-12):
            raise BranchError(f"|root| fell below {ROOT_FLOOR}: min {float(np.min(mods)):.6g}")
    return root


def spectral_parts(params: ModelParams, t, *, check_branch: bool = True) -> SpectralParts:
    """Eigenvalues and weights of the payout decomposition at each t.

    The +/- convention: lambda1 takes the + root.  The matching weights are

        w_{1,2} = [ (e^{i(d+1)t}-1)(beta - gamma(1-alpha))
                    - (e^{idt}-1) lambda_{1,2}
                    + (e^{it}-1)(gamma lambda_{1,2} - beta + gamma(1-alpha)) ]
                  / ( +-(lambda_{1,2} - e^{idt}) sqrt(disc) )

    with + for w1, - for w2, and w3 the absorbed-state weight.  At t = 0 the
    numerators vanish exactly, giving w1 = w2 = 0 and w3 = 1.
    """
    al, b, g, d = params.alpha, params.beta, params.gamma, params.d
    tt = _t_array(t)
    eit = np.exp(1j * tt)
    lam3 = np.exp(1j * d * tt)
    root = sqrt_disc(params, tt, check=check_branch)
    base = 1.0 - g + b * eit
    lam1 = 0.5 * (base + root)
    lam2 = 0.5 * (base - root)

    gaps = np.minimum(np.abs(lam1 - lam3), np.abs(lam2 - lam3))
    if np.any(gaps < DEGENERACY_TOL):
        worst = np.argmin(np.atleast_1d(gaps))
        raise DegenerateNodeError(
            f"eigenvalue within {DEGENERACY_TOL} of e^(i d t) at t="
            f"{float(np.atleast_1d(tt)[worst]):.17g}")

    bg = b - g * (1.0 - al)
    e_d1 = np.exp(1j * (d + 1) * tt)

    def weight(lam, sign):
        num = (e_d1 - 1.0) * bg - (lam3 - 1.0) * lam + (eit - 1.0) * (g * lam - bg)
        return num / (sign * (lam - lam3) * root)

    w3 = al * g * lam3 / ((np.exp(1j * (d - 1) * tt) - b) * (lam3 - (1.0 - g))
                          - g * (1.0 - al - b))
    return SpectralParts(lambda1=lam1, lambda2=lam2, lambda3=lam3,
                         w1=weight(lam1, 1.0), w2=weight(lam2, -1.0), w3=w3,
                         sqrt_disc=root)


def perron_charfn(params: ModelParams, n: int, t) -> np.ndarray:
    """Characteristic function of the payout via the spectral decomposition."""
    sp = spectral_parts(params, t)
    return sp.lambda1 ** n * sp.w1 + sp.lambda2 ** n * sp.w2 + sp.lambda3 ** n * sp.w3


def approx_transforms(params: ModelParams, t, n: int) -> ApproxTransforms:
    """Transforms of the approximation measures at horizon n.

    e always equals eig3^n * w3 algebraically; v, v1 and v2 share one
    numerator and differ only in which partial sum sits in the denominator.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    al, b, g, d = params.alpha, params.beta, params.gamma, params.d
    tt = _t_array(t)
    eit = np.exp(1j * tt)
    lam3 = np.exp(1j * d * tt)
    c = correction_transforms(params, tt)
    bg = b - g * (1.0 - al)
    num = ((np.exp(1j * (d + 1) * tt) - 1.0) * bg
           - (lam3 - 1.0) * c.delta
           + (eit - 1.0) * (g * c.delta - bg))
    core = 2.0 * c.delta - 1.0 + g - b * eit
    core1 = 2.0 * c.delta1 - 1.0 + g - b * eit
    v = num / ((c.a - lam3) * core)
    v1 = num / ((c.delta1 - lam3) * core)
    v2 = num / ((c.delta1 - lam3) * core1)
    g_exponent = ((c.a - 1.0)
                  - 0.5 * (c.a1 ** 2 * g ** 2 + 2.0 * c.a1 * (c.a2 + c.a4) * g ** 3)
                  + c.a1 ** 3 * g ** 3 / 3.0)
    g1_exponent = c.a1 * g + (c.a2 + c.a4 - 0.5 * c.a1 ** 2) * g ** 2
    e_den = ((np.exp(1j * (d - 1) * tt) - b) * (lam3 - (1.0 - g))
             - g * (1.0 - al - b))
    e = al * g * np.exp(1j * (n + 1) * d * tt) / e_den
    return ApproxTransforms(v=v, v1=v1, v2=v2,
                            g=np.exp(g_exponent), g1=np.exp(g1_exponent), e=e,
                            g_exponent=g_exponent, g1_exponent=g1_exponent)


#: names accepted by transform_by_name (those marked True need the horizon n)
TRANSFORM_NAMES = {
    "h": False, "psi": False, "u": False, "h_minus_one": False,
    "psi_minus_one": False,
    "a1": False, "a2": False, "a3": False, "a4": False, "a5": False, "a6": False,
    "delta": False, "delta1": False, "a": False,
    "sqrt_disc": False, "eig1": False, "eig2": False, "eig3": False,
    "w1": False, "w2": False, "w3": False,
    "v": True, "v1": True, "v2": True, "g": True, "g1": True, "e": True,
    "exact": True,
}


def transform_by_name(params: ModelParams, t, name: str, n: int | None = None) -> np.ndarray:
    """Evaluate one named transform on t (debug dumps and CLI plumbing)."""
    if name not in TRANSFORM_NAMES:
        raise KeyError(f"unknown transform {name!r}")
    if TRANSFORM_NAMES[name] and n is None:
        raise ValueError(f"transform {name!r} needs the horizon n")
    if name in ("h", "psi", "u", "h_minus_one", "psi_minus_one"):
        return getattr(base_transforms(params, t), name)
    if name in ("a1", "a2", "a3", "a4", "a5", "a6", "delta", "delta1", "a"):
        return getattr(correction_transforms(params, t), name)
    if name == "sqrt_disc":
        return sqrt_disc(params, t)
    if name in ("eig1", "eig2", "eig3", "w1", "w2", "w3"):
        sp = spectral_parts(params, t)
        return getattr(sp, {"eig1": "lambda1", "eig2": "lambda2",
                            "eig3": "lambda3"}.get(name, name))
    if name == "exact":
        from .exact import exact_charfn
        return exact_charfn(params, n, t)
    return getattr(approx_transforms(params, t, n), name)
