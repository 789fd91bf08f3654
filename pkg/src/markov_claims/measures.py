"""Finite signed measures on the integer lattice.

A measure is stored densely: ``weights[j]`` is the mass at lattice point
``offset + j``.  Weights may be negative -- signed measures appear both as
approximation errors and as inverted transforms.  Serialized forms are CSV
rows ``k,weight`` and JSON objects ``{"offset": ..., "weights": [...]}``;
floats are written with 17 significant digits so they round-trip exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class LatticeMeasure:
    offset: int
    weights: np.ndarray = field(repr=False)

    def __post_init__(self):
        w = np.array(self.weights, dtype=np.float64, copy=True)
        if w.ndim != 1 or w.size == 0:
            raise ValueError("weights must be a non-empty 1-D array")
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "offset", int(self.offset))

    # -- basic queries ---------------------------------------------------

    @property
    def support(self) -> tuple[int, int]:
        """Inclusive lattice window carrying the stored weights."""
        return self.offset, self.offset + self.weights.size - 1

    @property
    def mass(self) -> float:
        return float(self.weights.sum())

    def weight_at(self, k: int) -> float:
        j = k - self.offset
        if 0 <= j < self.weights.size:
            return float(self.weights[j])
        return 0.0

    def prefix_at(self, x: int) -> float:
        """Cumulative mass of (-inf, x]."""
        j = int(np.floor(x)) - self.offset
        if j < 0:
            return 0.0
        return float(self.weights[: j + 1].sum())

    def is_distribution(self, neg_tol: float = 1e-12, mass_tol: float = 1e-9) -> bool:
        return bool(self.weights.min() >= -neg_tol and abs(self.mass - 1.0) <= mass_tol)

    # -- transforms and arithmetic ----------------------------------------

    def fourier(self, t) -> np.ndarray:
        """Sum of weights[j] * exp(i*(offset+j)*t); O(len(t) * support)."""
        t = np.atleast_1d(np.asarray(t, dtype=np.float64))
        ks = self.offset + np.arange(self.weights.size)
        out = np.empty(t.size, dtype=np.complex128)
        chunk = max(1, (1 << 22) // max(1, ks.size))
        for s in range(0, t.size, chunk):
            block = t[s:s + chunk]
            out[s:s + chunk] = np.exp(1j * np.outer(block, ks)) @ self.weights
        return out

    def aligned_with(self, other: "LatticeMeasure") -> tuple[np.ndarray, np.ndarray, int]:
        lo = min(self.offset, other.offset)
        hi = max(self.support[1], other.support[1])
        size = hi - lo + 1
        a = np.zeros(size)
        b = np.zeros(size)
        a[self.offset - lo: self.offset - lo + self.weights.size] = self.weights
        b[other.offset - lo: other.offset - lo + other.weights.size] = other.weights
        return a, b, lo

    def __add__(self, other: "LatticeMeasure") -> "LatticeMeasure":
        a, b, lo = self.aligned_with(other)
        return LatticeMeasure(lo, a + b)

    def __sub__(self, other: "LatticeMeasure") -> "LatticeMeasure":
        a, b, lo = self.aligned_with(other)
        return LatticeMeasure(lo, a - b)

    def __mul__(self, scalar: float) -> "LatticeMeasure":
        return LatticeMeasure(self.offset, self.weights * float(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "LatticeMeasure":
        return LatticeMeasure(self.offset, -self.weights)

    def shift(self, by: int) -> "LatticeMeasure":
        return LatticeMeasure(self.offset + int(by), self.weights)

    def trim(self, tol: float = 0.0) -> "LatticeMeasure":
        """Drop leading/trailing weights with |w| <= tol (keeps >= 1 cell)."""
        keep = np.nonzero(np.abs(self.weights) > tol)[0]
        if keep.size == 0:
            return LatticeMeasure(self.offset, np.zeros(1))
        return LatticeMeasure(self.offset + int(keep[0]),
                              self.weights[keep[0]: keep[-1] + 1])

    def restrict(self, k_lo: int, k_hi: int) -> "LatticeMeasure":
        out = np.zeros(k_hi - k_lo + 1)
        src_lo = max(self.offset, k_lo)
        src_hi = min(self.support[1], k_hi)
        if src_lo <= src_hi:
            out[src_lo - k_lo: src_hi - k_lo + 1] = \
                self.weights[src_lo - self.offset: src_hi - self.offset + 1]
        return LatticeMeasure(k_lo, out)

    def max_abs_diff(self, other: "LatticeMeasure") -> float:
        a, b, _ = self.aligned_with(other)
        return float(np.max(np.abs(a - b)))

    def allclose(self, other: "LatticeMeasure", atol: float = 1e-12) -> bool:
        return self.max_abs_diff(other) <= atol


def unit_atom(k: int = 0) -> LatticeMeasure:
    return LatticeMeasure(k, np.array([1.0]))


def from_atoms(atoms: dict) -> LatticeMeasure:
    """Build a dense measure from a {lattice point: weight} mapping."""
    if not atoms:
        raise ValueError("empty atom mapping")
    lo = min(atoms)
    hi = max(atoms)
    w = np.zeros(hi - lo + 1)
    for k, v in atoms.items():
        w[k - lo] += v
    return LatticeMeasure(lo, w)


# -- serialization --------------------------------------------------------


def measure_to_csv_lines(m: LatticeMeasure, header_lines=()) -> list[str]:
    lines = [f"# {h}" for h in header_lines]
    lines.append("k,weight")
    ks = m.offset + np.arange(m.weights.size)
    lines.extend(f"{k},{w:.17g}" for k, w in zip(ks, m.weights))
    return lines


def measure_from_csv_lines(lines) -> LatticeMeasure:
    atoms = {}
    for line in lines:
        line = line.strip()
        if not line or line.startswith("#") or line.startswith("k,"):
            continue
        k, w = line.split(",")
        atoms[int(k)] = float(w)
    return from_atoms(atoms)


def measure_to_json_dict(m: LatticeMeasure) -> dict:
    return {"offset": m.offset, "weights": [float(w) for w in m.weights]}


def measure_from_json_dict(d: dict) -> LatticeMeasure:
    return LatticeMeasure(int(d["offset"]), np.asarray(d["weights"], dtype=np.float64))
