"""One-dimensional nested lattice pair and the operations built on it.

The coarse lattice is ``gamma * Z`` and the fine lattice ``(gamma / q) * Z``,
so the Voronoi codebook holds exactly ``q`` points.  The mod operation uses
the centred fundamental region ``[-gamma/2, gamma/2)``; the carry index uses
the shifted region ``[0, gamma)``, where a sum of ``m`` region points spans
exactly ``m`` cells.

Functions accept scalars or numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ScalarNestedLattice:
    gamma: float
    q: int

    def __post_init__(self):
        if not (self.gamma > 0 and math.isfinite(self.gamma)):
            raise ValueError(f"gamma must be positive and finite, got {self.gamma}")
        if int(self.q) != self.q or self.q < 2:
            raise ValueError(f"q must be an integer >= 2, got {self.q}")

    @classmethod
    def for_power(cls, power: float, q: int) -> "ScalarNestedLattice":
        """Lattice whose uniform dither has second moment ``power``."""
        return cls(gamma=math.sqrt(12.0 * power), q=q)

    @property
    def spacing(self) -> float:
        return self.gamma / self.q

    @property
    def rate(self) -> float:
        """Codebook rate in bits per dimension."""
        return math.log2(self.q)

    @property
    def power(self) -> float:
        """Second moment of a uniform point in the fundamental region."""
        return self.gamma**2 / 12.0

    def codebook(self) -> np.ndarray:
        return codeword_point(np.arange(self.q), self)


@dataclass(frozen=True)
class Codeword:
    t: float
    d: float
    x: float


def mod_lattice(x, lattice: ScalarNestedLattice):
    """Reduce ``x`` into ``[-gamma/2, gamma/2)`` (nearest coarse point removed)."""
    g = lattice.gamma
    return x - g * np.floor(x / g + 0.5)


def mod_shifted(x, lattice: ScalarNestedLattice):
    """Reduce ``x`` into ``[0, gamma)``."""
    g = lattice.gamma
    return x - g * np.floor(x / g)


def codeword_point(index, lattice: ScalarNestedLattice):
    """Fine-lattice representative of codeword ``index`` inside the region."""
    return mod_lattice(np.asarray(index) * lattice.spacing, lattice)


def point_index(point, lattice: ScalarNestedLattice):
    """Inverse of :func:`codeword_point` for points on the fine lattice."""
    return np.rint(np.asarray(point) / lattice.spacing).astype(np.int64) % lattice.q


def quantize_fine(x, lattice: ScalarNestedLattice):
    """Nearest fine-lattice point, with ties resolved upward (half-open cells)."""
    s = lattice.spacing
    return s * np.floor(x / s + 0.5)


def encode(t_index: int, dither: float, lattice: ScalarNestedLattice) -> Codeword:
    if int(t_index) != t_index or not 0 <= t_index < lattice.q:
        raise ValueError(f"t_index must be an integer in [0, {lattice.q}), got {t_index}")
    half = lattice.gamma / 2
    if not -half <= dither < half:
        raise ValueError(f"dither {dither} is outside the fundamental region")
    t = float(codeword_point(t_index, lattice))
    x = float(mod_lattice(t + dither, lattice))
    return Codeword(t=t, d=float(dither), x=x)


def encode_many(indices, dithers, lattice: ScalarNestedLattice):
    """Vectorised channel inputs ``(t + d) mod Lambda_c``."""
    return mod_lattice(codeword_point(indices, lattice) + dithers, lattice)


def decode_modsum(y, dithers, lattice: ScalarNestedLattice, scale: float = 1.0):
    """Fine-lattice point nearest to ``(scale*y - sum(dithers)) mod Lambda_c``.

    ``dithers`` is a sequence over the summed users; with array ``y`` each entry
    may itself be an array broadcastable against ``y``.  The result is reduced
    into the fundamental region, so it is a codebook point.
    """
    if scale <= 0:
        raise ValueError(f"scale must be positive, got {scale}")
    total = sum(dithers) if len(dithers) else 0.0
    z = mod_lattice(scale * np.asarray(y) - total, lattice)
    return mod_lattice(quantize_fine(z, lattice), lattice)


def decode_modsum_index(y, dithers, lattice: ScalarNestedLattice, scale: float = 1.0):
    return point_index(decode_modsum(y, dithers, lattice, scale), lattice)


def mmse_scale(signal_power: float, noise_power: float) -> float:
    """Linear estimator coefficient ``S / (S + N)`` used before the mod step."""
    return signal_power / (signal_power + noise_power)


def representation_index(x, lattice: ScalarNestedLattice, m: int):
    """Carry index ``floor(x / gamma)`` of a sum of ``m`` points from ``[0, gamma)``.

    Together with ``mod_shifted(x)`` it reconstructs ``x`` exactly.
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0) or np.any(arr >= m * lattice.gamma):
        raise ValueError(f"x must lie in [0, {m} * gamma)")
    idx = np.floor(arr / lattice.gamma).astype(np.int64)
    return int(idx) if idx.ndim == 0 else idx


def reconstruct(modulus, carry, lattice: ScalarNestedLattice):
    return modulus + carry * lattice.gamma
