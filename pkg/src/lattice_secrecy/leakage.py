"""Exhaustive enumeration oracle for what an eavesdropper learns.

At receiver 1 the K-1 interfering codewords reach the eavesdropper only
through their sum.  Removing the dithers leaves the modulus sum of the
codeword indices and a carry index; the pair fixes the exact sum.  Here every
(K-1)-tuple of uniform indices is enumerated with N = 1 so the entropies are
exact.
"""

from __future__ import annotations

import math
import os
from dataclasses import asdict, dataclass

import numpy as np

from .lattice import ScalarNestedLattice, mod_shifted, reconstruct, representation_index
from .rates import leakage_bound

CAP_ENV = "LATTICE_SECRECY_ENUM_CAP"
DEFAULT_CAP = 2**24


class EnumerationCapError(RuntimeError):
    """The enumeration would exceed the configured tuple budget."""


@dataclass(frozen=True)
class LeakageReport:
    q: int
    K: int
    codebook_rate: float
    joint_entropy: float
    cond_entropy_given_modsum: float
    cond_entropy_given_modsum_carry: float
    carry_entropy: float
    carry_cardinality: int
    leakage: float
    bound: float
    passes: bool

    def to_dict(self) -> dict:
        return asdict(self)


def enumeration_cap() -> int:
    raw = os.environ.get(CAP_ENV)
    return int(raw) if raw else DEFAULT_CAP


def _entropy(counts: np.ndarray) -> float:
    counts = counts[counts > 0].astype(float)
    p = counts / counts.sum()
    return float(-(p * np.log2(p)).sum())


def _cond_entropy_uniform(group_sizes: np.ndarray) -> float:
    # H(T | G) for T uniform where G partitions T into the given group sizes
    sizes = group_sizes[group_sizes > 0].astype(float)
    return float((sizes * np.log2(sizes)).sum() / sizes.sum())


def _index_sums(q: int, K: int, cap: int | None) -> np.ndarray:
    if q < 2:
        raise ValueError(f"q must be >= 2, got {q}")
    if K < 2:
        raise ValueError(f"K must be >= 2, got {K}")
    cap = enumeration_cap() if cap is None else cap
    n = q ** (K - 1)
    if n > cap:
        raise EnumerationCapError(f"{n} tuples exceed the enumeration cap {cap}")
    # exact sum of every (K-1)-tuple, flattened in lexicographic order
    total = np.zeros(1, dtype=np.int32)
    for _ in range(K - 1):
        total = (total[:, None] + np.arange(q, dtype=np.int32)[None, :]).ravel()
    return total


def exhaustive_leakage(q: int, K: int, cap: int | None = None) -> LeakageReport:
    sums = _index_sums(q, K, cap)
    modsum = sums % q
    carry = sums // q

    joint = (K - 1) * math.log2(q)
    given_modsum = _cond_entropy_uniform(np.bincount(modsum))
    # (modsum, carry) determines the exact sum, so group by the sum
    given_both = _cond_entropy_uniform(np.bincount(sums))
    leakage = joint - given_both
    R = math.log2(q)
    bound = leakage_bound(R, K, 1)
    return LeakageReport(
        q=q,
        K=K,
        codebook_rate=R,
        joint_entropy=joint,
        cond_entropy_given_modsum=given_modsum,
        cond_entropy_given_modsum_carry=given_both,
        carry_entropy=_entropy(np.bincount(carry)),
        carry_cardinality=int(np.unique(carry).size),
        leakage=leakage,
        bound=bound,
        passes=bool(leakage <= bound + 1e-12),
    )


def representation_soundness(q: int, K: int, cap: int | None = None) -> bool:
    """Check that (modulus, carry) recovers every exact sum of K-1 codewords.

    Works on real-valued lattice points in the shifted region ``[0, gamma)``
    with ``gamma = 1``, using the lattice-core carry index.
    """
    sums = _index_sums(q, K, cap)
    lat = ScalarNestedLattice(gamma=1.0, q=q)
    m = max(K - 1, 1)
    x = sums / q
    carry = representation_index(x, lat, m)
    residue = mod_shifted(x, lat)
    if not np.array_equal(np.atleast_1d(reconstruct(residue, carry, lat)), x):
        return False
    pairs = np.stack([np.rint(residue * q).astype(np.int64), np.atleast_1d(carry)], axis=1)
    distinct_pairs = np.unique(pairs, axis=0).shape[0]
    if distinct_pairs != np.unique(sums).size:
        return False
    return int(np.unique(carry).size) <= m
