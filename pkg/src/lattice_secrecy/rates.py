"""Single-layer achievable rates for the K-user symmetric interference channel.

Every receiver first decodes the modulus sum of the K-1 interfering lattice
codewords, strips it, then decodes its own codeword.  The functions here give
the decodability conditions of that chain, the very strong interference
predicates and the resulting per-user secrecy rate.

All rates are in bits per channel use and clamp at zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

# Absolute slack on inclusive threshold comparisons.
THRESHOLD_TOL = 1e-12


@dataclass(frozen=True)
class ChannelConfig:
    """Symmetric K-user Gaussian interference channel.

    ``b`` is the gain of every intended link; cross links have unit gain and
    the receiver noise has unit variance, so ``P`` is an SNR.
    """

    K: int
    b: float
    P: float
    # kept alongside b so that configs built from b^2 keep it bit-exact
    b2: float = field(default=None, compare=False)

    def __post_init__(self):
        if int(self.K) != self.K or self.K < 3:
            raise ValueError(f"K must be an integer >= 3, got {self.K}")
        if not (self.b > 0 and math.isfinite(self.b)):
            raise ValueError(f"b must be positive and finite, got {self.b}")
        if not (self.P > 0 and math.isfinite(self.P)):
            raise ValueError(f"P must be positive and finite, got {self.P}")
        if self.b2 is None:
            object.__setattr__(self, "b2", self.b * self.b)

    @classmethod
    def from_b2(cls, K: int, b2: float, P: float) -> "ChannelConfig":
        if not b2 > 0:
            raise ValueError(f"b2 must be positive, got {b2}")
        return cls(K=K, b=math.sqrt(b2), P=P, b2=b2)


@dataclass(frozen=True)
class RateReport:
    K: int
    b2: float
    power: float
    codebook_rate: float
    secrecy_rate: float
    cond_modsum: bool
    cond_distortion: bool
    cond_direct: bool
    vsi: bool
    leakage_bound: float
    reason: str | None = None


def capacity(snr: float) -> float:
    """AWGN capacity ``0.5 * log2(1 + snr)``."""
    if snr < 0:
        raise ValueError(f"snr must be nonnegative, got {snr}")
    return 0.5 * math.log2(1.0 + snr)


def modsum_rate_bound(cfg: ChannelConfig) -> float:
    """Largest rate at which the modulus sum of the K-1 interferers decodes.

    The receiver's own signal ``b*X_1`` and the noise act as interference.
    """
    arg = 1.0 / (cfg.K - 1) + cfg.P / (cfg.b2 * cfg.P + 1.0)
    if arg <= 1.0:
        return 0.0
    return 0.5 * math.log2(arg)


def distortion_condition(cfg: ChannelConfig) -> bool:
    """True iff the residual ``b*X_1 + Z`` survives the mod step (b^2 P + 1 < P)."""
    return cfg.b2 * cfg.P + 1.0 < cfg.P


def direct_rate_bound(cfg: ChannelConfig) -> float:
    return capacity(cfg.b2 * cfg.P)


def vsi_threshold(K: int, P: float) -> float:
    """Largest b^2 for which the channel has very strong interference.

    Minimum of the distortion branch ``(P-1)/P`` and the modulus-sum branch
    ``(sqrt(P - c + (c+1)^2/4) - (c+1)/2) / P`` with ``c = (K-2)/(K-1)``.
    For K = 3 the second branch is ``(sqrt(P + 1/16) - 3/4) / P``.
    """
    return min(_distortion_branch(P), _modsum_branch(K, P))


def _distortion_branch(P: float) -> float:
    return (P - 1.0) / P


def _modsum_branch(K: int, P: float) -> float:
    c = (K - 2) / (K - 1)
    return (math.sqrt(P - c + (c + 1.0) ** 2 / 4.0) - (c + 1.0) / 2.0) / P


def vsi_condition(cfg: ChannelConfig) -> bool:
    if cfg.P < 1.0:
        return False
    threshold = vsi_threshold(cfg.K, cfg.P)
    if threshold <= 0.0:
        # b > 0 can never satisfy a nonpositive threshold
        return False
    return cfg.b2 <= threshold + THRESHOLD_TOL


def sphere_vsi_threshold(P: float) -> float:
    """Very strong interference threshold of the sphere-shaped 3-user scheme."""
    return (math.sqrt(P) - 1.0) / P


def sphere_vsi_condition(cfg: ChannelConfig) -> bool:
    if cfg.K != 3:
        raise ValueError("the sphere-shaped comparison is defined for K = 3 only")
    if cfg.P < 1.0:
        return False
    threshold = sphere_vsi_threshold(cfg.P)
    if threshold <= 0.0:
        return False
    return cfg.b2 <= threshold + THRESHOLD_TOL


def secrecy_rate(K: int, R: float) -> float:
    """Per-user secrecy rate ``[R - R/(K-1) - log2(K-1)/(K-1)]^+``.

    For K = 3 this is ``[0.5 R - 0.5]^+``.  The caller is responsible for R
    satisfying the decodability conditions.
    """
    if R < 0:
        raise ValueError(f"R must be nonnegative, got {R}")
    n = K - 1
    return max(0.0, R - R / n - math.log2(n) / n)


def leakage_bound(R: float, K: int, N: int = 1) -> float:
    """Bits leaked about K-1 codewords to one eavesdropper over N uses."""
    if R < 0:
        raise ValueError(f"R must be nonnegative, got {R}")
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    return N * (R + math.log2(K - 1))


def rate_report(cfg: ChannelConfig, R: float | None = None) -> RateReport:
    """Evaluate the single-layer scheme at codebook rate R.

    With ``R=None`` the largest rate allowed by the modulus-sum and direct
    bounds is used; under very strong interference that is ``C(b^2 P)``.
    """
    direct = direct_rate_bound(cfg)
    modsum = modsum_rate_bound(cfg)
    if R is None:
        R = min(modsum, direct)
    cond_modsum = R <= modsum + THRESHOLD_TOL
    cond_direct = R <= direct + THRESHOLD_TOL
    cond_distortion = distortion_condition(cfg)

    reason = None
    if not cond_distortion:
        reason = "mod step distorts b*X1 + Z (b^2 P + 1 >= P)"
    elif not cond_modsum:
        reason = "rate exceeds the modulus-sum decodability bound"
    elif not cond_direct:
        reason = "rate exceeds C(b^2 P)"

    secret = secrecy_rate(cfg.K, R) if reason is None else 0.0
    if reason is None and secret == 0.0:
        reason = "codebook rate too small to cover the jamming cost"

    return RateReport(
        K=cfg.K,
        b2=cfg.b2,
        power=cfg.P,
        codebook_rate=R,
        secrecy_rate=secret,
        cond_modsum=cond_modsum,
        cond_distortion=cond_distortion,
        cond_direct=cond_direct,
        vsi=vsi_condition(cfg),
        leakage_bound=leakage_bound(R, cfg.K, 1),
        reason=reason,
    )
