"""Layered nested-lattice scheme for the 3-user symmetric channel.

Each user superposes M lattice layers with geometrically growing powers
``P_i = alpha * (alpha*beta + 1)**(i-1)``.  A receiver peels layers from the
top: in the strong regime (b^2 < 6 - 4*sqrt(2)) it decodes the interferers'
modulus sum first, in the weak regime (b^2 > 3/2) its own codeword first.
``alpha`` is chosen so that both decoding steps support the same rate.

Gains are passed as ``b2`` (the squared intended-link gain) everywhere except
:func:`qbit_dof`, whose formula takes a logarithm to base ``b``.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from scipy.optimize import bisect

from .rates import THRESHOLD_TOL

STRONG_LIMIT = 6.0 - 4.0 * math.sqrt(2.0)
WEAK_LIMIT = 1.5
# users in the layered construction
USERS = 3


class RegimeError(ValueError):
    """The gain lies outside the regime an operation requires."""


class Regime(str, enum.Enum):
    STRONG = "strong"
    WEAK = "weak"


def regime_for(b2: float) -> Regime:
    if b2 <= 0:
        raise ValueError(f"b2 must be positive, got {b2}")
    if b2 < STRONG_LIMIT:
        return Regime.STRONG
    if b2 > WEAK_LIMIT:
        return Regime.WEAK
    raise RegimeError(
        f"b2={b2} lies in [6-4*sqrt(2), 3/2]; no layered scheme covers this gap"
    )


def _check_regime(b2: float, regime: Regime | None) -> Regime:
    actual = regime_for(b2)
    if regime is not None and Regime(regime) is not actual:
        raise RegimeError(f"b2={b2} belongs to the {actual.value} regime, not {regime}")
    return actual


def strong_discriminant(b2: float) -> float:
    return 4.0 - 12.0 * b2 + b2 * b2


def alpha_strong(b2: float) -> float:
    """Power ratio P_i / A_i balancing the two decoding steps, interference first.

    Valid up to and including the boundary ``b2 = 6 - 4*sqrt(2)`` where the
    discriminant vanishes.
    """
    if b2 <= 0:
        raise ValueError(f"b2 must be positive, got {b2}")
    if b2 > STRONG_LIMIT + THRESHOLD_TOL:
        raise RegimeError(f"b2={b2} exceeds the strong-regime limit {STRONG_LIMIT}")
    disc = max(strong_discriminant(b2), 0.0)
    return (2.0 - 3.0 * b2 + math.sqrt(disc)) / (4.0 * b2 * b2)


def alpha_weak(b2: float) -> float:
    """Power ratio P_i / A_i balancing the two decoding steps, own signal first."""
    if b2 < WEAK_LIMIT - THRESHOLD_TOL:
        raise RegimeError(f"b2={b2} is below the weak-regime limit 3/2")
    return 0.25 * (b2 + math.sqrt(b2 * b2 + 4.0))


def alpha_for(b2: float, regime: Regime) -> float:
    return alpha_strong(b2) if Regime(regime) is Regime.STRONG else alpha_weak(b2)


def beta_for(b2: float) -> float:
    """Growth of the accumulated interference per unit of layer power."""
    return b2 + 2.0


def growth(b2: float, regime: Regime | None = None) -> float:
    """Layer-to-layer power ratio ``alpha*beta + 1``."""
    regime = _check_regime(b2, regime)
    return alpha_for(b2, regime) * beta_for(b2) + 1.0


def modsum_layer_bound(b2: float, p: float, a: float, regime: Regime) -> float:
    """Rate at which a layer's interference modulus sum is decodable."""
    if Regime(regime) is Regime.STRONG:
        return 0.5 * math.log2(0.5 + p / (b2 * p + a))
    return 0.5 * math.log2(0.5 + p / a)


def own_layer_bound(b2: float, p: float, a: float, regime: Regime) -> float:
    """Rate at which the receiver's own codeword in a layer is decodable."""
    if Regime(regime) is Regime.STRONG:
        return 0.5 * math.log2(1.0 + b2 * p / a)
    return 0.5 * math.log2(1.0 + b2 * p / (2.0 * p + a))


@dataclass(frozen=True)
class LayerPlan:
    regime: Regime
    b2: float
    alpha: float
    beta: float
    M: int
    P_i: tuple[float, ...]
    A_i: tuple[float, ...]
    R_layer: tuple[float, ...]
    R_layer_secret: tuple[float, ...]

    @property
    def total_power(self) -> float:
        return math.fsum(self.P_i)

    @property
    def total_power_closed_form(self) -> float:
        return ((self.alpha * self.beta + 1.0) ** self.M - 1.0) / self.beta

    @property
    def sum_rate(self) -> float:
        return math.fsum(self.R_layer)

    @property
    def sum_secrecy_rate(self) -> float:
        return math.fsum(self.R_layer_secret)

    def to_dict(self) -> dict:
        return {
            "regime": self.regime.value,
            "b2": self.b2,
            "alpha": self.alpha,
            "beta": self.beta,
            "M": self.M,
            "P_i": list(self.P_i),
            "A_i": list(self.A_i),
            "R_layer": list(self.R_layer),
            "R_layer_secret": list(self.R_layer_secret),
            "total_power": self.total_power,
        }


def build_plan(b2: float, M: int) -> LayerPlan:
    """Geometric power allocation over ``M`` layers.

    Raises :class:`RegimeError` when b2 falls in the gap between regimes, and
    ``AssertionError`` if the resulting plan violates the mod-step feasibility
    condition of its regime.
    """
    if int(M) != M or M < 1:
        raise ValueError(f"M must be an integer >= 1, got {M}")
    regime = regime_for(b2)
    alpha = alpha_for(b2, regime)
    beta = beta_for(b2)
    g = alpha * beta + 1.0

    powers = tuple(alpha * g ** (i - 1) for i in range(1, M + 1))
    accum = tuple(g ** (i - 1) for i in range(1, M + 1))

    if regime is Regime.STRONG:
        assert (1.0 - b2) * alpha >= 1.0, "strong-regime mod step infeasible"
        assert all(p > b2 * p + a for p, a in zip(powers, accum))
    else:
        assert alpha > 1.0, "weak-regime mod step infeasible"
        assert all(p > a for p, a in zip(powers, accum))

    rates = tuple(
        own_layer_bound(b2, p, a, regime) for p, a in zip(powers, accum)
    )
    # alpha equalises the two bounds; a mismatch means a broken allocation
    for p, a, r in zip(powers, accum, rates):
        assert abs(modsum_layer_bound(b2, p, a, regime) - r) < 1e-9
    secret = tuple(max(0.0, 0.5 * r - 0.5) for r in rates)
    return LayerPlan(
        regime=regime,
        b2=b2,
        alpha=alpha,
        beta=beta,
        M=int(M),
        P_i=powers,
        A_i=accum,
        R_layer=rates,
        R_layer_secret=secret,
    )


def layers_for_power(b2: float, power: float) -> int:
    """Largest M whose allocation fits in ``power``; leftover power is unused."""
    regime = regime_for(b2)
    alpha = alpha_for(b2, regime)
    beta = beta_for(b2)
    g = alpha * beta + 1.0
    M = math.floor(math.log(beta * power + 1.0) / math.log(g))

    def total(m):
        return (g**m - 1.0) / beta

    while M > 0 and total(M) > power:
        M -= 1
    while total(M + 1) <= power:
        M += 1
    if M < 1:
        raise ValueError(
            f"power {power} is below the first layer's requirement {alpha}"
        )
    return M


def per_layer_rate(b2: float, regime: Regime | None = None) -> float:
    """Rate of every layer, ``0.25*log2(alpha*beta + 1) - 0.25``."""
    return 0.25 * math.log2(growth(b2, regime)) - 0.25


def per_layer_secrecy_rate(b2: float, regime: Regime | None = None) -> float:
    return max(0.0, 0.5 * per_layer_rate(b2, regime) - 0.5)


def dof(b2: float, regime: Regime | None = None) -> float:
    """Sum-rate degrees of freedom ``1.5 - 1.5 / log2(alpha*beta + 1)``."""
    return 1.5 - 1.5 / math.log2(growth(b2, regime))


def sdof(b2: float, regime: Regime | None = None) -> float:
    """Secure degrees of freedom ``[0.75 - 3.75 / log2(alpha*beta + 1)]^+``."""
    return max(0.0, 0.75 - 3.75 / math.log2(growth(b2, regime)))


def finite_m_dof(b2: float, M: int, secure: bool = False) -> float:
    """Sum rate over ``0.5*log2(3 * P)`` for an M-layer plan.

    Approaches :func:`dof` (or :func:`sdof` with ``secure=True``) as M grows.
    """
    plan = build_plan(b2, M)
    per_user = plan.sum_secrecy_rate if secure else plan.sum_rate
    return USERS * per_user / (0.5 * math.log2(USERS * plan.total_power))


def sdof_zero_crossing(regime: Regime) -> float:
    """b2 at which ``log2(alpha*beta + 1) = 5``, where the secure DoF leaves zero."""
    regime = Regime(regime)

    def f(b2):
        return alpha_for(b2, regime) * beta_for(b2) - 31.0

    if regime is Regime.STRONG:
        lo, hi = 1e-6, STRONG_LIMIT
    else:
        lo, hi = WEAK_LIMIT, 1e3
    return bisect(f, lo, hi, xtol=1e-300, rtol=1e-10, maxiter=2000)


def qbit_dof(K: int, b: float) -> float:
    """DoF of Q-bit expansion alignment, ``(K/2)(1 - log_b(2K))``, clamped at 0."""
    if b <= 1.0:
        raise ValueError(f"b must exceed 1 for a base-b logarithm, got {b}")
    return max(0.0, K / 2.0 * (1.0 - math.log(2 * K) / math.log(b)))


@dataclass(frozen=True)
class Fig2Row:
    b2: float
    regime: Regime | None
    alpha: float | None
    beta: float | None
    dof: float | None
    sdof: float | None
    qbit_dof: float | None


def fig2_row(b2: float, K: int = USERS) -> Fig2Row:
    if b2 <= 0:
        raise ValueError(f"b2 must be positive, got {b2}")
    b = math.sqrt(b2)
    q = qbit_dof(K, b) if b > 1.0 else None
    try:
        regime = regime_for(b2)
    except RegimeError:
        return Fig2Row(b2, None, None, None, None, None, q)
    return Fig2Row(
        b2=b2,
        regime=regime,
        alpha=alpha_for(b2, regime),
        beta=beta_for(b2),
        dof=dof(b2, regime),
        sdof=sdof(b2, regime),
        qbit_dof=q,
    )


def fig2_dataset(b2_grid, K: int = USERS, workers: int = 1) -> list[Fig2Row]:
    """Rows in grid order; nested-lattice columns are ``None`` in the regime gap."""
    if K != USERS:
        raise ValueError("the layered scheme is defined for K = 3")
    grid = [float(v) for v in b2_grid]
    if workers <= 1:
        return [fig2_row(v, K) for v in grid]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda v: fig2_row(v, K), grid))
