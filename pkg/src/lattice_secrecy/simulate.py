"""Monte Carlo simulation of the lattice decoding chains at receiver 1.

Trials are split into fixed-size blocks.  Block ``j`` draws its randomness
from ``SeedSequence(seed, spawn_key=(j,))``, so the outcome depends only on
``(seed, trials, config)`` and not on how many workers run the blocks.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import binomtest

from .lattice import (
    ScalarNestedLattice,
    decode_modsum,
    encode_many,
    mmse_scale,
    mod_lattice,
    point_index,
)
from .layered import USERS, LayerPlan, Regime
from .rates import ChannelConfig

BLOCK = 8192


class DecodeOrder(str, enum.Enum):
    INTERFERENCE_FIRST = "interference-first"
    OWN_FIRST = "own-first"


ORDER_FOR_REGIME = {
    Regime.STRONG: DecodeOrder.INTERFERENCE_FIRST,
    Regime.WEAK: DecodeOrder.OWN_FIRST,
}


@dataclass(frozen=True)
class SimConfig:
    cfg: ChannelConfig
    lattice: ScalarNestedLattice
    trials: int
    seed: int
    decode_order: DecodeOrder = DecodeOrder.INTERFERENCE_FIRST
    noise_var: float = 1.0
    # False decodes with unit scaling instead of the MMSE coefficient
    mmse: bool = True

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.noise_var < 0:
            raise ValueError("noise_var must be nonnegative")
        object.__setattr__(self, "decode_order", DecodeOrder(self.decode_order))

    @classmethod
    def matched(cls, cfg: ChannelConfig, q: int, trials: int, seed: int, **kw):
        """Lattice scaled so each user's input has power ``cfg.P``."""
        return cls(cfg, ScalarNestedLattice.for_power(cfg.P, q), trials, seed, **kw)


@dataclass(frozen=True)
class SimOutcome:
    trials: int
    modsum_errors: int
    own_errors: int
    per_layer_errors: tuple[int, ...]
    per_layer_modsum_errors: tuple[int, ...]
    # errors at layer i among trials whose higher layers all decoded correctly
    per_layer_conditional_errors: tuple[int, ...]
    per_layer_conditional_trials: tuple[int, ...]
    wilson_ci: dict = field(compare=False)

    @property
    def modsum_error_rate(self) -> float:
        return self.modsum_errors / self.trials

    @property
    def own_error_rate(self) -> float:
        return self.own_errors / self.trials

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "modsum_errors": self.modsum_errors,
            "own_errors": self.own_errors,
            "modsum_error_rate": self.modsum_error_rate,
            "own_error_rate": self.own_error_rate,
            "per_layer_errors": list(self.per_layer_errors),
            "per_layer_modsum_errors": list(self.per_layer_modsum_errors),
            "per_layer_conditional_errors": list(self.per_layer_conditional_errors),
            "per_layer_conditional_trials": list(self.per_layer_conditional_trials),
            "wilson_ci": {k: list(v) for k, v in self.wilson_ci.items()},
        }


def wilson_interval(errors: int, trials: int, level: float = 0.95) -> tuple[float, float]:
    if trials == 0:
        return (0.0, 1.0)
    ci = binomtest(errors, trials).proportion_ci(confidence_level=level, method="wilson")
    return (float(ci.low), float(ci.high))


def _block_rng(seed: int, block: int) -> np.random.Generator:
    ss = np.random.SeedSequence(seed, spawn_key=(block,))
    return np.random.Generator(np.random.Philox(ss))


def _decode_layer(r, lat, idx, dith, b, K, P_layer, A, order, mmse):
    """Run one layer's two decoding steps on residual ``r``.

    Returns the residual for the layers below, the decoded interference
    modulus-sum index and the decoded own index.
    """
    interf_d = [dith[:, k] for k in range(1, K)]
    b2 = b * b
    if order is DecodeOrder.INTERFERENCE_FIRST:
        a1 = mmse_scale((K - 1) * P_layer, b2 * P_layer + A) if mmse else 1.0
        s_hat = decode_modsum(r, interf_d, lat, a1)
        r = mod_lattice(r - mod_lattice(s_hat + sum(interf_d), lat), lat)
        a2 = mmse_scale(b2 * P_layer, A) if mmse else 1.0
        t_hat = decode_modsum(r / b, [dith[:, 0]], lat, a2)
        r = r - b * mod_lattice(t_hat + dith[:, 0], lat)
    else:
        a1 = mmse_scale(b2 * P_layer, (K - 1) * P_layer + A) if mmse else 1.0
        t_hat = decode_modsum(r / b, [dith[:, 0]], lat, a1)
        r = r - b * mod_lattice(t_hat + dith[:, 0], lat)
        a2 = mmse_scale((K - 1) * P_layer, A) if mmse else 1.0
        s_hat = decode_modsum(r, interf_d, lat, a2)
        r = mod_lattice(r - mod_lattice(s_hat + sum(interf_d), lat), lat)
    return r, point_index(s_hat, lat), point_index(t_hat, lat)


def _simulate_block(sim: SimConfig, lattices, block: int, n: int):
    """Per-layer error indicators for ``n`` trials, layer 1 first."""
    K = sim.cfg.K
    b = sim.cfg.b
    M = len(lattices)
    rng = _block_rng(sim.seed, block)
    idx = rng.integers(0, [lat.q for lat in lattices], size=(n, K, M))
    unit = rng.random(size=(n, K, M))
    noise = rng.standard_normal(n) * math.sqrt(sim.noise_var)

    gammas = np.array([lat.gamma for lat in lattices])
    dith = (unit - 0.5) * gammas
    x = np.empty_like(dith)
    for i, lat in enumerate(lattices):
        x[:, :, i] = encode_many(idx[:, :, i], dith[:, :, i], lat)
    y = b * x[:, 0, :].sum(axis=1) + x[:, 1:, :].sum(axis=(1, 2)) + noise

    powers = [lat.power for lat in lattices]
    modsum_err = np.zeros((n, M), dtype=bool)
    own_err = np.zeros((n, M), dtype=bool)
    r = y
    for i in reversed(range(M)):
        lat = lattices[i]
        A = sum(((K - 1) + b * b) * p for p in powers[:i]) + sim.noise_var
        r, s_idx, t_idx = _decode_layer(
            r, lat, idx[:, :, i], dith[:, :, i], b, K, powers[i], A,
            sim.decode_order, sim.mmse,
        )
        true_sum = idx[:, 1:, i].sum(axis=1) % lat.q
        modsum_err[:, i] = s_idx != true_sum
        own_err[:, i] = t_idx != idx[:, 0, i]
    return modsum_err, own_err


def _blocks(trials: int):
    nblocks = -(-trials // BLOCK)
    return [(j, min(BLOCK, trials - j * BLOCK)) for j in range(nblocks)]


def _run(sim: SimConfig, lattices, workers: int) -> SimOutcome:
    M = len(lattices)
    counts = {
        "modsum": 0,
        "own": 0,
        "layer_own": np.zeros(M, dtype=np.int64),
        "layer_modsum": np.zeros(M, dtype=np.int64),
        "cond_err": np.zeros(M, dtype=np.int64),
        "cond_n": np.zeros(M, dtype=np.int64),
    }

    def work(job):
        return _simulate_block(sim, lattices, *job)

    jobs = _blocks(sim.trials)
    if workers <= 1:
        results = map(work, jobs)
    else:
        pool = ThreadPoolExecutor(max_workers=workers)
        results = pool.map(work, jobs)
    for modsum_err, own_err in results:
        layer_err = modsum_err | own_err
        counts["modsum"] += int(modsum_err.any(axis=1).sum())
        counts["own"] += int(own_err.any(axis=1).sum())
        counts["layer_own"] += own_err.sum(axis=0)
        counts["layer_modsum"] += modsum_err.sum(axis=0)
        for i in range(M):
            above_ok = ~layer_err[:, i + 1:].any(axis=1)
            counts["cond_n"][i] += int(above_ok.sum())
            counts["cond_err"][i] += int((layer_err[:, i] & above_ok).sum())
    if workers > 1:
        pool.shutdown()

    n = sim.trials
    ci = {
        "modsum": wilson_interval(counts["modsum"], n),
        "own": wilson_interval(counts["own"], n),
    }
    for i in range(M):
        ci[f"layer_{i + 1}"] = wilson_interval(int(counts["layer_own"][i]), n)
    return SimOutcome(
        trials=n,
        modsum_errors=counts["modsum"],
        own_errors=counts["own"],
        per_layer_errors=tuple(int(v) for v in counts["layer_own"]),
        per_layer_modsum_errors=tuple(int(v) for v in counts["layer_modsum"]),
        per_layer_conditional_errors=tuple(int(v) for v in counts["cond_err"]),
        per_layer_conditional_trials=tuple(int(v) for v in counts["cond_n"]),
        wilson_ci=ci,
    )


def run_single_layer(sim: SimConfig, workers: int = 1) -> SimOutcome:
    """One lattice codeword per user; receiver 1 decodes in ``sim.decode_order``."""
    return _run(sim, [sim.lattice], workers)


def plan_lattices(plan: LayerPlan, q: int) -> list[ScalarNestedLattice]:
    """Per-layer lattices whose inputs carry the planned layer powers."""
    return [ScalarNestedLattice.for_power(p, q) for p in plan.P_i]


def run_layered(
    sim: SimConfig,
    plan: LayerPlan,
    lattices: list[ScalarNestedLattice] | None = None,
    workers: int = 1,
) -> SimOutcome:
    """Successive decoding from layer M down to layer 1, without a genie.

    By default every layer uses ``sim.lattice.q`` with spacing matched to the
    plan's power; ``lattices`` overrides that (layer 1 first).  A wrong
    decision at one layer corrupts the residual seen by the layers below.
    """
    if sim.cfg.K != USERS:
        raise ValueError("the layered scheme is defined for K = 3")
    if ORDER_FOR_REGIME[plan.regime] is not sim.decode_order:
        raise ValueError(
            f"decode order {sim.decode_order.value} does not match the "
            f"{plan.regime.value} regime"
        )
    if abs(sim.cfg.b2 - plan.b2) > 1e-12 * max(1.0, plan.b2):
        raise ValueError("plan and channel use different gains")
    if lattices is None:
        lattices = plan_lattices(plan, sim.lattice.q)
    if len(lattices) != plan.M:
        raise ValueError(f"expected {plan.M} lattices, got {len(lattices)}")
    return _run(sim, list(lattices), workers)
