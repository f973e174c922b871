"""Single-layer Monte Carlo error rates against power at fixed q.

    python scripts/sim_sweep.py --b2 0.09 --q 4 --trials 100000
"""

import argparse

import numpy as np

from lattice_secrecy.rates import ChannelConfig, distortion_condition, vsi_condition
from lattice_secrecy.simulate import SimConfig, run_single_layer


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--b2", type=float, default=0.09)
    ap.add_argument("--q", type=int, default=4)
    ap.add_argument("--trials", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=4)
    args = ap.parse_args()

    print("power,vsi,distortion_ok,modsum_err,modsum_lo,modsum_hi,own_err,own_lo,own_hi")
    for P in np.geomspace(1.5, 1e4, 12):
        cfg = ChannelConfig.from_b2(3, args.b2, float(P))
        sim = SimConfig.matched(cfg, args.q, args.trials, args.seed)
        out = run_single_layer(sim, workers=args.workers)
        ms, own = out.wilson_ci["modsum"], out.wilson_ci["own"]
        print(f"{P:.6g},{vsi_condition(cfg)},{distortion_condition(cfg)},"
              f"{out.modsum_error_rate:.5f},{ms[0]:.5f},{ms[1]:.5f},"
              f"{out.own_error_rate:.5f},{own[0]:.5f},{own[1]:.5f}")


if __name__ == "__main__":
    main()
