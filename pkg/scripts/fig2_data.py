"""Write the degrees-of-freedom dataset for the DoF comparison curve and print its landmarks.

    python scripts/fig2_data.py --out fig2.csv
"""

import argparse

import numpy as np

from lattice_secrecy import export
from lattice_secrecy.layered import Regime, dof, fig2_dataset, sdof, sdof_zero_crossing


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="fig2.csv")
    ap.add_argument("--points", type=int, default=801)
    args = ap.parse_args()

    grid = np.geomspace(1e-4, 1e4, args.points)
    rows = fig2_dataset(grid, workers=4)
    with open(args.out, "w") as fh:
        fh.write(export.fig2_csv(rows))
    print(f"wrote {len(rows)} rows to {args.out}")

    for regime in Regime:
        x = sdof_zero_crossing(regime)
        print(f"secure DoF leaves zero at b2 = {x:.10g} ({regime.value})")
    for b2 in (1e-12, 1e-6, 0.1, 4.0, 9.0, 1e6, 1e12):
        print(f"b2={b2:<8g} dof={dof(b2):.5f} sdof={sdof(b2):.5f}")


if __name__ == "__main__":
    main()
