"""Command-line front end.

Exit codes: 0 success, 2 usage, 3 I/O, 4 regime gap, 5 enumeration cap.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass

import numpy as np

from . import export
from .layered import RegimeError, build_plan, fig2_dataset, layers_for_power
from .lattice import ScalarNestedLattice
from .leakage import EnumerationCapError, exhaustive_leakage
from .rates import ChannelConfig, rate_report
from .simulate import ORDER_FOR_REGIME, DecodeOrder, SimConfig, run_layered, run_single_layer

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_REGIME, EXIT_CAP = 0, 2, 3, 4, 5


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    min: float
    max: float
    points: int
    scale: str = "linear"

    def __post_init__(self):
        if self.variable not in ("b2", "P", "K"):
            raise ValueError(f"unknown sweep variable {self.variable!r}")
        if not self.min < self.max:
            raise ValueError("sweep needs min < max")
        if self.points < 2:
            raise ValueError("sweep needs at least 2 points")
        if self.scale not in ("linear", "log"):
            raise ValueError(f"unknown sweep scale {self.scale!r}")
        if self.scale == "log" and self.min <= 0:
            raise ValueError("log sweeps need a positive minimum")

    @classmethod
    def parse(cls, text: str) -> "SweepSpec":
        """Parse ``VAR:MIN:MAX:POINTS[:linear|log]``."""
        parts = text.split(":")
        if len(parts) not in (4, 5):
            raise ValueError(f"bad sweep {text!r}; expected VAR:MIN:MAX:POINTS[:SCALE]")
        scale = parts[4] if len(parts) == 5 else "linear"
        return cls(parts[0], float(parts[1]), float(parts[2]), int(parts[3]), scale)

    def grid(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.min, self.max, self.points)
        return np.linspace(self.min, self.max, self.points)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2)


def _write(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
        return
    with open(out, "w") as fh:
        fh.write(text)


def cmd_rates(args) -> int:
    try:
        cfg = ChannelConfig.from_b2(args.k, args.b2, args.power)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    report = rate_report(cfg)
    if args.json:
        print(_dump(asdict(report)))
        return EXIT_OK
    for key, value in asdict(report).items():
        if value is None:
            continue
        print(f"{key:>16} = {export.fmt(value)}")
    return EXIT_OK


def cmd_dof(args) -> int:
    try:
        sweep = SweepSpec.parse(args.sweep)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if sweep.variable != "b2":
        raise UsageError("the dof command sweeps b2 only")
    if args.k != 3:
        raise UsageError("the layered scheme is defined for K = 3")
    rows = fig2_dataset(sweep.grid(), K=args.k, workers=args.workers)
    if args.format == "csv":
        text = export.fig2_csv(rows, K=args.k)
    else:
        text = export.fig2_json(rows, K=args.k) + "\n"
    _write(text, args.out)
    return EXIT_OK


def cmd_alloc(args) -> int:
    if args.layers is not None:
        M = args.layers
    else:
        # a regime gap propagates as RegimeError (exit 4)
        try:
            M = layers_for_power(args.b2, args.power)
        except RegimeError:
            raise
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    if M < 1:
        raise UsageError("--layers must be >= 1")
    plan = build_plan(args.b2, M)
    if args.json:
        print(_dump(plan.to_dict()))
        return EXIT_OK
    print(f"# regime={plan.regime.value} alpha={export.fmt(plan.alpha)} "
          f"beta={export.fmt(plan.beta)} M={plan.M}")
    print("layer,P_i,A_i,R_layer,R_layer_secret")
    for i in range(plan.M):
        print(",".join([str(i + 1)] + [export.fmt(v[i]) for v in
                       (plan.P_i, plan.A_i, plan.R_layer, plan.R_layer_secret)]))
    print(f"total,{export.fmt(plan.total_power)},,"
          f"{export.fmt(plan.sum_rate)},{export.fmt(plan.sum_secrecy_rate)}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    if args.q < 2:
        raise UsageError("--q must be >= 2")
    noise_var = 0.0 if args.noiseless else 1.0
    mmse = not (args.noiseless or args.unit_scale)
    echo = {"k": args.k, "b2": args.b2, "q": args.q, "trials": args.trials,
            "seed": args.seed, "noise_var": noise_var, "mmse": mmse}

    if args.layers is None:
        if args.power is None:
            raise UsageError("single-layer runs need --power")
        try:
            cfg = ChannelConfig.from_b2(args.k, args.b2, args.power)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        order = DecodeOrder(args.order or DecodeOrder.INTERFERENCE_FIRST)
        sim = SimConfig.matched(cfg, args.q, args.trials, args.seed,
                                decode_order=order, noise_var=noise_var, mmse=mmse)
        outcome = run_single_layer(sim, workers=args.workers)
        echo.update(power=args.power, layers=1, order=order.value, scheme="single-layer")
    else:
        if args.power is not None:
            raise UsageError("--power and --layers are exclusive; the plan fixes the power")
        plan = build_plan(args.b2, args.layers)
        order = ORDER_FOR_REGIME[plan.regime]
        if args.order is not None and DecodeOrder(args.order) is not order:
            raise RegimeError(f"{args.order} decoding does not match the "
                              f"{plan.regime.value} regime")
        cfg = ChannelConfig.from_b2(args.k, args.b2, plan.total_power)
        sim = SimConfig(cfg, ScalarNestedLattice.for_power(plan.P_i[0], args.q),
                        args.trials, args.seed, decode_order=order,
                        noise_var=noise_var, mmse=mmse)
        try:
            outcome = run_layered(sim, plan, workers=args.workers)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        echo.update(power=plan.total_power, layers=plan.M, order=order.value,
                    scheme="layered", regime=plan.regime.value)
    print(_dump({"config": echo, "outcome": outcome.to_dict()}))
    return EXIT_OK


def cmd_leakage(args) -> int:
    if args.q < 2:
        raise UsageError("--q must be >= 2")
    if args.k < 2:
        raise UsageError("--k must be >= 2")
    report = exhaustive_leakage(args.q, args.k)
    print(_dump(report.to_dict()))
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lattice-secrecy", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("rates", help="single-layer rates and very strong interference check")
    r.add_argument("--k", type=int, default=3)
    r.add_argument("--b2", type=float, required=True)
    r.add_argument("--power", type=float, required=True)
    r.add_argument("--json", action="store_true")
    r.set_defaults(func=cmd_rates)

    d = sub.add_parser("dof", help="DoF / secure DoF sweep (DoF curve data)")
    d.add_argument("--sweep", required=True, help="b2:MIN:MAX:POINTS[:linear|log]")
    d.add_argument("--k", type=int, default=3)
    d.add_argument("--format", choices=("csv", "json"), default="csv")
    d.add_argument("--out", default="-")
    d.add_argument("--workers", type=int, default=1)
    d.set_defaults(func=cmd_dof)

    a = sub.add_parser("alloc", help="layered power allocation table")
    a.add_argument("--b2", type=float, required=True)
    g = a.add_mutually_exclusive_group(required=True)
    g.add_argument("--layers", type=int)
    g.add_argument("--power", type=float)
    a.add_argument("--json", action="store_true")
    a.set_defaults(func=cmd_alloc)

    s = sub.add_parser("simulate", help="Monte Carlo decoding at receiver 1")
    s.add_argument("--k", type=int, default=3)
    s.add_argument("--b2", type=float, required=True)
    s.add_argument("--power", type=float)
    s.add_argument("--q", type=int, default=4)
    s.add_argument("--trials", type=int, default=10000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--layers", type=int)
    s.add_argument("--order", choices=[o.value for o in DecodeOrder])
    s.add_argument("--noiseless", action="store_true",
                   help="zero noise and unit decoder scaling")
    s.add_argument("--unit-scale", action="store_true")
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_simulate)

    lk = sub.add_parser("leakage", help="exhaustive leakage oracle")
    lk.add_argument("--q", type=int, required=True)
    lk.add_argument("--k", type=int, default=3)
    lk.set_defaults(func=cmd_leakage)
    return p


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RegimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REGIME
    except EnumerationCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
