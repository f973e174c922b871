"""CSV and JSON emission (and parsing back) for reports."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict
from importlib import resources

from .layered import Fig2Row, LayerPlan, Regime
from .leakage import LeakageReport
from .rates import RateReport
from .simulate import SimOutcome

FIG2_HEADER = ["b2", "regime", "alpha", "beta", "dof", "sdof", "qbit_dof"]
FIG2_METADATA = [
    "qbit_dof = (K/2)(1 - log_b(2K)) with log base b, the intended-link amplitude gain",
    "x axis is b2 = b^2; nested-lattice columns are empty where 6-4*sqrt(2) <= b2 <= 3/2",
]


def fmt(value) -> str:
    """Full-precision text for a CSV cell; ``None`` becomes an empty cell."""
    if value is None:
        return ""
    if isinstance(value, Regime):
        return value.value
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def fig2_csv(rows: list[Fig2Row], K: int = 3) -> str:
    buf = io.StringIO()
    buf.write(f"# K={K}\n")
    for line in FIG2_METADATA:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(FIG2_HEADER)
    for row in rows:
        writer.writerow([fmt(getattr(row, name)) for name in FIG2_HEADER])
    return buf.getvalue()


def parse_fig2_csv(text: str) -> list[Fig2Row]:
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    reader = csv.DictReader(lines)
    if reader.fieldnames != FIG2_HEADER:
        raise ValueError(f"unexpected header {reader.fieldnames}")
    rows = []
    for rec in reader:
        rows.append(
            Fig2Row(
                b2=float(rec["b2"]),
                regime=Regime(rec["regime"]) if rec["regime"] else None,
                **{
                    k: float(rec[k]) if rec[k] else None
                    for k in ("alpha", "beta", "dof", "sdof", "qbit_dof")
                },
            )
        )
    return rows


def fig2_json(rows: list[Fig2Row], K: int = 3) -> str:
    payload = {
        "K": K,
        "metadata": FIG2_METADATA,
        "rows": [
            {k: (v.value if isinstance(v, Regime) else v) for k, v in asdict(r).items()}
            for r in rows
        ],
    }
    return json.dumps(payload, indent=2)


def parse_fig2_json(text: str) -> list[Fig2Row]:
    out = []
    for rec in json.loads(text)["rows"]:
        rec = dict(rec)
        rec["regime"] = Regime(rec["regime"]) if rec["regime"] else None
        out.append(Fig2Row(**rec))
    return out


def rate_report_from_dict(d: dict) -> RateReport:
    return RateReport(**d)


def leakage_report_from_dict(d: dict) -> LeakageReport:
    return LeakageReport(**d)


def sim_outcome_from_dict(d: dict) -> SimOutcome:
    return SimOutcome(
        trials=d["trials"],
        modsum_errors=d["modsum_errors"],
        own_errors=d["own_errors"],
        per_layer_errors=tuple(d["per_layer_errors"]),
        per_layer_modsum_errors=tuple(d["per_layer_modsum_errors"]),
        per_layer_conditional_errors=tuple(d["per_layer_conditional_errors"]),
        per_layer_conditional_trials=tuple(d["per_layer_conditional_trials"]),
        wilson_ci={k: tuple(v) for k, v in d["wilson_ci"].items()},
    )


def layer_plan_from_dict(d: dict) -> LayerPlan:
    return LayerPlan(
        regime=Regime(d["regime"]),
        b2=d["b2"],
        alpha=d["alpha"],
        beta=d["beta"],
        M=d["M"],
        P_i=tuple(d["P_i"]),
        A_i=tuple(d["A_i"]),
        R_layer=tuple(d["R_layer"]),
        R_layer_secret=tuple(d["R_layer_secret"]),
    )


def load_schema(name: str) -> dict:
    """JSON schema shipped with the package, e.g. ``load_schema("rate_report")``."""
    path = resources.files("lattice_secrecy") / "schemas" / f"{name}.schema.json"
    return json.loads(path.read_text())
