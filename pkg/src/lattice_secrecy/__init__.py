"""Achievable secrecy rates and (secure) degrees of freedom for K-user
symmetric Gaussian interference channels under nested lattice coding."""

from .lattice import (
    Codeword,
    ScalarNestedLattice,
    decode_modsum,
    encode,
    mod_lattice,
    representation_index,
)
from .layered import (
    LayerPlan,
    Regime,
    RegimeError,
    alpha_strong,
    alpha_weak,
    build_plan,
    dof,
    fig2_dataset,
    per_layer_rate,
    qbit_dof,
    sdof,
    sdof_zero_crossing,
)
from .leakage import LeakageReport, exhaustive_leakage, representation_soundness
from .rates import (
    ChannelConfig,
    RateReport,
    capacity,
    distortion_condition,
    leakage_bound,
    modsum_rate_bound,
    rate_report,
    secrecy_rate,
    sphere_vsi_condition,
    vsi_condition,
)
from .simulate import DecodeOrder, SimConfig, SimOutcome, run_layered, run_single_layer

__version__ = "0.1.0"
