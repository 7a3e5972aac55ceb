"""Negative group delay workbench: transfer functions, chain simulation and design sweeps."""

from ._core import (
    AnalysisError,
    PoleError,
    SimulationError,
    TransferFunction,
    allpass,
    bessel2,
    bessel_cascade,
    check_chain,
    design_stage,
    gain,
    measure_advance,
    nd,
    nd_practical,
    neg_allpass,
    parse_expr,
    scaling_sweep,
    simulate_chain,
)

__all__ = [
    "AnalysisError",
    "PoleError",
    "SimulationError",
    "TransferFunction",
    "allpass",
    "bessel2",
    "bessel_cascade",
    "check_chain",
    "design_stage",
    "gain",
    "measure_advance",
    "nd",
    "nd_practical",
    "neg_allpass",
    "parse_expr",
    "scaling_sweep",
    "simulate_chain",
]
