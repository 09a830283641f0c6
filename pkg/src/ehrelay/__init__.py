"""Wireless-powered two-hop MIMO-OFDM relay simulator and rate optimizer.

The package splits into small focused modules:

* :mod:`ehrelay.linalg` - dense complex linear algebra (Jacobi SVD).
* :mod:`ehrelay.channel` - random fading channels with path loss.
* :mod:`ehrelay.system` - time-switching relay protocol quantities.
* :mod:`ehrelay.auglag` - augmented Lagrangian rate optimizer.
* :mod:`ehrelay.waterfill` - independent water-filling reference solver.
* :mod:`ehrelay.experiment` / :mod:`ehrelay.cli` - Monte Carlo sweeps and CLI.
"""

from ehrelay.channel import ChannelRealization, Scenario, effective_subchannels, generate
from ehrelay.linalg import SvdResult, frobenius_norm_sq, matmul, svd
from ehrelay.system import (
    Allocation,
    EnergyPlan,
    Pairing,
    achievable_rate,
    benchmark_allocation,
    optimal_energy_plan,
    optimal_pairing,
    snr_coefficients,
)

__all__ = [
    "Allocation",
    "ChannelRealization",
    "EnergyPlan",
    "Pairing",
    "Scenario",
    "SvdResult",
    "achievable_rate",
    "benchmark_allocation",
    "effective_subchannels",
    "frobenius_norm_sq",
    "generate",
    "matmul",
    "optimal_energy_plan",
    "optimal_pairing",
    "snr_coefficients",
    "svd",
]

__version__ = "0.1.0"
