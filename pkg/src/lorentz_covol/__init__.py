"""Covolumes of unit groups of x_1^2 + ... + x_n^2 - d x_{n+1}^2 and their cross-checks."""

from .arith_kernel import HighPrecisionReal, SymbolicVolume
from .covolume import (
    CovolumeResult,
    be_volume,
    commensurability_ratio,
    covolume,
    euler_characteristic,
    siegel_assembly,
    table1,
)
from .numtheory import QFormSpec

__all__ = [
    "CovolumeResult",
    "HighPrecisionReal",
    "QFormSpec",
    "SymbolicVolume",
    "be_volume",
    "commensurability_ratio",
    "covolume",
    "euler_characteristic",
    "siegel_assembly",
    "table1",
]
