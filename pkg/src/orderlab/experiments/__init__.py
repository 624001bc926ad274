"""Scans over primes (or integers) up to x that count exceptions to the
large-order statements and bucket them into density curves."""

from .config import ScanConfig
from .results import DensityCurve, ExceptionReport
from .scans import (
    ETA,
    MatthewsFit,
    divisor_interval_density,
    erdos_baseline,
    five_bases,
    ford_curve,
    kurlberg_rudnick_holds,
    replay_exceptions,
    run_scan,
    scan_conditions,
    scan_corollary3,
    scan_matthews,
    scan_theorem1,
    scan_theorem2,
    scan_theorem4,
    skalba_search,
)

__all__ = [
    "ETA",
    "DensityCurve",
    "ExceptionReport",
    "MatthewsFit",
    "ScanConfig",
    "divisor_interval_density",
    "erdos_baseline",
    "five_bases",
    "ford_curve",
    "kurlberg_rudnick_holds",
    "replay_exceptions",
    "run_scan",
    "scan_conditions",
    "scan_corollary3",
    "scan_matthews",
    "scan_theorem1",
    "scan_theorem2",
    "scan_theorem4",
    "skalba_search",
]
