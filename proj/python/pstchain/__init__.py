"""Simulator of perturbed perfect-state-transfer spin chains."""

from ._pstchain import (
    ConfigError,
    IoError,
    NumericError,
    __version__,
    canonical_config,
    concurrence,
    eof_from_concurrence,
    evolve,
    fit,
    inject,
    j0,
    pst_couplings,
    scan,
    selftest,
)

__all__ = [
    "ConfigError",
    "IoError",
    "NumericError",
    "canonical_config",
    "concurrence",
    "eof_from_concurrence",
    "evolve",
    "fit",
    "inject",
    "j0",
    "pst_couplings",
    "scan",
    "selftest",
]
