"""Smoothed-residual early stopping for truncated SVD estimation."""

from ._smoothstop import (
    DimensionMismatch,
    MissingSeed,
    Signal,
    Spectrum,
    default_kappa,
    derive_seed,
    efficiency_study,
    oracles,
    paper_signal,
    polynomial_spectrum,
    residual_path,
    risk,
    simulate,
    stopping_time,
)

__all__ = [
    "DimensionMismatch",
    "MissingSeed",
    "Signal",
    "Spectrum",
    "default_kappa",
    "derive_seed",
    "efficiency_study",
    "oracles",
    "paper_signal",
    "polynomial_spectrum",
    "residual_path",
    "risk",
    "simulate",
    "stopping_time",
]
