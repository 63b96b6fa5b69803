"""Python access to the fermirdm C++ core."""

from ._core import (
    ModelParams,
    NumericalError,
    ValidationError,
    correlation,
    coupling_from_t,
    density,
    extrema,
    make_params,
    max_strong_coupling_t,
    pair_density,
    potential,
    rdm,
    spectrum,
    t_from_coupling,
)

__all__ = [
    "ModelParams",
    "NumericalError",
    "ValidationError",
    "correlation",
    "coupling_from_t",
    "density",
    "extrema",
    "make_params",
    "max_strong_coupling_t",
    "pair_density",
    "potential",
    "rdm",
    "spectrum",
    "t_from_coupling",
]
