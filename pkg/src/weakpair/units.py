"""SI inputs to the dimensionless field parameter, and rates back to SI.

Constants are the exact/CODATA-2018 values; they are written into the
metadata of every output file.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .rates import PREFACTORS, RateResult

__all__ = [
    "HBAR",
    "C_LIGHT",
    "ELECTRON_MASS",
    "ELEMENTARY_CHARGE",
    "CONSTANTS",
    "UnitRangeError",
    "PhysicalInput",
    "DimensionalRate",
    "to_A",
    "critical_field",
    "attach_units",
]

HBAR = 1.054571817e-34  # J s
C_LIGHT = 2.99792458e8  # m / s
ELECTRON_MASS = 9.1093837015e-31  # kg
ELEMENTARY_CHARGE = 1.602176634e-19  # C

CONSTANTS = {
    "source": "CODATA 2018",
    "hbar_J_s": HBAR,
    "c_m_per_s": C_LIGHT,
}


class UnitRangeError(ArithmeticError):
    """A conversion overflowed, underflowed or produced a non-finite value."""


@dataclass(frozen=True)
class PhysicalInput:
    mass: float  # kg
    charge: float  # C
    field: float  # V/m

    def __post_init__(self):
        for name in ("mass", "charge", "field"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.mass < 0.0:
            raise ValueError(f"mass must be non-negative, got {self.mass!r}")
        if self.charge <= 0.0:
            raise ValueError(f"charge must be positive, got {self.charge!r}")
        if self.field <= 0.0:
            raise ValueError(f"field must be positive, got {self.field!r}")


@dataclass(frozen=True)
class DimensionalRate:
    value: float
    unit: str
    dimensionless_coefficient: float
    dim: int


def to_A(inp: PhysicalInput) -> float:
    """``m^2 c^3 / (q eps hbar)``."""
    if inp.mass == 0.0:
        return 0.0
    # plain products: scaling the field by a power of two scales A exactly
    numerator = inp.mass * inp.mass * C_LIGHT**3
    denominator = inp.charge * inp.field * HBAR
    if numerator == 0.0 or denominator == 0.0 or not math.isfinite(numerator) or not math.isfinite(denominator):
        raise UnitRangeError(f"A out of floating-point range for {inp}")
    A = numerator / denominator
    if A == 0.0 or not math.isfinite(A):
        raise UnitRangeError(f"A out of floating-point range for {inp}")
    return A


def critical_field(mass: float, charge: float) -> float:
    """Field strength at which ``A = 1``."""
    return mass * mass * C_LIGHT**3 / (charge * HBAR)


def attach_units(coeff: RateResult | float, inp: PhysicalInput, dim: int | None = None) -> DimensionalRate:
    """Multiply a dimensionless coefficient by its SI prefactor.

    A bare float needs ``dim``; for a RateResult ``dim`` must match if given.
    """
    if isinstance(coeff, RateResult):
        if dim is not None and dim != coeff.dim:
            raise ValueError(f"dimension mismatch: coefficient is {coeff.dim}+1, requested {dim}+1")
        dim = coeff.dim
        value = coeff.coefficient
    else:
        if dim is None:
            raise ValueError("dim is required for a bare coefficient")
        value = float(coeff)
    try:
        prefactor = PREFACTORS[dim]
    except KeyError:
        raise ValueError(f"dim must be 1, 2 or 3, got {dim!r}") from None
    scale = prefactor.evaluate(inp.charge * inp.field, HBAR, C_LIGHT)
    rate = value * scale
    if not math.isfinite(rate):
        raise UnitRangeError(f"dimensional rate overflows for {inp}")
    return DimensionalRate(rate, prefactor.unit, value, dim)
