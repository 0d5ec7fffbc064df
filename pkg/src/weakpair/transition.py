"""Kinematics of the field-driven transition ``(-E, -p_x) -> (+E, +p_x)``.

Units: momenta in sqrt(q eps hbar / c), times in sqrt(hbar / (q eps c)),
energies in sqrt(q eps hbar c).  In these units the field's impulse gives a
transition time ``2 p_x`` and the energy-time uncertainty window is
``1 / (2 E)``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Sequence

from .spinors import selected_transition, velocity_operator, weak_value

__all__ = [
    "ADMISSION_BOUND",
    "ScaledMomentum",
    "FieldParam",
    "TransitionKinematics",
    "admission_lhs",
    "kinematics",
    "transition_probability",
    "velocity_consistency_residual",
    "sample_admitted",
]

# p_x^2 (p^2 + A) <= 1/16  <=>  2 p_x <= 1 / (2 E)
ADMISSION_BOUND = 1.0 / 16.0


@dataclass(frozen=True)
class ScaledMomentum:
    components: tuple[float, ...]

    def __post_init__(self):
        comps = tuple(float(c) for c in self.components)
        if not 1 <= len(comps) <= 3:
            raise ValueError(f"momentum needs 1 to 3 components, got {len(comps)}")
        if not all(math.isfinite(c) for c in comps):
            raise ValueError(f"momentum components must be finite, got {comps}")
        object.__setattr__(self, "components", comps)

    @classmethod
    def of(cls, p) -> "ScaledMomentum":
        if isinstance(p, cls):
            return p
        if isinstance(p, (int, float)):
            return cls((p,))
        return cls(tuple(p))

    @property
    def dim(self) -> int:
        return len(self.components)

    @property
    def px(self) -> float:
        return self.components[0]

    @property
    def norm2(self) -> float:
        return math.fsum(c * c for c in self.components)


@dataclass(frozen=True)
class FieldParam:
    A: float
    dim: int

    def __post_init__(self):
        if not (math.isfinite(self.A) and self.A >= 0.0):
            raise ValueError(f"A must be finite and non-negative, got {self.A!r}")
        if self.dim not in (1, 2, 3):
            raise ValueError(f"dim must be 1, 2 or 3, got {self.dim!r}")

    @property
    def sqrt_a(self) -> float:
        return math.sqrt(self.A)


@dataclass(frozen=True)
class TransitionKinematics:
    energy: float
    energy_gap: float
    transition_time: float
    uncertainty_time: float
    admitted: bool


def admission_lhs(px, p2, A):
    """Left side of the admission inequality; works elementwise on arrays."""
    return px * px * (p2 + A)


def _momentum(p, dim: int | None = None) -> ScaledMomentum:
    mom = ScaledMomentum.of(p)
    if dim is not None and mom.dim != dim:
        raise ValueError(f"{dim}+1 dimensions need {dim} momentum components, got {mom.dim}")
    if not mom.px > 0.0:
        raise ValueError(f"transition needs p_x > 0, got {mom.px}")
    return mom


def kinematics(p, field: FieldParam) -> TransitionKinematics:
    mom = _momentum(p, field.dim)
    p2 = mom.norm2
    energy = math.sqrt(p2 + field.A)
    return TransitionKinematics(
        energy=energy,
        energy_gap=2.0 * energy,
        transition_time=2.0 * mom.px,
        uncertainty_time=1.0 / (2.0 * energy),
        admitted=admission_lhs(mom.px, p2, field.A) <= ADMISSION_BOUND,
    )


def transition_probability(dim: int, p) -> float:
    """``p_x^2 / |p|^2``; identically 1 in 1+1 dimensions."""
    mom = _momentum(p, dim)
    if dim == 1:
        return 1.0
    return mom.px * mom.px / mom.norm2


def velocity_consistency_residual(
    dim: int,
    p,
    field: FieldParam,
    spin_coeffs: Sequence[complex] | None = None,
) -> float:
    """Mismatch between ``T * <v_x>_w`` and the mean phase velocity along x.

    Raises DegenerateSelectionError when the selection is orthogonal.
    """
    mom = _momentum(p, dim)
    if field.dim != dim:
        raise ValueError(f"field is tagged {field.dim}+1, momentum is {dim}+1")
    pre, post = selected_transition(dim, mom.components, field.sqrt_a, spin_coeffs)
    wv = weak_value(velocity_operator(dim), pre, post).require()
    energy = math.sqrt(mom.norm2 + field.A)
    t = transition_probability(dim, mom)
    if dim == 1:
        phase_velocity = energy / mom.px
    else:
        pnorm = math.sqrt(mom.norm2)
        phase_velocity = (energy / pnorm) * (mom.px / pnorm)
    return abs(t * wv - phase_velocity)


def sample_admitted(dim: int, n: int, rng: random.Random, a_max: float = 1.0) -> list[tuple[tuple[float, ...], float]]:
    """Draw ``n`` random ``(momentum, A)`` pairs inside the admitted region.

    ``A`` is uniform on ``[0, a_max]``, ``p_x`` uniform on ``(0, u(A)/2]`` and
    the transverse momentum uniform over the admitted slice at that ``p_x``
    (a segment in 2+1, a disc in 3+1).
    """
    out = []
    while len(out) < n:
        A = rng.uniform(0.0, a_max)
        px_max = 0.5 / math.sqrt(2.0 * A + math.sqrt(4.0 * A * A + 1.0))
        px = px_max * (1.0 - rng.random())
        radius = math.sqrt(max(0.0, ADMISSION_BOUND / (px * px) - px * px - A))
        if dim == 1:
            p = (px,)
        elif dim == 2:
            p = (px, rng.uniform(-radius, radius))
        else:
            r = radius * math.sqrt(rng.random())
            phi = rng.uniform(0.0, 2.0 * math.pi)
            p = (px, r * math.cos(phi), r * math.sin(phi))
        if admission_lhs(px, math.fsum(c * c for c in p), A) <= ADMISSION_BOUND:
            out.append((p, A))
    return out
