"""Dirac chirality states and weak values between pre- and post-selections.

Everything is dimensionless: momenta in units of sqrt(q*eps*hbar/c), energies
in sqrt(q*eps*hbar*c), and the mass enters only through ``sqrt_a``
(= m c^2 in energy units).  The free Hamiltonians are

* 1+1: ``sigma_x p_x + sqrt_a sigma_z``
* 2+1: ``sigma_x p_x + sigma_y p_y + sqrt_a sigma_z``
* 3+1: ``alpha . p + sqrt_a beta``
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

__all__ = [
    "OVERLAP_FLOOR",
    "DegenerateStateError",
    "DegenerateSelectionError",
    "PauliLikeOperator",
    "operator",
    "velocity_operator",
    "hamiltonian",
    "Chirality",
    "build_chirality",
    "spin_partner",
    "selected_transition",
    "WeakValueResult",
    "weak_value",
    "selection_residual",
]

OVERLAP_FLOOR = 1e-10
DEFAULT_SPIN = (1.0 + 0.0j, 0.0 + 0.0j)

_I2 = np.eye(2, dtype=complex)
_Z2 = np.zeros((2, 2), dtype=complex)
_SIGMA = {
    "sigma_x": np.array([[0, 1], [1, 0]], dtype=complex),
    "sigma_y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "sigma_z": np.array([[1, 0], [0, -1]], dtype=complex),
}
_MATRICES = dict(_SIGMA)
for _k in "xyz":
    _MATRICES[f"alpha_{_k}"] = np.block([[_Z2, _SIGMA[f"sigma_{_k}"]], [_SIGMA[f"sigma_{_k}"], _Z2]])
_MATRICES["beta"] = np.block([[_I2, _Z2], [_Z2, -_I2]])


class DegenerateStateError(ValueError):
    """Raised when a chirality cannot be defined (massless, zero momentum)."""


class DegenerateSelectionError(ArithmeticError):
    """Raised when pre- and post-selection are (numerically) orthogonal."""


@dataclass(frozen=True)
class PauliLikeOperator:
    label: str
    matrix: np.ndarray = field(repr=False, compare=False)

    @property
    def size(self) -> int:
        return self.matrix.shape[0]


def operator(label: str, size: int = 2) -> PauliLikeOperator:
    """Look up one of the Hermitian, involutory operators by label.

    ``size`` only matters for ``"identity"``.
    """
    if label == "identity":
        if size not in (2, 4):
            raise ValueError(f"identity size must be 2 or 4, got {size}")
        mat = np.eye(size, dtype=complex)
    else:
        try:
            mat = _MATRICES[label].copy()
        except KeyError:
            raise ValueError(f"unknown operator label {label!r}") from None
    mat.flags.writeable = False
    return PauliLikeOperator(label, mat)


def velocity_operator(dim: int) -> PauliLikeOperator:
    """The x-velocity operator (in units of c) for spatial dimension ``dim``."""
    _check_dim(dim)
    return operator("alpha_x" if dim == 3 else "sigma_x")


def _check_dim(dim: int) -> None:
    if dim not in (1, 2, 3):
        raise ValueError(f"dim must be 1, 2 or 3, got {dim!r}")


def _momentum_tuple(dim: int, p) -> tuple[float, ...]:
    comps = getattr(p, "components", p)
    if np.isscalar(comps):
        comps = (comps,)
    comps = tuple(float(c) for c in comps)
    if len(comps) != dim:
        raise ValueError(f"{dim}+1 dimensions need {dim} momentum components, got {len(comps)}")
    if not all(math.isfinite(c) for c in comps):
        raise ValueError(f"momentum must be finite, got {comps}")
    return comps


def hamiltonian(dim: int, p, sqrt_a: float = 0.0) -> np.ndarray:
    """Dimensionless free Dirac Hamiltonian matrix."""
    _check_dim(dim)
    comps = _momentum_tuple(dim, p)
    if dim == 3:
        h = sum(c * _MATRICES[f"alpha_{k}"] for c, k in zip(comps, "xyz"))
        return h + sqrt_a * _MATRICES["beta"]
    h = comps[0] * _SIGMA["sigma_x"] + sqrt_a * _SIGMA["sigma_z"]
    if dim == 2:
        h = h + comps[1] * _SIGMA["sigma_y"]
    return h


def _fix_phase(v: np.ndarray) -> np.ndarray:
    v = v / np.linalg.norm(v)
    scale = np.max(np.abs(v))
    for c in v:
        if abs(c) > 1e-14 * scale:
            v = v * (abs(c) / c)
            break
    return v


@dataclass(frozen=True)
class Chirality:
    """Unit spinor of a free-particle energy-momentum eigenstate.

    The global phase is fixed so that the first nonzero component is real
    and positive.
    """

    components: np.ndarray = field(compare=False)
    energy_sign: int
    momentum: tuple[float, ...]
    sqrt_a: float
    spin_coeffs: tuple[complex, complex] | None = None

    @property
    def dim(self) -> int:
        return len(self.momentum)

    @property
    def energy(self) -> float:
        """Magnitude of the (dimensionless) energy."""
        return math.sqrt(sum(c * c for c in self.momentum) + self.sqrt_a**2)

    def eigen_residual(self) -> float:
        h = hamiltonian(self.dim, self.momentum, self.sqrt_a)
        return float(np.linalg.norm(h @ self.components - self.energy_sign * self.energy * self.components))


def _normalise_spin(spin_coeffs) -> tuple[complex, complex]:
    a, b = (complex(z) for z in spin_coeffs)
    norm = math.hypot(abs(a), abs(b))
    if norm == 0.0:
        raise ValueError("spin coefficients must not both vanish")
    return a / norm, b / norm


def build_chirality(
    dim: int,
    energy_sign: int,
    p,
    sqrt_a: float = 0.0,
    spin_coeffs: Sequence[complex] | None = None,
) -> Chirality:
    """Construct the chirality ``|+-E, p>`` of the free Dirac Hamiltonian.

    Parameters
    ----------
    dim : {1, 2, 3}
        Number of spatial dimensions.
    energy_sign : {+1, -1}
        Sign of the energy eigenvalue.
    p : sequence of float or ScaledMomentum
        ``dim`` momentum components.
    sqrt_a : float
        Dimensionless mass ``sqrt(A)``.
    spin_coeffs : pair of complex, optional
        ``(a, b)`` weights of the two degenerate 3+1 spinors (the upper
        components for positive energy, the lower ones for negative
        energy).  Normalised internally; defaults to ``(1, 0)``.

    Raises
    ------
    DegenerateStateError
        For the massless state at zero momentum.
    """
    _check_dim(dim)
    if energy_sign not in (1, -1):
        raise ValueError(f"energy_sign must be +1 or -1, got {energy_sign!r}")
    if not (math.isfinite(sqrt_a) and sqrt_a >= 0.0):
        raise ValueError(f"sqrt_a must be finite and non-negative, got {sqrt_a!r}")
    comps = _momentum_tuple(dim, p)
    energy = math.sqrt(sum(c * c for c in comps) + sqrt_a * sqrt_a)
    if energy == 0.0:
        raise DegenerateStateError("massless zero-momentum state undefined")
    m = sqrt_a

    if dim == 3:
        a, b = _normalise_spin(DEFAULT_SPIN if spin_coeffs is None else spin_coeffs)
        px, py, pz = comps
        k = energy + m
        # sigma.p acting on the basis two-spinors (1, 0) and (0, 1)
        sp_up = np.array([pz, px + 1j * py]) / k
        sp_dn = np.array([px - 1j * py, -pz]) / k
        two = a * np.array([1, 0], dtype=complex) + b * np.array([0, 1], dtype=complex)
        other = a * sp_up + b * sp_dn
        if energy_sign > 0:
            v = np.concatenate([two, other])
        else:
            v = np.concatenate([-other, two])
        spin = (a, b)
    else:
        if spin_coeffs is not None:
            raise ValueError("spin coefficients only apply in 3+1 dimensions")
        px = comps[0]
        py = comps[1] if dim == 2 else 0.0
        # two equivalent column forms; take the better conditioned one
        if energy_sign > 0:
            v = np.array([energy + m, px + 1j * py], dtype=complex)
        else:
            v = np.array([px - 1j * py, -energy - m], dtype=complex)
        spin = None

    v = _fix_phase(v)
    v.flags.writeable = False
    return Chirality(v, energy_sign, comps, float(sqrt_a), spin)


def spin_partner(spin_coeffs: Sequence[complex]) -> tuple[complex, complex]:
    """Negative-energy coefficients paired with positive-energy ``(a, b)``.

    The pre/post overlap of the selected 3+1 transition is proportional to
    ``conj(a_post) b_pre + conj(b_post) a_pre``, so reusing ``(a, b)`` for both
    states gives an orthogonal selection for ``(1, 0)``.  The swapped pair
    ``(b, a)`` maximises the overlap instead.
    """
    a, b = spin_coeffs
    return complex(b), complex(a)


def selected_transition(
    dim: int,
    p,
    sqrt_a: float = 0.0,
    spin_coeffs: Sequence[complex] | None = None,
    pre_spin_coeffs: Sequence[complex] | None = None,
) -> tuple[Chirality, Chirality]:
    """Pre/post-selection pair ``(-E, -p_x, p_perp) -> (+E, +p_x, p_perp)``.

    In 3+1, ``spin_coeffs`` sets the positive-energy (post-selected) state
    and ``pre_spin_coeffs`` defaults to its :func:`spin_partner`.
    """
    comps = _momentum_tuple(dim, p)
    if not comps[0] > 0.0:
        raise ValueError(f"transition needs p_x > 0, got {comps[0]}")
    if dim == 3:
        if spin_coeffs is None:
            spin_coeffs = DEFAULT_SPIN
        if pre_spin_coeffs is None:
            pre_spin_coeffs = spin_partner(spin_coeffs)
    elif spin_coeffs is not None or pre_spin_coeffs is not None:
        raise ValueError("spin coefficients only apply in 3+1 dimensions")
    flipped = (-comps[0],) + comps[1:]
    pre = build_chirality(dim, -1, flipped, sqrt_a, pre_spin_coeffs)
    post = build_chirality(dim, +1, comps, sqrt_a, spin_coeffs)
    return pre, post


@dataclass(frozen=True)
class WeakValueResult:
    """Weak value and the pre/post overlap it was divided by.

    ``value`` is ``None`` when the overlap falls below ``OVERLAP_FLOOR``.
    """

    value: complex | None
    overlap: complex

    @property
    def degenerate(self) -> bool:
        return self.value is None

    def require(self) -> complex:
        if self.value is None:
            raise DegenerateSelectionError(
                f"pre- and post-selection are orthogonal (|overlap|={abs(self.overlap):.3e})"
            )
        return self.value


def weak_value(op: PauliLikeOperator, pre: Chirality, post: Chirality) -> WeakValueResult:
    """``<post|op|pre> / <post|pre>``."""
    pre_v = getattr(pre, "components", pre)
    post_v = getattr(post, "components", post)
    if len(pre_v) != len(post_v):
        raise ValueError("pre- and post-selected states differ in component count")
    if op.size != len(pre_v):
        raise ValueError(f"operator {op.label} is {op.size}x{op.size}, states have {len(pre_v)} components")
    overlap = complex(np.vdot(post_v, pre_v))
    if abs(overlap) < OVERLAP_FLOOR:
        return WeakValueResult(None, overlap)
    return WeakValueResult(complex(np.vdot(post_v, op.matrix @ pre_v)) / overlap, overlap)


def selection_residual(
    dim: int,
    p,
    sqrt_a: float = 0.0,
    spin_coeffs: Sequence[complex] | None = None,
    pre_spin_coeffs: Sequence[complex] | None = None,
) -> float:
    """Magnitude of the transverse-plus-mass phase left by the selected transition.

    Vanishes when the time evolution is a pure shift along the field.
    """
    pre, post = selected_transition(dim, p, sqrt_a, spin_coeffs, pre_spin_coeffs)
    comps = pre.momentum

    def wv(label: str) -> complex:
        return weak_value(operator(label), pre, post).require()

    if dim == 1:
        total = sqrt_a * wv("sigma_z")
    elif dim == 2:
        total = wv("sigma_y") * comps[1] + sqrt_a * wv("sigma_z")
    else:
        total = wv("alpha_y") * comps[1] + wv("alpha_z") * comps[2] + sqrt_a * wv("beta")
    return abs(total)
