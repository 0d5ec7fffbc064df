"""Dimensionless pair-production rate coefficients.

Each coefficient multiplies the unit prefactor of its dimension:

* 1+1: ``q eps / (2 pi hbar)``
* 2+1: ``(q eps)^(3/2) / (4 pi^2 hbar^(3/2) c^(1/2))``
* 3+1: ``(q eps)^2 / (4 pi^3 hbar^2 c)`` (both spin states counted)

The momentum integrals over the admitted region reduce to one-dimensional
integrals in ``s = 2 p_x`` on ``[0, u(A)]``, where ``u`` is the positive root
of ``u^4 + 4 A u^2 = 1``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import transition as _transition
from .quadrature import integrate

__all__ = [
    "DEFAULT_TOL",
    "VALIDITY_LIMIT",
    "QuadratureError",
    "ResolutionWarning",
    "PrefactorDescriptor",
    "PREFACTORS",
    "RateResult",
    "DecreaseResult",
    "ScalingFit",
    "upper_bound_u",
    "arctan_integrand",
    "log_argument",
    "log_integrand",
    "rate_coefficient_2p1",
    "rate_coefficient_3p1",
    "rate_coefficient",
    "rate_deficit",
    "rate_difference_1p1",
    "mean_transition_time_1p1",
    "avg_rate_coefficient_1p1_massless",
    "avg_rate_1p1_quadrature",
    "decrease_rate",
    "schwinger_exact_coefficient",
    "rate_region_oracle",
    "small_mass_scaling",
]

DEFAULT_TOL = 1e-8
# beyond this A the mass gap is no longer small against the fluctuation energy
VALIDITY_LIMIT = 1.0


class QuadratureError(RuntimeError):
    def __init__(self, message: str, achieved_error: float):
        super().__init__(f"{message} (achieved error estimate {achieved_error:.3e})")
        self.achieved_error = achieved_error


class ResolutionWarning(UserWarning):
    pass


@dataclass(frozen=True)
class PrefactorDescriptor:
    """Unit prefactor ``constant * (q eps)^qe * hbar^hbar * c^c``."""

    dim: int
    qe_exponent: float
    hbar_exponent: float
    c_exponent: float
    constant: float
    unit: str

    def evaluate(self, qe: float, hbar: float, c: float) -> float:
        return self.constant * qe**self.qe_exponent * hbar**self.hbar_exponent * c**self.c_exponent


PREFACTORS = {
    1: PrefactorDescriptor(1, 1.0, -1.0, 0.0, 1.0 / (2.0 * math.pi), "m^-1 s^-1"),
    2: PrefactorDescriptor(2, 1.5, -1.5, -0.5, 1.0 / (4.0 * math.pi**2), "m^-2 s^-1"),
    3: PrefactorDescriptor(3, 2.0, -2.0, -1.0, 1.0 / (4.0 * math.pi**3), "m^-3 s^-1"),
}


@dataclass(frozen=True)
class RateResult:
    coefficient: float
    abs_error_estimate: float
    prefactor: PrefactorDescriptor
    A: float

    @property
    def dim(self) -> int:
        return self.prefactor.dim

    @property
    def within_validity(self) -> bool:
        return self.A <= VALIDITY_LIMIT


@dataclass(frozen=True)
class DecreaseResult:
    """Relative rate decrease caused by the mass, model and exact."""

    dim: int
    A: float
    delta_model: float
    delta_exact: float
    abs_error_estimate: float = 0.0


@dataclass(frozen=True)
class ScalingFit:
    slope: float
    intercept: float
    coefficient: float


def _check_A(A: float) -> float:
    A = float(A)
    if not (math.isfinite(A) and A >= 0.0):
        raise ValueError(f"A must be finite and non-negative, got {A!r}")
    return A


def _check_tol(tol: float) -> float:
    if not tol > 0.0:
        raise ValueError(f"tolerance must be positive, got {tol!r}")
    return float(tol)


def upper_bound_u(A: float) -> float:
    """Positive root of ``u^4 + 4 A u^2 = 1``.

    Equal to ``sqrt(-2A + sqrt(4A^2 + 1))``, written without the
    cancellation that form suffers at large A.
    """
    A = _check_A(A)
    return 1.0 / math.sqrt(2.0 * A + math.sqrt(4.0 * A * A + 1.0))


def _gap_factor(s: float, A: float, u: float) -> float:
    # 1 - 4 A s^2 - s^4, factored through its root u^2 to stay accurate near s = u
    return max(0.0, (u - s) * (u + s) * (s * s + u * u + 4.0 * A))


def arctan_integrand(s: float, A: float, u: float | None = None) -> float:
    """``arctan sqrt(1/s^4 - 4A/s^2 - 1)``, the 2+1 reduced integrand."""
    if u is None:
        u = upper_bound_u(A)
    return math.atan2(math.sqrt(_gap_factor(s, A, u)), s * s)


def log_argument(s: float, A: float, u: float | None = None) -> float:
    """``1/s^4 - 4A/s^2``; equals 1 at ``s = u(A)``."""
    if u is None:
        u = upper_bound_u(A)
    # 1 + (1 - 4 A s^2 - s^4) / s^4 with the factored gap, exact at s = u
    return 1.0 + (u - s) * (u + s) * (s * s + u * u + 4.0 * A) / s**4


def log_integrand(s: float, A: float, u: float | None = None) -> float:
    """``s ln(1/s^4 - 4A/s^2)``, the 3+1 reduced integrand."""
    if s == 0.0:
        return 0.0
    if u is None:
        u = upper_bound_u(A)
    if 2.0 * s >= u:
        # near the root the argument is close to 1
        return s * math.log1p((u - s) * (u + s) * (s * s + u * u + 4.0 * A) / s**4)
    return s * (math.log1p(-4.0 * A * s * s) - 4.0 * math.log(s))


def _converged(res, what: str):
    if not res.converged:
        raise QuadratureError(f"{what} did not converge", res.abs_error_estimate)
    return res


def rate_coefficient_2p1(A: float, tol: float = DEFAULT_TOL) -> RateResult:
    """``(1/2) int_0^u arctan sqrt(1/s^4 - 4A/s^2 - 1) ds``."""
    A = _check_A(A)
    tol = _check_tol(tol)
    u = upper_bound_u(A)
    res = integrate(lambda s: arctan_integrand(s, A, u), 0.0, u, 2.0 * tol, right_power=0.5)
    _converged(res, f"2+1 rate integral at A={A!r}")
    return RateResult(0.5 * res.value, 0.5 * res.abs_error_estimate, PREFACTORS[2], A)


def rate_coefficient_3p1(A: float, tol: float = DEFAULT_TOL) -> RateResult:
    """``(pi/8) int_0^u s ln(1/s^4 - 4A/s^2) ds``; the spin factor is included."""
    A = _check_A(A)
    tol = _check_tol(tol)
    u = upper_bound_u(A)
    scale = math.pi / 8.0
    res = integrate(lambda s: log_integrand(s, A, u), 0.0, u, tol / scale)
    _converged(res, f"3+1 rate integral at A={A!r}")
    return RateResult(scale * res.value, scale * res.abs_error_estimate, PREFACTORS[3], A)


def rate_coefficient(dim: int, A: float, tol: float = DEFAULT_TOL) -> RateResult:
    if dim == 2:
        return rate_coefficient_2p1(A, tol)
    if dim == 3:
        return rate_coefficient_3p1(A, tol)
    if dim == 1:
        raise ValueError("the 1+1 rate diverges; use rate_difference_1p1 or decrease_rate")
    raise ValueError(f"dim must be 1, 2 or 3, got {dim!r}")


@lru_cache(maxsize=32)
def _massless_coefficient(dim: int, tol: float) -> RateResult:
    return rate_coefficient(dim, 0.0, tol)


def _arctan_difference(s: float, A: float, u: float) -> float:
    # arctan(x0) - arctan(xA) with x0, xA the massless and massive arguments,
    # rearranged to a single arctan of a positive quantity
    s4 = s**4
    x0 = math.sqrt(max(0.0, (1.0 - s) * (1.0 + s) * (1.0 + s * s)))
    xa = math.sqrt(_gap_factor(s, A, u))
    return math.atan2(4.0 * A * s4, (x0 + xa) * (s4 + x0 * xa))


def rate_deficit(dim: int, A: float, tol: float = DEFAULT_TOL) -> tuple[float, float]:
    """``C(0) - C(A)`` and its error estimate, for dim 2 or 3.

    Computed directly rather than as a difference of two coefficients, so
    that the relative accuracy holds as ``A -> 0``.
    """
    A = _check_A(A)
    tol = _check_tol(tol)
    if dim not in (2, 3):
        raise ValueError(f"rate_deficit is defined for dim 2 and 3, got {dim!r}")
    if A == 0.0:
        return 0.0, 0.0
    u = upper_bound_u(A)
    # deficit ~ A for small A; aim for a fixed relative accuracy there
    # (floored so subnormal A cannot drive the target to zero)
    part_tol = max(0.5 * tol * min(1.0, A), 1e-300)
    if dim == 2:
        scale = 0.5
        inner = integrate(
            lambda s: _arctan_difference(s, A, u), 0.0, u, part_tol / scale, right_power=0.5
        )
        outer = integrate(
            lambda s: arctan_integrand(s, 0.0, 1.0), u, 1.0, part_tol / scale, right_power=0.5
        )
    else:
        scale = math.pi / 8.0
        inner = integrate(lambda s: -s * math.log1p(-4.0 * A * s * s), 0.0, u, part_tol / scale)
        outer = integrate(lambda s: log_integrand(s, 0.0, 1.0), u, 1.0, part_tol / scale)
    _converged(inner, f"{dim}+1 deficit integral on [0, u] at A={A!r}")
    _converged(outer, f"{dim}+1 deficit integral on [u, 1] at A={A!r}")
    value = scale * (inner.value + outer.value)
    err = scale * (inner.abs_error_estimate + outer.abs_error_estimate)
    return value, err


def rate_difference_1p1(A: float) -> float:
    """Massless minus massive 1+1 rate, ``-(1/2) ln u(A)``.

    Both rates diverge; their difference is finite and equals
    ``asinh(2A) / 4`` in closed form.
    """
    A = _check_A(A)
    return 0.25 * math.asinh(2.0 * A)


def mean_transition_time_1p1(p: float) -> float:
    """Massless 1+1 transition time averaged over admissible final momenta.

    Final momenta ``p'`` range over ``[0, 1 - p]`` with transition time
    ``p + p'``, which averages to ``(1 + p) / 2``.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"momentum must lie in [0, 1], got {p!r}")
    return 0.5 * (1.0 + p)


def avg_rate_coefficient_1p1_massless() -> float:
    """``int_0^1 dp / mean_transition_time(p) = 2 ln 2``."""
    return 2.0 * math.log(2.0)


def avg_rate_1p1_quadrature(tol: float = 1e-12) -> float:
    """The averaged massless 1+1 coefficient by nested quadrature."""
    tol = _check_tol(tol)

    def mean_time(p: float) -> float:
        width = 1.0 - p
        if width <= 0.0:
            return p
        res = integrate(lambda q: p + q, 0.0, width, tol)
        return res.value / width

    res = integrate(lambda p: 1.0 / mean_time(p), 0.0, 1.0, tol)
    return _converged(res, "averaged 1+1 rate").value


def schwinger_exact_coefficient(dim: int, A: float) -> float:
    """``exp(-pi A)``, the exact rate relative to the same prefactor."""
    if dim not in (1, 2, 3):
        raise ValueError(f"dim must be 1, 2 or 3, got {dim!r}")
    return math.exp(-math.pi * _check_A(A))


def decrease_rate(dim: int, A: float, tol: float = DEFAULT_TOL) -> DecreaseResult:
    """Fractional decrease of the rate due to the mass.

    The model value is ``1 - C(A)/C(0)`` in 2+1 and 3+1; in 1+1 the finite
    rate difference is normalised by the averaged massless rate.  The exact
    value is ``1 - exp(-pi A)``.
    """
    A = _check_A(A)
    tol = _check_tol(tol)
    if dim not in (1, 2, 3):
        raise ValueError(f"dim must be 1, 2 or 3, got {dim!r}")
    exact = -math.expm1(-math.pi * A)
    if dim == 1:
        # the ratio passes 1 once A > 64, far outside the model's range
        delta = rate_difference_1p1(A) / avg_rate_coefficient_1p1_massless()
        return DecreaseResult(1, A, min(1.0, delta), exact)
    if A == 0.0:
        return DecreaseResult(dim, A, 0.0, exact)
    deficit, err = rate_deficit(dim, A, tol)
    c0 = _massless_coefficient(dim, tol).coefficient
    return DecreaseResult(dim, A, min(1.0, deficit / c0), exact, err / c0)


def _boundary_radius(cos_t: np.ndarray, A: float, r_power: int) -> np.ndarray:
    """Radius where each ray at angle ``t`` from the x axis leaves the admitted region.

    Found by bisection on the admission predicate alone.
    """
    bound = _transition.ADMISSION_BOUND

    def admitted(r):
        return _transition.admission_lhs(r * cos_t, r * r, A) <= bound

    lo = np.zeros_like(cos_t)
    hi = np.ones_like(cos_t)
    inside = admitted(hi)
    while inside.any():
        lo = np.where(inside, hi, lo)
        hi = np.where(inside, 2.0 * hi, hi)
        inside = admitted(hi)
    for _ in range(64):
        mid = 0.5 * (lo + hi)
        ok = admitted(mid)
        lo = np.where(ok, mid, lo)
        hi = np.where(ok, hi, mid)
    return 0.5 * (lo + hi)


def _oracle_sum(dim: int, A: float, n_cells: int) -> float:
    h = (math.pi if dim == 2 else 0.5 * math.pi) / n_cells
    start = -0.5 * math.pi if dim == 2 else 0.0
    t = start + (np.arange(n_cells) + 0.5) * h
    cos_t = np.cos(t)
    R = _boundary_radius(cos_t, A, dim - 1)
    if dim == 2:
        # polar: (p_x/|p|^2) r dr dphi = cos(phi) dr dphi
        integral = np.sum(cos_t * R) * h
    else:
        # spherical about x: (p_x/|p|^2) r^2 sin dr dtheta dpsi = r cos sin dr dtheta dpsi
        integral = 2.0 * math.pi * np.sum(cos_t * np.sin(t) * 0.5 * R * R) * h
    return 0.5 * float(integral)


def rate_region_oracle(dim: int, A: float, n_cells: int = 20_000, tol: float = 1e-4) -> float:
    """Rate coefficient by direct integration of ``p_x / |p|^2`` over the admitted region.

    Independent of the reduced one-dimensional forms: the momentum integral
    is taken in polar (2+1) or spherical (3+1) coordinates around the x axis,
    with a midpoint rule over ``n_cells`` angular cells and the radial extent
    of each cell located by bisection on the admission predicate.  A
    ResolutionWarning is issued if halving the resolution moves the result by
    more than ``10 * tol``.
    """
    A = _check_A(A)
    if dim not in (2, 3):
        raise ValueError(f"the region oracle covers dim 2 and 3, got {dim!r}")
    if n_cells < 10_000:
        raise ValueError(f"n_cells must be at least 10^4, got {n_cells}")
    fine = _oracle_sum(dim, A, n_cells)
    coarse = _oracle_sum(dim, A, n_cells // 2)
    if abs(fine - coarse) > 10.0 * tol:
        warnings.warn(
            f"region oracle unresolved at n_cells={n_cells}: refinement moved the result by "
            f"{abs(fine - coarse):.2e}",
            ResolutionWarning,
            stacklevel=2,
        )
    return fine


def small_mass_scaling(
    dim: int,
    sqrt_a_min: float = 1e-3,
    sqrt_a_max: float = 1e-2,
    points: int = 15,
    tol: float = DEFAULT_TOL,
) -> ScalingFit:
    """Least-squares fit of ``log delta_model`` against ``log sqrt(A)``.

    ``coefficient`` is ``delta_model / A`` at the smallest point, the model's
    counterpart of the exact small-mass slope ``pi``.
    """
    sqrt_a = np.geomspace(sqrt_a_min, sqrt_a_max, points)
    deltas = np.array([decrease_rate(dim, float(x * x), tol).delta_model for x in sqrt_a])
    slope, intercept = np.polyfit(np.log(sqrt_a), np.log(deltas), 1)
    return ScalingFit(float(slope), float(intercept), float(deltas[0] / sqrt_a[0] ** 2))
