"""Self-check suite behind ``weakpair verify``.

Each check returns ``(passed, detail)``; :func:`run_checks` collects them into
a JSON-serialisable summary.
"""

from __future__ import annotations

import math
import random
import time
from typing import Callable

import numpy as np

from . import transition
from .quadrature import beta
from .rates import (
    arctan_integrand,
    avg_rate_1p1_quadrature,
    avg_rate_coefficient_1p1_massless,
    decrease_rate,
    log_argument,
    rate_coefficient,
    rate_region_oracle,
    small_mass_scaling,
    upper_bound_u,
)
from .spinors import (
    build_chirality,
    operator,
    selected_transition,
    selection_residual,
    velocity_operator,
    weak_value,
)

EPS = np.finfo(float).eps
# multiple of eps / |<post|pre>| allowed for round-off in weak-value identities
ROUNDOFF_FACTOR = 16.0

Check = Callable[[bool], tuple[bool, str]]


def _random_spin(rng: random.Random) -> tuple[complex, complex]:
    z = [rng.gauss(0.0, 1.0) for _ in range(4)]
    return complex(z[0], z[1]), complex(z[2], z[3])


def weak_value_errors(dim: int, p, A: float, spin=None, pre_spin=None) -> dict:
    """Selection residual, weak-velocity error and their round-off allowances."""
    sqrt_a = math.sqrt(A)
    pre, post = selected_transition(dim, p, sqrt_a, spin, pre_spin)
    wv = weak_value(velocity_operator(dim), pre, post)
    value = wv.require()
    conditioning = EPS / abs(wv.overlap)
    velocity = pre.energy / p[0]
    transverse = math.sqrt(math.fsum(c * c for c in p[1:]))
    return {
        "residual": selection_residual(dim, p, sqrt_a, spin, pre_spin),
        "residual_allowance": ROUNDOFF_FACTOR * conditioning * max(1.0, sqrt_a * transverse),
        "velocity_error": abs(value - velocity),
        "velocity_allowance": ROUNDOFF_FACTOR * conditioning * max(1.0, velocity),
    }


def check_massless_coefficients(full: bool) -> tuple[bool, str]:
    c2 = rate_coefficient(2, 0.0, 1e-8).coefficient
    c3 = rate_coefficient(3, 0.0, 1e-8).coefficient
    e2 = abs(c2 - beta(0.5, 0.75) / 4.0)
    e3 = abs(c3 - math.pi / 8.0)
    return e2 < 1e-7 and e3 < 1e-7, f"|C2(0)-B/4|={e2:.2e}, |C3(0)-pi/8|={e3:.2e}"


def check_closed_form_1p1(full: bool) -> tuple[bool, str]:
    d = decrease_rate(1, 0.375).delta_model
    avg = avg_rate_1p1_quadrature()
    e_avg = abs(avg - avg_rate_coefficient_1p1_massless())
    return abs(d - 0.125) < 1e-12 and e_avg < 1e-10, f"delta(3/8)={d!r}, |avg-2ln2|={e_avg:.2e}"


def check_endpoint_identities(full: bool) -> tuple[bool, str]:
    worst = 0.0
    for A in (0.0, 0.1, 1.0):
        u = upper_bound_u(A)
        worst = max(worst, abs(u**4 + 4 * A * u * u - 1.0), abs(arctan_integrand(u, A)), abs(log_argument(u, A) - 1.0))
    return worst < 1e-14, f"max deviation {worst:.2e}"


def check_region_boundary(full: bool) -> tuple[bool, str]:
    field0 = transition.FieldParam(0.0, 2)
    on_edge = transition.kinematics((0.5, 0.0), field0).admitted
    outside = transition.kinematics((0.6, 0.0), field0).admitted
    rng = random.Random(7)
    mismatches = 0
    n = 20000 if full else 2000
    for _ in range(n):
        dim = rng.choice((1, 2, 3))
        A = rng.uniform(0.0, 2.0)
        p = (rng.uniform(1e-3, 1.0),) + tuple(rng.uniform(-2.0, 2.0) for _ in range(dim - 1))
        k = transition.kinematics(p, transition.FieldParam(A, dim))
        # admitted <=> 4 p_x E <= 1, with a relative margin for rounding at the edge
        margin = 4.0 * p[0] * k.energy - 1.0
        if abs(margin) > 1e-12 and k.admitted != (margin <= 0.0):
            mismatches += 1
    ok = on_edge and not outside and mismatches == 0
    return ok, f"edge admitted={on_edge}, (0.6,0) admitted={outside}, dt/delta-t mismatches={mismatches}/{n}"


def check_eigen_residual(full: bool) -> tuple[bool, str]:
    rng = random.Random(11)
    worst = 0.0
    n = 10000 if full else 1000
    for _ in range(n):
        dim = rng.choice((1, 2, 3))
        p = tuple(rng.uniform(-3.0, 3.0) for _ in range(dim))
        A = rng.uniform(0.0, 4.0)
        sign = rng.choice((1, -1))
        spin = _random_spin(rng) if dim == 3 else None
        chi = build_chirality(dim, sign, p, math.sqrt(A), spin)
        scale = max(1.0, chi.energy)
        worst = max(worst, chi.eigen_residual() / scale, abs(np.linalg.norm(chi.components) - 1.0))
    return worst < 1e-12, f"max scaled residual {worst:.2e} over {n} states"


def _weak_value_suite(full: bool):
    rng = random.Random(3)
    n = 10000 if full else 1000
    for dim in (1, 2, 3):
        for p, A in transition.sample_admitted(dim, n, rng):
            if dim == 3:
                yield dim, p, A, weak_value_errors(dim, p, A, _random_spin(rng), _random_spin(rng))
            else:
                yield dim, p, A, weak_value_errors(dim, p, A)


def check_selection_rule(full: bool) -> tuple[bool, str]:
    bad = 0
    worst = 0.0
    count = 0
    for _, _, _, e in _weak_value_suite(full):
        count += 1
        worst = max(worst, e["residual"])
        bad += e["residual"] > e["residual_allowance"]
    return bad == 0, f"{bad}/{count} above round-off allowance, max |residual| {worst:.2e}"


def check_weak_velocity(full: bool) -> tuple[bool, str]:
    bad = 0
    count = 0
    for _, _, _, e in _weak_value_suite(full):
        count += 1
        bad += e["velocity_error"] > e["velocity_allowance"]
    return bad == 0, f"{bad}/{count} above round-off allowance"


def check_velocity_consistency(full: bool) -> tuple[bool, str]:
    rng = random.Random(5)
    bad = 0
    worst = 0.0
    n = 2000 if full else 200
    for dim in (1, 2, 3):
        for p, A in transition.sample_admitted(dim, n, rng):
            res = transition.velocity_consistency_residual(dim, p, transition.FieldParam(A, dim))
            # T <= 1 multiplies the weak value, so its allowance carries over
            bad += res > weak_value_errors(dim, p, A)["velocity_allowance"]
            worst = max(worst, res)
    return bad == 0, f"{bad}/{3 * n} above round-off allowance, max residual {worst:.2e}"


def check_weak_value_examples(full: bool) -> tuple[bool, str]:
    pre, post = selected_transition(2, (1.0, 1.0))
    w2 = weak_value(operator("sigma_x"), pre, post).require()
    chi = build_chirality(2, 1, (1.0, 0.0))
    w_eq = weak_value(operator("sigma_x"), chi, chi).require()
    w_id = weak_value(operator("identity"), chi, chi).require()
    errs = (abs(w2 - math.sqrt(2.0)), abs(w_eq - 1.0), abs(w_id - 1.0))
    return max(errs) < 1e-12, "errors " + ", ".join(f"{e:.1e}" for e in errs)


def check_oracle_equivalence(full: bool) -> tuple[bool, str]:
    values = (0.0, 0.01, 0.1, 1.0) if full else (0.1,)
    worst = 0.0
    for dim in (2, 3):
        for A in values:
            worst = max(worst, abs(rate_region_oracle(dim, A, 10_000) - rate_coefficient(dim, A).coefficient))
    return worst < 1e-3, f"max |oracle - reduced| {worst:.2e}"


def check_monotonicity(full: bool) -> tuple[bool, str]:
    grid = np.geomspace(1e-4, 10.0, 100 if full else 20)
    ok = True
    for dim in (1, 2, 3):
        deltas = [decrease_rate(dim, float(A)).delta_model for A in grid]
        ok &= all(b > a for a, b in zip(deltas, deltas[1:]))
        ok &= all(0.0 <= d <= 1.0 for d in deltas)
        if dim != 1:
            coeffs = [rate_coefficient(dim, float(A)).coefficient for A in grid]
            ok &= all(b < a for a, b in zip(coeffs, coeffs[1:]))
    return bool(ok), f"{len(grid)} A values per dimension"


def check_small_mass_scaling(full: bool) -> tuple[bool, str]:
    points = 15 if full else 5
    slopes = {dim: small_mass_scaling(dim, points=points).slope for dim in (1, 2, 3)}
    ok = all(abs(s - 2.0) <= 0.05 for s in slopes.values())
    return ok, ", ".join(f"dim {d}: slope {s:.4f}" for d, s in slopes.items())


CHECKS: dict[str, Check] = {
    "massless-coefficients": check_massless_coefficients,
    "closed-form-1p1": check_closed_form_1p1,
    "endpoint-identities": check_endpoint_identities,
    "region-boundary": check_region_boundary,
    "eigen-residual": check_eigen_residual,
    "selection-rule": check_selection_rule,
    "weak-velocity": check_weak_velocity,
    "velocity-consistency": check_velocity_consistency,
    "weak-value-examples": check_weak_value_examples,
    "oracle-equivalence": check_oracle_equivalence,
    "monotonicity": check_monotonicity,
    "small-mass-scaling": check_small_mass_scaling,
}


def run_checks(full: bool = False) -> dict:
    results = []
    for name, check in CHECKS.items():
        start = time.perf_counter()
        try:
            passed, detail = check(full)
        except Exception as exc:  # a crashing check is a failing check
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(
            {
                "name": name,
                "passed": bool(passed),
                "detail": detail,
                "seconds": round(time.perf_counter() - start, 3),
            }
        )
    failed = [r["name"] for r in results if not r["passed"]]
    return {"mode": "full" if full else "quick", "passed": not failed, "failed": failed, "checks": results}
