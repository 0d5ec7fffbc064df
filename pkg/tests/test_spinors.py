"""Chiralities, operators and weak values."""

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weakpair.spinors import (
    DegenerateSelectionError,
    DegenerateStateError,
    build_chirality,
    hamiltonian,
    operator,
    selected_transition,
    selection_residual,
    spin_partner,
    velocity_operator,
    weak_value,
)

momentum = st.floats(-5.0, 5.0, allow_nan=False)
mass = st.floats(0.0, 3.0)
unit_complex = st.tuples(st.floats(-1, 1), st.floats(-1, 1)).map(lambda t: complex(*t))
spin = st.tuples(unit_complex, unit_complex).filter(lambda s: abs(s[0]) + abs(s[1]) > 1e-3)


def test_massless_2p1_examples():
    plus = build_chirality(2, 1, (1.0, 0.0))
    minus = build_chirality(2, -1, (1.0, 0.0))
    np.testing.assert_allclose(plus.components, np.array([1, 1]) / math.sqrt(2), atol=1e-15)
    np.testing.assert_allclose(minus.components, np.array([1, -1]) / math.sqrt(2), atol=1e-15)


def test_massive_1p1_example():
    chi = build_chirality(1, 1, (1.0,), sqrt_a=1.0)
    np.testing.assert_allclose(chi.components, [math.cos(math.pi / 8), math.sin(math.pi / 8)], atol=1e-15)


def test_weak_value_sigma_x_example():
    pre, post = selected_transition(2, (1.0, 1.0))
    assert weak_value(operator("sigma_x"), pre, post).require() == pytest.approx(math.sqrt(2), abs=1e-12)


def test_equal_pre_post_gives_expectation():
    chi = build_chirality(2, 1, (1.0, 0.0))
    assert weak_value(operator("sigma_x"), chi, chi).require() == pytest.approx(1.0, abs=1e-15)
    assert weak_value(operator("identity"), chi, chi).require() == pytest.approx(1.0, abs=1e-15)


def test_operators_are_hermitian_involutions():
    for label in ("sigma_x", "sigma_y", "sigma_z", "alpha_x", "alpha_y", "alpha_z", "beta"):
        m = operator(label).matrix
        np.testing.assert_allclose(m, m.conj().T)
        np.testing.assert_allclose(m @ m, np.eye(m.shape[0]), atol=1e-15)


def test_clifford_anticommutation_3p1():
    labels = ("alpha_x", "alpha_y", "alpha_z", "beta")
    for i, a in enumerate(labels):
        for b in labels[i + 1 :]:
            ma, mb = operator(a).matrix, operator(b).matrix
            np.testing.assert_allclose(ma @ mb + mb @ ma, 0, atol=1e-15)


def test_operator_is_read_only_and_lookup_errors():
    op = operator("sigma_x")
    with pytest.raises(ValueError):
        op.matrix[0, 0] = 2
    with pytest.raises(ValueError):
        operator("gamma_5")
    with pytest.raises(ValueError):
        operator("identity", 3)


@given(st.sampled_from([1, 2, 3]), st.sampled_from([1, -1]), st.lists(momentum, min_size=3, max_size=3), mass, spin)
@settings(max_examples=300, deadline=None)
def test_eigen_residual_and_norm(dim, sign, p, m, s):
    p = p[:dim]
    energy = math.sqrt(sum(c * c for c in p) + m * m)
    if energy < 1e-6:
        return
    chi = build_chirality(dim, sign, p, m, s if dim == 3 else None)
    assert chi.eigen_residual() <= 1e-12 * max(1.0, energy)
    assert abs(np.linalg.norm(chi.components) - 1.0) < 1e-14


@given(st.lists(momentum, min_size=2, max_size=2), mass)
@settings(max_examples=100, deadline=None)
def test_phase_convention(p, m):
    if math.hypot(*p) + m < 1e-6:
        return
    chi = build_chirality(2, 1, p, m)
    first = next(c for c in chi.components if abs(c) > 1e-14)
    assert abs(first.imag) < 1e-15 and first.real > 0


@given(st.floats(0.05, 3.0), st.floats(-3, 3), st.floats(-3, 3), mass, spin, st.floats(0, 2 * math.pi))
@settings(max_examples=100, deadline=None)
def test_weak_velocity_invariant_under_global_spin_phase(px, py, pz, m, s, phase):
    p = (px, py, pz)
    rot = cmath.exp(1j * phase)
    pre, post = selected_transition(3, p, m, s)
    pre2, post2 = selected_transition(3, p, m, (s[0] * rot, s[1] * rot), spin_partner((s[0] * rot, s[1] * rot)))
    v1 = weak_value(velocity_operator(3), pre, post)
    v2 = weak_value(velocity_operator(3), pre2, post2)
    if v1.degenerate:
        assert v2.degenerate
        return
    assert v1.value == pytest.approx(v2.value, abs=1e-9 * (1 + abs(v1.value)))


@given(st.floats(0.05, 3.0), st.floats(-3, 3), st.floats(-3, 3), mass, spin, spin)
@settings(max_examples=200, deadline=None)
def test_weak_velocity_law_for_any_spin_pair(px, py, pz, m, post_spin, pre_spin):
    p = (px, py, pz)
    pre, post = selected_transition(3, p, m, post_spin, pre_spin)
    wv = weak_value(velocity_operator(3), pre, post)
    if wv.degenerate or abs(wv.overlap) < 1e-6:
        return
    energy = math.sqrt(px * px + py * py + pz * pz + m * m)
    assert wv.value == pytest.approx(energy / px, abs=1e-12 * energy / px / abs(wv.overlap))


def test_default_3p1_spin_pairing_is_not_orthogonal():
    pre, post = selected_transition(3, (0.3, 0.1, -0.2), 0.5)
    wv = weak_value(velocity_operator(3), pre, post)
    assert not wv.degenerate
    # with the same (1, 0) on both sides the overlap vanishes identically
    pre_same, post_same = selected_transition(3, (0.3, 0.1, -0.2), 0.5, (1, 0), (1, 0))
    assert weak_value(velocity_operator(3), pre_same, post_same).degenerate


def test_orthogonal_selection_raises():
    pre, post = selected_transition(3, (0.3, 0.0, 0.0), 0.0, (1, 0), (1, 0))
    with pytest.raises(DegenerateSelectionError):
        weak_value(velocity_operator(3), pre, post).require()
    with pytest.raises(DegenerateSelectionError):
        selection_residual(3, (0.3, 0.0, 0.0), 0.0, (1, 0), (1, 0))


def test_degenerate_state_and_bad_inputs():
    with pytest.raises(DegenerateStateError):
        build_chirality(2, 1, (0.0, 0.0))
    with pytest.raises(ValueError):
        build_chirality(2, 0, (1.0, 0.0))
    with pytest.raises(ValueError):
        build_chirality(2, 1, (1.0,))
    with pytest.raises(ValueError):
        build_chirality(2, 1, (1.0, 0.0), spin_coeffs=(1, 0))
    with pytest.raises(ValueError):
        build_chirality(3, 1, (1.0, 0.0, 0.0), spin_coeffs=(0, 0))
    with pytest.raises(ValueError):
        selected_transition(2, (0.0, 1.0))
    with pytest.raises(ValueError):
        weak_value(operator("alpha_x"), *selected_transition(2, (1.0, 1.0)))


def test_massive_zero_momentum_is_defined():
    chi = build_chirality(3, 1, (0.0, 0.0, 0.0), 1.0)
    assert chi.eigen_residual() < 1e-15


@given(st.floats(1e-3, 0.5), st.floats(-0.4, 0.4), st.floats(0.0, 1.0))
@settings(max_examples=200, deadline=None)
def test_selection_rule_2p1(px, py, A):
    res = selection_residual(2, (px, py), math.sqrt(A))
    energy = math.sqrt(px * px + py * py + A)
    assert res <= 1e-13 * max(1.0, math.sqrt(A) * abs(py)) * energy / px


def test_hamiltonian_squares_to_energy():
    h = hamiltonian(3, (0.3, -0.4, 1.2), 0.7)
    e2 = 0.09 + 0.16 + 1.44 + 0.49
    np.testing.assert_allclose(h @ h, e2 * np.eye(4), atol=1e-14)
