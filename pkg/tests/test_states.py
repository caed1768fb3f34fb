from __future__ import annotations

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qutrit_cad.channels import ChannelParams, cad_apply
from qutrit_cad.errors import NotNormalized
from qutrit_cad.states import (
    StateAmplitudes,
    StateClass,
    make_ket,
    make_state,
    negativity,
    random_density_matrix,
    validate_density,
)

from .oracles import CLASS1, CLASS2, eig_negativity

# class-2 negativity under uncorrelated damping, from the oracle module (eigvalsh)
CLASS2_UNCORRELATED = {0.4: 0.3361249694973144, 0.5: 0.22513017655970236}


def test_product_state_ket():
    rho = make_state(StateClass.CLASS1, StateAmplitudes(1.0, 0, 0))
    assert rho[0, 0] == 1
    assert np.count_nonzero(rho) == 1


@pytest.mark.parametrize(
    "cls, indices, oracle",
    [(StateClass.CLASS1, (0, 4, 8), CLASS1), (StateClass.CLASS2, (2, 6, 4), CLASS2)],
)
def test_balanced_states(cls, indices, oracle):
    rho = make_state(cls)
    block = rho[np.ix_(indices, indices)]
    np.testing.assert_allclose(block, np.full((3, 3), 1 / 3), atol=1e-15)
    assert np.count_nonzero(np.abs(rho) > 1e-15) == 9
    np.testing.assert_allclose(rho, oracle, atol=1e-15)


def test_amplitudes_must_be_normalized():
    with pytest.raises(NotNormalized):
        StateAmplitudes(1.0, 1.0, 0.0)
    with pytest.raises(NotNormalized):
        StateAmplitudes(-1.0, 0.0, 0.0)
    with pytest.raises(NotNormalized):
        StateAmplitudes.normalized(0.0, 0.0, 0.0)


def test_normalized_rescales():
    amps = StateAmplitudes.normalized(1.0, 1j, 1.0)
    assert amps.alpha == pytest.approx(1 / math.sqrt(3))
    assert amps.beta == pytest.approx(1j / math.sqrt(3))


def test_make_ket_accepts_enum_value():
    np.testing.assert_array_equal(make_ket("class2"), make_ket(StateClass.CLASS2))


def test_validate_density_examples():
    assert validate_density(make_state(StateClass.CLASS1)).ok
    report = validate_density(np.eye(9))
    assert not report.unit_trace and report.hermitian and report.failures() == ["unit_trace"]
    coherence = np.zeros((9, 9))
    coherence[0, 4] = 1
    assert "hermitian" in validate_density(coherence).failures()
    negative = np.diag([1.5, -0.5] + [0] * 7)
    assert validate_density(negative).failures() == ["positive"]


def test_random_density_matrix_is_valid():
    rng = np.random.default_rng(0)
    for rank in (None, 1, 3):
        assert validate_density(random_density_matrix(rng, 9, rank)).ok


def test_negativity_examples():
    zero = np.zeros((9, 9))
    zero[0, 0] = 1
    assert negativity(zero) == 0
    assert negativity(make_state(StateClass.CLASS1)) == pytest.approx(1.0, abs=1e-12)
    assert negativity(np.eye(9) / 9) == 0


def test_negativity_of_product_states():
    rng = np.random.default_rng(1)
    for _ in range(20):
        prod = np.kron(random_density_matrix(rng, 3), random_density_matrix(rng, 3))
        assert negativity(prod) < 1e-10


def test_negativity_matches_eigvalsh_oracle():
    rng = np.random.default_rng(2)
    for _ in range(30):
        rho = random_density_matrix(rng, 9, rank=int(rng.integers(1, 4)))
        assert negativity(rho) == pytest.approx(max(0.0, eig_negativity(rho)), abs=1e-11)


@settings(max_examples=60, deadline=None)
@given(
    st.floats(0.05, 1.0), st.floats(0.05, 1.0), st.floats(0.05, 1.0),
    st.floats(0, 2 * math.pi), st.floats(0, 2 * math.pi), st.sampled_from(list(StateClass)),
)
def test_negativity_ignores_phases_and_conjugation(a, b, c, phi_b, phi_g, cls):
    base = make_state(cls, StateAmplitudes.normalized(a, b, c))
    phased = StateAmplitudes.normalized(a, b * cmath.exp(1j * phi_b), c * cmath.exp(1j * phi_g))
    conj = StateAmplitudes(phased.alpha, phased.beta.conjugate(), phased.gamma.conjugate())
    n = negativity(base)
    assert negativity(make_state(cls, phased)) == pytest.approx(n, abs=1e-10)
    assert negativity(make_state(cls, conj)) == pytest.approx(n, abs=1e-10)


def test_class1_uncorrelated_decay_is_quadratic():
    for d in np.linspace(0, 1, 11):
        n = negativity(cad_apply(make_state(StateClass.CLASS1), ChannelParams(d, d, 0.0)))
        assert n == pytest.approx((1 - d) ** 2, abs=1e-10)


def test_class2_uncorrelated_decay_frozen_values():
    for d, expected in CLASS2_UNCORRELATED.items():
        n = negativity(cad_apply(make_state(StateClass.CLASS2), ChannelParams(d, d, 0.0)))
        assert n == pytest.approx(expected, abs=1e-12)


def test_uncorrelated_decay_shared_shape():
    # what does hold for both classes at mu = 0: same endpoints, strictly
    # decreasing, and no finite-d sudden death
    ds = np.linspace(0, 1, 11)
    curves = [
        [negativity(cad_apply(make_state(cls), ChannelParams(d, d, 0.0))) for d in ds]
        for cls in StateClass
    ]
    for curve in curves:
        assert curve[0] == pytest.approx(1.0, abs=1e-12)
        assert curve[-1] < 1e-10
        assert all(b < a for a, b in zip(curve, curve[1:]))
        assert all(v > 0 for v in curve[:-1])


@pytest.mark.xfail(
    strict=True,
    reason="the two classes do not decay identically at mu = 0: Class2 lies below "
    "(1-d)^2 by up to 2.5e-2 (independently confirmed with eigvalsh)",
)
def test_uncorrelated_decay_identical_for_both_classes():
    for d in np.linspace(0, 1, 11):
        ch = ChannelParams(d, d, 0.0)
        n1 = negativity(cad_apply(make_state(StateClass.CLASS1), ch))
        n2 = negativity(cad_apply(make_state(StateClass.CLASS2), ch))
        assert abs(n1 - n2) < 1e-10
