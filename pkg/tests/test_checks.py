import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lierf.kernels.checks import (Classification, commutator_details, commutator_residual,
                                  kernel_symmetry_check, spectrum_support_classify)
from lierf.kernels.fields import DegenerateKernelError, KernelSpec, eval_xi, gimel_transform, pairing
from lierf.kernels.grid import MomentumGrid, reflect
from lierf.kernels.io import SHIPPED, load_shipped
from lierf.kernels.library import (DEFAULT_GRID, PHASES, broken_kernel, conjugate_test_function,
                                   forward_cone_kernel, noise_kernel, phase_kernel,
                                   random_test_function, shell_kernel, shell_profile)

SMALL = MomentumGrid(2, 16, 0.35)


# kernel symmetry

def test_real_even_kernel_has_unit_phase():
    k = KernelSpec(DEFAULT_GRID, shell_profile(DEFAULT_GRID))
    res = kernel_symmetry_check(k)
    assert res.passed
    assert abs(res.c - 1) < 1e-14
    assert res.residual == 0.0


@pytest.mark.parametrize("const", [0.0, 0.8, -2.1, math.pi / 2])
def test_phase_kernel_recovers_constant(const):
    k = phase_kernel(SMALL, lambda v: np.sin(1.3 * v[0]) + 0.4 * v[1] ** 3 + 0.2 * v[0] * v[1], const)
    res = kernel_symmetry_check(k)
    assert res.passed
    assert abs(res.c - cmath.exp(1j * const)) < 1e-12


@pytest.mark.parametrize("name", sorted(PHASES))
def test_shell_kernels_declare_their_phase(name):
    k = shell_kernel(DEFAULT_GRID, PHASES[name])
    res = kernel_symmetry_check(k)
    assert res.passed
    assert abs(res.c - PHASES[name]) < 1e-12


def test_noise_kernel_fails_symmetry():
    k = noise_kernel(SMALL, np.random.default_rng(0))
    res = kernel_symmetry_check(k)
    assert not res.passed
    assert res.residual > 1e-3


def test_zero_kernel_is_degenerate():
    with pytest.raises(DegenerateKernelError):
        kernel_symmetry_check(KernelSpec(SMALL, np.zeros(SMALL.shape)))


def test_symmetry_result_as_dict():
    d = kernel_symmetry_check(shell_kernel(SMALL)).as_dict()
    assert set(d) == {"c", "residual", "tolerance", "pass"}


# commutator triviality

@pytest.mark.parametrize("name", sorted(PHASES))
def test_symmetric_kernels_have_trivial_commutator(name):
    k = shell_kernel(DEFAULT_GRID, PHASES[name])
    assert commutator_residual(k) <= 1e-12


def test_broken_kernel_commutator_is_large():
    det = commutator_details(broken_kernel(DEFAULT_GRID))
    assert det.residual > 1e-3
    assert det.integral > 1e-3
    assert det.symmetry_defect > 1e-3


def test_zero_shift_slice_vanishes_when_modulus_is_even():
    # |G(z/2)|^2 is even in z whenever |G| is, including for the symmetric kernels
    k = shell_kernel(SMALL, 1j)
    assert commutator_details(k, shifts=[(0, 0)]).zero_shift <= 1e-12
    rng = np.random.default_rng(2)
    phase = np.exp(1j * rng.uniform(0, 2 * np.pi, SMALL.shape))
    even_mod = shell_profile(SMALL) * phase  # even modulus, arbitrary phase
    det = commutator_details(KernelSpec(SMALL, even_mod), shifts=[(0, 0)])
    assert det.zero_shift <= 1e-12


def test_zero_shift_slice_detects_odd_modulus():
    det = commutator_details(broken_kernel(DEFAULT_GRID), shifts=[(0, 0)])
    assert det.zero_shift > 1e-3


@settings(max_examples=10)
@given(st.floats(0, 2 * math.pi), st.floats(0.1, 2.0), st.floats(0.5, 2.0))
def test_symmetric_family_is_trivial(theta, beta, kappa):
    k = shell_kernel(SMALL, cmath.exp(1j * theta), beta=beta, kappa=kappa)
    assert kernel_symmetry_check(k).passed
    assert commutator_residual(k, shifts=[(0, 0), (1, 3), (5, 7), (15, 2)]) <= 1e-12


def test_commutator_of_zero_kernel_is_zero():
    assert commutator_residual(KernelSpec(SMALL, np.zeros(SMALL.shape))) == 0.0


# classification

def test_classification_examples():
    assert spectrum_support_classify(KernelSpec(DEFAULT_GRID, shell_profile(DEFAULT_GRID))) \
        == Classification.RANDOM_FIELD
    cone = spectrum_support_classify(forward_cone_kernel(DEFAULT_GRID))
    assert cone == Classification.SPECTRUM_CONDITION
    assert cone != Classification.RANDOM_FIELD
    assert spectrum_support_classify(broken_kernel(DEFAULT_GRID)) == Classification.NEITHER
    assert spectrum_support_classify(KernelSpec(SMALL, np.zeros(SMALL.shape))) == Classification.NEITHER


def test_forward_cone_kernel_fails_symmetry():
    assert not kernel_symmetry_check(forward_cone_kernel(DEFAULT_GRID)).passed


# observables commute for symmetric kernels

@pytest.mark.parametrize("name", sorted(PHASES))
def test_observable_commutativity(name):
    rng = np.random.default_rng(3)
    k = shell_kernel(SMALL, PHASES[name], 0.7)
    f, g = random_test_function(SMALL, rng), random_test_function(SMALL, rng)
    fs, gs = conjugate_test_function(f), conjugate_test_function(g)
    hf, hg, hfs, hgs = (gimel_transform(x, k) for x in (f, g, fs, gs))
    a, b = pairing(hfs, hg), pairing(hgs, hf)
    assert abs(a - b) <= 1e-12 * max(abs(a), 1.0)
    xa, xb = eval_xi(hfs, hg, 0.7).values, eval_xi(hgs, hf, 0.7).values
    assert np.max(np.abs(xa - xb)) <= 1e-12 * np.max(np.abs(xa))


def test_observables_fail_to_commute_for_broken_kernel():
    rng = np.random.default_rng(4)
    k = broken_kernel(DEFAULT_GRID, 0.7)
    f, g = random_test_function(DEFAULT_GRID, rng), random_test_function(DEFAULT_GRID, rng)
    hfs = gimel_transform(conjugate_test_function(f), k)
    hgs = gimel_transform(conjugate_test_function(g), k)
    a = pairing(hfs, gimel_transform(g, k))
    b = pairing(hgs, gimel_transform(f, k))
    assert abs(a - b) > 1e-3 * abs(a)


def test_conjugate_test_function_is_involution():
    f = random_test_function(SMALL, np.random.default_rng(5))
    assert np.array_equal(conjugate_test_function(conjugate_test_function(f)), f)
    assert np.array_equal(conjugate_test_function(f), np.conj(reflect(f)))


# shipped fixtures

@pytest.mark.parametrize("name", SHIPPED)
def test_shipped_fixture_behaviour(name):
    k = load_shipped(name)
    assert k.grid == DEFAULT_GRID
    if name == "broken":
        assert commutator_residual(k) > 1e-3
    else:
        assert commutator_residual(k) <= 1e-12
        assert abs(kernel_symmetry_check(k).c - k.c) < 1e-12
