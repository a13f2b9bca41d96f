import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lierf.algebra import Coefficient, ip
from lierf.kernels.fields import eval_ip, gimel_transform, relative_error
from lierf.kernels.grid import MomentumGrid
from lierf.kernels.library import PHASES, random_test_function, shell_kernel
from lierf.kernels.moments import (connected_coefficient, fourth_moment_closed_form, moment,
                                   moment_complex, moment_polynomial, reduction_residual)

GRID = MomentumGrid(2, 32, 0.25)


def real_f(seed, scale=0.3):
    return scale * random_test_function(GRID, np.random.default_rng(seed), real=True)


def two_point(f, k):
    h = gimel_transform(f, k)
    return eval_ip([h], [h], k.lam).real


def test_moment_polynomial_low_orders():
    assert moment_polynomial(0) == 1
    assert moment_polynomial(1).is_zero()
    assert moment_polynomial(2) == Coefficient.symbol(ip(["f"], ["f"]))
    with pytest.raises(ValueError):
        moment_polynomial(7)


def test_second_moment_is_two_point():
    k = shell_kernel(GRID, 1j, 0.7)
    f = real_f(0)
    assert moment(f, 2, k) == pytest.approx(two_point(f, k))


@pytest.mark.parametrize("name", sorted(PHASES))
def test_fourth_moment_closed_form(name):
    k = shell_kernel(GRID, PHASES[name], 0.7)
    f = real_f(1)
    assert relative_error(moment_complex(f, 4, k), fourth_moment_closed_form(f, k)) <= 1e-10
    assert reduction_residual(f, k) <= 1e-10


@settings(max_examples=15)
@given(st.floats(0, 2 * math.pi), st.integers(0, 2 ** 32 - 1))
def test_fourth_moment_closed_form_any_phase(theta, seed):
    k = shell_kernel(GRID, cmath.exp(1j * theta), 0.5)
    f = real_f(seed)
    assert relative_error(moment_complex(f, 4, k), fourth_moment_closed_form(f, k)) <= 1e-10


def test_real_moments_are_real():
    k = shell_kernel(GRID, PHASES["cpi4"], 0.7)
    f = real_f(2)
    for order in range(1, 7):
        v = moment_complex(f, order, k)
        assert abs(v.imag) <= 1e-10 * max(1.0, abs(v))


@pytest.mark.parametrize("kk", [1, 2, 3])
def test_free_field_moments(kk):
    k = shell_kernel(GRID, PHASES["ci"], 0.0)
    f = real_f(3)
    want = math.prod(range(1, 2 * kk, 2)) * two_point(f, k) ** kk
    assert moment(f, 2 * kk, k) == pytest.approx(want, rel=1e-12)
    assert moment(f, 2 * kk - 1, k) == 0.0


def test_connected_coefficient_range_and_sign():
    coeffs = [connected_coefficient(cmath.exp(1j * math.pi * j / 8)) for j in range(17)]
    assert max(coeffs) == pytest.approx(6.0)
    assert min(coeffs) == pytest.approx(2.0)
    for j in range(9):
        c = cmath.exp(1j * math.pi * j / 8)
        k = shell_kernel(GRID, c, 0.7)
        h = gimel_transform(real_f(4), k)
        assert connected_coefficient(c) * eval_ip([h, h], [h, h], 0.7).real >= 0


def test_fourth_moment_depends_on_phase_second_does_not():
    f = real_f(5)
    m2 = [moment(f, 2, shell_kernel(GRID, c, 0.7)) for c in PHASES.values()]
    m4 = [moment(f, 4, shell_kernel(GRID, c, 0.7)) for c in PHASES.values()]
    assert max(m2) - min(m2) <= 1e-12 * max(m2)
    assert max(m4) - min(m4) > 1e-6 * max(m4)


def test_closed_form_needs_phase():
    k = shell_kernel(GRID, 1.0, 0.7)
    k.c = None
    with pytest.raises(ValueError):
        fourth_moment_closed_form(real_f(6), k)
