import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lierf.algebra import Coefficient, UndefinedInnerProductError, ip
from lierf.kernels.fields import (GimelField, IPBinding, KernelSpec, UnboundGeneratorError,
                                  eval_ip, eval_ip_nested, eval_xi, gimel_transform, pairing,
                                  relative_error)
from lierf.kernels.grid import GridMismatchError, MomentumGrid, reflect, shift
from lierf.kernels.library import mass_shell_indicator, random_test_function, shell_kernel

TINY = MomentumGrid(2, 4, 0.5)
SMALL = MomentumGrid(2, 8, 0.5)


def random_field(grid, rng):
    return GimelField(grid, rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape))


def brute_ip(anti, lin, lam):
    """Enumerate every momentum tuple with the last linear momentum fixed by conservation."""
    grid = anti[0].grid
    pts = list(np.ndindex(*grid.shape))
    n = grid.n
    total = 0j
    free = len(anti) + len(lin) - 1
    for combo in itertools.product(pts, repeat=free):
        us, vs = combo[:len(anti)], combo[len(anti):]
        last = tuple((sum(u[a] for u in us) - sum(v[a] for v in vs)) % n for a in range(grid.dimension))
        term = 1 + 0j
        for h, u in zip(anti, us):
            term *= np.conj(h.values[u])
        for h, v in zip(lin, vs + (last,)):
            term *= h.values[v]
        total += term
    return total * lam ** (len(anti) + len(lin) - 2)


# grid

def test_grid_closed_under_negation():
    g = MomentumGrid(2, 8, 0.3)
    mom = g.momenta
    neg = reflect(mom, axes=(1, 2))
    interior = ~g.nyquist_mask()
    assert np.allclose(neg[:, interior], -mom[:, interior])


def test_grid_index_arithmetic_is_modular():
    g = MomentumGrid(1, 8, 1.0)
    assert g.index_of([-1]) == (7,)
    assert g.index_of([9]) == (1,)
    vals = np.arange(8.0)
    assert np.array_equal(shift(vals, (3,)), np.roll(vals, -3))


def test_grid_rejects_odd_points():
    with pytest.raises(ValueError):
        MomentumGrid(2, 7, 0.5)


def test_grid_json_round_trip():
    g = MomentumGrid(3, 6, 0.125)
    assert MomentumGrid.from_json(g.to_json()) == g


# gimel transform

def test_gimel_zero_and_identity_kernel():
    rng = np.random.default_rng(0)
    k = KernelSpec(SMALL, np.ones(SMALL.shape))
    f = rng.standard_normal(SMALL.shape) + 1j * rng.standard_normal(SMALL.shape)
    assert np.array_equal(gimel_transform(f, k).values, f)
    assert not np.any(gimel_transform(np.zeros(SMALL.shape), k).values)


def test_mass_shell_projects_off_shell_functions_to_zero():
    grid = MomentumGrid(2, 32, 0.25)
    k = mass_shell_indicator(grid, mass=1.0)
    off = np.abs(grid.minkowski_square() - 1.0) > 2 * grid.spacing
    f = np.where(off, 1.0 + 0.5j, 0.0)
    h = gimel_transform(f, k)
    assert not np.any(h.values)
    assert eval_ip([h], [h], 1.0) == 0


def test_gimel_grid_mismatch():
    k = KernelSpec(SMALL, np.ones(SMALL.shape))
    with pytest.raises(GridMismatchError):
        gimel_transform(np.ones(TINY.shape), k)


def test_gimel_linear():
    rng = np.random.default_rng(1)
    k = shell_kernel(SMALL)
    f, g = rng.standard_normal(SMALL.shape), rng.standard_normal(SMALL.shape)
    lhs = gimel_transform(2 * f + 3j * g, k).values
    rhs = 2 * gimel_transform(f, k).values + 3j * gimel_transform(g, k).values
    assert np.allclose(lhs, rhs)


def test_kernel_rejects_complex_coupling_and_bad_phase():
    with pytest.raises(ValueError):
        KernelSpec(SMALL, np.ones(SMALL.shape), lam=1 + 1j)
    with pytest.raises(ValueError):
        KernelSpec(SMALL, np.ones(SMALL.shape), c=2.0)


# structure function

def test_eval_xi_free_field_is_zero():
    rng = np.random.default_rng(2)
    f, g = random_field(SMALL, rng), random_field(SMALL, rng)
    assert not np.any(eval_xi(f, g, 0.0).values)


def test_eval_xi_matches_direct_sum():
    rng = np.random.default_rng(3)
    f, g = random_field(TINY, rng), random_field(TINY, rng)
    got = eval_xi(f, g, 0.6).values
    for s in np.ndindex(*TINY.shape):
        want = 0.6 * np.sum(np.conj(f.values) * shift(g.values, s))
        assert abs(got[s] - want) < 1e-12


def test_eval_xi_zero_shift_is_norm():
    rng = np.random.default_rng(4)
    f = GimelField(SMALL, random_test_function(SMALL, rng, real=True))
    v = eval_xi(f, f, 0.8).values[(0, 0)]
    assert abs(v.imag) < 1e-12
    assert v.real == pytest.approx(0.8 * np.sum(np.abs(f.values) ** 2))
    assert v.real >= 0


def test_eval_xi_swap_conjugates_reflected():
    rng = np.random.default_rng(5)
    f, g = random_field(SMALL, rng), random_field(SMALL, rng)
    a = eval_xi(f, g, 0.7).values
    b = eval_xi(g, f, 0.7).values
    assert np.allclose(a, np.conj(reflect(b)), atol=1e-12)


# inner products

def test_ip_single_is_pairing_without_lambda():
    rng = np.random.default_rng(6)
    f, g = random_field(SMALL, rng), random_field(SMALL, rng)
    assert eval_ip([f], [g], 0.3) == pytest.approx(np.vdot(f.values, g.values))
    assert eval_ip([f], [g], 0.0) == pytest.approx(pairing(f, g))


def test_ip_empty_slot_raises():
    f = GimelField(SMALL, np.ones(SMALL.shape))
    with pytest.raises(UndefinedInnerProductError):
        eval_ip([], [f], 1.0)
    with pytest.raises(UndefinedInnerProductError):
        eval_ip_nested([f], [], 1.0)


def test_ip_zero_fields():
    z = GimelField(SMALL, np.zeros(SMALL.shape))
    assert eval_ip([z, z], [z], 0.5) == 0


def test_ip_of_structure_function_absorbs_one_lambda():
    rng = np.random.default_rng(7)
    w, f, g = (random_field(SMALL, rng) for _ in range(3))
    lam = 0.9
    lhs = eval_ip([w], [eval_xi(f, g, lam)], lam)
    rhs = eval_ip([w, f], [g], lam)
    assert relative_error(lhs, rhs) < 1e-12


@pytest.mark.parametrize("m, n", [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (3, 1)])
def test_ip_matches_enumeration(m, n):
    rng = np.random.default_rng(10 * m + n)
    anti = [random_field(TINY, rng) for _ in range(m)]
    lin = [random_field(TINY, rng) for _ in range(n)]
    want = brute_ip(anti, lin, 0.7)
    assert relative_error(eval_ip(anti, lin, 0.7), want) < 1e-12
    assert relative_error(eval_ip_nested(anti, lin, 0.7), want) < 1e-12


@settings(max_examples=30)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 2 ** 32 - 1),
       st.floats(-2.0, 2.0, allow_nan=False))
def test_ip_matches_nesting_oracle(m, n, seed, lam):
    if m + n > 4:
        return
    rng = np.random.default_rng(seed)
    k = shell_kernel(SMALL, 1.0, lam)
    anti = [gimel_transform(random_test_function(SMALL, rng), k) for _ in range(m)]
    lin = [gimel_transform(random_test_function(SMALL, rng), k) for _ in range(n)]
    a, b = eval_ip(anti, lin, lam), eval_ip_nested(anti, lin, lam)
    scale = max(abs(a), abs(b), 1e-300)
    assert abs(a - b) <= 1e-12 * scale + 1e-300


@settings(max_examples=30)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 2 ** 32 - 1))
def test_ip_conjugate_symmetry(m, n, seed):
    rng = np.random.default_rng(seed)
    anti = [random_field(SMALL, rng) for _ in range(m)]
    lin = [random_field(SMALL, rng) for _ in range(n)]
    a = eval_ip(anti, lin, 0.6)
    b = eval_ip(lin, anti, 0.6)
    assert relative_error(a, np.conj(b)) < 1e-12


def test_ip_lambda_power():
    rng = np.random.default_rng(8)
    f, g, h = (random_field(SMALL, rng) for _ in range(3))
    one = eval_ip([f, g], [h, f], 1.0)
    assert relative_error(eval_ip([f, g], [h, f], 0.5), 0.25 * one) < 1e-12
    assert eval_ip([f, g], [h], 0.0) == 0


def test_ip_rejects_grid_mismatch():
    a = GimelField(SMALL, np.ones(SMALL.shape))
    b = GimelField(TINY, np.ones(TINY.shape))
    with pytest.raises(GridMismatchError):
        eval_ip([a], [b], 1.0)


# binding symbols to numbers

def test_binding_evaluates_coefficients():
    rng = np.random.default_rng(9)
    k = shell_kernel(SMALL, 1j, 0.5)
    b = IPBinding.from_test_functions({"f": random_test_function(SMALL, rng),
                                       "g": random_test_function(SMALL, rng)}, k)
    c = 2 * Coefficient.symbol(ip(["f"], ["g"])) * Coefficient.symbol(ip(["g"], ["f", "f"]))
    fh, gh = b.field_for("f"), b.field_for("g")
    want = 2 * eval_ip([fh], [gh], 0.5) * eval_ip([gh], [fh, fh], 0.5)
    assert relative_error(b.evaluate(c), want) < 1e-12
    assert relative_error(b.value(ip(["f"], ["g"])), np.conj(b.value(ip(["g"], ["f"])))) < 1e-12


def test_binding_unbound_generator():
    k = shell_kernel(SMALL)
    b = IPBinding.from_test_functions({"f": np.ones(SMALL.shape)}, k)
    with pytest.raises(UnboundGeneratorError):
        b.value(ip(["f"], ["h"]))
