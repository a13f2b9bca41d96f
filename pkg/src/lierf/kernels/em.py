"""Electromagnetic bivector test data and the random-field inner-product integrand."""

from __future__ import annotations

import numpy as np

METRIC = np.diag([1.0, -1.0, -1.0, -1.0])
HBAR = 1.0  # unit convention, reported in check metadata


class NotAntisymmetricError(ValueError):
    pass


def bivector(e=(0, 0, 0), b=(0, 0, 0)) -> np.ndarray:
    """4x4 antisymmetric components with ``F[0, i] = e_i`` and ``F[i, j] = eps_ijk b_k``."""
    e = np.asarray(e, dtype=complex)
    b = np.asarray(b, dtype=complex)
    f = np.zeros((4, 4), dtype=complex)
    f[0, 1:] = e
    f[1:, 0] = -e
    f[1, 2], f[2, 1] = b[2], -b[2]
    f[2, 3], f[3, 2] = b[0], -b[0]
    f[3, 1], f[1, 3] = b[1], -b[1]
    return f


def _check(f: np.ndarray, name: str) -> np.ndarray:
    f = np.asarray(f, dtype=complex)
    if f.shape != (4, 4):
        raise NotAntisymmetricError("%s must be 4x4, got %s" % (name, f.shape))
    if np.any(f + f.T != 0):
        raise NotAntisymmetricError("%s is not antisymmetric" % name)
    return f


def em_integrand(e_field, f_field, u) -> complex:
    """``-conj(E_{mu beta}) u^mu u^nu F_nu^beta`` in signature (+,-,-,-).

    The overall minus makes the form non-negative on the future light cone:
    ``u^mu F_{mu beta}`` is orthogonal to a null ``u`` and hence spacelike or
    null.  At ``u = (u0, 0, 0, u0)`` with ``E = F`` the value is
    ``u0^2 [(e1 + b2)^2 + (e2 - b1)^2]`` for real components.
    """
    e = _check(e_field, "E")
    f = _check(f_field, "F")
    u = np.asarray(u, dtype=complex)
    ue = u @ e  # contract first index
    uf = u @ f
    val = -np.sum(np.conj(ue) * np.diag(METRIC) * uf)
    return complex(val.real + 0.0, val.imag + 0.0)  # no signed zeros


def em_inner_product(e_fields, f_fields, momenta, weights=None) -> complex:
    """Sum of :func:`em_integrand` over sample momenta (optional quadrature ``weights``)."""
    total = 0j
    for i, u in enumerate(momenta):
        w = 1.0 if weights is None else weights[i]
        total += w * em_integrand(e_fields[i], f_fields[i], u)
    return total * HBAR
