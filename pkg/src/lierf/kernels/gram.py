"""Gram matrices of ket families and a cyclic Jacobi eigensolver for the PSD check."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from ..fock import Ket, inner_bruteforce
from .fields import GimelField, IPBinding, KernelSpec, gimel_transform


class NotHermitianError(ValueError):
    pass


def _check_hermitian(m: np.ndarray, tol: float) -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotHermitianError("matrix must be square, got shape %s" % (m.shape,))
    scale = max(float(np.max(np.abs(m))) if m.size else 0.0, 1.0e-300)
    defect = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
    if defect > tol * scale:
        raise NotHermitianError("matrix is not Hermitian (defect %.3g)" % defect)


def jacobi_eigenvalues(m, tol: float = 1e-14, max_sweeps: int = 100) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations, ascending.

    Each ``(p, q)`` step first rotates the phase of row/column ``q`` so the
    pivot becomes real, then applies the real symmetric Jacobi rotation.
    Sweeps run in fixed row-major order, so the result is deterministic.
    """
    a = np.array(m, dtype=complex)
    _check_hermitian(a, 1e-10)
    n = a.shape[0]
    if n == 0:
        return np.zeros(0)
    a = 0.5 * (a + a.conj().T)
    total = float(np.sum(np.abs(a) ** 2))
    # pivots below this cannot move any eigenvalue at double precision
    negligible = 1e-30 * math.sqrt(total)
    for _ in range(max_sweeps):
        off = float(np.sum(np.abs(a) ** 2) - np.sum(np.abs(np.diag(a)) ** 2))
        if off <= (tol ** 2) * total:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                z = a[p, q]
                r = abs(z)
                if r <= negligible:
                    a[p, q] = a[q, p] = 0.0
                    continue
                # phase fix: D = diag(1, .., e^{-i phi} at q, ..) makes a[p, q] real
                ph = z / r
                a[:, q] *= ph.conjugate()
                a[q, :] *= ph
                app, aqq = a[p, p].real, a[q, q].real
                theta = (aqq - app) / (2.0 * r)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                cp, cq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
                rp, rq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                a[p, q] = a[q, p] = 0.0
    return np.sort(np.diag(a).real)


@dataclass
class PSDResult:
    min_eigenvalue: float
    max_eigenvalue: float
    tolerance: float
    passed: bool

    def as_dict(self) -> dict:
        return {"min_eigenvalue": self.min_eigenvalue, "max_eigenvalue": self.max_eigenvalue,
                "tolerance": self.tolerance, "pass": self.passed}


def psd_check(m, tol: float = 1e-10) -> PSDResult:
    """Pass iff the smallest eigenvalue is ``>= -tol * max|eigenvalue|``."""
    ev = jacobi_eigenvalues(m)
    if ev.size == 0:
        return PSDResult(0.0, 0.0, tol, True)
    scale = float(np.max(np.abs(ev)))
    lo = float(ev[0])
    return PSDResult(lo, float(ev[-1]), tol, lo >= -tol * scale)


def gram_matrix(kets: Sequence[Ket], fields: Mapping[str, object], k: KernelSpec,
                hermitian_tol: float = 1e-10) -> np.ndarray:
    """``M[i, j] = <ket_i | ket_j>`` with every inner-product symbol bound numerically.

    ``fields`` maps generator names to gimel fields or to raw test-function
    arrays (those are gimel-transformed with ``k``).
    """
    bound = {}
    for name, f in fields.items():
        bound[name] = f if isinstance(f, GimelField) else gimel_transform(f, k)
    binding = IPBinding(bound, k.lam)
    n = len(kets)
    m = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(i, n):
            m[i, j] = binding.evaluate(inner_bruteforce(kets[i], kets[j]))
            if j != i:
                m[j, i] = binding.evaluate(inner_bruteforce(kets[j], kets[i]))
    _check_hermitian(m, hermitian_tol)
    return m
