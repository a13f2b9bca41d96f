"""Periodic momentum grids with exact index arithmetic."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np


class GridMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class MomentumGrid:
    """``n`` points per axis in ``dimension`` spacetime dimensions (axis 0 is time).

    Index ``k`` holds momentum ``wrap(k) * spacing`` with ``wrap(k)`` in
    ``[-n/2, n/2)``.  Sums of momenta are taken modulo ``n`` so that momentum
    conservation is an exact index identity; negation is ``k -> -k mod n``.
    """

    dimension: int = 2
    n: int = 32
    spacing: float = 0.25

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")
        if self.n < 2 or self.n % 2:
            raise ValueError("points per axis must be even and >= 2")
        if not self.spacing > 0:
            raise ValueError("spacing must be positive")

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n,) * self.dimension

    @property
    def size(self) -> int:
        return self.n ** self.dimension

    @cached_property
    def axis(self) -> np.ndarray:
        return np.fft.fftfreq(self.n, d=1.0 / self.n) * self.spacing

    @cached_property
    def momenta(self) -> np.ndarray:
        """Array of shape ``(dimension, *shape)`` with physical momentum components."""
        return np.stack(np.meshgrid(*([self.axis] * self.dimension), indexing="ij"))

    def minkowski_square(self) -> np.ndarray:
        """``v.v`` with signature (+,-,-,...)."""
        return minkowski_dot(self.momenta, self.momenta)

    def euclidean_norm(self) -> np.ndarray:
        return np.sqrt(np.sum(self.momenta ** 2, axis=0))

    def nyquist_mask(self) -> np.ndarray:
        """True where some component sits at ``-n/2`` (maps to itself under negation)."""
        k = np.fft.fftfreq(self.n, d=1.0 / self.n)
        edge = k == -self.n // 2
        grids = np.meshgrid(*([edge] * self.dimension), indexing="ij")
        return np.logical_or.reduce(grids)

    def index_of(self, ks) -> tuple[int, ...]:
        """Array index for integer momentum labels (taken modulo ``n``)."""
        return tuple(int(k) % self.n for k in ks)

    def to_json(self) -> dict:
        return {"dimension": self.dimension, "n": self.n, "spacing": self.spacing}

    @classmethod
    def from_json(cls, d) -> "MomentumGrid":
        return cls(int(d["dimension"]), int(d["n"]), float(d["spacing"]))


def minkowski_dot(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Contract the leading axis with metric diag(+1, -1, ..., -1)."""
    return a[0] * b[0] - np.sum(a[1:] * b[1:], axis=0)


def reflect(values: np.ndarray, axes=None) -> np.ndarray:
    """``values[-k mod n]`` along each listed axis (all axes by default)."""
    if axes is None:
        axes = tuple(range(values.ndim))
    out = np.flip(values, axis=axes)
    return np.roll(out, 1, axis=axes)


def shift(values: np.ndarray, s, axes=None) -> np.ndarray:
    """``values[k + s mod n]`` along the listed axes."""
    if axes is None:
        axes = tuple(range(len(s)))
    return np.roll(values, tuple(-int(x) for x in s), axis=axes)
