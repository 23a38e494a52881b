"""Uniform space/time grids, grid functions, and forward-difference calculus.

The computational domain is controlled by a single integer parameter ``n``:

* space is the 2n^2 points ``j/n`` for ``j = -n^2 .. n^2 - 1`` (covering
  ``[-n, n)`` with spacing ``1/n``),
* time is the n^2 points ``i/n`` for ``i = 0 .. n^2 - 1`` (covering ``[0, n)``),
* integration is the ``1/n``-weighted sum over all space points.

A value stored at index ``j`` represents the constant value of a step
function on the cell ``[j/n, (j+1)/n)``.  All derivatives are forward
differences with the value at the topmost index forced to zero, which is
what makes the summation-by-parts identities in :mod:`hyperheat.transform`
exact rather than approximate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "GridParams",
    "GridFunction",
    "Field",
    "integrate",
    "d_x",
    "d_xx",
    "d_t",
]


@dataclass(frozen=True)
class GridParams:
    """Grid parameter ``n`` and the index ranges/spacings derived from it.

    Attributes
    ----------
    n : int
        Positive integer grid parameter.  Space resolution, time resolution
        and the integration weight are all ``1/n``.
    """

    n: int

    def __post_init__(self) -> None:
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise ValueError(f"grid parameter must be a positive integer, got {self.n!r}")

    @property
    def space_count(self) -> int:
        """Number of space points, ``2 n^2``."""
        return 2 * self.n * self.n

    @property
    def time_count(self) -> int:
        """Number of time points, ``n^2``."""
        return self.n * self.n

    @property
    def dx(self) -> float:
        """Grid spacing ``1/n`` (also the time step and integration weight)."""
        return 1.0 / self.n

    def space_indices(self) -> np.ndarray:
        """Integer space indices ``j = -n^2 .. n^2 - 1``."""
        return np.arange(-self.n * self.n, self.n * self.n)

    def space_points(self) -> np.ndarray:
        """Space coordinates ``j/n``, covering ``[-n, n)``."""
        return self.space_indices() / self.n

    def position(self, j: int) -> int:
        """Array position of space index ``j`` (stored order is ascending ``j``)."""
        p = int(j) + self.n * self.n
        if not 0 <= p < self.space_count:
            raise IndexError(f"space index {j} outside [-n^2, n^2-1] for n={self.n}")
        return p


class GridFunction:
    """A complex-valued function on one time slice of the space grid.

    Immutable: the value buffer is write-protected after construction and
    every operation returns a fresh instance, so instances can be shared
    freely across threads.
    """

    __slots__ = ("params", "_values")

    def __init__(self, params: GridParams, values: np.ndarray) -> None:
        arr = np.asarray(values, dtype=np.complex128)
        if arr.shape != (params.space_count,):
            raise ValueError(
                f"expected {params.space_count} values for n={params.n}, got shape {arr.shape}"
            )
        arr = arr.copy()
        arr.setflags(write=False)
        self.params = params
        self._values = arr

    # -- constructors ------------------------------------------------------

    @classmethod
    def zeros(cls, params: GridParams) -> "GridFunction":
        return cls(params, np.zeros(params.space_count, dtype=np.complex128))

    @classmethod
    def delta(cls, params: GridParams, j: int = 0, value: complex = 1.0) -> "GridFunction":
        """Single nonzero value at space index ``j``."""
        v = np.zeros(params.space_count, dtype=np.complex128)
        v[params.position(j)] = value
        return cls(params, v)

    @classmethod
    def from_callable(cls, params: GridParams, fn: Callable[[np.ndarray], np.ndarray]) -> "GridFunction":
        """Sample ``fn`` at the grid coordinates ``j/n`` (vectorized call)."""
        return cls(params, np.asarray(fn(params.space_points()), dtype=np.complex128))

    # -- access ------------------------------------------------------------

    @property
    def values(self) -> np.ndarray:
        """Read-only value buffer in ascending index order ``j = -n^2 .. n^2-1``."""
        return self._values

    def value_at(self, j: int) -> complex:
        """Value at space index ``j``."""
        return complex(self._values[self.params.position(j)])

    def __len__(self) -> int:
        return self.params.space_count

    def max_abs(self) -> float:
        return float(np.abs(self._values).max()) if len(self) else 0.0

    def is_finite(self) -> bool:
        return bool(np.isfinite(self._values).all())

    def require_finite(self, context: str = "grid function") -> "GridFunction":
        """Raise ``ValueError`` if any value is NaN or infinite."""
        if not self.is_finite():
            bad = int(np.flatnonzero(~np.isfinite(self._values))[0]) - self.params.n**2
            raise ValueError(f"{context} has a non-finite value at space index {bad}")
        return self

    # -- algebra (pointwise) -------------------------------------------------

    def _coerce(self, other) -> np.ndarray | complex:
        if isinstance(other, GridFunction):
            if other.params != self.params:
                raise ValueError("grid mismatch")
            return other._values
        return other

    def __add__(self, other) -> "GridFunction":
        return GridFunction(self.params, self._values + self._coerce(other))

    def __sub__(self, other) -> "GridFunction":
        return GridFunction(self.params, self._values - self._coerce(other))

    def __mul__(self, other) -> "GridFunction":
        return GridFunction(self.params, self._values * self._coerce(other))

    __rmul__ = __mul__

    def __neg__(self) -> "GridFunction":
        return GridFunction(self.params, -self._values)

    def conj(self) -> "GridFunction":
        return GridFunction(self.params, np.conj(self._values))

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"GridFunction(n={self.params.n}, max|f|={self.max_abs():.3g})"


class Field:
    """Time-indexed family of grid functions, produced one slice at a time.

    ``producer(i)`` must return the slice at time index ``i``.  The field
    never stores more than what the producer keeps alive, so memory stays
    O(n^2) regardless of how many slices are visited.
    """

    def __init__(self, params: GridParams, producer: Callable[[int], GridFunction],
                 max_index: int | None = None) -> None:
        self.params = params
        self._producer = producer
        self.max_index = params.time_count - 1 if max_index is None else max_index

    def slice(self, i: int) -> GridFunction:
        if not 0 <= i <= self.max_index:
            raise IndexError(f"time index {i} outside [0, {self.max_index}]")
        out = self._producer(i)
        if out.params != self.params:
            raise ValueError("producer returned a slice on a different grid")
        return out


def integrate(f: GridFunction) -> complex:
    """``(1/n) * sum_j f(j/n)`` over all 2n^2 space points.

    NaN/Inf propagate; use :meth:`GridFunction.require_finite` to trap them.
    """
    return complex(np.sum(f.values) * f.params.dx)


def d_x(f: GridFunction) -> GridFunction:
    """Forward space difference ``n*(f_{j+1} - f_j)``, zero at the top index.

    The forced zero at ``j = n^2 - 1`` (instead of a wrap-around) is load
    bearing: it is what makes ``integrate(d_x(f))`` telescope exactly to
    ``f_{n^2-1} - f_{-n^2}``.
    """
    v = f.values
    out = np.empty_like(v)
    out[:-1] = f.params.n * (v[1:] - v[:-1])
    out[-1] = 0.0
    return GridFunction(f.params, out)


def d_xx(f: GridFunction) -> GridFunction:
    """Second space difference, defined as the exact composition ``d_x(d_x(f))``.

    Expands to ``n^2 (f_{j+2} - 2 f_{j+1} + f_j)`` for ``j <= n^2 - 3``, to
    ``-n^2 (f_{n^2-1} - f_{n^2-2})`` at ``j = n^2 - 2``, and to 0 at the top
    index, because the inner difference is already forced to zero there.
    """
    return d_x(d_x(f))


def d_t(f: Field, i: int) -> GridFunction:
    """Forward time difference ``n*(f(i+1,.) - f(i,.))``, zero at the last index."""
    if not 0 <= i <= f.params.time_count - 1:
        raise IndexError(f"time index {i} outside [0, {f.params.time_count - 1}]")
    if i == f.params.time_count - 1:
        return GridFunction.zeros(f.params)
    a = f.slice(i)
    b = f.slice(i + 1)
    return GridFunction(f.params, f.params.n * (b.values - a.values))
