"""Cyclic window sums.

``cyclic_window_sum(x, k)`` adds up the products of ``k`` consecutive
entries of ``x`` read around a cycle.  The two forms used by the
pentagonal and heptagonal bounds are special cases:

* ``phi`` -- windows of 3 on a 5-cycle,
* ``psi`` -- windows of 4 on a 7-cycle.

Positions are documented 1-based (``x_1 .. x_n``) and stored 0-based, so
``x_i`` lives at ``x[i - 1]``.

Every function accepts either one vector or a 2-D batch (one vector per
row); a batch returns one value per row.
"""
from __future__ import annotations

import numpy as np

from .errors import InvalidArgumentError


def as_positive(x, *, min_len: int = 1, length: int | None = None, name: str = "x") -> np.ndarray:
    """Validate ``x`` as strictly positive and finite and return a float array."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim not in (1, 2):
        raise InvalidArgumentError(f"{name} must be a vector or a 2-D batch, got ndim={arr.ndim}")
    n = arr.shape[-1]
    if length is not None and n != length:
        raise InvalidArgumentError(f"{name} must have length {length}, got {n}")
    if n < min_len:
        raise InvalidArgumentError(f"{name} must have length >= {min_len}, got {n}")
    if not np.all(np.isfinite(arr)):
        raise InvalidArgumentError(f"{name} must be finite")
    if not np.all(arr > 0):
        raise InvalidArgumentError(f"{name} must be strictly positive")
    return arr


def _window_index(n: int, k: int) -> np.ndarray:
    # row i holds the positions i, i+1, ..., i+k-1 (mod n)
    return (np.arange(n)[:, None] + np.arange(k)[None, :]) % n


def window_sum_unchecked(x: np.ndarray, k: int):
    """Window sum without validation; ``x`` is a float array (1-D or 2-D)."""
    n = x.shape[-1]
    total = x[..., _window_index(n, k)].prod(axis=-1).sum(axis=-1)
    return float(total) if np.ndim(total) == 0 else total


def cyclic_window_sum(x, k: int):
    """Return ``sum_i prod_{j<k} x_{i+j}`` with indices taken mod ``n``.

    Raises InvalidArgumentError unless ``1 <= k <= n`` and every entry is
    positive and finite.
    """
    arr = as_positive(x, min_len=3)
    n = arr.shape[-1]
    if not isinstance(k, (int, np.integer)) or not 1 <= k <= n:
        raise InvalidArgumentError(f"window length must satisfy 1 <= k <= {n}, got {k!r}")
    return window_sum_unchecked(arr, int(k))


def phi(x):
    """``x1x2x3 + x2x3x4 + x3x4x5 + x4x5x1 + x5x1x2`` for a 5-vector."""
    return window_sum_unchecked(as_positive(x, length=5), 3)


def psi(x):
    """Seven cyclic products of four consecutive entries of a 7-vector."""
    return window_sum_unchecked(as_positive(x, length=7), 4)
