"""Circular arrangements of five weights and the phi-minimizing cycle.

An arrangement pins ``a_1`` in the first slot and orders the other weights
around the cycle, giving ``4! = 24`` arrangements.  A cycle and its
reflection (``x_1`` fixed, rest reversed) give the same ``phi``, so the 24
arrangements fall into 12 reflection pairs.

For sorted weights ``a_1 <= ... <= a_5`` the minimizer is
``(a_1, a_5, a_2, a_3, a_4)``.  Each of the other eleven pairs exceeds it
by a closed-form product of non-negative differences.  ``LEMMA1_TABLE``
lists those twelve closed forms and ``lemma1_residuals`` checks them
against direct evaluation.
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .cyclic_forms import as_positive, window_sum_unchecked
from .errors import InvalidArgumentError

SIGMA0_ORDER = (1, 5, 2, 3, 4)
SIGMA1_ORDER = (1, 4, 3, 2, 5)
TIE_RTOL = 1e-12


@dataclass(frozen=True)
class CyclicArrangement:
    """A circular ordering of weights with the first weight pinned.

    ``order`` holds 1-based indices into the original weight vector;
    ``values`` holds the weights in that order.
    """

    order: tuple[int, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        n = len(self.order)
        if sorted(self.order) != list(range(1, n + 1)):
            raise InvalidArgumentError(f"order must be a permutation of 1..{n}, got {self.order}")
        if self.order[0] != 1:
            raise InvalidArgumentError("the first position of an arrangement is pinned to a_1")
        if len(self.values) != n:
            raise InvalidArgumentError("order and values differ in length")

    @classmethod
    def from_order(cls, a: Sequence[float], order: Sequence[int]) -> "CyclicArrangement":
        order = tuple(int(i) for i in order)
        if len(order) != len(a):
            raise InvalidArgumentError(f"order has length {len(order)} but there are {len(a)} weights")
        return cls(order, tuple(float(a[i - 1]) for i in order))

    def reflected(self) -> "CyclicArrangement":
        return CyclicArrangement(
            (self.order[0],) + self.order[:0:-1], (self.values[0],) + self.values[:0:-1]
        )

    def window_sum(self, k: int) -> float:
        return window_sum_unchecked(np.asarray(self.values), k)


def _check_sorted(a: np.ndarray) -> None:
    if np.any(np.diff(a) < 0):
        raise InvalidArgumentError(f"weights must be sorted ascending, got {a.tolist()}")


def _enumerate(a: np.ndarray) -> list[CyclicArrangement]:
    n = len(a)
    return [
        CyclicArrangement.from_order(a, (1,) + rest)
        for rest in itertools.permutations(range(2, n + 1))
    ]


def all_arrangements(a) -> list[CyclicArrangement]:
    """All ``(n-1)!`` arrangements of any number of weights, lexicographic."""
    return _enumerate(as_positive(a, min_len=3, name="weights"))


def enumerate_arrangements(a) -> list[CyclicArrangement]:
    """All 24 arrangements of five weights, in lexicographic index order."""
    return _enumerate(as_positive(a, length=5, name="weights"))


def sigma0(a) -> CyclicArrangement:
    """The arrangement ``(a_1, a_5, a_2, a_3, a_4)``; ``a`` must be sorted."""
    arr = as_positive(a, length=5, name="weights")
    _check_sorted(arr)
    return CyclicArrangement.from_order(arr, SIGMA0_ORDER)


@functools.lru_cache(maxsize=None)
def arrangement_orders(n: int = 5) -> np.ndarray:
    """The ``(n-1)!`` pinned orders as a read-only 0-based index array, lexicographic."""
    orders = np.array([(0,) + p for p in itertools.permutations(range(1, n))])
    orders.flags.writeable = False
    return orders


def window_over_arrangements(a, k: int = 3) -> np.ndarray:
    """Window sum of every arrangement; works on a vector or a batch of rows.

    Column ``j`` corresponds to ``arrangement_orders(n)[j]``.
    """
    arr = as_positive(a, min_len=3, name="weights")
    return window_sum_unchecked(arr[..., arrangement_orders(arr.shape[-1])], k)


def _argmin_window(a: np.ndarray, k: int) -> tuple[CyclicArrangement, float]:
    orders = arrangement_orders(len(a))
    values = window_sum_unchecked(a[orders], k)
    best = values.min()
    # near-ties (within rounding) go to the lexicographically smallest order,
    # and the orders are already lexicographic
    j = int(np.flatnonzero(values <= best + TIE_RTOL * abs(best))[0])
    return CyclicArrangement.from_order(a, orders[j] + 1), float(values[j])


def min_phi_arrangement(a) -> tuple[CyclicArrangement, float]:
    """Exhaustive minimum of phi over the 24 arrangements.

    Ties (relative 1e-12) are broken by the lexicographically smallest
    index order.  No sortedness is required.
    """
    arr = as_positive(a, length=5, name="weights")
    if arr.ndim != 1:
        raise InvalidArgumentError("weights must be a vector")
    return _argmin_window(arr, 3)


def min_psi_arrangement(a) -> tuple[CyclicArrangement, float]:
    """Exhaustive minimum of psi over the 720 arrangements of seven weights.

    There is no known closed-form minimizer here; this is a plain search.
    """
    arr = as_positive(a, length=7, name="weights")
    if arr.ndim != 1:
        raise InvalidArgumentError("weights must be a vector")
    return _argmin_window(arr, 4)


def _d(a, i, j):
    return a[..., i - 1] - a[..., j - 1]


def _w(a, i):
    return a[..., i - 1]


# (first arrangement, reflected partner, closed form of phi(arr) - phi(sigma0)),
# in the order the identities are usually listed.
LEMMA1_TABLE: list[tuple[tuple[int, ...], tuple[int, ...], Callable[[np.ndarray], np.ndarray]]] = [
    ((1, 2, 3, 4, 5), (1, 5, 4, 3, 2),
     lambda a: _w(a, 3) * _d(a, 4, 2) * _d(a, 5, 1)),
    ((1, 2, 3, 5, 4), (1, 4, 5, 3, 2),
     lambda a: _w(a, 1) * _d(a, 3, 2) * _d(a, 5, 4) + _w(a, 3) * _d(a, 4, 1) * _d(a, 5, 2)),
    ((1, 2, 4, 3, 5), (1, 5, 3, 4, 2),
     lambda a: _w(a, 1) * _d(a, 3, 2) * _d(a, 5, 4) + _w(a, 5) * _d(a, 3, 1) * _d(a, 4, 2)),
    ((1, 2, 4, 5, 3), (1, 3, 5, 4, 2),
     lambda a: _w(a, 1) * _d(a, 3, 2) * _d(a, 5, 4) + _w(a, 3) * _d(a, 4, 1) * _d(a, 5, 2)
     + _w(a, 5) * _d(a, 2, 1) * _d(a, 4, 3)),
    ((1, 2, 5, 3, 4), (1, 4, 3, 5, 2),
     lambda a: _w(a, 4) * _d(a, 3, 1) * _d(a, 5, 2)),
    ((1, 2, 5, 4, 3), (1, 3, 4, 5, 2),
     lambda a: _w(a, 3) * _d(a, 4, 1) * _d(a, 5, 2) + _w(a, 5) * _d(a, 2, 1) * _d(a, 4, 3)),
    ((1, 3, 2, 4, 5), (1, 5, 4, 2, 3),
     lambda a: _w(a, 1) * _d(a, 3, 2) * _d(a, 5, 4) + _w(a, 2) * _d(a, 4, 3) * _d(a, 5, 1)),
    ((1, 3, 2, 5, 4), (1, 4, 5, 2, 3),
     lambda a: _w(a, 2) * _d(a, 4, 1) * _d(a, 5, 3)),
    ((1, 3, 4, 2, 5), (1, 5, 2, 4, 3),
     lambda a: _w(a, 5) * _d(a, 2, 1) * _d(a, 4, 3)),
    ((1, 3, 5, 2, 4), (1, 4, 2, 5, 3),
     lambda a: _w(a, 1) * _d(a, 3, 2) * _d(a, 5, 4) + _w(a, 4) * _d(a, 2, 1) * _d(a, 5, 3)),
    ((1, 4, 2, 3, 5), (1, 5, 3, 2, 4),
     lambda a: _w(a, 1) * _d(a, 3, 2) * _d(a, 5, 4)),
    (SIGMA1_ORDER, SIGMA0_ORDER,
     lambda a: np.zeros(a.shape[:-1])),
]


@dataclass(frozen=True)
class IdentityResidual:
    """One row of the difference-identity check.

    ``lhs_diff`` and ``lhs_diff_partner`` are ``phi(arrangement) -
    phi(sigma0)`` evaluated directly for the two reflected arrangements;
    ``rhs_formula`` is the closed form.  ``scale`` is the phi magnitude
    the residual should be judged against.
    """

    row: int
    pair: tuple[tuple[int, ...], tuple[int, ...]]
    lhs_diff: float
    lhs_diff_partner: float
    rhs_formula: float
    residual: float
    scale: float

    @property
    def relative_residual(self) -> float:
        return self.residual / self.scale

    def ok(self, rtol: float = 1e-12) -> bool:
        return self.relative_residual <= rtol


def lemma1_table_batch(a) -> dict[str, np.ndarray]:
    """Vectorised identity check over a batch of weight rows (no sortedness check).

    Returns arrays of shape ``(m, 12)``: ``lhs_diff``, ``lhs_diff_partner``,
    ``rhs_formula``, ``residual`` and ``scale``.
    """
    arr = np.atleast_2d(as_positive(a, length=5, name="weights"))
    phi0 = window_sum_unchecked(arr[:, np.array(SIGMA0_ORDER) - 1], 3)
    firsts = np.array([row[0] for row in LEMMA1_TABLE]) - 1
    partners = np.array([row[1] for row in LEMMA1_TABLE]) - 1
    phi_first = window_sum_unchecked(arr[:, firsts], 3)
    phi_partner = window_sum_unchecked(arr[:, partners], 3)
    rhs = np.stack([formula(arr) for _, _, formula in LEMMA1_TABLE], axis=1)
    d1 = phi_first - phi0[:, None]
    d2 = phi_partner - phi0[:, None]
    return {
        "lhs_diff": d1,
        "lhs_diff_partner": d2,
        "rhs_formula": rhs,
        "residual": np.maximum(np.abs(d1 - rhs), np.abs(d2 - rhs)),
        "scale": np.maximum(np.maximum(phi_first, phi_partner), phi0[:, None]),
    }


def lemma1_residuals(a, *, require_sorted: bool = True) -> list[IdentityResidual]:
    """Check all 12 difference identities for the weights ``a``.

    The identities are algebraic and hold for any positive weights;
    ``require_sorted=False`` skips the ordering check, which only matters
    for the sign of the closed forms.
    """
    arr = as_positive(a, length=5, name="weights")
    if arr.ndim != 1:
        raise InvalidArgumentError("weights must be a vector; use lemma1_table_batch for batches")
    if require_sorted:
        _check_sorted(arr)
    t = {k: v[0].tolist() for k, v in lemma1_table_batch(arr).items()}
    return [
        IdentityResidual(
            row=i + 1,
            pair=(first, partner),
            lhs_diff=t["lhs_diff"][i],
            lhs_diff_partner=t["lhs_diff_partner"][i],
            rhs_formula=t["rhs_formula"][i],
            residual=t["residual"][i],
            scale=t["scale"][i],
        )
        for i, (first, partner, _) in enumerate(LEMMA1_TABLE)
    ]
