"""Weighted cosine-sum bounds and the substitutions behind them.

For positive weights ``a_i`` and positive angles ``alpha_i`` summing to pi
the quantity of interest is ``sum_i a_i cos(alpha_i)``.  The bounds
evaluated here are:

``toth``
    ``sum x_i x_{i+1} cos(alpha_i) <= cos(pi/n) sum x_i^2`` (any n >= 3).
``pentagonal-normal``
    ``cos(pi/5) / P * phi(a_1^2, ..., a_5^2)`` with ``P = a_1 ... a_5``.
``pentagonal-strong``
    The same with the squares in the order ``(a_1, a_5, a_2, a_3, a_4)``,
    valid for sorted weights.  This is the smallest of the 24 per-arrangement bounds.
``lemma2-arrangement``
    The per-arrangement bound for any circular arrangement of the weights.
``heptagonal``
    ``cos(pi/7) / P * psi(a_1^2, ..., a_7^2)``.
``odd-n-experimental``
    The same window pattern for odd n >= 9.  Unproven; every report that
    uses it is tagged experimental.

The substitution helpers construct the ``x`` vectors and angle
permutations that reduce each bound to the Toth inequality. Their
results carry enough data to check the reduction identities numerically.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .arrangements import SIGMA0_ORDER, CyclicArrangement
from .cyclic_forms import as_positive, window_sum_unchecked
from .errors import InvalidArgumentError

COS_PI_5 = (1.0 + math.sqrt(5.0)) / 4.0
ANGLE_SUM_ATOL = 1e-12
ANGLE_FLOOR = 1e-12
DEFAULT_TOL = 1e-9

# beta_i = alpha_{table[i]} (1-based), copied from the reduction proofs
LEMMA2_BETA = (1, 4, 2, 5, 3)
HEPTAGONAL_BETA = (1, 5, 2, 6, 3, 7, 4)
TOTH_FROM_PENTAGONAL_BETA = (1, 3, 5, 2, 4)
# a_i = x_p x_q for the reduction of the n = 5 Toth inequality
TOTH_FROM_PENTAGONAL_PAIRS = ((1, 2), (3, 4), (5, 1), (2, 3), (4, 5))

THEOREMS = (
    "toth",
    "pentagonal-normal",
    "pentagonal-strong",
    "lemma2-arrangement",
    "heptagonal",
    "odd-n-experimental",
)


def validate_weights(a, n: int | None = None) -> np.ndarray:
    return as_positive(a, length=n, name="weights")


def validate_angles(alpha, n: int | None = None) -> np.ndarray:
    """Positive angles (each >= 1e-12) summing to pi within 1e-12."""
    arr = np.asarray(alpha, dtype=float)
    if arr.ndim != 1:
        raise InvalidArgumentError("angles must be a vector")
    if n is not None and arr.shape[0] != n:
        raise InvalidArgumentError(f"angles must have length {n}, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise InvalidArgumentError("angles must be finite")
    if np.any(arr < ANGLE_FLOOR):
        raise InvalidArgumentError(f"angles must be positive (>= {ANGLE_FLOOR:g})")
    total = float(arr.sum())
    if abs(total - math.pi) > ANGLE_SUM_ATOL:
        raise InvalidArgumentError(f"angles must sum to pi, got {total!r} (off by {total - math.pi:.3e})")
    return arr


def _pair(a, alpha) -> tuple[np.ndarray, np.ndarray]:
    w = validate_weights(a)
    if w.ndim != 1:
        raise InvalidArgumentError("weights must be a vector")
    ang = validate_angles(alpha, len(w))
    return w, ang


# --- vectorised kernels (no validation; last axis is the cycle) ------------

def _cosine_sum(a: np.ndarray, alpha: np.ndarray):
    return (a * np.cos(alpha)).sum(axis=-1)


def _normal_rhs(a: np.ndarray, cos_coeff: float, window: int):
    return cos_coeff * window_sum_unchecked(a * a, window) / a.prod(axis=-1)


def _strong_rhs(a_sorted: np.ndarray):
    sq = a_sorted[..., np.array(SIGMA0_ORDER) - 1] ** 2
    return COS_PI_5 * window_sum_unchecked(sq, 3) / a_sorted.prod(axis=-1)


def _toth_lhs(x: np.ndarray, alpha: np.ndarray):
    return (x * np.roll(x, -1, axis=-1) * np.cos(alpha)).sum(axis=-1)


def joint_sort(a: np.ndarray, alpha: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Sort weights ascending, carrying each angle with its weight.

    Works row-wise on batches; the cosine sum is unchanged.
    """
    idx = np.argsort(a, axis=-1, kind="stable")
    return np.take_along_axis(a, idx, axis=-1), np.take_along_axis(alpha, idx, axis=-1)


# --- scalar API ------------------------------------------------------------

def cosine_sum(a, alpha) -> float:
    """``sum_i a_i cos(alpha_i)``; may be negative."""
    w, ang = _pair(a, alpha)
    return float(_cosine_sum(w, ang))


def toth_lhs(x, alpha) -> float:
    """``sum_i x_i x_{i+1} cos(alpha_i)`` with ``x_{n+1} = x_1``."""
    w, ang = _pair(x, alpha)
    return float(_toth_lhs(w, ang))


def toth_rhs(x, n: int | None = None) -> float:
    """``cos(pi/n) * sum x_i^2``."""
    arr = as_positive(x, name="x")
    if n is None:
        n = arr.shape[-1]
    if n < 3:
        raise InvalidArgumentError(f"n must be >= 3, got {n}")
    if n != arr.shape[-1]:
        raise InvalidArgumentError(f"n={n} does not match len(x)={arr.shape[-1]}")
    return float(math.cos(math.pi / n) * (arr * arr).sum())


def pentagonal_rhs_normal(a) -> float:
    return float(_normal_rhs(validate_weights(a, 5), COS_PI_5, 3))


def pentagonal_rhs_strong(a) -> float:
    """Strong pentagonal bound; ``a`` must already be sorted ascending."""
    w = validate_weights(a, 5)
    if np.any(np.diff(w) < 0):
        raise InvalidArgumentError(f"strong form needs weights sorted ascending, got {w.tolist()}")
    return float(_strong_rhs(w))


def lemma2_rhs(b) -> float:
    """Bound for ``sum b_i cos(alpha_i)`` where ``b`` is an arrangement of the weights.

    Accepts a CyclicArrangement or a plain sequence of five weights.
    """
    values = b.values if isinstance(b, CyclicArrangement) else b
    return float(_normal_rhs(validate_weights(values, 5), COS_PI_5, 3))


def heptagonal_rhs(a) -> float:
    return float(_normal_rhs(validate_weights(a, 7), math.cos(math.pi / 7), 4))


def odd_n_rhs_experimental(a, n: int | None = None) -> float:
    """Window-(n+1)/2 analogue of the pentagonal/heptagonal bound for odd n >= 9.

    Unproven.  Use it as a conjecture to probe, not as a theorem.
    """
    w = validate_weights(a)
    if n is None:
        n = w.shape[-1]
    if n % 2 == 0 or n < 9:
        raise InvalidArgumentError(f"experimental bound needs odd n >= 9, got {n}")
    if w.shape[-1] != n:
        raise InvalidArgumentError(f"expected {n} weights, got {w.shape[-1]}")
    return float(_normal_rhs(w, math.cos(math.pi / n), (n + 1) // 2))


# --- reports ---------------------------------------------------------------

@dataclass(frozen=True)
class BoundReport:
    lhs: float
    rhs: float
    gap: float
    theorem: str
    tolerance: float
    holds: bool
    weights: tuple[float, ...] = ()
    angles: tuple[float, ...] = ()
    experimental: bool = False

    @classmethod
    def build(cls, lhs, rhs, theorem, tol, weights=(), angles=()) -> "BoundReport":
        if theorem not in THEOREMS:
            raise InvalidArgumentError(f"unknown theorem tag {theorem!r}")
        gap = float(rhs) - float(lhs)
        return cls(
            lhs=float(lhs),
            rhs=float(rhs),
            gap=gap,
            theorem=theorem,
            tolerance=float(tol),
            holds=gap >= -tol,
            weights=tuple(float(v) for v in weights),
            angles=tuple(float(v) for v in angles),
            experimental=theorem == "odd-n-experimental",
        )

    def as_record(self) -> dict:
        return {
            "theorem": self.theorem,
            "weights": list(self.weights),
            "angles": list(self.angles),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "gap": self.gap,
            "tolerance": self.tolerance,
            "holds": self.holds,
            "experimental": self.experimental,
        }


def _check_tol(tol: float) -> float:
    if not tol > 0:
        raise InvalidArgumentError(f"tolerance must be positive, got {tol}")
    return float(tol)


def pentagonal_bound_check(a, alpha, form: str = "normal", tol: float = DEFAULT_TOL) -> BoundReport:
    """Compare the cosine sum with the normal or strong pentagonal bound.

    For ``form="strong"`` the (weight, angle) pairs are sorted jointly by
    weight first, so unsorted input is accepted and the left side is
    unchanged.
    """
    tol = _check_tol(tol)
    w, ang = _pair(a, alpha)
    if len(w) != 5:
        raise InvalidArgumentError(f"pentagonal bounds need 5 weights, got {len(w)}")
    if form == "normal":
        return BoundReport.build(_cosine_sum(w, ang), _normal_rhs(w, COS_PI_5, 3),
                                 "pentagonal-normal", tol, w, ang)
    if form == "strong":
        ws, angs = joint_sort(w, ang)
        return BoundReport.build(_cosine_sum(ws, angs), _strong_rhs(ws),
                                 "pentagonal-strong", tol, ws, angs)
    raise InvalidArgumentError(f"form must be 'normal' or 'strong', got {form!r}")


def lemma2_bound_check(b: CyclicArrangement, alpha, tol: float = DEFAULT_TOL) -> BoundReport:
    tol = _check_tol(tol)
    w, ang = _pair(b.values, alpha)
    return BoundReport.build(_cosine_sum(w, ang), lemma2_rhs(b), "lemma2-arrangement", tol, w, ang)


def heptagonal_bound_check(a, alpha, tol: float = DEFAULT_TOL) -> BoundReport:
    tol = _check_tol(tol)
    w, ang = _pair(a, alpha)
    if len(w) != 7:
        raise InvalidArgumentError(f"heptagonal bound needs 7 weights, got {len(w)}")
    return BoundReport.build(_cosine_sum(w, ang), heptagonal_rhs(w), "heptagonal", tol, w, ang)


def odd_n_bound_check(a, alpha, tol: float = DEFAULT_TOL) -> BoundReport:
    tol = _check_tol(tol)
    w, ang = _pair(a, alpha)
    return BoundReport.build(_cosine_sum(w, ang), odd_n_rhs_experimental(w),
                             "odd-n-experimental", tol, w, ang)


def toth_bound_check(x, alpha, tol: float = DEFAULT_TOL) -> BoundReport:
    tol = _check_tol(tol)
    w, ang = _pair(x, alpha)
    return BoundReport.build(_toth_lhs(w, ang), toth_rhs(w), "toth", tol, w, ang)


def applicable_checks(a, alpha, tol: float = DEFAULT_TOL, experimental: bool = False) -> list[BoundReport]:
    """Every weighted-cosine bound that applies to ``len(a)`` weights."""
    n = len(np.atleast_1d(np.asarray(a, dtype=float)))
    if n == 5:
        return [pentagonal_bound_check(a, alpha, "normal", tol),
                pentagonal_bound_check(a, alpha, "strong", tol)]
    if n == 7:
        return [heptagonal_bound_check(a, alpha, tol)]
    if n % 2 == 1 and n >= 9:
        if not experimental:
            raise InvalidArgumentError(f"n={n} is only available as an experimental conjecture")
        return [odd_n_bound_check(a, alpha, tol)]
    raise InvalidArgumentError(f"no weighted-cosine bound is available for n={n}")


# --- substitutions ---------------------------------------------------------

@dataclass(frozen=True)
class SubstitutionResult:
    """Output of a reduction to the Toth inequality.

    ``x`` is the constructed vector and ``beta_index[i]`` the 1-based source
    index of ``beta_i``.  ``product_P`` is the product of the weights.
    ``substituted_terms[i]`` is ``x_i x_{i+1} cos(beta_i)`` and
    ``original_terms[i]`` is the weighted cosine term it should equal.
    ``sum_sq`` is ``sum x_i^2`` and ``sum_sq_expected`` is the window
    form of the squared weights divided by P.
    """

    x: np.ndarray
    beta_index: tuple[int, ...]
    product_P: float
    beta: np.ndarray
    substituted_terms: np.ndarray
    original_terms: np.ndarray
    sum_sq: float
    sum_sq_expected: float
    rhs_via_toth: float = field(default=float("nan"))

    def sum_sq_residual(self) -> float:
        """Relative residual of ``sum x_i^2 = P^-1 * window_sum(squares)``."""
        return abs(self.sum_sq - self.sum_sq_expected) / abs(self.sum_sq_expected)

    def termwise_residual(self) -> float:
        """Largest term mismatch, relative to the largest term magnitude."""
        scale = max(np.abs(self.original_terms).max(), np.abs(self.substituted_terms).max())
        return float(np.abs(self.substituted_terms - self.original_terms).max() / scale)

    def product_residual(self) -> float:
        """Relative residual of ``prod x_i^2 = P``."""
        return abs(float(np.prod(self.x ** 2)) - self.product_P) / self.product_P


def _index(table: Sequence[int]) -> np.ndarray:
    return np.asarray(table) - 1


def _reduce(weights: np.ndarray, ang: np.ndarray, window: int, beta_table, cos_coeff: float) -> SubstitutionResult:
    # x_i^2 = W_{s_i}^2 / P where W_s is the window product starting at
    # position s and s_i = i * (n + 1) / 2 mod n; this is the same as the
    # square-root-of-a-ratio form, written without cancellation.
    n = len(weights)
    P = float(weights.prod())
    src = _index(beta_table)
    starts = (np.arange(n) * ((n + 1) // 2)) % n
    win = (starts[:, None] + np.arange(window)[None, :]) % n
    x_sq = weights[win].prod(axis=1) ** 2 / P
    x = np.sqrt(x_sq)
    beta = ang[src]
    substituted = x * np.roll(x, -1) * np.cos(beta)
    original = weights[src] * np.cos(ang[src])
    sum_sq = float(x_sq.sum())
    expected = float(window_sum_unchecked(weights * weights, window) / P)
    return SubstitutionResult(
        x=x,
        beta_index=tuple(beta_table),
        product_P=P,
        beta=beta,
        substituted_terms=substituted,
        original_terms=original,
        sum_sq=sum_sq,
        sum_sq_expected=expected,
        rhs_via_toth=cos_coeff * sum_sq,
    )


def lemma2_substitution(b, alpha) -> SubstitutionResult:
    """Construct ``x_1 = sqrt(b1 b2 b3 / (b4 b5))`` etc. and the matching beta.

    ``b`` may be a CyclicArrangement or five weights in cycle order.
    """
    values = b.values if isinstance(b, CyclicArrangement) else b
    w, ang = _pair(values, alpha)
    if len(w) != 5:
        raise InvalidArgumentError(f"expected 5 weights, got {len(w)}")
    return _reduce(w, ang, 3, LEMMA2_BETA, COS_PI_5)


def heptagonal_substitution(a, alpha) -> SubstitutionResult:
    """Construct ``x_1 = sqrt(a1 a2 a3 a4 / (a5 a6 a7))`` etc. and the matching beta."""
    w, ang = _pair(a, alpha)
    if len(w) != 7:
        raise InvalidArgumentError(f"expected 7 weights, got {len(w)}")
    return _reduce(w, ang, 4, HEPTAGONAL_BETA, math.cos(math.pi / 7))


@dataclass(frozen=True)
class TothRoundTrip:
    """Result of deriving the n = 5 Toth inequality from the normal pentagonal bound."""

    lhs: float
    rhs_via_pentagonal: float
    rhs_direct: float
    weights: np.ndarray
    beta: np.ndarray
    weighted_terms: np.ndarray
    toth_terms: np.ndarray
    sum_sq: float
    sum_sq_via_weights: float

    def rhs_residual(self) -> float:
        return abs(self.rhs_via_pentagonal - self.rhs_direct) / abs(self.rhs_direct)

    def termwise_residual(self) -> float:
        scale = max(np.abs(self.weighted_terms).max(), np.abs(self.toth_terms).max())
        return float(np.abs(self.weighted_terms - self.toth_terms).max() / scale)

    def sum_sq_residual(self) -> float:
        return abs(self.sum_sq - self.sum_sq_via_weights) / self.sum_sq


def toth_from_pentagonal(x, alpha) -> TothRoundTrip:
    """Run the reduction of Toth (n = 5) to the normal pentagonal bound.

    Weights are ``a = (x1x2, x3x4, x5x1, x2x3, x4x5)`` and angles
    ``beta = (alpha1, alpha3, alpha5, alpha2, alpha4)``.
    """
    xs, ang = _pair(x, alpha)
    if len(xs) != 5:
        raise InvalidArgumentError(f"expected 5 values, got {len(xs)}")
    pairs = np.asarray(TOTH_FROM_PENTAGONAL_PAIRS) - 1
    a = xs[pairs[:, 0]] * xs[pairs[:, 1]]
    src = _index(TOTH_FROM_PENTAGONAL_BETA)
    beta = ang[src]
    weighted = a * np.cos(beta)
    # a_i pairs with x_p x_{p+1} cos(alpha_p) where p = src[i]
    toth_terms = xs[src] * np.roll(xs, -1)[src] * np.cos(ang[src])
    P = float(a.prod())
    sum_sq = float((xs * xs).sum())
    return TothRoundTrip(
        lhs=float(_toth_lhs(xs, ang)),
        rhs_via_pentagonal=float(_normal_rhs(a, COS_PI_5, 3)),
        rhs_direct=math.cos(math.pi / 5) * sum_sq,
        weights=a,
        beta=beta,
        weighted_terms=weighted,
        toth_terms=toth_terms,
        sum_sq=sum_sq,
        sum_sq_via_weights=float(window_sum_unchecked(a * a, 3) / P),
    )
