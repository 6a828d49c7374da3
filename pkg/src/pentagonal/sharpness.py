"""Maximizing ``sum a_i cos(alpha_i)`` over the angle simplex.

Two independent routes find the maximum for fixed weights:

λ route
    The first-order condition on ``{alpha_i > 0, sum alpha_i = pi}`` is
    ``a_i sin(alpha_i) = λ`` for every ``i``.  For a chosen branch (all
    angles acute, or exactly one obtuse) the angles are explicit functions
    of λ.  λ is then found by bisection on ``sum alpha_i(λ) = pi``.  The
    supremum can also sit on the closure of the simplex, at a vertex
    (one angle pi, the rest 0; the λ -> 0 limit of an obtuse branch).
    The n vertices are scored as well.

gradient route
    Multi-start projected gradient ascent on the closed simplex, with
    Barzilai-Borwein steps and Armijo backtracking.

``max_cosine_sum`` runs both, compares them, and reports the gap to
every applicable closed-form bound.  ``monte_carlo_verify`` is the
randomized counterexample search for those bounds.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from .bounds import (
    COS_PI_5,
    DEFAULT_TOL,
    _cosine_sum,
    _normal_rhs,
    _strong_rhs,
    joint_sort,
    validate_weights,
)
from .errors import ConvergenceError, InvalidArgumentError

LAMBDA_FLOOR = 1e-15
EQUALITY_TOL = 1e-7
SCAN_POINTS = 512
GA_STARTS = 16
GA_MAX_ITER = 10_000
GA_GTOL = 1e-10
SWEEP_BLOCK = 65_536
WEIGHT_RANGE = (0.1, 10.0)


@dataclass(frozen=True)
class StationaryPoint:
    """A solution of ``a_i sin(alpha_i) = lam`` with angles summing to pi.

    ``obtuse`` is the 0-based index on the obtuse branch
    ``pi - arcsin(lam / a_i)``, or None when every angle is acute.
    ``lam == 0`` marks a vertex of the closed simplex.
    """

    alpha: np.ndarray
    lam: float
    value: float
    obtuse: int | None
    angle_sum_residual: float
    monotone: bool = True

    @property
    def on_boundary(self) -> bool:
        return self.lam == 0.0

    @property
    def branch_mask(self) -> frozenset[int]:
        return frozenset() if self.obtuse is None else frozenset({self.obtuse})

    def stationarity_residual(self, a) -> float:
        """Largest ``|a_i sin(alpha_i) - lam|``."""
        return float(np.abs(np.asarray(a) * np.sin(self.alpha) - self.lam).max())


def _parse_mask(mask, n: int) -> int | None:
    if mask is None:
        return None
    if isinstance(mask, (int, np.integer)):
        mask = [int(mask)]
    idx = sorted(set(int(i) for i in mask))
    if len(idx) > 1:
        raise InvalidArgumentError(
            f"at most one obtuse angle is possible when angles sum to pi, got mask {idx}"
        )
    if idx and not 0 <= idx[0] < n:
        raise InvalidArgumentError(f"obtuse index {idx[0]} out of range for n={n}")
    return idx[0] if idx else None


def _branch_angles(theta, a: np.ndarray, m: int, obtuse: int | None) -> np.ndarray:
    """Angles on a branch, parametrized by the angle ``theta`` of the smallest weight.

    ``lam = a_m sin(theta)`` with ``theta`` in (0, pi/2] covers ``lam`` in
    (0, min a], and keeps the steep end of arcsin well conditioned.
    ``theta`` may be a vector (rows of the result).
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    lam = a[m] * np.sin(theta)
    alpha = np.arcsin(np.clip(lam[:, None] / a[None, :], 0.0, 1.0))
    alpha[:, a == a[m]] = theta[:, None]
    if obtuse is not None:
        alpha[:, obtuse] = math.pi - alpha[:, obtuse]
    return alpha


def _bisect(f: Callable[[float], float], lo: float, hi: float, flo: float) -> float:
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _theta_grid() -> np.ndarray:
    # dense near 0, where an obtuse branch leaves pi
    return np.unique(np.concatenate([
        np.geomspace(1e-9, 1e-2, 64),
        np.linspace(0.0, math.pi / 2, SCAN_POINTS + 1)[1:],
    ]))


def stationary_points(a, obtuse=None) -> list[StationaryPoint]:
    """Every root of the angle-sum equation on one branch (scan then bisect)."""
    w = validate_weights(a)
    if w.ndim != 1 or len(w) < 3:
        raise InvalidArgumentError("need a single vector of at least 3 weights")
    k = _parse_mask(obtuse, len(w))
    m = int(np.argmin(w))

    def excess(theta):
        return float(_branch_angles(theta, w, m, k).sum() - math.pi)

    grid = _theta_grid()
    f = _branch_angles(grid, w, m, k).sum(axis=1) - math.pi
    steps = np.diff(f)
    monotone = bool(np.all(steps >= 0) or np.all(steps <= 0))
    roots = []
    for i in range(len(grid)):
        if f[i] == 0.0:
            roots.append(grid[i])
        elif i + 1 < len(grid) and f[i] * f[i + 1] < 0:
            roots.append(_bisect(excess, grid[i], grid[i + 1], f[i]))
    points = []
    for theta in roots:
        alpha = _branch_angles(theta, w, m, k)[0]
        lam = float(w[m] * math.sin(theta))
        if lam < LAMBDA_FLOOR:
            continue
        points.append(StationaryPoint(
            alpha=alpha,
            lam=lam,
            value=float(_cosine_sum(w, alpha)),
            obtuse=k,
            angle_sum_residual=abs(float(alpha.sum()) - math.pi),
            monotone=monotone,
        ))
    return points


def solve_stationary(a, obtuse=None) -> StationaryPoint | None:
    """Best stationary point on the branch given by ``obtuse``, or None.

    ``obtuse`` is None (all acute), a 0-based index, or a set holding at
    most one index.  If the angle sum does not reach pi on this branch, the
    result is None.
    """
    pts = stationary_points(a, obtuse)
    return max(pts, key=lambda p: p.value) if pts else None


def vertex_points(a) -> list[StationaryPoint]:
    """The n vertices of the closed simplex; value ``sum a - 2 a_k``."""
    w = validate_weights(a)
    out = []
    for k in range(len(w)):
        alpha = np.zeros(len(w))
        alpha[k] = math.pi
        out.append(StationaryPoint(
            alpha=alpha,
            lam=0.0,
            value=float(w.sum() - 2.0 * w[k]),
            obtuse=k,
            angle_sum_residual=0.0,
        ))
    return out


def lambda_route(a) -> list[StationaryPoint]:
    """All interior stationary points (acute and single-obtuse branches) plus vertices."""
    w = validate_weights(a)
    pts = stationary_points(w, None)
    for k in range(len(w)):
        pts.extend(stationary_points(w, k))
    return pts + vertex_points(w)


# --- gradient route --------------------------------------------------------

def project_simplex(v: np.ndarray, total: float = math.pi) -> np.ndarray:
    """Euclidean projection of each row of ``v`` onto ``{x >= 0, sum x = total}``."""
    v = np.atleast_2d(v)
    u = -np.sort(-v, axis=1)
    css = np.cumsum(u, axis=1) - total
    ind = np.arange(1, v.shape[1] + 1)
    rho = np.count_nonzero(u - css / ind > 0, axis=1)
    shift = css[np.arange(len(v)), rho - 1] / rho
    return np.maximum(v - shift[:, None], 0.0)


@dataclass
class AscentResult:
    alpha: np.ndarray
    value: float
    converged: np.ndarray
    iterations: int
    all_values: np.ndarray = field(repr=False)


def gradient_ascent(a, starts: int = GA_STARTS, seed: int = 0, max_iter: int = GA_MAX_ITER,
                    gtol: float = GA_GTOL) -> AscentResult:
    """Projected gradient ascent from ``starts`` uniform random simplex points.

    All starts advance together as rows of one array.  A row stops when
    ``||P(alpha + grad) - alpha|| <= gtol``.
    """
    w = validate_weights(a)
    n = len(w)
    rng = np.random.default_rng(seed)
    X = project_simplex(rng.dirichlet(np.ones(n), size=starts) * math.pi)
    F = _cosine_sum(w, X)
    G = -w * np.sin(X)
    step = np.full(starts, 1.0 / w.max())
    active = np.ones(starts, dtype=bool)
    it = 0
    for it in range(1, max_iter + 1):
        pg = np.linalg.norm(project_simplex(X + G) - X, axis=1)
        active &= pg > gtol
        if not active.any():
            break
        rows = np.flatnonzero(active)
        t = step[rows]
        x0, f0, g0 = X[rows], F[rows], G[rows]
        pending = np.ones(len(rows), dtype=bool)
        xn, fn = x0.copy(), f0.copy()
        for _ in range(60):
            cand = project_simplex(x0[pending] + t[pending, None] * g0[pending])
            fc = _cosine_sum(w, cand)
            # slack of a few ulps: near the optimum f stops resolving progress
            slack = 8 * np.spacing(np.abs(f0[pending]) + w.sum())
            ok = fc >= f0[pending] + 1e-4 * ((cand - x0[pending]) * g0[pending]).sum(axis=1) - slack
            idx = np.flatnonzero(pending)
            xn[idx[ok]], fn[idx[ok]] = cand[ok], fc[ok]
            pending[idx[ok]] = False
            if not pending.any():
                break
            t[pending] *= 0.5
        gn = -w * np.sin(xn)
        s, y = xn - x0, gn - g0
        sy = (s * y).sum(axis=1)
        ss = (s * s).sum(axis=1)
        bb = np.where(sy < 0, ss / np.where(sy < 0, -sy, 1.0), 1e3)
        step[rows] = np.clip(bb, 1e-10, 1e10)
        X[rows], F[rows], G[rows] = xn, fn, gn
    else:
        pg = np.linalg.norm(project_simplex(X + G) - X, axis=1)
        active &= pg > gtol
    best = int(np.argmax(F))
    return AscentResult(alpha=X[best].copy(), value=float(F[best]), converged=~active,
                        iterations=it, all_values=F.copy())


# --- reports ---------------------------------------------------------------

@dataclass
class SharpnessReport:
    weights: np.ndarray
    max_value: float
    maximizer: np.ndarray
    gap_strong: float | None
    gap_normal: float
    rhs_strong: float | None
    rhs_normal: float
    equality_found: bool
    method: str
    methods_agree: bool
    value_lambda: float
    value_gradient: float
    on_boundary: bool
    lam: float | None
    tolerance: float
    experimental: bool = False
    stationary: list[StationaryPoint] = field(default_factory=list, repr=False)

    @property
    def holds(self) -> bool:
        rhs = self.rhs_strong if self.rhs_strong is not None else self.rhs_normal
        return self.max_value <= rhs + self.tolerance

    def as_record(self) -> dict:
        return {
            "weights": self.weights.tolist(),
            "max_value": self.max_value,
            "maximizer": self.maximizer.tolist(),
            "lambda": self.lam,
            "on_boundary": self.on_boundary,
            "rhs_strong": self.rhs_strong,
            "rhs_normal": self.rhs_normal,
            "gap_strong": self.gap_strong,
            "gap_normal": self.gap_normal,
            "equality_found": self.equality_found,
            "method": self.method,
            "methods_agree": self.methods_agree,
            "value_lambda": self.value_lambda,
            "value_gradient": self.value_gradient,
            "tolerance": self.tolerance,
            "holds": self.holds,
            "experimental": self.experimental,
        }


def _closed_form_rhs(w: np.ndarray, experimental: bool) -> tuple[float | None, float]:
    n = len(w)
    if n == 5:
        return float(_strong_rhs(np.sort(w))), float(_normal_rhs(w, COS_PI_5, 3))
    if n == 7:
        return None, float(_normal_rhs(w, math.cos(math.pi / 7), 4))
    if n % 2 == 1 and n >= 9:
        if not experimental:
            raise InvalidArgumentError(f"n={n} is only available as an experimental conjecture")
        return None, float(_normal_rhs(w, math.cos(math.pi / n), (n + 1) // 2))
    raise InvalidArgumentError(f"no closed-form bound to compare against for n={n}")


def max_cosine_sum(a, tol: float = DEFAULT_TOL, *, starts: int = GA_STARTS, seed: int = 0,
                   experimental: bool = False) -> SharpnessReport:
    """Maximum of ``sum a_i cos(alpha_i)`` over the angle simplex, by both routes.

    The routes agree when their values differ by at most ``10 * tol``;
    otherwise ``methods_agree`` is False and ``method`` names the route
    that found the larger value.
    """
    if not tol > 0:
        raise InvalidArgumentError(f"tolerance must be positive, got {tol}")
    w = validate_weights(a)
    if w.ndim != 1:
        raise InvalidArgumentError("weights must be a vector")
    rhs_strong, rhs_normal = _closed_form_rhs(w, experimental)

    candidates = lambda_route(w)
    interior = [p for p in candidates if not p.on_boundary]
    best = max(candidates, key=lambda p: p.value)
    ga = gradient_ascent(w, starts=starts, seed=seed)
    if not ga.converged.any() and not interior:
        raise ConvergenceError(
            "no interior stationary point and gradient ascent did not converge",
            {"weights": w.tolist(), "best_vertex": best.value, "ascent_value": ga.value,
             "ascent_iterations": ga.iterations},
        )

    agree = abs(best.value - ga.value) <= 10 * tol
    if agree or best.value >= ga.value:
        max_value, maximizer, lam = best.value, best.alpha, best.lam
        on_boundary = best.on_boundary
    else:
        max_value, maximizer, lam = ga.value, ga.alpha, None
        on_boundary = bool(np.any(ga.alpha == 0.0))
    if agree:
        method = "both-agree"
    else:
        method = "lambda-bisection" if best.value > ga.value else "gradient-ascent"

    gap_strong = None if rhs_strong is None else rhs_strong - max_value
    gap_normal = rhs_normal - max_value
    gap_main = gap_strong if gap_strong is not None else gap_normal
    return SharpnessReport(
        weights=w,
        max_value=max_value,
        maximizer=maximizer,
        gap_strong=gap_strong,
        gap_normal=gap_normal,
        rhs_strong=rhs_strong,
        rhs_normal=rhs_normal,
        equality_found=abs(gap_main) <= EQUALITY_TOL,
        method=method,
        methods_agree=agree,
        value_lambda=best.value,
        value_gradient=ga.value,
        on_boundary=on_boundary,
        lam=lam,
        tolerance=tol,
        experimental=len(w) >= 9,
        stationary=candidates,
    )


# --- Monte-Carlo sweep -----------------------------------------------------

@dataclass
class SweepSummary:
    n: int
    samples: int
    seed: int
    tolerance: float
    violations: int
    violations_by_theorem: dict[str, int]
    min_gap: float
    argmin: dict
    experimental: bool = False

    def as_record(self) -> dict:
        return {
            "n": self.n,
            "samples": self.samples,
            "seed": self.seed,
            "tolerance": self.tolerance,
            "violations": self.violations,
            "violations_by_theorem": dict(self.violations_by_theorem),
            "min_gap": self.min_gap,
            "argmin": self.argmin,
            "experimental": self.experimental,
            "weights_distribution": "log-uniform[0.1, 10]",
            "angles_distribution": "pi * Dirichlet(1, ..., 1)",
        }


def sweep_theorems(n: int, experimental: bool = False) -> tuple[str, ...]:
    if n == 5:
        return ("pentagonal-normal", "pentagonal-strong")
    if n == 7:
        return ("heptagonal",)
    if n % 2 == 1 and n >= 9:
        if not experimental:
            raise InvalidArgumentError(f"n={n} is only available with experimental=True")
        return ("odd-n-experimental",)
    raise InvalidArgumentError(f"no bound to sweep for n={n}")


def _draw(rng: np.random.Generator, m: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    lo, hi = np.log(WEIGHT_RANGE[0]), np.log(WEIGHT_RANGE[1])
    weights = np.exp(rng.uniform(lo, hi, size=(m, n)))
    angles = rng.dirichlet(np.ones(n), size=m) * math.pi
    return weights, angles


def _evaluate_block(n: int, weights: np.ndarray, angles: np.ndarray) -> dict[str, dict[str, np.ndarray]]:
    lhs = _cosine_sum(weights, angles)
    if n == 5:
        ws, angs = joint_sort(weights, angles)
        return {
            "pentagonal-normal": {"lhs": lhs, "rhs": _normal_rhs(weights, COS_PI_5, 3)},
            "pentagonal-strong": {"lhs": _cosine_sum(ws, angs), "rhs": _strong_rhs(ws)},
        }
    if n == 7:
        return {"heptagonal": {"lhs": lhs, "rhs": _normal_rhs(weights, math.cos(math.pi / 7), 4)}}
    return {"odd-n-experimental": {"lhs": lhs,
                                   "rhs": _normal_rhs(weights, math.cos(math.pi / n), (n + 1) // 2)}}


def monte_carlo_verify(n: int, samples: int, seed: int, tol: float = DEFAULT_TOL, *,
                       experimental: bool = False, workers: int = 1,
                       on_records: Callable[[Iterable[dict]], None] | None = None) -> SweepSummary:
    """Random search for violations of the bounds that apply to ``n`` weights.

    Weights are log-uniform on [0.1, 10] and angles uniform on the simplex
    (pi times a flat Dirichlet draw).  Samples come in fixed blocks of
    ``SWEEP_BLOCK``, each seeded by a child of ``SeedSequence(seed)``.  The
    outcome depends only on ``(n, samples, seed)``, not on ``workers``.
    ``on_records`` is called with per-sample records, one block at a time,
    in sample order.
    """
    theorems = sweep_theorems(n, experimental)
    if not isinstance(samples, (int, np.integer)) or samples < 1:
        raise InvalidArgumentError(f"samples must be a positive integer, got {samples!r}")
    if not tol > 0:
        raise InvalidArgumentError(f"tolerance must be positive, got {tol}")
    nblocks = -(-samples // SWEEP_BLOCK)
    children = np.random.SeedSequence(seed).spawn(nblocks)

    def run(b: int):
        m = min(SWEEP_BLOCK, samples - b * SWEEP_BLOCK)
        weights, angles = _draw(np.random.default_rng(children[b]), m, n)
        return b, weights, angles, _evaluate_block(n, weights, angles)

    violations = {t: 0 for t in theorems}
    min_gap, argmin = math.inf, {}
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        for b, weights, angles, res in pool.map(run, range(nblocks)):
            offset = b * SWEEP_BLOCK
            for t in theorems:
                gap = res[t]["rhs"] - res[t]["lhs"]
                violations[t] += int(np.count_nonzero(gap < -tol))
                i = int(np.argmin(gap))
                if gap[i] < min_gap:
                    min_gap = float(gap[i])
                    argmin = {
                        "sample": offset + i,
                        "theorem": t,
                        "weights": weights[i].tolist(),
                        "angles": angles[i].tolist(),
                        "lhs": float(res[t]["lhs"][i]),
                        "rhs": float(res[t]["rhs"][i]),
                        "gap": float(gap[i]),
                    }
            if on_records is not None:
                on_records(_block_records(offset, weights, angles, res, tol, seed, n))
    return SweepSummary(
        n=n,
        samples=int(samples),
        seed=seed,
        tolerance=tol,
        violations=sum(violations.values()),
        violations_by_theorem=violations,
        min_gap=min_gap,
        argmin=argmin,
        experimental=theorems == ("odd-n-experimental",),
    )


def _block_records(offset, weights, angles, res, tol, seed, n):
    for i in range(len(weights)):
        rec = {"sample": offset + i, "n": n, "seed": seed, "tolerance": tol,
               "weights": weights[i].tolist(), "angles": angles[i].tolist()}
        for t, r in res.items():
            lhs, rhs = float(r["lhs"][i]), float(r["rhs"][i])
            rec[t] = {"lhs": lhs, "rhs": rhs, "gap": rhs - lhs, "holds": rhs - lhs >= -tol}
        yield rec
