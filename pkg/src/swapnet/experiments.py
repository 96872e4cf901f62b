"""Numerical campaigns: ensemble statistics, path sweeps, threshold fits and
the two-path winner map.

Every sweep is split into work items with their own random stream derived
from ``(seed, item index)``. Items may run on a thread pool; results are
aggregated in item order, so output does not depend on the thread count.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .constants import MAX_PATH_LENGTH, TOL
from .ensembles import (
    FiducialSet,
    OrbitEnsemble,
    Rng,
    fixed_concurrence_set,
    local_orbit,
)
from .errors import InsufficientData, ParamOutOfRange, SwapnetError
from .states import DensityMatrix, project_to_state, validate_density_matrix
from .swap import average_swap_concurrence_batch, path_average_batch

__all__ = [
    "DEFAULT_GRID",
    "SweepConfig",
    "SweepRecord",
    "FitResult",
    "PairStats",
    "Histogram",
    "WinnerMap",
    "pair_ensemble_stats",
    "path_sweep",
    "concurrence_distribution",
    "fit_threshold",
    "fit_xi",
    "max_useful_length",
    "relative_range_curve",
    "rotation_unitary",
    "optimal_path_map",
    "REFERENCE_FIDUCIAL",
    "relaxed_fiducial",
    "PANEL_ANGLES",
]

DEFAULT_GRID = tuple(round(0.05 * k, 10) for k in range(1, 20))

# Stream tags so that different uses of the master seed never collide.
_FIDUCIALS, _ORBITS, _TUPLES, _INNER, _DIST = range(5)

FiducialBuilder = Callable[[float, int, Rng], FiducialSet]


def _default_threads() -> int:
    return os.cpu_count() or 1


def _run_items(fn, items, threads: int):
    if threads <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


class PairStats(NamedTuple):
    mean: float
    range: float


def pair_ensemble_stats(
    e1: OrbitEnsemble,
    e2: OrbitEnsemble,
    n_samples: int | None = None,
    rng: Rng | None = None,
) -> PairStats:
    """Mean and range (max - min) of the average swap concurrence over ``E1 x E2``.

    All ``len(e1) * len(e2)`` cross pairs are used unless ``n_samples`` is
    given, in which case that many pairs are drawn uniformly with ``rng``.
    """
    if len(e1) == 0 or len(e2) == 0:
        raise InsufficientData("ensembles must be nonempty")
    if n_samples is None:
        i1, i2 = (g.ravel() for g in np.meshgrid(np.arange(len(e1)), np.arange(len(e2)), indexing="ij"))
    else:
        if rng is None:
            raise ValueError("sampling pair statistics needs an Rng")
        i1 = rng.integers(len(e1), n_samples)
        i2 = rng.integers(len(e2), n_samples)
    values = np.empty(len(i1))
    step = 4096
    for lo in range(0, len(i1), step):
        sl = slice(lo, lo + step)
        values[sl] = average_swap_concurrence_batch(e1.members_at(i1[sl]), e2.members_at(i2[sl]))
    return PairStats(float(values.mean()), float(values.max() - values.min()))


# -- sweeps ------------------------------------------------------------------


@dataclass(frozen=True)
class SweepConfig:
    """Sampling plan for :func:`path_sweep`.

    When ``n_fiducial ** length <= exhaustive_tuple_limit`` every fiducial
    tuple is used (the full ``N x N`` cross product for l = 2 and N = 10);
    otherwise ``n_fiducial_tuples`` tuples are drawn. For each tuple
    ``n_input_tuples`` input tuples are drawn from the orbit ensembles.
    """

    length: int = 2
    grid: tuple = DEFAULT_GRID
    n_fiducial: int = 10
    n_per_side: int = 20
    n_fiducial_tuples: int = 50
    n_input_tuples: int = 200
    exhaustive_tuple_limit: int = 100
    seed: int = 0
    threads: int = field(default_factory=_default_threads, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "grid", tuple(float(c) for c in self.grid))
        for name in ("n_fiducial", "n_per_side", "n_fiducial_tuples", "n_input_tuples", "threads"):
            if getattr(self, name) < 1:
                raise ParamOutOfRange(f"{name} must be >= 1")
        if not (2 <= self.length <= MAX_PATH_LENGTH):
            raise ParamOutOfRange(f"length must lie in [2, {MAX_PATH_LENGTH}]")
        if not self.grid:
            raise ParamOutOfRange("concurrence grid is empty")
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise ParamOutOfRange("concurrence grid must be strictly increasing")
        if not all(0.0 < c < 1.0 for c in self.grid):
            raise ParamOutOfRange("grid concurrences must lie in (0, 1)")

    @property
    def exhaustive(self) -> bool:
        return self.n_fiducial ** self.length <= self.exhaustive_tuple_limit


@dataclass(frozen=True)
class SweepRecord:
    """Statistics at one ``(C, l)`` point.

    ``std_of_means`` is the population standard deviation of the per-tuple
    ensemble means. Ranges come from sampled input tuples and are therefore
    lower bounds on the true ensemble ranges.
    """

    C: float
    l: int
    stat_avg_mean: float
    avg_range: float
    std_of_means: float
    tuple_means: tuple
    tuple_ranges: tuple
    pruned_mass: float
    n_tuples: int
    n_inner: int
    n_failed: int = 0


def _fiducial_tuples(cfg: SweepConfig, rng: Rng) -> np.ndarray:
    n, length = cfg.n_fiducial, cfg.length
    if cfg.exhaustive:
        return np.array(list(itertools.product(range(n), repeat=length)), dtype=np.int64)
    return rng.integers(n, (cfg.n_fiducial_tuples, length))


def path_sweep(cfg: SweepConfig, fiducial_builder: FiducialBuilder | None = None) -> list[SweepRecord]:
    """Ensemble statistics of the end-to-end concurrence over the grid.

    ``fiducial_builder(c, n, rng)`` replaces :func:`fixed_concurrence_set`
    (e.g. with pure-state fixtures).
    """
    build = fiducial_builder or fixed_concurrence_set
    root = Rng(cfg.seed)
    records = []
    for ci, c in enumerate(cfg.grid):
        fs = build(c, cfg.n_fiducial, root.spawn(_FIDUCIALS, ci))
        orbits = [
            local_orbit(DensityMatrix(m, _checked=True), cfg.n_per_side, root.spawn(_ORBITS, ci, k))
            for k, m in enumerate(fs.members)
        ]
        tuples = _fiducial_tuples(cfg, root.spawn(_TUPLES, ci))
        size = cfg.n_per_side**2

        def work(item):
            ti, tup = item
            r = root.spawn(_INNER, ci, ti)
            idx = r.integers(size, (cfg.n_input_tuples, cfg.length))
            try:
                edges = np.stack([orbits[f].members_at(idx[:, k]) for k, f in enumerate(tup)], axis=1)
                values, pruned = path_average_batch(edges)
            except SwapnetError:
                return None
            return float(values.mean()), float(values.max() - values.min()), float(pruned.max())

        results = _run_items(work, list(enumerate(tuples)), cfg.threads)
        ok = [r for r in results if r is not None]
        means = np.array([r[0] for r in ok])
        ranges = np.array([r[1] for r in ok])
        records.append(
            SweepRecord(
                C=float(c),
                l=cfg.length,
                stat_avg_mean=float(means.mean()) if len(ok) else math.nan,
                avg_range=float(ranges.mean()) if len(ok) else math.nan,
                std_of_means=float(means.std()) if len(ok) else math.nan,
                tuple_means=tuple(means.tolist()),
                tuple_ranges=tuple(ranges.tolist()),
                pruned_mass=max((r[2] for r in ok), default=0.0),
                n_tuples=len(ok),
                n_inner=cfg.n_input_tuples,
                n_failed=len(results) - len(ok),
            )
        )
    return records


class Histogram(NamedTuple):
    edges: np.ndarray
    counts: np.ndarray
    samples: np.ndarray


def concurrence_distribution(
    c: float,
    n_samples: int,
    bins: int,
    rng: Rng,
    *,
    n_per_side: int = 20,
    fiducial_builder: FiducialBuilder | None = None,
) -> Histogram:
    """Histogram of the average swap concurrence for equal-concurrence inputs.

    Two fiducials of concurrence ``c`` are drawn, each spans an orbit
    ensemble, and ``n_samples`` cross pairs are drawn from the two orbits.
    Bins cover ``[0, c**2]``.
    """
    if not (0.0 < c < 1.0):
        raise ParamOutOfRange(f"concurrence {c} outside (0, 1)")
    if n_samples < 100:
        raise ParamOutOfRange("need at least 100 samples")
    build = fiducial_builder or fixed_concurrence_set
    fs = build(c, 2, rng.spawn(_FIDUCIALS))
    e1 = local_orbit(DensityMatrix(fs.members[0], _checked=True), n_per_side, rng.spawn(_ORBITS, 0))
    e2 = local_orbit(DensityMatrix(fs.members[1], _checked=True), n_per_side, rng.spawn(_ORBITS, 1))
    r = rng.spawn(_INNER)
    i1 = r.integers(len(e1), n_samples)
    i2 = r.integers(len(e2), n_samples)
    samples = average_swap_concurrence_batch(e1.members_at(i1), e2.members_at(i2))
    hi = max(c * c, float(samples.max()))
    counts, edges = np.histogram(samples, bins=bins, range=(0.0, hi))
    return Histogram(edges, counts, samples)


# -- fits --------------------------------------------------------------------


@dataclass(frozen=True)
class FitResult:
    """Hinge fit ``mean = max(0, m_l (C**l - c_th**l))``.

    ``xi`` is only set on results returned with a global length fit.
    """

    l: int
    m_l: float
    c_th: float
    residual: float
    constrained: bool = False
    degenerate: bool = False
    xi: float | None = None

    def predict(self, c) -> np.ndarray:
        c = np.asarray(c, dtype=float)
        return np.maximum(0.0, self.m_l * (c**self.l - self.c_th**self.l))


_GRID_STEP = 0.005
_UPPER_EDGE = 1.0 - _GRID_STEP


def _hinge_fit_at(c_th, x, y, length, constrain):
    basis = np.maximum(0.0, x**length - c_th**length)
    if constrain:
        m = 1.0 / (1.0 - c_th**length)
    else:
        den = float(basis @ basis)
        m = float(basis @ y) / den if den > 0 else 0.0
        m = max(m, 0.0)
    rms = math.sqrt(float(np.mean((m * basis - y) ** 2)))
    return m, rms


def fit_threshold(points: Sequence[tuple[float, float]], l: int, constrain: bool = False) -> FitResult:
    """Least-squares threshold/slope fit of ensemble means against ``C**l``.

    The threshold is found by a grid search over ``[0, 1)`` in steps of
    0.005 followed by two rounds of local refinement (to 5e-5). For each
    candidate the slope is solved in closed form, or fixed to
    ``1 / (1 - c_th**l)`` when ``constrain`` is set so the curve reaches 1
    at ``C = 1``. ``residual`` is the root-mean-square error.

    Raises
    ------
    InsufficientData
        With fewer than five points.
    """
    pts = [(float(c), float(y)) for c, y in points if np.isfinite(y)]
    if len(pts) < 5:
        raise InsufficientData(f"need >= 5 points for a threshold fit, got {len(pts)}")
    x = np.array([p[0] for p in pts])
    y = np.array([p[1] for p in pts])
    if np.all(np.abs(y) <= 1e-12):
        m, rms = _hinge_fit_at(_UPPER_EDGE, x, y, l, True)
        return FitResult(l, float(m), _UPPER_EDGE, float(rms), constrain, degenerate=True)

    def best_on(grid):
        scores = [(_hinge_fit_at(c, x, y, l, constrain)[1], c) for c in grid]
        return min(scores)[1]

    grid = np.round(np.arange(0.0, 1.0, _GRID_STEP), 12)
    c0 = best_on(grid)
    for step in (_GRID_STEP / 10, _GRID_STEP / 100):
        lo = max(0.0, c0 - 10 * step)
        hi = min(_UPPER_EDGE + _GRID_STEP - step, c0 + 10 * step)
        c0 = round(float(best_on(np.arange(lo, hi + step / 2, step))), 10)
    m, rms = _hinge_fit_at(c0, x, y, l, constrain)
    return FitResult(l, float(m), float(c0), float(rms), constrain, degenerate=bool(m <= 0.0))


def fit_xi(fits: Sequence[FitResult]) -> float:
    """Least-squares ``xi`` in ``c_th(l) = 1 - xi / l``.

    Minimising ``sum_l (c_th(l) - 1 + xi/l)**2`` gives
    ``xi = sum_l (1 - c_th(l)) / l  /  sum_l 1 / l**2``.
    """
    if len({f.l for f in fits}) < 3:
        raise InsufficientData("need fits for at least three path lengths")
    inv = np.array([1.0 / f.l for f in fits])
    gap = np.array([1.0 - f.c_th for f in fits])
    return float(inv @ gap / (inv @ inv))


def max_useful_length(c: float, c_star: float, fits: Sequence[FitResult]) -> int | None:
    """Largest fitted path length whose predicted mean reaches ``c_star``."""
    ok = [f.l for f in fits if float(f.predict(c)) >= c_star - 1e-12]
    return max(ok) if ok else None


def relative_range_curve(records: Sequence[SweepRecord], c_th: float | None = None) -> list[tuple[float, float]]:
    """``avg_range / stat_avg_mean`` above the threshold.

    Points at or below ``c_th`` (when given) and points whose mean is at
    most 1e-6 are dropped.
    """
    if len({r.l for r in records}) > 1:
        raise ValueError("records must share one path length")
    out = []
    for r in records:
        if c_th is not None and r.C <= c_th:
            continue
        if not (r.stat_avg_mean > 1e-6):
            continue
        out.append((r.C, r.avg_range / r.stat_avg_mean))
    return out


# -- two-path winner map ---------------------------------------------------

#: Reference fiducial for the two-path example, given to three decimals.
REFERENCE_FIDUCIAL = np.array(
    [
        [0.115, -0.093, -0.113, -0.145],
        [-0.093, 0.373, 0.154, 0.320],
        [-0.113, 0.154, 0.152, 0.161],
        [-0.145, 0.320, 0.161, 0.360],
    ]
)

#: Fixed angles (shared by both paths) for the four standard panels.
PANEL_ANGLES = {"A": math.pi / 2, "B": math.pi / 3, "C": math.pi / 4, "D": math.pi / 6}


def relaxed_fiducial(m=REFERENCE_FIDUCIAL) -> tuple[DensityMatrix, float]:
    """Accept a rounded printed state and return its nearest valid state.

    The matrix is checked at the printed-precision tolerance (1e-3), then
    projected onto the unit-trace PSD set. The max-norm projection distance
    is returned alongside.
    """
    validate_density_matrix(m, herm_tol=TOL.printed_matrix, trace_tol=TOL.printed_matrix, psd_tol=TOL.printed_matrix)
    return project_to_state(m)


def rotation_unitary(theta1: float, theta2: float) -> np.ndarray:
    """``[[cos(t1/2), -e^{-i t2} sin(t1/2)], [e^{i t2} sin(t1/2), cos(t1/2)]]``."""
    c, s = math.cos(theta1 / 2), math.sin(theta1 / 2)
    e = complex(math.cos(theta2), math.sin(theta2))
    return np.array([[c, -s / e], [e * s, c]], dtype=np.complex128)


@dataclass(frozen=True)
class WinnerMap:
    """``winner[i, j]`` compares path values at ``theta1[i]`` and ``theta2[j]``."""

    theta1: np.ndarray
    theta2: np.ndarray
    cbar_p1: np.ndarray
    cbar_p2: np.ndarray
    winner: np.ndarray

    def rows(self):
        for i, t1 in enumerate(self.theta1):
            for j, t2 in enumerate(self.theta2):
                yield float(t1), float(t2), float(self.cbar_p1[i, j]), float(self.cbar_p2[i, j]), str(self.winner[i, j])


def _same_rotation_values(rho: np.ndarray, unitaries: Sequence[np.ndarray], threads: int) -> np.ndarray:
    # each path carries two copies of (u (x) u) rho (u (x) u)^dagger
    us = np.stack(unitaries)

    def work(chunk):
        u = us[chunk]
        states = np.einsum("zij,zkl->zikjl", u, u).reshape(-1, 4, 4)
        states = states @ rho @ np.conj(np.swapaxes(states, -1, -2))
        return average_swap_concurrence_batch(states, states)

    chunks = [np.arange(k, min(k + 16, len(us))) for k in range(0, len(us), 16)]
    return np.concatenate(_run_items(work, chunks, threads)) if chunks else np.empty(0)


def optimal_path_map(
    fiducial,
    theta1_grid: Sequence[float],
    theta2_grid: Sequence[float],
    fixed_t2: float,
    fixed_t1: float,
    threads: int = 1,
) -> WinnerMap:
    """Which of two 2-edge paths gives the larger average swap concurrence.

    Path P1 carries ``rho1 = rho2 = (u1 (x) u1) rho (u1 (x) u1)^dagger`` with
    ``u1 = u(theta1, fixed_t2)``; P2 likewise with ``u2 = u(fixed_t1, theta2)``.
    Differences within 1e-12 are reported as ``"TIE"``.
    """
    if isinstance(fiducial, DensityMatrix):
        rho = fiducial.mat
    else:
        rho = relaxed_fiducial(fiducial)[0].mat
    t1 = np.asarray(theta1_grid, dtype=float)
    t2 = np.asarray(theta2_grid, dtype=float)
    v1 = _same_rotation_values(rho, [rotation_unitary(a, fixed_t2) for a in t1], threads)
    v2 = _same_rotation_values(rho, [rotation_unitary(fixed_t1, b) for b in t2], threads)
    p1 = np.broadcast_to(v1[:, None], (len(t1), len(t2))).copy()
    p2 = np.broadcast_to(v2[None, :], (len(t1), len(t2))).copy()
    winner = np.where(p1 > p2 + TOL.tie_band, "P1", np.where(p1 < p2 - TOL.tie_band, "P2", "TIE"))
    return WinnerMap(t1, t2, p1, p2, winner)
