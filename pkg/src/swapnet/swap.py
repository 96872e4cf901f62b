"""Entanglement swapping by Bell-state measurement, single and along paths.

Conventions: ``rho1`` lives on qubits (a, b), ``rho2`` on (c, d), the joint
index on (a, b, c, d) is ``8*a + 4*b + 2*c + d`` and the Bell measurement acts
on (b, c). Paths are reduced left to right: the running end-to-end operator on
(a, x) is always the left factor and the next edge state the right factor.

Internally branch operators are kept unnormalised. Their trace is the branch
probability and, since concurrence is homogeneous of degree one, the outcome
weighted sum ``sum_i p_i C(rho_i)`` equals ``sum_i C(O_i)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .constants import MAX_PATH_LENGTH, TOL
from .entanglement import concurrence_batch
from .errors import InvalidState, PathTooLong
from .states import BELL_VECTORS, DensityMatrix, validate_density_matrix

__all__ = [
    "SwapOutcome",
    "PathSpec",
    "PathResult",
    "OracleKind",
    "swap_operators",
    "swap_pair",
    "average_swap_concurrence",
    "average_swap_concurrence_batch",
    "evaluate_path",
    "path_average_concurrence",
    "path_average_batch",
    "predicted_single_swap",
    "werner_path_concurrence",
    "werner_threshold",
]

_BELL_2x2 = BELL_VECTORS.reshape(4, 2, 2)


@dataclass(frozen=True)
class SwapOutcome:
    """One Bell-measurement branch.

    ``state`` is ``None`` and ``degenerate`` is set when the outcome
    probability is at or below the prune threshold.
    """

    bell_index: int
    probability: float
    state: DensityMatrix | None
    degenerate: bool = False


@dataclass(frozen=True)
class PathSpec:
    edge_states: tuple

    def __post_init__(self):
        edges = tuple(
            e if isinstance(e, DensityMatrix) else validate_density_matrix(e)
            for e in self.edge_states
        )
        if not edges:
            raise InvalidState("a path needs at least one edge state")
        object.__setattr__(self, "edge_states", edges)

    @property
    def length(self) -> int:
        return len(self.edge_states)


class PathResult(NamedTuple):
    value: float
    pruned_mass: float
    n_branches: int


def swap_operators(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Unnormalised post-measurement operators on (a, d).

    Parameters
    ----------
    left, right : ndarray, shape (..., 4, 4)
        States on (a, b) and (c, d); leading shapes must broadcast.

    Returns
    -------
    ndarray, shape (..., 4, 4, 4)
        Axis ``-3`` is the Bell outcome; the trace of each operator is the
        outcome probability.
    """
    left = np.asarray(left, dtype=np.complex128)
    right = np.asarray(right, dtype=np.complex128)
    lead = np.broadcast_shapes(left.shape[:-2], right.shape[:-2])
    l5 = np.broadcast_to(left, lead + (4, 4)).reshape((-1, 2, 2, 2, 2))
    r5 = np.broadcast_to(right, lead + (4, 4)).reshape((-1, 2, 2, 2, 2))
    # O_i[a,d,A,D] = sum conj(beta_i[b,c]) rho1[a,b,A,B] rho2[c,d,C,D] beta_i[B,C]
    half = np.einsum("ibc,zabAB->ziacAB", np.conj(_BELL_2x2), l5)
    half = np.einsum("ziacAB,iBC->ziacAC", half, _BELL_2x2)
    out = np.einsum("ziacAC,zcdCD->ziadAD", half, r5)
    return out.reshape(lead + (4, 4, 4))


def swap_pair(rho1, rho2) -> list[SwapOutcome]:
    """Decompose swapping ``rho1`` with ``rho2`` into its four Bell outcomes."""
    r1 = rho1 if isinstance(rho1, DensityMatrix) else validate_density_matrix(rho1)
    r2 = rho2 if isinstance(rho2, DensityMatrix) else validate_density_matrix(rho2)
    ops = swap_operators(r1.mat, r2.mat)
    outcomes = []
    for i in range(4):
        p = float(np.real(np.trace(ops[i])))
        if p <= TOL.prune:
            outcomes.append(SwapOutcome(i, max(p, 0.0), None, degenerate=True))
            continue
        o = ops[i] / p
        o = 0.5 * (o + np.conj(o.T))
        outcomes.append(SwapOutcome(i, p, validate_density_matrix(o)))
    return outcomes


def _pruned(ops: np.ndarray, prune: float):
    tr = np.real(np.trace(ops, axis1=-2, axis2=-1))
    small = tr <= prune
    mass = np.where(small, np.clip(tr, 0.0, None), 0.0).sum(axis=-1)
    if np.any(small):
        ops = np.where(small[..., None, None], 0.0, ops)
    return ops, mass


def average_swap_concurrence_batch(left, right, prune: float = TOL.prune) -> np.ndarray:
    """Average output concurrence for stacks of state pairs."""
    ops = swap_operators(left, right)
    ops, _ = _pruned(ops, prune)
    return concurrence_batch(ops).sum(axis=-1)


def average_swap_concurrence(rho1, rho2) -> float:
    """``sum_i p_i C(rho_out_i)`` over the four Bell outcomes, pruned ones skipped."""
    r1 = rho1 if isinstance(rho1, DensityMatrix) else validate_density_matrix(rho1)
    r2 = rho2 if isinstance(rho2, DensityMatrix) else validate_density_matrix(rho2)
    return float(average_swap_concurrence_batch(r1.mat, r2.mat))


def _chunk_size(length: int, budget: int = 1 << 15) -> int:
    return max(1, budget // 4 ** (length - 1))


def path_average_batch(
    edges: np.ndarray,
    prune: float = TOL.prune,
    max_length: int = MAX_PATH_LENGTH,
):
    """End-to-end average concurrence for a stack of paths.

    Parameters
    ----------
    edges : ndarray, shape (B, l, 4, 4)
        Edge states, left to right.

    Returns
    -------
    values : ndarray, shape (B,)
    pruned_mass : ndarray, shape (B,)
        Total probability of branches dropped at the prune threshold; since
        concurrence is at most one this bounds the truncation error.
    """
    edges = np.asarray(edges, dtype=np.complex128)
    nb, length = edges.shape[:2]
    if length < 1:
        raise InvalidState("a path needs at least one edge")
    if length > max_length:
        raise PathTooLong(f"path length {length} exceeds cap {max_length}")
    values = np.empty(nb)
    pruned = np.zeros(nb)
    step = _chunk_size(length)
    for lo in range(0, nb, step):
        hi = min(nb, lo + step)
        ops = edges[lo:hi, 0][:, None]
        mass = np.zeros(hi - lo)
        for k in range(1, length):
            nxt = edges[lo:hi, k][:, None]
            ops = swap_operators(ops, nxt).reshape(hi - lo, -1, 4, 4)
            ops, m = _pruned(ops, prune)
            mass += m
        values[lo:hi] = concurrence_batch(ops).sum(axis=1)
        pruned[lo:hi] = mass
    return values, pruned


def evaluate_path(path, max_length: int = MAX_PATH_LENGTH) -> PathResult:
    """Full enumeration of the ``4**(l-1)`` outcome tree of a path."""
    spec = path if isinstance(path, PathSpec) else PathSpec(tuple(path))
    if spec.length > max_length:
        raise PathTooLong(f"path length {spec.length} exceeds cap {max_length}")
    edges = np.stack([e.mat for e in spec.edge_states])[None]
    v, m = path_average_batch(edges, max_length=max_length)
    return PathResult(float(v[0]), float(m[0]), 4 ** (spec.length - 1))


def path_average_concurrence(path, max_length: int = MAX_PATH_LENGTH) -> float:
    """Average end-to-end concurrence after ``l - 1`` swaps (``C(rho1)`` for l = 1)."""
    return evaluate_path(path, max_length).value


class OracleKind(str, enum.Enum):
    PRODUCT = "product"
    WERNER_PAIR = "werner_pair"


def predicted_single_swap(kind, c1: float, c2: float) -> float:
    """Closed-form single-swap average concurrence.

    ``PRODUCT`` (pure x pure, pure x X-state, pure x mixed) gives ``c1*c2``;
    ``WERNER_PAIR`` (Werner or isotropic pairs) gives
    ``max(0, (c1 + c2 + 2*c1*c2 - 1)/3)``.
    """
    kind = OracleKind(kind)
    if kind is OracleKind.PRODUCT:
        return c1 * c2
    return max(0.0, (c1 + c2 + 2.0 * c1 * c2 - 1.0) / 3.0)


def werner_path_concurrence(cs: Sequence[float]) -> float:
    cs = list(cs)
    if not cs:
        raise ValueError("need at least one edge concurrence")
    prod = math.prod((1.0 + 2.0 * c) / 3.0 for c in cs)
    return max(0.0, 1.5 * prod - 0.5)


def werner_threshold(length: int) -> float:
    """Edge concurrence below which a Werner path of ``length`` edges averages zero."""
    if length < 1:
        raise ValueError("path length must be >= 1")
    return 0.5 * (3.0 ** (1.0 - 1.0 / length) - 1.0)
