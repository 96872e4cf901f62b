"""Random states: Haar single-qubit unitaries, local-unitary orbits and
fixed-concurrence fiducial sets."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from . import qmat
from .constants import TOL
from .entanglement import concurrence
from .errors import GenerationFailed, ParamOutOfRange
from .states import BELL_VECTORS, DensityMatrix, format_state, parse_state, validate_density_matrix

__all__ = [
    "Rng",
    "OrbitEnsemble",
    "FiducialSet",
    "haar_unitary",
    "haar_unitaries",
    "local_orbit",
    "rotate_batch",
    "ginibre_state",
    "fixed_concurrence_set",
    "pure_fiducial_set",
    "dump_fiducial_set",
    "load_fiducial_set",
]


class Rng:
    """Seeded counter-based (Philox) generator addressed by ``(seed, stream)``.

    ``stream`` is a tuple of non-negative integers; :meth:`spawn` appends to it,
    so independent tasks can derive their own generators without sharing
    state and the draws do not depend on scheduling.
    """

    def __init__(self, seed: int = 0, stream: int | Sequence[int] = 0):
        self.seed = int(seed)
        self.stream = (int(stream),) if np.isscalar(stream) else tuple(int(s) for s in stream)
        ss = np.random.SeedSequence(self.seed, spawn_key=self.stream)
        self.generator = np.random.Generator(np.random.Philox(ss))

    def spawn(self, *keys: int) -> "Rng":
        return Rng(self.seed, self.stream + tuple(int(k) for k in keys))

    def normal(self, size):
        return self.generator.standard_normal(size)

    def integers(self, high: int, size):
        return self.generator.integers(0, high, size=size)

    def __repr__(self):
        return f"Rng(seed={self.seed}, stream={self.stream})"


def haar_unitaries(rng: Rng, n: int) -> np.ndarray:
    """Draw ``n`` Haar-random 2x2 unitaries by QR of complex Ginibre matrices.

    ``M = M1 + i M2`` with standard-normal entries, ``M = QR``, and the
    result is ``Q @ diag(R_kk / |R_kk|)``. Draws with a near-zero pivot are
    replaced by fresh ones.
    """
    out = np.empty((n, 2, 2), dtype=np.complex128)
    filled = 0
    while filled < n:
        k = n - filled
        g = rng.normal((k, 2, 2)) + 1j * rng.normal((k, 2, 2))
        q, r = np.linalg.qr(g)
        diag = np.diagonal(r, axis1=1, axis2=2)
        mag = np.abs(diag)
        ok = np.all(mag >= TOL.haar_pivot, axis=1)
        phases = diag[ok] / mag[ok]
        u = q[ok] * phases[:, None, :]
        out[filled : filled + len(u)] = u
        filled += len(u)
    return out


def haar_unitary(rng: Rng) -> np.ndarray:
    return haar_unitaries(rng, 1)[0]


def _kron_pairs(ua: np.ndarray, ub: np.ndarray) -> np.ndarray:
    return np.einsum("zij,zkl->zikjl", ua, ub).reshape(-1, 4, 4)


def rotate_batch(rho: np.ndarray, ua: np.ndarray, ub: np.ndarray) -> np.ndarray:
    """``(ua_k (x) ub_k) rho (ua_k (x) ub_k)^dagger`` for each ``k``.

    ``rho`` may be a single matrix or a stack aligned with ``ua``/``ub``.
    """
    u = _kron_pairs(ua, ub)
    return u @ rho @ qmat.dagger(u)


@dataclass(frozen=True)
class OrbitEnsemble:
    """States ``(ua_i (x) ub_j) rho (ua_i (x) ub_j)^dagger`` for all ``i, j``.

    Member ``k`` uses ``ua[k // n]`` and ``ub[k % n]``.
    """

    fiducial: np.ndarray
    ua: np.ndarray
    ub: np.ndarray

    @property
    def n_per_side(self) -> int:
        return len(self.ua)

    def __len__(self) -> int:
        return len(self.ua) * len(self.ub)

    def members_at(self, index: np.ndarray) -> np.ndarray:
        index = np.asarray(index)
        n = len(self.ub)
        return rotate_batch(self.fiducial, self.ua[index // n], self.ub[index % n])

    @property
    def members(self) -> np.ndarray:
        return self.members_at(np.arange(len(self)))

    @property
    def unitary_pairs(self) -> list[tuple[np.ndarray, np.ndarray]]:
        n = len(self.ub)
        return [(self.ua[k // n], self.ub[k % n]) for k in range(len(self))]


def local_orbit(rho, n_per_side: int, rng: Rng | None = None, *, unitaries=None) -> OrbitEnsemble:
    """Local-unitary orbit of ``rho`` with ``n_per_side**2`` members.

    ``unitaries`` optionally supplies fixed ``(ua_list, ub_list)`` instead of
    Haar draws from ``rng``.
    """
    if n_per_side < 1:
        raise ParamOutOfRange("n_per_side must be >= 1")
    state = rho.mat if isinstance(rho, DensityMatrix) else validate_density_matrix(rho).mat
    if unitaries is not None:
        ua, ub = (np.asarray(u, dtype=np.complex128).reshape(-1, 2, 2) for u in unitaries)
    else:
        if rng is None:
            raise ValueError("need an Rng or explicit unitaries")
        ua = haar_unitaries(rng, n_per_side)
        ub = haar_unitaries(rng, n_per_side)
    if len(ua) != n_per_side or len(ub) != n_per_side:
        raise ParamOutOfRange("unitary lists must have n_per_side entries")
    return OrbitEnsemble(np.array(state), ua, ub)


@dataclass(frozen=True)
class FiducialSet:
    concurrence: float
    members: np.ndarray
    seed: int = 0

    def __len__(self) -> int:
        return len(self.members)


def ginibre_state(rng: Rng) -> np.ndarray:
    """Random full-rank state ``G G^dagger / Tr(G G^dagger)`` from a 4x4 Ginibre ``G``."""
    g = rng.normal((4, 4)) + 1j * rng.normal((4, 4))
    m = g @ qmat.dagger(g)
    return m / np.real(np.trace(m))


def _max_entangled(rng: Rng) -> np.ndarray:
    ua, ub = haar_unitaries(rng, 2)
    phi = np.kron(ua, ub) @ BELL_VECTORS[0]
    return np.outer(phi, np.conj(phi))


def _bisect_mixture(rho0: np.ndarray, target: np.ndarray, c: float) -> np.ndarray | None:
    # C((1-t) rho0 + t |phi><phi|) is convex in t with C(0) <= c and C(1) = 1,
    # so the sublevel set {C <= c} is an interval [0, t*] and bisection is exact.
    lo, hi = 0.0, 1.0
    best, best_err = None, np.inf
    for _ in range(200):
        t = 0.5 * (lo + hi)
        rho = (1.0 - t) * rho0 + t * target
        val = concurrence(rho)
        err = abs(val - c)
        if err < best_err:
            best, best_err = rho, err
        if err <= 1e-12 or hi - lo < 1e-16:
            break
        if val < c:
            lo = t
        else:
            hi = t
    return best if best_err <= 1e-9 else None


def fixed_concurrence_set(c: float, n: int, rng: Rng, max_attempts: int = 100) -> FiducialSet:
    """Draw ``n`` full-rank states of concurrence ``c`` with distinct purities.

    Each member mixes a Ginibre-induced random state (redrawn until its
    concurrence is at most ``c``) with a random maximally entangled pure
    state, bisecting on the mixing weight to hit ``c``. Members are
    rejected and redrawn if they are nearly rank-deficient or their purity
    lies within 1e-4 of an accepted member's.

    Raises
    ------
    GenerationFailed
        If a member cannot be produced within ``max_attempts`` draws.
    """
    c = float(c)
    if not (0.0 < c < 1.0):
        raise ParamOutOfRange(f"target concurrence {c} outside (0, 1)")
    if n < 1:
        raise ParamOutOfRange("need at least one member")
    members: list[np.ndarray] = []
    purities: list[float] = []
    for k in range(n):
        sub = rng.spawn(k)
        for _ in range(max_attempts):
            rho0 = ginibre_state(sub)
            target = _max_entangled(sub)
            if concurrence(rho0) > c:
                continue
            rho = _bisect_mixture(rho0, target, c)
            if rho is None:
                continue
            rho = 0.5 * (rho + qmat.dagger(rho))
            if qmat.eigvalsh_batch(rho[None])[0, -1] <= 1e-8:
                continue
            pur = float(np.sum(np.abs(rho) ** 2))
            if any(abs(pur - q) <= 1e-4 for q in purities):
                continue
            members.append(rho)
            purities.append(pur)
            break
        else:
            raise GenerationFailed(
                f"could not generate member {k} of S_C at C={c} in {max_attempts} attempts"
            )
    return FiducialSet(c, np.stack(members), rng.seed)


def pure_fiducial_set(c: float, n: int, rng: Rng) -> FiducialSet:
    """Locally rotated pure states of concurrence ``c``; a limiting-case fixture."""
    lam = (1.0 + np.sqrt(max(1.0 - c * c, 0.0))) / 2.0
    psi = np.array([np.sqrt(lam), 0, 0, np.sqrt(1.0 - lam)], dtype=np.complex128)
    ua = haar_unitaries(rng, n)
    ub = haar_unitaries(rng, n)
    vecs = _kron_pairs(ua, ub) @ psi
    return FiducialSet(float(c), np.einsum("zi,zj->zij", vecs, np.conj(vecs)), rng.seed)


def dump_fiducial_set(fs: FiducialSet, path) -> None:
    """Header ``C=<value> N=<count> seed=<seed>`` then one 4-line block per member."""
    parts = [f"C={fs.concurrence:.17g} N={len(fs)} seed={fs.seed}\n"]
    for m in fs.members:
        parts.append("\n" + format_state(m))
    Path(path).write_text("".join(parts), encoding="utf-8", newline="\n")


def load_fiducial_set(path) -> FiducialSet:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines:
        raise ValueError(f"{path}: empty fiducial file")
    try:
        header = dict(tok.split("=", 1) for tok in lines[0].split())
        c, n, seed = float(header["C"]), int(header["N"]), int(header["seed"])
    except (KeyError, ValueError):
        raise ValueError(f"{path}: bad header {lines[0]!r}") from None
    body = [ln for ln in lines[1:] if ln.strip()]
    if len(body) != 4 * n:
        raise ValueError(f"{path}: expected {4 * n} matrix lines, found {len(body)}")
    members = [parse_state("\n".join(body[4 * k : 4 * k + 4])) for k in range(n)]
    return FiducialSet(c, np.stack(members), seed)
