"""Two-qubit states: Bell basis, state families, validation and text I/O.

Basis order is ``|00>, |01>, |10>, |11>`` with index ``2*first + second``.
The Bell basis is always ordered ``Phi+, Phi-, Psi+, Psi-`` (indices 0..3).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import qmat
from .constants import TOL
from .errors import NotHermitian, NotNormalized, NotPSD, ParamOutOfRange

__all__ = [
    "BELL_LABELS",
    "BELL_VECTORS",
    "DensityMatrix",
    "PureState",
    "Family",
    "StateFamily",
    "bell_state",
    "bell_projector",
    "make_pure_schmidt",
    "make_werner",
    "make_isotropic",
    "make_bell_diagonal",
    "make_x_state",
    "validate_density_matrix",
    "project_to_state",
    "family_state",
    "purity",
    "local_rotate",
    "format_state",
    "parse_state",
    "read_state_file",
    "write_state_file",
    "MAXIMALLY_MIXED",
]

BELL_LABELS = ("Phi+", "Phi-", "Psi+", "Psi-")

_S = 1.0 / math.sqrt(2.0)
#: Row ``i`` holds the computational-basis amplitudes of Bell state ``i``.
BELL_VECTORS = np.array(
    [
        [_S, 0, 0, _S],
        [_S, 0, 0, -_S],
        [0, _S, _S, 0],
        [0, _S, -_S, 0],
    ],
    dtype=np.complex128,
)
BELL_VECTORS.setflags(write=False)

MAXIMALLY_MIXED = np.eye(4, dtype=np.complex128) / 4
MAXIMALLY_MIXED.setflags(write=False)


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.complex128)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class PureState:
    """Normalised two-qubit state vector."""

    vec: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vec, dtype=np.complex128).reshape(-1)
        if v.shape != (4,):
            raise ValueError(f"pure state needs 4 amplitudes, got {v.shape}")
        norm = np.linalg.norm(v)
        if abs(norm - 1.0) > TOL.unit_norm:
            raise NotNormalized(f"state vector norm {norm:.12f} differs from 1")
        object.__setattr__(self, "vec", _readonly(v))

    def density(self) -> "DensityMatrix":
        return DensityMatrix(np.outer(self.vec, np.conj(self.vec)))


@dataclass(frozen=True)
class DensityMatrix:
    """Validated 4x4 density matrix.

    Construction checks Hermiticity, unit trace and positivity using the
    default tolerances; use :func:`validate_density_matrix` for custom ones.
    """

    mat: np.ndarray
    _checked: bool = field(default=False, repr=False, compare=False)

    def __post_init__(self):
        m = qmat.as_cmatrix(self.mat)
        if not self._checked:
            _check_state(m, TOL.hermitian, TOL.trace, TOL.psd_clamp)
        object.__setattr__(self, "mat", _readonly(m))

    def __array__(self, dtype=None, copy=None):
        return self.mat if dtype is None else self.mat.astype(dtype)


def _check_state(m: np.ndarray, herm_tol: float, trace_tol: float, psd_tol: float) -> None:
    if m.shape != (4, 4):
        raise ValueError(f"density matrix must be 4x4, got {m.shape}")
    resid = float(qmat.hermitian_residual(m))
    if resid > herm_tol:
        raise NotHermitian(f"Hermiticity violated: max|rho - rho^dagger| = {resid:.3e}")
    tr = np.trace(m)
    if abs(tr - 1.0) > trace_tol:
        raise NotNormalized(f"trace violated: |Tr(rho) - 1| = {abs(tr - 1.0):.3e}")
    lo = qmat.eigvalsh_batch(m[None])[0, -1]
    if lo < -psd_tol:
        raise NotPSD(f"positivity violated: smallest eigenvalue {lo:.3e}")


def validate_density_matrix(
    m,
    *,
    herm_tol: float = TOL.hermitian,
    trace_tol: float = TOL.trace,
    psd_tol: float = TOL.psd_clamp,
) -> DensityMatrix:
    """Check the three density-matrix invariants and wrap ``m``.

    Raises
    ------
    NotHermitian, NotNormalized, NotPSD
        Naming the violated invariant and the measured residual.
    """
    a = qmat.as_cmatrix(m)
    _check_state(a, herm_tol, trace_tol, psd_tol)
    return DensityMatrix(a, _checked=True)


def _project_simplex(w: np.ndarray) -> np.ndarray:
    # Euclidean projection onto {x >= 0, sum x = 1}
    u = np.sort(w)[::-1]
    css = np.cumsum(u)
    k = np.arange(1, len(w) + 1)
    rho = np.nonzero(u * k > css - 1.0)[0][-1]
    theta = (css[rho] - 1.0) / (rho + 1.0)
    return np.clip(w - theta, 0.0, None)


def project_to_state(m) -> tuple[DensityMatrix, float]:
    """Frobenius-nearest density matrix to the Hermitian part of ``m``.

    Returns the projected state and the max-norm distance moved.
    """
    a = qmat.as_cmatrix(m)
    h = 0.5 * (a + qmat.dagger(a))
    w, v = qmat.eigh_batch(h[None])
    p = _project_simplex(w[0])
    out = (v[0] * p[None, :]) @ qmat.dagger(v[0])
    out = 0.5 * (out + qmat.dagger(out))
    return DensityMatrix(out), float(np.max(np.abs(out - a)))


def bell_state(i: int) -> PureState:
    return PureState(BELL_VECTORS[i])


def bell_projector(i: int) -> np.ndarray:
    b = BELL_VECTORS[i]
    return np.outer(b, np.conj(b))


def _check_unit_interval(name: str, x: float) -> float:
    x = float(x)
    if not (0.0 <= x <= 1.0):
        raise ParamOutOfRange(f"{name}={x} outside [0, 1]")
    return x


def make_pure_schmidt(lam: float) -> PureState:
    """``sqrt(lam)|00> + sqrt(1 - lam)|11>``."""
    lam = _check_unit_interval("lambda", lam)
    return PureState(np.array([math.sqrt(lam), 0, 0, math.sqrt(1.0 - lam)]))


def _noisy_bell(index: int, p: float, name: str) -> DensityMatrix:
    p = _check_unit_interval(name, p)
    m = (1.0 - p) * bell_projector(index) + p * np.eye(4) / 4
    return DensityMatrix(m, _checked=True)


def make_werner(gamma: float) -> DensityMatrix:
    """``(1 - gamma)|Psi-><Psi-| + gamma I/4``."""
    return _noisy_bell(3, gamma, "gamma")


def make_isotropic(alpha: float) -> DensityMatrix:
    """``(1 - alpha)|Phi+><Phi+| + alpha I/4``."""
    return _noisy_bell(0, alpha, "alpha")


def make_bell_diagonal(weights: Sequence[float]) -> DensityMatrix:
    w = np.asarray(weights, dtype=float)
    if w.shape != (4,):
        raise ParamOutOfRange(f"need 4 Bell weights, got {w.shape}")
    if np.any(w < 0) or np.any(w > 1):
        raise ParamOutOfRange(f"Bell weights must lie in [0, 1]: {w}")
    if abs(w.sum() - 1.0) > TOL.probability_sum:
        raise NotNormalized(f"Bell weights sum to {w.sum():.12f}")
    m = np.einsum("k,ki,kj->ij", w, BELL_VECTORS, np.conj(BELL_VECTORS))
    return DensityMatrix(m, _checked=True)


def make_x_state(g11, g22, g33, g44, g14, g23) -> DensityMatrix:
    """X-shaped state with real coherences ``g14`` (00-11) and ``g23`` (01-10)."""
    diag = np.array([g11, g22, g33, g44], dtype=float)
    if np.any(diag < 0):
        raise NotPSD(f"negative population in X-state diagonal {diag}")
    if abs(diag.sum() - 1.0) > TOL.probability_sum:
        raise NotNormalized(f"X-state populations sum to {diag.sum():.12f}")
    eps = 1e-12
    if g11 * g44 + eps < g14 * g14:
        raise NotPSD(f"g11*g44 = {g11 * g44:.3e} < g14^2 = {g14 * g14:.3e}")
    if g22 * g33 + eps < g23 * g23:
        raise NotPSD(f"g22*g33 = {g22 * g33:.3e} < g23^2 = {g23 * g23:.3e}")
    m = np.diag(diag).astype(np.complex128)
    m[0, 3] = m[3, 0] = g14
    m[1, 2] = m[2, 1] = g23
    return DensityMatrix(m, _checked=True)


class Family(str, enum.Enum):
    PURE_SCHMIDT = "pure"
    WERNER = "werner"
    ISOTROPIC = "isotropic"
    BELL_DIAGONAL = "bell_diagonal"
    X_STATE = "x_state"
    GENERAL = "general"


_PARAM_COUNTS = {
    Family.PURE_SCHMIDT: 1,
    Family.WERNER: 1,
    Family.ISOTROPIC: 1,
    Family.BELL_DIAGONAL: 4,
    Family.X_STATE: 6,
    Family.GENERAL: 16,
}


@dataclass(frozen=True)
class StateFamily:
    """A family tag plus its parameters.

    ``params`` is ``(lambda,)``, ``(gamma,)``, ``(alpha,)``, the four Bell
    weights, ``(g11, g22, g33, g44, g14, g23)``, or the 16 row-major matrix
    entries for ``GENERAL``.
    """

    tag: Family
    params: tuple

    def __post_init__(self):
        tag = Family(self.tag)
        object.__setattr__(self, "tag", tag)
        object.__setattr__(self, "params", tuple(self.params))
        if len(self.params) != _PARAM_COUNTS[tag]:
            raise ParamOutOfRange(
                f"{tag.value} takes {_PARAM_COUNTS[tag]} parameters, got {len(self.params)}"
            )


def family_state(family: StateFamily) -> DensityMatrix:
    """Build the density matrix described by ``family``."""
    tag, p = family.tag, family.params
    if tag is Family.PURE_SCHMIDT:
        return make_pure_schmidt(p[0]).density()
    if tag is Family.WERNER:
        return make_werner(p[0])
    if tag is Family.ISOTROPIC:
        return make_isotropic(p[0])
    if tag is Family.BELL_DIAGONAL:
        return make_bell_diagonal(p)
    if tag is Family.X_STATE:
        return make_x_state(*p)
    return validate_density_matrix(np.array(p, dtype=np.complex128).reshape(4, 4))


def purity(rho) -> float:
    """``Tr(rho^2)``."""
    m = np.asarray(rho, dtype=np.complex128)
    # Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
    return float(np.sum(np.abs(m) ** 2))


def local_rotate(rho, ua, ub) -> np.ndarray:
    """``(ua (x) ub) rho (ua (x) ub)^dagger`` as a raw matrix."""
    u = np.kron(ua, ub)
    m = np.asarray(rho, dtype=np.complex128)
    return u @ m @ qmat.dagger(u)


# -- text format -------------------------------------------------------------


def _fmt_complex(z: complex) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}j"


def format_state(rho) -> str:
    """Four lines of four whitespace-separated ``re+imj`` entries."""
    m = np.asarray(rho, dtype=np.complex128)
    if m.shape != (4, 4):
        raise ValueError(f"expected 4x4 matrix, got {m.shape}")
    return "".join(" ".join(_fmt_complex(z) for z in row) + "\n" for row in m)


def parse_state(text: str) -> np.ndarray:
    """Parse the output of :func:`format_state`; plain real entries are accepted."""
    rows = [line.split() for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")]
    if len(rows) != 4 or any(len(r) != 4 for r in rows):
        raise ValueError("state text must have 4 lines of 4 entries")
    try:
        return np.array([[complex(tok) for tok in r] for r in rows], dtype=np.complex128)
    except ValueError as exc:
        raise ValueError(f"malformed complex entry: {exc}") from None


def read_state_file(path) -> np.ndarray:
    return parse_state(Path(path).read_text(encoding="utf-8"))


def write_state_file(rho, path) -> None:
    Path(path).write_text(format_state(rho), encoding="utf-8", newline="\n")
