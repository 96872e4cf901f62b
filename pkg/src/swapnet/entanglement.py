"""Wootters concurrence and the closed-form family concurrences."""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from . import qmat
from .constants import TOL
from .errors import NotPSD, ParamOutOfRange, UnsupportedFamily
from .states import Family, StateFamily

__all__ = [
    "SIGMA_Y",
    "YY",
    "ConcurrenceSpectrum",
    "spin_flip",
    "concurrence_spectrum",
    "concurrence",
    "concurrence_batch",
    "concurrence_closed_form",
    "param_for_concurrence",
]

SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
#: sigma_y (x) sigma_y, which is real: anti-diagonal (-1, 1, 1, -1).
YY = np.kron(SIGMA_Y, SIGMA_Y).real.astype(np.complex128)


class ConcurrenceSpectrum(NamedTuple):
    """Square roots of the eigenvalues of ``rho @ spin_flip(rho)``, descending."""

    mu: np.ndarray


def spin_flip(rho) -> np.ndarray:
    """``(sigma_y (x) sigma_y) rho* (sigma_y (x) sigma_y)``."""
    m = np.asarray(rho, dtype=np.complex128)
    return YY @ np.conj(m) @ YY


def _spectrum_batch(r: np.ndarray) -> np.ndarray:
    # r: (B, 4, 4) Hermitian PSD, any positive trace (concurrence is 1-homogeneous)
    w, v = qmat.eigh_batch(r)
    scale = np.maximum(np.real(np.trace(r, axis1=1, axis2=2)), 0.0)
    floor = -TOL.psd_clamp * np.maximum(scale, 1e-300)
    bad = w[:, -1] < floor
    if np.any(bad):
        raise NotPSD(f"state not PSD: smallest eigenvalue {w[bad, -1].min():.3e}")
    root = v * np.sqrt(np.clip(w, 0.0, None))[:, None, :]
    sqrt_rho = root @ qmat.dagger(v)
    # sqrt(rho) rho~ sqrt(rho) = B B^dagger with B = sqrt(rho) YY sqrt(rho)*, so the
    # mu are the singular values of B. Taking them directly, rather than square
    # roots of eigenvalues of B B^dagger, keeps the small ones at ~1e-16
    # instead of sqrt(1e-16).
    b = sqrt_rho @ YY @ np.conj(sqrt_rho)
    return np.linalg.svd(b, compute_uv=False)


def concurrence_spectrum(rho) -> ConcurrenceSpectrum:
    """Eigenvalues of the Hermitian PSD matrix ``sqrt(sqrt(rho) rho~ sqrt(rho))``."""
    m = qmat.as_cmatrix(rho)
    return ConcurrenceSpectrum(_spectrum_batch(m[None])[0])


def concurrence_batch(rhos) -> np.ndarray:
    """Concurrence of a stack ``(..., 4, 4)`` of PSD matrices.

    The matrices need not be normalised: the result scales linearly with the
    trace, so ``concurrence_batch(p * rho) == p * concurrence(rho)``. This is
    what lets outcome-weighted sums be taken over unnormalised branch operators.
    """
    r = np.asarray(rhos, dtype=np.complex128)
    lead = r.shape[:-2]
    if r.size == 0:
        return np.zeros(lead)
    mu = _spectrum_batch(r.reshape(-1, 4, 4))
    c = mu[:, 0] - mu[:, 1] - mu[:, 2] - mu[:, 3]
    return np.maximum(c, 0.0).reshape(lead)


def concurrence(rho) -> float:
    """Wootters concurrence ``max(0, mu1 - mu2 - mu3 - mu4)``.

    Examples
    --------
    >>> from swapnet.states import make_werner
    >>> round(concurrence(make_werner(0.2)), 12)
    0.7
    """
    mu = concurrence_spectrum(rho).mu
    return float(max(0.0, mu[0] - mu[1] - mu[2] - mu[3]))


def concurrence_closed_form(family: StateFamily) -> float:
    """Evaluate the printed concurrence formula for a state family."""
    tag, p = family.tag, family.params
    if tag is Family.PURE_SCHMIDT:
        lam = p[0]
        return 2.0 * math.sqrt(max(lam * (1.0 - lam), 0.0))
    if tag in (Family.WERNER, Family.ISOTROPIC):
        return max(0.0, 1.0 - 1.5 * p[0])
    if tag is Family.BELL_DIAGONAL:
        l1, l2, l3, l4 = p
        return max(0.0, abs(l1 - l2) - (l3 + l4), abs(l3 - l4) - (l1 + l2))
    if tag is Family.X_STATE:
        g11, g22, g33, g44, g14, g23 = p
        return 2.0 * max(0.0, abs(g14) - math.sqrt(g22 * g33), abs(g23) - math.sqrt(g11 * g44))
    raise UnsupportedFamily(f"no closed-form concurrence for family {tag.value!r}")


def param_for_concurrence(tag, c: float) -> StateFamily:
    """Single-parameter family member with concurrence ``c``."""
    tag = Family(tag)
    c = float(c)
    if not (0.0 <= c <= 1.0):
        raise ParamOutOfRange(f"concurrence {c} outside [0, 1]")
    if tag is Family.PURE_SCHMIDT:
        return StateFamily(tag, ((1.0 + math.sqrt(1.0 - c * c)) / 2.0,))
    if tag in (Family.WERNER, Family.ISOTROPIC):
        return StateFamily(tag, (2.0 * (1.0 - c) / 3.0,))
    raise UnsupportedFamily(f"cannot invert concurrence for family {tag.value!r}")
