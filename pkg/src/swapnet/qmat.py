"""Small dense complex matrix kernel.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Everything that
works on a single matrix also has a batched twin operating on stacks of shape
``(..., n, n)``. The Hermitian eigensolver is a cyclic Jacobi method compiled
with numba; the sweep code spends most of its time there.
"""

from __future__ import annotations

from typing import NamedTuple

import numba
import numpy as np

from .constants import TOL
from .errors import NoConvergence, NotHermitian, NotPSD

__all__ = [
    "EigenSystem",
    "as_cmatrix",
    "dagger",
    "kron",
    "hermitian_eigensystem",
    "eigh_batch",
    "eigvalsh_batch",
    "psd_sqrt",
    "psd_sqrt_batch",
    "hermitian_residual",
]


class EigenSystem(NamedTuple):
    """Eigenvalues in descending order and matching eigenvectors as columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_cmatrix(a) -> np.ndarray:
    """Coerce ``a`` to a finite 2-D complex array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(a, -1, -2))


def kron(a, b) -> np.ndarray:
    """Kronecker product; entry ``[i*rb + k, j*cb + m]`` is ``a[i, j] * b[k, m]``."""
    return np.kron(as_cmatrix(a), as_cmatrix(b))


def hermitian_residual(h: np.ndarray) -> np.ndarray:
    """Max-norm of ``h - h^dagger`` (per matrix for stacks)."""
    return np.max(np.abs(h - dagger(h)), axis=(-2, -1))


@numba.njit(cache=True, nogil=True)
def _jacobi_kernel(stack, want_vectors, tol, max_sweeps, w_out, v_out):
    nb, n, _ = stack.shape
    a = np.empty((n, n), dtype=np.complex128)
    failed = 0
    worst = 0.0
    for b in range(nb):
        for i in range(n):
            for j in range(n):
                a[i, j] = 0.5 * (stack[b, i, j] + np.conj(stack[b, j, i]))
        if want_vectors:
            for i in range(n):
                for j in range(n):
                    v_out[b, i, j] = 1.0 if i == j else 0.0
        scale2 = 0.0
        for i in range(n):
            for j in range(n):
                scale2 += a[i, j].real ** 2 + a[i, j].imag ** 2
        thr2 = tol * tol * scale2
        off2 = 0.0
        for _ in range(max_sweeps + 1):
            off2 = 0.0
            for i in range(n):
                for j in range(n):
                    if i != j:
                        off2 += a[i, j].real ** 2 + a[i, j].imag ** 2
            if off2 <= thr2:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = a[p, q]
                    mag = abs(apq)
                    if mag <= 1e-300:
                        continue
                    theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                    if abs(theta) > 1e150:
                        t = 0.5 / theta
                    elif theta >= 0.0:
                        t = 1.0 / (theta + np.sqrt(theta * theta + 1.0))
                    else:
                        t = -1.0 / (-theta + np.sqrt(theta * theta + 1.0))
                    c = 1.0 / np.sqrt(t * t + 1.0)
                    s = t * c
                    phase = np.conj(apq) / mag
                    uqp = -s * phase
                    uqq = c * phase
                    for k in range(n):
                        akp = a[k, p]
                        akq = a[k, q]
                        a[k, p] = akp * c + akq * uqp
                        a[k, q] = akp * s + akq * uqq
                    for k in range(n):
                        apk = a[p, k]
                        aqk = a[q, k]
                        a[p, k] = c * apk + np.conj(uqp) * aqk
                        a[q, k] = s * apk + np.conj(uqq) * aqk
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    a[p, p] = a[p, p].real
                    a[q, q] = a[q, q].real
                    if want_vectors:
                        for k in range(n):
                            vkp = v_out[b, k, p]
                            vkq = v_out[b, k, q]
                            v_out[b, k, p] = vkp * c + vkq * uqp
                            v_out[b, k, q] = vkp * s + vkq * uqq
        if off2 > thr2:
            failed += 1
            ratio = np.sqrt(off2 / scale2)
            if ratio > worst:
                worst = ratio
        for i in range(n):
            w_out[b, i] = a[i, i].real
    return failed, worst


def _jacobi(a: np.ndarray, want_vectors: bool):
    """Cyclic Jacobi on a stack ``(B, n, n)`` of Hermitian matrices.

    Returns unsorted real eigenvalues ``(B, n)`` and, if requested, the
    accumulated unitary ``(B, n, n)`` whose columns are eigenvectors. The
    anti-Hermitian part of the input is discarded.
    """
    a = np.ascontiguousarray(a, dtype=np.complex128)
    nb, n, _ = a.shape
    w = np.empty((nb, n))
    v = np.empty((nb, n, n) if want_vectors else (0, n, n), dtype=np.complex128)
    failed, worst = _jacobi_kernel(
        a, want_vectors, TOL.jacobi_offdiag, TOL.jacobi_max_sweeps, w, v
    )
    if failed:
        raise NoConvergence(
            f"Jacobi did not converge in {TOL.jacobi_max_sweeps} sweeps for "
            f"{failed} matrices (worst relative off-diagonal norm {worst:.3e})"
        )
    return w, (v if want_vectors else None)


def eigh_batch(h: np.ndarray):
    """Eigen-decompose a stack of Hermitian matrices.

    Parameters
    ----------
    h : ndarray, shape (..., n, n)
        Hermitian (the anti-Hermitian part is discarded).

    Returns
    -------
    w : ndarray, shape (..., n)
        Eigenvalues, descending.
    v : ndarray, shape (..., n, n)
        Orthonormal eigenvectors as columns, ordered like ``w``.
    """
    h = np.asarray(h, dtype=np.complex128)
    lead = h.shape[:-2]
    n = h.shape[-1]
    w, v = _jacobi(h.reshape(-1, n, n), want_vectors=True)
    order = np.argsort(-w, axis=1, kind="stable")
    w = np.take_along_axis(w, order, axis=1)
    v = np.take_along_axis(v, order[:, None, :], axis=2)
    return w.reshape(lead + (n,)), v.reshape(lead + (n, n))


def eigvalsh_batch(h: np.ndarray) -> np.ndarray:
    """Descending eigenvalues of a stack of Hermitian matrices."""
    h = np.asarray(h, dtype=np.complex128)
    lead = h.shape[:-2]
    n = h.shape[-1]
    w, _ = _jacobi(h.reshape(-1, n, n), want_vectors=False)
    w = -np.sort(-w, axis=1)
    return w.reshape(lead + (n,))


def hermitian_eigensystem(h) -> EigenSystem:
    """Eigensystem of a single Hermitian matrix.

    Raises
    ------
    NotHermitian
        If ``max|h - h^dagger| > 1e-9``.
    NoConvergence
        If the Jacobi iteration exceeds its sweep cap.
    """
    m = as_cmatrix(h)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"matrix must be square, got {m.shape}")
    resid = float(hermitian_residual(m))
    if resid > TOL.hermitian:
        raise NotHermitian(f"not Hermitian: max|h - h^dagger| = {resid:.3e}")
    w, v = eigh_batch(m[None])
    return EigenSystem(w[0], v[0])


def _clamped_sqrt_from(w: np.ndarray, v: np.ndarray) -> np.ndarray:
    root = np.sqrt(np.clip(w, 0.0, None))
    return (v * root[..., None, :]) @ dagger(v)


def psd_sqrt_batch(h: np.ndarray, rel_tol: float = TOL.psd_clamp) -> np.ndarray:
    """PSD square roots of a stack; negatives above ``-rel_tol * trace`` are clamped."""
    h = np.asarray(h, dtype=np.complex128)
    w, v = eigh_batch(h)
    floor = -rel_tol * np.maximum(np.abs(np.trace(h, axis1=-2, axis2=-1)), 1e-300)
    bad = w[..., -1] < floor
    if np.any(bad):
        raise NotPSD(f"matrix not PSD: smallest eigenvalue {w[..., -1][bad].min():.3e}")
    return _clamped_sqrt_from(w, v)


def psd_sqrt(h) -> np.ndarray:
    """Hermitian PSD square root ``S`` with ``S @ S == h``.

    Eigenvalues in ``[-1e-10, 0)`` are treated as round-off and clamped to zero.

    Raises
    ------
    NotPSD
        If any eigenvalue is below ``-1e-10``.
    """
    es = hermitian_eigensystem(h)
    lo = es.eigenvalues[-1]
    if lo < -TOL.psd_clamp:
        raise NotPSD(f"matrix not PSD: smallest eigenvalue {lo:.3e}")
    return _clamped_sqrt_from(es.eigenvalues, es.eigenvectors)
