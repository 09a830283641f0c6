"""Dense complex linear algebra for small MIMO-sized matrices.

Matrices are plain 2-D ``numpy.ndarray`` objects with ``complex128``
entries.  The singular value decomposition is a one-sided Jacobi
iteration on columns, which is simple, accurate to machine precision and
more than fast enough for the antenna-count-sized matrices used here.

All functions are pure and never mutate their inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "MAX_SWEEPS",
    "SvdConvergenceError",
    "SvdResult",
    "as_complex_matrix",
    "frobenius_norm_sq",
    "matmul",
    "svd",
]

# Iteration cap and relative off-diagonal threshold for the Jacobi sweeps.
MAX_SWEEPS = 100
SWEEP_TOL = 1e-14


class SvdConvergenceError(RuntimeError):
    """Jacobi sweeps failed to orthogonalize the columns.

    Attributes:
        residual: Largest relative off-diagonal coupling left when the
            sweep cap was reached.
    """

    def __init__(self, residual: float):
        super().__init__(
            f"SVD did not converge within {MAX_SWEEPS} sweeps "
            f"(off-diagonal residual {residual:.3e})"
        )
        self.residual = residual


@dataclass(frozen=True)
class SvdResult:
    """Thin singular value decomposition ``m = u @ diag(s) @ v^H``.

    ``u`` is ``rows x k`` and ``v`` is ``cols x k`` with orthonormal
    columns, where ``k = min(rows, cols)``.  ``singular_values`` is a
    1-D array sorted in descending order, all entries nonnegative.

    Singular vector phases are not unique; callers must only rely on the
    singular values and on the spanned subspaces.
    """

    u: np.ndarray
    singular_values: np.ndarray
    v: np.ndarray

    def reconstruct(self) -> np.ndarray:
        """Return ``u @ diag(singular_values) @ v^H``."""
        return (self.u * self.singular_values) @ self.v.conj().T


def as_complex_matrix(m) -> np.ndarray:
    """Validate and coerce ``m`` to a 2-D complex128 array.

    Raises:
        ValueError: if the input is not two-dimensional or is empty.
    """
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got ndim={a.ndim}")
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"matrix must be at least 1x1, got shape {a.shape}")
    return a


def matmul(a, b) -> np.ndarray:
    """Matrix product of two complex matrices.

    Raises:
        ValueError: on a dimension mismatch; the message names both shapes.
    """
    am = as_complex_matrix(a)
    bm = as_complex_matrix(b)
    if am.shape[1] != bm.shape[0]:
        raise ValueError(
            f"cannot multiply {am.shape[0]}x{am.shape[1]} by "
            f"{bm.shape[0]}x{bm.shape[1]}: inner dimensions differ"
        )
    return am @ bm


def frobenius_norm_sq(m) -> float:
    """Sum of squared moduli of all entries."""
    a = np.asarray(m, dtype=np.complex128)
    return float(np.sum(a.real**2 + a.imag**2))


def svd(m) -> SvdResult:
    """One-sided Jacobi SVD of a complex matrix.

    Returns ``min(rows, cols)`` singular values in descending order.

    Raises:
        SvdConvergenceError: if the sweeps do not converge within
            ``MAX_SWEEPS``; the error carries the remaining residual.
    """
    a = as_complex_matrix(m)
    rows, cols = a.shape
    if rows < cols:
        # Work on the Hermitian transpose and swap the factor roles.
        flipped = svd(a.conj().T)
        return SvdResult(u=flipped.v, singular_values=flipped.singular_values, v=flipped.u)

    w, v = _jacobi_orthogonalize(a)

    norms = np.sqrt(np.sum(w.real**2 + w.imag**2, axis=0))
    order = np.argsort(-norms, kind="stable")
    sigma = norms[order]
    w = w[:, order]
    v = v[:, order]

    # Normalize columns into U; columns whose norm is below the rank
    # tolerance carry no directional information and are replaced by an
    # orthonormal completion.
    tol = max(rows, cols) * np.finfo(float).eps * (sigma[0] if sigma.size else 0.0)
    u = np.zeros((rows, cols), dtype=np.complex128)
    degenerate = []
    for j in range(cols):
        if sigma[j] > tol and sigma[j] > 0.0:
            u[:, j] = w[:, j] / sigma[j]
        else:
            degenerate.append(j)
    if degenerate:
        _fill_orthonormal(u, degenerate)

    return SvdResult(u=u, singular_values=sigma, v=v)


def _jacobi_orthogonalize(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Rotate the columns of ``a`` until mutually orthogonal.

    Returns ``(w, v)`` with ``w = a @ v`` and ``v`` unitary; the columns
    of ``w`` are orthogonal on exit.
    """
    cols = a.shape[1]
    w = a.copy()
    v = np.eye(cols, dtype=np.complex128)
    residual = 0.0
    for _ in range(MAX_SWEEPS):
        residual = 0.0
        for i in range(cols - 1):
            for j in range(i + 1, cols):
                wi = w[:, i].copy()
                wj = w[:, j].copy()
                aii = float(np.real(np.vdot(wi, wi)))
                ajj = float(np.real(np.vdot(wj, wj)))
                aij = complex(np.vdot(wi, wj))
                scale = math.sqrt(aii * ajj)
                if scale == 0.0 or abs(aij) <= SWEEP_TOL * scale:
                    continue
                residual = max(residual, abs(aij) / scale)
                # Absorb the phase of the coupling into column j, then
                # apply the classic real symmetric 2x2 Jacobi rotation.
                phase = aij / abs(aij)
                tau = (ajj - aii) / (2.0 * abs(aij))
                t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                wj_ph = np.conj(phase) * wj
                w[:, i] = c * wi - s * wj_ph
                w[:, j] = s * wi + c * wj_ph
                vi = v[:, i].copy()
                vj_ph = np.conj(phase) * v[:, j]
                v[:, i] = c * vi - s * vj_ph
                v[:, j] = s * vi + c * vj_ph
        if residual == 0.0:
            return w, v
    raise SvdConvergenceError(residual)


def _fill_orthonormal(u: np.ndarray, columns: list[int]) -> None:
    """Overwrite ``columns`` of ``u`` with unit vectors orthogonal to the rest.

    Deterministic: walks the standard basis and Gram-Schmidts against all
    columns assigned so far.
    """
    rows = u.shape[0]
    assigned = [j for j in range(u.shape[1]) if j not in columns]
    for j in columns:
        for k in range(rows):
            cand = np.zeros(rows, dtype=np.complex128)
            cand[k] = 1.0
            for a_col in assigned:
                cand -= u[:, a_col] * np.vdot(u[:, a_col], cand)
            norm = float(np.linalg.norm(cand))
            if norm > 0.5:
                u[:, j] = cand / norm
                assigned.append(j)
                break
        else:  # pragma: no cover - cannot happen for k < rows columns
            raise RuntimeError("failed to complete orthonormal basis")
