"""Dense linear-algebra kernels shared by the model, simulation and
stability modules: matrix exponential, zero-order-hold discretization and a
full-spectrum eigenvalue solver for real nonsymmetric matrices.

All routines operate on plain ``numpy.ndarray`` matrices (row-major, float64)
and are pure functions, safe to call concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ConvergenceError

__all__ = ["Spectrum", "expm", "zoh_discretize", "eigenvalues"]

#: largest matrix order accepted by the eigenvalue solver
MAX_EIG_ORDER = 200


@dataclass(frozen=True)
class Spectrum:
    """Full eigenvalue set of a real square matrix.

    ``values`` holds all complex eigenvalues sorted by (real part descending,
    imaginary part descending); conjugate pairs are exactly conjugate.
    ``residual_bound`` is an a-priori backward-error bound on
    ``||M v - lambda v||`` for unit eigenvectors v.
    """

    values: np.ndarray
    residual_bound: float

    def __post_init__(self):
        if self.residual_bound < 0:
            raise ValueError("residual_bound must be nonnegative")

    @property
    def order(self) -> int:
        return self.values.shape[0]

    def max_real(self) -> float:
        return float(self.values.real.max())


def _as_square(m, name="matrix") -> np.ndarray:
    a = np.asarray(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite entries")
    return a


def expm(m) -> np.ndarray:
    """Matrix exponential e^M of a square real matrix.

    Scaling-and-squaring with a Pade approximant; relative accuracy is far
    below 1e-10 for the well-scaled matrices produced by this package
    (verified against a truncated-Taylor oracle in the test suite).
    """
    a = _as_square(m)
    return scipy.linalg.expm(a)


def zoh_discretize(a, b, dt: float) -> tuple[np.ndarray, np.ndarray]:
    """Exact zero-order-hold discretization of ``x' = A x + B u``.

    Returns ``(Ad, Bd)`` with ``Ad = e^{A dt}`` and
    ``Bd = \\int_0^{dt} e^{A s} ds B``, obtained as the top blocks of the
    exponential of the augmented matrix ``[[A, B], [0, 0]] * dt``.
    """
    a = _as_square(a, "A")
    b = np.asarray(b, dtype=float)
    if b.ndim == 1:
        b = b[:, None]
    if b.shape[0] != a.shape[0]:
        raise ValueError(
            f"B has {b.shape[0]} rows but A has order {a.shape[0]}")
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    n, p = a.shape[0], b.shape[1]
    aug = np.zeros((n + p, n + p))
    aug[:n, :n] = a
    aug[:n, n:] = b
    phi = expm(aug * dt)
    return phi[:n, :n].copy(), phi[:n, n:].copy()


def eigenvalues(m, ordering_seed: int = 0) -> Spectrum:
    """All complex eigenvalues of a real square matrix of order <= 200.

    Backed by the LAPACK nonsymmetric QR driver; on non-convergence the
    failure is raised as :class:`ConvergenceError` rather than returning a
    partial spectrum.  ``ordering_seed`` != 0 applies a seeded random
    permutation similarity before the solve.  The eigenvalues are invariant
    under that transform, but the reduction follows a different floating
    point path, which makes the seed useful for checking that downstream
    verdicts do not hinge on one particular rounding sequence.
    """
    a = _as_square(m)
    n = a.shape[0]
    if n > MAX_EIG_ORDER:
        raise ValueError(f"matrix order {n} exceeds supported maximum "
                         f"{MAX_EIG_ORDER}")
    if ordering_seed:
        rng = np.random.default_rng(ordering_seed)
        p = rng.permutation(n)
        a = a[np.ix_(p, p)]  # exact similarity: P M P^T
    try:
        vals = np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigenvalue iteration failed: {exc}") from exc
    # LAPACK returns conjugate pairs exactly conjugate for real input; the
    # sort below is a stable total order so repeated runs produce identical
    # output.
    order = np.lexsort((-vals.imag, -vals.real))
    vals = vals[order]
    scale = np.linalg.norm(a, "fro")
    return Spectrum(values=vals, residual_bound=10.0 * n * np.finfo(float).eps * scale)
