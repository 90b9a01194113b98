"""Dense complex linear algebra used by the numerical checks.

Matrices and states are plain ``complex128`` numpy arrays.  The Hermitian
eigensolver (cyclic Jacobi) and the matrix exponential (scaling and
squaring with a degree-13 Pade approximant) are implemented here rather
than delegated, so their accuracy contracts are owned by this module.
"""

from __future__ import annotations

import numpy as np

from . import _jacobi

__all__ = [
    "LinalgError",
    "DimensionMismatch",
    "NotHermitian",
    "NoConvergence",
    "NormTooLarge",
    "NonFiniteEntries",
    "as_matrix",
    "as_state",
    "normalize",
    "matmul",
    "add",
    "scale",
    "adjoint",
    "commutator",
    "anticommutator",
    "hermitian_eigen",
    "matrix_exp",
    "expectation",
    "variance",
    "frobenius_norm",
    "operator_norm",
    "is_hermitian",
    "is_unitary",
]

EPS = np.finfo(float).eps
MAX_SWEEPS = 100
# Accuracy is guaranteed up to norm 50; larger inputs are still accepted
# (squaring count grows logarithmically) up to this hard cap.
MAX_EXP_NORM = 1.0e4


class LinalgError(ValueError):
    pass


class DimensionMismatch(LinalgError):
    pass


class NotHermitian(LinalgError):
    pass


class NoConvergence(LinalgError):
    pass


class NormTooLarge(LinalgError):
    pass


class NonFiniteEntries(LinalgError):
    pass


def as_matrix(m, square: bool = False) -> np.ndarray:
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or 0 in m.shape:
        raise DimensionMismatch(f"expected a non-empty 2-d matrix, got shape {m.shape}")
    if square and m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NonFiniteEntries("matrix has NaN or infinite entries")
    return m


def as_state(s) -> np.ndarray:
    s = np.asarray(s, dtype=np.complex128)
    if s.ndim != 1 or s.size == 0:
        raise DimensionMismatch(f"expected a non-empty vector, got shape {s.shape}")
    if not np.all(np.isfinite(s)):
        raise NonFiniteEntries("state has NaN or infinite entries")
    return s


def normalize(s) -> np.ndarray:
    s = as_state(s)
    nrm = np.linalg.norm(s)
    if nrm == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return s / nrm


def _check_product(a, b):
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")


def matmul(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    _check_product(a, b)
    return a @ b


def add(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"cannot add {a.shape} and {b.shape}")
    return a + b


def scale(a, factor: complex) -> np.ndarray:
    return as_matrix(a) * complex(factor)


def adjoint(a) -> np.ndarray:
    return as_matrix(a).conj().T


def commutator(a, b) -> np.ndarray:
    a, b = as_matrix(a, square=True), as_matrix(b, square=True)
    _check_product(a, b)
    return a @ b - b @ a


def anticommutator(a, b) -> np.ndarray:
    a, b = as_matrix(a, square=True), as_matrix(b, square=True)
    _check_product(a, b)
    return a @ b + b @ a


def frobenius_norm(m) -> float:
    return float(np.linalg.norm(as_matrix(m), "fro"))


def is_hermitian(m, tol: float = 1e-12) -> bool:
    m = as_matrix(m, square=True)
    return np.linalg.norm(m - m.conj().T) <= tol * max(np.linalg.norm(m), 1.0)


def is_unitary(m, tol: float = 1e-12) -> bool:
    m = as_matrix(m, square=True)
    eye = np.eye(m.shape[0])
    return np.linalg.norm(m.conj().T @ m - eye) <= tol * m.shape[0]


# --- eigendecomposition ------------------------------------------------------


def _fix_phases(vectors: np.ndarray) -> np.ndarray:
    """Make the largest-magnitude entry of each column real and positive.

    Ties within rounding go to the lowest row index.
    """
    mags = np.abs(vectors)
    top = mags.max(axis=0)
    rows = np.argmax(mags >= top * (1.0 - 1e-12), axis=0)
    pivots = vectors[rows, np.arange(vectors.shape[1])]
    return vectors * (np.abs(pivots) / pivots)


def hermitian_eigen(h, tol: float = 1e-12, *, use_numba: bool | None = None):
    """Eigenvalues (ascending) and unitary eigenvector columns of ``h``.

    Parameters
    ----------
    h : array_like
        Square complex matrix, Hermitian to within ``tol`` relative to its
        Frobenius norm.
    tol : float
        Hermiticity tolerance.
    use_numba : bool, optional
        Force the numba kernel on or off; defaults to availability.

    Returns
    -------
    values : ndarray of float
    vectors : ndarray of complex, columns aligned with ``values``

    Raises
    ------
    NotHermitian, NoConvergence
    """
    h = as_matrix(h, square=True)
    n = h.shape[0]
    hnorm = np.linalg.norm(h)
    if np.linalg.norm(h - h.conj().T) > tol * hnorm:
        raise NotHermitian("matrix is not Hermitian within tolerance")
    a = 0.5 * (h + h.conj().T)
    v = np.eye(n, dtype=np.complex128)
    if n > 1 and hnorm > 0.0:
        schedule = _jacobi.round_robin(n)
        target = EPS * hnorm
        # entries below this are treated as already zero
        small = 1e-3 * EPS * hnorm / n
        for _ in range(MAX_SWEEPS):
            off = np.linalg.norm(a - np.diag(np.diag(a)))
            if off <= target:
                break
            _jacobi.sweep(a, v, schedule, small, use_numba=use_numba)
        else:
            off = np.linalg.norm(a - np.diag(np.diag(a)))
            if off > target:
                raise NoConvergence(f"Jacobi did not converge in {MAX_SWEEPS} sweeps")
    values = np.diag(a).real.copy()
    order = np.argsort(values, kind="stable")
    return values[order], _fix_phases(v[:, order])


def operator_norm(m) -> float:
    """Largest singular value, from the top eigenvalue of ``m^H m``."""
    m = as_matrix(m)
    gram = m.conj().T @ m
    values, _ = hermitian_eigen(gram, tol=1e-10)
    return float(np.sqrt(max(values[-1], 0.0)))


# --- matrix exponential ---------------------------------------------------

# Pade(13) coefficients and the theta_13 bound of the scaling and squaring method
_PADE13 = np.array([
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0, 129060195264000.0, 10559470521600.0,
    670442572800.0, 33522128640.0, 1323241920.0, 40840800.0,
    960960.0, 16380.0, 182.0, 1.0,
])
_THETA13 = 5.371920351148152


def matrix_exp(a) -> np.ndarray:
    """``exp(a)`` by scaling and squaring with a [13/13] Pade approximant.

    Raises :class:`NormTooLarge` when the 1-norm exceeds ``MAX_EXP_NORM``.
    """
    a = as_matrix(a, square=True)
    n = a.shape[0]
    norm1 = np.abs(a).sum(axis=0).max()
    if norm1 > MAX_EXP_NORM:
        raise NormTooLarge(f"1-norm {norm1:.3g} exceeds supported {MAX_EXP_NORM:.3g}")
    ident = np.eye(n, dtype=np.complex128)
    if norm1 == 0.0:
        return ident
    s = 0
    if norm1 > _THETA13:
        s = int(np.ceil(np.log2(norm1 / _THETA13)))
    a = a / (2.0 ** s)
    b = _PADE13
    a2 = a @ a
    a4 = a2 @ a2
    a6 = a4 @ a2
    u = a @ (a6 @ (b[13] * a6 + b[11] * a4 + b[9] * a2)
             + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident)
    v = (a6 @ (b[12] * a6 + b[10] * a4 + b[8] * a2)
         + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident)
    r = np.linalg.solve(v - u, v + u)
    for _ in range(s):
        r = r @ r
    return r


# --- states ---------------------------------------------------------------


def expectation(s, m) -> complex:
    """``<s, m s>``."""
    s = as_state(s)
    m = as_matrix(m, square=True)
    if m.shape[0] != s.shape[0]:
        raise DimensionMismatch(f"state of length {s.shape[0]} vs matrix {m.shape}")
    return complex(np.vdot(s, m @ s))


def variance(s, m, tol: float = 1e-10) -> float:
    """``||(m - <m>) s||^2``; clamped at zero."""
    m = as_matrix(m, square=True)
    if not is_hermitian(m, tol):
        raise NotHermitian("variance needs a Hermitian observable")
    s = as_state(s)
    mean = expectation(s, m).real
    centered = m @ s - mean * s
    return max(float(np.vdot(centered, centered).real), 0.0)
