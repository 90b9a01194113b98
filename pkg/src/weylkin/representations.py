"""Finite-dimensional realisations of position and momentum.

Three constructions, each exact on a different fragment of the canonical
relation:

* ``fock``: truncated ladder operators; ``[X, P] = i hbar`` except in the
  top corner.
* ``grid``: periodic position grid with the momentum operator defined by a
  unitary DFT; the two eigenbases are exactly mutually unbiased.
* ``clock``: cyclic shift ``U`` and clock phase ``V`` with ``VU = w UV``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import lgamma
from typing import Optional

import numpy as np

from .linalg import as_state, hermitian_eigen, matrix_exp, normalize

__all__ = [
    "InvalidDimension",
    "TruncationWeightTooLarge",
    "NonCommensurate",
    "Representation",
    "EigenBasis",
    "build_fock",
    "build_grid",
    "build_clock_shift",
    "build",
    "momentum_indices",
    "dft_matrix",
    "translation_unitary",
    "boost_unitary",
    "position_basis",
    "momentum_basis",
    "gaussian_packet",
    "coherent_state",
    "ladder_matrix",
]

KINDS = ("fock", "grid", "clock")


class InvalidDimension(ValueError):
    pass


class TruncationWeightTooLarge(ValueError):
    pass


class NonCommensurate(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Representation:
    kind: str
    dim: int
    hbar: float = 1.0
    spacing: Optional[float] = None
    X: Optional[np.ndarray] = field(default=None, repr=False)
    P: Optional[np.ndarray] = field(default=None, repr=False)
    U: Optional[np.ndarray] = field(default=None, repr=False)
    V: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        for name in ("X", "P", "U", "V"):
            m = getattr(self, name)
            if m is not None:
                m.setflags(write=False)

    @property
    def box_length(self) -> Optional[float]:
        return None if self.spacing is None else self.dim * self.spacing

    @property
    def momentum_spacing(self) -> Optional[float]:
        if self.kind != "grid":
            return None
        return 2.0 * np.pi * self.hbar / (self.dim * self.spacing)

    @property
    def has_xp(self) -> bool:
        return self.X is not None and self.P is not None

    def describe(self) -> dict:
        out = {"rep": self.kind, "dim": self.dim, "hbar": self.hbar}
        if self.spacing is not None:
            out["spacing"] = self.spacing
        return out


@dataclass(frozen=True, eq=False)
class EigenBasis:
    values: np.ndarray
    vectors: np.ndarray


def _check_dim(dim):
    if not isinstance(dim, (int, np.integer)) or dim < 2:
        raise InvalidDimension(f"dimension must be an integer >= 2, got {dim!r}")
    return int(dim)


def _check_hbar(hbar):
    if not hbar > 0 or not np.isfinite(hbar):
        raise ValueError(f"hbar must be positive and finite, got {hbar!r}")
    return float(hbar)


def ladder_matrix(dim: int) -> np.ndarray:
    """Truncated annihilation operator, ``a e_n = sqrt(n) e_{n-1}``."""
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1).astype(np.complex128)


def build_fock(dim: int, hbar: float = 1.0) -> Representation:
    dim = _check_dim(dim)
    hbar = _check_hbar(hbar)
    a = ladder_matrix(dim)
    ad = a.conj().T
    x = np.sqrt(hbar / 2.0) * (a + ad)
    p = 1j * np.sqrt(hbar / 2.0) * (ad - a)
    return Representation("fock", dim, hbar, X=x, P=p)


def momentum_indices(dim: int) -> np.ndarray:
    """Symmetric window ``-ceil(dim/2)+1 .. floor(dim/2)``."""
    return np.arange(-((dim + 1) // 2) + 1, dim // 2 + 1)


def dft_matrix(dim: int) -> np.ndarray:
    """Unitary DFT ``F[k, j] = exp(-2 pi i k j / dim) / sqrt(dim)``.

    Rows are indexed by the symmetric momentum window, not ``0..dim-1``.
    """
    k = momentum_indices(dim)
    j = np.arange(dim)
    # reduce k*j mod dim in integers first so the phase is exact
    phase = np.mod(np.outer(k, j), dim)
    return np.exp(-2j * np.pi * phase / dim) / np.sqrt(dim)


def build_grid(dim: int, hbar: float = 1.0, spacing: float = 1.0) -> Representation:
    dim = _check_dim(dim)
    hbar = _check_hbar(hbar)
    if not spacing > 0 or not np.isfinite(spacing):
        raise ValueError(f"grid spacing must be positive, got {spacing!r}")
    spacing = float(spacing)
    x = np.diag(np.arange(dim) * spacing).astype(np.complex128)
    f = dft_matrix(dim)
    p_vals = momentum_indices(dim) * (2.0 * np.pi * hbar / (dim * spacing))
    p = f.conj().T @ (p_vals[:, None] * f)
    p = 0.5 * (p + p.conj().T)
    return Representation("grid", dim, hbar, spacing, X=x, P=p)


def build_clock_shift(dim: int) -> Representation:
    dim = _check_dim(dim)
    u = np.roll(np.eye(dim, dtype=np.complex128), 1, axis=0)
    j = np.arange(dim)
    v = np.diag(np.exp(2j * np.pi * j / dim))
    # the clock pair lives at 2*pi*hbar = dim in step units
    return Representation("clock", dim, dim / (2.0 * np.pi), U=u, V=v)


def build(kind: str, dim: int, hbar: float = 1.0, spacing: float = 1.0) -> Representation:
    if kind == "fock":
        return build_fock(dim, hbar)
    if kind == "grid":
        return build_grid(dim, hbar, spacing)
    if kind == "clock":
        return build_clock_shift(dim)
    raise ValueError(f"unknown representation kind {kind!r}; choose from {KINDS}")


def _require_xp(rep: Representation):
    if not rep.has_xp:
        raise ValueError(f"{rep.kind} representation has no X, P pair")


def translation_unitary(rep: Representation, a: float) -> np.ndarray:
    """``exp(-i a P / hbar)``; for ``clock`` ``a`` counts shift steps."""
    if rep.kind == "clock":
        return np.linalg.matrix_power(rep.U, int(a))
    _require_xp(rep)
    return matrix_exp((-1j * a / rep.hbar) * rep.P)


def boost_unitary(rep: Representation, g: float) -> np.ndarray:
    """``exp(+i g X / hbar)``; for ``clock`` ``g`` counts clock steps."""
    if rep.kind == "clock":
        return np.linalg.matrix_power(rep.V, int(g))
    _require_xp(rep)
    return matrix_exp((1j * g / rep.hbar) * rep.X)


def commensurate_steps(rep: Representation, a: float, tol: float = 1e-9) -> int:
    steps = a / rep.spacing
    r = round(steps)
    if abs(steps - r) > tol * max(1.0, abs(steps)):
        raise NonCommensurate(f"a = {a} is not an integer multiple of spacing {rep.spacing}")
    return int(r)


def position_basis(rep: Representation) -> EigenBasis:
    if rep.kind == "grid":
        return EigenBasis(np.arange(rep.dim) * rep.spacing, np.eye(rep.dim, dtype=np.complex128))
    _require_xp(rep)
    values, vectors = hermitian_eigen(rep.X)
    return EigenBasis(values, vectors)


def momentum_basis(rep: Representation) -> EigenBasis:
    """Grid: DFT columns ``exp(i x_j p_k / hbar)/sqrt(dim)``; Fock: diagonalised P."""
    if rep.kind == "grid":
        f = dft_matrix(rep.dim)
        values = momentum_indices(rep.dim) * rep.momentum_spacing
        return EigenBasis(values, f.conj().T.copy())
    _require_xp(rep)
    values, vectors = hermitian_eigen(rep.P)
    return EigenBasis(values, vectors)


def _periodic_offset(x, x0, box):
    d = np.mod(x - x0 + 0.5 * box, box) - 0.5 * box
    return d


def gaussian_packet(
    rep: Representation, x0: float, p0: float, sigma: float, chirp: float = 0.0
) -> np.ndarray:
    """Grid packet ``exp(-d^2/(4 sigma^2)) exp(i (p0 x + chirp d^2) / hbar)``.

    ``d`` is the periodic displacement from ``x0``.  ``chirp`` adds the
    quadratic phase that correlates position and momentum.
    """
    if rep.kind != "grid":
        raise ValueError("gaussian_packet needs a grid representation")
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    x = np.arange(rep.dim) * rep.spacing
    d = _periodic_offset(x, x0, rep.box_length)
    amp = np.exp(-d * d / (4.0 * sigma * sigma))
    phase = np.exp(1j * (p0 * x + chirp * d * d) / rep.hbar)
    return normalize(amp * phase)


def coherent_state(rep: Representation, alpha: complex, leak_tol: float = 1e-6) -> np.ndarray:
    """Truncated ``sum_n alpha^n / sqrt(n!) e_n``, normalised."""
    if rep.kind != "fock":
        raise ValueError("coherent_state needs a fock representation")
    alpha = complex(alpha)
    if abs(alpha) ** 2 > rep.dim / 4.0:
        raise TruncationWeightTooLarge(
            f"|alpha|^2 = {abs(alpha) ** 2:.3g} exceeds dim/4 = {rep.dim / 4:.3g}"
        )
    n = np.arange(rep.dim)
    if alpha == 0:
        amp = np.zeros(rep.dim, dtype=np.complex128)
        amp[0] = 1.0
        return amp
    log_mag = n * np.log(abs(alpha)) - 0.5 * np.array([lgamma(k + 1.0) for k in n])
    amp = np.exp(log_mag - log_mag.max()) * np.exp(1j * n * np.angle(alpha))
    amp = normalize(amp)
    leak = float(np.sum(np.abs(amp[-2:]) ** 2))
    if leak > leak_tol:
        raise TruncationWeightTooLarge(
            f"coherent state puts {leak:.3g} probability in the top two levels"
        )
    return as_state(amp)
