"""Physical configuration and closed-form assembly of the characteristic matrix.

Units follow hbar = 2m = 1: the operator is the negative Laplacian with N
zero-range perturbations, the spectral parameter z carries momentum units,
and energies are z**2.  Every assembly routine below is entire in z (no
branch cuts) and pure: configurations are immutable values, safe to share
between concurrent tasks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

FOUR_PI = 4.0 * np.pi

# Relative scale below which two centers count as coincident.
COINCIDENCE_RTOL = 1e-12

# |x| below which sinc switches to its Taylor polynomial.
SINC_TAYLOR_CUT = 1e-4

__all__ = [
    "FOUR_PI",
    "ConfigError",
    "SingularityError",
    "PointConfig",
    "GammaMatrix",
    "RealSplit",
    "green_kernel",
    "assemble_gamma",
    "gamma_entries",
    "gamma_stack",
    "gamma_derivative",
    "gamma_imag_axis",
    "real_split",
    "sinc",
    "sinc_gram",
    "row_sum_bound",
]


class ConfigError(ValueError):
    """Invalid physical configuration.

    `pointer` is a JSON pointer into the config document locating the
    offending field ("" when the problem is not tied to a single field).
    """

    def __init__(self, message: str, pointer: str = ""):
        super().__init__(f"{pointer}: {message}" if pointer else message)
        self.pointer = pointer


class SingularityError(ValueError):
    """Evaluation requested exactly on a kernel singularity (x == y)."""


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class PointConfig:
    """Strengths and centers of the point interactions.

    `alpha[j]` is the inverse-scattering-length parameter of the center at
    `points[j]`; all entries must be finite (a center with no interaction is
    expressed by deleting it, not by an infinite strength).  Centers must be
    pairwise distinct: coincident points are rejected at relative tolerance
    1e-12 of the configuration scale rather than merged.
    """

    alpha: np.ndarray
    points: np.ndarray

    def __post_init__(self):
        alpha = np.atleast_1d(np.asarray(self.alpha, dtype=float))
        points = np.asarray(self.points, dtype=float)
        if points.ndim == 1 and points.size == 3:
            points = points.reshape(1, 3)
        if alpha.ndim != 1 or alpha.size < 1:
            raise ConfigError("must be a flat list of at least one number", "/alpha")
        if points.ndim != 2 or points.shape[1] != 3:
            raise ConfigError("must be a list of 3-vectors", "/points")
        if points.shape[0] != alpha.shape[0]:
            raise ConfigError(
                f"length {points.shape[0]} does not match alpha length {alpha.shape[0]}",
                "/points",
            )
        bad = np.flatnonzero(~np.isfinite(alpha))
        if bad.size:
            raise ConfigError("must be finite", f"/alpha/{bad[0]}")
        bad_rows = np.flatnonzero(~np.isfinite(points).all(axis=1))
        if bad_rows.size:
            row = int(bad_rows[0])
            col = int(np.flatnonzero(~np.isfinite(points[row]))[0])
            raise ConfigError("must be finite", f"/points/{row}/{col}")

        diff = points[:, None, :] - points[None, :, :]
        dist = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
        scale = max(1.0, float(np.abs(points).max()))
        n = alpha.shape[0]
        iu, ju = np.triu_indices(n, k=1)
        close = dist[iu, ju] <= COINCIDENCE_RTOL * scale
        if close.any():
            k = int(np.flatnonzero(close)[0])
            raise ConfigError(
                f"coincides with point {iu[k]}", f"/points/{ju[k]}"
            )

        object.__setattr__(self, "alpha", _frozen(alpha))
        object.__setattr__(self, "points", _frozen(points))
        object.__setattr__(self, "_distances", _frozen(dist))

    @property
    def n(self) -> int:
        return self.alpha.shape[0]

    @property
    def distances(self) -> np.ndarray:
        """Pairwise center distances, zero diagonal."""
        return self._distances

    @property
    def d_min(self):
        """Minimum pairwise center distance; None for a single center."""
        if self.n == 1:
            return None
        iu, ju = np.triu_indices(self.n, k=1)
        return float(self._distances[iu, ju].min())


@dataclass(frozen=True)
class GammaMatrix:
    """Characteristic matrix at spectral parameter z.

    Complex symmetric (not Hermitian): diagonal alpha_j - i z / 4 pi,
    off-diagonal -exp(i z d_jk) / (4 pi d_jk).
    """

    z: complex
    entries: np.ndarray


@dataclass(frozen=True)
class RealSplit:
    """Decomposition Gamma(z) = A - iB for real z > 0, both factors real symmetric."""

    A: np.ndarray
    B: np.ndarray
    z: float


def green_kernel(z, x, y):
    """Free Helmholtz kernel exp(i z |x-y|) / (4 pi |x-y|).

    Raises SingularityError when x == y.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    r = float(np.linalg.norm(x - y))
    if r == 0.0:
        raise SingularityError("green_kernel evaluated at x == y")
    return complex(np.exp(1j * complex(z) * r) / (FOUR_PI * r))


def gamma_stack(cfg: PointConfig, zs) -> np.ndarray:
    """Entries of the characteristic matrix at a batch of spectral parameters.

    `zs` may have any shape; the result has shape zs.shape + (N, N).
    """
    zs = np.asarray(zs, dtype=complex)
    n = cfg.n
    d = cfg.distances
    zb = zs[..., None, None]
    off = ~np.eye(n, dtype=bool)
    with np.errstate(divide="ignore", invalid="ignore"):
        coupling = -np.exp(1j * zb * d) / (FOUR_PI * d)
    out = np.where(off, coupling, 0.0)
    idx = np.arange(n)
    out[..., idx, idx] = cfg.alpha - 1j * zs[..., None] / FOUR_PI
    return out


def gamma_entries(cfg: PointConfig, z) -> np.ndarray:
    """N x N entries of the characteristic matrix at a single z."""
    return gamma_stack(cfg, complex(z))


def assemble_gamma(cfg: PointConfig, z) -> GammaMatrix:
    return GammaMatrix(z=complex(z), entries=_frozen(gamma_entries(cfg, z)))


def gamma_derivative(cfg: PointConfig, z) -> np.ndarray:
    """Entrywise z-derivative: -i/4pi on the diagonal, -i exp(i z d)/4pi off it."""
    return -1j * np.exp(1j * complex(z) * cfg.distances) / FOUR_PI


def gamma_derivative_stack(cfg: PointConfig, zs) -> np.ndarray:
    zs = np.asarray(zs, dtype=complex)
    return -1j * np.exp(1j * zs[..., None, None] * cfg.distances) / FOUR_PI


def gamma_imag_axis(cfg: PointConfig, lam: float) -> np.ndarray:
    """Gamma(i*lam) for real lam >= 0, assembled directly as a real symmetric matrix.

    Diagonal alpha_j + lam/4pi, off-diagonal -exp(-lam d)/(4 pi d).
    """
    lam = float(lam)
    if lam < 0.0:
        raise ValueError("gamma_imag_axis requires lam >= 0")
    n = cfg.n
    d = cfg.distances
    off = ~np.eye(n, dtype=bool)
    with np.errstate(divide="ignore", invalid="ignore"):
        coupling = -np.exp(-lam * d) / (FOUR_PI * d)
    out = np.where(off, coupling, 0.0)
    idx = np.arange(n)
    out[idx, idx] = cfg.alpha + lam / FOUR_PI
    return out


def real_split(cfg: PointConfig, z: float) -> RealSplit:
    """Split Gamma(z) = A - iB at real z > 0; A, B real symmetric, exact to rounding."""
    z = float(z)
    if z <= 0.0:
        raise ValueError("real_split requires z > 0")
    g = gamma_entries(cfg, z)
    return RealSplit(A=_frozen(g.real.copy()), B=_frozen(-g.imag.copy()), z=z)


def sinc(x):
    """sin(x)/x with sinc(0) = 1.

    Below |x| = 1e-4 the three-term Taylor polynomial 1 - x^2/6 + x^4/120 is
    used to avoid cancellation; its truncation error there is below 1e-25
    relative.  Accepts scalars or arrays.
    """
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < SINC_TAYLOR_CUT
    safe = np.where(small, 1.0, x)
    out = np.where(small, 1.0 - x * x / 6.0 + x ** 4 / 120.0, np.sin(safe) / safe)
    return float(out) if out.ndim == 0 else out


def sinc_gram(cfg: PointConfig, z: float) -> np.ndarray:
    """Gram matrix S_jk = sinc(z d_jk); the imaginary part of Gamma on the
    positive real axis is (z/4pi) S.  Unit diagonal, entries in [-1, 1]."""
    z = float(z)
    if z <= 0.0:
        raise ValueError("sinc_gram requires z > 0")
    return sinc(z * cfg.distances)


def sinc_gram_stack(cfg: PointConfig, zs) -> np.ndarray:
    zs = np.asarray(zs, dtype=float)
    return sinc(zs[..., None, None] * cfg.distances)


def row_sum_bound(cfg: PointConfig) -> float:
    """4 pi max|alpha| + (N-1)/d_min.

    For real |z| above this value the diagonal -iz/4pi dominates every row of
    Gamma(z), so the matrix is invertible; the same bound caps the imaginary
    semi-axis region where eigenvalue poles can sit.
    """
    reach = 0.0 if cfg.n == 1 else (cfg.n - 1) / cfg.d_min
    return float(FOUR_PI * np.abs(cfg.alpha).max() + reach)
