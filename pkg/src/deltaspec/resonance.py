"""Complex resonance location and the real-axis non-singularity certificate.

Zeros of det Gamma are counted by the argument principle: the winding
integral of tr(Gamma^-1 Gamma') over a rectangle boundary is the enclosed
zero count.  Counting drives a quadrisection search whose leaves are
polished by Newton steps on log det.  The trace form is used throughout
because det Gamma is an exponential polynomial that overflows at large
|Im z| while the logarithmic derivative stays tame.

The certificate scans the positive real axis up to the analytic
large-momentum bound, recording the smallest singular value of Gamma(z) and
the Cholesky outcome of the sinc Gram matrix at every grid point; beyond the
bound the row-sum estimate itself certifies invertibility.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg, model
from .model import PointConfig

# Boundary admissibility: smallest |det| allowed on sampled boundary points.
DET_FLOOR = 1e-12
_JITTER = 1e-6
_JITTER_RETRIES = 5
_EDGE_SAMPLES = 64
# Deep enough to resolve a pole at the minimum jitter distance 1e-6*diameter
# from a contour edge (the Gauss rule needs panels comparable to the pole
# clearance before it converges).
_MAX_EDGE_DEPTH = 26
_POLISH_DIAMETER = 1e-3
_NEWTON_MAX_STEPS = 50
_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)

RESONANCE = "resonance"
EIGENVALUE_POLE = "eigenvalue_pole"
THRESHOLD = "threshold"

__all__ = [
    "Box",
    "BoundaryError",
    "SubdivisionError",
    "RootRecord",
    "ResonanceSet",
    "Certificate",
    "count_zeros_in_box",
    "find_resonances",
    "certify_real_axis",
    "distinct_direction",
    "has_distinct_projections",
    "exp_sum_on_sphere",
    "sphere_points",
    "RESONANCE",
    "EIGENVALUE_POLE",
    "THRESHOLD",
]


class BoundaryError(RuntimeError):
    """Box boundary could not be moved off the zero set of det Gamma."""


class SubdivisionError(RuntimeError):
    """Winding integral failed to settle on an integer within the depth budget."""


@dataclass(frozen=True)
class Box:
    """Axis-aligned search rectangle in the complex z-plane."""

    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError("box must satisfy re_min < re_max and im_min < im_max")

    @property
    def width(self) -> float:
        return self.re_max - self.re_min

    @property
    def height(self) -> float:
        return self.im_max - self.im_min

    @property
    def diameter(self) -> float:
        return float(np.hypot(self.width, self.height))

    @property
    def center(self) -> complex:
        return complex(0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max))

    def corners(self) -> list[complex]:
        return [
            complex(self.re_min, self.im_min),
            complex(self.re_max, self.im_min),
            complex(self.re_max, self.im_max),
            complex(self.re_min, self.im_max),
        ]

    def shrunk(self, delta: float) -> "Box":
        return Box(
            self.re_min + delta, self.re_max - delta,
            self.im_min + delta, self.im_max - delta,
        )

    def contains(self, z: complex, pad: float = 0.0) -> bool:
        return (
            self.re_min - pad <= z.real <= self.re_max + pad
            and self.im_min - pad <= z.imag <= self.im_max + pad
        )

    def split(self, fx: float, fy: float) -> list["Box"]:
        xs = self.re_min + fx * self.width
        ys = self.im_min + fy * self.height
        return [
            Box(self.re_min, xs, self.im_min, ys),
            Box(xs, self.re_max, self.im_min, ys),
            Box(self.re_min, xs, ys, self.im_max),
            Box(xs, self.re_max, ys, self.im_max),
        ]


@dataclass(frozen=True)
class RootRecord:
    """A located zero of det Gamma; multiplicity is the winding count of the
    enclosing leaf box (the order of the zero)."""

    z: complex
    multiplicity: int
    abs_det: float
    sigma_min: float
    kind: str


@dataclass(frozen=True)
class ResonanceSet:
    roots: list[RootRecord]
    searched: Box
    total_count: int

    @property
    def resonances(self) -> list[RootRecord]:
        return [r for r in self.roots if r.kind == RESONANCE]


def _trace_logdet(cfg: PointConfig, zs) -> np.ndarray:
    """tr(Gamma(z)^-1 Gamma'(z)) for a batch of z values."""
    zs = np.asarray(zs, dtype=complex)
    g = model.gamma_stack(cfg, zs)
    dg = model.gamma_derivative_stack(cfg, zs)
    x = np.linalg.solve(g, dg)
    return np.trace(x, axis1=-2, axis2=-1)


def _edge_quad(cfg, za: complex, zb: complex, tol: float, depth: int) -> complex:
    def panel(a, b):
        zm = 0.5 * (a + b) + 0.5 * (b - a) * _GL_X
        try:
            vals = _trace_logdet(cfg, zm)
        except np.linalg.LinAlgError:
            raise SubdivisionError("quadrature node hit a singular matrix")
        if not np.all(np.isfinite(vals)):
            raise SubdivisionError("quadrature node hit a singular matrix")
        return 0.5 * (b - a) * np.sum(_GL_W * vals)

    mid = 0.5 * (za + zb)
    whole = panel(za, zb)
    parts = panel(za, mid) + panel(mid, zb)
    if abs(whole - parts) < tol:
        return parts
    if depth >= _MAX_EDGE_DEPTH:
        raise SubdivisionError("edge quadrature exceeded maximum depth")
    return _edge_quad(cfg, za, mid, 0.5 * tol, depth + 1) + _edge_quad(
        cfg, mid, zb, 0.5 * tol, depth + 1
    )


def _boundary_admissible(cfg: PointConfig, box: Box) -> bool:
    t = np.linspace(0.0, 1.0, _EDGE_SAMPLES)
    cs = box.corners()
    zs = np.concatenate([cs[k] + t * (cs[(k + 1) % 4] - cs[k]) for k in range(4)])
    dets = np.linalg.det(model.gamma_stack(cfg, zs))
    return bool(np.abs(dets).min() > DET_FLOOR)


def _winding(cfg: PointConfig, box: Box) -> int:
    cs = box.corners()
    total = 0.0 + 0.0j
    for k in range(4):
        total += _edge_quad(cfg, cs[k], cs[(k + 1) % 4], 2.0 * np.pi * 2.5e-4, 0)
    raw = (total / (2j * np.pi)).real
    nearest = round(raw)
    if abs(raw - nearest) > 0.25:
        raise SubdivisionError(f"winding integral {raw:.6f} is not near an integer")
    return int(nearest)


def _counted_box(cfg: PointConfig, box: Box) -> tuple[Box, int]:
    """Winding count with an admissible boundary.

    The box shrinks inward by growing multiples of 1e-6 * diameter whenever a
    boundary sample sits on a zero of det Gamma or the edge quadrature fails
    to resolve a grazing pole.  Shrinking (rather than expanding) never pulls
    new zeros into the search region, and it keeps boundary zeros -- notably
    z = 0, which belongs to the threshold classification -- outside the
    reported count.
    """
    for k in range(_JITTER_RETRIES + 1):
        if k == 0:
            candidate = box
        else:
            try:
                candidate = box.shrunk(k * _JITTER * box.diameter)
            except ValueError:
                break
        if not _boundary_admissible(cfg, candidate):
            continue
        try:
            return candidate, _winding(cfg, candidate)
        except SubdivisionError:
            continue
    raise BoundaryError("could not move the box boundary off the zero set")


def count_zeros_in_box(cfg: PointConfig, box: Box) -> int:
    """Number of zeros of det Gamma inside the box, counted with order.

    The boundary is moved inward by up to 5 tiny jitters when it grazes a
    zero; the count refers to the jittered rectangle.
    """
    return _counted_box(cfg, box)[1]


_SPLIT_FRACTIONS = [
    (0.5, 0.5),
    (0.5 + 1.7e-3, 0.5 - 1.3e-3),
    (0.5 - 2.9e-3, 0.5 + 2.3e-3),
    (0.47, 0.53),
    (0.53, 0.47),
]


def _split_counted(cfg: PointConfig, box: Box, count: int):
    """Partition the box into 4 counted children whose counts sum to count.

    Split lines are nudged off the midpoint when they graze a zero or when a
    zero sitting exactly on a line makes the child counts disagree.
    """
    for fx, fy in _SPLIT_FRACTIONS:
        children = box.split(fx, fy)
        if not all(_boundary_admissible(cfg, c) for c in children):
            continue
        try:
            counted = [(c, _winding(cfg, c)) for c in children]
        except SubdivisionError:
            continue
        if sum(k for _, k in counted) == count:
            return counted
    raise SubdivisionError("no admissible quadrisection found")


def _newton_polish(cfg: PointConfig, box: Box, mult: int, tol: float):
    """Newton on log det from the box center, with the multiplicity-scaled
    step mult/tr(Gamma^-1 Gamma') for quadratic convergence at any order."""
    z = box.center
    for _ in range(_NEWTON_MAX_STEPS):
        try:
            f = complex(_trace_logdet(cfg, np.array([z]))[0])
        except np.linalg.LinAlgError:
            return z  # the iterate landed exactly on the zero set
        if not np.isfinite(f.real) or not np.isfinite(f.imag):
            return z
        if f == 0:
            return None
        step = mult / f
        z = z - step
        if not box.contains(z, pad=2.0 * box.diameter):
            return None
        if abs(step) < tol:
            return z
    return None


def _locate(cfg: PointConfig, box: Box, count: int, tol: float):
    if count == 0:
        return []
    if box.diameter < _POLISH_DIAMETER:
        z = _newton_polish(cfg, box, count, tol)
        if z is not None:
            return [(z, count)]
        if box.diameter < max(10.0 * tol, 1e-12):
            return [(box.center, count)]
    found = []
    for child, k in _split_counted(cfg, box, count):
        found.extend(_locate(cfg, child, k, tol))
    return found


def _classify_root(z: complex, tol: float) -> str:
    if abs(z) <= max(100.0 * tol, 1e-8):
        return THRESHOLD
    if z.imag > 0.0 and abs(z.real) <= 1e-8 * (1.0 + abs(z.imag)):
        return EIGENVALUE_POLE
    return RESONANCE


def find_resonances(cfg: PointConfig, box: Box, tol: float = 1e-10) -> ResonanceSet:
    """Locate all zeros of det Gamma inside the box by recursive quadrisection
    with Newton polishing.

    Zeros on the positive imaginary axis are the eigenvalue poles and are
    cross-labeled as such, not as resonances; a zero at the origin is labeled
    "threshold" and belongs to classify_zero.  The sum of reported
    multiplicities equals the winding count of the searched box.
    """
    if tol <= 0.0:
        raise ValueError("find_resonances requires tol > 0")
    searched, total = _counted_box(cfg, box)
    roots = []
    for z, mult in _locate(cfg, searched, total, tol):
        g = model.gamma_entries(cfg, z)
        roots.append(
            RootRecord(
                z=z,
                multiplicity=mult,
                abs_det=abs(linalg.lu_det(g)[1]),
                sigma_min=linalg.min_singular_value(g),
                kind=_classify_root(z, tol),
            )
        )
    roots.sort(key=lambda r: (r.z.real, r.z.imag))
    return ResonanceSet(roots=roots, searched=searched, total_count=total)


@dataclass(frozen=True)
class Certificate:
    """Real-axis non-singularity evidence (absence of positive resonances):
    grid scan of sigma_min(Gamma(z)) plus sinc-Gram Cholesky up to z_star,
    with the analytic row-sum bound covering z > z_star.

    A true verdict on the finite grid is evidence, not proof, for z between
    grid points; a false verdict would be loud news and is reported as-is.
    Caveat for many centers: as z -> 0 the sinc Gram matrix approaches the
    rank-one all-ones matrix and its smallest exact eigenvalue scales like a
    high power of z, so for N beyond ~10 double-precision Cholesky can fail
    at the smallest grid points even though the matrix is positive definite
    exactly; sigma_min stays the load-bearing invertibility figure there.
    """

    z_grid: np.ndarray
    sigma_min: np.ndarray
    cholesky_ok: np.ndarray
    z_star: float
    verdict: bool
    threshold: float
    grid_step: float

    @property
    def grid_covers_bound(self) -> bool:
        return self.z_grid.size > 0 and float(self.z_grid[-1]) >= self.z_star


def _chunked(n: int, size: int):
    for lo in range(0, n, size):
        yield slice(lo, min(lo + size, n))


def certify_real_axis(
    cfg: PointConfig,
    grid_step: float | None = None,
    margin: float = 1.0,
    sigma_threshold: float = 1e-10,
    z_max: float | None = None,
) -> Certificate:
    """Scan z in (0, z_star] and certify that Gamma(z) stays non-singular.

    z_star = 4 pi max|alpha| + (N-1)/d_min + margin; above it the diagonal
    -iz/4pi dominates (sigma_min >= z/4pi - row-sum bound > 0), so only the
    grid below needs scanning.  Default grid step 1e-2 * min(1, d_min)
    resolves the oscillation scale of exp(iz d_min); override for speed.
    """
    if margin <= 0.0:
        raise ValueError("certify_real_axis requires margin > 0")
    z_star = model.row_sum_bound(cfg) + margin
    if grid_step is None:
        grid_step = 1e-2 * min(1.0, cfg.d_min) if cfg.n > 1 else 1e-2
    if grid_step <= 0.0:
        raise ValueError("certify_real_axis requires grid_step > 0")
    top = z_max if z_max is not None else z_star
    count = int(np.ceil(top / grid_step))
    grid = grid_step * np.arange(1, count + 1)

    sigma = np.empty(grid.size)
    chol_ok = np.empty(grid.size, dtype=bool)
    for sl in _chunked(grid.size, 8192):
        zs = grid[sl]
        sigma[sl] = np.linalg.svd(model.gamma_stack(cfg, zs), compute_uv=False)[:, -1]
        grams = model.sinc_gram_stack(cfg, zs)
        try:
            np.linalg.cholesky(grams)
            chol_ok[sl] = True
        except np.linalg.LinAlgError:
            for i in range(grams.shape[0]):
                chol_ok[sl.start + i] = not isinstance(
                    linalg.cholesky(grams[i]), linalg.NotPositiveDefinite
                )

    covers = grid.size > 0 and float(grid[-1]) >= z_star
    verdict = bool(covers and np.all(sigma > sigma_threshold) and np.all(chol_ok))
    grid.setflags(write=False)
    sigma.setflags(write=False)
    chol_ok.setflags(write=False)
    return Certificate(
        z_grid=grid,
        sigma_min=sigma,
        cholesky_ok=chol_ok,
        z_star=z_star,
        verdict=verdict,
        threshold=sigma_threshold,
        grid_step=float(grid_step),
    )


def _pairwise_min_distance(points: np.ndarray) -> float:
    diff = points[:, None, :] - points[None, :, :]
    dist = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    iu, ju = np.triu_indices(points.shape[0], k=1)
    return float(dist[iu, ju].min())


def has_distinct_projections(points, a, min_separation_factor: float = 1e-8) -> bool:
    """True when the projections a . y_j are pairwise separated by at least
    min_separation_factor * d_min of the point set."""
    points = np.asarray(points, dtype=float)
    if points.shape[0] < 2:
        return True
    proj = np.sort(points @ np.asarray(a, dtype=float))
    return bool(np.diff(proj).min() >= min_separation_factor * _pairwise_min_distance(points))


def distinct_direction(
    points,
    min_separation_factor: float = 1e-8,
    seed: int = 0,
    max_tries: int = 10_000,
) -> np.ndarray:
    """Unit vector whose projections of the given (pairwise distinct) points
    are pairwise distinct.

    Directions failing the separation test form a null set (finitely many
    hyperplane sections of the sphere), so seeded rejection sampling accepts
    almost surely; persistent rejection signals near-duplicate points.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or points.shape[0] < 1:
        raise ValueError("points must be an M x d array, M >= 1")
    dim = points.shape[1]
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        a = rng.standard_normal(dim)
        norm = np.linalg.norm(a)
        if norm == 0.0:
            continue
        a /= norm
        if has_distinct_projections(points, a, min_separation_factor):
            return a
    raise RuntimeError(
        f"no separating direction after {max_tries} tries; points may be nearly duplicate"
    )


def exp_sum_on_sphere(points, v, p) -> complex:
    """sum_j v_j exp(i y_j . p) for a unit vector p (|p| = 1 within 1e-12)."""
    points = np.asarray(points, dtype=float)
    v = np.asarray(v, dtype=float)
    p = np.asarray(p, dtype=float)
    if abs(float(np.linalg.norm(p)) - 1.0) > 1e-12:
        raise ValueError("p must be a unit vector within 1e-12")
    return complex(np.sum(v * np.exp(1j * points @ p)))


def _random_rotation(rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((3, 3)))
    return q * np.sign(np.diag(r))


def sphere_points(n: int, seed=None, method: str = "gauss"):
    """Points p_i and weights w_i (sum 1) for averaging over the unit sphere.

    method "gauss": product Gauss-Legendre x equispaced-azimuth rule on an
    isqrt(n) x (n // isqrt(n)) grid -- spectrally accurate for smooth
    integrands.  method "fibonacci": n equal-weight spiral points (a
    quasi-uniform sample, accurate to roughly 1e-6 * |x| per 1e4 points for
    plane waves).  method "uniform": n iid uniform samples (error ~ n**-0.5).
    A seed applies a uniform random rotation to the whole point set, making
    the weighted average an unbiased estimator of the spherical mean.
    """
    if n < 1:
        raise ValueError("sphere_points requires n >= 1")
    if method == "gauss":
        n_theta = max(1, int(np.sqrt(n)))
        n_phi = max(1, n // n_theta)
        x, w = np.polynomial.legendre.leggauss(n_theta)
        phi = 2.0 * np.pi * (np.arange(n_phi) + 0.5) / n_phi
        r = np.sqrt(np.maximum(0.0, 1.0 - x * x))
        pts = np.empty((n_theta, n_phi, 3))
        pts[..., 0] = r[:, None] * np.cos(phi)[None, :]
        pts[..., 1] = r[:, None] * np.sin(phi)[None, :]
        pts[..., 2] = x[:, None]
        weights = np.broadcast_to(w[:, None] / (2.0 * n_phi), (n_theta, n_phi))
        pts = pts.reshape(-1, 3)
        weights = np.asarray(weights).reshape(-1)
    elif method == "fibonacci":
        i = np.arange(n)
        golden = np.pi * (3.0 - np.sqrt(5.0))
        zc = 1.0 - (2.0 * i + 1.0) / n
        r = np.sqrt(np.maximum(0.0, 1.0 - zc * zc))
        theta = golden * i
        pts = np.column_stack([r * np.cos(theta), r * np.sin(theta), zc])
        weights = np.full(n, 1.0 / n)
    elif method == "uniform":
        rng = np.random.default_rng(seed)
        pts = rng.standard_normal((n, 3))
        pts /= np.linalg.norm(pts, axis=1, keepdims=True)
        return pts, np.full(n, 1.0 / n)
    else:
        raise ValueError(f"unknown sphere sampling method {method!r}")
    if seed is not None:
        pts = pts @ _random_rotation(np.random.default_rng(seed)).T
    return pts, weights
