import numpy as np

from deltaspec import PointConfig


def random_config(rng, n, radius=5.0, min_dist=0.1, alpha_scale=5.0):
    """Seeded random configuration: centers in the ball of given radius with
    pairwise distance at least min_dist, strengths uniform in +-alpha_scale."""
    while True:
        directions = rng.standard_normal((n, 3))
        directions /= np.linalg.norm(directions, axis=1, keepdims=True)
        radii = radius * rng.uniform(0.0, 1.0, size=n) ** (1.0 / 3.0)
        pts = directions * radii[:, None]
        if n == 1:
            break
        diff = pts[:, None, :] - pts[None, :, :]
        dist = np.sqrt((diff ** 2).sum(axis=-1))
        iu, ju = np.triu_indices(n, k=1)
        if dist[iu, ju].min() >= min_dist:
            break
    alpha = rng.uniform(-alpha_scale, alpha_scale, size=n)
    return PointConfig(alpha=alpha, points=pts)


def two_center_config(a, d):
    """Symmetric two-center configuration with equal strengths a at distance d."""
    return PointConfig(alpha=[a, a], points=[[0.0, 0.0, 0.0], [d, 0.0, 0.0]])
