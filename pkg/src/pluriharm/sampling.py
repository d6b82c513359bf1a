"""Seeded, reproducible sample points in the unit ball."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .errors import DomainError

DEFAULT_RADII = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8)


@dataclass(frozen=True)
class SampleConfig:
    seed: int = 0
    points_per_radius: int = 32
    radii: tuple[float, ...] = DEFAULT_RADII
    directions_per_point: int = 4

    def __post_init__(self):
        object.__setattr__(self, "radii", tuple(float(r) for r in self.radii))
        if not self.radii or any(not 0.0 < r < 1.0 for r in self.radii):
            raise DomainError(f"radii must lie in (0, 1), got {self.radii}")
        if self.points_per_radius < 1 or self.directions_per_point < 1:
            raise DomainError("sample counts must be >= 1")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise DomainError("seed must be a 64-bit unsigned integer")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["radii"] = list(self.radii)
        return d


def unit_vectors(rng: np.random.Generator, count: int, n: int) -> np.ndarray:
    """``count`` uniformly distributed unit vectors of C^n (normalized Gaussians)."""
    g = rng.standard_normal((count, 2 * n))
    v = g[:, 0::2] + 1j * g[:, 1::2]
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def sample_points(n: int, config: SampleConfig, scale: float = 1.0) -> list[tuple[int, float, np.ndarray]]:
    """``(index, radius, z)`` triples: each radius times ``points_per_radius`` directions.

    ``scale`` multiplies every radius (used to sample sub-balls).
    """
    rng = np.random.default_rng(config.seed)
    out = []
    idx = 0
    for r in config.radii:
        for u in unit_vectors(rng, config.points_per_radius, n):
            rad = r * scale
            out.append((idx, rad, rad * u))
            idx += 1
    return out


def sample_directions(n: int, config: SampleConfig, salt: int = 1) -> np.ndarray:
    """Complex unit directions, independent of the point stream."""
    rng = np.random.default_rng([config.seed, salt])
    return unit_vectors(rng, config.directions_per_point, n)
