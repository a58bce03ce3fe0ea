import logging
from dataclasses import dataclass, field

import numpy as np

from .._settings import settings
from .descriptor import SpaceDescriptor
from .weights import angular_grid, directions

log = logging.getLogger(__name__)

GRID_DIRECTIONS = 64


@dataclass
class StructureReport:
    """Sampled evidence for positive definiteness, the triangle inequality and the parallelogram identity"""

    is_positive_definite: bool
    triangle_inequality_holds: bool
    parallelogram_identity_holds: bool
    sample_count: int
    tolerance: float
    seed: int
    triangle_witness: tuple[list[float], list[float]] | None = None
    triangle_violation: float = 0.0
    parallelogram_witness: tuple[list[float], list[float]] | None = None
    parallelogram_violation: float = 0.0
    evidence: list[str] = field(default_factory=list)

    @property
    def ip_space_candidate(self) -> bool:
        return self.is_positive_definite and self.triangle_inequality_holds and self.parallelogram_identity_holds

    def to_dict(self) -> dict:
        return {
            "is_positive_definite": self.is_positive_definite,
            "triangle_inequality_holds": self.triangle_inequality_holds,
            "triangle_witness": self.triangle_witness,
            "triangle_violation": self.triangle_violation,
            "parallelogram_identity_holds": self.parallelogram_identity_holds,
            "parallelogram_witness": self.parallelogram_witness,
            "parallelogram_violation": self.parallelogram_violation,
            "ip_space_candidate": self.ip_space_candidate,
            "sample_count": self.sample_count,
            "tolerance": self.tolerance,
            "seed": self.seed,
            "evidence": self.evidence,
        }


def _sample_pairs(space: SpaceDescriptor, samples: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic grid pairs first, then seeded random pairs"""
    n = space.dimension
    if n == 2:
        D = directions(angular_grid(GRID_DIRECTIONS))
    else:
        eye = np.eye(n)
        D = np.concatenate([eye, -eye, (eye[:, None] + eye[None]).reshape(-1, n)])

    i, j = np.meshgrid(np.arange(len(D)), np.arange(len(D)), indexing="ij")
    rng = np.random.default_rng(seed)
    X = np.concatenate([D[i.ravel()], rng.normal(size=(samples, n))])
    Y = np.concatenate([D[j.ravel()], rng.normal(size=(samples, n))])
    return X, Y


def _witness(X: np.ndarray, Y: np.ndarray, index: int) -> tuple[list[float], list[float]]:
    return X[index].tolist(), Y[index].tolist()


def _polygon_triangle_witness(space: SpaceDescriptor) -> tuple[list[float], list[float]] | None:
    """Two neighbours of a reflex vertex: their sum has weight > 2"""
    V = space.polygonal_vertices
    k = len(V)
    for i in range(k):
        a, v, b = V[i - 1], V[i], V[(i + 1) % k]
        turn = (v[0] - a[0]) * (b[1] - v[1]) - (v[1] - a[1]) * (b[0] - v[0])
        if turn < 0:
            return a.tolist(), b.tolist()
    return None


def structure_report(
    space: SpaceDescriptor, samples: int | None = None, tol: float | None = None, seed: int | None = None
) -> StructureReport:
    """Check positive definiteness, the triangle inequality and the parallelogram identity on samples

    The deterministic pairs of a direction grid are evaluated before the seeded random pairs, so
    the reported witness is the first pair (in that order) attaining the largest relative violation.

    Args:
        space: A space descriptor
        samples: Number of random pairs (at least 100)
        tol: Relative tolerance of both checks
        seed: Seed of the random pairs

    Returns:
        A `StructureReport`
    """
    samples = settings.structure_samples if samples is None else samples
    tol = settings.structure_tolerance if tol is None else tol
    seed = settings.seed if seed is None else seed
    assert samples >= 100, "At least 100 random pairs are required"

    X, Y = _sample_pairs(space, samples, seed)
    wx, wy = space.weights(X), space.weights(Y)
    w_sum, w_diff = space.weights(X + Y), space.weights(X - Y)

    nonzero = np.any(X != 0, axis=-1)
    is_positive_definite = bool(space.positive_definite and np.all(wx[nonzero] > 0))
    evidence = [f"{len(X)} pairs ({samples} random, seed {seed})"]
    if not is_positive_definite:
        if space.positive_definite:
            evidence.append("zero weight found on a sampled non-zero vector")
        else:
            evidence.append("weight family is not positive definite")

    with np.errstate(divide="ignore", invalid="ignore"):
        scale = np.maximum(wx + wy, np.finfo(float).tiny)
        triangle = (w_sum - (wx + wy)) / scale

        rhs = 2 * (wx**2 + wy**2)
        parallelogram = np.abs(w_sum**2 + w_diff**2 - rhs) / np.maximum(rhs, np.finfo(float).tiny)

    triangle_index = int(np.argmax(triangle))
    triangle_holds = bool(triangle[triangle_index] <= tol)
    triangle_witness = None if triangle_holds else _witness(X, Y, triangle_index)

    if space.polygonal_vertices is not None and space.dimension == 2 and hasattr(space.family, "is_convex"):
        convex = space.family.is_convex
        evidence.append(f"polygonal unit ball is {'convex' if convex else 'not convex'}")
        if triangle_holds and not convex:
            triangle_holds, triangle_witness = False, _polygon_triangle_witness(space)

    parallelogram_index = int(np.argmax(parallelogram))
    parallelogram_holds = bool(parallelogram[parallelogram_index] <= tol)

    report = StructureReport(
        is_positive_definite=is_positive_definite,
        triangle_inequality_holds=triangle_holds,
        parallelogram_identity_holds=parallelogram_holds,
        sample_count=len(X),
        tolerance=tol,
        seed=seed,
        triangle_witness=triangle_witness,
        triangle_violation=max(float(triangle[triangle_index]), 0.0),
        parallelogram_witness=None if parallelogram_holds else _witness(X, Y, parallelogram_index),
        parallelogram_violation=float(parallelogram[parallelogram_index]),
        evidence=evidence,
    )
    log.debug(f"Structure of {space.label}: {report.to_dict()}")
    return report
