from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .._constants import HOMOGENEITY_FACTORS, HOMOGENEITY_TOL, FamilyKeys
from .._errors import InvalidSpace
from ._families import (
    Hexagon,
    Hoelder,
    PathologicalA,
    PolygonSphere,
    Product,
    RadialTable,
    WeightFamily,
    parse_extended,
    pathological_b,
    pathological_c,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SpaceDescriptor:
    """A finite-dimensional real vector space together with a balanced weight.

    The descriptor is immutable and hashable. The flags `positive_definite` and
    `continuous_weight` are derived once, at construction, where the absolute
    homogeneity of the weight is also checked on a few sampled vectors.

    Args:
        family: The weight family (see [`hoelder`][bwangle.space.hoelder], [`hexagon`][bwangle.space.hexagon], ...)
    """

    family: WeightFamily
    dimension: int = field(init=False)
    positive_definite: bool = field(init=False)
    continuous_weight: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "dimension", self.family.dimension)
        object.__setattr__(self, "positive_definite", bool(self.family.positive_definite))
        object.__setattr__(self, "continuous_weight", bool(self.family.continuous))
        _check_homogeneity(self)

    def weights(self, X: np.ndarray) -> np.ndarray:
        """Vectorized weight of an array of vectors of shape `(..., dimension)`"""
        X = np.asarray(X, dtype=float)
        if X.shape[-1] != self.dimension:
            raise InvalidSpace(f"Vectors of length {X.shape[-1]} given to a space of dimension {self.dimension}")
        return self.family.evaluate(X)

    @property
    def label(self) -> str:
        return self.family.label()

    @property
    def polygonal_vertices(self) -> np.ndarray | None:
        return self.family.polygonal_vertices

    def to_dict(self) -> dict:
        return self.family.to_dict()


def hoelder(p: float | str, dimension: int = 2) -> SpaceDescriptor:
    return SpaceDescriptor(Hoelder(parse_extended(p), int(dimension)))


def line() -> SpaceDescriptor:
    """The real line with the absolute value"""
    return hoelder(2, dimension=1)


def hexagon(r: float) -> SpaceDescriptor:
    return SpaceDescriptor(Hexagon(float(r)))


def polygon(vertices) -> SpaceDescriptor:
    return SpaceDescriptor(PolygonSphere(tuple(tuple(map(float, v)) for v in vertices)))


def radial_table(samples, overrides=(), max_gap: float = math.pi / 2) -> SpaceDescriptor:
    return SpaceDescriptor(
        RadialTable(
            samples=tuple(tuple(map(float, s)) for s in samples),
            overrides=tuple(tuple(map(float, s)) for s in overrides),
            max_gap=float(max_gap),
        )
    )


def pathological(kind: str) -> SpaceDescriptor:
    """One of the spheres `"a"` (|x| |y| = 1), `"b"` (circle with (±1,0) moved to (±2,0)) or `"c"` (to (±1/2,0))"""
    kind = kind.lower().removeprefix("pathological_")
    if kind == "a":
        return SpaceDescriptor(PathologicalA())
    if kind == "b":
        return SpaceDescriptor(pathological_b())
    if kind == "c":
        return SpaceDescriptor(pathological_c())
    raise InvalidSpace(f"Unknown pathological sphere {kind!r}, choose among 'a', 'b', 'c'")


def product_space(left: SpaceDescriptor, right: SpaceDescriptor, p: float | str) -> SpaceDescriptor:
    """Product `A x B` with the weight `||(a, b)||_p`

    Args:
        left: The space `A`
        right: The space `B`
        p: Extended real exponent. `p = 0` gives the zero weight, `±inf` the max / min of the two factor weights.

    Returns:
        The descriptor of `A x B`, of dimension `dim A + dim B`
    """
    return SpaceDescriptor(Product(left.family, right.family, parse_extended(p)))


def space_from_dict(data: dict) -> SpaceDescriptor:
    """Build a descriptor from its JSON form, e.g. `{"family": "hoelder", "p": 1}`"""
    if not isinstance(data, dict) or "family" not in data:
        raise InvalidSpace(f"A space descriptor must be a JSON object with a 'family' key, found {data!r}")

    family = str(data["family"]).lower()

    try:
        if family == FamilyKeys.HOELDER:
            return hoelder(data["p"], int(data.get("dimension", 2)))
        if family == FamilyKeys.LINE:
            return line()
        if family == FamilyKeys.HEXAGON:
            return hexagon(data["r"])
        if family == FamilyKeys.POLYGON:
            return polygon(data["vertices"])
        if family == FamilyKeys.RADIAL:
            return radial_table(data["samples"], data.get("overrides", ()), data.get("max_gap", math.pi / 2))
        if family in (FamilyKeys.PATHOLOGICAL_A, FamilyKeys.PATHOLOGICAL_B, FamilyKeys.PATHOLOGICAL_C):
            return pathological(family)
        if family == FamilyKeys.PRODUCT:
            return product_space(space_from_dict(data["left"]), space_from_dict(data["right"]), data["p"])
    except KeyError as e:
        raise InvalidSpace(f"Missing key {e} in the '{family}' space descriptor")
    except (TypeError, ValueError) as e:
        if isinstance(e, InvalidSpace):
            raise
        raise InvalidSpace(f"Invalid '{family}' space descriptor: {e}")

    raise InvalidSpace(f"Unknown space family {family!r}")


def space_to_dict(space: SpaceDescriptor) -> dict:
    return space.to_dict()


def parse_space(source: str) -> SpaceDescriptor:
    """Parse an inline JSON descriptor, or read it from a JSON file path"""
    source = source.strip()
    if not source.startswith("{"):
        path = Path(source)
        if not path.exists():
            raise InvalidSpace(f"The space source {source!r} is neither a JSON object nor an existing file")
        source = path.read_text()

    try:
        data = json.loads(source)
    except json.JSONDecodeError as e:
        raise InvalidSpace(f"Invalid JSON space descriptor: {e}")

    return space_from_dict(data)


def _check_homogeneity(space: SpaceDescriptor, n_vectors: int = 8):
    rng = np.random.default_rng(0)
    X = np.concatenate([np.eye(space.dimension), rng.normal(size=(n_vectors, space.dimension))])

    X = X[_evaluable(space, X)]

    weights = space.family.evaluate(X)
    for r in HOMOGENEITY_FACTORS:
        scaled = space.family.evaluate(r * X)
        error = np.abs(scaled - abs(r) * weights)
        if np.any(error > HOMOGENEITY_TOL * np.maximum(1.0, weights)):
            index = int(np.argmax(error))
            raise InvalidSpace(
                f"The weight of {space.label} is not absolutely homogeneous at x={X[index].tolist()}, r={r}"
            )


def _evaluable(space: SpaceDescriptor, X: np.ndarray) -> np.ndarray:
    """Mask of the rows the weight can evaluate (radial tables may leave directions unbracketed)"""
    try:
        space.family.evaluate(X)
        return np.ones(len(X), dtype=bool)
    except InvalidSpace:
        mask = np.zeros(len(X), dtype=bool)
        for i, x in enumerate(X):
            try:
                space.family.evaluate(x[None])
                mask[i] = True
            except InvalidSpace:
                pass
        return mask
