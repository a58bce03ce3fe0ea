"""Sampled checks of the angle-space properties An1 to An11 for one space and one exponent.

Every failing property carries a witness, a dictionary of vectors (and scalars) that
[`axiom_discrepancy`][bwangle.axioms.axiom_discrepancy] re-evaluates to the reported discrepancy.

- An2 to An7 are identities, measured on cosines with a `1e-9` tolerance.
- An8 to An10 are angle identities searched for violations with a `1e-6` tolerance.
- An1 is checked as coverage of `0`, `pi / 2` and `pi` along a path, and as a sampled modulus of continuity.
- An11 is checked as strict decrease of `t -> angle(x, y + t x)` on a logarithmic grid, with its limits.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import pandas as pd

from .._constants import COSINE_CLAMP, AxiomKeys
from .._errors import NotPositiveDefinite
from .._settings import settings
from ..corners.formulas import default_t_grid
from ..geometry.rho import angles_from_cosines, rho_cosines
from ..space import SpaceDescriptor

log = logging.getLogger(__name__)

BATCH_SIZE = 2500
IDENTITY_TOL = 1e-9
ANGLE_TOL = 1e-6
COVERAGE_TOL = 1e-3
LIMIT_TOL = 1e-2
PATH_POINTS = 4097
CONTINUITY_STEP = 1e-10
CONTINUITY_CONSTANT = 100.0
NEAR_PARALLEL = 1e-6
MONOTONICITY_PAIRS = 8

UNDEFINED = "undefined"
COVERAGE = "coverage"
PERTURBATION = "perturbation"
STEP = "step"
LIMIT = "limit"


@dataclass
class AxiomResult:
    """Outcome of one property

    Attributes:
        axiom: Property key, `"An1"` to `"An11"`
        status: `"pass"`, `"fail"` or `"skipped"`
        discrepancy: Discrepancy of the witness for a failure, else the largest measured discrepancy
        tolerance: Largest accepted discrepancy
        checked: Number of evaluated cases
        excluded: Number of cases dropped because one of their angles is undefined
        witness: Vectors re-evaluating to `discrepancy` (failures only)
    """

    axiom: str
    status: str
    discrepancy: float
    tolerance: float
    checked: int
    excluded: int = 0
    witness: dict | None = None

    def to_dict(self) -> dict:
        return {
            "axiom": self.axiom,
            "status": self.status,
            "discrepancy": self.discrepancy,
            "tolerance": self.tolerance,
            "checked": self.checked,
            "excluded": self.excluded,
            "witness": self.witness,
        }


@dataclass
class AxiomReport:
    space_id: str
    rho: float
    results: dict[str, AxiomResult]
    sample_count: int
    seed: int
    notes: list[str] = field(default_factory=list)

    def status(self, axiom: str) -> str:
        return self.results[axiom].status

    @property
    def failed(self) -> list[str]:
        return [axiom for axiom, result in self.results.items() if result.status == AxiomKeys.FAIL]

    @property
    def is_angle_space(self) -> bool:
        """Whether An1 to An7 all pass"""
        return all(self.status(axiom) == AxiomKeys.PASS for axiom in AxiomKeys.ALL[:7])

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([result.to_dict() for result in self.results.values()]).set_index("axiom")

    def to_dict(self) -> dict:
        return {
            "space": self.space_id,
            "rho": self.rho,
            "sample_count": self.sample_count,
            "seed": self.seed,
            "is_angle_space": self.is_angle_space,
            "results": {axiom: result.to_dict() for axiom, result in self.results.items()},
            "notes": self.notes,
        }


### Measurements, vectorized over rows of pairs


def _cosine(space: SpaceDescriptor, rho: float) -> Callable:
    return lambda a, b: rho_cosines(space, a, b, rho)


def _angle(space: SpaceDescriptor, rho: float) -> Callable:
    return lambda a, b: angles_from_cosines(rho_cosines(space, a, b, rho))[0]


IDENTITY_TERMS: dict[str, Callable] = {
    "An2": lambda cos, x, y, r, s: ([cos(x, x)], cos(x, x) - 1),
    "An3": lambda cos, x, y, r, s: ([cos(-x, x)], cos(-x, x) + 1),
    "An4": lambda cos, x, y, r, s: ([cos(x, y), cos(y, x)], cos(x, y) - cos(y, x)),
    "An5": lambda cos, x, y, r, s: ([cos(r * x, s * y), cos(x, y)], cos(r * x, s * y) - cos(x, y)),
    "An6": lambda cos, x, y, r, s: ([cos(-x, -y), cos(x, y)], cos(-x, -y) - cos(x, y)),
    "An7": lambda cos, x, y, r, s: ([cos(x, y), cos(-x, y)], cos(x, y) + cos(-x, y)),
}

SEARCHED_TERMS: dict[str, Callable] = {
    "An8": lambda angle, x, y: [angle(x, x + y), angle(x + y, y), -angle(x, y)],
    "An9": lambda angle, x, y: [angle(x, y), angle(-x, y - x), angle(-y, x - y), np.full(len(x), -np.pi)],
    "An10": lambda angle, x, y: [angle(y, y - x), angle(x, x - y), -angle(-x, y)],
}


def _identity(space, rho, axiom, x, y, r, s) -> tuple[np.ndarray, np.ndarray]:
    terms, value = IDENTITY_TERMS[axiom](_cosine(space, rho), x, y, r[:, None], s[:, None])
    defined = np.all([np.abs(term) <= 1 + COSINE_CLAMP for term in terms], axis=0)
    return np.abs(value), defined


def _searched(space, rho, axiom, x, y) -> tuple[np.ndarray, np.ndarray]:
    terms = SEARCHED_TERMS[axiom](_angle(space, rho), x, y)
    defined = np.all([~np.isnan(term) for term in terms], axis=0)
    return np.abs(np.sum(terms, axis=0)), defined


def _perturbation(space, rho, x, y, y_perturbed) -> tuple[np.ndarray, np.ndarray]:
    cos = _cosine(space, rho)
    before, after = cos(x, y), cos(x, y_perturbed)
    away = (np.abs(before) <= 1 - NEAR_PARALLEL) & (np.abs(after) <= 1 - NEAR_PARALLEL)
    with np.errstate(invalid="ignore"):
        change = np.abs(np.arccos(np.clip(after, -1, 1)) - np.arccos(np.clip(before, -1, 1)))
    return change, away


def _theta(space, rho, x, y, t) -> tuple[np.ndarray, np.ndarray]:
    """`t -> angle(x, y + t x)` on a grid, and its cosines"""
    X = np.tile(x, (len(t), 1))
    cosines = rho_cosines(space, X, y[None, :] + t[:, None] * x[None, :], rho)
    return angles_from_cosines(cosines)[0], cosines


### Sampling


@dataclass
class _Batch:
    X: np.ndarray
    Y: np.ndarray
    R: np.ndarray
    S: np.ndarray
    Y_perturbed: np.ndarray

    def __len__(self) -> int:
        return len(self.X)

    def pair(self, index: int, axiom: str) -> dict:
        witness = {"x": self.X[index].tolist(), "y": self.Y[index].tolist()}
        if axiom == "An5":
            witness |= {"r": float(self.R[index]), "s": float(self.S[index])}
        return witness


def _random_batch(n: int, size: int, seed_sequence: np.random.SeedSequence) -> _Batch:
    rng = np.random.default_rng(seed_sequence)
    X, Y = rng.normal(size=(size, n)), rng.normal(size=(size, n))
    R, S = np.exp(rng.normal(size=size)), np.exp(rng.normal(size=size))
    directions = rng.normal(size=(size, n))
    directions /= np.linalg.norm(directions, axis=-1, keepdims=True)
    step = CONTINUITY_STEP * np.linalg.norm(Y, axis=-1, keepdims=True)
    return _Batch(X=X, Y=Y, R=R, S=S, Y_perturbed=Y + step * directions)


def _basis_batch(n: int) -> _Batch | None:
    """Pairs of distinct basis vectors, evaluated before the random pairs"""
    i, j = np.nonzero(~np.eye(n, dtype=bool))
    if len(i) == 0:
        return None
    eye = np.eye(n)
    ones = np.ones(len(i))
    return _Batch(X=eye[i], Y=eye[j], R=2 * ones, S=ones / 2, Y_perturbed=eye[j] + CONTINUITY_STEP * eye[i])


def _measure_batch(space: SpaceDescriptor, rho: float, batch: _Batch) -> dict[str, tuple[np.ndarray, np.ndarray]]:
    measurements = {}
    for axiom in AxiomKeys.IDENTITIES:
        measurements[axiom] = _identity(space, rho, axiom, batch.X, batch.Y, batch.R, batch.S)
    for axiom in AxiomKeys.SEARCHED:
        measurements[axiom] = _searched(space, rho, axiom, batch.X, batch.Y)

    cosines = rho_cosines(space, batch.X, batch.Y, rho)
    measurements[UNDEFINED] = (np.abs(cosines) - 1, np.abs(cosines) <= 1 + COSINE_CLAMP)
    measurements[PERTURBATION] = _perturbation(space, rho, batch.X, batch.Y, batch.Y_perturbed)
    return measurements


### Results


def _first_failure(discrepancy: np.ndarray, mask: np.ndarray, tol: float) -> int | None:
    failing = np.flatnonzero(mask & (discrepancy > tol))
    return int(failing[0]) if len(failing) else None


def _sampled_result(axiom, discrepancy, defined, tol, batches, offsets) -> AxiomResult:
    checked, excluded = int(defined.sum()), int((~defined).sum())
    if checked == 0:
        return AxiomResult(axiom, AxiomKeys.SKIPPED, float("nan"), tol, 0, excluded)

    index = _first_failure(discrepancy, defined, tol)
    if index is None:
        return AxiomResult(axiom, AxiomKeys.PASS, float(discrepancy[defined].max()), tol, checked, excluded)

    b = int(np.searchsorted(offsets, index, side="right") - 1)
    witness = batches[b].pair(index - offsets[b], axiom)
    return AxiomResult(axiom, AxiomKeys.FAIL, float(discrepancy[index]), tol, checked, excluded, witness)


def _path_coverage(space: SpaceDescriptor, rho: float) -> tuple[AxiomResult | None, int]:
    """An1 along `cos(phi) e1 + sin(phi) e2`, which must reach `0`, `pi / 2` and `pi`"""
    n = space.dimension
    e1 = np.eye(n)[0]
    if n == 1:
        Y, targets = np.stack([e1, -e1]), [0.0, np.pi]
    else:
        phi = np.linspace(0, np.pi, PATH_POINTS)
        Y, targets = np.cos(phi)[:, None] * e1 + np.sin(phi)[:, None] * np.eye(n)[1], [0.0, np.pi / 2, np.pi]
    X = np.tile(e1, (len(Y), 1))

    cosines = rho_cosines(space, X, Y, rho)
    angles, defined = angles_from_cosines(cosines)
    if not defined.all():
        index = int(np.flatnonzero(~defined)[0])
        witness = {"kind": UNDEFINED, "x": X[index].tolist(), "y": Y[index].tolist()}
        return AxiomResult("An1", AxiomKeys.FAIL, float(abs(cosines[index]) - 1), COVERAGE_TOL, len(Y), 0, witness), 0

    for target in targets:
        index = int(np.argmin(np.abs(angles - target)))
        gap = float(abs(angles[index] - target))
        if gap > COVERAGE_TOL:
            witness = {"kind": COVERAGE, "x": X[index].tolist(), "y": Y[index].tolist(), "target": target}
            return AxiomResult("An1", AxiomKeys.FAIL, gap, COVERAGE_TOL, len(Y), 0, witness), len(Y)
    return None, len(Y)


def _continuity_result(space, rho, measurements, batches, offsets) -> AxiomResult:
    coverage, path_count = _path_coverage(space, rho)
    if coverage is not None:
        return coverage

    gaps, defined = measurements[UNDEFINED]
    bound = CONTINUITY_CONSTANT * np.sqrt(CONTINUITY_STEP)
    checked = path_count + len(gaps)

    if not defined.all():
        index = int(np.flatnonzero(~defined)[0])
        b = int(np.searchsorted(offsets, index, side="right") - 1)
        witness = {"kind": UNDEFINED, **batches[b].pair(index - offsets[b], "An1")}
        return AxiomResult("An1", AxiomKeys.FAIL, float(gaps[index]), bound, checked, 0, witness)

    change, away = measurements[PERTURBATION]
    index = _first_failure(change, away, bound)
    if index is None:
        largest = float(change[away].max()) if away.any() else 0.0
        return AxiomResult("An1", AxiomKeys.PASS, largest, bound, checked, int((~away).sum()))

    b = int(np.searchsorted(offsets, index, side="right") - 1)
    local = index - offsets[b]
    witness = {
        "kind": PERTURBATION,
        **batches[b].pair(local, "An1"),
        "y_perturbed": batches[b].Y_perturbed[local].tolist(),
    }
    return AxiomResult("An1", AxiomKeys.FAIL, float(change[index]), bound, checked, int((~away).sum()), witness)


def _monotonicity_result(space: SpaceDescriptor, rho: float, batches: list[_Batch]) -> AxiomResult:
    n = space.dimension
    if n == 1:
        return AxiomResult("An11", AxiomKeys.SKIPPED, float("nan"), LIMIT_TOL, 0)

    # unit random pairs far from parallel, so that the grid ends are close to the limits
    X, Y = batches[-1].X, batches[-1].Y
    X, Y = X / space.weights(X)[:, None], Y / space.weights(Y)[:, None]
    euclidean = np.abs(np.sum(X * Y, axis=-1)) / (np.linalg.norm(X, axis=-1) * np.linalg.norm(Y, axis=-1))
    spread = np.flatnonzero(euclidean <= 0.9)[:MONOTONICITY_PAIRS]

    pairs = [(np.eye(n)[0], np.eye(n)[1])] + [(X[i], Y[i]) for i in spread]
    t = default_t_grid()
    largest_step = -np.inf

    for x, y in pairs:
        theta, cosines = _theta(space, rho, x, y, t)
        base = {"x": x.tolist(), "y": y.tolist()}

        undefined = np.flatnonzero(np.isnan(theta))
        if len(undefined):
            i = int(undefined[0])
            witness = {"kind": UNDEFINED, **base, "t": [float(t[i])]}
            return AxiomResult("An11", AxiomKeys.FAIL, float(abs(cosines[i]) - 1), 0.0, len(pairs), 0, witness)

        steps = np.diff(theta)
        increasing = np.flatnonzero(steps >= 0)
        if len(increasing):
            i = int(increasing[0])
            witness = {"kind": STEP, **base, "t": [float(t[i]), float(t[i + 1])]}
            return AxiomResult("An11", AxiomKeys.FAIL, float(steps[i]), 0.0, len(pairs), 0, witness)
        largest_step = max(largest_step, float(steps.max()))

        for i, limit in ((0, np.pi), (len(t) - 1, 0.0)):
            gap = abs(float(theta[i]) - limit)
            if gap > LIMIT_TOL:
                witness = {"kind": LIMIT, **base, "t": [float(t[i])]}
                return AxiomResult("An11", AxiomKeys.FAIL, gap, LIMIT_TOL, len(pairs), 0, witness)

    return AxiomResult("An11", AxiomKeys.PASS, largest_step, 0.0, len(pairs))


def check_axioms(
    space: SpaceDescriptor, rho: float, samples: int | None = None, seed: int | None = None
) -> AxiomReport:
    """Check the angle-space properties An1 to An11 of the rho-angle on seeded samples

    Random pairs are drawn in batches whose seeds are spawned from the root seed, and evaluated
    after the pairs of distinct basis vectors. A failing property reports the first violating
    case in that order. Pairs with an undefined angle are excluded from An2 to An10 (and counted),
    but make An1 fail.

    Args:
        space: A positive definite space
        rho: The exponent
        samples: Number of random pairs
        seed: Root seed of the random pairs

    Returns:
        An `AxiomReport`
    """
    samples = settings.axiom_samples if samples is None else samples
    seed = settings.seed if seed is None else seed
    assert samples >= 1, "At least one random pair is required"
    if not space.positive_definite:
        raise NotPositiveDefinite(f"Axiom checks require a positive definite space, {space.label} is not")

    sizes = [BATCH_SIZE] * (samples // BATCH_SIZE) + ([samples % BATCH_SIZE] if samples % BATCH_SIZE else [])
    children = np.random.SeedSequence(seed).spawn(len(sizes))
    batches = [_random_batch(space.dimension, size, child) for size, child in zip(sizes, children)]
    basis = _basis_batch(space.dimension)
    if basis is not None:
        batches.insert(0, basis)

    per_batch = settings._run_with_backend(
        [lambda batch=batch: _measure_batch(space, rho, batch) for batch in batches], desc="Axiom batches"
    )
    measurements = {
        key: tuple(np.concatenate([measured[key][k] for measured in per_batch]) for k in range(2))
        for key in per_batch[0]
    }
    offsets = np.cumsum([0] + [len(batch) for batch in batches[:-1]])

    results = {"An1": _continuity_result(space, rho, measurements, batches, offsets)}
    for axiom in AxiomKeys.IDENTITIES:
        results[axiom] = _sampled_result(axiom, *measurements[axiom], IDENTITY_TOL, batches, offsets)
    for axiom in AxiomKeys.SEARCHED:
        results[axiom] = _sampled_result(axiom, *measurements[axiom], ANGLE_TOL, batches, offsets)
    results["An11"] = _monotonicity_result(space, rho, batches)

    notes = []
    undefined = int((~measurements[UNDEFINED][1]).sum())
    if undefined:
        log.warning(f"{undefined} sampled pairs have no {rho}-angle in {space.label}")
        notes.append(f"{undefined} pairs with an undefined angle; An2 to An10 checked on defined pairs only")

    return AxiomReport(
        space_id=space.label,
        rho=float(rho),
        results=results,
        sample_count=int(sum(len(batch) for batch in batches)),
        seed=seed,
        notes=notes,
    )


def axiom_discrepancy(space: SpaceDescriptor, rho: float, axiom: str, witness: dict) -> float:
    """Re-evaluate the discrepancy of a stored witness

    Args:
        space: The space the witness was found in
        rho: The exponent
        axiom: Property key, `"An1"` to `"An11"`
        witness: The `witness` of a failing `AxiomResult`

    Returns:
        The discrepancy reported with the witness
    """
    assert axiom in AxiomKeys.ALL, f"Unknown property {axiom}. Valid keys are {AxiomKeys.ALL}"
    x, y = np.array([witness["x"]], dtype=float), np.array([witness["y"]], dtype=float)
    kind = witness.get("kind")

    if kind == UNDEFINED and axiom == "An11":
        t = np.array(witness["t"])
        return float(abs(_theta(space, rho, x[0], y[0], t)[1][0]) - 1)
    if kind == UNDEFINED:
        return float(abs(rho_cosines(space, x, y, rho)[0]) - 1)
    if kind == COVERAGE:
        return float(abs(_angle(space, rho)(x, y)[0] - witness["target"]))
    if kind == PERTURBATION:
        y_perturbed = np.array([witness["y_perturbed"]], dtype=float)
        return float(_perturbation(space, rho, x, y, y_perturbed)[0][0])
    if kind == STEP:
        theta = _theta(space, rho, x[0], y[0], np.array(witness["t"]))[0]
        return float(theta[1] - theta[0])
    if kind == LIMIT:
        t = witness["t"][0]
        return float(abs(_theta(space, rho, x[0], y[0], np.array([t]))[0][0] - (0.0 if t > 0 else np.pi)))

    if axiom in IDENTITY_TERMS:
        r, s = np.array([witness.get("r", 1.0)]), np.array([witness.get("s", 1.0)])
        return float(_identity(space, rho, axiom, x, y, r, s)[0][0])
    return float(_searched(space, rho, axiom, x, y)[0][0])
