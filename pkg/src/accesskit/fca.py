"""Floating-catchment-area accessibility scores.

All variants share one two-step scheme. Step 1 gives each facility j a
supply-to-demand ratio

    R_j = S_j / sum_k D_k f(d_kj)

over the demand it can reach under the decay f. Step 2 sums the reachable
ratios at each demand site i:

    A_i = sum_j f(d_ij) R_j

Scores are resource units per person; multiply by 1000 for a
per-thousand-people reading. The variants differ only in f and in whether
the step-2 weight is applied once (g2sfca and its specializations) or
twice (m2sfca, which discounts for suboptimal facility configuration and
therefore captures at most the total supply).
"""

from dataclasses import dataclass

import numpy as np

from .data_model import Dataset
from .decay import DecaySpec, evaluate_decay
from .errors import DimensionMismatch, WrongDecayKind
from .travel import TravelMatrix

FCA_METHODS = ("two_sfca", "e2sfca", "g2sfca", "m2sfca")


@dataclass(frozen=True, eq=False)
class AccessibilityResult:
    """Per-demand scores A_i and per-supply ratios R_j for one method run."""

    method: str
    decay: DecaySpec
    scores: np.ndarray
    supply_ratios: np.ndarray
    warnings: tuple[str, ...] = ()

    def __post_init__(self):
        for name in ("scores", "supply_ratios"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)


def _check_dims(dataset: Dataset, matrix: TravelMatrix) -> None:
    if matrix.cost.shape != (len(dataset.demand), len(dataset.supply)):
        raise DimensionMismatch(
            f"matrix is {matrix.cost.shape}, dataset is "
            f"({len(dataset.demand)}, {len(dataset.supply)})"
        )


def decay_weights(matrix: TravelMatrix, decay: DecaySpec) -> np.ndarray:
    """The demand x supply weight matrix W = f(cost)."""
    return evaluate_decay(decay, matrix.cost)


def supply_ratios_from_weights(dataset: Dataset, weights: np.ndarray):
    """Step-1 ratios from a precomputed weight matrix.

    Returns (ratios, zero_capture_ids). A facility whose decay-weighted
    demand is zero sits outside everyone's catchment; it gets ratio 0 and
    its id is reported rather than raising.
    """
    demand_pop = np.array([s.population for s in dataset.demand], dtype=float)
    capacity = np.array([s.capacity for s in dataset.supply], dtype=float)
    captured = demand_pop @ weights
    ratios = np.zeros_like(capacity)
    reached = captured > 0
    ratios[reached] = capacity[reached] / captured[reached]
    zero_capture = tuple(
        dataset.supply[j].id for j in np.flatnonzero(~reached)
    )
    return ratios, zero_capture


def step1_supply_ratios(dataset: Dataset, matrix: TravelMatrix,
                        decay: DecaySpec) -> np.ndarray:
    """Per-facility supply-to-captured-demand ratios R_j."""
    _check_dims(dataset, matrix)
    ratios, _ = supply_ratios_from_weights(dataset, decay_weights(matrix, decay))
    return ratios


def g2sfca(dataset: Dataset, matrix: TravelMatrix, decay: DecaySpec) -> AccessibilityResult:
    """Generalized two-step floating catchment area with an arbitrary decay.

    A_i = sum_j f(d_ij) S_j / sum_k D_k f(d_kj). The binary, zonal, and
    continuous variants are all this computation with different f.
    """
    _check_dims(dataset, matrix)
    weights = decay_weights(matrix, decay)
    ratios, zero_capture = supply_ratios_from_weights(dataset, weights)
    scores = weights @ ratios
    return AccessibilityResult(
        method="g2sfca", decay=decay, scores=scores,
        supply_ratios=ratios, warnings=zero_capture,
    )


def two_sfca(dataset: Dataset, matrix: TravelMatrix, d0: float) -> AccessibilityResult:
    """Original all-or-nothing variant: weight 1 within d0, 0 beyond."""
    result = g2sfca(dataset, matrix, DecaySpec.binary(d0))
    return AccessibilityResult(
        method="two_sfca", decay=result.decay, scores=result.scores,
        supply_ratios=result.supply_ratios, warnings=result.warnings,
    )


def e2sfca(dataset: Dataset, matrix: TravelMatrix, decay: DecaySpec) -> AccessibilityResult:
    """Zoned variant: the catchment splits into travel-cost bands, each with
    its own weight (conventionally Gaussian-derived, see zonal_from_gaussian).
    """
    if decay.kind != "zonal":
        raise WrongDecayKind(f"e2sfca requires zonal decay, got {decay.kind!r}")
    result = g2sfca(dataset, matrix, decay)
    return AccessibilityResult(
        method="e2sfca", decay=decay, scores=result.scores,
        supply_ratios=result.supply_ratios, warnings=result.warnings,
    )


def m2sfca(dataset: Dataset, matrix: TravelMatrix, decay: DecaySpec) -> AccessibilityResult:
    """Modified variant applying the decay weight again on assignment:

    A_i = sum_j f(d_ij)^2 S_j / sum_k D_k f(d_kj)

    Total captured accessibility sum_i D_i A_i then falls short of total
    supply unless every active weight is 1; the gap measures how far the
    facility layout is from an ideal configuration.
    """
    _check_dims(dataset, matrix)
    weights = decay_weights(matrix, decay)
    ratios, zero_capture = supply_ratios_from_weights(dataset, weights)
    scores = (weights * weights) @ ratios
    return AccessibilityResult(
        method="m2sfca", decay=decay, scores=scores,
        supply_ratios=ratios, warnings=zero_capture,
    )


def compute_accessibility(method: str, dataset: Dataset, matrix: TravelMatrix,
                          decay: DecaySpec) -> AccessibilityResult:
    """Dispatch by method name; two_sfca uses the decay's d0 as its cutoff."""
    if method == "two_sfca":
        return two_sfca(dataset, matrix, decay.d0)
    if method == "e2sfca":
        return e2sfca(dataset, matrix, decay)
    if method == "g2sfca":
        return g2sfca(dataset, matrix, decay)
    if method == "m2sfca":
        return m2sfca(dataset, matrix, decay)
    raise ValueError(f"unknown method {method!r}; expected one of {FCA_METHODS}")


def scores_csv_text(result: AccessibilityResult, dataset: Dataset,
                    per_thousand: bool = False) -> str:
    """Scores as CSV ``demand_id,score``, optionally inflated 1000x."""
    factor = 1000.0 if per_thousand else 1.0
    lines = ["demand_id,score"]
    for site, score in zip(dataset.demand, result.scores):
        lines.append(f"{site.id},{float(score * factor)!r}")
    return "\n".join(lines) + "\n"
