"""Resource-agglomeration equity evaluation and inequality indices.

A region's agglomeration degree compares its resource density to the
whole study area's:

    agglomeration_i = (HR_i / A_i) / (HR_n / A_n)

where HR_n and A_n are totals over all regions. A value of 1 means the
region holds resources exactly in proportion to its land area; above 1 is
relatively resource-rich, below 1 under-served. The same ratio computed on
population (the population agglomeration degree) serves as a demographic
comparator: agglomeration/pad >= 1 reads as resources keeping pace with
where people actually concentrate.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    AllZeroValues,
    MissingPopulation,
    ZeroTotalPopulation,
    ZeroTotalResource,
)

CLASSIFICATIONS = ("equal", "relatively_fair", "unfair", "undefined")


@dataclass(frozen=True, slots=True)
class RegionEquity:
    region_id: str
    hrad: float
    classification: str
    pad: float | None = None
    hrad_over_pad: float | None = None


@dataclass(frozen=True)
class HradResult:
    records: tuple[RegionEquity, ...]
    epsilon: float

    def by_class(self) -> dict:
        counts = {c: 0 for c in CLASSIFICATIONS}
        for rec in self.records:
            counts[rec.classification] += 1
        return counts


def classify(value: float, epsilon: float = 0.05) -> str:
    """Equity class for one agglomeration value.

    Exact parity never occurs on real-valued data, so a tolerance band
    around 1 stands in for "equal": within epsilon is equal, above it
    relatively fair (resource-rich), below it unfair.
    """
    if abs(value - 1.0) <= epsilon:
        return "equal"
    return "relatively_fair" if value > 1.0 else "unfair"


def hrad(regions, epsilon: float = 0.05) -> HradResult:
    """Resource agglomeration degree for each region.

    A region with zero resource gets degree 0 (maximally unfair). Raises
    ZeroTotalResource when no region holds any resource.
    """
    regions = list(regions)
    if not regions:
        raise ValueError("need at least one region")
    resource = np.array([r.resource for r in regions], dtype=float)
    area = np.array([r.area_km2 for r in regions], dtype=float)
    total_resource = resource.sum()
    if total_resource <= 0:
        raise ZeroTotalResource("all regions have zero resource")
    overall_density = total_resource / area.sum()
    degrees = resource / area / overall_density
    records = tuple(
        RegionEquity(region_id=r.id, hrad=float(h), classification=classify(float(h), epsilon))
        for r, h in zip(regions, degrees)
    )
    return HradResult(records=records, epsilon=epsilon)


def hrad_vs_population(regions, epsilon: float = 0.05) -> HradResult:
    """Agglomeration degrees with the population comparator attached.

    pad_i = (Pop_i/Pop_n)/(A_i/A_n); the ratio hrad_i/pad_i is None for an
    uninhabited region (pad 0), where the comparison is undefined.
    """
    regions = list(regions)
    base = hrad(regions, epsilon)
    missing = [r.id for r in regions if r.population is None]
    if missing:
        raise MissingPopulation(f"regions lack population: {missing}")
    population = np.array([r.population for r in regions], dtype=float)
    area = np.array([r.area_km2 for r in regions], dtype=float)
    total_pop = population.sum()
    if total_pop <= 0:
        raise ZeroTotalPopulation("total population is zero")
    pad = population / area / (total_pop / area.sum())
    records = tuple(
        RegionEquity(
            region_id=rec.region_id,
            hrad=rec.hrad,
            classification=rec.classification,
            pad=float(p),
            hrad_over_pad=float(rec.hrad / p) if p > 0 else None,
        )
        for rec, p in zip(base.records, pad)
    )
    return HradResult(records=records, epsilon=epsilon)


def gini(values, weights=None) -> float:
    """Weighted Gini coefficient of a nonnegative value distribution.

    Sorts by value and integrates the Lorenz curve with the trapezoid rule;
    ``weights`` default to equal. 0 is perfect equality; the supremum 1 is
    never attained on finite data.
    """
    v = np.asarray(values, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise ValueError("values must be a nonempty vector")
    if (v < 0).any():
        raise ValueError("values must be nonnegative")
    if weights is None:
        w = np.ones_like(v)
    else:
        w = np.asarray(weights, dtype=float)
        if w.shape != v.shape:
            raise ValueError("weights must match values in length")
        if (w <= 0).any() or w.sum() <= 0:
            raise ValueError("weights must be positive")
    if float(w @ v) <= 0:
        raise AllZeroValues("every weighted value is zero")
    order = np.argsort(v, kind="stable")
    v, w = v[order], w[order]
    cum_pop = np.concatenate([[0.0], np.cumsum(w)]) / w.sum()
    cum_val = np.concatenate([[0.0], np.cumsum(w * v)]) / float(w @ v)
    # area under the Lorenz curve, trapezoid rule
    under = float(np.sum(np.diff(cum_pop) * (cum_val[1:] + cum_val[:-1])) / 2.0)
    return 1.0 - 2.0 * under


def hrad_csv_text(result: HradResult) -> str:
    """Equity table as CSV; pad columns appear when the comparator was run."""
    with_pad = any(rec.pad is not None for rec in result.records)
    header = "region_id,hrad,classification"
    if with_pad:
        header += ",pad,hrad_over_pad"
    lines = [header]
    for rec in result.records:
        row = f"{rec.region_id},{rec.hrad!r},{rec.classification}"
        if with_pad:
            ratio = "" if rec.hrad_over_pad is None else repr(rec.hrad_over_pad)
            row += f",{rec.pad!r},{ratio}"
        lines.append(row)
    return "\n".join(lines) + "\n"
