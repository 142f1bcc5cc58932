"""Domain types and file ingestion for demand, supply, and region data.

Coordinates are either geographic (lon, lat in decimal degrees) or planar
(x, y in meters). The coordinate kind is declared per dataset; input file
headers must agree with the declared kind and mixing kinds is rejected.
Loading is eager and fail-fast: the first defective row raises an error
naming that row.
"""

import csv
import json
import math
from dataclasses import dataclass

from .errors import (
    AccessKitError,
    DuplicateId,
    MalformedRow,
    MissingColumn,
    NegativePopulation,
    NegativeResource,
    NonFiniteCoordinate,
    NonPositiveArea,
    NonPositiveCapacity,
    OutOfRangeCoordinate,
)

COORD_KINDS = ("geographic", "planar")


def _check_coords(x: float, y: float, coord_kind: str, where: str = "") -> None:
    prefix = f"{where}: " if where else ""
    if not (math.isfinite(x) and math.isfinite(y)):
        raise NonFiniteCoordinate(f"{prefix}coordinate ({x}, {y}) is not finite")
    if coord_kind == "geographic":
        if not -180.0 <= x <= 180.0:
            raise OutOfRangeCoordinate(f"{prefix}lon {x} outside [-180, 180]")
        if not -90.0 <= y <= 90.0:
            raise OutOfRangeCoordinate(f"{prefix}lat {y} outside [-90, 90]")


@dataclass(frozen=True, slots=True)
class DemandSite:
    """A population location. ``x``/``y`` hold (lon, lat) when geographic."""

    id: str
    x: float
    y: float
    population: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise NonFiniteCoordinate(f"demand {self.id!r}: coordinates not finite")
        if not math.isfinite(self.population) or self.population < 0:
            raise NegativePopulation(
                f"demand {self.id!r}: population {self.population} must be >= 0"
            )


@dataclass(frozen=True, slots=True)
class SupplySite:
    """A facility location with a positive capacity.

    ``candidate=True`` relaxes the capacity > 0 invariant to >= 0; it marks
    prospective zero-capacity sites used only in reallocation runs.
    """

    id: str
    x: float
    y: float
    capacity: float
    candidate: bool = False

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise NonFiniteCoordinate(f"supply {self.id!r}: coordinates not finite")
        floor_ok = self.capacity >= 0 if self.candidate else self.capacity > 0
        if not math.isfinite(self.capacity) or not floor_ok:
            raise NonPositiveCapacity(
                f"supply {self.id!r}: capacity {self.capacity} must be "
                f"{'>= 0' if self.candidate else '> 0'}"
            )


@dataclass(frozen=True, slots=True)
class Region:
    """An areal unit carrying a resource count, for agglomeration analysis."""

    id: str
    area_km2: float
    resource: float
    population: float | None = None

    def __post_init__(self):
        if not math.isfinite(self.area_km2) or self.area_km2 <= 0:
            raise NonPositiveArea(f"region {self.id!r}: area {self.area_km2} must be > 0")
        if not math.isfinite(self.resource) or self.resource < 0:
            raise NegativeResource(
                f"region {self.id!r}: resource {self.resource} must be >= 0"
            )
        if self.population is not None and (
            not math.isfinite(self.population) or self.population < 0
        ):
            raise NegativePopulation(
                f"region {self.id!r}: population {self.population} must be >= 0"
            )


@dataclass(frozen=True)
class Dataset:
    """Immutable bundle of demand and supply sites plus optional regions."""

    demand: tuple[DemandSite, ...]
    supply: tuple[SupplySite, ...]
    regions: tuple[Region, ...] | None = None
    coord_kind: str = "geographic"

    def __post_init__(self):
        object.__setattr__(self, "demand", tuple(self.demand))
        object.__setattr__(self, "supply", tuple(self.supply))
        if self.regions is not None:
            object.__setattr__(self, "regions", tuple(self.regions))
        if self.coord_kind not in COORD_KINDS:
            raise ValueError(f"coord_kind must be one of {COORD_KINDS}")
        if not self.demand or not self.supply:
            raise ValueError("dataset needs at least one demand and one supply site")
        _check_unique_ids(self.demand, "demand")
        _check_unique_ids(self.supply, "supply")
        if self.regions is not None:
            _check_unique_ids(self.regions, "region")
        for site in self.demand:
            _check_coords(site.x, site.y, self.coord_kind, f"demand {site.id!r}")
        for site in self.supply:
            _check_coords(site.x, site.y, self.coord_kind, f"supply {site.id!r}")


def _check_unique_ids(records, label: str) -> None:
    seen = set()
    for rec in records:
        if rec.id in seen:
            raise DuplicateId(f"duplicate {label} id {rec.id!r}")
        seen.add(rec.id)


# --- parsing helpers ------------------------------------------------------

def _coord_columns(coord_kind: str) -> tuple[str, str]:
    return ("lon", "lat") if coord_kind == "geographic" else ("x", "y")


def _parse_float(raw: str, row_num: int, column: str) -> float:
    try:
        return float(raw)
    except (TypeError, ValueError):
        raise MalformedRow(f"row {row_num}: cannot parse {column}={raw!r}") from None


def _read_csv_rows(path, required: tuple[str, ...]):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for col in required:
            if col not in header:
                raise MissingColumn(f"{path}: header lacks column {col!r}")
        yield from ((i, row) for i, row in enumerate(reader, start=2))


def _read_geojson_points(path):
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    features = doc.get("features", [])
    for i, feat in enumerate(features, start=1):
        geom = feat.get("geometry") or {}
        if geom.get("type") != "Point":
            raise MalformedRow(f"feature {i}: geometry must be a Point")
        coords = geom.get("coordinates")
        if not isinstance(coords, (list, tuple)) or len(coords) < 2:
            raise MalformedRow(f"feature {i}: bad Point coordinates")
        yield i, coords[0], coords[1], feat.get("properties") or {}


def _require_prop(props: dict, key: str, feat_num: int):
    if key not in props or props[key] is None:
        raise MissingColumn(f"feature {feat_num}: properties lack {key!r}")
    return props[key]


# --- loaders --------------------------------------------------------------

def load_demand(path, fmt: str = "csv", coord_kind: str = "geographic") -> list[DemandSite]:
    """Load demand sites from CSV (``id,lon,lat,population``) or GeoJSON points."""
    sites: list[DemandSite] = []
    seen: set[str] = set()
    if fmt == "csv":
        cx, cy = _coord_columns(coord_kind)
        for row_num, row in _read_csv_rows(path, ("id", cx, cy, "population")):
            site_id = row["id"]
            x = _parse_float(row[cx], row_num, cx)
            y = _parse_float(row[cy], row_num, cy)
            pop = _parse_float(row["population"], row_num, "population")
            _append_site(sites, seen, row_num, DemandSite, site_id, x, y, pop, coord_kind)
    elif fmt == "geojson":
        for feat_num, x, y, props in _read_geojson_points(path):
            site_id = str(_require_prop(props, "id", feat_num))
            pop = float(_require_prop(props, "population", feat_num))
            _append_site(sites, seen, feat_num, DemandSite, site_id, x, y, pop, coord_kind)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    return sites


def load_supply(path, fmt: str = "csv", coord_kind: str = "geographic") -> list[SupplySite]:
    """Load supply sites from CSV (``id,lon,lat,capacity``) or GeoJSON points."""
    sites: list[SupplySite] = []
    seen: set[str] = set()
    if fmt == "csv":
        cx, cy = _coord_columns(coord_kind)
        for row_num, row in _read_csv_rows(path, ("id", cx, cy, "capacity")):
            site_id = row["id"]
            x = _parse_float(row[cx], row_num, cx)
            y = _parse_float(row[cy], row_num, cy)
            cap = _parse_float(row["capacity"], row_num, "capacity")
            _append_site(sites, seen, row_num, SupplySite, site_id, x, y, cap, coord_kind)
    elif fmt == "geojson":
        for feat_num, x, y, props in _read_geojson_points(path):
            site_id = str(_require_prop(props, "id", feat_num))
            cap = float(_require_prop(props, "capacity", feat_num))
            _append_site(sites, seen, feat_num, SupplySite, site_id, x, y, cap, coord_kind)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    return sites


def _append_site(sites, seen, row_num, cls, site_id, x, y, value, coord_kind):
    if site_id in seen:
        raise DuplicateId(f"row {row_num}: duplicate id {site_id!r}")
    seen.add(site_id)
    try:
        site = cls(site_id, x, y, value)
    except AccessKitError as err:
        raise type(err)(f"row {row_num}: {err}") from None
    _check_coords(x, y, coord_kind, f"row {row_num}")
    sites.append(site)


def load_regions(path, fmt: str = "csv") -> list[Region]:
    """Load regions from CSV with schema ``id,area_km2,resource[,population]``."""
    regions: list[Region] = []
    seen: set[str] = set()
    if fmt == "csv":
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            header = reader.fieldnames or []
            for col in ("id", "area_km2", "resource"):
                if col not in header:
                    raise MissingColumn(f"{path}: header lacks column {col!r}")
            has_pop = "population" in header
            for row_num, row in enumerate(reader, start=2):
                rid = row["id"]
                area = _parse_float(row["area_km2"], row_num, "area_km2")
                res = _parse_float(row["resource"], row_num, "resource")
                pop = None
                if has_pop and row["population"] not in (None, ""):
                    pop = _parse_float(row["population"], row_num, "population")
                _append_region(regions, seen, row_num, rid, area, res, pop)
    elif fmt == "geojson":
        for feat_num, _x, _y, props in _read_geojson_points(path):
            rid = str(_require_prop(props, "id", feat_num))
            area = float(_require_prop(props, "area_km2", feat_num))
            res = float(_require_prop(props, "resource", feat_num))
            pop = props.get("population")
            pop = float(pop) if pop is not None else None
            _append_region(regions, seen, feat_num, rid, area, res, pop)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    return regions


def _append_region(regions, seen, row_num, rid, area, res, pop):
    if rid in seen:
        raise DuplicateId(f"row {row_num}: duplicate id {rid!r}")
    seen.add(rid)
    try:
        region = Region(rid, area, res, pop)
    except AccessKitError as err:
        raise type(err)(f"row {row_num}: {err}") from None
    regions.append(region)


def load_dataset(
    demand_path,
    supply_path,
    regions_path=None,
    fmt: str = "csv",
    coord_kind: str = "geographic",
) -> Dataset:
    """Load and validate a full dataset in one call."""
    demand = load_demand(demand_path, fmt=fmt, coord_kind=coord_kind)
    supply = load_supply(supply_path, fmt=fmt, coord_kind=coord_kind)
    regions = load_regions(regions_path) if regions_path is not None else None
    return Dataset(
        demand=tuple(demand),
        supply=tuple(supply),
        regions=tuple(regions) if regions is not None else None,
        coord_kind=coord_kind,
    )


# --- serialization --------------------------------------------------------

def demand_csv_text(sites, coord_kind: str = "geographic") -> str:
    cx, cy = _coord_columns(coord_kind)
    lines = [f"id,{cx},{cy},population"]
    for s in sites:
        lines.append(f"{s.id},{s.x!r},{s.y!r},{s.population!r}")
    return "\n".join(lines) + "\n"


def supply_csv_text(sites, coord_kind: str = "geographic") -> str:
    cx, cy = _coord_columns(coord_kind)
    lines = [f"id,{cx},{cy},capacity"]
    for s in sites:
        lines.append(f"{s.id},{s.x!r},{s.y!r},{s.capacity!r}")
    return "\n".join(lines) + "\n"


def regions_csv_text(regions) -> str:
    with_pop = any(r.population is not None for r in regions)
    lines = ["id,area_km2,resource" + (",population" if with_pop else "")]
    for r in regions:
        row = f"{r.id},{r.area_km2!r},{r.resource!r}"
        if with_pop:
            row += f",{r.population!r}" if r.population is not None else ","
        lines.append(row)
    return "\n".join(lines) + "\n"


def write_dataset(dataset: Dataset, demand_path, supply_path, regions_path=None) -> None:
    """Serialize a dataset back to CSV; floats use shortest round-trip text."""
    with open(demand_path, "w", encoding="utf-8") as fh:
        fh.write(demand_csv_text(dataset.demand, dataset.coord_kind))
    with open(supply_path, "w", encoding="utf-8") as fh:
        fh.write(supply_csv_text(dataset.supply, dataset.coord_kind))
    if regions_path is not None and dataset.regions is not None:
        with open(regions_path, "w", encoding="utf-8") as fh:
            fh.write(regions_csv_text(dataset.regions))

