"""Data ingestion, the percent-returns transform, column standardization,
and seeded synthetic generators with planted linear structure."""

import csv
import importlib.resources
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DegenerateInputError, DomainError, ParseError


@dataclass(frozen=True)
class PriceTable:
    """Strictly positive prices; rows are trading periods in order."""

    column_names: tuple
    prices: np.ndarray

    def __post_init__(self):
        p = self.prices
        if p.ndim != 2:
            raise DomainError(f"prices must be 2-D, got ndim={p.ndim}")
        if p.shape[0] < 2:
            raise DegenerateInputError(
                f"need at least 2 price rows to form returns, got {p.shape[0]}"
            )
        if len(self.column_names) != p.shape[1]:
            raise DomainError(
                f"{len(self.column_names)} names for {p.shape[1]} columns"
            )
        if not np.all(np.isfinite(p)):
            raise DomainError("prices must be finite")
        if not np.all(p > 0):
            raise DomainError("prices must be strictly positive")


def returns_transform(table: PriceTable) -> np.ndarray:
    """Percent change between consecutive rows: 100*(c[i+1] - c[i])/c[i]."""
    p = table.prices
    return 100.0 * (p[1:] - p[:-1]) / p[:-1]


@dataclass(frozen=True)
class SyntheticSpec:
    """Recipe for a planted-rank matrix.

    The first ``true_k`` columns are sources; the rest are random mixtures
    of the sources plus Gaussian noise. ``noise_sigma`` is the noise
    standard deviation.
    """

    n: int
    m: int
    true_k: int
    noise_sigma: float = 0.1
    mix_low: float = -1.0
    mix_high: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"n must be >= 1, got {self.n}")
        if not 1 <= self.true_k <= self.m:
            raise DomainError(f"true_k={self.true_k} outside [1, m={self.m}]")
        if self.noise_sigma < 0:
            raise DomainError(f"noise_sigma must be >= 0, got {self.noise_sigma}")
        if self.mix_low > self.mix_high:
            raise DomainError(
                f"mix range is empty: [{self.mix_low}, {self.mix_high}]"
            )


def generate_lin(spec: SyntheticSpec, base: Optional[np.ndarray] = None) -> np.ndarray:
    """Generate the planted-rank matrix described by *spec*.

    With ``base`` given, it supplies the source columns (n x true_k);
    otherwise sources are i.i.d. standard normal from the seeded generator.
    The same spec always produces the bit-identical matrix.
    """
    rng = np.random.default_rng(spec.seed)
    if base is not None:
        base = np.asarray(base, dtype=np.float64)
        if base.shape != (spec.n, spec.true_k):
            raise DomainError(
                f"base must be {spec.n} x {spec.true_k}, got {base.shape}"
            )
        sources = base
    else:
        sources = rng.standard_normal((spec.n, spec.true_k))
    cols = [sources]
    for _ in range(spec.m - spec.true_k):
        coeffs = rng.uniform(spec.mix_low, spec.mix_high, size=spec.true_k)
        noise = rng.normal(0.0, spec.noise_sigma, size=spec.n)
        cols.append((sources @ coeffs + noise)[:, None])
    return np.hstack(cols)


def generator_metadata(spec: SyntheticSpec, base_supplied: bool = False) -> dict:
    """Reproducibility metadata embedded in reports and sidecar files."""
    return {
        "generator": "numpy.random.Generator(PCG64)",
        "numpy_version": np.__version__,
        "kind": "lin",
        "n": spec.n,
        "m": spec.m,
        "true_k": spec.true_k,
        "noise_sigma": spec.noise_sigma,
        "noise_note": (
            "noise_sigma is the standard deviation of the additive Gaussian noise"
        ),
        "mix_low": spec.mix_low,
        "mix_high": spec.mix_high,
        "seed": spec.seed,
        "source_columns": "user-supplied" if base_supplied else "seeded standard normal",
    }


def center_columns(x) -> np.ndarray:
    """Subtract each column's mean. Opt-in: the scoring model has no mean
    term, so nothing in the selection pipeline centers by default."""
    a = np.asarray(x, dtype=np.float64)
    if a.ndim != 2:
        raise DomainError(f"expected a 2-D matrix, got ndim={a.ndim}")
    return a - a.mean(axis=0)


def standardize_columns(x) -> np.ndarray:
    """Center each column and scale to unit sample standard deviation
    (n-1 normalization). Raises on constant columns, naming the first."""
    a = np.asarray(x, dtype=np.float64)
    if a.ndim != 2:
        raise DomainError(f"expected a 2-D matrix, got ndim={a.ndim}")
    if a.shape[0] < 2:
        raise DomainError("standardization needs at least 2 rows")
    std = a.std(axis=0, ddof=1)
    flat = np.flatnonzero(std == 0.0)
    if flat.size:
        raise DegenerateInputError(
            f"column {flat[0] + 1} is constant and cannot be standardized"
        )
    return (a - a.mean(axis=0)) / std


def _parse_cells(path, has_header):
    """Shared CSV scanner: returns (names, rows of floats), with 1-based
    file coordinates on any parse failure."""
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            raw = list(csv.reader(fh))
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    raw = [r for r in raw if r]  # drop blank lines
    if not raw:
        raise ParseError(f"{path} is empty")
    start = 0
    if has_header:
        names = tuple(cell.strip() for cell in raw[0])
        start = 1
    else:
        names = tuple(f"col_{j + 1}" for j in range(len(raw[0])))
    width = len(names)
    rows = []
    for i in range(start, len(raw)):
        record = raw[i]
        if len(record) != width:
            raise ParseError(
                f"ragged row: expected {width} cells, got {len(record)}", row=i + 1
            )
        parsed = []
        for j, cell in enumerate(record):
            try:
                value = float(cell)
            except ValueError:
                raise ParseError(f"non-numeric cell {cell!r}", row=i + 1, col=j + 1) from None
            if not np.isfinite(value):
                raise ParseError(f"non-finite cell {cell!r}", row=i + 1, col=j + 1)
            parsed.append(value)
        rows.append((i + 1, parsed))
    return names, rows


def load_csv(path, has_header: bool = True) -> PriceTable:
    """Load a comma-separated price table: finite, strictly positive reals."""
    names, rows = _parse_cells(path, has_header)
    if len(rows) < 2:
        raise DegenerateInputError(
            f"{path} has {len(rows)} data rows; need at least 2 to form returns"
        )
    for file_row, parsed in rows:
        for j, value in enumerate(parsed):
            if value <= 0:
                raise ParseError(
                    f"nonpositive price {value}", row=file_row, col=j + 1
                )
    prices = np.array([parsed for _, parsed in rows], dtype=np.float64)
    return PriceTable(column_names=names, prices=prices)


def load_matrix_csv(path, has_header: bool = True):
    """Load a comma-separated numeric matrix (any finite reals).

    Returns (column_names, matrix).
    """
    names, rows = _parse_cells(path, has_header)
    if not rows:
        raise DegenerateInputError(f"{path} has no data rows")
    return names, np.array([parsed for _, parsed in rows], dtype=np.float64)


def bundled_fixture_path():
    """Path of the shipped 30-column synthetic price fixture."""
    return importlib.resources.files("mdlrank") / "fixtures" / "prices30.csv"
