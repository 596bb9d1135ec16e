"""Per-image feature vectors for the atlas embedding.

The built-in descriptor is deterministic and dependency-free: a 16x16
block-mean intensity grid (256 dims) concatenated with an 8-bin unsigned
gradient-orientation histogram pooled over a 4x4 cell grid (128 dims),
L2-normalized to 384 dims. Externally computed features (e.g. CNN
embeddings) can be swapped in through the CSV ingestion path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DESCRIPTOR_DIMS = 384
_GRID = 16
_CELLS = 4
_BINS = 8


@dataclass
class FeatureVector:
    values: np.ndarray
    source: str  # "descriptor" | "external"


def _block_means(img: np.ndarray, grid: int) -> np.ndarray:
    side = img.shape[0]
    bounds = (np.arange(grid + 1) * side) // grid
    sums = np.add.reduceat(np.add.reduceat(img, bounds[:-1], axis=0), bounds[:-1], axis=1)
    areas = np.diff(bounds)[:, None] * np.diff(bounds)[None, :]
    return sums / areas


def compute_descriptor(img: np.ndarray) -> FeatureVector:
    """384-dim intensity + edge-orientation descriptor of a square sketch."""
    img = np.asarray(img)
    if img.ndim != 2 or img.shape[0] != img.shape[1]:
        raise ValueError("descriptor requires square image")
    if img.shape[0] < 32:
        raise ValueError("descriptor requires at least 32x32 input")
    side = img.shape[0]
    pix = img.astype(np.float64)

    means = (_block_means(pix, _GRID) / 255.0).ravel()

    gy, gx = np.gradient(pix)
    mag = np.sqrt(gx * gx + gy * gy)
    orient = np.mod(np.arctan2(gy, gx), np.pi)
    bins = np.floor(orient / (np.pi / _BINS)).astype(np.intp) % _BINS
    rows, cols = np.indices(pix.shape)
    cell = (rows * _CELLS) // side * _CELLS + (cols * _CELLS) // side
    flat = cell.ravel() * _BINS + bins.ravel()
    hist = np.bincount(flat, weights=mag.ravel(), minlength=_CELLS * _CELLS * _BINS)

    vec = np.concatenate([means, hist])
    norm = np.linalg.norm(vec)
    if norm < 1e-9:
        return FeatureVector(np.zeros(DESCRIPTOR_DIMS), "descriptor")
    return FeatureVector(vec / norm, "descriptor")


def feature_matrix(features: list[FeatureVector]) -> np.ndarray:
    if not features:
        raise ValueError("empty feature list")
    dims = {len(f.values) for f in features}
    if len(dims) != 1:
        raise ValueError("inconsistent feature dimensionality")
    return np.stack([np.asarray(f.values, dtype=np.float64) for f in features])


def save_features(path, features: list[FeatureVector], names: list[str] | None = None) -> None:
    """Write one CSV row per image; optional first column carries the filename."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for i, feat in enumerate(features):
            cells = [format(v, ".9g") for v in feat.values]
            if names is not None:
                cells.insert(0, names[i])
            fh.write(",".join(cells) + "\n")


def load_features(path) -> tuple[list[FeatureVector], list[str] | None]:
    """Parse a feature CSV; returns (vectors, filenames or None).

    A non-numeric first cell on the first row marks a filename column. All
    rows must agree in width.
    """
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for ln in fh:
            ln = ln.strip()
            if ln:
                rows.append(ln.split(","))
    if not rows:
        raise ValueError("empty feature file")

    def numeric(cell: str) -> bool:
        try:
            float(cell)
            return True
        except ValueError:
            return False

    has_names = not numeric(rows[0][0])
    names = [] if has_names else None
    width = len(rows[0])
    vectors = []
    for r, row in enumerate(rows):
        if len(row) != width:
            raise ValueError(
                f"inconsistent feature dimensionality: row {r} has {len(row)} cells, expected {width}"
            )
        cells = row
        if has_names:
            names.append(cells[0])
            cells = cells[1:]
        vals = np.empty(len(cells))
        for c, cell in enumerate(cells):
            try:
                vals[c] = float(cell)
            except ValueError:
                col = c + (1 if has_names else 0)
                raise ValueError(f"non-numeric value at row {r}, column {col}: {cell!r}") from None
        vectors.append(FeatureVector(vals, "external"))
    return vectors, names
