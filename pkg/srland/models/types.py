"""Domain data types shared by the analyzers."""
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
import scipy.sparse

from srland.exceptions import DataError, ShapeError


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ImageCube:
    """An n1 x n2 x D image held as its flattened point cloud (row-major)."""
    height: int
    width: int
    points: np.ndarray  # (n, bands) float64

    def __post_init__(self):
        pts = np.ascontiguousarray(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[0] != self.height * self.width:
            raise ShapeError(
                f"points of shape {pts.shape} do not match a {self.height}x{self.width} grid")
        bad = np.flatnonzero(~np.isfinite(pts).all(axis=1))
        if bad.size:
            raise DataError(f"non-finite value at point {int(bad[0])}")
        object.__setattr__(self, 'points', _frozen(pts))

    @classmethod
    def from_array(cls, values: np.ndarray) -> "ImageCube":
        values = np.asarray(values)
        if values.ndim != 3:
            raise ShapeError(f"image cube must have rank 3 (n1, n2, D), got rank {values.ndim}")
        n1, n2, bands = values.shape
        return cls(n1, n2, values.reshape(n1 * n2, bands))

    @property
    def n(self) -> int:
        return self.height * self.width

    @property
    def bands(self) -> int:
        return self.points.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.height, self.width

    def as_array(self) -> np.ndarray:
        return self.points.reshape(self.height, self.width, self.bands)


@dataclass(frozen=True)
class GroundTruth:
    """Per-pixel class ids; 0 marks pixels without ground truth."""
    height: int
    width: int
    labels: np.ndarray  # (n,) int64

    def __post_init__(self):
        labels = np.asarray(self.labels).reshape(-1)
        if labels.size != self.height * self.width:
            raise ShapeError(f"{labels.size} labels do not fill a {self.height}x{self.width} grid")
        if np.issubdtype(labels.dtype, np.floating) and not np.all(labels == np.round(labels)):
            raise DataError("ground truth labels must be integers")
        labels = labels.astype(np.int64)
        if (labels < 0).any():
            raise DataError(f"negative label at point {int(np.flatnonzero(labels < 0)[0])}")
        if not (labels > 0).any():
            raise DataError("ground truth has no labeled pixel")
        object.__setattr__(self, 'labels', _frozen(labels))

    @classmethod
    def from_array(cls, labels: np.ndarray) -> "GroundTruth":
        labels = np.asarray(labels)
        if labels.ndim != 2:
            raise ShapeError(f"ground truth must have rank 2 (n1, n2), got rank {labels.ndim}")
        return cls(labels.shape[0], labels.shape[1], labels)

    @property
    def classes(self) -> np.ndarray:
        return np.unique(self.labels[self.labels > 0])

    def check_matches(self, cube: ImageCube) -> None:
        if (self.height, self.width) != cube.shape:
            raise ShapeError(
                f"ground truth {self.height}x{self.width} does not match cube {cube.height}x{cube.width}")


@dataclass(frozen=True)
class SparseAffinity:
    """Symmetric CSR weight matrix plus the parameters that built it."""
    weights: scipy.sparse.csr_matrix
    sigma: float
    mode: str  # 'spatial' or 'knn'
    radius: Optional[float] = None
    k_graph: Optional[int] = None

    @property
    def n(self) -> int:
        return self.weights.shape[0]


@dataclass(frozen=True)
class MarkovChain:
    weights: scipy.sparse.csr_matrix
    transitions: scipy.sparse.csr_matrix
    degrees: np.ndarray
    stationary: np.ndarray

    @property
    def n(self) -> int:
        return self.transitions.shape[0]


@dataclass(frozen=True)
class DiffusionModel:
    """Top-m eigenpairs of P; psi columns are unit norm in l2(pi)."""
    eigenvalues: np.ndarray  # (m,)
    eigenvectors: np.ndarray  # (n, m) right eigenvectors psi_k

    @property
    def m(self) -> int:
        return self.eigenvalues.shape[0]


@dataclass(frozen=True)
class DensityProfile:
    p: np.ndarray
    bandwidth: float
    k: int


@dataclass(frozen=True)
class ModeSet:
    indices: np.ndarray  # ranked modes, best first
    p: np.ndarray
    rho: np.ndarray
    scores: np.ndarray  # p * rho
    fallback_count: int = 0

    def __len__(self) -> int:
        return int(self.indices.shape[0])


@dataclass
class LabeledSet:
    indices: List[int] = field(default_factory=list)
    labels: List[int] = field(default_factory=list)
    budget: int = 0
    coverage_warning: Optional[str] = None

    def add(self, index: int, label: int) -> None:
        self.indices.append(int(index))
        self.labels.append(int(label))

    @property
    def used(self) -> int:
        return len(self.indices)

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(zip(self.indices, self.labels))


@dataclass(frozen=True)
class LabelMap:
    labels: np.ndarray
    provenance: np.ndarray  # object array of tags
    deferred: int
    height: int
    width: int

    def counts(self) -> dict:
        tags, counts = np.unique(self.provenance.astype(str), return_counts=True)
        return {str(t): int(c) for t, c in zip(tags, counts)}

    def as_grid(self) -> np.ndarray:
        return self.labels.reshape(self.height, self.width)
