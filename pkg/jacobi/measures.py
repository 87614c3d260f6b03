from dataclasses import dataclass
from typing import Callable, Optional, Sequence
import logging

import numpy as np
import pandas as pd
from scipy.linalg import LinAlgError, cholesky
from scipy.linalg import hankel as scipy_hankel

from config import config
from laws.level_density import LawSpec, SupportInterval, density, moment, support
from laws.quadrature import cosine_nodes
from serialization import read_csv_column, write_csv

logger = logging.getLogger(__name__)


class MeasureValidationError(ValueError):
    """Malformed discretized measure"""


class MomentRealizabilityError(ValueError):
    """Moment sequence that no probability measure has"""


@dataclass(frozen=True, eq=False)
class DiscretizedMeasure:
    """Finite measure sum_j w_j delta(x_j) standing in for a continuous one"""
    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        points = np.asarray(self.points, dtype=float).copy()
        weights = np.asarray(self.weights, dtype=float).copy()
        if points.ndim != 1 or points.shape != weights.shape:
            raise MeasureValidationError(
                f"points and weights must be 1-D of equal length, got {points.shape} and {weights.shape}"
            )
        if points.size < 2:
            raise MeasureValidationError(f"a measure needs at least 2 points, got {points.size}")
        if not (np.all(np.isfinite(points)) and np.all(np.isfinite(weights))):
            raise MeasureValidationError("points and weights must be finite")
        if np.any(np.diff(points) <= 0):
            raise MeasureValidationError("points must be strictly increasing")
        if np.any(weights < 0):
            raise MeasureValidationError("weights must be nonnegative")
        total = weights.sum()
        if abs(total - 1.0) > config.MEASURE_SUM_TOL:
            raise MeasureValidationError(f"weights must sum to 1, got {total!r}")
        points.flags.writeable = False
        weights.flags.writeable = False
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_unnormalized(cls, points: Sequence[float], weights: Sequence[float]) -> "DiscretizedMeasure":
        weights = np.asarray(weights, dtype=float)
        total = weights.sum()
        if not total > 0:
            raise MeasureValidationError(f"total weight must be positive, got {total}")
        return cls(np.asarray(points, dtype=float), weights / total)

    @property
    def size(self) -> int:
        return self.points.size

    def moment(self, n: int) -> float:
        return float(np.sum(self.weights * self.points**n))

    def mean(self) -> float:
        return self.moment(1)

    def shifted(self, c: float) -> "DiscretizedMeasure":
        return DiscretizedMeasure(self.points + c, self.weights)

    def scaled(self, c: float) -> "DiscretizedMeasure":
        if not c > 0:
            raise MeasureValidationError(f"scale must be positive, got {c}")
        return DiscretizedMeasure(self.points * c, self.weights)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"x": self.points, "w": self.weights})

    def to_csv(self, path: str) -> str:
        return write_csv(self.to_frame(), path)

    @classmethod
    def from_csv(cls, path: str) -> "DiscretizedMeasure":
        """Read a two-column `x,w` file; weights are renormalized to sum 1"""
        points = read_csv_column(path, "x")
        weights = read_csv_column(path, "w")
        order = np.argsort(points, kind="stable")
        logger.info(f"Loaded measure with {points.size} points from {path}")
        return cls.from_unnormalized(points[order], weights[order])


def _hankel_is_psd(moments: np.ndarray, pd_tol: float) -> bool:
    order = (moments.size - 1) // 2 + 1
    hankel = scipy_hankel(moments[:order], moments[order - 1:2 * order - 1])
    diagonal = np.diag(hankel)
    if np.any(diagonal < 0):
        return False
    scale = np.where(diagonal > 0, 1.0 / np.sqrt(np.where(diagonal > 0, diagonal, 1.0)), 1.0)
    normalized = hankel * scale[:, None] * scale[None, :]
    try:
        cholesky(normalized + pd_tol * np.eye(order), lower=False)
    except LinAlgError:
        return False
    return True


@dataclass(frozen=True, eq=False)
class MomentSequence:
    """Raw moments m_0..m_N of a probability measure"""
    moments: np.ndarray

    def __post_init__(self):
        moments = np.asarray(self.moments, dtype=float).copy()
        if moments.ndim != 1 or moments.size == 0:
            raise MomentRealizabilityError("moments must be a nonempty 1-D sequence")
        if not np.all(np.isfinite(moments)):
            raise MomentRealizabilityError("moments must be finite")
        if abs(moments[0] - 1.0) > config.MEASURE_SUM_TOL:
            raise MomentRealizabilityError(f"m0 must equal 1 for a probability measure, got {moments[0]!r}")
        if not _hankel_is_psd(moments, config.PD_TOL):
            raise MomentRealizabilityError("Hankel matrix of the moments is not positive semidefinite")
        moments.flags.writeable = False
        object.__setattr__(self, "moments", moments)

    @property
    def order(self) -> int:
        """Largest moment index N"""
        return self.moments.size - 1

    def __len__(self) -> int:
        return self.moments.size

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"moment": self.moments})

    def to_csv(self, path: str) -> str:
        return write_csv(self.to_frame(), path)

    @classmethod
    def from_csv(cls, path: str) -> "MomentSequence":
        """Read a one-column `moment` file, row i holding m_i"""
        moments = read_csv_column(path, "moment")
        logger.info(f"Loaded {moments.size} moments from {path}")
        return cls(moments)

    @classmethod
    def from_law(cls, law: LawSpec, count: int) -> "MomentSequence":
        return cls(np.array([moment(law, n) for n in range(count)]))


def discretize_density(f: Callable[[np.ndarray], np.ndarray], interval: SupportInterval,
                       n: Optional[int] = None) -> DiscretizedMeasure:
    """
    Cosine-grid discretization of a density on an interval.

    Points cluster at the endpoints; weights are density times arc length,
    renormalized to total mass 1.
    """
    points, arc = cosine_nodes(interval.lo, interval.hi, n or config.LAW_GRID_POINTS)
    weights = np.clip(np.asarray(f(points), dtype=float), 0.0, None) * arc
    measure = DiscretizedMeasure.from_unnormalized(points, weights)
    logger.debug(f"Discretized density on [{interval.lo}, {interval.hi}] with {measure.size} points, "
                 f"raw mass {np.sum(weights):.12f}")
    return measure


def discretize_law(law: LawSpec, n: Optional[int] = None) -> DiscretizedMeasure:
    """Cosine-grid discretization of one of the level density laws"""
    measure = discretize_density(lambda x: density(law, x), support(law), n)
    logger.info(f"Discretized {law.label} on {measure.size} points")
    return measure
