from dataclasses import dataclass, field
from typing import Dict, List, Optional
import logging
import os

import numpy as np
import pandas as pd
from scipy.optimize import brentq

from config import config
from jacobi.bordered import BorderedJacobi, gauss_rule
from jacobi.measures import DiscretizedMeasure, discretize_density
from laws.level_density import SupportInterval
from laws.quadrature import integrate
from recover.continued_fraction import continued_fraction_g, outer_denominator, tail_support
from serialization import write_csv, write_json

logger = logging.getLogger(__name__)


@dataclass
class SuspectedAtom:
    """Real pole of the continued fraction outside the tail support"""
    location: float
    mass: float
    note: str = ""


@dataclass
class RecoveredDensity:
    """Density on a midpoint grid over the tail support, plus any suspected atoms"""
    support: SupportInterval
    grid: np.ndarray
    values: np.ndarray
    suspected_atoms: List[SuspectedAtom] = field(default_factory=list)
    min_raw_value: float = 0.0
    continuous_mass: Optional[float] = None

    @property
    def step(self) -> float:
        return self.support.width / self.grid.size

    @property
    def grid_mass(self) -> float:
        """Midpoint-rule integral of the density"""
        return float(np.sum(self.values) * self.step)

    @property
    def atom_mass(self) -> float:
        return float(sum(atom.mass for atom in self.suspected_atoms))

    @property
    def total_mass(self) -> float:
        """Refined continuous mass when known, else the grid sum, plus the atoms"""
        mass = self.grid_mass if self.continuous_mass is None else self.continuous_mass
        return mass + self.atom_mass

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"x": self.grid, "density": self.values})

    def sidecar(self) -> Dict:
        return {
            "support": {"lo": self.support.lo, "hi": self.support.hi},
            "grid_size": int(self.grid.size),
            "grid_mass": self.grid_mass,
            "continuous_mass": self.continuous_mass,
            "total_mass": self.total_mass,
            "suspected_atoms": [
                {"location": atom.location, "mass": atom.mass, "note": atom.note}
                for atom in self.suspected_atoms
            ],
        }

    def write(self, path: str) -> List[str]:
        """Write the `x,density` CSV and a JSON sidecar next to it"""
        sidecar_path = os.path.splitext(path)[0] + ".json"
        return [write_csv(self.to_frame(), path), write_json(self.sidecar(), sidecar_path)]


def density_on(j: BorderedJacobi, x, pole_tol: Optional[float] = None):
    """Recovered density at arbitrary points; zero outside the open tail support"""
    x = np.asarray(x, dtype=float)
    interval = tail_support(j)
    inside = (x > interval.lo) & (x < interval.hi)
    xi = np.where(inside, x, interval.midpoint)
    values = -np.imag(np.asarray(continued_fraction_g(j, xi, pole_tol))) / np.pi
    values = np.where(inside, np.clip(values, 0.0, None), 0.0)
    return float(values) if values.ndim == 0 else values


def continuous_mass(j: BorderedJacobi, mass_tol: Optional[float] = None,
                    max_points: Optional[int] = None) -> float:
    """
    Integral of the recovered density over the tail support.

    The cosine rule is doubled until two successive values agree within
    ``mass_tol``, which resolves narrow resonances near the real axis.
    """
    tol = config.MASS_TOL if mass_tol is None else mass_tol
    limit = max_points or config.MASS_MAX_POINTS
    interval = tail_support(j)
    n = config.QUADRATURE_POINTS
    mass = integrate(lambda x: density_on(j, x), interval.lo, interval.hi, n)
    while n < limit:
        n *= 2
        refined = integrate(lambda x: density_on(j, x), interval.lo, interval.hi, n)
        if abs(refined - mass) <= tol:
            return refined
        mass = refined
    logger.warning(f"Continuous mass not settled within {tol:.1e} at {n} points, last value {mass:.9f}")
    return mass


def _verified_root(j: BorderedJacobi, lo: float, hi: float, atom_tol: float) -> Optional[float]:
    """Brent root of d_0 in [lo, hi], or None when the sign change comes from a pole"""
    root = brentq(lambda t: outer_denominator(j, t), lo, hi, xtol=1e-14, rtol=1e-14)
    residual = abs(outer_denominator(j, root))
    if residual > max(atom_tol, 1e-8 * (1.0 + abs(root))):
        return None
    return float(root)


def _sign_change_roots(j: BorderedJacobi, xs: np.ndarray, atom_tol: float) -> List[float]:
    with np.errstate(divide="ignore", invalid="ignore"):
        values = outer_denominator(j, xs)
    roots = []
    for i in range(xs.size - 1):
        left, right = values[i], values[i + 1]
        if not (np.isfinite(left) and np.isfinite(right)):
            continue
        if left == 0.0:
            roots.append(float(xs[i]))
        elif left * right < 0:
            root = _verified_root(j, xs[i], xs[i + 1], atom_tol)
            if root is not None:
                roots.append(root)
    return roots


def _residue_mass(j: BorderedJacobi, root: float) -> float:
    h = 1e-8 * (1.0 + abs(root))
    slope = (outer_denominator(j, root + h) - outer_denominator(j, root - h)) / (2 * h)
    return 1.0 / abs(slope) if slope != 0 else float("inf")


def _refine_node(j: BorderedJacobi, node: float, lo: float, hi: float, atom_tol: float) -> Optional[float]:
    """Zero of d_0 closest to a truncation eigenvalue, searched in widening windows inside [lo, hi]"""
    scale = 1.0 + abs(node)
    for relative in (1e-12, 1e-10, 1e-8, 1e-6, 1e-4, 1e-2):
        width = relative * scale
        left, right = max(lo, node - width), min(hi, node + width)
        if not right > left:
            continue
        roots = _sign_change_roots(j, np.linspace(left, right, 33), atom_tol)
        if roots:
            return min(roots, key=lambda root: abs(root - node))
    return None


def _truncation_atoms(j: BorderedJacobi, steps: int, atom_tol: float) -> List[SuspectedAtom]:
    """
    Atoms located from the Gauss nodes of a long truncation.

    Truncated eigenvalues never leave the convex hull of the spectrum, so a
    node outside the tail support always has a true atom beyond it; each one
    is refined to the nearby zero of d_0.
    """
    interval = tail_support(j)
    enclosure_lo, enclosure_hi = j.gershgorin_interval()
    margin = 1e-10 * (1.0 + max(abs(interval.lo), abs(interval.hi)))
    nodes, weights = gauss_rule(j.alphas(steps), j.betas(steps))

    atoms = []
    for node, weight in zip(nodes, weights):
        if interval.lo - margin <= node <= interval.hi + margin:
            continue
        if node > interval.hi:
            side, lo, hi = "right", interval.hi + margin, enclosure_hi
        else:
            side, lo, hi = "left", enclosure_lo, interval.lo - margin
        root = _refine_node(j, float(node), lo, hi, atom_tol)
        if root is None:
            atoms.append(SuspectedAtom(float(node), float(weight),
                                       f"truncation eigenvalue {side} of the tail support, Gauss weight"))
        else:
            atoms.append(SuspectedAtom(root, _residue_mass(j, root),
                                       f"real pole {side} of the tail support, residue estimate"))
    return atoms


def _scan_interval(j: BorderedJacobi, lo: float, hi: float, points: int,
                   atom_tol: float, side: str) -> List[SuspectedAtom]:
    if not hi > lo:
        return []
    return [SuspectedAtom(root, _residue_mass(j, root),
                          f"real pole {side} of the tail support, residue estimate")
            for root in _sign_change_roots(j, np.linspace(lo, hi, points), atom_tol)]


def find_atoms(j: BorderedJacobi, scan_points: Optional[int] = None,
               atom_tol: Optional[float] = None,
               truncation_steps: Optional[int] = None) -> List[SuspectedAtom]:
    """
    Real poles of g outside the tail support.

    Candidates come from two places: Gauss nodes of a long truncation that
    fall outside the tail support, and sign changes of d_0 = 1/g on a scan of
    the Gershgorin enclosure left and right of the support. The truncation
    catches atoms sitting next to a pole of d_0, where a coarse scan sees no
    sign change. Every root is checked to be a true zero of d_0; the mass is
    the residue 1/|d_0'|.
    """
    points = scan_points or config.ATOM_SCAN_POINTS
    tol = config.ATOM_TOL if atom_tol is None else atom_tol
    steps = truncation_steps or max(config.ATOM_TRUNCATION_STEPS, 2 * j.k + 2)
    interval = tail_support(j)
    enclosure_lo, enclosure_hi = j.gershgorin_interval()

    atoms = _truncation_atoms(j, steps, tol)
    gap = 1e-12 * (1.0 + interval.width)
    scanned = (_scan_interval(j, enclosure_lo, interval.lo - gap, points, tol, "left")
               + _scan_interval(j, interval.hi + gap, enclosure_hi, points, tol, "right"))
    for candidate in scanned:
        close = 1e-6 * (1.0 + abs(candidate.location))
        if all(abs(candidate.location - atom.location) > close for atom in atoms):
            atoms.append(candidate)

    atoms.sort(key=lambda atom: atom.location)
    for atom in atoms:
        logger.warning(f"Suspected atom at x={atom.location:.12g} with mass ~{atom.mass:.3e}")
    return atoms


def recover_density(j: BorderedJacobi, grid_size: Optional[int] = None,
                    atom_tol: Optional[float] = None, pole_tol: Optional[float] = None) -> RecoveredDensity:
    """
    Density -Im(g)/pi of a bordered Jacobi matrix on a midpoint grid over its tail support.

    Grid points sit half a step inside the endpoints, where g has branch
    points. Negative values are clamped to zero with a warning; poles off
    the support are reported as suspected atoms instead of failing.
    """
    size = grid_size or config.RECOVERY_GRID_POINTS
    if size < 16:
        raise ValueError(f"grid_size must be at least 16, got {size}")
    tol = config.ATOM_TOL if atom_tol is None else atom_tol

    interval = tail_support(j)
    step = interval.width / size
    grid = interval.lo + (np.arange(size) + 0.5) * step
    raw = -np.imag(np.asarray(continued_fraction_g(j, grid, pole_tol))) / np.pi

    min_raw = float(np.min(raw))
    negative = raw < 0
    if np.any(raw < -tol):
        logger.warning(f"Clamped {int(np.sum(negative))} negative density values, minimum {min_raw:.3e}")
    elif np.any(negative):
        logger.debug(f"Clamped {int(np.sum(negative))} round-off negative density values")
    values = np.where(negative, 0.0, raw)

    atoms = find_atoms(j, atom_tol=tol)
    recovered = RecoveredDensity(interval, grid, values, atoms, min_raw, continuous_mass(j))
    logger.info(f"Recovered density on [{interval.lo:.6g}, {interval.hi:.6g}] with {size} points, "
                f"total mass {recovered.total_mass:.6f}, {len(atoms)} suspected atom(s)")
    return recovered


def recover_measure(j: BorderedJacobi, n: Optional[int] = None) -> DiscretizedMeasure:
    """Recovered density discretized on the cosine grid of the tail support"""
    return discretize_density(lambda x: density_on(j, x), tail_support(j),
                              n or config.ROUND_TRIP_GRID_POINTS)
