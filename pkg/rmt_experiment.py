"""
Numerical experiments for the bordered-Jacobi recovery pipeline.

Experiment 2 draws random bordered Jacobi matrices, recovers their densities
and runs them back through Lanczos. Experiment 3 smooths a shifted Wishart
spectrum and recovers it from a short boundary. Experiment 4 rebuilds the
standard normal from finitely many moments.
"""
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Tuple, Union
import logging
import math
import os

import numpy as np
import pandas as pd
from scipy.integrate import trapezoid
from scipy.linalg import eigh
from scipy.stats import gaussian_kde, norm

from config import config
from jacobi.bordered import BorderedJacobi, to_bordered, toeplitz_distance
from jacobi.lanczos import LanczosBreakdown, lanczos_discrete, moments_to_jacobi
from jacobi.measures import DiscretizedMeasure, MomentRealizabilityError, MomentSequence
from recover.continued_fraction import ContinuedFractionPole
from recover.density_recovery import density_on, recover_density, recover_measure
from serialization import write_csv, write_json

logger = logging.getLogger(__name__)

Bandwidth = Union[float, str]

_RECOVERABLE_ERRORS = (LanczosBreakdown, MomentRealizabilityError, ContinuedFractionPole, ValueError)


@dataclass
class ExperimentConfig:
    """Parameters shared by the three experiments"""
    seed: int = config.DEFAULT_SEED
    m: int = 400
    n: int = 1200
    mu_shift: float = 5.0
    bandwidth: Bandwidth = "auto"
    lanczos_steps: int = config.DEFAULT_LANCZOS_STEPS
    grid_size: int = config.KDE_GRID_POINTS
    moment_count: int = config.DEFAULT_MOMENT_COUNT
    diagnostic_steps: int = config.DEFAULT_DIAGNOSTIC_STEPS

    def validate(self) -> bool:
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if not self.n >= self.m >= 2:
            raise ValueError(f"need n >= m >= 2, got m={self.m}, n={self.n}")
        if self.lanczos_steps < 1:
            raise ValueError(f"lanczos_steps must be positive, got {self.lanczos_steps}")
        if self.diagnostic_steps < 2:
            raise ValueError(f"diagnostic_steps must be at least 2, got {self.diagnostic_steps}")
        if self.grid_size < 16:
            raise ValueError(f"grid_size must be at least 16, got {self.grid_size}")
        if self.moment_count < 2:
            raise ValueError(f"moment_count must be at least 2, got {self.moment_count}")
        if self.bandwidth != "auto" and not (isinstance(self.bandwidth, (int, float)) and self.bandwidth > 0):
            raise ValueError(f"bandwidth must be positive or 'auto', got {self.bandwidth!r}")
        return True

    def to_dict(self) -> Dict:
        return {
            "seed": self.seed,
            "m": self.m,
            "n": self.n,
            "mu_shift": self.mu_shift,
            "bandwidth": self.bandwidth,
            "lanczos_steps": self.lanczos_steps,
            "grid_size": self.grid_size,
            "moment_count": self.moment_count,
            "diagnostic_steps": self.diagnostic_steps,
        }


@dataclass
class ExperimentReport:
    """Outcome of one experiment run: echo of the inputs, error metrics and curves"""
    figure: int
    seed: int
    parameters: Dict
    metrics: Dict[str, float] = field(default_factory=dict)
    jacobi: Dict = field(default_factory=dict)
    suspected_atoms: List[Dict] = field(default_factory=list)
    errors: List[str] = field(default_factory=list)
    curves: pd.DataFrame = field(default_factory=pd.DataFrame)
    failure: Optional[Exception] = field(default=None, repr=False)

    @property
    def ok(self) -> bool:
        return not self.errors

    def to_dict(self) -> Dict:
        return {
            "figure": self.figure,
            "seed": self.seed,
            "parameters": self.parameters,
            "metrics": self.metrics,
            "jacobi": self.jacobi,
            "suspected_atoms": self.suspected_atoms,
            "errors": self.errors,
        }

    def write(self, output_dir: Optional[str] = None) -> List[str]:
        """Write figureN_<seed>.json and, when curves exist, figureN_<seed>.csv"""
        directory = output_dir or config.OUTPUT_DIR
        stem = os.path.join(directory, f"figure{self.figure}_{self.seed}")
        paths = [write_json(self.to_dict(), stem + ".json")]
        if not self.curves.empty:
            paths.append(write_csv(self.curves, stem + ".csv"))
        return paths


def sample_shifted_wishart_eigs(cfg: ExperimentConfig, noise: Optional[np.ndarray] = None) -> np.ndarray:
    """
    Squared singular values of A = X / sqrt(m) + mu I, X an m x n standard Gaussian matrix.

    I is the m x n rectangular identity. The m values are the eigenvalues
    of the m x m Gram matrix A A^T, which avoids the n - m structural zeros
    of A^T A. ``noise`` replaces the random X.
    """
    cfg.validate()
    if noise is None:
        rng = np.random.default_rng(cfg.seed)
        noise = rng.standard_normal((cfg.m, cfg.n))
    elif noise.shape != (cfg.m, cfg.n):
        raise ValueError(f"noise must have shape {(cfg.m, cfg.n)}, got {noise.shape}")

    shifted = noise / np.sqrt(cfg.m)
    idx = np.arange(cfg.m)
    shifted[idx, idx] += cfg.mu_shift
    eigs = eigh(shifted @ shifted.T, eigvals_only=True)
    logger.info(f"Sampled {cfg.m} shifted Wishart eigenvalues in [{eigs[0]:.4g}, {eigs[-1]:.4g}]")
    return np.sort(eigs)


def silverman_bandwidth(samples: np.ndarray) -> float:
    """Silverman's rule h = 1.06 sigma N^(-1/5)"""
    samples = np.asarray(samples, dtype=float)
    if samples.size < 2:
        raise ValueError("bandwidth needs at least 2 samples")
    sigma = np.std(samples, ddof=1)
    if not sigma > 0:
        raise ValueError("samples have zero spread")
    return float(1.06 * sigma * samples.size ** (-0.2))


def kernel_smooth(samples: np.ndarray, bandwidth: Bandwidth = "auto",
                  grid_size: Optional[int] = None) -> DiscretizedMeasure:
    """Gaussian kernel density estimate on a uniform grid over [min - 3h, max + 3h]"""
    samples = np.asarray(samples, dtype=float)
    if samples.size < 2:
        raise ValueError("kernel smoothing needs at least 2 samples")
    h = silverman_bandwidth(samples) if bandwidth == "auto" else float(bandwidth)
    if not h > 0:
        raise ValueError(f"bandwidth must be positive, got {h}")

    # gaussian_kde scales its kernel by the sample standard deviation
    estimator = gaussian_kde(samples, bw_method=h / np.std(samples, ddof=1))
    grid = np.linspace(samples.min() - 3 * h, samples.max() + 3 * h, grid_size or config.KDE_GRID_POINTS)
    measure = DiscretizedMeasure.from_unnormalized(grid, estimator(grid))
    logger.info(f"Smoothed {samples.size} samples with bandwidth {h:.4g} on {grid.size} points")
    return measure


def normal_moments(count: int) -> MomentSequence:
    """Moments m_0..m_{count-1} of the standard normal: (n-1)!! for even n, 0 for odd"""
    if count < 2:
        raise ValueError(f"count must be at least 2, got {count}")
    moments = [float(math.prod(range(n - 1, 0, -2))) if n % 2 == 0 else 0.0 for n in range(count)]
    return MomentSequence(np.array(moments))


def random_bordered_jacobi(seed: int, k: int) -> BorderedJacobi:
    """Random boundary of length k and tail, alpha ~ U(-1, 1) and beta = |alpha| + U(0.05, 1)"""
    if k < 0:
        raise ValueError(f"boundary length must be nonnegative, got {k}")
    rng = np.random.default_rng(seed)
    alphas = rng.uniform(-1.0, 1.0, k + 1)
    betas = np.abs(alphas) + rng.uniform(0.05, 1.0, k + 1)
    return BorderedJacobi(tuple(alphas[:k]), tuple(betas[:k]), alphas[k], betas[k])


def _curve_errors(x: np.ndarray, reference: np.ndarray, recovered: np.ndarray) -> Dict[str, float]:
    difference = np.abs(recovered - reference)
    return {"l1": float(trapezoid(difference, x)), "linf": float(np.max(difference))}


def round_trip_parameters(j: BorderedJacobi, steps: int, tol: float = 1e-9,
                          max_points: Optional[int] = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    Lanczos parameters of the recovered density, refining its discretization.

    The cosine grid is doubled until two successive runs agree within
    ``tol``, so narrow resonances in the density are resolved.
    """
    limit = max_points or config.MASS_MAX_POINTS
    n = config.ROUND_TRIP_GRID_POINTS
    alphas, betas = lanczos_discrete(recover_measure(j, n), steps)
    while n < limit:
        n *= 2
        refined_alphas, refined_betas = lanczos_discrete(recover_measure(j, n), steps)
        change = max(np.max(np.abs(refined_alphas - alphas)), np.max(np.abs(refined_betas - betas)))
        alphas, betas = refined_alphas, refined_betas
        if change <= tol:
            break
    logger.debug(f"Round trip settled on {n} cosine points")
    return alphas, betas


def run_figure2(seed: int, k: int, grid_size: Optional[int] = None) -> ExperimentReport:
    """
    Recover a random bordered Jacobi matrix and run Lanczos on the result.

    The round trip is only attempted when no atoms are suspected; otherwise
    it is logged and skipped.
    """
    report = ExperimentReport(figure=2, seed=seed, parameters={"seed": seed, "k": k, "grid_size": grid_size})
    try:
        j = random_bordered_jacobi(seed, k)
        report.jacobi = j.to_dict()
        recovered = recover_density(j, grid_size)
        report.suspected_atoms = [asdict(atom) for atom in recovered.suspected_atoms]
        report.metrics.update({
            "grid_mass": recovered.grid_mass,
            "continuous_mass": recovered.continuous_mass,
            "total_mass": recovered.total_mass,
            "min_raw_density": recovered.min_raw_value,
            "atom_count": len(recovered.suspected_atoms),
        })
        report.curves = pd.DataFrame({"x": recovered.grid, "recovered": recovered.values})

        if recovered.suspected_atoms:
            logger.warning(f"Random-boundary run seed={seed} k={k}: atoms present, round trip skipped")
            report.metrics["round_trip_skipped"] = True
            return report

        steps = k + 3
        alphas, betas = round_trip_parameters(j, steps)
        expected_alphas, expected_betas = j.alphas(steps), j.betas(steps)
        error = max(np.max(np.abs(alphas - expected_alphas)), np.max(np.abs(betas - expected_betas)))
        rebuilt = to_bordered(alphas, betas, k=k)
        reference = density_on(rebuilt, recovered.grid)
        report.curves["round_trip"] = reference
        report.metrics.update(_curve_errors(recovered.grid, reference, recovered.values))
        report.metrics.update({"round_trip_skipped": False, "parameter_error": float(error)})
        logger.info(f"Random-boundary run seed={seed} k={k}: round-trip parameter error {error:.3e}")
    except _RECOVERABLE_ERRORS as e:
        logger.error(f"Random-boundary run seed={seed} k={k} failed: {e}")
        report.errors.append(f"{type(e).__name__}: {e}")
        report.failure = e
    return report


def run_figure3(cfg: ExperimentConfig) -> ExperimentReport:
    """
    Smooth the shifted Wishart spectrum, encode it with Lanczos and recover it from a k-boundary.

    The Toeplitz distance is measured on a longer run of cfg.diagnostic_steps
    parameters; the recovery uses only the first lanczos_steps + 1 of them.
    """
    report = ExperimentReport(figure=3, seed=cfg.seed, parameters=cfg.to_dict())
    try:
        eigs = sample_shifted_wishart_eigs(cfg)
        bandwidth = silverman_bandwidth(eigs) if cfg.bandwidth == "auto" else float(cfg.bandwidth)
        smoothed = kernel_smooth(eigs, bandwidth, cfg.grid_size)

        steps = max(cfg.lanczos_steps + 1, cfg.diagnostic_steps)
        alphas, betas = lanczos_discrete(smoothed, steps)
        j = to_bordered(alphas[:cfg.lanczos_steps + 1], betas[:cfg.lanczos_steps + 1], k=cfg.lanczos_steps)
        report.jacobi = j.to_dict()

        spacing = smoothed.points[1] - smoothed.points[0]
        reference = smoothed.weights / spacing
        recovered = density_on(j, smoothed.points)
        report.curves = pd.DataFrame({"x": smoothed.points, "smoothed": reference, "recovered": recovered})
        report.metrics.update(_curve_errors(smoothed.points, reference, recovered))
        report.metrics.update({
            "bandwidth": bandwidth,
            "toeplitz_distance": toeplitz_distance(alphas, betas),
            "tail_beta": j.tail_beta,
            "eigenvalue_mean": float(np.mean(eigs)),
        })
        logger.info(f"Shifted Wishart run seed={cfg.seed}: L1={report.metrics['l1']:.4f}, "
                    f"toeplitz distance {report.metrics['toeplitz_distance']:.4f}")
    except _RECOVERABLE_ERRORS as e:
        logger.error(f"Shifted Wishart run seed={cfg.seed} failed: {e}")
        report.errors.append(f"{type(e).__name__}: {e}")
        report.failure = e
    return report


def run_figure4(cfg: ExperimentConfig) -> ExperimentReport:
    """Rebuild the standard normal from cfg.moment_count moments"""
    report = ExperimentReport(figure=4, seed=cfg.seed, parameters=cfg.to_dict())
    try:
        moments = normal_moments(cfg.moment_count)
        steps = (cfg.moment_count - 1) // 2
        if steps < 1:
            raise ValueError(f"{cfg.moment_count} moments give no Jacobi parameters")
        alphas, betas = moments_to_jacobi(moments, steps)
        j = to_bordered(alphas, betas)
        report.jacobi = j.to_dict()

        recovered = recover_density(j)
        report.suspected_atoms = [asdict(atom) for atom in recovered.suspected_atoms]

        x = np.linspace(-4.0, 4.0, cfg.grid_size)
        reference = norm.pdf(x)
        values = density_on(j, x)
        report.curves = pd.DataFrame({"x": x, "normal": reference, "recovered": values})
        report.metrics.update(_curve_errors(x, reference, values))
        report.metrics.update({
            "grid_mass": recovered.grid_mass,
            "total_mass": recovered.total_mass,
            "steps": steps,
            "toeplitz_distance": toeplitz_distance(alphas, betas) if steps >= 2 else 0.0,
        })
        logger.info(f"Normal reconstruction from {cfg.moment_count} moments: L1={report.metrics['l1']:.4f}")
    except _RECOVERABLE_ERRORS as e:
        logger.error(f"Normal reconstruction from {cfg.moment_count} moments failed: {e}")
        report.errors.append(f"{type(e).__name__}: {e}")
        report.failure = e
    return report
