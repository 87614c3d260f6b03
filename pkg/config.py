import os
from dataclasses import dataclass
from dotenv import load_dotenv

load_dotenv()

@dataclass
class Config:
    """Numerical tolerances and run defaults"""

    BREAKDOWN_TOL: float = float(os.getenv("TOEPLITZ_BREAKDOWN_TOL", "1e-12"))
    PD_TOL: float = float(os.getenv("TOEPLITZ_PD_TOL", "1e-10"))
    TRIM_TOL: float = float(os.getenv("TOEPLITZ_TRIM_TOL", "1e-8"))
    POLE_TOL: float = float(os.getenv("TOEPLITZ_POLE_TOL", "1e-9"))
    ATOM_TOL: float = float(os.getenv("TOEPLITZ_ATOM_TOL", "1e-9"))
    MEASURE_SUM_TOL: float = 1e-12

    LAW_GRID_POINTS: int = 10000
    QUADRATURE_POINTS: int = 4096
    RECOVERY_GRID_POINTS: int = 512
    ROUND_TRIP_GRID_POINTS: int = 8192
    KDE_GRID_POINTS: int = 2048
    ATOM_SCAN_POINTS: int = 2000
    ATOM_TRUNCATION_STEPS: int = 400
    MASS_TOL: float = 1e-7
    MASS_MAX_POINTS: int = 2**20

    DEFAULT_SEED: int = 1
    DEFAULT_LANCZOS_STEPS: int = 5
    DEFAULT_MOMENT_COUNT: int = 20
    DEFAULT_DIAGNOSTIC_STEPS: int = 20

    OUTPUT_DIR: str = os.getenv("TOEPLITZ_OUTPUT_DIR", "outputs")
    LOG_LEVEL: str = os.getenv("TOEPLITZ_LOG_LEVEL", "INFO")

    def validate(self) -> bool:
        """Validate tolerances and grid sizes"""
        for name in ("BREAKDOWN_TOL", "PD_TOL", "TRIM_TOL", "POLE_TOL", "ATOM_TOL",
                     "MEASURE_SUM_TOL", "MASS_TOL"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        for name in ("LAW_GRID_POINTS", "QUADRATURE_POINTS", "ROUND_TRIP_GRID_POINTS",
                     "KDE_GRID_POINTS", "ATOM_SCAN_POINTS", "ATOM_TRUNCATION_STEPS"):
            if getattr(self, name) < 2:
                raise ValueError(f"{name} must be at least 2")
        if self.RECOVERY_GRID_POINTS < 16:
            raise ValueError("RECOVERY_GRID_POINTS must be at least 16")
        if self.MASS_MAX_POINTS < self.QUADRATURE_POINTS:
            raise ValueError("MASS_MAX_POINTS must be at least QUADRATURE_POINTS")
        return True

config = Config()
