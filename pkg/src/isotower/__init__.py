"""Spectral constructions on spaces of isometries, with numerical and exact verification."""
from .errors import (DegenerateAlpha, DomainError, FacialViolation, InvalidInput, IsotowerError,
                     NotInjective, NotInvertible, OutsideChart, ResolutionError, TooLarge, UsageError)
from .facial import INF
from .harness import Report, SuiteConfig, haar_isometry, random_hermitian, run_suite
from .tower import BASEPOINT, ThomPoint, TowerPoint

__version__ = "0.1.0"

__all__ = [
    "BASEPOINT", "INF", "Report", "SuiteConfig", "ThomPoint", "TowerPoint", "haar_isometry",
    "random_hermitian", "run_suite", "DegenerateAlpha", "DomainError", "FacialViolation",
    "InvalidInput", "IsotowerError", "NotInjective", "NotInvertible", "OutsideChart",
    "ResolutionError", "TooLarge", "UsageError",
]
