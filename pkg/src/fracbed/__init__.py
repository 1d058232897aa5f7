"""Numerical checks of fractional-smoothness embedding inequalities."""

from .fields import GridFunction, TestFamily, sample
from .inequalities import (InequalityReport, pitt_verify, sharpness_probe,
                           uncertainty_verify, verify)
from .params import AdmissibilityError, Params
from .specfun import all_constants, constant

__version__ = "0.1.0"

__all__ = ["AdmissibilityError", "GridFunction", "InequalityReport", "Params", "TestFamily",
           "all_constants", "constant", "pitt_verify", "sample", "sharpness_probe",
           "uncertainty_verify", "verify", "__version__"]
