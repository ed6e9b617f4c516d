"""Bound-state spectra for a short-range potential with a 1/r singularity.

Two independent engines compute the discrete spectrum of
V(r) = V0 (exp(-lam*r) - gamma) / (exp(lam*r) - 1):

* an asymptotic-iteration engine running on truncated Taylor series in
  configurable-precision arithmetic (`spectra.aim`), and
* a Hamiltonian-diagonalization engine in the Laguerre (J-matrix) basis
  (`spectra.hdm`).

The `spectra.service` subpackage exposes both through a FastAPI app; the
`spectra` command-line tool is a thin client of that service.
"""

from spectra.potential import PotentialParams
from spectra.series import Precision, TaylorSeries
from spectra.aim import AimConfig, AimResult, aim_spectrum
from spectra.hdm import HdmConfig, hdm_spectrum, plateau_scan
from spectra.report import SpectrumReport

__version__ = "0.1.0"

__all__ = [
    "PotentialParams",
    "Precision",
    "TaylorSeries",
    "AimConfig",
    "AimResult",
    "aim_spectrum",
    "HdmConfig",
    "hdm_spectrum",
    "plateau_scan",
    "SpectrumReport",
    "__version__",
]
