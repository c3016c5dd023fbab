"""Two-photon states emitted by a driven three-level ladder atom.

Submodules: ``qmath`` (linear algebra, concurrence), ``dynamics`` (master
equation), ``tomography`` (atom <-> photon map, eight-number reconstruction),
``entanglement`` (entanglement distributions) and ``cli``.
"""

from .dynamics import PRESETS, SystemParams, evolve, steady_state
from .errors import ConvergenceError, IntegrationError, NumericalError, ValidationError
from .tomography import atomic_to_photon, photon_to_atomic, reconstruct

__version__ = "0.1.0"

__all__ = [
    "PRESETS", "SystemParams", "evolve", "steady_state",
    "ConvergenceError", "IntegrationError", "NumericalError", "ValidationError",
    "atomic_to_photon", "photon_to_atomic", "reconstruct",
]
