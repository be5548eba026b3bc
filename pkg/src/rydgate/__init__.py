"""Error budgets for neutral-atom hyperfine qubits and Rydberg-blockade gates.

The library is organised by physical subsystem: ``atomic`` (quantum defects,
radial integrals, polarizabilities, photoionization), ``trap`` (optical
dipole trap geometry and loss/heating), ``coherence`` (storage dephasing),
``raman`` (single-qubit rotations), ``readout`` (photon-counting detection),
``rydberg`` (pair interactions and lifetimes) and ``gate`` (two-qubit
conditional-phase protocols). ``config``, ``datasets`` and ``report`` back
the ``rydgate`` command-line tool.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConfigurationError,
    NumericalError,
    RydgateError,
    ValidationError,
)

__all__ = ["__version__", "RydgateError", "ValidationError", "NumericalError", "ConfigurationError"]
