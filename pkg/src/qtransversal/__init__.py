"""Structural analysis of transversal gates on stabilizer and subsystem codes.

The main entry points are :class:`~qtransversal.pauli.PauliElement`,
:class:`~qtransversal.stabilizer.StabilizerGroup`,
:func:`~qtransversal.structure.classify_coordinate`,
:func:`~qtransversal.unitary.preserves_code` and
:func:`~qtransversal.report.run_analysis`.
"""

__version__ = "0.1.0"

from .errors import CodeFileError, QTransversalError, ResourceError, ValidationError
from .pauli import LocalCliffordMap, PauliElement
from .stabilizer import CodeSpec, StabilizerGroup

__all__ = [
    "__version__", "CodeFileError", "QTransversalError", "ResourceError", "ValidationError",
    "LocalCliffordMap", "PauliElement", "CodeSpec", "StabilizerGroup",
]
