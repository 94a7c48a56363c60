"""Partition regularity of inhomogeneous linear systems over rings and modules.

``decide`` returns either a constant solution (the system is partition
regular) or a certificate describing a finite colouring with no
monochromatic solution.
"""

__version__ = "0.1.0"

from .linalg import IntMatrix, snf, solve_affine, quotient, separating_functional  # noqa: E402
from .rings import CATALOG, CyclicRing, Integers, PolyQuotient, Product  # noqa: E402
from .modules import SystemInstance, explicit_module, free_module, self_module  # noqa: E402
from .witness import (NotPartitionRegular, PartitionRegular, WitnessCertificate, colour,  # noqa: E402
                      decide, find_constant_solution)
from .oracle import exhaustive_pr, verify_certificate  # noqa: E402

__all__ = [
    "CATALOG", "CyclicRing", "IntMatrix", "Integers", "NotPartitionRegular", "PartitionRegular",
    "PolyQuotient", "Product", "SystemInstance", "WitnessCertificate", "colour", "decide",
    "exhaustive_pr", "explicit_module", "find_constant_solution", "free_module", "quotient",
    "self_module", "separating_functional", "snf", "solve_affine", "verify_certificate",
]
