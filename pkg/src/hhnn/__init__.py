"""Hypercomplex-valued discrete-time Hopfield networks."""

__version__ = "0.1.0"

from .algebra import (  # noqa: E402
    AlgebraSpec,
    HNumber,
    InvolutionSpec,
    builtin_algebra,
    cayley_dickson,
    clifford2,
    is_positive_semidefinite,
    is_reahn,
    is_reverse_involution,
)
from .activation import make_activation, verify_b_projection  # noqa: E402
from .network import Network, check_conditions, energy, run  # noqa: E402

__all__ = [
    "AlgebraSpec",
    "HNumber",
    "InvolutionSpec",
    "Network",
    "builtin_algebra",
    "cayley_dickson",
    "check_conditions",
    "clifford2",
    "energy",
    "is_positive_semidefinite",
    "is_reahn",
    "is_reverse_involution",
    "make_activation",
    "run",
    "verify_b_projection",
]
