"""Ready-made networks: the two-neuron Clifford examples and their realifications."""
from __future__ import annotations

import numpy as np

from .activation import make_activation
from .algebra import builtin_algebra, identity_involution
from .network import Network
from .realify import realify_network

__all__ = ["EXAMPLE5_VARIANTS", "EXAMPLE6_VARIANTS", "EXAMPLE_X0", "example5", "example6", "preset"]

# variant -> (algebra, activation); letters a-f are accepted as aliases
EXAMPLE5_VARIANTS = {
    "c-conj": ("C", "conj_split"),   # a
    "u-split": ("U", "split"),       # b
    "d-split": ("D", "split"),       # c
    "d-conj": ("D", "conj_split"),   # d
    "c-split": ("C", "split"),       # e
    "u-conj": ("U", "conj_split"),   # f
}
_ALIASES = dict(zip("abcdef", EXAMPLE5_VARIANTS))
EXAMPLE6_VARIANTS = {"c": "c-split", "u": "u-split", "d": "d-split"}

# [-1 - i, 1 + i]
EXAMPLE_X0 = np.array([[-1.0, -1.0], [1.0, 1.0]])


def example5(variant: str, involution: str = "identity") -> Network:
    """Two neurons, ``w11 = w22 = 0``, ``w12 = w21 = 1 + 3i``.

    The weights are symmetric, so the identity involution makes them
    Hermitian in every variant.
    """
    variant = _ALIASES.get(variant, variant)
    if variant not in EXAMPLE5_VARIANTS:
        raise ValueError(f"unknown example5 variant {variant!r}; choose from {sorted(EXAMPLE5_VARIANTS)}")
    name, act = EXAMPLE5_VARIANTS[variant]
    spec, natural = builtin_algebra(name)
    tau = identity_involution(spec) if involution == "identity" else natural
    W = np.zeros((2, 2, 2))
    W[0, 1] = W[1, 0] = [1.0, 3.0]
    return Network(spec, tau, make_activation(act, spec), W, name=f"example5:{variant}")


def example6(variant: str) -> Network:
    """Real bipolar network obtained from a split-sign example5 network."""
    key = variant.lower()
    if key not in EXAMPLE6_VARIANTS:
        raise ValueError(f"unknown example6 variant {variant!r}; choose from {sorted(EXAMPLE6_VARIANTS)}")
    _, real = realify_network(example5(EXAMPLE6_VARIANTS[key]))
    real.name = f"example6:{key}"
    return real


def preset(ident: str) -> tuple[Network, np.ndarray]:
    """Network for ``example5:<variant>`` / ``example6:<variant>`` with the start state."""
    head, _, variant = ident.partition(":")
    if head == "example5":
        return example5(variant), EXAMPLE_X0.copy()
    if head == "example6":
        return example6(variant), EXAMPLE_X0.reshape(4, 1)
    raise ValueError(f"unknown preset {ident!r}")
