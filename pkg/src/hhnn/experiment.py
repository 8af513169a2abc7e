"""Octonion split-sign network versus its realified bipolar twin."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .activation import make_activation
from .algebra import builtin_algebra
from .network import Network, Trace, random_hermitian_weights, run
from .realify import phi, realify_network

__all__ = ["OctonionRun", "octonion_experiment"]


@dataclass
class OctonionRun:
    seed: int
    N: int
    octonion: Trace
    realified: Trace
    x0: np.ndarray

    def summary(self) -> dict:
        return {"seed": self.seed, "N": self.N,
                "octonion": self.octonion.summary(), "realified": self.realified.summary()}


def octonion_experiment(N: int = 100, seed: int = 0, max_sweeps: int = 1000,
                        schedule: str = "random") -> OctonionRun:
    """Random Hermitian octonion weights (zero diagonal), uniform +-1 start state.

    One seed drives three independent streams: weights, initial state and
    update order.
    """
    if N < 2:
        raise ValueError("the experiment needs N >= 2")
    w_seq, x_seq, order_seq = np.random.SeedSequence(seed).spawn(3)
    spec, natural = builtin_algebra("O")
    W = random_hermitian_weights(N, spec, natural, rng=np.random.default_rng(w_seq))
    order_seed = int(order_seq.generate_state(1)[0])
    net = Network(spec, natural, make_activation("split", spec), W,
                  schedule=schedule, seed=order_seed, name="octonion")
    x0 = np.where(np.random.default_rng(x_seq).random((N, 8)) < 0.5, 1.0, -1.0)
    _, real = realify_network(net)
    return OctonionRun(seed, N, run(net, x0, max_sweeps), run(real, phi(x0)[:, None], max_sweeps), x0)
