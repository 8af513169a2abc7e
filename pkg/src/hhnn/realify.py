"""Real bipolar equivalents of split-sign hypercomplex networks."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .activation import SplitSign
from .algebra import AlgebraSpec, HNumber, builtin_algebra
from .network import Network, potential

__all__ = [
    "left_mul_matrix",
    "block_matrix",
    "realify_network",
    "phi",
    "phi_inv",
    "RealificationCheck",
    "verify_realification",
    "matrix_to_csv",
]


def left_mul_matrix(spec: AlgebraSpec, w) -> np.ndarray:
    """Matrix ``L`` with ``L @ x = w * x`` on coefficient vectors.

    Column ``b`` is the product ``w e_b``.
    """
    w = w.coeffs if isinstance(w, HNumber) else np.asarray(w)
    if w.dtype == object:
        return np.einsum("a,abk->kb", w, spec.exact)
    return np.einsum("a,abk->kb", w.astype(np.float64), spec.c)


def block_matrix(net: Network) -> np.ndarray:
    """``N*dim`` square matrix whose block ``(i, j)`` is ``L(w_ij)``."""
    N, d = net.N, net.dim
    L = np.einsum("ija,abk->ikjb", net.W, net.algebra.c)
    return L.reshape(N * d, N * d)


def realify_network(net: Network) -> tuple[np.ndarray, Network]:
    """Block matrix ``M`` and the ``N*dim``-neuron bipolar network it defines."""
    if not type(net.activation) is SplitSign:
        raise ValueError(f"only split-sign networks can be realified, not {net.activation.id}")
    M = block_matrix(net)
    R, ident = builtin_algebra("R")
    real = Network(R, ident, SplitSign(1), M[:, :, None], schedule=net.schedule,
                   seed=net.seed, name=f"{net.name}-real" if net.name else "")
    return M, real


def phi(x) -> np.ndarray:
    """Neuron-major concatenation of coefficient vectors."""
    if isinstance(x, (list, tuple)) and x and isinstance(x[0], HNumber):
        x = [p.coeffs for p in x]
    return np.asarray(x, dtype=np.float64).reshape(-1)


def phi_inv(y, dim: int) -> np.ndarray:
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    if dim < 1 or len(y) % dim:
        raise ValueError(f"length {len(y)} is not a multiple of dim {dim}")
    return y.reshape(-1, dim)


@dataclass
class RealificationCheck:
    passed: bool
    trials: int
    max_error: float
    witness: np.ndarray | None = None

    def __bool__(self):
        return self.passed


def verify_realification(net: Network, trials: int = 100, seed: int = 0,
                         tol: float = 1e-12) -> RealificationCheck:
    """Compare ``M phi(x)`` with ``phi(W x)`` on random states.

    ``W x`` is evaluated neuron by neuron through the structure tensor, not
    through ``M``.
    """
    rng = np.random.default_rng(seed)
    M = block_matrix(net)
    worst = 0.0
    for _ in range(trials):
        x = net.states.sample(rng, net.N)
        lhs = M @ phi(x)
        rhs = phi(np.array([potential(net, x, i) for i in range(net.N)]))
        err = float(np.max(np.abs(lhs - rhs), initial=0.0))
        worst = max(worst, err)
        if err > tol:
            return RealificationCheck(False, trials, err, x)
    return RealificationCheck(True, trials, worst)


def matrix_to_csv(M: np.ndarray) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in M:
        w.writerow([int(v) if float(v).is_integer() else repr(float(v)) for v in row])
    return buf.getvalue()
