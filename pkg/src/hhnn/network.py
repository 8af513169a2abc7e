"""Asynchronous discrete-time hypercomplex Hopfield networks."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from .activation import Activation, make_activation
from .algebra import (
    AlgebraSpec,
    HNumber,
    InvolutionSpec,
    gram_matrix,
    is_positive_semidefinite,
    parse_algebra,
    parse_involution,
)

__all__ = [
    "Network",
    "Event",
    "Trace",
    "ConditionReport",
    "potential",
    "step",
    "energy",
    "delta_energy",
    "hermitian_delta_energy",
    "check_conditions",
    "run",
    "random_hermitian_weights",
    "random_state",
    "network_from_config",
    "network_to_config",
    "SCHEDULES",
    "HERMITIAN_TOL",
]

SCHEDULES = ("cyclic", "random")
HERMITIAN_TOL = 1e-12
CONFIG_FIELDS = {"algebra", "involution", "activation", "N", "weights", "schedule", "seed", "x0", "name"}


@dataclass(eq=False)
class Network:
    """``N`` neurons with weights ``W[i, j]`` (coefficient arrays, shape ``(N, N, dim)``).

    ``schedule`` is ``"cyclic"`` (neurons 0..N-1 every sweep) or
    ``"random"`` (a fresh permutation per sweep drawn from ``seed``).
    """

    algebra: AlgebraSpec
    tau: InvolutionSpec
    activation: Activation
    W: np.ndarray
    schedule: str = "cyclic"
    seed: int = 0
    name: str = ""
    G: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        W = np.asarray(self.W, dtype=np.float64)
        dim = self.algebra.dim
        if W.ndim == 2 and dim == 1:
            W = W[:, :, None]
        if W.ndim != 3 or W.shape[0] != W.shape[1] or W.shape[2] != dim:
            raise ValueError(f"weights must have shape (N, N, {dim}), got {W.shape}")
        if self.tau.dim != dim:
            raise ValueError("involution dimension does not match the algebra")
        if self.activation.dim != dim:
            raise ValueError(f"{self.activation.id} does not act on dim-{dim} numbers")
        if self.schedule not in SCHEDULES:
            raise ValueError(f"schedule must be one of {SCHEDULES}, got {self.schedule!r}")
        W.flags.writeable = False
        self.W = W
        self.G = gram_matrix(self.algebra, self.tau)

    @property
    def N(self) -> int:
        return self.W.shape[0]

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def states(self):
        return self.activation.states

    def weight(self, i: int, j: int) -> HNumber:
        return HNumber(self.algebra, self.W[i, j].copy())

    def sweep_orders(self):
        """Infinite iterator of neuron orders, one per sweep."""
        if self.schedule == "cyclic":
            order = np.arange(self.N)
            while True:
                yield order
        rng = np.random.default_rng(self.seed)
        while True:
            yield rng.permutation(self.N)


def _as_state(net: Network, x) -> np.ndarray:
    if isinstance(x, (list, tuple)) and x and isinstance(x[0], HNumber):
        x = [p.coeffs for p in x]
    x = np.array(x, dtype=np.float64)
    if net.dim == 1 and x.ndim == 1:
        x = x[:, None]
    if x.shape != (net.N, net.dim):
        raise ValueError(f"state must have shape ({net.N}, {net.dim}), got {x.shape}")
    return x


def potential(net: Network, x, i: int) -> np.ndarray:
    """``v_i = sum_j w_ij x_j`` with the weight on the left."""
    if not 0 <= i < net.N:
        raise IndexError(f"neuron {i} out of range for N={net.N}")
    x = _as_state(net, x)
    return np.einsum("ja,jb,abk->k", net.W[i], x, net.algebra.c)


def step(net: Network, x, i: int) -> tuple[np.ndarray, bool]:
    """Update neuron ``i``; returns the new state and whether it changed."""
    x = _as_state(net, x)
    v = potential(net, x, i)
    new = net.activation(v)
    if new is None or net.activation.same_state(new, x[i]):
        return x, False
    x = x.copy()
    x[i] = new
    return x, True


def energy(net: Network, x) -> float:
    """``-1/2 sum_ij B(x_i, w_ij x_j)``."""
    x = _as_state(net, x)
    V = np.einsum("ija,jb,abk->ik", net.W, x, net.algebra.c)
    return float(-0.5 * np.einsum("ia,ab,ib->", x, net.G, V))


def delta_energy(net: Network, x: np.ndarray, mu: int, new: np.ndarray, v: np.ndarray) -> float:
    """Exact energy change when neuron ``mu`` moves to ``new``; ``v`` is its potential at ``x``.

    Uses only bilinearity, so it holds for any weights.
    """
    old = x[mu]
    d = new - old
    G = net.G
    mul = net.algebra.mul_coeffs
    w_mm = net.W[mu, mu]
    row = d @ G @ (v - mul(w_mm, old))
    col_prod = mul(net.W[:, mu], d)
    col = np.einsum("ia,ab,ib->", x, G, col_prod) - x[mu] @ G @ col_prod[mu]
    self_new = new @ G @ mul(w_mm, new)
    self_old = old @ G @ mul(w_mm, old)
    return float(-0.5 * (row + col + self_new - self_old))


def hermitian_delta_energy(net: Network, x: np.ndarray, mu: int, new: np.ndarray) -> float:
    """``-B(d, v) - 1/2 B(d, w_mm d)`` with ``d = new - x_mu``.

    Equals the true change only for Hermitian weights on a real-part
    associative system.
    """
    x = _as_state(net, x)
    v = potential(net, x, mu)
    d = new - x[mu]
    return float(-(d @ net.G @ v) - 0.5 * (d @ net.G @ net.algebra.mul_coeffs(net.W[mu, mu], d)))


@dataclass
class ConditionReport:
    hermitian: bool
    case_a: bool
    case_b: bool
    psd: bool

    @property
    def convergence_guaranteed(self) -> bool:
        return self.hermitian and (self.case_a or self.case_b)

    def as_dict(self) -> dict:
        return {"hermitian": self.hermitian, "case_a": self.case_a, "case_b": self.case_b,
                "psd": self.psd}


def check_conditions(net: Network, tol: float = HERMITIAN_TOL) -> ConditionReport:
    """Weight hypotheses of the convergence theorem.

    ``hermitian``: ``w_ij = tau(w_ji)``; ``case_a``: zero self-weights;
    ``case_b``: real non-negative self-weights on a PSD system.
    """
    W = net.W
    tauWT = np.transpose(W, (1, 0, 2)) * net.tau.array
    hermitian = bool(np.max(np.abs(W - tauWT), initial=0.0) <= tol)
    diag = W[np.arange(net.N), np.arange(net.N)]
    case_a = bool(np.all(diag == 0))
    psd = is_positive_semidefinite(net.algebra, net.tau)
    real_nonneg = bool(np.all(diag[:, 1:] == 0) and np.all(diag[:, 0] >= 0))
    return ConditionReport(hermitian, case_a, real_nonneg and psd, psd)


@dataclass
class Event:
    t: int
    neuron: int
    old: np.ndarray
    new: np.ndarray
    potential: np.ndarray
    energy: float
    changed: bool


@dataclass
class Trace:
    initial_energy: float
    events: list = field(default_factory=list)
    converged: bool = False
    sweeps: int = 0
    final_state: np.ndarray | None = None

    @property
    def changes(self) -> int:
        return sum(e.changed for e in self.events)

    @property
    def energies(self) -> np.ndarray:
        return np.array([e.energy for e in self.events])

    @property
    def final_energy(self) -> float:
        return self.events[-1].energy if self.events else self.initial_energy

    def descent_violations(self, rel_slack: float = 1e-9) -> list:
        """Changing events whose energy did not drop below the previous value."""
        bad = []
        prev = self.initial_energy
        for e in self.events:
            if e.changed and not e.energy < prev + rel_slack * abs(prev):
                bad.append(e)
            prev = e.energy
        return bad

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["update_index", "neuron", "changed", "energy"])
        for e in self.events:
            w.writerow([e.t, e.neuron, int(e.changed), repr(e.energy)])
        return buf.getvalue()

    def summary(self) -> dict:
        return {"converged": self.converged, "sweeps": self.sweeps, "updates": len(self.events),
                "changes": self.changes, "initial_energy": self.initial_energy,
                "final_energy": self.final_energy}


def run(net: Network, x0, max_sweeps: int = 1000) -> Trace:
    """Asynchronous updates until a full sweep changes nothing, or ``max_sweeps``."""
    x = _as_state(net, x0).copy()
    for i, xi in enumerate(x):
        if not net.states.contains(xi):
            raise ValueError(f"initial state of neuron {i} is not in the state set of {net.activation.id}")
    E = energy(net, x)
    trace = Trace(initial_energy=E)
    t = 0
    orders = net.sweep_orders()
    for sweep in range(max_sweeps):
        changed_any = False
        for i in next(orders):
            i = int(i)
            v = potential(net, x, i)
            new = net.activation(v)
            if new is None or net.activation.same_state(new, x[i]):
                trace.events.append(Event(t, i, x[i].copy(), x[i].copy(), v, E, False))
            else:
                E = E + delta_energy(net, x, i, new, v)
                trace.events.append(Event(t, i, x[i].copy(), new.copy(), v, E, True))
                x[i] = new
                changed_any = True
            t += 1
        trace.sweeps = sweep + 1
        if not changed_any:
            trace.converged = True
            break
    trace.final_state = x
    return trace


def random_hermitian_weights(N: int, spec: AlgebraSpec, tau: InvolutionSpec, seed: int | None = 0,
                             self_weight: float = 0.0, rng: np.random.Generator | None = None) -> np.ndarray:
    """Standard-normal upper triangle, ``w_ji = tau(w_ij)``, real ``self_weight`` on the diagonal."""
    if self_weight < 0:
        raise ValueError("self_weight must be non-negative")
    rng = rng if rng is not None else np.random.default_rng(seed)
    W = np.zeros((N, N, spec.dim))
    iu, ju = np.triu_indices(N, k=1)
    upper = rng.standard_normal((len(iu), spec.dim))
    W[iu, ju] = upper
    W[ju, iu] = upper * tau.array
    W[np.arange(N), np.arange(N), 0] = self_weight
    return W


def random_state(net: Network, rng: np.random.Generator) -> np.ndarray:
    return net.states.sample(rng, net.N)


# ---------------------------------------------------------------- config I/O

def network_from_config(doc: dict) -> tuple[Network, np.ndarray | None]:
    """Build a network (and optional ``x0``) from a config document."""
    unknown = set(doc) - CONFIG_FIELDS
    if unknown:
        raise ValueError(f"unknown config fields: {sorted(unknown)}")
    for key in ("algebra", "activation", "weights"):
        if key not in doc:
            raise ValueError(f"config is missing {key!r}")
    spec, default_tau = parse_algebra(doc["algebra"])
    inv = doc.get("involution", "default")
    tau = default_tau if inv in (None, "default") else parse_involution(inv, spec)
    act = make_activation(doc["activation"], spec)
    W = np.array(doc["weights"], dtype=np.float64)
    if W.ndim == 2 and spec.dim > 1 or (W.ndim == 2 and W.shape[0] != W.shape[1]):
        n = int(round(np.sqrt(W.shape[0])))
        W = W.reshape(n, n, spec.dim)
    net = Network(spec, tau, act, W, schedule=doc.get("schedule", "cyclic"),
                  seed=int(doc.get("seed", 0)), name=doc.get("name", ""))
    if "N" in doc and int(doc["N"]) != net.N:
        raise ValueError(f"config N={doc['N']} does not match {net.N}x{net.N} weights")
    x0 = doc.get("x0")
    if x0 is not None:
        x0 = _as_state(net, x0)
    return net, x0


def _num(x: float):
    return int(x) if float(x).is_integer() else float(x)


def network_to_config(net: Network, x0=None) -> dict:
    doc = {
        "algebra": net.algebra.name,
        "involution": list(net.tau.signs),
        "activation": net.activation.id,
        "N": net.N,
        "weights": [[[_num(c) for c in w] for w in row] for row in net.W],
        "schedule": net.schedule,
        "seed": net.seed,
    }
    if net.name:
        doc["name"] = net.name
    if x0 is not None:
        doc["x0"] = [[_num(c) for c in xi] for xi in _as_state(net, x0)]
    return doc


def load_network(path) -> tuple[Network, np.ndarray | None]:
    with open(path, encoding="utf-8") as fh:
        return network_from_config(json.load(fh))
