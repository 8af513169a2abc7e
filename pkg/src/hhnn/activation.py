"""Activation functions with explicit domains and state sets.

Every activation maps a coefficient array to a state, or to ``None`` when
the argument lies outside its domain (the neuron then keeps its state).
Arguments within ``EPS_DOM`` of a domain boundary count as outside.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import AlgebraSpec, HNumber, InvolutionSpec, gram_matrix

__all__ = [
    "EPS_DOM",
    "EPS_MARGIN",
    "EPS_STATE",
    "StateSet",
    "Activation",
    "CSgn",
    "TSgn",
    "SplitSign",
    "ConjSplitSign",
    "SigmaNormalize",
    "make_activation",
    "csgn",
    "tsgn",
    "split_sign",
    "conj_split_sign",
    "sigma_normalize",
    "ProjectionCheck",
    "verify_b_projection",
]

EPS_DOM = 1e-12
EPS_MARGIN = 1e-9
# continuous states closer than this are treated as unchanged
EPS_STATE = 1e-12


def _snap(x: np.ndarray) -> np.ndarray:
    out = x.copy()
    for target in (-1.0, 0.0, 1.0):
        out[np.abs(out - target) < 1e-15] = target
    return out


def gray_sign_vectors(dim: int) -> np.ndarray:
    """All +-1 vectors of length ``dim`` in reflected Gray-code order.

    For ``dim = 2`` this is ``1+i, 1-i, -1-i, -1+i``.
    """
    rows = []
    for g in range(2 ** dim):
        code = g ^ (g >> 1)
        rows.append([-1.0 if code >> (dim - 1 - mu) & 1 else 1.0 for mu in range(dim)])
    return np.array(rows)


class StateSet:
    """Finite list of states, or the unit sphere when ``elements`` is None."""

    def __init__(self, dim: int, elements: np.ndarray | None = None):
        self.dim = dim
        self.elements = None if elements is None else np.asarray(elements, dtype=np.float64)
        self._index = None
        if self.elements is not None:
            self.elements.flags.writeable = False
            self._index = {tuple(row): i for i, row in enumerate(self.elements)}
            if len(self._index) != len(self.elements):
                raise ValueError("state set has duplicate elements")

    @property
    def finite(self) -> bool:
        return self.elements is not None

    def __len__(self):
        if not self.finite:
            raise TypeError("the unit sphere is not a finite state set")
        return len(self.elements)

    def index(self, x: np.ndarray) -> int:
        return self._index[tuple(np.asarray(x, dtype=np.float64))]

    def contains(self, x: np.ndarray, tol: float = 1e-12) -> bool:
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.dim,):
            return False
        if self.finite:
            return tuple(x) in self._index
        return abs(np.linalg.norm(x) - 1.0) <= tol

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """``n`` states drawn uniformly (finite) or rotation-invariantly (sphere)."""
        if self.finite:
            return self.elements[rng.integers(len(self.elements), size=n)].copy()
        g = rng.standard_normal((n, self.dim))
        return g / np.linalg.norm(g, axis=1, keepdims=True)


class Activation:
    """Base class; subclasses implement ``apply`` and ``boundary_distance``."""

    id: str = ""
    states: StateSet

    def __call__(self, q: np.ndarray) -> np.ndarray | None:
        return self.apply(np.asarray(q, dtype=np.float64))

    def apply(self, q: np.ndarray) -> np.ndarray | None:
        raise NotImplementedError

    def boundary_distance(self, q: np.ndarray) -> float:
        raise NotImplementedError

    def same_state(self, a: np.ndarray, b: np.ndarray) -> bool:
        if self.states.finite:
            return bool(np.array_equal(a, b))
        return float(np.max(np.abs(a - b))) <= EPS_STATE

    def __repr__(self):
        return f"<activation {self.id}>"


# ---------------------------------------------------------------- complex phase

def _csgn_sector(z0: float, z1: float, K: int) -> tuple[int | None, float]:
    """Quantized sector index of ``z0 + z1 i`` and its distance to the domain boundary."""
    r = math.hypot(z0, z1)
    dtheta = math.pi / K
    theta = math.atan2(z1, z0) % (2 * math.pi)
    resid = (theta + dtheta) % (2 * dtheta)
    ang = min(resid, 2 * dtheta - resid)
    dist = min(r, ang)
    if r <= EPS_DOM or ang <= EPS_DOM:
        return None, dist
    m = int((theta + dtheta) // (2 * dtheta)) % K
    return m, dist


def _roots(K: int) -> np.ndarray:
    m = np.arange(K)
    return _snap(np.stack([np.cos(2 * m * np.pi / K), np.sin(2 * m * np.pi / K)], axis=1))


class CSgn(Activation):
    """Multistate complex signum with resolution factor ``K``."""

    def __init__(self, K: int):
        if int(K) != K or K < 2:
            raise ValueError(f"resolution factor must be an integer >= 2, got {K}")
        self.K = int(K)
        self.id = f"csgn:{self.K}"
        self.dim = 2
        self.roots = _roots(self.K)
        self.states = StateSet(2, self.roots)

    def apply(self, q):
        m, _ = _csgn_sector(q[0], q[1], self.K)
        return None if m is None else self.roots[m].copy()

    def boundary_distance(self, q):
        return _csgn_sector(q[0], q[1], self.K)[1]


class TSgn(Activation):
    """Tessarine signum: csgn on each half of ``p = u + v j``."""

    def __init__(self, K: int):
        self.inner = CSgn(K)
        self.K = self.inner.K
        self.id = f"tsgn:{self.K}"
        self.dim = 4
        r = self.inner.roots
        self.states = StateSet(4, np.array([np.concatenate([u, v]) for u in r for v in r]))

    def apply(self, q):
        u = self.inner.apply(q[:2])
        v = self.inner.apply(q[2:])
        if u is None or v is None:
            return None
        return np.concatenate([u, v])

    def boundary_distance(self, q):
        return min(self.inner.boundary_distance(q[:2]), self.inner.boundary_distance(q[2:]))


class SplitSign(Activation):
    """Componentwise sign; defined when no coefficient vanishes."""

    id = "split"

    def __init__(self, dim: int):
        self.dim = dim
        self.states = StateSet(dim, gray_sign_vectors(dim))

    def apply(self, q):
        if np.min(np.abs(q)) <= EPS_DOM:
            return None
        return np.sign(q)

    def boundary_distance(self, q):
        return float(np.min(np.abs(q)))


class ConjSplitSign(SplitSign):
    """``sgn(p_0) - sgn(p_1) i`` on two-dimensional algebras."""

    id = "conj_split"

    def __init__(self, dim: int = 2):
        if dim != 2:
            raise ValueError(f"conj_split needs a two-dimensional algebra, got dim {dim}")
        super().__init__(2)

    def apply(self, q):
        s = super().apply(q)
        if s is None:
            return None
        s[1] = -s[1]
        return s


class SigmaNormalize(Activation):
    """``p / |p|`` onto the unit sphere."""

    id = "sigma"

    def __init__(self, dim: int):
        self.dim = dim
        self.states = StateSet(dim, None)

    def apply(self, q):
        r = float(np.linalg.norm(q))
        if r <= EPS_DOM:
            return None
        return q / r

    def boundary_distance(self, q):
        return float(np.linalg.norm(q))


def make_activation(ident: str, spec_or_dim) -> Activation:
    """Activation from its config id: ``csgn:K``, ``tsgn:K``, ``split``, ``conj_split``, ``sigma``."""
    dim = spec_or_dim if isinstance(spec_or_dim, int) else spec_or_dim.dim
    head, _, arg = str(ident).partition(":")
    if head in ("csgn", "tsgn"):
        if not arg:
            raise ValueError(f"{head} needs a resolution factor, e.g. {head}:4")
        act = CSgn(int(arg)) if head == "csgn" else TSgn(int(arg))
    elif head == "split" and not arg:
        act = SplitSign(dim)
    elif head == "conj_split" and not arg:
        act = ConjSplitSign(dim)
    elif head == "sigma" and not arg:
        act = SigmaNormalize(dim)
    else:
        raise ValueError(f"unknown activation {ident!r}")
    if act.dim != dim:
        raise ValueError(f"{act.id} needs dim {act.dim}, algebra has dim {dim}")
    return act


# ---------------------------------------------------------------- HNumber wrappers

def _wrap(act: Activation, p: HNumber) -> HNumber | None:
    out = act(p.coeffs.astype(np.float64))
    return None if out is None else HNumber(p.algebra, out)


def csgn(K: int, z: HNumber) -> HNumber | None:
    return _wrap(CSgn(K), z)


def tsgn(K: int, p: HNumber) -> HNumber | None:
    return _wrap(TSgn(K), p)


def split_sign(p: HNumber) -> HNumber | None:
    return _wrap(SplitSign(p.algebra.dim), p)


def conj_split_sign(p: HNumber) -> HNumber | None:
    return _wrap(ConjSplitSign(p.algebra.dim), p)


def sigma_normalize(p: HNumber) -> HNumber | None:
    return _wrap(SigmaNormalize(p.algebra.dim), p)


# ---------------------------------------------------------------- B-projection

@dataclass
class ProjectionCheck:
    passed: bool
    checked: int
    q: np.ndarray | None = None
    s: np.ndarray | None = None
    gap: float | None = None

    def __bool__(self):
        return self.passed


def verify_b_projection(f: Activation, spec: AlgebraSpec, tau: InvolutionSpec,
                        samples: int = 10_000, seed: int = 0) -> ProjectionCheck:
    """Search for ``q, s`` with ``B(f(q), q) <= B(s, q)``, ``s != f(q)``.

    Arguments ``q`` are standard normal and resampled while within
    ``EPS_MARGIN`` of the domain boundary.  Finite state sets are checked
    exhaustively per ``q``; on the unit sphere one random ``s`` is drawn
    per ``q``.  The reported ``gap`` is ``B(f(q), q) - B(s, q)``.
    """
    if f.dim != spec.dim:
        raise ValueError(f"{f.id} has dim {f.dim}, algebra has dim {spec.dim}")
    rng = np.random.default_rng(seed)
    G = gram_matrix(spec, tau)
    for n in range(samples):
        q = rng.standard_normal(spec.dim)
        while f.boundary_distance(q) < EPS_MARGIN:
            q = rng.standard_normal(spec.dim)
        fq = f(q)
        best = fq @ G @ q
        if f.states.finite:
            others = f.states.elements[~np.all(f.states.elements == fq, axis=1)]
            vals = others @ G @ q
            k = int(np.argmax(vals))
            if vals[k] >= best:
                return ProjectionCheck(False, n + 1, q, others[k], float(best - vals[k]))
        else:
            s = f.states.sample(rng, 1)[0]
            val = s @ G @ q
            if val >= best:
                return ProjectionCheck(False, n + 1, q, s, float(best - val))
    return ProjectionCheck(True, samples)
