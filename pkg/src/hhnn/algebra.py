"""Hypercomplex number systems defined by structure constants.

An algebra of dimension ``dim`` is described by a tensor ``c[mu][nu][k]``
holding the coefficient of unit ``k`` in the product of units ``mu`` and
``nu``.  Index 0 is the real unit.  Constants are kept as exact rationals so
the law checks below are decided without rounding; a float64 copy drives the
numerical code.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "AlgebraSpec",
    "InvolutionSpec",
    "HNumber",
    "CheckResult",
    "MAX_CAYLEY_DICKSON_LEVEL",
    "PSD_EPS",
    "builtin_algebra",
    "cayley_dickson",
    "clifford2",
    "natural_conjugation",
    "identity_involution",
    "parse_algebra",
    "parse_involution",
    "add",
    "scale",
    "mul",
    "apply_involution",
    "bilinear_B",
    "associator_re",
    "abs_value",
    "gram_matrix",
    "is_reverse_involution",
    "is_reahn",
    "is_positive_semidefinite",
    "algebra_to_json",
    "algebra_from_json",
]

MAX_CAYLEY_DICKSON_LEVEL = 6
PSD_EPS = 1e-10

BUILTIN_NAMES = ("R", "C", "U", "D", "Q", "T", "O")


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, (float, np.floating)):
        return Fraction(float(value))
    raise TypeError(f"cannot use {value!r} as a structure constant")


@dataclass(frozen=True, eq=False)
class AlgebraSpec:
    """A hypercomplex number system: dimension plus structure-constant tensor."""

    name: str
    exact: np.ndarray = field(repr=False)
    c: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        t = np.asarray(self.exact, dtype=object)
        if t.ndim != 3 or not (t.shape[0] == t.shape[1] == t.shape[2]) or t.shape[0] < 1:
            raise ValueError(f"structure tensor must be dim x dim x dim, got {t.shape}")
        t = np.vectorize(_as_fraction, otypes=[object])(t)
        dim = t.shape[0]
        eye = [Fraction(int(i == j)) for i in range(dim) for j in range(dim)]
        eye = np.array(eye, dtype=object).reshape(dim, dim)
        if not (np.all(t[0] == eye) and np.all(t[:, 0, :] == eye)):
            raise ValueError("unit 0 must be a two-sided multiplicative identity")
        t.flags.writeable = False
        object.__setattr__(self, "exact", t)
        cf = t.astype(np.float64)
        cf.flags.writeable = False
        object.__setattr__(self, "c", cf)

    @property
    def dim(self) -> int:
        return self.exact.shape[0]

    @property
    def is_integral(self) -> bool:
        return all(x.denominator == 1 for x in self.exact.flat)

    def __eq__(self, other):
        if not isinstance(other, AlgebraSpec):
            return NotImplemented
        return self.dim == other.dim and bool(np.all(self.exact == other.exact))

    def __hash__(self):
        return hash((self.dim, tuple(self.exact.flat)))

    def unit(self, mu: int) -> "HNumber":
        coeffs = [Fraction(0)] * self.dim
        coeffs[mu] = Fraction(1)
        return HNumber(self, coeffs)

    def one(self) -> "HNumber":
        return self.unit(0)

    def zero(self) -> "HNumber":
        return HNumber(self, [Fraction(0)] * self.dim)

    def number(self, *coeffs) -> "HNumber":
        return HNumber(self, coeffs)

    # array kernels used by the simulator; no algebra bookkeeping
    def mul_coeffs(self, p: np.ndarray, q: np.ndarray) -> np.ndarray:
        """Product of coefficient arrays; broadcasts over leading axes."""
        if np.asarray(p).dtype == object or np.asarray(q).dtype == object:
            return np.einsum("...a,...b,abk->...k", p, q, self.exact)
        return np.einsum("...a,...b,abk->...k", p, q, self.c)

    def re_tensor(self) -> np.ndarray:
        return self.c[:, :, 0]


@dataclass(frozen=True)
class InvolutionSpec:
    """Diagonal sign map ``tau(p)_k = signs[k] * p_k``."""

    signs: tuple
    name: str = ""

    def __post_init__(self):
        signs = tuple(int(s) for s in self.signs)
        if not signs or any(s not in (-1, 1) for s in signs):
            raise ValueError(f"involution signs must be +1/-1, got {self.signs}")
        if signs[0] != 1:
            raise ValueError("an involution must fix the real unit (signs[0] = +1)")
        object.__setattr__(self, "signs", signs)

    @property
    def dim(self) -> int:
        return len(self.signs)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.signs, dtype=np.float64)

    def __call__(self, p: "HNumber") -> "HNumber":
        return apply_involution(self, p)


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a law check; falsy when the law fails, with a witness."""

    holds: bool
    witness: tuple | None = None

    def __bool__(self):
        return self.holds


class HNumber:
    """Coefficient vector ``(p_0, ..., p_n)`` bound to an algebra.

    Coefficients given as ints or Fractions are kept exact (object array);
    anything else is stored as float64.
    """

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: AlgebraSpec, coeffs):
        if isinstance(coeffs, np.ndarray):
            arr = coeffs
        else:
            coeffs = list(coeffs)
            if all(isinstance(x, (int, Fraction, np.integer)) for x in coeffs):
                arr = np.array([Fraction(int(x)) if not isinstance(x, Fraction) else x
                                for x in coeffs], dtype=object)
            else:
                arr = np.array(coeffs, dtype=np.float64)
        if arr.dtype != object:
            arr = arr.astype(np.float64)
        if arr.shape != (algebra.dim,):
            raise ValueError(f"expected {algebra.dim} coefficients, got shape {arr.shape}")
        self.algebra = algebra
        self.coeffs = arr

    @property
    def exact(self) -> bool:
        return self.coeffs.dtype == object

    @property
    def real(self):
        return self.coeffs[0]

    def to_float(self) -> "HNumber":
        return HNumber(self.algebra, self.coeffs.astype(np.float64))

    def _check(self, other: "HNumber"):
        if not isinstance(other, HNumber):
            raise TypeError(f"expected HNumber, got {type(other).__name__}")
        if other.algebra != self.algebra:
            raise ValueError(f"algebra mismatch: {self.algebra.name} vs {other.algebra.name}")

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        self._check(other)
        return HNumber(self.algebra, self.coeffs - other.coeffs)

    def __neg__(self):
        return HNumber(self.algebra, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, HNumber):
            return mul(self, other)
        return scale(other, self)

    def __rmul__(self, other):
        return scale(other, self)

    def __eq__(self, other):
        if not isinstance(other, HNumber):
            return NotImplemented
        return self.algebra == other.algebra and bool(np.all(self.coeffs == other.coeffs))

    def __hash__(self):
        return hash((self.algebra, tuple(self.coeffs)))

    def __abs__(self):
        return abs_value(self)

    def __repr__(self):
        return f"HNumber({self.algebra.name}, {format_coeffs(self.coeffs)})"


def format_coeffs(coeffs: Sequence) -> str:
    """``[1, -1, 0, 2]`` -> ``"1 - e1 + 2e3"``."""
    out = ""
    for k, x in enumerate(coeffs):
        if x == 0:
            continue
        sign = "-" if x < 0 else "+"
        mag = -x if x < 0 else x
        if k == 0:
            term = f"{mag}"
        else:
            term = f"e{k}" if mag == 1 else f"{mag}e{k}"
        out += (f" {sign} " if out else ("-" if sign == "-" else "")) + term
    return out or "0"


# ---------------------------------------------------------------- arithmetic

def add(p: HNumber, q: HNumber) -> HNumber:
    p._check(q)
    return HNumber(p.algebra, p.coeffs + q.coeffs)


def scale(alpha, p: HNumber) -> HNumber:
    if isinstance(alpha, Fraction) or (isinstance(alpha, int) and p.exact):
        return HNumber(p.algebra, np.array([Fraction(alpha) * x for x in p.coeffs], dtype=object))
    return HNumber(p.algebra, float(alpha) * p.coeffs.astype(np.float64))


def mul(p: HNumber, q: HNumber) -> HNumber:
    """Bilinear product through the structure tensor."""
    p._check(q)
    return HNumber(p.algebra, p.algebra.mul_coeffs(p.coeffs, q.coeffs))


def apply_involution(tau: InvolutionSpec, p: HNumber) -> HNumber:
    if tau.dim != p.algebra.dim:
        raise ValueError(f"involution of dim {tau.dim} applied to dim {p.algebra.dim}")
    if p.exact:
        return HNumber(p.algebra, np.array([s * x for s, x in zip(tau.signs, p.coeffs)], dtype=object))
    return HNumber(p.algebra, tau.array * p.coeffs)


def bilinear_B(spec: AlgebraSpec, tau: InvolutionSpec, p: HNumber, q: HNumber):
    """``Re(tau(p) q)``."""
    if p.algebra != spec:
        raise ValueError("p does not belong to the given algebra")
    p._check(q)
    return mul(apply_involution(tau, p), q).coeffs[0]


def associator_re(spec: AlgebraSpec, p: HNumber, q: HNumber, r: HNumber):
    """Real part of ``(pq)r - p(qr)``."""
    if p.algebra != spec:
        raise ValueError("p does not belong to the given algebra")
    p._check(q)
    p._check(r)
    return (mul(mul(p, q), r) - mul(p, mul(q, r))).coeffs[0]


def abs_value(p: HNumber) -> float:
    return float(np.sqrt(np.sum(p.coeffs.astype(np.float64) ** 2)))


def gram_matrix(spec: AlgebraSpec, tau: InvolutionSpec, exact: bool = False) -> np.ndarray:
    """``G[mu, nu] = B(e_mu, e_nu) = signs[mu] * c[mu, nu, 0]``."""
    _check_dims(spec, tau)
    if exact:
        signs = np.array([Fraction(s) for s in tau.signs], dtype=object)
        return signs[:, None] * spec.exact[:, :, 0]
    return tau.array[:, None] * spec.c[:, :, 0]


def _check_dims(spec: AlgebraSpec, tau: InvolutionSpec):
    if spec.dim != tau.dim:
        raise ValueError(f"involution dim {tau.dim} does not match algebra dim {spec.dim}")


# ---------------------------------------------------------------- law checks

def _exact_tensor(spec: AlgebraSpec) -> np.ndarray:
    if spec.is_integral:
        return np.array([[[x.numerator for x in row] for row in plane] for plane in spec.exact],
                        dtype=np.int64)
    return spec.exact


def is_reverse_involution(spec: AlgebraSpec, tau: InvolutionSpec) -> CheckResult:
    """Check ``tau(e_mu e_nu) = tau(e_nu) tau(e_mu)`` on every basis pair.

    Diagonal +-1 maps are linear and self-inverse by construction, so only
    the antihomomorphism law needs checking; bilinearity makes basis pairs
    sufficient.
    """
    if spec.dim != tau.dim:
        return CheckResult(False, ("dimension mismatch",))
    t = _exact_tensor(spec)
    lam = np.array(tau.signs, dtype=np.int64)
    lhs = t * lam[None, None, :]
    rhs = np.transpose(t, (1, 0, 2)) * (lam[:, None] * lam[None, :])[:, :, None]
    bad = np.argwhere(np.any(lhs != rhs, axis=2))
    if len(bad):
        mu, nu = (int(v) for v in bad[0])
        return CheckResult(False, (mu, nu))
    return CheckResult(True)


def is_reahn(spec: AlgebraSpec, tau: InvolutionSpec) -> CheckResult:
    """Check ``Re((e_mu e_nu) e_rho - e_mu (e_nu e_rho)) = 0`` on all basis triples.

    The involution must be a reverse-involution; if not, the witness is the
    offending basis pair prefixed by ``"tau"``.
    """
    rev = is_reverse_involution(spec, tau)
    if not rev:
        return CheckResult(False, ("tau",) + tuple(rev.witness))
    t = _exact_tensor(spec)
    re = t[:, :, 0]
    # (e_mu e_nu) e_rho -> sum_k t[mu,nu,k] re[k,rho]
    left = np.tensordot(t, re, axes=([2], [0]))
    # e_mu (e_nu e_rho) -> sum_k re[mu,k] t[nu,rho,k]
    right = np.tensordot(re, t, axes=([1], [2]))
    bad = np.argwhere(left != right)
    if len(bad):
        return CheckResult(False, tuple(int(v) for v in bad[0]))
    return CheckResult(True)


def _exact_psd(a: list[list[Fraction]]) -> bool:
    """Symmetric rational PSD test by diagonal pivoting."""
    a = [row[:] for row in a]
    n = len(a)
    active = list(range(n))
    while active:
        if any(a[i][i] < 0 for i in active):
            return False
        pivots = [i for i in active if a[i][i] > 0]
        if not pivots:
            return all(a[i][j] == 0 for i in active for j in active)
        p = pivots[0]
        active.remove(p)
        for i in active:
            f = a[i][p] / a[p][p]
            if f:
                for j in active:
                    a[i][j] -= f * a[p][j]
    return True


def is_positive_semidefinite(spec: AlgebraSpec, tau: InvolutionSpec, exact: bool | None = None) -> bool:
    """Whether ``B(p, p) >= 0`` for every ``p``.

    Only the symmetric part of the Gram matrix enters the quadratic form.
    Exact rational pivoting is used by default; ``exact=False`` falls back
    to an eigenvalue threshold of ``-PSD_EPS``.
    """
    if exact is None:
        exact = True
    if exact:
        g = gram_matrix(spec, tau, exact=True)
        half = Fraction(1, 2)
        sym = [[(g[i, j] + g[j, i]) * half for j in range(spec.dim)] for i in range(spec.dim)]
        return _exact_psd(sym)
    g = gram_matrix(spec, tau)
    sym = 0.5 * (g + g.T)
    return bool(np.linalg.eigvalsh(sym).min() >= -PSD_EPS)


# ---------------------------------------------------------------- constructors

def _from_products(name: str, dim: int, products: dict) -> AlgebraSpec:
    """Build a tensor from ``{(mu, nu): {k: coeff}}`` over imaginary units."""
    t = np.empty((dim, dim, dim), dtype=object)
    t.fill(Fraction(0))
    for a in range(dim):
        t[0, a, a] = Fraction(1)
        t[a, 0, a] = Fraction(1)
    for (mu, nu), terms in products.items():
        for k, v in terms.items():
            t[mu, nu, k] = Fraction(v)
    return AlgebraSpec(name, t)


def clifford2(kappa: int) -> AlgebraSpec:
    """Two-dimensional algebra with ``i^2 = kappa``; -1, 0, +1 give C, D, U."""
    if kappa not in (-1, 0, 1):
        raise ValueError(f"kappa must be -1, 0 or +1, got {kappa}")
    return _from_products(f"cl2:{kappa}", 2, {(1, 1): {0: kappa}})


def _cd_units(level: int) -> tuple[np.ndarray, np.ndarray]:
    """Signed-unit multiplication table of the level-``level`` Cayley-Dickson algebra.

    Returns ``(index, sign)`` with ``e_a e_b = sign[a, b] * e_index[a, b]``.
    Basis of level k+1: ``e_a = (e_a, 0)`` and ``e_{n+a} = (0, conj(e_a))``
    for ``a < n = 2**k``.  Taking the conjugate in the second half makes
    levels 1 and 2 reproduce the usual complex and quaternion tables.
    """
    idx = np.zeros((1, 1), dtype=np.int64)
    sgn = np.ones((1, 1), dtype=np.int64)
    for _ in range(level):
        n = idx.shape[0]
        conj = np.where(np.arange(n) == 0, 1, -1)  # conj(e_a) = conj[a] e_a
        new_idx = np.zeros((2 * n, 2 * n), dtype=np.int64)
        new_sgn = np.zeros((2 * n, 2 * n), dtype=np.int64)
        for a in range(2 * n):
            for b in range(2 * n):
                if a < n and b < n:
                    # (x1, 0)(x2, 0) = (x1 x2, 0)
                    half, c, s = 0, idx[a, b], sgn[a, b]
                elif a < n:
                    # (x1, 0)(0, y2) = (0, conj(x1) y2), y2 = conj[b'] e_b'
                    b2 = b - n
                    half, c, s = 1, idx[a, b2], conj[a] * conj[b2] * sgn[a, b2]
                elif b < n:
                    # (0, y1)(x2, 0) = (0, x2 y1)
                    a2 = a - n
                    half, c, s = 1, idx[b, a2], conj[a2] * sgn[b, a2]
                else:
                    # (0, y1)(0, y2) = (-y2 conj(y1), 0); conj(y1) = e_a'
                    a2, b2 = a - n, b - n
                    half, c, s = 0, idx[b2, a2], -conj[b2] * sgn[b2, a2]
                if half == 0:
                    new_idx[a, b], new_sgn[a, b] = c, s
                else:
                    # (0, e_c) = conj[c] * e_{n+c}
                    new_idx[a, b], new_sgn[a, b] = n + c, s * conj[c]
        idx, sgn = new_idx, new_sgn
    return idx, sgn


def cayley_dickson(k: int) -> AlgebraSpec:
    """Cayley-Dickson algebra of dimension ``2**k`` (k=1 complex, 2 quaternions, 3 octonions)."""
    if not 0 <= k <= MAX_CAYLEY_DICKSON_LEVEL:
        raise ValueError(f"Cayley-Dickson level must be in 0..{MAX_CAYLEY_DICKSON_LEVEL}, got {k}")
    idx, sgn = _cd_units(k)
    dim = 2 ** k
    t = np.empty((dim, dim, dim), dtype=object)
    t.fill(Fraction(0))
    for a in range(dim):
        for b in range(dim):
            t[a, b, idx[a, b]] = Fraction(int(sgn[a, b]))
    return AlgebraSpec(f"cd:{k}", t)


def natural_conjugation(spec_or_dim) -> InvolutionSpec:
    dim = spec_or_dim if isinstance(spec_or_dim, int) else spec_or_dim.dim
    return InvolutionSpec((1,) + (-1,) * (dim - 1), "natural")


def identity_involution(spec_or_dim) -> InvolutionSpec:
    dim = spec_or_dim if isinstance(spec_or_dim, int) else spec_or_dim.dim
    return InvolutionSpec((1,) * dim, "identity")


TESSARINE_INVOLUTION = InvolutionSpec((1, -1, 1, -1), "tessarine")


def _tessarines() -> AlgebraSpec:
    # i=1, j=2, k=3
    return _from_products("T", 4, {
        (1, 1): {0: -1}, (1, 2): {3: 1}, (1, 3): {2: -1},
        (2, 1): {3: 1}, (2, 2): {0: 1}, (2, 3): {1: 1},
        (3, 1): {2: -1}, (3, 2): {1: 1}, (3, 3): {0: -1},
    })


def _quaternions() -> AlgebraSpec:
    return _from_products("Q", 4, {
        (1, 1): {0: -1}, (1, 2): {3: 1}, (1, 3): {2: -1},
        (2, 1): {3: -1}, (2, 2): {0: -1}, (2, 3): {1: 1},
        (3, 1): {2: 1}, (3, 2): {1: -1}, (3, 3): {0: -1},
    })


def _renamed(spec: AlgebraSpec, name: str) -> AlgebraSpec:
    return AlgebraSpec(name, spec.exact)


def builtin_algebra(name: str) -> tuple[AlgebraSpec, InvolutionSpec]:
    """One of R, C, U, D, Q, T, O with its default involution."""
    if name == "R":
        spec = _renamed(cayley_dickson(0), "R")
        return spec, identity_involution(spec)
    if name == "C":
        spec = _renamed(clifford2(-1), "C")
    elif name == "U":
        spec = _renamed(clifford2(1), "U")
    elif name == "D":
        spec = _renamed(clifford2(0), "D")
    elif name == "Q":
        spec = _quaternions()
    elif name == "T":
        return _tessarines(), TESSARINE_INVOLUTION
    elif name == "O":
        spec = _renamed(cayley_dickson(3), "O")
    else:
        raise ValueError(f"unknown algebra {name!r}; expected one of {', '.join(BUILTIN_NAMES)}")
    return spec, natural_conjugation(spec)


def parse_algebra(ident: str) -> tuple[AlgebraSpec, InvolutionSpec]:
    """Resolve ``R..O``, ``cd:k`` or ``cl2:kappa`` to an algebra and default involution."""
    ident = str(ident).strip()
    if ident in BUILTIN_NAMES:
        return builtin_algebra(ident)
    head, sep, arg = ident.partition(":")
    if sep:
        try:
            value = int(arg)
        except ValueError:
            raise ValueError(f"bad algebra id {ident!r}") from None
        if head == "cd":
            spec = cayley_dickson(value)
            return spec, natural_conjugation(spec)
        if head == "cl2":
            spec = clifford2(value)
            return spec, natural_conjugation(spec)
    raise ValueError(f"unknown algebra {ident!r}")


def parse_involution(ident, spec: AlgebraSpec) -> InvolutionSpec:
    """``"natural"``, ``"identity"``, ``"tessarine"``, ``"default"`` or an explicit sign list."""
    if isinstance(ident, (list, tuple)):
        tau = InvolutionSpec(tuple(ident))
    elif ident == "natural":
        tau = natural_conjugation(spec)
    elif ident == "identity":
        tau = identity_involution(spec)
    elif ident == "tessarine":
        tau = TESSARINE_INVOLUTION
    elif ident in (None, "default"):
        return parse_algebra(spec.name)[1] if _is_known(spec.name) else natural_conjugation(spec)
    else:
        raise ValueError(f"unknown involution {ident!r}")
    _check_dims(spec, tau)
    return tau


def _is_known(name: str) -> bool:
    try:
        parse_algebra(name)
    except ValueError:
        return False
    return True


# ---------------------------------------------------------------- JSON

def algebra_to_json(spec: AlgebraSpec, tau: InvolutionSpec | None = None) -> str:
    doc = {
        "name": spec.name,
        "dim": spec.dim,
        "constants": [f"{x.numerator}/{x.denominator}" for x in spec.exact.flat],
        "involution": list((tau or natural_conjugation(spec)).signs),
    }
    return json.dumps(doc)


def algebra_from_json(text: str) -> tuple[AlgebraSpec, InvolutionSpec]:
    doc = json.loads(text)
    unknown = set(doc) - {"name", "dim", "constants", "involution"}
    if unknown:
        raise ValueError(f"unknown fields in algebra document: {sorted(unknown)}")
    dim = int(doc["dim"])
    constants = doc["constants"]
    if len(constants) != dim ** 3:
        raise ValueError(f"expected {dim ** 3} constants, got {len(constants)}")
    t = np.array([Fraction(s) for s in constants], dtype=object).reshape(dim, dim, dim)
    spec = AlgebraSpec(doc.get("name", ""), t)
    return spec, InvolutionSpec(tuple(doc["involution"]))


def basis_products(spec: AlgebraSpec) -> Iterable[tuple[int, int, list]]:
    for mu in range(spec.dim):
        for nu in range(spec.dim):
            yield mu, nu, list(spec.exact[mu, nu])
