"""Exact algebra of complex symmetric tensors on R^n.

Symmetric m-tensors are stored once per non-decreasing multi-index
(i_1 <= ... <= i_m), lexicographically ordered, so the full component
u_{i_1...i_m} is permutation-invariant by construction.  All operations
here are quadrature-free rational maps of the components: symmetrization,
the scalar product summed over full multi-indices, symmetric metric
multiplication i_delta, its dual trace j_delta, and the trace-free
splitting f = g + i_delta(v) with j_delta(g) = 0.

Orders are capped at 5: the pipeline only ever lifts an order-3 tensor
by i_delta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement, permutations, product

import numpy as np
from scipy.linalg import null_space

MAX_ORDER = 5


class TensorOrderError(ValueError):
    """Raised when an operation would exceed the supported tensor order."""


def sym_dim(n: int, m: int) -> int:
    """Number of canonical components of S^m(R^n): C(n+m-1, m)."""
    return math.comb(n + m - 1, m)


@lru_cache(maxsize=None)
def sym_indices(n: int, m: int) -> tuple[tuple[int, ...], ...]:
    """Non-decreasing multi-indices of length m over {0..n-1}, lexicographic."""
    return tuple(combinations_with_replacement(range(n), m))


@lru_cache(maxsize=None)
def sym_position(n: int, m: int) -> dict[tuple[int, ...], int]:
    return {idx: p for p, idx in enumerate(sym_indices(n, m))}


@lru_cache(maxsize=None)
def multiplicities(n: int, m: int) -> np.ndarray:
    """Distinct permutations per canonical index (weights of the full-index sum)."""
    out = np.empty(sym_dim(n, m))
    for p, idx in enumerate(sym_indices(n, m)):
        counts: dict[int, int] = {}
        for i in idx:
            counts[i] = counts.get(i, 0) + 1
        w = math.factorial(m)
        for c in counts.values():
            w //= math.factorial(c)
        out[p] = w
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def full_to_canonical(n: int, m: int) -> np.ndarray:
    """Flat array of length n^m mapping each full multi-index to its canonical slot."""
    pos = sym_position(n, m)
    out = np.empty(n**m, dtype=np.intp)
    for j, idx in enumerate(product(range(n), repeat=m)):
        out[j] = pos[tuple(sorted(idx))]
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def index_array(n: int, m: int) -> np.ndarray:
    """Canonical indices as an (sym_dim, m) integer array (empty for m = 0)."""
    arr = np.array(sym_indices(n, m), dtype=np.intp).reshape(sym_dim(n, m), m)
    arr.setflags(write=False)
    return arr


def _check_order(m: int):
    if m > MAX_ORDER:
        raise TensorOrderError(f"tensor order {m} exceeds supported maximum {MAX_ORDER}")
    if m < 0:
        raise TensorOrderError(f"negative tensor order {m}")


@dataclass(frozen=True)
class SymTensor:
    """Dense symmetric m-tensor over R^n with complex canonical components."""

    n: int
    m: int
    comps: np.ndarray

    def __post_init__(self):
        _check_order(self.m)
        comps = np.asarray(self.comps, dtype=np.complex128).reshape(sym_dim(self.n, self.m))
        if not np.all(np.isfinite(comps.ravel().view(np.float64))):
            raise ValueError("non-finite tensor components")
        object.__setattr__(self, "comps", comps)

    @classmethod
    def zeros(cls, n: int, m: int) -> "SymTensor":
        return cls(n, m, np.zeros(sym_dim(n, m), dtype=np.complex128))

    @classmethod
    def basis(cls, n: int, m: int, pos: int) -> "SymTensor":
        c = np.zeros(sym_dim(n, m), dtype=np.complex128)
        c[pos] = 1.0
        return cls(n, m, c)

    def get(self, *idx: int) -> complex:
        """Full-index accessor u_{i_1...i_m}; invariant under index permutations."""
        if len(idx) != self.m:
            raise ValueError(f"expected {self.m} indices, got {len(idx)}")
        return complex(self.comps[sym_position(self.n, self.m)[tuple(sorted(idx))]])

    def as_full(self) -> np.ndarray:
        """Expand to the full (n,)*m component array."""
        full = self.comps[full_to_canonical(self.n, self.m)]
        return full.reshape((self.n,) * self.m)

    def norm(self) -> float:
        """Frobenius norm induced by the full-index scalar product."""
        return math.sqrt(max(0.0, inner(self, self).real))

    def __add__(self, other: "SymTensor") -> "SymTensor":
        if (self.n, self.m) != (other.n, other.m):
            raise ValueError("shape mismatch")
        return SymTensor(self.n, self.m, self.comps + other.comps)

    def __sub__(self, other: "SymTensor") -> "SymTensor":
        if (self.n, self.m) != (other.n, other.m):
            raise ValueError("shape mismatch")
        return SymTensor(self.n, self.m, self.comps - other.comps)

    def __mul__(self, c) -> "SymTensor":
        return SymTensor(self.n, self.m, self.comps * c)

    __rmul__ = __mul__


@dataclass(frozen=True)
class RawTensor:
    """General (not necessarily symmetric) m-tensor, full component array."""

    n: int
    m: int
    comps: np.ndarray

    def __post_init__(self):
        _check_order(self.m)
        comps = np.asarray(self.comps, dtype=np.complex128).reshape((self.n,) * self.m)
        if not np.all(np.isfinite(comps.ravel().view(np.float64))):
            raise ValueError("non-finite tensor components")
        object.__setattr__(self, "comps", comps)

    @classmethod
    def zeros(cls, n: int, m: int) -> "RawTensor":
        return cls(n, m, np.zeros((n,) * m, dtype=np.complex128))

    def get(self, *idx: int) -> complex:
        return complex(self.comps[idx])


def delta(n: int) -> SymTensor:
    """Euclidean metric as a symmetric 2-tensor."""
    c = np.zeros(sym_dim(n, 2), dtype=np.complex128)
    pos = sym_position(n, 2)
    for i in range(n):
        c[pos[(i, i)]] = 1.0
    return SymTensor(n, 2, c)


def symmetrize(u: RawTensor) -> SymTensor:
    """Canonical projection onto S^m: average over all index permutations."""
    _check_order(u.m)
    n, m = u.n, u.m
    if m == 0:
        return SymTensor(n, 0, u.comps.reshape(1))
    acc = np.zeros((n,) * m, dtype=np.complex128)
    for perm in permutations(range(m)):
        acc += u.comps.transpose(perm)
    acc /= math.factorial(m)
    # symmetric full array: read off canonical slots
    idx = index_array(n, m)
    comps = acc[tuple(idx[:, a] for a in range(m))]
    return SymTensor(n, m, comps)


def partial_symmetrize(u: RawTensor, p: int) -> RawTensor:
    """Average over permutations of the first p indices only."""
    if not 1 <= p <= u.m:
        raise ValueError(f"p = {p} out of range 1..{u.m}")
    acc = np.zeros_like(u.comps)
    rest = tuple(range(p, u.m))
    for perm in permutations(range(p)):
        acc += u.comps.transpose(perm + rest)
    return RawTensor(u.n, u.m, acc / math.factorial(p))


def inner(u: SymTensor, v: SymTensor) -> complex:
    """Scalar product summed over all full multi-indices: <u, v> = sum u conj(v)."""
    if (u.n, u.m) != (v.n, v.m):
        raise ValueError("shape mismatch")
    w = multiplicities(u.n, u.m)
    return complex(np.sum(w * u.comps * np.conj(v.comps)))


def tensor_product(u: SymTensor, v: SymTensor) -> RawTensor:
    """(u (x) v)_{i_1..i_{k+m}} = u_{i_1..i_k} v_{i_{k+1}..i_{k+m}}."""
    _check_order(u.m + v.m)
    if u.n != v.n:
        raise ValueError("dimension mismatch")
    full = np.multiply.outer(u.as_full(), v.as_full())
    return RawTensor(u.n, u.m + v.m, full)


def i_delta(u: SymTensor) -> SymTensor:
    """Symmetric multiplication by the metric: sigma(u (x) delta), order m+2."""
    _check_order(u.m + 2)
    return _apply_matrix(i_delta_matrix(u.n, u.m), u, u.m + 2)


def j_delta(u: SymTensor) -> SymTensor:
    """Trace over one index pair, order m-2; zero scalar for m in {0, 1}."""
    if u.m <= 1:
        return SymTensor.zeros(u.n, 0)
    return _apply_matrix(j_delta_matrix(u.n, u.m), u, u.m - 2)


def _apply_matrix(mat: np.ndarray, u: SymTensor, m_out: int) -> SymTensor:
    return SymTensor(u.n, m_out, mat @ u.comps)


@lru_cache(maxsize=None)
def i_delta_matrix(n: int, m: int) -> np.ndarray:
    """Matrix of i_delta on canonical components, shape (dim(m+2), dim(m))."""
    _check_order(m + 2)
    dlt = delta(n)
    cols = []
    for p in range(sym_dim(n, m)):
        e = SymTensor.basis(n, m, p)
        cols.append(symmetrize(tensor_product(e, dlt)).comps)
    mat = np.array(cols).T.real.copy()
    mat.setflags(write=False)
    return mat


@lru_cache(maxsize=None)
def j_delta_matrix(n: int, m: int) -> np.ndarray:
    """Matrix of j_delta on canonical components, shape (dim(m-2), dim(m))."""
    if m <= 1:
        raise ValueError("j_delta matrix needs m >= 2")
    pos_in = sym_position(n, m)
    mat = np.zeros((sym_dim(n, m - 2), sym_dim(n, m)))
    for p, idx in enumerate(sym_indices(n, m - 2)):
        for k in range(n):
            mat[p, pos_in[tuple(sorted(idx + (k, k)))]] += 1.0
    mat.setflags(write=False)
    return mat


def trace_free_decompose(f: SymTensor) -> tuple[SymTensor, SymTensor]:
    """Split f in S^m, m in {2, 3}, as f = g + i_delta(v) with j_delta(g) = 0.

    The potential part is explicit: v = 3/(n+2) j_delta(f) for m = 3 and
    v = 1/n j_delta(f) for m = 2.
    """
    if f.m not in (2, 3):
        raise TensorOrderError(f"trace-free decomposition supports m in {{2,3}}, got {f.m}")
    c = trace_free_coefficient(f.n, f.m)
    v = c * j_delta(f)
    g = f - i_delta(v)
    return g, v


def trace_free_coefficient(n: int, m: int) -> float:
    """Coefficient c with v = c * j_delta(f) in the trace-free splitting."""
    if m == 3:
        return 3.0 / (n + 2)
    if m == 2:
        return 1.0 / n
    raise TensorOrderError(f"no trace-free coefficient for m = {m}")


@lru_cache(maxsize=None)
def trace_free_basis(n: int, m: int) -> np.ndarray:
    """Orthonormal basis (columns) of ker j_delta in canonical components.

    Orthonormal with respect to the multiplicity-weighted scalar product,
    so coefficient 2-norms match tensor L2 norms.
    """
    if m <= 1:
        b = np.eye(sym_dim(n, m))
        b.setflags(write=False)
        return b
    w = np.sqrt(multiplicities(n, m))
    # null space in the weighted coordinates y = w * x keeps orthonormality meaningful
    mat = j_delta_matrix(n, m) / w[None, :]
    ns = null_space(mat)
    basis = ns / w[:, None]
    basis.setflags(write=False)
    return basis


def contract_with_direction(u: SymTensor, z: np.ndarray) -> complex:
    """Sum over all full multi-indices of u_{i_1..i_m} z_{i_1}...z_{i_m}."""
    z = np.asarray(z, dtype=np.complex128)
    if z.shape != (u.n,):
        raise ValueError(f"direction must have shape ({u.n},)")
    return complex(u.comps @ direction_monomials(u.n, u.m, z))


def direction_monomials(n: int, m: int, z: np.ndarray) -> np.ndarray:
    """Multiplicity-weighted monomials z_{i_1}...z_{i_m} per canonical index.

    contract_with_direction(u, z) == u.comps @ direction_monomials(n, m, z).
    """
    z = np.asarray(z, dtype=np.complex128)
    if m == 0:
        return np.ones(1, dtype=np.complex128)
    idx = index_array(n, m)
    return multiplicities(n, m) * np.prod(z[idx], axis=1)


def commutation_factors(n: int, m: int) -> tuple[float, float]:
    """Coefficients (a, b) in j_delta i_delta = a*E + b*i_delta j_delta on S^m."""
    a = 2.0 * (n + 2 * m) / ((m + 1) * (m + 2))
    b = m * (m - 1) / ((m + 1) * (m + 2))
    return a, b
