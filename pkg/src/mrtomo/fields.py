"""Grid-sampled, compactly supported symmetric tensor fields.

Fields live on uniform Cartesian grids; the working domain is the ball
inscribed in the grid box (with a safety margin), and every node outside
that ball is pinned to zero.  This encodes the extension-by-zero of
coefficients vanishing on the domain boundary, and keeps interpolation
and stencil evaluation away from the box edge.

The tensor value dimension may exceed the grid dimension: Fourier
slicing along the first axis produces fields on R^{n-1} whose values are
still symmetric tensors on R^n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import tensors
from .tensors import SymTensor, sym_dim
from .util import radial_cutoff


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid over a box, with an inscribed support ball."""

    n: int
    shape: tuple
    origin: np.ndarray
    spacing: np.ndarray
    support_radius: float

    def __post_init__(self):
        shape = tuple(int(s) for s in np.atleast_1d(self.shape))
        origin = np.asarray(self.origin, dtype=float).reshape(self.n)
        spacing = np.asarray(self.spacing, dtype=float).reshape(self.n)
        origin.setflags(write=False)
        spacing.setflags(write=False)
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "origin", origin)
        object.__setattr__(self, "spacing", spacing)
        if len(shape) != self.n or any(s < 5 for s in shape):
            raise ValueError("grid needs n axes with at least 5 points each")
        if np.any(spacing <= 0):
            raise ValueError("spacing must be positive")
        if self.support_radius <= 0:
            raise ValueError("support radius must be positive")
        # ball strictly inside the box, two-cell margin for stencils/interpolation
        c = self.center
        for a in range(self.n):
            lo = origin[a] + 2 * spacing[a]
            hi = origin[a] + (shape[a] - 3) * spacing[a]
            if c[a] - self.support_radius < lo - 1e-12 or c[a] + self.support_radius > hi + 1e-12:
                raise ValueError("support ball must sit inside the grid with a 2-cell margin")

    @classmethod
    def cube(cls, n=3, points=33, half_width=1.3, support_radius=1.0):
        """Symmetric box [-half_width, half_width]^n with `points` nodes per axis."""
        spacing = 2.0 * half_width / (points - 1)
        return cls(n, (points,) * n, -half_width * np.ones(n), spacing * np.ones(n), support_radius)

    @property
    def center(self) -> np.ndarray:
        return self.origin + 0.5 * (np.array(self.shape) - 1) * self.spacing

    @property
    def num_nodes(self) -> int:
        return int(np.prod(self.shape))

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    def axis(self, a: int) -> np.ndarray:
        return self.origin[a] + self.spacing[a] * np.arange(self.shape[a])

    def nodes(self) -> np.ndarray:
        """All node coordinates, shape (num_nodes, n), C-order."""
        axes = [self.axis(a) for a in range(self.n)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)

    def drop_first_axis(self) -> "GridSpec":
        """The (n-1)-dimensional grid of the remaining axes (Fourier slicing)."""
        return GridSpec(self.n - 1, self.shape[1:], self.origin[1:], self.spacing[1:],
                        self.support_radius)

    def outside_ball_mask(self) -> np.ndarray:
        """Boolean node mask, True where |x - center| > support_radius."""
        r2 = ((self.nodes() - self.center) ** 2).sum(axis=1)
        return (r2 > self.support_radius**2).reshape(self.shape)

    def interior_node_indices(self, shrink=0.0) -> np.ndarray:
        """Flat indices of nodes with |x - center| <= support_radius - shrink."""
        r2 = ((self.nodes() - self.center) ** 2).sum(axis=1)
        return np.nonzero(r2 <= (self.support_radius - shrink) ** 2)[0]


@dataclass(frozen=True)
class TensorFieldGrid:
    """One SymTensor(tensor_n, m) per grid node; zero outside the support ball."""

    spec: GridSpec
    m: int
    values: np.ndarray
    tensor_n: int = 0  # 0 means "same as grid dimension"

    def __post_init__(self):
        tn = self.tensor_n or self.spec.n
        object.__setattr__(self, "tensor_n", tn)
        ncomp = sym_dim(tn, self.m)
        vals = np.asarray(self.values, dtype=np.complex128).reshape(self.spec.shape + (ncomp,))
        if not np.all(np.isfinite(vals.ravel().view(np.float64))):
            raise ValueError("non-finite field values")
        outside = self.spec.outside_ball_mask()
        if np.any(vals[outside] != 0):
            worst = np.max(np.abs(vals[outside]))
            raise ValueError(f"field not zero outside the support ball (max {worst:.3e})")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def zeros(cls, spec: GridSpec, m: int, tensor_n: int = 0) -> "TensorFieldGrid":
        tn = tensor_n or spec.n
        return cls(spec, m, np.zeros(spec.shape + (sym_dim(tn, m),)), tn)

    @property
    def ncomp(self) -> int:
        return sym_dim(self.tensor_n, self.m)

    def flat_values(self) -> np.ndarray:
        return self.values.reshape(self.spec.num_nodes, self.ncomp)

    def value_at_node(self, idx) -> SymTensor:
        return SymTensor(self.tensor_n, self.m, self.values[tuple(idx)])

    def norm(self) -> float:
        """Discrete L2 norm (cell volume x multiplicity-weighted tensor norm)."""
        w = tensors.multiplicities(self.tensor_n, self.m)
        s = np.sum(w * np.abs(self.flat_values()) ** 2)
        return math.sqrt(s * self.spec.cell_volume)

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values))) if self.values.size else 0.0


def add(f1: TensorFieldGrid, f2: TensorFieldGrid) -> TensorFieldGrid:
    _check_same_layout(f1, f2)
    return TensorFieldGrid(f1.spec, f1.m, f1.values + f2.values, f1.tensor_n)


def scale(f: TensorFieldGrid, c) -> TensorFieldGrid:
    return TensorFieldGrid(f.spec, f.m, f.values * c, f.tensor_n)


def lift_i_delta(f: TensorFieldGrid) -> TensorFieldGrid:
    """Nodewise i_delta; raises the tensor order by two."""
    mat = tensors.i_delta_matrix(f.tensor_n, f.m)
    return TensorFieldGrid(f.spec, f.m + 2, f.values @ mat.T, f.tensor_n)


def lift_j_delta(f: TensorFieldGrid) -> TensorFieldGrid:
    """Nodewise j_delta; zero scalar field for m in {0, 1}."""
    if f.m <= 1:
        return TensorFieldGrid.zeros(f.spec, 0, f.tensor_n)
    mat = tensors.j_delta_matrix(f.tensor_n, f.m)
    return TensorFieldGrid(f.spec, f.m - 2, f.values @ mat.T, f.tensor_n)


def lift_decompose(f: TensorFieldGrid) -> tuple[TensorFieldGrid, TensorFieldGrid]:
    """Nodewise trace-free splitting f = g + i_delta(v), j_delta(g) = 0."""
    c = tensors.trace_free_coefficient(f.tensor_n, f.m)
    v = scale(lift_j_delta(f), c)
    g = add(f, scale(lift_i_delta(v), -1.0))
    return g, v


def _check_same_layout(f1: TensorFieldGrid, f2: TensorFieldGrid):
    if f1.spec != f2.spec or f1.m != f2.m or f1.tensor_n != f2.tensor_n:
        raise ValueError("field layout mismatch")


# ---------------------------------------------------------------------------
# Sampling and phantom generators


def sample(generator, spec: GridSpec) -> TensorFieldGrid:
    """Node-exact samples of a closed-form generator, zero enforced off-ball."""
    pts = spec.nodes()
    vals = np.asarray(generator(pts), dtype=np.complex128)
    ncomp = sym_dim(getattr(generator, "tensor_n", spec.n), generator.m)
    vals = vals.reshape(spec.num_nodes, ncomp)
    outside = spec.outside_ball_mask().ravel()
    peak = np.max(np.abs(vals)) if vals.size else 0.0
    bad = np.max(np.abs(vals[outside])) if outside.any() else 0.0
    if bad > 1e-14 * max(peak, 1e-300):
        raise ValueError(f"generator support exceeds the ball (|value| up to {bad:.3e} outside)")
    vals = vals.copy()
    vals[outside] = 0.0
    return TensorFieldGrid(spec, generator.m,
                           vals.reshape(spec.shape + (ncomp,)),
                           getattr(generator, "tensor_n", spec.n))


@dataclass(frozen=True)
class GaussianBump:
    """Smooth compactly supported S^m phantom: cutoff Gaussian times a constant tensor.

    value(x) = exp(-|x-center|^2 / width^2) * chi(|x-center|) * weights,
    with chi == 1 inside flat_radius and == 0 beyond cutoff_radius.
    """

    m: int
    n: int
    center: np.ndarray
    width: float
    weights: np.ndarray  # canonical components of the constant direction tensor
    cutoff_radius: float
    flat_fraction: float = 0.6
    tensor_n: int = 0

    def __post_init__(self):
        if self.width <= 0:
            raise ValueError("degenerate width")
        tn = self.tensor_n or self.n
        object.__setattr__(self, "tensor_n", tn)
        center = np.asarray(self.center, dtype=float).reshape(self.n)
        weights = np.asarray(self.weights, dtype=np.complex128).reshape(sym_dim(tn, self.m))
        center.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "weights", weights)

    def scalar_profile(self, pts: np.ndarray) -> np.ndarray:
        r = np.linalg.norm(np.atleast_2d(pts) - self.center, axis=1)
        flat = self.flat_fraction * self.cutoff_radius
        return np.exp(-(r / self.width) ** 2) * radial_cutoff(r, flat, self.cutoff_radius)

    def __call__(self, pts: np.ndarray) -> np.ndarray:
        prof = self.scalar_profile(pts)
        return prof[:, None] * self.weights[None, :]

    def deriv_bound(self) -> float:
        """Crude sup bound on |grad value|, for quadrature-error estimates."""
        flat = self.flat_fraction * self.cutoff_radius
        gauss = 2.0 * self.cutoff_radius / self.width**2
        cut = 4.0 / max(self.cutoff_radius - flat, 1e-12)
        return float(np.max(np.abs(self.weights))) * (gauss + cut)


def gaussian_bump_tensor(m, n, center, width, weights, cutoff_radius,
                         flat_fraction=0.6, tensor_n=0) -> GaussianBump:
    """Phantom generator factory; see GaussianBump."""
    return GaussianBump(m, n, np.asarray(center, dtype=float), width,
                        np.asarray(weights, dtype=complex), cutoff_radius,
                        flat_fraction, tensor_n)


# ---------------------------------------------------------------------------
# Interpolation


def eval_interp_many(f: TensorFieldGrid, pts: np.ndarray) -> np.ndarray:
    """Componentwise multilinear interpolation at pts (N, d); zero outside the box."""
    spec = f.spec
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    npts = pts.shape[0]
    u = (pts - spec.origin) / spec.spacing
    inside = np.all((u >= 0.0) & (u <= np.array(spec.shape) - 1.0), axis=1)
    i0 = np.clip(np.floor(u).astype(np.intp), 0, np.array(spec.shape) - 2)
    frac = u - i0
    vals = f.flat_values()
    strides = np.array([int(np.prod(spec.shape[a + 1:])) for a in range(spec.n)])
    base = i0 @ strides
    out = np.zeros((npts, f.ncomp), dtype=np.complex128)
    for corner in range(2**spec.n):
        offs = [(corner >> a) & 1 for a in range(spec.n)]
        w = np.ones(npts)
        for a, o in enumerate(offs):
            w = w * (frac[:, a] if o else 1.0 - frac[:, a])
        idx = base + int(np.dot(offs, strides))
        out += w[:, None] * vals[idx]
    out[~inside] = 0.0
    return out


def eval_interp(f: TensorFieldGrid, x: np.ndarray) -> SymTensor:
    """Multilinear interpolation at a single point."""
    return SymTensor(f.tensor_n, f.m, eval_interp_many(f, np.asarray(x, dtype=float)[None, :])[0])


# ---------------------------------------------------------------------------
# Fourier slicing in x_1


@dataclass(frozen=True)
class SlicedField:
    """Fourier transform in x_1 at one frequency: a field on R^{n-1} with S^m(R^n) values."""

    lam: float
    field: TensorFieldGrid

    @property
    def spec(self) -> GridSpec:
        return self.field.spec

    @property
    def m(self) -> int:
        return self.field.m


def fourier_slice_x1(f: TensorFieldGrid, lam: float) -> SlicedField:
    """Trapezoid quadrature of exp(-i lam x_1) f(x_1, y') over the x_1 axis."""
    x1 = f.spec.axis(0)
    h = f.spec.spacing[0]
    phase = np.exp(-1j * lam * x1)
    w = np.full(len(x1), h)
    w[0] *= 0.5
    w[-1] *= 0.5
    sliced = np.tensordot(phase * w, f.values, axes=(0, 0))
    spec2 = f.spec.drop_first_axis()
    # slicing can leave roundoff-size values at nodes outside the (n-1)-ball
    mask = spec2.outside_ball_mask()
    sliced = sliced.copy()
    sliced[mask] = 0.0
    return SlicedField(float(lam), TensorFieldGrid(spec2, f.m, sliced, f.tensor_n))
