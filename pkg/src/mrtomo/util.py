"""Shared numerical helpers: smooth cutoffs, direction sets, FD weights."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np


def smooth_step(s):
    """C^inf transition, 0 for s <= 0 and 1 for s >= 1.

    Built from f(t) = exp(-1/t): step = f(s) / (f(s) + f(1-s)).
    """
    s = np.asarray(s, dtype=float)
    out = np.empty_like(s)
    lo = s <= 0.0
    hi = s >= 1.0
    mid = ~(lo | hi)
    out[lo] = 0.0
    out[hi] = 1.0
    sm = s[mid]
    fa = np.exp(-1.0 / sm)
    fb = np.exp(-1.0 / (1.0 - sm))
    out[mid] = fa / (fa + fb)
    return out


def radial_cutoff(r, r_flat, r_cut):
    """Smooth radial cutoff: 1 for r <= r_flat, 0 for r >= r_cut."""
    if not r_cut > r_flat >= 0.0:
        raise ValueError("need 0 <= r_flat < r_cut")
    return smooth_step((r_cut - np.asarray(r, dtype=float)) / (r_cut - r_flat))


def fibonacci_sphere(count):
    """Near-uniform direction set on S^2 (golden-angle lattice), shape (count, 3)."""
    if count < 1:
        raise ValueError("count must be positive")
    i = np.arange(count)
    z = (2.0 * i + 1.0) / count - 1.0
    rho = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    phi = i * math.pi * (3.0 - math.sqrt(5.0))
    return np.stack([rho * np.cos(phi), rho * np.sin(phi), z], axis=1)


def circle_directions(count, offset=0.0):
    """Uniform unit vectors on S^1, shape (count, 2)."""
    th = offset + 2.0 * math.pi * np.arange(count) / count
    return np.stack([np.cos(th), np.sin(th)], axis=1)


def sphere_directions(dim, count, offset=0.0):
    """Direction set on S^{dim-1}; Fibonacci lattice for dim 3, uniform for dim 2."""
    if dim == 3:
        return fibonacci_sphere(count)
    if dim == 2:
        return circle_directions(count, offset)
    if dim == 1:
        return np.array([[1.0], [-1.0]])[:count]
    raise ValueError(f"no direction set for dim {dim}")


def fd_weights(x0, xs, order):
    """Fornberg finite-difference weights for d^order/dx^order at x0 on nodes xs."""
    xs = np.asarray(xs, dtype=float)
    npts = len(xs)
    if order >= npts:
        raise ValueError("need more nodes than derivative order")
    c = np.zeros((npts, order + 1))
    c[0, 0] = 1.0
    c1 = 1.0
    c4 = xs[0] - x0
    for i in range(1, npts):
        mn = min(i, order)
        c2 = 1.0
        c5 = c4
        c4 = xs[i] - x0
        for j in range(i):
            c3 = xs[i] - xs[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c[:, order]


def gauss_legendre(a, b, npts):
    """Gauss-Legendre nodes and weights on [a, b]."""
    x, w = np.polynomial.legendre.leggauss(npts)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


def parallel_map(fn, items, threads=1):
    """Map preserving input order; thread pool only when threads > 1."""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def orthonormal_frame_from(first):
    """Complete a unit vector to an orthonormal basis (rows), deterministic."""
    first = np.asarray(first, dtype=float)
    n = first.size
    nrm = np.linalg.norm(first)
    if nrm == 0.0:
        raise ValueError("zero vector has no frame")
    basis = [first / nrm]
    # seed with the axes least aligned with what we have so far
    for ax in np.argsort(np.abs(first)):
        if len(basis) == n:
            break
        v = np.zeros(n)
        v[ax] = 1.0
        for b in basis:
            v = v - (v @ b) * b
        nv = np.linalg.norm(v)
        if nv > 1e-10:
            basis.append(v / nv)
    return np.array(basis)
