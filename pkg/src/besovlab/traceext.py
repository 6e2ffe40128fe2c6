"""Trace onto the hyperplane x_n = 0 and its Poisson-type right inverses.

On the grid the trace is a finite band-limited sum, so the limit defining it
degenerates to exact termwise restriction; the per-level increments of the
partial sums are kept as a convergence diagnostic in the result rather than
thrown away.

The extension K builds an n-dimensional function from v(x') by tensoring the
sliced band pieces of v with dilated one-dimensional profiles whose value at
x_n = 0 is exactly 1 on the lattice (see EtaProfiles), which makes
trace(K v) = v hold to machine precision.  The representation-dependent
extension E does the same with a caller-supplied band decomposition in place
of the canonical band pieces.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapacityError
from .grid import (
    GridFunction,
    GridSpec,
    apply_multiplier,
    lp_norm,
    restrict_hyperplane,
    tensor_product,
)
from .partition import DyadicPartition, EtaProfiles, band_project
from .spaces import BandDecomposition, check_spectrum_inside

__all__ = ["TraceResult", "trace", "extend_K", "extend_E"]


@dataclass(frozen=True)
class TraceResult:
    """Trace value plus the per-level partial-sum increments in a target norm."""

    value: GridFunction
    partial_sum_tail: tuple


def trace(f: GridFunction, P: DyadicPartition, tail_norm=None) -> TraceResult:
    """gamma_0 f = sum_j restrict(band_project(f, j)) with tail diagnostics.

    `tail_norm` maps an (n-1)-dimensional GridFunction to a float and defaults
    to the sup norm.  For band-limited f this equals restrict_hyperplane(f).
    """
    if f.ndim < 2:
        raise ValueError("trace needs dimension >= 2")
    if f.spec != P.spec:
        raise ValueError("function grid does not match partition grid")
    if tail_norm is None:
        tail_norm = lambda g: lp_norm(g, "inf")  # noqa: E731
    target = f.spec.drop_last()
    acc = np.zeros(target.shape, dtype=np.complex128)
    increments = []
    for j in range(P.levels + 1):
        piece = restrict_hyperplane(band_project(f, P, j))
        increments.append(float(tail_norm(piece)))
        acc = acc + piece.values
    return TraceResult(GridFunction(target, acc), tuple(increments))


def _check_profile_capacity(E: EtaProfiles, n_points: int, base_scale: int, j: int):
    if j >= 1 and E.max_level(n_points, base_scale) < j:
        raise CapacityError(
            f"eta level {j} exceeds the last-axis Nyquist bound ({n_points} points)"
        )


def extend_K(v: GridFunction, P: DyadicPartition, E: EtaProfiles) -> GridFunction:
    """K v = sum_j profile_j(x_n) . F^{-1}[phi_j(., 0) F v](x').

    `P` is the n-dimensional partition of the target grid; the slice
    phi_j(., 0) is taken from it directly rather than re-derived, and the
    spectrum of v must sit inside its top ball.
    """
    spec_n = P.spec
    if spec_n.ndim < 2:
        raise ValueError("extension target must have dimension >= 2")
    if v.spec != spec_n.drop_last():
        raise ValueError("v must live on the target grid minus its last axis")
    a_prime, _ = P.anisotropy.split()
    check_spectrum_inside(v, a_prime, P.levels)
    n_last = spec_n.shape[-1]
    acc = np.zeros(spec_n.shape, dtype=np.complex128)
    for j in range(P.levels + 1):
        slice_j = P.bands[j][..., 0]
        if not np.any(slice_j):
            continue
        _check_profile_capacity(E, n_last, spec_n.base_scale, j)
        piece = apply_multiplier(v, slice_j)
        prof = E.profile(n_last, spec_n.base_scale, j)
        acc = acc + tensor_product(piece, prof).values
    return GridFunction(spec_n, acc)


def extend_E(d: BandDecomposition, E: EtaProfiles, spec_n: GridSpec) -> GridFunction:
    """E f = sum_j profile_j(x_n) . h_j(x') for a given representation f = sum h_j."""
    if spec_n.ndim < 2:
        raise ValueError("extension target must have dimension >= 2")
    n_last = spec_n.shape[-1]
    acc = np.zeros(spec_n.shape, dtype=np.complex128)
    for j, h in zip(d.levels, d.parts):
        if h.spec != spec_n.drop_last():
            raise ValueError("decomposition parts must live on the target grid minus its last axis")
        _check_profile_capacity(E, n_last, spec_n.base_scale, int(j))
        prof = E.profile(n_last, spec_n.base_scale, int(j))
        acc = acc + tensor_product(h, prof).values
    return GridFunction(spec_n, acc)
