"""Anisotropic position lattices and their rectangle cells on the torus.

At level nu the lattice puts S_i(nu) = L_i * 2^{nu a_i} sample points on axis
i (chart positions m_i / S_i with the torus identified with [0,1)^n), and the
cell of index m is the rectangle of side 1/S_i centred at the sample point.
Cells therefore have measure prod_i 1/S_i = const * 2^{-nu |a|} and aspect
ratio 2^{-nu a_i}, which is all the dyadic-rectangle machinery needs; the
per-axis base counts L_i are an overall linear change of variables.

Two instances matter in practice: the plain lattice (L_i = 1, atoms and
sequence norms, cell measure exactly 2^{-nu |a|}) and the oversampled lattice
used by the analysis/synthesis transform, where L_i is large enough for exact
band reconstruction from samples.

Non-integer weights make the ideal counts non-integers; counts are then
snapped to the nearest power of two and the relative snapping error is
reported through `snapping_error`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .aniso import Anisotropy
from .errors import CapacityError
from .grid import GridSpec

__all__ = ["AnisoLattice", "plain_lattice", "transform_lattice"]


def _pow2_at_least(x: float) -> int:
    return 1 << max(0, int(np.ceil(np.log2(max(x, 1.0)) - 1e-9)))


@dataclass(frozen=True)
class AnisoLattice:
    """Level-indexed anisotropic sampling lattices over a fixed grid."""

    spec: GridSpec
    anisotropy: Anisotropy
    levels: int
    base_counts: tuple

    def __post_init__(self):
        if self.anisotropy.n != self.spec.ndim:
            raise ValueError("anisotropy dimension does not match grid")
        bc = tuple(int(b) for b in self.base_counts)
        object.__setattr__(self, "base_counts", bc)
        for b, s in zip(bc, self.spec.shape):
            if b < 1 or (b & (b - 1)) != 0:
                raise ValueError(f"base counts must be powers of two >= 1, got {bc}")
            if b > s:
                raise ValueError(f"base count {b} exceeds axis size {s}")
        # every level must still fit the grid
        self.counts(self.levels)

    def counts(self, nu: int) -> tuple:
        """Sample points per axis at level nu (powers of two, dividing the axis)."""
        if not 0 <= nu <= self.levels:
            raise CapacityError(f"lattice level {nu} outside 0..{self.levels}")
        out = []
        for b, w, s in zip(self.base_counts, self.anisotropy.weights, self.spec.shape):
            ideal = b * 2.0 ** (nu * w)
            # nearest power of two; exact for integer weights
            c = 1 << max(0, int(round(np.log2(ideal))))
            if c > s:
                raise CapacityError(
                    f"level {nu} needs {c} cells on an axis of {s} grid points"
                )
            out.append(c)
        return tuple(out)

    def snapping_error(self, nu: int) -> float:
        """Max relative gap between ideal counts L_i 2^{nu a_i} and the snapped ones."""
        err = 0.0
        for b, w, c in zip(self.base_counts, self.anisotropy.weights, self.counts(nu)):
            ideal = b * 2.0 ** (nu * w)
            err = max(err, abs(c - ideal) / ideal)
        return err

    def cell_measure(self, nu: int) -> float:
        """Normalised torus measure of one level-nu cell."""
        return 1.0 / float(np.prod(self.counts(nu)))

    def sample_grid_indices(self, nu: int) -> tuple:
        """Grid index of the sample point m/S per axis (exact when S | N)."""
        out = []
        for c, s in zip(self.counts(nu), self.spec.shape):
            idx = np.rint(np.arange(c) * (s / c)).astype(np.int64) % s
            out.append(idx)
        return tuple(out)

    def cell_index_maps(self, nu: int) -> tuple:
        """Per-axis map grid index -> cell index for the centred cells."""
        out = []
        for c, s in zip(self.counts(nu), self.spec.shape):
            t = np.arange(s)
            # cell m spans ((m - 1/2)/S, (m + 1/2)/S]; in grid units boundaries
            # sit at (m +- 1/2) * s/c
            m = np.floor_divide(2 * t * c + s, 2 * s) % c
            out.append(m.astype(np.int64))
        return tuple(out)

    def expand(self, nu: int, cell_values: np.ndarray) -> np.ndarray:
        """Piecewise-constant grid field taking cell_values on each level-nu cell."""
        counts = self.counts(nu)
        if cell_values.shape != counts:
            raise ValueError(f"cell array shape {cell_values.shape} != counts {counts}")
        maps = self.cell_index_maps(nu)
        return cell_values[np.ix_(*maps)]

    def gamma_touching_last(self, nu: int, c_dilation: float) -> tuple:
        """Indices m_n whose c-dilated cell meets the hyperplane x_n = 0."""
        cn = self.counts(nu)[-1]
        out = []
        for m in range(cn):
            center = m / cn
            d = min(center, 1.0 - center) if m else 0.0
            if d <= c_dilation / (2.0 * cn) + 1e-12:
                out.append(m)
        return tuple(out)


def plain_lattice(spec: GridSpec, a: Anisotropy, levels: int) -> AnisoLattice:
    """Unit-density lattice: cells of side 2^{-nu a_i} and measure 2^{-nu |a|}."""
    return AnisoLattice(spec, a, levels, (1,) * spec.ndim)


def transform_lattice(spec: GridSpec, a: Anisotropy, levels: int, margin: float = 1.0) -> AnisoLattice:
    """Oversampled lattice for exact band reconstruction from level-nu samples.

    Band nu occupies |k_i| <= M 2^{(nu+1) a_i} and the synthesis window
    extends to M (4 * 2^nu)^{a_i}; alias-free sampling therefore needs
    S_i >= M (2^{a_i} + 4^{a_i}) 2^{nu a_i}, rounded up to a power of two.
    """
    M = spec.base_scale
    bc = []
    for w in a.weights:
        need = margin * M * (2.0**w + 4.0**w)
        bc.append(_pow2_at_least(need))
    return AnisoLattice(spec, a, levels, tuple(bc))
