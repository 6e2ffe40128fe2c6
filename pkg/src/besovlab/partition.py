"""Smooth anisotropic dyadic partition of unity on the frequency lattice.

The generator is a radial profile in |xi|_a: psi(xi) = theta(|xi|_a) with
theta == 1 on [0, lo] and theta == 0 on [hi, inf), glued with the standard
exp(-1/t) transition, so psi is a lattice sampling of a C-infinity bump.
Band j >= 1 is the telescoped difference

    phi_j(xi) = psi(2^{-j a} xi) - psi(2^{-(j-1) a} xi),

evaluated through the exact homogeneity |2^{-j a} xi|_a = 2^{-j} |xi|_a, so a
single cached radius field serves every level.  The default plateau is
(lo, hi) = (1, 2); custom plateaus with 1 <= lo < hi <= 2 keep every support
and telescoping property and are used by the narrow-band experiment family.

Partitions are immutable after build; band projections are pure and can run
concurrently for different levels.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.fft

from .aniso import Anisotropy
from .errors import CapacityError
from .grid import (
    GridFunction,
    GridSpec,
    apply_multiplier,
    freq_integers,
    radius_lattice,
)

__all__ = [
    "smooth_step",
    "plateau_cutoff",
    "open_bump",
    "DyadicPartition",
    "build_partition",
    "band_project",
    "reconstruct",
    "EtaProfiles",
]


def smooth_step(u: np.ndarray) -> np.ndarray:
    """C-infinity monotone step: 0 for u <= 0, 1 for u >= 1."""
    u = np.asarray(u, dtype=float)
    num = np.zeros_like(u)
    den = np.zeros_like(u)
    inside = (u > 0.0) & (u < 1.0)
    ui = u[inside]
    num[inside] = np.exp(-1.0 / ui)
    den[inside] = num[inside] + np.exp(-1.0 / (1.0 - ui))
    out = np.where(u >= 1.0, 1.0, 0.0)
    out[inside] = num[inside] / den[inside]
    return out


def plateau_cutoff(r: np.ndarray, lo: float, hi: float) -> np.ndarray:
    """Radial cutoff: exactly 1 for r <= lo, exactly 0 for r >= hi, smooth between."""
    if not lo < hi:
        raise ValueError(f"plateau needs lo < hi, got ({lo}, {hi})")
    return 1.0 - smooth_step((np.asarray(r, dtype=float) - lo) / (hi - lo))


def open_bump(u: np.ndarray) -> np.ndarray:
    """C-infinity bump supported strictly inside (0, 1), peak value 1 at u = 1/2."""
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    inside = (u > 0.0) & (u < 1.0)
    ui = u[inside]
    out[inside] = np.exp(4.0 - 1.0 / (ui * (1.0 - ui)))
    return out


@dataclass(frozen=True)
class DyadicPartition:
    """Bands phi_0..phi_J plus the residual tail multiplier 1 - sum phi_j."""

    spec: GridSpec
    anisotropy: Anisotropy
    levels: int
    plateau: tuple
    bands: tuple = field(repr=False)
    tail: np.ndarray = field(repr=False)
    radius: np.ndarray = field(repr=False)

    @property
    def J(self) -> int:
        return self.levels

    def ball_mask(self, level: int) -> np.ndarray:
        """Lattice mask of the closed ball {|xi|_a <= 2^level}."""
        return self.radius <= float(2**level)

    def annulus_mask(self, j: int, slack: float = 0.0) -> np.ndarray:
        """Support annulus of phi_j: 2^{j-1} <= |xi|_a <= 2^{j+1} (ball for j=0)."""
        hi = 2.0 ** (j + 1) * (1.0 + slack)
        if j == 0:
            return self.radius <= hi
        lo = 2.0 ** (j - 1) * (1.0 - slack)
        return (self.radius >= lo) & (self.radius <= hi)


def build_partition(
    spec: GridSpec,
    a: Anisotropy,
    levels: int | None = None,
    plateau: tuple = (1.0, 2.0),
    require_full_ball: bool = True,
) -> DyadicPartition:
    """Construct the dyadic partition up to level `levels` (default: grid maximum).

    With require_full_ball the ball {|xi|_a <= 2^levels} must fit the centred
    lattice on every axis; tensor-adapted experiment grids opt out and instead
    guarantee per-function spectral admissibility.
    """
    lo, hi = float(plateau[0]), float(plateau[1])
    if not (1.0 <= lo < hi <= 2.0):
        raise ValueError(f"plateau radii must satisfy 1 <= lo < hi <= 2, got {plateau}")
    if levels is None or require_full_ball:
        J_grid = spec.max_level(a)
        if levels is None:
            levels = J_grid
        if require_full_ball and levels > J_grid:
            raise CapacityError(
                f"level {levels} exceeds the grid capacity J={J_grid} "
                f"for shape {spec.shape}, base scale {spec.base_scale}"
            )
    levels = int(levels)
    if levels < 0:
        raise ValueError("levels must be >= 0")
    R = radius_lattice(spec, a)
    psi_prev = plateau_cutoff(R, lo, hi)  # psi(xi) itself
    bands = [psi_prev]
    for j in range(1, levels + 1):
        psi_j = plateau_cutoff(R / float(2**j), lo, hi)
        bands.append(psi_j - psi_prev)
        psi_prev = psi_j
    tail = 1.0 - psi_prev
    # The tail must vanish on the whole closed ball of radius 2^levels; the
    # plateau guarantees it analytically, but assert rather than assume.
    inside = R <= float(2**levels)
    resid = float(np.abs(np.where(inside, tail, 0.0)).max()) if inside.any() else 0.0
    if resid > 1e-12:
        raise AssertionError(f"partition tail does not vanish inside 2^J: {resid:.3e}")
    for arr in bands:
        arr.setflags(write=False)
    tail.setflags(write=False)
    return DyadicPartition(
        spec=spec,
        anisotropy=a,
        levels=levels,
        plateau=(lo, hi),
        bands=tuple(bands),
        tail=tail,
        radius=R,
    )


def band_project(f: GridFunction, P: DyadicPartition, j: int) -> GridFunction:
    """F^{-1}[phi_j . F f], the piece of f with |xi|_a near 2^j."""
    if f.spec != P.spec:
        raise ValueError("function grid does not match partition grid")
    if not 0 <= j <= P.levels:
        raise ValueError(f"band index {j} outside 0..{P.levels}")
    return apply_multiplier(f, P.bands[j])


def reconstruct(f: GridFunction, P: DyadicPartition) -> GridFunction:
    """Sum of all band projections; equals f when the spectrum sits inside 2^J."""
    total = np.add.reduce([b for b in P.bands])
    return apply_multiplier(f, total)


@dataclass(frozen=True)
class EtaProfiles:
    """One-dimensional frequency profiles eta_0 and eta for the extensions.

    eta_0 is supported in |xi_n| < 1; eta is supported where |xi_n|^{1/a_n}
    lies strictly inside (support_lo, support_hi), default (1, 2).  Each
    grid-level profile is renormalised by its own lattice sum so the value at
    x_n = 0 is exactly 1; this removes the systematic bias a continuum
    normalisation would leave in gamma_0 K = I.
    """

    a_n: float
    support: tuple = (1.0, 2.0)

    def __post_init__(self):
        lo, hi = float(self.support[0]), float(self.support[1])
        if not (1.0 <= lo < hi <= 2.0):
            raise ValueError(f"eta support must satisfy 1 <= lo < hi <= 2, got {self.support}")
        object.__setattr__(self, "support", (lo, hi))
        if self.a_n < 1.0:
            raise ValueError("a_n must be >= 1")

    def eta_hat(self, n_points: int, base_scale: int, j: int) -> np.ndarray:
        """Samples of eta_j = eta(2^{-j a_n} .) on the axis lattice (unnormalised).

        Raises CapacityError when the dilated support spills past Nyquist.
        """
        lo, hi = self.support
        xi = freq_integers(n_points).astype(float) / base_scale
        if j == 0:
            r = np.abs(xi)
            return plateau_cutoff(r, 0.45, 0.9)  # supp eta_0 inside ]-1, 1[
        scale = 2.0 ** (-j * self.a_n)
        top = base_scale * hi**self.a_n * 2.0 ** (j * self.a_n)
        if top > n_points // 2 - 1:
            raise CapacityError(
                f"eta level {j} needs |k| up to {top:.0f} on an axis of {n_points} points"
            )
        r = np.abs(scale * xi) ** (1.0 / self.a_n)
        return open_bump((r - lo) / (hi - lo))

    def profile(self, n_points: int, base_scale: int, j: int) -> GridFunction:
        """Normalised spatial profile: value exactly 1 at x_n = 0.

        This is the lattice version of 2^{-j a_n} (F_1^{-1} eta_j).
        """
        hat = self.eta_hat(n_points, base_scale, j)
        total = hat.sum()
        if total == 0.0:
            raise CapacityError(
                f"eta level {j} has no lattice support on an axis of {n_points} points "
                f"at base scale {base_scale}"
            )
        vals = scipy.fft.ifft(hat / total) * n_points
        return GridFunction(GridSpec((n_points,), base_scale), vals)

    def max_level(self, n_points: int, base_scale: int) -> int:
        """Largest usable eta level on the given axis."""
        hi = self.support[1]
        room = (n_points // 2 - 1) / (base_scale * hi**self.a_n)
        if room < 1.0:
            raise CapacityError("axis too small for eta level 1")
        return int(np.floor(np.log2(room) / self.a_n + 1e-12))
