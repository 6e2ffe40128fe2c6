"""Periodic grid functions and their discrete Fourier transform contract.

Model: the torus [0, 2pi)^n sampled on a uniform grid with N_i points per
axis (powers of two).  Waves are e^{i <k, x>} with integer k; the physical
frequency is xi = k / M where M is the grid's base scale, so the anisotropic
unit ball |xi|_a <= 1 holds about M^n lattice points.

Conventions chosen so every oracle is simple:
  * forward transform divides by the point count, so a pure wave has the
    single coefficient 1 at its own frequency;
  * L_p norms use the normalised counting measure (1/#grid) sum |f|^p, so a
    pure wave has L_p norm 1 for every p, including p < 1 and p = inf;
  * Plancherel: the grid L_2 norm of f equals the plain l_2 norm of its
    coefficients.

GridFunction and SpectrumFunction are immutable after construction and all
operations are pure, so concurrent use needs no locking; scipy's FFT is
invoked per call with no shared mutable plan state.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.fft

from .aniso import Anisotropy, INF, as_exponent, is_inf
from .errors import CapacityError

__all__ = [
    "GridSpec",
    "GridFunction",
    "SpectrumFunction",
    "forward_transform",
    "inverse_transform",
    "apply_multiplier",
    "restrict_hyperplane",
    "translate",
    "tensor_product",
    "lp_norm",
    "pure_wave",
    "freq_integers",
    "radius_lattice",
]


def _is_pow2(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class GridSpec:
    """Uniform torus grid: points per axis (powers of two >= 8) and base scale."""

    shape: tuple
    base_scale: int = 8

    def __post_init__(self):
        shape = tuple(int(s) for s in self.shape)
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "base_scale", int(self.base_scale))
        if len(shape) < 1:
            raise ValueError("grid needs at least one axis")
        for s in shape:
            if not _is_pow2(s) or s < 8:
                raise ValueError(f"points per axis must be a power of two >= 8, got {s}")
        if self.base_scale < 4:
            raise ValueError(f"base_scale must be >= 4, got {self.base_scale}")

    @property
    def ndim(self) -> int:
        return len(self.shape)

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))

    def drop_last(self) -> "GridSpec":
        if self.ndim < 2:
            raise ValueError("cannot drop an axis from a one-dimensional grid")
        return GridSpec(self.shape[:-1], self.base_scale)

    def max_level(self, a: Anisotropy) -> int:
        """Largest J whose full ball {|xi|_a <= 2^J} fits the centred lattice.

        Axis i holds integer frequencies |k_i| <= N_i/2 - 1 and the ball's
        semi-axis there is M 2^{J a_i}.  Functions with tensor-adapted
        spectra may use higher levels via explicit opt-out at partition
        build time.
        """
        if a.n != self.ndim:
            raise ValueError("anisotropy dimension does not match grid")
        best = None
        for s, w in zip(self.shape, a.weights):
            room = (s // 2 - 1) / self.base_scale
            if room < 1.0:
                raise CapacityError(
                    f"axis of size {s} cannot hold the unit ball at base scale {self.base_scale}"
                )
            j = int(np.floor(np.log2(room) / w + 1e-12))
            best = j if best is None else min(best, j)
        return best


@lru_cache(maxsize=64)
def freq_integers(n_points: int) -> np.ndarray:
    """Integer frequencies along one axis in FFT layout: 0..N/2-1, -N/2..-1."""
    k = np.fft.fftfreq(n_points, d=1.0 / n_points)
    k = np.rint(k).astype(np.int64)
    k.setflags(write=False)
    return k


def _xi_axes(spec: GridSpec):
    """Physical frequency xi = k/M per axis, broadcastable over the lattice."""
    n = spec.ndim
    axes = []
    for i, s in enumerate(spec.shape):
        v = freq_integers(s).astype(float) / spec.base_scale
        shp = [1] * n
        shp[i] = s
        axes.append(v.reshape(shp))
    return axes


@lru_cache(maxsize=8)
def _radius_lattice_cached(shape: tuple, base_scale: int, weights: tuple) -> np.ndarray:
    spec = GridSpec(shape, base_scale)
    a = Anisotropy(weights)
    axes = _xi_axes(spec)
    w = a.as_array()
    if all(v == 1.0 for v in weights):
        acc = np.zeros(spec.shape)
        for ax in axes:
            acc = acc + ax * ax
        out = np.sqrt(acc)
    elif set(weights) <= {1.0, 2.0}:
        # With weights in {1,2}: A t^2 + B = t^4 for A = sum_{a_i=1} xi_i^2,
        # B = sum_{a_i=2} xi_i^2, hence t^2 = (A + sqrt(A^2 + 4B)) / 2.
        A = np.zeros(spec.shape)
        B = np.zeros(spec.shape)
        for ax, wi in zip(axes, w):
            if wi == 1.0:
                A = A + ax * ax
            else:
                B = B + ax * ax
        out = np.sqrt(0.5 * (A + np.sqrt(A * A + 4.0 * B)))
    else:
        pts = np.stack(np.meshgrid(*[ax.ravel() for ax in axes], indexing="ij"), axis=-1)
        from .aniso import aniso_distance

        out = aniso_distance(a, pts.reshape(-1, a.n)).reshape(spec.shape)
    out.setflags(write=False)
    return out


def radius_lattice(spec: GridSpec, a: Anisotropy) -> np.ndarray:
    """|xi|_a evaluated on the whole frequency lattice (FFT layout), cached."""
    if a.n != spec.ndim:
        raise ValueError("anisotropy dimension does not match grid")
    return _radius_lattice_cached(spec.shape, spec.base_scale, a.weights)


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=np.complex128)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class GridFunction:
    """Complex samples of a periodic function over the full grid."""

    spec: GridSpec
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.shape != self.spec.shape:
            raise ValueError(f"sample shape {v.shape} does not match grid {self.spec.shape}")
        object.__setattr__(self, "values", _freeze(v))

    @property
    def ndim(self) -> int:
        return self.spec.ndim


@dataclass(frozen=True)
class SpectrumFunction:
    """Coefficients over the integer frequency lattice.

    Stored in FFT layout (frequency 0 first); `centered()` returns the
    fftshifted view over the centred lattice.
    """

    spec: GridSpec
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs)
        if c.shape != self.spec.shape:
            raise ValueError(f"coefficient shape {c.shape} does not match grid {self.spec.shape}")
        object.__setattr__(self, "coeffs", _freeze(c))

    def centered(self) -> np.ndarray:
        return np.fft.fftshift(self.coeffs)


def forward_transform(f: GridFunction) -> SpectrumFunction:
    """Analysis: coefficient at k is the mean of f(x) e^{-i k x} over the grid."""
    return SpectrumFunction(f.spec, scipy.fft.fftn(f.values) / f.spec.size)


def inverse_transform(F: SpectrumFunction) -> GridFunction:
    """Synthesis: f(x) = sum_k c_k e^{i k x}."""
    return GridFunction(F.spec, scipy.fft.ifftn(F.coeffs) * F.spec.size)


def apply_multiplier(f: GridFunction, m: np.ndarray) -> GridFunction:
    """Pointwise frequency-domain multiplier: F^{-1}[m . F f].

    `m` is an array over the lattice in FFT layout (real or complex),
    broadcastable against the coefficient array.
    """
    c = scipy.fft.fftn(f.values)
    c *= m
    return GridFunction(f.spec, scipy.fft.ifftn(c))


def restrict_hyperplane(f: GridFunction) -> GridFunction:
    """Samples on the hyperplane x_n = 0; drops the last axis."""
    if f.ndim < 2:
        raise ValueError("hyperplane restriction needs dimension >= 2")
    return GridFunction(f.spec.drop_last(), f.values[..., 0])


def translate(f: GridFunction, cells: int) -> GridFunction:
    """Shift along the last axis by an integer number of grid cells:
    (tau_h f)(x', x_n) = f(x', x_n - h)."""
    return GridFunction(f.spec, np.roll(f.values, int(cells), axis=-1))


def tensor_product(g: GridFunction, h: GridFunction) -> GridFunction:
    """(g (x) h)(x', x_n) = g(x') h(x_n); factors must share the base scale."""
    if g.spec.base_scale != h.spec.base_scale:
        raise ValueError("tensor factors must share base_scale")
    vals = np.multiply.outer(g.values, h.values)
    return GridFunction(GridSpec(g.spec.shape + h.spec.shape, g.spec.base_scale), vals)


def _lp_of_values(values: np.ndarray, p) -> float:
    p = as_exponent(p)
    mag = np.abs(values)
    if is_inf(p):
        return float(mag.max())
    # numpy's pairwise summation keeps this reduction deterministic
    return float(np.mean(mag**p) ** (1.0 / p))


def lp_norm(f: GridFunction, p) -> float:
    """Discrete L_p quasi-norm with normalised counting measure (p = inf -> max)."""
    return _lp_of_values(f.values, p)


def pure_wave(spec: GridSpec, k) -> GridFunction:
    """e^{i <k, x>} for an integer frequency vector k (one entry per axis)."""
    k = tuple(int(v) for v in k)
    if len(k) != spec.ndim:
        raise ValueError("frequency vector dimension does not match grid")
    vals = np.ones((), dtype=np.complex128)
    for s, ki in zip(spec.shape, k):
        if not -s // 2 <= ki <= s // 2 - 1:
            raise CapacityError(f"frequency {ki} outside the lattice of size {s}")
        phase = np.exp(2j * np.pi * ki * np.arange(s) / s)
        vals = np.multiply.outer(vals, phase)
    return GridFunction(spec, vals)


def spectrum_outside_mass(F: SpectrumFunction, keep_mask: np.ndarray) -> float:
    """Largest coefficient magnitude outside `keep_mask`, relative to the peak."""
    mag = np.abs(F.coeffs)
    peak = mag.max()
    if peak == 0.0:
        return 0.0
    out = np.where(keep_mask, 0.0, mag)
    return float(out.max() / peak)
