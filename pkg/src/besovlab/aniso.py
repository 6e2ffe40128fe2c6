"""Anisotropic geometry: weighted dilations and the implicit anisotropic distance.

A weight vector a = (a_1, ..., a_n) with min(a_i) = 1 fixes a one-parameter
dilation group t^a x = (t^{a_1} x_1, ..., t^{a_n} x_n).  The distance |x|_a is
the unique t > 0 with sum_i x_i^2 / t^{2 a_i} = 1 (and |0|_a = 0); it is
homogeneous of degree one under the dilations.  Everything here is a pure
function of immutable values and safe for concurrent use.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "INF",
    "is_inf",
    "as_exponent",
    "recip",
    "exp_min",
    "exp_max",
    "Anisotropy",
    "dilate",
    "aniso_distance",
    "sigma_p",
    "sigma_pq",
]


class _InfExponent:
    """Sentinel for an infinite integrability/sum exponent.

    Kept out of float arithmetic on purpose: code must branch on is_inf()
    instead of feeding float('inf') into power laws.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "inf"

    def __reduce__(self):
        return (_InfExponent, ())


INF = _InfExponent()


def is_inf(p) -> bool:
    return isinstance(p, _InfExponent)


def as_exponent(p):
    """Normalise a user-supplied exponent to a positive float or INF.

    Accepts the sentinel, numbers, and the strings 'inf'/'infinity'.
    """
    if is_inf(p):
        return INF
    if isinstance(p, str):
        if p.strip().lower() in ("inf", "infinity"):
            return INF
        p = float(p)
    p = float(p)
    if np.isinf(p):
        return INF
    if not np.isfinite(p) or p <= 0.0:
        raise ValueError(f"exponent must be in (0, inf], got {p!r}")
    return p


def recip(p) -> float:
    """1/p with the convention 1/inf = 0."""
    return 0.0 if is_inf(p) else 1.0 / p


def exp_min(p, q):
    if is_inf(p):
        return q
    if is_inf(q):
        return p
    return min(p, q)


def exp_max(p, q):
    if is_inf(p) or is_inf(q):
        return INF
    return max(p, q)


@dataclass(frozen=True)
class Anisotropy:
    """Dilation weights, one per coordinate, normalised so min(weights) == 1.

    Weights with min != 1 are rejected rather than rescaled; silently
    renormalising would change every derived quantity.
    """

    weights: tuple

    def __post_init__(self):
        w = tuple(float(v) for v in self.weights)
        object.__setattr__(self, "weights", w)
        if len(w) < 1:
            raise ValueError("anisotropy needs at least one weight")
        if not all(np.isfinite(v) and v >= 1.0 for v in w):
            raise ValueError(f"weights must be finite and >= 1, got {w}")
        if min(w) != 1.0:
            raise ValueError(f"min(weights) must equal 1 exactly, got {w}")

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def total(self) -> float:
        """|a| = a_1 + ... + a_n."""
        return float(sum(self.weights))

    @property
    def amax(self) -> float:
        return float(max(self.weights))

    @property
    def last(self) -> float:
        return self.weights[-1]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.weights, dtype=float)

    def split(self) -> tuple:
        """Split a = (a', a_n) into the leading anisotropy and the last weight.

        The leading part must itself satisfy min(a') == 1.
        """
        if self.n < 2:
            raise ValueError("cannot split a one-dimensional anisotropy")
        return Anisotropy(self.weights[:-1]), self.weights[-1]


def dilate(a: Anisotropy, t: float, x) -> np.ndarray:
    """Apply the group dilation t^a x componentwise; requires t > 0."""
    if t <= 0:
        raise ValueError(f"dilation parameter must be positive, got {t}")
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != a.n:
        raise ValueError(f"point dimension {x.shape[-1]} != anisotropy dimension {a.n}")
    return (float(t) ** a.as_array()) * x


def _distance_bisect(a: Anisotropy, x: np.ndarray, rtol: float, maxiter: int) -> np.ndarray:
    """Vectorised bisection for the implicit equation sum x_i^2/t^{2 a_i} = 1.

    The map t -> sum is strictly decreasing, and the root is bracketed by
    [min(|x|, |x|^{1/amax}), max(|x|, |x|^{1/amax})], so plain bisection
    converges unconditionally.
    """
    w = a.as_array()
    sq = x * x
    r = np.sqrt(np.sum(sq, axis=-1))
    out = np.zeros_like(r)
    pos = r > 0.0
    if not np.any(pos):
        return out
    rp = r[pos]
    ra = rp ** (1.0 / a.amax)
    lo = np.minimum(rp, ra)
    hi = np.maximum(rp, ra)
    sqp = sq[pos]

    def gesum(t):
        # sum_i x_i^2 * t^{-2 a_i} >= 1  <=>  t <= |x|_a
        acc = np.zeros_like(t)
        for i in range(a.n):
            acc += sqp[..., i] * t ** (-2.0 * w[i])
        return acc >= 1.0

    # Endpoints can already agree to within rtol (isotropic case).
    for _ in range(maxiter):
        if np.all(hi - lo <= rtol * lo):
            break
        mid = 0.5 * (lo + hi)
        below = gesum(mid)  # root above mid
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    out[pos] = 0.5 * (lo + hi)
    return out


def aniso_distance(a: Anisotropy, x, rtol: float = 1e-12, maxiter: int = 200):
    """Anisotropic distance |x|_a; returns 0 for x = 0.

    Scalar in, scalar out; an array of points with shape (..., n) yields an
    array of shape (...).
    """
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 1
    pts = x[None, :] if scalar else x
    if pts.shape[-1] != a.n:
        raise ValueError(f"point dimension {pts.shape[-1]} != anisotropy dimension {a.n}")
    if all(v == 1.0 for v in a.weights):
        out = np.sqrt(np.sum(pts * pts, axis=-1))
    else:
        out = _distance_bisect(a, pts, rtol, maxiter)
    return float(out[0]) if scalar else out


def sigma_p(a: Anisotropy, p) -> float:
    """sigma_p = |a| (1/p - 1)_+ for p in (0, inf]."""
    p = as_exponent(p)
    return a.total * max(recip(p) - 1.0, 0.0)


def sigma_pq(a: Anisotropy, p, q) -> float:
    """sigma_{p,q} = |a| (1/min(p,q) - 1)_+."""
    p = as_exponent(p)
    q = as_exponent(q)
    return sigma_p(a, exp_min(p, q))
