"""Besov, Lizorkin-Triebel and approximation-space quasi-norms.

All three scales weight dyadic bands by 2^{j s} and differ in how the level
index and the grid point are reduced:

  * Besov:            l_q over j of the L_p norms of the band projections;
  * Lizorkin-Triebel: L_p over the grid of the pointwise l_q over j (p < inf);
  * approximation:    infimum of the Besov-style expression over all ways of
    writing f = sum h_j with spectrum(h_j) inside the ball of radius 2^j.

The true infimum for the approximation scale is not computable (the
representation set is infinite-dimensional); `approx_norm_upper` evaluates
two admissible representations, the re-indexed Littlewood-Paley one and (for
s = 0, p >= 1) a greedy partial-sum subsequence, and returns the smaller
value.  It is an upper bound by construction and is sandwiched by the
embedding tests.

Functions must be spectrally inside the partition's top ball; anything else
raises CapacityError rather than silently truncating, so returned norms are
exact for admissible inputs.  Band reductions use numpy's pairwise summation,
keeping values reproducible run to run.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .aniso import Anisotropy, INF, as_exponent, is_inf, recip, sigma_p
from .errors import CapacityError
from .grid import GridFunction, apply_multiplier, forward_transform, lp_norm, radius_lattice
from .lattice import AnisoLattice
from .partition import DyadicPartition, band_project

__all__ = [
    "Scale",
    "SpaceParams",
    "BandDecomposition",
    "littlewood_paley_decomposition",
    "check_spectrum_inside",
    "band_lp_table",
    "besov_norm",
    "lizorkin_triebel_norm",
    "approx_norm_of",
    "approx_norm_upper",
    "norm",
    "sequence_norm_b",
    "sequence_norm_f",
]

SPECTRAL_LEAK_TOL = 1e-12


class Scale(Enum):
    BESOV = "B"
    LIZORKIN_TRIEBEL = "F"
    APPROXIMATION = "A"


@dataclass(frozen=True)
class SpaceParams:
    """Scale selector plus (s, p, q, a)."""

    scale: Scale
    s: float
    p: object
    q: object
    a: Anisotropy

    def __post_init__(self):
        object.__setattr__(self, "scale", Scale(self.scale))
        object.__setattr__(self, "s", float(self.s))
        object.__setattr__(self, "p", as_exponent(self.p))
        object.__setattr__(self, "q", as_exponent(self.q))
        if self.scale is Scale.LIZORKIN_TRIEBEL and is_inf(self.p):
            raise ValueError("the F scale requires p < inf")
        if self.scale is Scale.APPROXIMATION:
            thresh = sigma_p(self.a, self.p)
            ok = self.s > thresh or (
                self.s == thresh and not is_inf(self.q) and self.q <= 1.0
            )
            if not ok:
                raise ValueError(
                    f"A scale requires s > {thresh} or (s == {thresh} and q <= 1); "
                    f"got s={self.s}, q={self.q}"
                )

    def describe(self) -> str:
        return f"{self.scale.value}^({self.s},{self.a.weights})_({self.p},{self.q})"


def check_spectrum_inside(f: GridFunction, a: Anisotropy, level: int, tol: float = SPECTRAL_LEAK_TOL):
    """Raise CapacityError unless spectrum(f) sits inside {|xi|_a <= 2^level}."""
    R = radius_lattice(f.spec, a)
    F = forward_transform(f)
    mag = np.abs(F.coeffs)
    peak = float(mag.max())
    if peak == 0.0:
        return F
    outside = float(np.where(R <= float(2**level), 0.0, mag).max())
    if outside > tol * peak:
        raise CapacityError(
            f"spectral overflow beyond 2^{level}: relative leakage {outside / peak:.3e}"
        )
    return F


@dataclass(frozen=True)
class BandDecomposition:
    """Ordered representation f = sum h_j with spectrum(h_j) in the 2^j ball."""

    levels: tuple
    parts: tuple
    anisotropy: Anisotropy

    def __post_init__(self):
        if len(self.levels) != len(self.parts):
            raise ValueError("levels and parts disagree in length")
        for j, h in zip(self.levels, self.parts):
            check_spectrum_inside(h, self.anisotropy, int(j))

    def total(self) -> GridFunction:
        if not self.parts:
            raise ValueError("empty decomposition has no grid")
        acc = np.zeros(self.parts[0].spec.shape, dtype=np.complex128)
        for h in self.parts:
            acc = acc + h.values
        return GridFunction(self.parts[0].spec, acc)


def littlewood_paley_decomposition(f: GridFunction, P: DyadicPartition) -> BandDecomposition:
    """Canonical representation with h_{j+1} = band_project(f, j).

    The shift by one level makes each part admissible: band j is supported in
    the annulus reaching 2^{j+1}.
    """
    check_spectrum_inside(f, P.anisotropy, P.levels)
    levels, parts = [], []
    for j in range(P.levels + 1):
        levels.append(j + 1)
        parts.append(band_project(f, P, j))
    return BandDecomposition(tuple(levels), tuple(parts), P.anisotropy)


def _lq_reduce(terms: np.ndarray, q) -> float:
    terms = np.asarray(terms, dtype=float)
    if is_inf(q):
        return float(terms.max()) if terms.size else 0.0
    return float(np.sum(terms**q) ** (1.0 / q)) if terms.size else 0.0


def band_lp_table(f: GridFunction, P: DyadicPartition, ps) -> dict:
    """L_p norms of every band projection, for all requested p in one sweep."""
    ps = [as_exponent(p) for p in ps]
    table = {p: np.zeros(P.levels + 1) for p in ps}
    for j in range(P.levels + 1):
        b = band_project(f, P, j)
        for p in ps:
            table[p][j] = lp_norm(b, p)
    return table


def besov_norm(f: GridFunction, P: DyadicPartition, prm: SpaceParams) -> float:
    """(sum_j 2^{j s q} ||F^{-1}(phi_j F f)||_p^q)^{1/q}, sup over j when q = inf."""
    if prm.scale is not Scale.BESOV:
        raise ValueError(f"besov_norm called with scale {prm.scale}")
    check_spectrum_inside(f, P.anisotropy, P.levels)
    table = band_lp_table(f, P, [prm.p])[prm.p]
    weights = 2.0 ** (prm.s * np.arange(P.levels + 1))
    return _lq_reduce(weights * table, prm.q)


def lizorkin_triebel_norm(f: GridFunction, P: DyadicPartition, prm: SpaceParams) -> float:
    """L_p over the grid of the pointwise l_q over bands of 2^{j s} |band_j f|."""
    if prm.scale is not Scale.LIZORKIN_TRIEBEL:
        raise ValueError(f"lizorkin_triebel_norm called with scale {prm.scale}")
    check_spectrum_inside(f, P.anisotropy, P.levels)
    q = prm.q
    acc = None
    for j in range(P.levels + 1):
        term = np.abs(band_project(f, P, j).values) * 2.0 ** (prm.s * j)
        if acc is None:
            acc = term if is_inf(q) else term**q
        elif is_inf(q):
            np.maximum(acc, term, out=acc)
        else:
            acc += term**q
    pointwise = acc if is_inf(q) else acc ** (1.0 / q)
    p = prm.p
    return float(np.mean(pointwise**p) ** (1.0 / p))


def approx_norm_of(d: BandDecomposition, prm: SpaceParams) -> float:
    """Besov-style value (sum_j 2^{j s q} ||h_j||_p^q)^{1/q} of one representation."""
    if prm.scale is not Scale.APPROXIMATION:
        raise ValueError(f"approx_norm_of called with scale {prm.scale}")
    terms = np.array(
        [2.0 ** (prm.s * j) * lp_norm(h, prm.p) for j, h in zip(d.levels, d.parts)]
    )
    return _lq_reduce(terms, prm.q)


def _greedy_subsequence_value(f: GridFunction, P: DyadicPartition, prm: SpaceParams) -> float:
    """Value of the greedy partial-sum representation (s = 0, p >= 1 only).

    Picks a subsequence of cut-off levels along which the low-pass partial sums
    converge geometrically in L_p, and uses the increments as the h_j.
    """
    p = prm.p
    fn = lp_norm(f, p)
    if fn == 0.0:
        return 0.0
    prev = None
    terms = []
    cum = np.zeros(f.spec.shape, dtype=np.complex128)
    k = 0
    for j in range(P.levels + 1):
        cum = cum + band_project(f, P, j).values
        resid = lp_norm(GridFunction(f.spec, f.values - cum), p)
        take = resid < 2.0 ** (-k - 1) * fn or j == P.levels
        if take:
            piece = cum if prev is None else cum - prev
            terms.append(2.0 ** (prm.s * (j + 1)) * lp_norm(GridFunction(f.spec, piece), p))
            prev = cum.copy()
            k += 1
    return _lq_reduce(np.array(terms), prm.q)


def approx_norm_upper(f: GridFunction, P: DyadicPartition, prm: SpaceParams) -> float:
    """Computable upper bound for the approximation quasi-norm.

    Minimum of the canonical re-indexed Littlewood-Paley representation and,
    when s = 0 and p >= 1, of the greedy partial-sum subsequence.  Documented
    surrogate: a bound, not the infimum.
    """
    if prm.scale is not Scale.APPROXIMATION:
        raise ValueError(f"approx_norm_upper called with scale {prm.scale}")
    d = littlewood_paley_decomposition(f, P)
    best = approx_norm_of(d, prm)
    p_ge_1 = is_inf(prm.p) or prm.p >= 1.0
    if prm.s == 0.0 and p_ge_1 and not is_inf(prm.p):
        best = min(best, _greedy_subsequence_value(f, P, prm))
    return best


def norm(f: GridFunction, P: DyadicPartition, prm: SpaceParams) -> float:
    """Dispatch on the scale; the A value is the documented upper-bound surrogate."""
    if prm.scale is Scale.BESOV:
        return besov_norm(f, P, prm)
    if prm.scale is Scale.LIZORKIN_TRIEBEL:
        return lizorkin_triebel_norm(f, P, prm)
    return approx_norm_upper(f, P, prm)


# ----------------------------------------------------------------------------
# sequence spaces over (nu, m)
# ----------------------------------------------------------------------------


def _group_by_level(coeffs: dict) -> dict:
    by_level = {}
    for (nu, m), val in coeffs.items():
        by_level.setdefault(int(nu), []).append((tuple(m), complex(val)))
    return by_level


def sequence_norm_b(coeffs: dict, p, q) -> float:
    """b_{p,q}: l_q over levels of the l_p over positions of |lambda_{nu m}|."""
    p = as_exponent(p)
    q = as_exponent(q)
    by_level = _group_by_level(coeffs)
    inner = []
    for nu in sorted(by_level):
        mags = np.array([abs(v) for _, v in by_level[nu]])
        if is_inf(p):
            inner.append(mags.max())
        else:
            inner.append(float(np.sum(mags**p) ** (1.0 / p)))
    return _lq_reduce(np.array(inner), q)


def sequence_norm_f(coeffs: dict, lattice: AnisoLattice, p, q) -> float:
    """f^a_{p,q} by brute-force grid evaluation.

    Expands each level's coefficients to the piecewise-constant field
    |lambda_{nu m}| chi_{nu m} |Q_{nu m}|^{-1/p} (the L_p-normalised
    indicator; equal to 2^{nu |a|/p} chi on the unit-density lattice), takes
    the pointwise l_q over levels, then L_p over the grid.
    """
    p = as_exponent(p)
    q = as_exponent(q)
    by_level = _group_by_level(coeffs)
    if not by_level:
        return 0.0
    acc = None
    for nu, entries in sorted(by_level.items()):
        counts = lattice.counts(nu)
        cell = np.zeros(counts, dtype=float)
        for m, val in entries:
            # positions wrap: the lattice lives on the torus
            cell[tuple(mi % ci for mi, ci in zip(m, counts))] = abs(val)
        w = lattice.cell_measure(nu) ** (-recip(p)) if not is_inf(p) else 1.0
        field = lattice.expand(nu, cell) * w
        if acc is None:
            acc = field if is_inf(q) else field**q
        elif is_inf(q):
            np.maximum(acc, field, out=acc)
        else:
            acc += field**q
    pointwise = acc if is_inf(q) else acc ** (1.0 / q)
    if is_inf(p):
        return float(pointwise.max())
    return float(np.mean(pointwise**p) ** (1.0 / p))
