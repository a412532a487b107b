"""Dyadic radial symbols, Littlewood-Paley analysis/synthesis, block-product support arithmetic.

The generating bump p is identically 1 on [0, 6/5], identically 0 on
[3/2, inf), and transitions smoothly in between, so every support statement
about the scaled symbols is exact on the frequency lattice:

    psi_j(xi) = p(|xi| / 2^j),  phi_0 = psi_0,  phi_j = psi_j - psi_{j-1}.

phi_j (j >= 1) vanishes exactly outside the open annulus
(3/5)*2^j < |xi| < (3/2)*2^j, and the scale ladder stops at the smallest
j_max with (6/5)*2^(j_max) >= sqrt(n)*N/2, beyond which psi_{j_max} is
identically 1 on the lattice and truncation of scale sums is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .spectral_grid import GridFunction, TorusGrid

INNER_RADIUS = 1.2  # the bump is exactly 1 at or below this radius
OUTER_RADIUS = 1.5  # the bump is exactly 0 at or above this radius


def _mollifier(u: np.ndarray) -> np.ndarray:
    """exp(-1/u) extended by 0 for u <= 0 (the standard smooth cutoff seed)."""
    out = np.zeros_like(u)
    pos = u > 0
    out[pos] = np.exp(-1.0 / u[pos])
    return out


def _smooth_step(u: np.ndarray) -> np.ndarray:
    """Smooth monotone step: 0 at u=0, 1 at u=1, via B(u)/(B(u)+B(1-u))."""
    lo = _mollifier(u)
    return lo / (lo + _mollifier(1.0 - u))


@dataclass(frozen=True)
class BumpProfile:
    """Radial cutoff with exact plateau values: 1 on [0, inner], 0 on [outer, inf)."""

    inner: float = INNER_RADIUS
    outer: float = OUTER_RADIUS

    def __post_init__(self) -> None:
        if not 0 < self.inner < self.outer:
            raise ValueError(f"need 0 < inner < outer, got {self.inner}, {self.outer}")

    def __call__(self, t):
        t_in = np.asarray(t, dtype=np.float64)
        t_arr = np.atleast_1d(t_in)
        out = np.zeros(t_arr.shape)
        out[t_arr <= self.inner] = 1.0
        mid = (t_arr > self.inner) & (t_arr < self.outer)
        if mid.any():
            u = (self.outer - t_arr[mid]) / (self.outer - self.inner)
            out[mid] = _smooth_step(u)
        if t_in.ndim == 0:
            return float(out[0])
        return out.reshape(t_in.shape)


def build_bump() -> BumpProfile:
    """The fixed radial profile used by every symbol bank."""
    return BumpProfile()


def max_scale(grid: TorusGrid) -> int:
    """Smallest j with (6/5)*2^j >= sqrt(n)*N/2, i.e. psi_j == 1 on the whole lattice."""
    radius = math.sqrt(grid.n) * grid.N / 2.0
    j = 0
    while INNER_RADIUS * 2.0**j < radius:
        j += 1
    return j


@dataclass(frozen=True)
class DyadicSymbolBank:
    """Dyadic symbols psi_j, phi_j sampled at exact lattice radii, j = 0..j_max."""

    grid: TorusGrid
    profile: BumpProfile
    j_max: int
    psi: tuple[np.ndarray, ...]
    phi: tuple[np.ndarray, ...]


def make_bank(grid: TorusGrid, profile: BumpProfile | None = None) -> DyadicSymbolBank:
    """Build the symbol bank for a grid; j_max is minimal with psi_{j_max} == 1."""
    if profile is None:
        profile = build_bump()
    j_max = max_scale(grid)
    radii = grid.frequency_radii
    psi = []
    for j in range(j_max + 1):
        sym = profile(radii / 2.0**j)
        sym.flags.writeable = False
        psi.append(sym)
    phi = [psi[0]]
    for j in range(1, j_max + 1):
        sym = psi[j] - psi[j - 1]
        sym.flags.writeable = False
        phi.append(sym)
    return DyadicSymbolBank(grid, profile, j_max, tuple(psi), tuple(phi))


@dataclass(frozen=True)
class LPBlockDecomposition:
    """Blocks phi_j(D)f for j = 0..j_max, plus the source's sup norm."""

    bank: DyadicSymbolBank
    blocks: tuple[GridFunction, ...]
    source_sup: float


def lp_decompose(f: GridFunction, bank: DyadicSymbolBank) -> LPBlockDecomposition:
    """Split f into its dyadic frequency blocks phi_j(D)f."""
    if f.grid != bank.grid:
        raise ValueError(f"grid mismatch: function on {f.grid}, bank on {bank.grid}")
    spectrum = np.fft.fftn(f.values)
    blocks = tuple(
        GridFunction(f.grid, np.fft.ifftn(phi_j * spectrum)) for phi_j in bank.phi
    )
    return LPBlockDecomposition(bank, blocks, f.sup_norm())


def lp_synthesize(blocks) -> GridFunction:
    """Pointwise sum of blocks (inverse of lp_decompose up to roundoff)."""
    if isinstance(blocks, LPBlockDecomposition):
        blocks = blocks.blocks
    blocks = list(blocks)
    if not blocks:
        raise ValueError("no blocks to synthesize")
    grid = blocks[0].grid
    total = np.zeros(grid.shape, dtype=np.complex128)
    for block in blocks:
        if block.grid != grid:
            raise ValueError("blocks live on different grids")
        total = total + block.values
    return GridFunction(grid, total)


@dataclass(frozen=True)
class SupportPrediction:
    """Interval-arithmetic bound on where a filtered block product can live."""

    radius_lo: float
    radius_hi: float
    must_vanish: bool

    @property
    def verdict(self) -> str:
        return "must vanish" if self.must_vanish else "possibly nonzero"


def predict_product_support(j: int, k: int, l: int) -> SupportPrediction:
    """Predict the spectrum of phi_j(D)[phi_k(D)psi_{l-2}(D)f * phi_l(D)g].

    Pure interval arithmetic on the symbol support radii: the product spectrum
    lies in the Minkowski-sum annulus

        [max(0, (3/5)*2^l - (3/2)*2^k),  (3/2)*2^k + (3/2)*2^l]

    and the result must vanish when either the first factor's symbol product
    phi_k * psi_{l-2} is identically zero (k >= l) or phi_j's support misses
    the predicted annulus entirely.
    """
    if j < 0 or k < 0 or l < 2:
        raise ValueError(f"scales must satisfy j >= 0, k >= 0, l >= 2, got ({j}, {k}, {l})")
    lo = max(0.0, 0.6 * 2.0**l - OUTER_RADIUS * 2.0**k)
    hi = OUTER_RADIUS * 2.0**k + OUTER_RADIUS * 2.0**l
    # phi_k lives on |xi| > (3/5)*2^k (k >= 1); psi_{l-2} on |xi| < (3/2)*2^(l-2).
    # Disjoint exactly when (3/5)*2^k >= (3/2)*2^(l-2), i.e. k >= l for integers.
    if k >= 1 and 0.6 * 2.0**k >= OUTER_RADIUS * 2.0 ** (l - 2):
        return SupportPrediction(lo, hi, True)
    # phi_j is nonzero only on (3/5)*2^j < |xi| < (3/2)*2^j (j=0: |xi| < 3/2).
    if OUTER_RADIUS * 2.0**j <= lo:
        return SupportPrediction(lo, hi, True)
    if j >= 1 and 0.6 * 2.0**j >= hi:
        return SupportPrediction(lo, hi, True)
    return SupportPrediction(lo, hi, False)
