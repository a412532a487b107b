"""Paraproducts, the resonant part, the exact product decomposition, and commutators.

The product of two grid functions splits exactly into three parts,

    f*g = (low-high) + (high-low) + (resonant),

obtained by partitioning the double block sum over (j, k) into k >= j+2,
j >= k+2, and |j - k| <= 1. All scale sums truncate at the bank's j_max,
where they are exact because higher blocks vanish identically on the lattice.
Summands are accumulated on the doubled (dealiased) grid and transformed back
once per operator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dyadic_filters import DyadicSymbolBank
from .spectral_grid import (
    GridFunction,
    apply_multiplier,
    dealiased_product,
    _pad_double,
    _truncate_half,
)


def _check_pair(f: GridFunction, g: GridFunction, bank: DyadicSymbolBank):
    if f.grid != g.grid:
        raise ValueError(f"grid mismatch: {f.grid} vs {g.grid}")
    if f.grid != bank.grid:
        raise ValueError(f"grid mismatch: functions on {f.grid}, bank on {bank.grid}")
    return f.grid


def _to_fine(coeffs: np.ndarray, grid, scale: float) -> np.ndarray:
    """Samples of the band-limited interpolant on the doubled grid."""
    return np.fft.ifftn(_pad_double(coeffs, grid)) * scale


def _from_fine(fine_values: np.ndarray, grid, scale: float) -> GridFunction:
    """Exact lattice-window restriction of a fine-grid product accumulation."""
    w = np.fft.fftn(fine_values)
    return GridFunction(grid, np.fft.ifftn(_truncate_half(w, grid)) / scale)


def para_low_high(f: GridFunction, g: GridFunction, bank: DyadicSymbolBank) -> GridFunction:
    """sum_{j=2}^{j_max} psi_{j-2}(D)f * phi_j(D)g, each product dealiased."""
    grid = _check_pair(f, g, bank)
    cf = np.fft.fftn(f.values)
    cg = np.fft.fftn(g.values)
    scale = 2.0**grid.n
    fine = np.zeros(tuple(2 * s for s in grid.shape), dtype=np.complex128)
    for j in range(2, bank.j_max + 1):
        low = _to_fine(bank.psi[j - 2] * cf, grid, scale)
        high = _to_fine(bank.phi[j] * cg, grid, scale)
        fine += low * high
    return _from_fine(fine, grid, scale)


def para_high_low(f: GridFunction, g: GridFunction, bank: DyadicSymbolBank) -> GridFunction:
    """sum_{j=2}^{j_max} phi_j(D)f * psi_{j-2}(D)g (the mirror paraproduct)."""
    return para_low_high(g, f, bank)


def resonant(f: GridFunction, g: GridFunction, bank: DyadicSymbolBank) -> GridFunction:
    """The comparable-frequency part: diagonal sums over |j - k| <= 1."""
    grid = _check_pair(f, g, bank)
    cf = np.fft.fftn(f.values)
    cg = np.fft.fftn(g.values)
    scale = 2.0**grid.n
    fine = np.zeros(tuple(2 * s for s in grid.shape), dtype=np.complex128)
    prev_f = prev_g = None
    for j in range(bank.j_max + 1):
        cur_f = _to_fine(bank.phi[j] * cf, grid, scale)
        cur_g = _to_fine(bank.phi[j] * cg, grid, scale)
        fine += cur_f * cur_g
        if j >= 1:
            fine += prev_f * cur_g + cur_f * prev_g
        prev_f, prev_g = cur_f, cur_g
    return _from_fine(fine, grid, scale)


@dataclass(frozen=True)
class BonySplit:
    """The three product parts; their sum equals the dealiased product exactly."""

    low_high: GridFunction
    high_low: GridFunction
    resonant: GridFunction

    def total(self) -> GridFunction:
        return self.low_high + self.high_low + self.resonant


def bony_decompose(f: GridFunction, g: GridFunction, bank: DyadicSymbolBank) -> BonySplit:
    """Split f*g into low-high, high-low, and resonant parts."""
    _check_pair(f, g, bank)
    return BonySplit(
        low_high=para_low_high(f, g, bank),
        high_low=para_high_low(f, g, bank),
        resonant=resonant(f, g, bank),
    )


def resonant_commutator(
    f: GridFunction, g: GridFunction, h: GridFunction, bank: DyadicSymbolBank
) -> GridFunction:
    """((f low-high g) resonant h) - f * (g resonant h), the trilinear correction."""
    _check_pair(f, g, bank)
    _check_pair(g, h, bank)
    first = resonant(para_low_high(f, g, bank), h, bank)
    second = dealiased_product(f, resonant(g, h, bank))
    return first - second


def _check_scale(j: int, bank: DyadicSymbolBank) -> None:
    if not 0 <= j <= bank.j_max:
        raise ValueError(f"scale must satisfy 0 <= j <= {bank.j_max}, got {j}")


def block_commutator(
    F: GridFunction, G: GridFunction, j: int, bank: DyadicSymbolBank
) -> GridFunction:
    """phi_j(D)[F*G] - F * phi_j(D)G with dealiased products."""
    _check_pair(F, G, bank)
    _check_scale(j, bank)
    first = apply_multiplier(bank.phi[j], dealiased_product(F, G))
    second = dealiased_product(F, apply_multiplier(bank.phi[j], G))
    return first - second


def para_commutator(
    F: GridFunction, G: GridFunction, j: int, bank: DyadicSymbolBank
) -> GridFunction:
    """phi_j(D)[F low-high G] - F * phi_j(D)G with dealiased products."""
    _check_pair(F, G, bank)
    _check_scale(j, bank)
    first = apply_multiplier(bank.phi[j], para_low_high(F, G, bank))
    second = dealiased_product(F, apply_multiplier(bank.phi[j], G))
    return first - second
