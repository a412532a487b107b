"""Morrey, Lebesgue, Besov-Morrey, Holder-Zygmund, and Lipschitz norms on grid functions.

The Morrey norm

    ||f||_{M^p_q} = sup_B |B|^(1/p - 1/q) * (sum_{x in B} |f(x)|^q h^n)^(1/q)

runs over a sliding periodic cube family: every dyadic side length
2*pi*2^(-m) for m = 0..log2(N), anchored at every grid point. Window sums are
evaluated with per-axis periodic prefix sums, so a full norm costs
O(log(N) * N^n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dyadic_filters import DyadicSymbolBank, lp_decompose
from .spectral_grid import TWO_PI, GridFunction, TorusGrid

INF = math.inf


@dataclass(frozen=True)
class NormParams:
    """Exponents (p, q, r, s) with 1 <= q <= p < inf, 1 <= r <= inf, s real."""

    p: float
    q: float
    r: float
    s: float

    def __post_init__(self) -> None:
        if not (1.0 <= self.q <= self.p) or math.isinf(self.p):
            raise ValueError(
                f"exponents must satisfy 1 <= q <= p < inf, got p={self.p}, q={self.q}"
            )
        if not self.r >= 1.0:
            raise ValueError(f"summation exponent must satisfy 1 <= r <= inf, got r={self.r}")


@dataclass(frozen=True)
class CubeFamily:
    """Periodic sliding cubes: side 2*pi*2^(-m) for m = 0..log2(N), all anchors."""

    grid: TorusGrid

    @property
    def scales(self) -> range:
        return range(self.grid.N.bit_length())  # m = 0 .. log2(N)

    def points_per_axis(self, m: int) -> int:
        return self.grid.N >> m

    def side(self, m: int) -> float:
        return TWO_PI * 2.0**-m

    def measure(self, m: int) -> float:
        return self.side(m) ** self.grid.n


def _periodic_window_sum(arr: np.ndarray, w: int, axis: int) -> np.ndarray:
    """Sums over length-w windows starting at every index, wrapping periodically."""
    if w == 1:
        return arr
    size = arr.shape[axis]
    lead = np.take(arr, range(w - 1), axis=axis)
    csum = np.cumsum(np.concatenate([arr, lead], axis=axis), axis=axis)
    upper = np.take(csum, range(w - 1, w - 1 + size), axis=axis)
    zero = np.zeros_like(np.take(csum, [0], axis=axis))
    lower = np.concatenate([zero, np.take(csum, range(size - 1), axis=axis)], axis=axis)
    return upper - lower


def _max_window_sum(density: np.ndarray, w: int) -> float:
    sums = density
    for axis in range(density.ndim):
        sums = _periodic_window_sum(sums, w, axis)
    # density is nonnegative; clip prefix-sum cancellation noise
    return max(float(sums.max()), 0.0)


def morrey_norm_details(
    f: GridFunction, p: float, q: float, family: CubeFamily | None = None
) -> tuple[float, int]:
    """Morrey norm together with the cube scale m attaining the sup."""
    if not (1.0 <= q <= p) or math.isinf(p):
        raise ValueError(f"exponents must satisfy 1 <= q <= p < inf, got p={p}, q={q}")
    grid = f.grid
    if family is None:
        family = CubeFamily(grid)
    elif family.grid != grid:
        raise ValueError("cube family belongs to a different grid")
    density = np.abs(f.values) ** q * grid.h**grid.n
    best, best_scale = 0.0, 0
    for m in family.scales:
        mass = _max_window_sum(density, family.points_per_axis(m))
        value = family.measure(m) ** (1.0 / p - 1.0 / q) * mass ** (1.0 / q)
        if value > best:
            best, best_scale = value, m
    return best, best_scale


def morrey_norm(f: GridFunction, p: float, q: float, family: CubeFamily | None = None) -> float:
    """sup over sliding cubes of |B|^(1/p-1/q) * local L^q norm."""
    return morrey_norm_details(f, p, q, family)[0]


def lebesgue_norm(f: GridFunction, p: float) -> float:
    """Global L^p norm with the h^n volume weight (max norm for p = inf)."""
    mags = np.abs(f.values)
    if math.isinf(p):
        return float(mags.max())
    if p < 1:
        raise ValueError(f"Lebesgue exponent must satisfy p >= 1, got {p}")
    return float((np.sum(mags**p) * f.grid.h**f.grid.n) ** (1.0 / p))


def _sequence_norm(terms: np.ndarray, r: float) -> float:
    if terms.size == 0:
        return 0.0
    if math.isinf(r):
        return float(terms.max())
    return float(np.sum(terms**r) ** (1.0 / r))


def besov_morrey_norm(
    f: GridFunction,
    params: NormParams,
    bank: DyadicSymbolBank,
    family: CubeFamily | None = None,
) -> float:
    """l^r over scales of 2^(js) * Morrey norm of the j-th dyadic block.

    Blocks beyond the bank's j_max vanish identically on the lattice, so the
    finite scale sum is exact, not a truncation.
    """
    if family is None:
        family = CubeFamily(f.grid)
    blocks = lp_decompose(f, bank).blocks
    terms = np.array(
        [
            2.0 ** (j * params.s) * morrey_norm(block, params.p, params.q, family)
            for j, block in enumerate(blocks)
        ]
    )
    return _sequence_norm(terms, params.r)


def holder_zygmund_norm(f: GridFunction, beta: float, bank: DyadicSymbolBank) -> float:
    """sup over scales of 2^(j*beta) * sup norm of the j-th dyadic block."""
    blocks = lp_decompose(f, bank).blocks
    return max(2.0 ** (j * beta) * block.sup_norm() for j, block in enumerate(blocks))


def lipschitz_exact(grid: TorusGrid) -> bool:
    """Whether lipschitz_norm evaluates the exact all-pairs sup on this grid."""
    return grid.n == 1


def _offset_distance(grid: TorusGrid, shifts: tuple[int, ...]) -> float:
    """Geodesic distance on the torus between points separated by grid shifts."""
    total = 0.0
    for d in shifts:
        d = d % grid.N
        total += (min(d, grid.N - d) * grid.h) ** 2
    return math.sqrt(total)


def _seminorm_offsets(grid: TorusGrid):
    """Offsets probed by the Lipschitz seminorm (exhaustive only for n = 1)."""
    N = grid.N
    if grid.n == 1:
        for d in range(1, N // 2 + 1):
            yield (d,)
        return
    # n >= 2: all offsets of l-inf size <= 8, plus dyadic axis and diagonal offsets
    small = range(-8, 9)
    if grid.n == 2:
        for a in small:
            for b in small:
                if (a, b) != (0, 0):
                    yield (a, b)
    else:
        for a in small:
            for b in small:
                for c in small:
                    if (a, b, c) != (0, 0, 0):
                        yield (a, b, c)
    d = 16
    while d <= N // 2:
        for axis in range(grid.n):
            shift = [0] * grid.n
            shift[axis] = d
            yield tuple(shift)
        yield (d,) * grid.n
        d *= 2


def _lipschitz_seminorm(grid: TorusGrid, u: np.ndarray, alpha: float) -> float:
    best = 0.0
    for shifts in _seminorm_offsets(grid):
        dist = _offset_distance(grid, shifts)
        if dist == 0.0:  # offset congruent to zero mod N (tiny grids)
            continue
        diff = float(np.abs(u - np.roll(u, shifts, axis=tuple(range(grid.n)))).max())
        best = max(best, diff / dist**alpha)
    return best


def lipschitz_norm(f: GridFunction, alpha: float) -> float:
    """sup norm plus sup of |f(x)-f(y)| / dist(x,y)^alpha over grid pairs.

    Exact for n = 1 (all offsets probed); for n >= 2 the offset set is
    truncated (see lipschitz_exact) and the result is a lower bound on the
    full discrete sup. Complex inputs are handled componentwise and combined
    by max.
    """
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"Lipschitz exponent must satisfy 0 < alpha <= 1, got {alpha}")
    values = f.values
    if np.abs(values.imag).max() > 0.0:
        re = GridFunction(f.grid, values.real.astype(np.complex128))
        im = GridFunction(f.grid, values.imag.astype(np.complex128))
        return max(lipschitz_norm(re, alpha), lipschitz_norm(im, alpha))
    u = values.real
    return float(np.abs(u).max()) + _lipschitz_seminorm(f.grid, u, alpha)
