"""Seeded, deterministic generators for the verification corpus.

All randomness flows through a counter-based splitmix64 generator: the i-th
raw draw is mix64(seed + (i+1) * GOLDEN) with the standard 64-bit finalizer,
which matches the sequential splitmix64 stream for the same seed while
allowing vectorized generation. Every generator is bit-reproducible from
(seed, grid, parameters).

Random spectral draws are keyed to the *sorted integer frequency list* of the
target lattice set, so a generator invoked with the same seed on two grids
that both contain the set produces the same trigonometric polynomial; norm
comparisons across resolutions then measure pure discretization effects.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .dyadic_filters import max_scale
from .morrey_norms import CubeFamily, morrey_norm
from .spectral_grid import (
    TWO_PI,
    GridFunction,
    SpectralFunction,
    TorusGrid,
    inverse_transform,
)

_MASK64 = 0xFFFFFFFFFFFFFFFF
GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


def _mix(z):
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * _MIX1
        z = (z ^ (z >> np.uint64(27))) * _MIX2
        return z ^ (z >> np.uint64(31))


class SplitMix64:
    """Counter-based splitmix64; draw i is mix64(seed + (i+1)*GOLDEN)."""

    def __init__(self, seed: int) -> None:
        self._seed = np.uint64(seed & _MASK64)
        self._count = 0

    def next_uint64(self, count: int) -> np.ndarray:
        idx = np.arange(self._count + 1, self._count + count + 1, dtype=np.uint64)
        self._count += count
        with np.errstate(over="ignore"):
            return _mix(self._seed + idx * GOLDEN)

    def uniforms(self, count: int) -> np.ndarray:
        """Uniform draws in [0, 1) from the top 53 bits."""
        return (self.next_uint64(count) >> np.uint64(11)).astype(np.float64) * 2.0**-53

    def normals(self, count: int) -> np.ndarray:
        """Standard normal draws via Box-Muller."""
        half = (count + 1) // 2
        u1 = self.uniforms(half)
        u2 = self.uniforms(half)
        radius = np.sqrt(-2.0 * np.log1p(-u1))  # 1-u1 in (0, 1], log finite
        theta = TWO_PI * u2
        return np.concatenate([radius * np.cos(theta), radius * np.sin(theta)])[:count]


def derive_seed(seed: int, stream: int) -> int:
    """A decorrelated child seed for substream `stream`."""
    with np.errstate(over="ignore"):
        base = np.uint64(seed & _MASK64) ^ (np.uint64((stream + 1) & _MASK64) * GOLDEN)
    return int(_mix(base))


def _paired_mask(grid: TorusGrid) -> np.ndarray:
    """Lattice frequencies whose every component has a negation partner (drops -N/2)."""
    ok = grid.axis_frequencies != -(grid.N // 2)
    mask = np.ones(grid.shape, dtype=bool)
    for axis in range(grid.n):
        mask &= ok.reshape(grid._axis_shape(axis))
    return mask


def _first_nonzero_positive(ints: np.ndarray) -> np.ndarray:
    """Rows whose first nonzero entry is positive (one representative per +/- pair)."""
    rep = np.zeros(len(ints), dtype=bool)
    decided = np.zeros(len(ints), dtype=bool)
    for axis in range(ints.shape[1]):
        col = ints[:, axis]
        rep |= ~decided & (col > 0)
        decided |= col != 0
    return rep


def _hermitian_random_coeffs(grid: TorusGrid, mask: np.ndarray, seed: int) -> np.ndarray:
    """Seeded complex Gaussian coefficients on `mask`, conjugate-symmetrized.

    Draw order follows the lexicographically sorted integer frequency tuples,
    making the result independent of the grid resolution for a fixed
    frequency set.
    """
    lattice = np.argwhere(mask)
    ints = grid.axis_frequencies[lattice]
    order = np.lexsort(ints.T[::-1])
    ints = ints[order]
    reps = ints[_first_nonzero_positive(ints)]
    rng = SplitMix64(seed)
    re = rng.normals(len(reps))
    im = rng.normals(len(reps))
    coeffs = np.zeros(grid.shape, dtype=np.complex128)
    if len(reps):
        draws = (re + 1j * im) / math.sqrt(2.0)
        coeffs[tuple(reps.T % grid.N)] = draws
        coeffs[tuple((-reps.T) % grid.N)] = np.conj(draws)
    if mask[(0,) * grid.n]:
        coeffs[(0,) * grid.n] = rng.normals(1)[0]
    return coeffs


def _tone_axis_sum(
    grid: TorusGrid, weights: np.ndarray, phases: np.ndarray, axis: int, real: bool
) -> GridFunction:
    """sum_j weights[j] * wave(2^(j+1) x_axis + phases[j]); cos if real else exp."""
    x = grid.axis_coordinates
    u = np.zeros(grid.N, dtype=np.float64 if real else np.complex128)
    for idx, (w, theta) in enumerate(zip(weights, phases)):
        arg = 2.0 ** (idx + 1) * x + theta
        u = u + (w * np.cos(arg) if real else w * np.exp(1j * arg))
    values = np.broadcast_to(u.reshape(grid._axis_shape(axis)), grid.shape)
    return GridFunction(grid, values.astype(np.complex128))


def _check_depth(depth: int, grid: TorusGrid) -> None:
    top = max_scale(grid) - 1
    if not 1 <= depth <= top:
        raise ValueError(f"depth must satisfy 1 <= depth <= {top} on N={grid.N}, got {depth}")


def gen_weierstrass(
    alpha: float, depth: int, grid: TorusGrid, *, seed: int | None = None, axis: int = 0
) -> GridFunction:
    """W_alpha(x) = sum_{j=1}^{depth} 2^(-j*alpha) cos(2^j x_axis [+ theta_j]).

    Each tone lies wholly in dyadic block j. Phases default to zero (so the
    scaled block sup norms are exactly 1); pass `seed` for a phased variant.
    """
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"regularity exponent must satisfy 0 < alpha <= 1, got {alpha}")
    _check_depth(depth, grid)
    weights = 2.0 ** (-alpha * np.arange(1, depth + 1))
    if seed is None:
        phases = np.zeros(depth)
    else:
        phases = TWO_PI * SplitMix64(seed).uniforms(depth)
    return _tone_axis_sum(grid, weights, phases, axis, real=True)


def gen_lacunary(
    s: float, p: float, q: float, depth: int, seed: int, grid: TorusGrid, *, axis: int = 0
) -> GridFunction:
    """One unimodular tone per block: sum_{j=1}^{depth} 2^(-j*s) e^(i theta_j) e^(i 2^j x).

    The scaled block Morrey norms 2^(js) ||phi_j(D)f||_{M^p_q} are all equal,
    so l^inf-type norms have closed forms. p and q are accepted for parameter
    bookkeeping only; the construction does not depend on them.
    """
    del p, q  # construction-inert; see docstring
    _check_depth(depth, grid)
    weights = 2.0 ** (-s * np.arange(1, depth + 1))
    phases = TWO_PI * SplitMix64(seed).uniforms(depth)
    return _tone_axis_sum(grid, weights, phases, axis, real=False)


def gen_band_random(j: int, seed: int, grid: TorusGrid) -> GridFunction:
    """Real random field with spectrum exactly inside {2^(j-1) < |xi| < 2^(j+1)}."""
    if j < 1:
        raise ValueError(f"band scale must satisfy j >= 1, got {j}")
    radii = grid.frequency_radii
    mask = (radii > 2.0 ** (j - 1)) & (radii < 2.0 ** (j + 1)) & _paired_mask(grid)
    if not mask.any():
        raise ValueError(f"band annulus at scale {j} has no lattice frequencies on N={grid.N}")
    coeffs = _hermitian_random_coeffs(grid, mask, seed)
    return inverse_transform(SpectralFunction(grid, coeffs))


def gen_random_field(
    seed: int, grid: TorusGrid, *, decay: float = 1.5, radius: float | None = None
) -> GridFunction:
    """Real random field with |xi|-power-decaying spectrum inside |xi| < radius."""
    if radius is None:
        radius = grid.N / 4.0
    radii = grid.frequency_radii
    mask = (radii < radius) & _paired_mask(grid)
    coeffs = _hermitian_random_coeffs(grid, mask, seed)
    coeffs *= (1.0 + radii) ** -decay
    return inverse_transform(SpectralFunction(grid, coeffs))


def gen_morrey_exemplar(p: float, grid: TorusGrid) -> GridFunction:
    """f(x) = dist(x, 0)^(-n/p) cut off at one grid cell: Morrey-bounded, Lebesgue-divergent."""
    if not p > 1.0:
        raise ValueError(f"exemplar exponent must satisfy p > 1, got {p}")
    axis = np.minimum(grid.axis_coordinates, TWO_PI - grid.axis_coordinates)
    total = np.zeros(grid.shape)
    for ax in range(grid.n):
        total = total + (axis**2).reshape(grid._axis_shape(ax))
    dist = np.maximum(np.sqrt(total), grid.h)
    return GridFunction(grid, dist ** (-grid.n / p))


_COLLECTION_MODES = ("annulus", "ball", "product_low", "product_high", "pair_ball")


def collection_scales(mode: str, depth: int) -> range:
    """Scale indices of a collection: annulus/ball/pair_ball start at 0, products at 1."""
    if mode in ("product_low", "product_high"):
        return range(1, depth + 1)
    return range(depth + 1)


def _collection_mask(mode: str, j: int, radii: np.ndarray) -> np.ndarray:
    if mode == "annulus":
        if j == 0:
            return radii < 8.0
        return (radii >= 2.0 ** (j - 1)) & (radii < 2.0 ** (j + 3))
    if mode == "ball":
        return radii < 2.0 ** (j + 2)
    if mode == "product_low":
        return radii < 2.0 ** (j - 1)
    if mode == "product_high":
        return (radii >= 2.0**j) & (radii < 2.0 ** (j + 2))
    if mode == "pair_ball":
        return radii < 2.0 ** (j + 1)
    raise ValueError(f"unknown collection mode {mode!r}; expected one of {_COLLECTION_MODES}")


def gen_annulus_collection(
    s: float,
    p: float,
    q: float,
    depth: int,
    seed: int,
    grid: TorusGrid,
    mode: str = "annulus",
) -> list[GridFunction]:
    """Collections {f_j} with exact per-scale spectral supports, normalized so
    2^(js) ||f_j||_{M^p_q} = 1.

    Modes fix the support of f_j:
        annulus      |xi| < 8 for j=0, else 2^(j-1) <= |xi| < 2^(j+3)
        ball         |xi| < 2^(j+2)
        product_low  |xi| < 2^(j-1)            (scales start at j=1)
        product_high 2^j <= |xi| < 2^(j+2)     (scales start at j=1)
        pair_ball    |xi| < 2^(j+1)
    """
    if mode not in _COLLECTION_MODES:
        raise ValueError(f"unknown collection mode {mode!r}; expected one of {_COLLECTION_MODES}")
    top = max_scale(grid) - 3
    if not 1 <= depth <= top:
        raise ValueError(
            f"collection depth must satisfy 1 <= depth <= {top} on N={grid.N}, got {depth}"
        )
    radii = grid.frequency_radii
    paired = _paired_mask(grid)
    family = CubeFamily(grid)
    out: list[GridFunction] = []
    for j in collection_scales(mode, depth):
        mask = _collection_mask(mode, j, radii) & paired
        if not mask.any():
            raise ValueError(f"mode {mode!r} at scale {j} has no lattice frequencies on N={grid.N}")
        coeffs = _hermitian_random_coeffs(grid, mask, derive_seed(seed, j))
        f = inverse_transform(SpectralFunction(grid, coeffs))
        norm = morrey_norm(f, p, q, family)
        if norm == 0.0:
            raise ValueError(f"degenerate draw at scale {j}: zero Morrey norm")
        out.append(GridFunction(grid, f.values * (2.0 ** (-j * s) / norm)))
    return out


@dataclass(frozen=True)
class GenSpec:
    """Serializable recipe (kind, grid, parameters) for one generator invocation."""

    kind: str
    n: int
    N: int
    params: dict

    def build(self):
        grid = TorusGrid(self.n, self.N)
        p = self.params
        if self.kind == "weierstrass":
            return gen_weierstrass(p["alpha"], p["depth"], grid, seed=p.get("seed"))
        if self.kind == "lacunary":
            return gen_lacunary(p["s"], p["p"], p["q"], p["depth"], p["seed"], grid)
        if self.kind == "band_random":
            return gen_band_random(p["j"], p["seed"], grid)
        if self.kind == "random_field":
            return gen_random_field(
                p["seed"], grid, decay=p.get("decay", 1.5), radius=p.get("radius")
            )
        if self.kind == "morrey_exemplar":
            return gen_morrey_exemplar(p["p"], grid)
        if self.kind == "annulus_collection":
            return gen_annulus_collection(
                p["s"], p["p"], p["q"], p["depth"], p["seed"], grid, p.get("mode", "annulus")
            )
        raise ValueError(f"unknown generator kind {self.kind!r}")

    def to_json(self) -> str:
        payload = {"kind": self.kind, "grid": {"n": self.n, "N": self.N}, "params": self.params}
        return json.dumps(payload, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "GenSpec":
        obj = json.loads(text)
        return cls(obj["kind"], obj["grid"]["n"], obj["grid"]["N"], obj["params"])
