"""Periodic grids, scaled Fourier transforms, multipliers, and aliasing-safe products.

Functions live on the torus [0, 2*pi)^n sampled at N points per axis. The
transform convention is fixed so that the coefficient at integer frequency k
approximates (2*pi)^(-n/2) * integral of f(x) exp(-i k.x) over the torus:

    c_k = (2*pi)^(n/2) / N^n * sum_x f(x) exp(-i k.x)

Under this scaling Parseval reads  h^n * sum |f|^2 = sum |c_k|^2  with
h = 2*pi/N, and the constant function 1 has c_0 = (2*pi)^(n/2).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from functools import cached_property

import numpy as np

TWO_PI = 2.0 * np.pi

# Relative magnitude below which a coefficient does not count as spectral
# support: well above accumulated FFT roundoff, far below genuine content.
SUPPORT_EPS = 1e-12

_LPBM_MAGIC = b"LPBM"
_LPBM_VERSION = 1
_LPBM_HEADER = struct.Struct("<4sIIII")


@dataclass(frozen=True)
class TorusGrid:
    """Uniform grid with N points per axis on the torus [0, 2*pi)^n.

    Attributes:
        n: spatial dimension, 1 <= n <= 3
        N: points per axis, a power of two >= 8
    """

    n: int
    N: int

    def __post_init__(self) -> None:
        if not 1 <= self.n <= 3:
            raise ValueError(f"spatial dimension must satisfy 1 <= n <= 3, got {self.n}")
        if self.N < 8 or (self.N & (self.N - 1)) != 0:
            raise ValueError(f"points per axis must be a power of two >= 8, got {self.N}")

    @property
    def h(self) -> float:
        """Grid spacing 2*pi/N."""
        return TWO_PI / self.N

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.N,) * self.n

    @property
    def size(self) -> int:
        return self.N**self.n

    @cached_property
    def axis_coordinates(self) -> np.ndarray:
        """Sample coordinates 2*pi*m/N along one axis, shape (N,)."""
        x = np.arange(self.N) * self.h
        x.flags.writeable = False
        return x

    @cached_property
    def axis_frequencies(self) -> np.ndarray:
        """Integer frequencies in FFT order: 0..N/2-1, -N/2..-1."""
        k = np.fft.fftfreq(self.N, d=1.0 / self.N).astype(np.int64)
        k.flags.writeable = False
        return k

    @cached_property
    def frequency_radii(self) -> np.ndarray:
        """Euclidean |xi| at every lattice frequency, FFT order, shape (N,)*n."""
        k2 = self.axis_frequencies.astype(np.float64) ** 2
        total = np.zeros(self.shape)
        for axis in range(self.n):
            total = total + k2.reshape(self._axis_shape(axis))
        radii = np.sqrt(total)
        radii.flags.writeable = False
        return radii

    def _axis_shape(self, axis: int) -> tuple[int, ...]:
        shape = [1] * self.n
        shape[axis] = self.N
        return tuple(shape)

    def coordinate(self, axis: int) -> np.ndarray:
        """Coordinate along one axis, broadcastable to the full grid shape."""
        return self.axis_coordinates.reshape(self._axis_shape(axis))


def _as_grid_values(grid: TorusGrid, values: np.ndarray) -> np.ndarray:
    arr = np.asarray(values, dtype=np.complex128)
    if arr.shape != grid.shape:
        if arr.size == grid.size and arr.ndim == 1:
            arr = arr.reshape(grid.shape)
        else:
            raise ValueError(
                f"values shape {arr.shape} does not match grid shape {grid.shape}"
            )
    bad = ~np.isfinite(arr)
    if bad.any():
        first = int(np.flatnonzero(bad.ravel())[0])
        raise ValueError(f"non-finite entry at flat index {first}")
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class GridFunction:
    """A complex-valued function sampled on a TorusGrid (values in row-major order)."""

    grid: TorusGrid
    values: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _as_grid_values(self.grid, self.values))

    def sup_norm(self) -> float:
        return float(np.abs(self.values).max())

    def is_real(self, tol: float = 1e-12) -> bool:
        return float(np.abs(self.values.imag).max()) <= tol * max(1.0, self.sup_norm())

    def __add__(self, other: "GridFunction") -> "GridFunction":
        return GridFunction(_common_grid(self, other), self.values + other.values)

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        return GridFunction(_common_grid(self, other), self.values - other.values)

    def __mul__(self, scalar: complex) -> "GridFunction":
        if isinstance(scalar, GridFunction):
            raise TypeError(
                "use pointwise_product or dealiased_product to multiply grid functions"
            )
        return GridFunction(self.grid, self.values * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> "GridFunction":
        return GridFunction(self.grid, -self.values)


@dataclass(frozen=True)
class SpectralFunction:
    """Fourier coefficients on the integer lattice {-N/2..N/2-1}^n, FFT order."""

    grid: TorusGrid
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", _as_grid_values(self.grid, self.coeffs))

    @cached_property
    def support(self) -> frozenset:
        """Frequencies with |coeff| > SUPPORT_EPS * max|coeff| (ints for n=1, tuples else)."""
        mags = np.abs(self.coeffs)
        peak = mags.max()
        if peak == 0.0:
            return frozenset()
        return _mask_to_frequency_set(self.grid, mags > SUPPORT_EPS * peak)


def _mask_to_frequency_set(grid: TorusGrid, mask: np.ndarray) -> frozenset:
    freqs = grid.axis_frequencies
    idx = np.argwhere(mask)
    if grid.n == 1:
        return frozenset(int(freqs[i]) for (i,) in idx)
    return frozenset(tuple(int(freqs[i]) for i in row) for row in idx)


def _common_grid(f: GridFunction, g: GridFunction) -> TorusGrid:
    if f.grid != g.grid:
        raise ValueError(f"grid mismatch: {f.grid} vs {g.grid}")
    return f.grid


def forward_transform(f: GridFunction) -> SpectralFunction:
    """Scaled DFT: c_k = (2*pi)^(n/2)/N^n * sum_x f(x) exp(-i k.x)."""
    grid = f.grid
    scale = TWO_PI ** (grid.n / 2.0) / grid.size
    return SpectralFunction(grid, np.fft.fftn(f.values) * scale)


def inverse_transform(F: SpectralFunction) -> GridFunction:
    """Exact inverse of forward_transform."""
    grid = F.grid
    scale = grid.size / TWO_PI ** (grid.n / 2.0)
    return GridFunction(grid, np.fft.ifftn(F.coeffs) * scale)


def spectral_support(F: SpectralFunction) -> frozenset:
    """Thresholded frequency support of a spectral function."""
    return F.support


def apply_multiplier(symbol: np.ndarray, f: GridFunction) -> GridFunction:
    """theta(D)f: multiply the spectrum by a symbol sampled on the frequency lattice."""
    grid = f.grid
    symbol = np.asarray(symbol)
    if symbol.shape != grid.shape:
        raise ValueError(
            f"symbol shape {symbol.shape} does not match lattice shape {grid.shape}"
        )
    # The (2*pi)^(n/2)/N^n coefficient scaling cancels between the transforms.
    return GridFunction(grid, np.fft.ifftn(symbol * np.fft.fftn(f.values)))


def _pad_double(coeffs: np.ndarray, grid: TorusGrid) -> np.ndarray:
    """Embed an N-lattice spectrum (FFT order) centered in a 2N-per-axis lattice."""
    N = grid.N
    fine = np.zeros((2 * N,) * grid.n, dtype=np.complex128)
    window = tuple(slice(N // 2, N // 2 + N) for _ in range(grid.n))
    fine[window] = np.fft.fftshift(coeffs)
    return np.fft.ifftshift(fine)


def _truncate_half(fine: np.ndarray, grid: TorusGrid) -> np.ndarray:
    """Restrict a 2N-per-axis spectrum (FFT order) to the centered N-lattice window."""
    N = grid.N
    window = tuple(slice(N // 2, N // 2 + N) for _ in range(grid.n))
    return np.fft.ifftshift(np.fft.fftshift(fine)[window])


def pointwise_product(f: GridFunction, g: GridFunction) -> GridFunction:
    """Naive sample-by-sample product (aliases frequencies beyond the lattice)."""
    return GridFunction(_common_grid(f, g), f.values * g.values)


def dealiased_product(f: GridFunction, g: GridFunction) -> GridFunction:
    """Product via zero-padded transforms at 2N per axis, then truncation.

    The output spectrum equals the true discrete convolution
    (2*pi)^(-n/2) * (Ff * Fg) restricted to the lattice window: frequency sums
    of lattice pairs stay within [-N, N-2] per axis, inside the fine lattice,
    so no wraparound occurs.
    """
    grid = _common_grid(f, g)
    scale = 2.0**grid.n  # fine/coarse inverse-FFT normalization ratio
    uf = np.fft.ifftn(_pad_double(np.fft.fftn(f.values), grid)) * scale
    ug = np.fft.ifftn(_pad_double(np.fft.fftn(g.values), grid)) * scale
    w = np.fft.fftn(uf * ug)
    return GridFunction(grid, np.fft.ifftn(_truncate_half(w, grid)) / scale)


def write_lpbm(path, f: GridFunction) -> None:
    """Write the LPBM binary format (bit-exact round trip with read_lpbm).

    Layout: magic "LPBM", version u32, n u32, N u32, real-flag u32 (all
    little-endian), then N^n complex values as little-endian f64 (re, im)
    pairs in row-major order.
    """
    flat = np.ascontiguousarray(f.values).ravel()
    is_real = 1 if not flat.imag.any() else 0
    pairs = np.empty(2 * flat.size, dtype="<f8")
    pairs[0::2] = flat.real
    pairs[1::2] = flat.imag
    with open(path, "wb") as fh:
        fh.write(_LPBM_HEADER.pack(_LPBM_MAGIC, _LPBM_VERSION, f.grid.n, f.grid.N, is_real))
        fh.write(pairs.tobytes())


def read_lpbm(path) -> GridFunction:
    """Read an LPBM file written by write_lpbm."""
    with open(path, "rb") as fh:
        header = fh.read(_LPBM_HEADER.size)
        if len(header) != _LPBM_HEADER.size:
            raise ValueError(f"{path}: truncated header")
        magic, version, n, N, flag = _LPBM_HEADER.unpack(header)
        if magic != _LPBM_MAGIC:
            raise ValueError(f"{path}: bad magic {magic!r}")
        if version != _LPBM_VERSION:
            raise ValueError(f"{path}: unsupported version {version}")
        if flag not in (0, 1):
            raise ValueError(f"{path}: bad real/complex flag {flag}")
        grid = TorusGrid(n, N)
        payload = fh.read(16 * grid.size)
    if len(payload) != 16 * grid.size:
        raise ValueError(f"{path}: truncated payload")
    pairs = np.frombuffer(payload, dtype="<f8")
    values = pairs[0::2] + 1j * pairs[1::2]
    return GridFunction(grid, values.reshape(grid.shape))
