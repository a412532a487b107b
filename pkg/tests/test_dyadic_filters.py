"""Bump profile, symbol bank, block decomposition, and support-prediction tests.

The bump's plateaus are exact (boolean-mask construction), so the partition
of unity and the block-support statements below hold to machine zero, not
just to tolerance.
"""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lptorus import (
    GridFunction,
    TorusGrid,
    build_bump,
    forward_transform,
    gen_random_field,
    lp_decompose,
    lp_synthesize,
    make_bank,
    max_scale,
    predict_product_support,
)

INNER = 1.2
OUTER = 1.5


# ---------------------------------------------------------------------------
# bump profile
# ---------------------------------------------------------------------------


def test_bump_plateaus_exact():
    b = build_bump()
    assert b(0.0) == 1.0
    assert b(INNER) == 1.0
    assert b(OUTER) == 0.0
    assert b(17.0) == 0.0
    mid = b(1.35)
    assert 0.0 < mid < 1.0


def test_bump_array_input():
    b = build_bump()
    t = np.array([0.0, 1.2, 1.35, 1.5, 3.0])
    out = b(t)
    assert out.shape == t.shape
    assert out[0] == 1.0 and out[1] == 1.0 and out[3] == 0.0 and out[4] == 0.0


def test_bump_monotone_on_transition():
    b = build_bump()
    t = np.linspace(INNER, OUTER, 400)
    vals = b(t)
    assert np.all(np.diff(vals) <= 1e-15)


@settings(deadline=None, max_examples=50)
@given(t=st.floats(0.0, 10.0, allow_nan=False))
def test_bump_range(t):
    v = build_bump()(t)
    assert 0.0 <= v <= 1.0


def test_bump_smooth_at_junctions():
    # numerically C^1: one-sided difference quotients shrink toward the plateaus
    b = build_bump()
    eps = np.array([1e-2, 1e-3, 1e-4])
    inner_slopes = (1.0 - b(INNER + eps)) / eps
    outer_slopes = b(OUTER - eps) / eps
    assert inner_slopes[2] < inner_slopes[0] < 1e-1
    assert outer_slopes[2] < outer_slopes[0] < 1e-1


# ---------------------------------------------------------------------------
# scale count and symbols
# ---------------------------------------------------------------------------


def test_max_scale_values():
    cases = {(1, 64): 5, (1, 512): 8, (1, 1024): 9, (1, 2048): 10, (1, 4096): 11, (2, 256): 8}
    for (n, N), expect in cases.items():
        assert max_scale(TorusGrid(n, N)) == expect, (n, N)


def test_max_scale_is_minimal():
    for n, N in ((1, 64), (1, 1024), (2, 64), (3, 16)):
        grid = TorusGrid(n, N)
        j = max_scale(grid)
        corner = math.sqrt(n) * N / 2
        assert INNER * 2.0**j >= corner
        assert INNER * 2.0 ** (j - 1) < corner


def test_partition_of_unity_exact():
    for n, N in ((1, 64), (1, 256), (2, 32)):
        bank = make_bank(TorusGrid(n, N))
        total = np.zeros(bank.grid.shape)
        for sym in bank.phi:
            total = total + sym
        assert np.abs(total - 1.0).max() == 0.0


def test_top_low_pass_is_identity():
    bank = make_bank(TorusGrid(1, 128))
    assert np.all(bank.psi[-1] == 1.0)


def test_telescoping():
    bank = make_bank(TorusGrid(1, 128))
    partial = np.zeros(128)
    for m in range(bank.j_max + 1):
        partial = partial + bank.phi[m]
        assert np.abs(partial - bank.psi[m]).max() < 1e-15


def test_phi_annulus_support_exact():
    bank = make_bank(TorusGrid(1, 256))
    radii = bank.grid.frequency_radii
    for j in range(1, bank.j_max + 1):
        sym = bank.phi[j]
        outside = (radii <= 0.6 * 2.0**j) | (radii >= OUTER * 2.0**j)
        assert np.all(sym[outside] == 0.0), j
        inside = (radii > 0.6 * 2.0**j) & (radii < OUTER * 2.0**j)
        if inside.any():
            assert np.abs(sym[inside]).max() > 0.0, j
    # scale 0 block is the low-pass ball
    assert np.all(bank.phi[0][radii >= OUTER] == 0.0)
    assert bank.phi[0][0] == 1.0


def test_phi_at_exact_dyadic_frequencies():
    bank = make_bank(TorusGrid(1, 256))
    freqs = bank.grid.axis_frequencies
    for j in range(1, bank.j_max - 1):
        k = np.where(freqs == 2**j)[0][0]
        assert bank.phi[j][k] == 1.0  # a tone at 2^j lives in block j alone
        assert bank.phi[j + 1][k] == 0.0


# ---------------------------------------------------------------------------
# decomposition
# ---------------------------------------------------------------------------


def test_lp_reconstruction_exact():
    for n, N in ((1, 128), (2, 32)):
        grid = TorusGrid(n, N)
        bank = make_bank(grid)
        f = gen_random_field(11, grid)
        blocks = lp_decompose(f, bank)
        assert len(blocks.blocks) == bank.j_max + 1
        back = lp_synthesize(blocks)
        assert np.abs(back.values - f.values).max() < 1e-12 * f.sup_norm()


def test_blocks_are_band_limited():
    grid = TorusGrid(1, 128)
    bank = make_bank(grid)
    f = gen_random_field(13, grid)
    radii = grid.frequency_radii
    for j, block in enumerate(lp_decompose(f, bank).blocks):
        coeffs = forward_transform(block).coeffs
        peak = np.abs(coeffs).max()
        if peak == 0.0:
            continue
        live = np.abs(coeffs) > 1e-12 * peak
        assert np.all(radii[live] < OUTER * 2.0**j)
        if j >= 1:
            assert np.all(radii[live] > 0.6 * 2.0**j)


def test_lp_synthesize_accepts_iterables_and_checks_grids():
    grid = TorusGrid(1, 64)
    bank = make_bank(grid)
    f = gen_random_field(7, grid)
    blocks = lp_decompose(f, bank).blocks
    back = lp_synthesize(list(blocks))
    assert np.abs(back.values - f.values).max() < 1e-12
    other = GridFunction(TorusGrid(1, 128), np.ones(128))
    with pytest.raises(ValueError):
        lp_synthesize([blocks[0], other])


def test_profile_validation():
    from lptorus import BumpProfile

    with pytest.raises(ValueError):
        BumpProfile(inner=2.0, outer=1.0)
    with pytest.raises(ValueError):
        BumpProfile(inner=0.0, outer=1.5)


# ---------------------------------------------------------------------------
# product support prediction
# ---------------------------------------------------------------------------


def test_predict_guards():
    with pytest.raises(ValueError):
        predict_product_support(0, 0, 1)  # low-pass factor needs l >= 2
    with pytest.raises(ValueError):
        predict_product_support(-1, 0, 2)
    with pytest.raises(ValueError):
        predict_product_support(0, -1, 2)


def test_predict_interval_formula():
    pred = predict_product_support(4, 2, 4)
    assert pred.radius_lo == pytest.approx(max(0.0, 0.6 * 16 - 1.5 * 4))
    assert pred.radius_hi == pytest.approx(1.5 * 4 + 1.5 * 16)
    assert pred.verdict == "possibly nonzero"


def test_high_first_factor_always_vanishes():
    # k >= l forces the first factor's annulus out of the low-pass ball
    for l in range(2, 8):
        for k in range(l, l + 3):
            for j in range(0, 10):
                assert predict_product_support(j, k, l).must_vanish, (j, k, l)


def test_vanishing_window_in_j():
    for l in range(3, 8):
        for k in range(0, l - 1):  # genuinely low first factor
            verdicts = [predict_product_support(j, k, l).must_vanish for j in range(0, l + 4)]
            # the two blocks around the high factor's scale always survive,
            # as does the one above; everything at j >= l+2 or j <= l-3 dies
            assert not verdicts[l - 1] and not verdicts[l] and not verdicts[l + 1]
            for j in range(0, l - 2):
                assert verdicts[j] or j >= l - 2, (j, k, l)
            for j in range(l + 2, l + 4):
                assert verdicts[j], (j, k, l)


def test_predicted_window_never_tighter_than_measured():
    """Empirical cross-check of the verdicts on an actual grid."""
    grid = TorusGrid(1, 256)
    bank = make_bank(grid)
    f = gen_random_field(3, grid, decay=0.3, radius=128.0)
    g = gen_random_field(4, grid, decay=0.3, radius=128.0)
    cf = np.fft.fftn(f.values)
    cg = np.fft.fftn(g.values)
    from lptorus import dealiased_product

    for l in (3, 5):
        g_l = GridFunction(grid, np.fft.ifftn(bank.phi[l] * cg))
        for k in (0, l - 2, l):
            f_kl = GridFunction(grid, np.fft.ifftn(bank.phi[k] * bank.psi[l - 2] * cf))
            prod = dealiased_product(f_kl, g_l)
            cprod = np.fft.fftn(prod.values)
            scale = max(f_kl.sup_norm() * g_l.sup_norm(), 1e-300)
            for j in range(0, bank.j_max - 1):
                piece = np.abs(np.fft.ifftn(bank.phi[j] * cprod)).max()
                if predict_product_support(j, k, l).must_vanish:
                    assert piece <= 1e-12 * scale, (j, k, l)
