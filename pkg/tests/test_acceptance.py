"""Acceptance gate: fifteen stated guarantees, one test each.

Each test pins one user-facing guarantee of the package at its stated
tolerance, using the same check machinery the `verify` command ships. Run
with `pytest -v` to get one pass/fail line per criterion.
"""

from __future__ import annotations

import functools
import json
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from lptorus import (
    GridFunction,
    SplitMix64,
    TorusGrid,
    check_block_product_support,
    check_bony_identity,
    check_commutator_decay,
    check_embedding,
    check_lp_reconstruction,
    check_morrey_holder,
    check_morrey_lebesgue_separation,
    check_partition_of_unity,
    check_support_aliased_control,
    check_support_inclusion,
    check_synthesis_lemmas,
    derive_seed,
    estimate_commutator_constant,
    estimate_product_constant,
    gen_band_random,
    gen_morrey_exemplar,
    gen_random_field,
    gen_weierstrass,
    holder_zygmund_norm,
    lipschitz_norm,
    make_bank,
)
from lptorus.verifier import REPORT_SCHEMA

jsonschema = pytest.importorskip("jsonschema")

SEED = 7


@functools.lru_cache(maxsize=None)
def bank(n: int, N: int):
    return make_bank(TorusGrid(n, N))


def test_acceptance_01_partition_of_unity_exact():
    for n, N in ((1, 4096), (2, 256)):
        rec = check_partition_of_unity(bank(n, N))
        assert rec.passed and rec.lhs <= 1e-12, (n, N, rec.lhs)
        assert rec.runtime_ms < 1000.0, (n, N, rec.runtime_ms)


def test_acceptance_02_block_reconstruction():
    for n, N in ((1, 256), (1, 1024), (2, 64)):
        rec = check_lp_reconstruction(bank(n, N), derive_seed(SEED, 1), count=20)
        assert rec.passed and rec.lhs <= 1e-10, (n, N, rec.lhs)


def test_acceptance_03_three_term_split_reassembles():
    grid = TorusGrid(1, 1024)
    corpus = [
        (
            gen_random_field(derive_seed(SEED, 100 + 2 * i), grid, decay=1.0),
            gen_random_field(derive_seed(SEED, 101 + 2 * i), grid, decay=1.0),
        )
        for i in range(100)
    ]
    t0 = time.perf_counter()
    rec = check_bony_identity(corpus, bank(1, 1024))
    wall = time.perf_counter() - t0
    assert rec.passed and rec.lhs <= 1e-10, rec.lhs
    assert wall < 30.0, wall


def test_acceptance_04_product_supports():
    grid = TorusGrid(1, 1024)
    rng = SplitMix64(derive_seed(SEED, 901))
    top = int(math.log2(grid.N)) - 2
    corpus = []
    for i in range(100):
        j1 = 1 + int(rng.uniforms(1)[0] * (top - 1))
        j2 = 1 + int(rng.uniforms(1)[0] * (top - 1))
        corpus.append(
            (
                gen_band_random(j1, derive_seed(SEED, 1000 + 2 * i), grid),
                gen_band_random(j2, derive_seed(SEED, 1001 + 2 * i), grid),
            )
        )
    inclusion = check_support_inclusion(corpus)
    assert inclusion.passed and inclusion.lhs == 0.0, inclusion.lhs
    control = check_support_aliased_control(grid)
    assert control.passed and control.lhs >= 1.0, control.lhs


def test_acceptance_05_scale_interaction_predictions():
    rec = check_block_product_support(bank(1, 1024), derive_seed(SEED, 3))
    assert rec.passed, (rec.lhs, rec.detail)
    assert rec.lhs <= 1e-12
    assert rec.detail["containment_violations"] == 0
    assert rec.detail["must_vanish_triples"] > 0
    assert rec.detail["allowed_triples"] > 0


def test_acceptance_06_product_norm_splitting():
    grid = TorusGrid(1, 1024)
    corpus = []
    for i in range(100):
        sf, sg = derive_seed(SEED, 500 + 2 * i), derive_seed(SEED, 501 + 2 * i)
        f = gen_morrey_exemplar(2.0, grid) if i % 4 == 3 else gen_random_field(
            sf, grid, decay=0.5 + (i % 3)
        )
        corpus.append((f, gen_random_field(sg, grid, decay=1.0)))
    splittings = [
        ((2.0, 1.0), (4.0, 2.0), (4.0, 2.0)),
        ((2.0, 1.0), (3.0, 1.5), (6.0, 3.0)),
        ((2.0, 2.0), (4.0, 4.0), (4.0, 4.0)),
    ]
    rec = check_morrey_holder(corpus, splittings)
    assert rec.passed, rec.lhs
    assert rec.lhs <= 1.0 + 1e-12


def test_acceptance_07_scale_local_vs_global_integrability():
    rec = check_morrey_lebesgue_separation(2.0, 1.0, 1, (256, 512, 1024, 2048))
    assert rec.passed, rec.detail
    assert rec.detail["lebesgue_strictly_increasing"] is True
    assert rec.lhs <= 1.2


def test_acceptance_08_cascade_regularity_calibration():
    grid = TorusGrid(1, 1024)
    b = bank(1, 1024)
    for alpha in (0.3, 0.5, 0.8, 1.0):
        f = gen_weierstrass(alpha, 8, grid)
        value = holder_zygmund_norm(f, alpha, b)
        assert abs(value - 1.0) <= 1e-10, (alpha, value)


def test_acceptance_09_lipschitz_endpoint_divergence():
    grid = TorusGrid(1, 4096)
    b = bank(1, 4096)
    for depth in (4, 6, 8):
        f = gen_weierstrass(1.0, depth, grid)
        lip = lipschitz_norm(f, 1.0)
        assert lip >= 0.5 * depth, (depth, lip)
        hz = holder_zygmund_norm(f, 1.0, b)
        assert abs(hz - 1.0) <= 1e-10, (depth, hz)


def test_acceptance_10_commutator_decay_rates():
    b = bank(1, 4096)
    for kind in ("block", "para"):
        for alpha in (0.5, 0.8, 1.0):
            rec, series = check_commutator_decay(
                kind, alpha, b, derive_seed(SEED, 21), panel=16
            )
            assert rec.passed, (kind, alpha, rec.lhs)
            assert abs(rec.lhs - (-alpha)) <= 0.15, (kind, alpha, rec.lhs)
            assert series.window == (3, b.j_max - 2)


def test_acceptance_11_two_factor_product_estimate():
    rec = estimate_product_constant(
        1.0, 2.0, 1.0, 2.0, ((4.0, 2.0), (4.0, 2.0)),
        seed=derive_seed(SEED, 15), count=50, n=1, Ns=(512, 1024, 2048),
    )
    assert rec.passed, (rec.lhs, rec.detail)
    assert rec.lhs < 2.0  # constant drift across the resolution ladder
    for N in ("512", "1024", "2048"):
        pieces = rec.detail["piece_ratios_by_N"][N]
        assert set(pieces) == {"low_high", "high_low", "resonant"}
        assert all(v > 0 for v in pieces.values())
    with pytest.raises(ValueError):
        estimate_product_constant(
            0.0, 2.0, 1.0, 2.0, ((4.0, 2.0), (4.0, 2.0)), 1, 2, 1, (256,)
        )


def test_acceptance_12_commutator_estimate():
    rec = estimate_commutator_constant(
        0.8, -0.5, -0.2, 2.0, 1.0, 2.0,
        seed=derive_seed(SEED, 16), count=30, n=1, Ns=(512, 1024, 2048),
    )
    assert rec.passed, (rec.lhs, rec.detail)
    assert rec.lhs < 2.0
    with pytest.raises(ValueError):
        estimate_commutator_constant(0.5, -0.1, 0.1, 2.0, 1.0, 2.0, 1, 2, 1, (256,))


def test_acceptance_13_block_collection_synthesis():
    for mode in ("annulus", "ball", "product", "pair_ball"):
        rec = check_synthesis_lemmas(
            mode, 0.5, 2.0, 1.0, 2.0, depth=5,
            seed=derive_seed(SEED, 11), n=1, Ns=(512, 1024, 2048),
        )
        assert rec.passed, (mode, rec.lhs)
        assert rec.lhs < 2.0, (mode, rec.lhs)
    with pytest.raises(ValueError):
        check_synthesis_lemmas("ball", 0.0, 2.0, 1.0, 2.0, 4, 1, 1, (256,))


def test_acceptance_14_supremum_norm_embedding():
    rec = check_embedding(1.5, 2.0, 1.0, derive_seed(SEED, 17), 1, (512, 1024, 2048))
    assert rec.passed, (rec.lhs, rec.detail)
    assert rec.lhs < 2.0
    with pytest.raises(ValueError):
        check_embedding(0.5, 2.0, 1.0, 1, 1, (256,))


def test_acceptance_15_full_suite_via_cli(tmp_path):
    out_dir = tmp_path / "reports"
    t0 = time.perf_counter()
    proc = subprocess.run(
        [
            sys.executable, "-m", "lptorus", "verify",
            "--suite", "all", "--n", "1", "--N", "2048",
            "--out-dir", str(out_dir),
        ],
        capture_output=True,
        text=True,
    )
    wall = time.perf_counter() - t0
    assert proc.returncode == 0, proc.stdout + proc.stderr
    assert wall < 300.0, wall
    report = json.loads((out_dir / "report.json").read_text())
    jsonschema.validate(report, REPORT_SCHEMA)
    assert all(c["pass"] for c in report["checks"])
    assert (out_dir / "decay.csv").exists()
    for name in ("decay_fits.png", "constant_stability.png", "suite_summary.png"):
        assert (out_dir / name).stat().st_size > 0
