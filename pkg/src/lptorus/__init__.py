"""Dyadic frequency analysis on periodic grids.

Littlewood-Paley decompositions, paraproducts, and scale-weighted Morrey
norms for trigonometric polynomials sampled on uniform grids over the torus
[0, 2pi)^n, together with a verifier that measures the constants in the
associated product and commutator inequalities across resolutions.
"""

from __future__ import annotations

from .dyadic_filters import (
    BumpProfile,
    DyadicSymbolBank,
    LPBlockDecomposition,
    SupportPrediction,
    build_bump,
    lp_decompose,
    lp_synthesize,
    make_bank,
    max_scale,
    predict_product_support,
)
from .morrey_norms import (
    CubeFamily,
    NormParams,
    besov_morrey_norm,
    holder_zygmund_norm,
    lebesgue_norm,
    lipschitz_exact,
    lipschitz_norm,
    morrey_norm,
    morrey_norm_details,
)
from .paraproducts import (
    BonySplit,
    block_commutator,
    bony_decompose,
    dealiased_product,
    para_commutator,
    para_high_low,
    para_low_high,
    resonant,
    resonant_commutator,
)
from .spectral_grid import (
    GridFunction,
    SpectralFunction,
    TorusGrid,
    apply_multiplier,
    forward_transform,
    inverse_transform,
    pointwise_product,
    read_lpbm,
    spectral_support,
    write_lpbm,
)
from .testfuncs import (
    GenSpec,
    SplitMix64,
    derive_seed,
    gen_annulus_collection,
    gen_band_random,
    gen_lacunary,
    gen_morrey_exemplar,
    gen_random_field,
    gen_weierstrass,
)
from .verifier import (
    CheckRecord,
    DecaySeries,
    check_block_product_support,
    check_bony_identity,
    check_commutator_decay,
    check_embedding,
    check_lp_reconstruction,
    check_morrey_holder,
    check_morrey_lebesgue_separation,
    check_partition_of_unity,
    check_psi_multiplier,
    check_support_aliased_control,
    check_support_inclusion,
    check_synthesis_lemmas,
    emit_report,
    estimate_commutator_constant,
    estimate_product_constant,
    fit_decay_rate,
    render_figures,
    run_suite,
)

__version__ = "0.1.0"

__all__ = [
    "BonySplit",
    "BumpProfile",
    "CheckRecord",
    "CubeFamily",
    "DecaySeries",
    "DyadicSymbolBank",
    "GenSpec",
    "GridFunction",
    "LPBlockDecomposition",
    "NormParams",
    "SpectralFunction",
    "SplitMix64",
    "SupportPrediction",
    "TorusGrid",
    "apply_multiplier",
    "besov_morrey_norm",
    "block_commutator",
    "bony_decompose",
    "build_bump",
    "check_block_product_support",
    "check_bony_identity",
    "check_commutator_decay",
    "check_embedding",
    "check_lp_reconstruction",
    "check_morrey_holder",
    "check_morrey_lebesgue_separation",
    "check_partition_of_unity",
    "check_psi_multiplier",
    "check_support_aliased_control",
    "check_support_inclusion",
    "check_synthesis_lemmas",
    "dealiased_product",
    "derive_seed",
    "emit_report",
    "estimate_commutator_constant",
    "estimate_product_constant",
    "fit_decay_rate",
    "forward_transform",
    "gen_annulus_collection",
    "gen_band_random",
    "gen_lacunary",
    "gen_morrey_exemplar",
    "gen_random_field",
    "gen_weierstrass",
    "holder_zygmund_norm",
    "inverse_transform",
    "lebesgue_norm",
    "lipschitz_exact",
    "lipschitz_norm",
    "lp_decompose",
    "lp_synthesize",
    "make_bank",
    "max_scale",
    "morrey_norm",
    "morrey_norm_details",
    "para_commutator",
    "para_high_low",
    "para_low_high",
    "pointwise_product",
    "predict_product_support",
    "read_lpbm",
    "render_figures",
    "resonant",
    "resonant_commutator",
    "run_suite",
    "spectral_support",
    "write_lpbm",
]
