"""Command-line front end: generators, norms, operators, and the check suites.

Every run is reproducible from its configuration alone: options come from an
optional JSON config file plus command-line flags (flags win), and all
randomness flows through explicit integer seeds.

Exit codes: 0 success / all checks pass, 1 runtime failure (missing file,
failed check), 2 usage or parameter error (including mathematical-hypothesis
violations rejected by the library).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from .dyadic_filters import make_bank, max_scale
from .morrey_norms import (
    CubeFamily,
    NormParams,
    besov_morrey_norm,
    holder_zygmund_norm,
    lebesgue_norm,
    lipschitz_exact,
    lipschitz_norm,
    morrey_norm_details,
)
from .paraproducts import (
    block_commutator,
    bony_decompose,
    dealiased_product,
    para_high_low,
    para_low_high,
    resonant,
    resonant_commutator,
)
from .spectral_grid import TorusGrid, read_lpbm, write_lpbm
from .testfuncs import GenSpec
from .verifier import (
    DEFAULT_SEED,
    estimate_commutator_constant,
    emit_report,
    render_figures,
    run_suite,
)
from .paraproducts import para_commutator

GEN_KINDS = (
    "weierstrass",
    "lacunary",
    "band_random",
    "random_field",
    "morrey_exemplar",
    "annulus_collection",
)
NORM_KINDS = ("morrey", "lebesgue", "besov-morrey", "holder-zygmund", "lipschitz")
PARA_OPS = (
    "product",
    "low-high",
    "high-low",
    "resonant",
    "bony-split",
    "commutator-resonant",
    "commutator-block",
    "commutator-para",
)


@dataclass(frozen=True)
class RunConfig:
    """One resolved run: subcommand plus its fully merged option mapping."""

    command: str
    options: dict

    def to_json(self) -> str:
        return json.dumps({"command": self.command, "options": self.options}, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        obj = json.loads(text)
        return cls(obj["command"], dict(obj["options"]))


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    """Merge the JSON config file (if any) under the explicit flags."""
    options = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    if args.config is not None:
        loaded = json.loads(Path(args.config).read_text())
        if isinstance(loaded, dict) and "options" in loaded:
            loaded = loaded["options"]
        for key, value in loaded.items():
            key = key.replace("-", "_")
            if key in options and options[key] is None:
                options[key] = value
    return RunConfig(args.command, options)


def _require(options: dict, *keys: str) -> list:
    values = []
    for key in keys:
        if options.get(key) is None:
            raise ValueError(f"missing required option --{key.replace('_', '-')}")
        values.append(options[key])
    return values


def _print(record: dict) -> None:
    sys.stdout.write(json.dumps(record) + "\n")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_gen(config: RunConfig) -> int:
    opt = config.options
    kind, n, N, out = _require(opt, "kind", "n", "N", "out")
    grid = TorusGrid(int(n), int(N))
    params: dict = {}
    if kind == "weierstrass":
        params["alpha"] = _require(opt, "alpha")[0]
        params["depth"] = int(opt["depth"]) if opt.get("depth") is not None else max_scale(grid) - 1
        if opt.get("seed") is not None:
            params["seed"] = int(opt["seed"])
    elif kind == "lacunary":
        params["s"] = _require(opt, "s")[0]
        params["p"] = opt["p"] if opt.get("p") is not None else 2.0
        params["q"] = opt["q"] if opt.get("q") is not None else 1.0
        params["depth"] = int(opt["depth"]) if opt.get("depth") is not None else max_scale(grid) - 1
        params["seed"] = int(opt["seed"]) if opt.get("seed") is not None else 0
    elif kind == "band_random":
        params["j"] = int(_require(opt, "j")[0])
        params["seed"] = int(opt["seed"]) if opt.get("seed") is not None else 0
    elif kind == "random_field":
        params["seed"] = int(opt["seed"]) if opt.get("seed") is not None else 0
        if opt.get("decay") is not None:
            params["decay"] = opt["decay"]
        if opt.get("radius") is not None:
            params["radius"] = opt["radius"]
    elif kind == "morrey_exemplar":
        params["p"] = opt["p"] if opt.get("p") is not None else 2.0
    elif kind == "annulus_collection":
        params["s"] = _require(opt, "s")[0]
        params["p"] = opt["p"] if opt.get("p") is not None else 2.0
        params["q"] = opt["q"] if opt.get("q") is not None else 1.0
        params["depth"] = int(opt["depth"]) if opt.get("depth") is not None else max_scale(grid) - 3
        params["seed"] = int(opt["seed"]) if opt.get("seed") is not None else 0
        params["mode"] = opt["mode"] if opt.get("mode") is not None else "annulus"
    else:
        raise ValueError(f"unknown generator kind {kind!r}; expected one of {GEN_KINDS}")

    spec = GenSpec(kind, int(n), int(N), params)
    built = spec.build()
    out_path = Path(out)
    sidecar = out_path.with_suffix(".json")
    written: list[str] = []
    if isinstance(built, list):
        for j, member in enumerate(built):
            member_path = out_path.with_suffix(f".j{j}.lpbm")
            write_lpbm(member_path, member)
            written.append(str(member_path))
    else:
        write_lpbm(out_path, built)
        written.append(str(out_path))
    sidecar.write_text(
        json.dumps(
            {"spec": json.loads(spec.to_json()), "files": written},
            sort_keys=True,
            indent=2,
        )
    )
    _print({"kind": kind, "files": written, "sidecar": str(sidecar)})
    return 0


def _family_metadata(grid: TorusGrid, attained_scale: int | None = None) -> dict:
    meta = {
        "cubes": "axis-aligned dyadic, anchored at lattice points",
        "scales": grid.N.bit_length(),
        "n": grid.n,
        "N": grid.N,
    }
    if attained_scale is not None:
        meta["attained_scale"] = attained_scale
    return meta


def cmd_norm(config: RunConfig) -> int:
    opt = config.options
    kind, path = _require(opt, "norm", "infile")
    f = read_lpbm(path)
    grid = f.grid
    if kind == "morrey":
        p, q = _require(opt, "p", "q")
        value, attained = morrey_norm_details(f, p, q, CubeFamily(grid))
        record = {
            "norm_kind": "morrey",
            "params": {"p": p, "q": q},
            "value": value,
            "family_metadata": _family_metadata(grid, attained),
        }
    elif kind == "lebesgue":
        p = _require(opt, "p")[0]
        record = {
            "norm_kind": "lebesgue",
            "params": {"p": p},
            "value": lebesgue_norm(f, p),
            "family_metadata": _family_metadata(grid),
        }
    elif kind == "besov-morrey":
        p, q, r, s = _require(opt, "p", "q", "r", "s")
        bank = make_bank(grid)
        value = besov_morrey_norm(f, NormParams(p, q, r, s), bank)
        record = {
            "norm_kind": "besov-morrey",
            "params": {"p": p, "q": q, "r": r, "s": s},
            "value": value,
            "family_metadata": _family_metadata(grid),
        }
    elif kind == "holder-zygmund":
        beta = _require(opt, "beta")[0]
        bank = make_bank(grid)
        record = {
            "norm_kind": "holder-zygmund",
            "params": {"beta": beta},
            "value": holder_zygmund_norm(f, beta, bank),
            "family_metadata": _family_metadata(grid),
        }
    elif kind == "lipschitz":
        alpha = _require(opt, "alpha")[0]
        meta = _family_metadata(grid)
        meta["exact"] = lipschitz_exact(grid)
        record = {
            "norm_kind": "lipschitz",
            "params": {"alpha": alpha},
            "value": lipschitz_norm(f, alpha),
            "family_metadata": meta,
        }
    else:
        raise ValueError(f"unknown norm kind {kind!r}; expected one of {NORM_KINDS}")
    _print(record)
    return 0


def cmd_para(config: RunConfig) -> int:
    opt = config.options
    op = _require(opt, "op")[0]
    files = opt.get("files") or []
    binary_ops = ("product", "low-high", "high-low", "resonant", "bony-split")
    needed = 3 if op == "commutator-resonant" else 2
    if op not in PARA_OPS:
        raise ValueError(f"unknown operator {op!r}; expected one of {PARA_OPS}")
    if len(files) != needed:
        raise ValueError(f"operator {op!r} takes exactly {needed} input files, got {len(files)}")
    inputs = [read_lpbm(p) for p in files]
    out = Path(_require(opt, "out")[0])
    bank = make_bank(inputs[0].grid)

    if op in binary_ops:
        f, g = inputs
        if op == "bony-split":
            split = bony_decompose(f, g, bank)
            parts = {
                "low_high": split.low_high,
                "high_low": split.high_low,
                "resonant": split.resonant,
            }
            written = []
            for name, part in parts.items():
                part_path = out.with_suffix(f".{name}.lpbm")
                write_lpbm(part_path, part)
                written.append(str(part_path))
            product = dealiased_product(f, g)
            residual = (split.total() - product).sup_norm()
            ref = product.sup_norm()
            _print(
                {
                    "op": op,
                    "files": written,
                    "residual_sup": residual,
                    "residual_relative": residual / ref if ref > 0 else residual,
                }
            )
            return 0
        table = {
            "product": dealiased_product,
            "low-high": lambda a, b: para_low_high(a, b, bank),
            "high-low": lambda a, b: para_high_low(a, b, bank),
            "resonant": lambda a, b: resonant(a, b, bank),
        }
        result = table[op](f, g)
    elif op == "commutator-resonant":
        result = resonant_commutator(inputs[0], inputs[1], inputs[2], bank)
    else:  # commutator-block / commutator-para at one scale j
        j = int(_require(opt, "j")[0])
        fn = block_commutator if op == "commutator-block" else para_commutator
        result = fn(inputs[0], inputs[1], j, bank)
    write_lpbm(out, result)
    _print({"op": op, "files": [str(out)]})
    return 0


def cmd_verify(config: RunConfig) -> int:
    opt = config.options
    suite = opt.get("suite") or "all"
    n = int(opt["n"]) if opt.get("n") is not None else 1
    N = int(opt["N"]) if opt.get("N") is not None else 1024
    seed = int(opt["seed"]) if opt.get("seed") is not None else DEFAULT_SEED
    threads = int(opt["threads"]) if opt.get("threads") is not None else None
    out_dir = Path(opt.get("out_dir") or "reports")
    records, series = run_suite(suite, n, N, seed=seed, threads=threads)

    window = (opt.get("alpha"), opt.get("beta"), opt.get("s"))
    if all(v is not None for v in window):
        alpha, beta, s = (float(v) for v in window)
        Ns = (max(8, N // 4), max(8, N // 2), N)
        records.append(
            estimate_commutator_constant(alpha, beta, s, 2, 1, 2, seed, 10, n, Ns)
        )

    json_path, csv_path, all_pass = emit_report(records, series, out_dir, {"n": n, "N": N})
    outputs = [str(json_path), str(csv_path)]
    if not opt.get("no_figures"):
        outputs += [str(p) for p in render_figures(records, series, out_dir)]
    for rec in records:
        ratio = f"{rec.ratio:.4g}" if math.isfinite(rec.ratio) else "inf"
        sys.stdout.write(
            f"{'PASS' if rec.passed else 'FAIL'} {rec.check_name} "
            f"lhs={rec.lhs:.6g} rhs={rec.rhs:.6g} ratio={ratio}\n"
        )
    _print({"suite": suite, "all_pass": all_pass, "outputs": outputs})
    return 0 if all_pass else 1


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lptorus",
        description="Dyadic frequency analysis on periodic grids: generators, "
        "norms, paraproducts, and property-check suites.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="JSON file with default options (flags win)")

    g = sub.add_parser("gen", help="generate a test function and write it as LPBM")
    add_common(g)
    g.add_argument("--kind", choices=GEN_KINDS)
    g.add_argument("--n", type=int)
    g.add_argument("--N", type=int)
    g.add_argument("--alpha", type=float)
    g.add_argument("--s", type=float)
    g.add_argument("--p", type=float)
    g.add_argument("--q", type=float)
    g.add_argument("--depth", type=int)
    g.add_argument("--j", type=int)
    g.add_argument("--seed", type=int)
    g.add_argument("--decay", type=float)
    g.add_argument("--radius", type=float)
    g.add_argument("--mode")
    g.add_argument("--out")

    m = sub.add_parser("norm", help="evaluate a norm of an LPBM file")
    add_common(m)
    m.add_argument("--norm", choices=NORM_KINDS)
    m.add_argument("--in", dest="infile")
    m.add_argument("--p", type=float)
    m.add_argument("--q", type=float)
    m.add_argument("--r", type=float)
    m.add_argument("--s", type=float)
    m.add_argument("--beta", type=float)
    m.add_argument("--alpha", type=float)

    p = sub.add_parser("para", help="apply a paraproduct/commutator operator to LPBM files")
    add_common(p)
    p.add_argument("--op", choices=PARA_OPS)
    p.add_argument("files", nargs="*")
    p.add_argument("--j", type=int)
    p.add_argument("--out")

    v = sub.add_parser("verify", help="run a check suite and write reports and figures")
    add_common(v)
    v.add_argument("--suite", choices=("exact", "constants", "decay", "all"))
    v.add_argument("--n", type=int)
    v.add_argument("--N", type=int)
    v.add_argument("--seed", type=int)
    v.add_argument("--threads", type=int)
    v.add_argument("--out-dir", dest="out_dir")
    v.add_argument("--alpha", type=float, help="extra commutator window: Lipschitz order")
    v.add_argument("--beta", type=float, help="extra commutator window: rough-factor order")
    v.add_argument("--s", type=float, help="extra commutator window: base smoothness")
    v.add_argument("--no-figures", dest="no_figures", action="store_const", const=True)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = _resolve_config(args)
        handler = {
            "gen": cmd_gen,
            "norm": cmd_norm,
            "para": cmd_para,
            "verify": cmd_verify,
        }[args.command]
        return handler(config)
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except FileNotFoundError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
