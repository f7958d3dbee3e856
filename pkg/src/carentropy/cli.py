"""Command-line driver: verification campaigns, violation demo, truth table.

Subcommands
-----------
``verify``          random-state campaigns for one inequality suite
``counterexample``  the explicit joint-extension violation demo
``table1``          the summary truth table (SSA / triangle / MONO-SSA)

Reports are JSON (default) or CSV with a fixed schema; identical
``(config, seed)`` pairs produce byte-identical reports.  Exit codes:
0 = success / expected outcome, 1 = unexpected mathematical violation,
2 = usage error.  Environment overrides: ``CARENTROPY_SEED`` (used when
``--seed`` is not given) and ``CARENTROPY_OUTDIR`` (prepended to relative
``--output`` paths).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .car_algebra import Region, build_context
from .counterexamples import violation_demo
from .errors import CarError
from .inequalities import HOLD_TOL, inequality_report
from .states import random_state, tracial_state

__all__ = ["main", "RunConfig", "cmd_verify", "cmd_counterexample", "cmd_table1"]

SUITES = ("ssa", "triangle", "mono-ssa", "all")
MAX_TRIANGLE_MAGNITUDE = 3.0 * math.log(2.0)


@dataclass(frozen=True)
class RunConfig:
    command: str
    sites: int
    trials: int
    seed: int
    tolerance: float
    output_format: str
    output_path: str | None
    suite: str | None = None
    even: bool = False
    workers: int = 1
    regions: dict[str, tuple[int, ...]] | None = None
    rhoJ: str | None = None


def _parse_region(text: str) -> Region:
    try:
        sites = tuple(sorted(int(tok) for tok in text.split(",") if tok.strip()))
    except ValueError as exc:
        raise ValueError(f"bad region spec {text!r}: {exc}") from None
    return Region(sites)


def _region_str(sites: tuple[int, ...]) -> str:
    return ",".join(str(s) for s in sites)


def _resolve_output(path: str | None) -> str | None:
    if path is None or path == "-":
        return None
    outdir = os.environ.get("CARENTROPY_OUTDIR")
    if outdir and not os.path.isabs(path):
        return os.path.join(outdir, path)
    return path


def _emit(text: str, path: str | None) -> None:
    resolved = _resolve_output(path)
    if resolved is None:
        sys.stdout.write(text)
    else:
        os.makedirs(os.path.dirname(os.path.abspath(resolved)), exist_ok=True)
        with open(resolved, "w", encoding="utf-8") as handle:
            handle.write(text)


def _json_text(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _config_payload(config: RunConfig) -> dict:
    # output_path is where the report goes, not part of what it says;
    # keeping it out makes reruns byte-identical regardless of destination.
    return {
        k: v for k, v in asdict(config).items() if v is not None and k != "output_path"
    }


CSV_HEADER = [
    "trial", "seed", "sites", "I", "J", "K", "parity",
    "ssa_gap", "triangle_gap", "mono_ssa_gap",
    "ssa_verdict", "triangle_verdict", "mono_ssa_verdict",
]


def _csv_text(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_HEADER, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({key: row.get(key, "") for key in CSV_HEADER})
    return buf.getvalue()


def _random_subset(rng: np.random.Generator, pool: list[int], size: int) -> Region:
    picked = rng.choice(np.array(pool), size=size, replace=False)
    return Region(tuple(sorted(int(x) for x in picked)))


def _trial_regions(rng: np.random.Generator, n: int, suite: str, fixed) -> dict[str, Region]:
    """Sample trial regions; disjoint I, J (+K) except the ssa suite, where overlap is fair game."""
    if fixed:
        return fixed
    sites = list(range(1, n + 1))
    if suite == "ssa":
        size_i = int(rng.integers(1, n))
        size_j = int(rng.integers(1, n))
        return {"I": _random_subset(rng, sites, size_i), "J": _random_subset(rng, sites, size_j)}
    perm = [int(x) for x in rng.permutation(np.array(sites))]
    reserve = 1 if suite == "mono-ssa" else 0  # keep a site free for K
    max_i = n - 1 - reserve
    size_i = 1 if max_i <= 1 else int(rng.integers(1, max_i + 1))
    max_j = n - size_i - reserve
    size_j = 1 if max_j <= 1 else int(rng.integers(1, max_j + 1))
    out = {
        "I": Region(tuple(sorted(perm[:size_i]))),
        "J": Region(tuple(sorted(perm[size_i:size_i + size_j]))),
    }
    rest = perm[size_i + size_j:]
    if rest:
        size_k = int(rng.integers(1, len(rest) + 1))
        out["K"] = Region(tuple(sorted(rest[:size_k])))
    return out


def _verify_trial(args) -> dict:
    ctx, config, index, child = args
    rng = np.random.default_rng(child)
    fixed = config.regions and {
        key: Region(val) for key, val in config.regions.items()
    }
    regions = _trial_regions(rng, config.sites, config.suite, fixed)
    rank = int(rng.integers(1, ctx.dim + 1))
    state = random_state(
        ctx, ctx.lattice, even=config.even, rank=rank, seed=rng.integers(0, 2 ** 63)
    )
    report = inequality_report(
        state, regions["I"], regions["J"], regions.get("K"), hold_tol=config.tolerance
    )
    row = {
        "trial": index,
        "seed": config.seed,
        "sites": config.sites,
        "I": _region_str(regions["I"].sites),
        "J": _region_str(regions["J"].sites),
        "K": _region_str(regions["K"].sites) if "K" in regions else "",
        "parity": "even" if report.even_state else "noneven",
        "ssa_gap": report.ssa_gap,
        "triangle_gap": report.triangle_gap,
        "mono_ssa_gap": report.mono_ssa_gap,
        "ssa_verdict": report.verdicts.get("ssa", ""),
        "triangle_verdict": report.verdicts.get("triangle", ""),
        "mono_ssa_verdict": report.verdicts.get("mono_ssa", ""),
    }
    return row


def _unexpected_violations(config: RunConfig, rows: list[dict]) -> list[str]:
    """SSA must never fail; even-state suites must never fail; the triangle
    violation magnitude is bounded by 3 ln 2 for any state."""
    problems = []
    for row in rows:
        if row["ssa_verdict"] == "violated":
            problems.append(f"trial {row['trial']}: ssa violated ({row['ssa_gap']:.3e})")
        if config.even:
            for kind in ("triangle", "mono_ssa"):
                if row[f"{kind}_verdict"] == "violated":
                    problems.append(
                        f"trial {row['trial']}: {kind} violated for an even state "
                        f"({row[f'{kind}_gap']:.3e})"
                    )
        gap = row["triangle_gap"]
        if gap is not None and -gap > MAX_TRIANGLE_MAGNITUDE + config.tolerance:
            problems.append(
                f"trial {row['trial']}: triangle violation exceeds 3 ln 2 ({gap:.3e})"
            )
    return problems


def _run_suite(config: RunConfig) -> tuple[list[dict], dict]:
    ctx = build_context(config.sites)
    children = np.random.SeedSequence(config.seed).spawn(config.trials)
    tasks = [(ctx, config, i, children[i]) for i in range(config.trials)]
    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            rows = list(pool.map(_verify_trial, tasks))
    else:
        rows = [_verify_trial(t) for t in tasks]
    rows.sort(key=lambda r: r["trial"])

    summary: dict = {"trials": config.trials}
    for kind in ("ssa", "triangle", "mono_ssa"):
        gaps = [r[f"{kind}_gap"] for r in rows if r[f"{kind}_gap"] is not None]
        if not gaps:
            continue
        violations = sum(1 for r in rows if r[f"{kind}_verdict"] == "violated")
        summary[kind] = {
            "evaluated": len(gaps),
            "min_gap": min(gaps),
            "max_gap": max(gaps),
            "violations": violations,
        }
    return rows, summary


def cmd_verify(config: RunConfig) -> int:
    rows, summary = _run_suite(config)
    problems = _unexpected_violations(config, rows)
    payload = {
        "config": _config_payload(config),
        "summary": summary,
        "unexpected": problems,
        "trials": rows,
    }
    if config.output_format == "csv":
        _emit(_csv_text(rows), config.output_path)
    else:
        _emit(_json_text(payload), config.output_path)
    return 1 if problems else 0


def _complex_matrix_payload(mat: np.ndarray) -> dict:
    return {
        "re": [[round(float(x.real), 12) for x in row] for row in mat],
        "im": [[round(float(x.imag), 12) for x in row] for row in mat],
    }


def cmd_counterexample(config: RunConfig) -> int:
    ctx = build_context(config.sites)
    regions = {key: Region(val) for key, val in (config.regions or {}).items()}
    K, I, J = regions["K"], regions["I"], regions["J"]
    if config.rhoJ == "random":
        rho_j = random_state(ctx, J, even=True, seed=config.seed)
    else:
        rho_j = tracial_state(ctx, J)
    report = violation_demo(ctx, K, I, J, rhoJ=rho_j)

    from .counterexamples import build_recipe  # recipe re-built for serialization

    recipe = build_recipe(ctx, K, I, J=J, rhoJ=rho_j)
    payload = {
        "config": _config_payload(config),
        "regions": {k: list(v) for k, v in report.regions.items()},
        "entropies": report.entropies,
        "gaps": {
            "mono_ssa": report.mono_ssa_gap,
            "triangle": report.triangle_gap,
            "ssa": report.ssa_gap,
        },
        "verdicts": report.verdicts,
        "residuals": report.residuals,
        "recipe": {
            "rho1_density": _complex_matrix_payload(recipe.rho1.intrinsic()),
            "rho2_tilde_density": _complex_matrix_payload(recipe.rho2_tilde.intrinsic()),
            "rho2_density": _complex_matrix_payload(recipe.rho2.intrinsic()),
            "rhoJ_density": _complex_matrix_payload(recipe.rhoJ.intrinsic()),
            "u1_is_region_parity_unitary": True,
        },
    }
    if config.output_format == "csv":
        rows = [{
            "trial": 0, "seed": config.seed, "sites": config.sites,
            "I": _region_str(I.sites), "J": _region_str(J.sites), "K": _region_str(K.sites),
            "parity": "noneven",
            "ssa_gap": report.ssa_gap,
            "triangle_gap": report.triangle_gap,
            "mono_ssa_gap": report.mono_ssa_gap,
            "ssa_verdict": report.verdicts["ssa"],
            "triangle_verdict": report.verdicts["triangle"],
            "mono_ssa_verdict": report.verdicts["mono_ssa"],
        }]
        _emit(_csv_text(rows), config.output_path)
    else:
        _emit(_json_text(payload), config.output_path)

    reproduced = (
        report.verdicts["mono_ssa"] == "violated"
        and report.verdicts["triangle"] == "violated"
        and report.verdicts["ssa"] == "holds"
    )
    return 0 if reproduced else 1


def cmd_table1(config: RunConfig) -> int:
    """Run the six suites behind the truth table and render its CAR column."""
    base = np.random.SeedSequence(config.seed).spawn(4)

    def sub(suite: str, even: bool, seed_seq) -> tuple[list[dict], dict]:
        cfg = RunConfig(
            command="verify", sites=config.sites, trials=config.trials,
            seed=int(seed_seq.generate_state(1)[0] % (2 ** 31)),
            tolerance=config.tolerance, output_format="json", output_path=None,
            suite=suite, even=even, workers=config.workers,
        )
        return _run_suite(cfg)

    _, ssa_all = sub("ssa", even=False, seed_seq=base[0])
    _, tri_even = sub("triangle", even=True, seed_seq=base[1])
    _, mono_even = sub("mono-ssa", even=True, seed_seq=base[2])

    ctx = build_context(max(config.sites, 3))
    demo = violation_demo(ctx, Region((2,)), Region((1,)), Region((3,)))

    suites = {
        "ssa_all_states": {
            "stats": ssa_all["ssa"],
            "conforms": ssa_all["ssa"]["violations"] == 0,
        },
        "triangle_even_states": {
            "stats": tri_even["triangle"],
            "conforms": tri_even["triangle"]["violations"] == 0,
        },
        "mono_ssa_even_states": {
            "stats": mono_even["mono_ssa"],
            "conforms": mono_even["mono_ssa"]["violations"] == 0,
        },
        "triangle_noneven_counterexample": {
            "stats": {"gap": demo.triangle_gap},
            "conforms": demo.verdicts["triangle"] == "violated",
        },
        "mono_ssa_noneven_counterexample": {
            "stats": {"gap": demo.mono_ssa_gap},
            "conforms": demo.verdicts["mono_ssa"] == "violated",
        },
        "ssa_on_counterexample_state": {
            "stats": {"gap": demo.ssa_gap},
            "conforms": demo.verdicts["ssa"] == "holds",
        },
    }
    all_ok = all(entry["conforms"] for entry in suites.values())
    cells = {
        "SSA": "holds",
        "Triangle": "violated in general, holds for every even state",
        "MONO-SSA": "violated in general, holds for every even state",
    }

    if config.output_format == "json":
        payload = {
            "config": _config_payload(config),
            "cells": cells,
            "suites": suites,
            "conforms": all_ok,
        }
        _emit(_json_text(payload), config.output_path)
    elif config.output_format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["suite", "conforms", "stats"])
        for name, entry in sorted(suites.items()):
            writer.writerow([name, entry["conforms"], json.dumps(entry["stats"], sort_keys=True)])
        _emit(buf.getvalue(), config.output_path)
    else:
        lines = ["Property    CAR lattice verdict", "-" * 72]
        for prop, cell in cells.items():
            lines.append(f"{prop:<11} {cell}")
        lines.append("")
        for name, entry in suites.items():
            status = "ok" if entry["conforms"] else "FAILED"
            lines.append(f"  [{status}] {name}: {json.dumps(entry['stats'], sort_keys=True)}")
        _emit("\n".join(lines) + "\n", config.output_path)
    return 0 if all_ok else 1


def _env_seed(default: int) -> int:
    raw = os.environ.get("CARENTROPY_SEED")
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        return default


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="carentropy",
        description="Entropy inequality campaigns on finite CAR lattices",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--sites", type=int, default=3, help="lattice size n")
    common.add_argument("--seed", type=int, default=None, help="master seed (default 7)")
    common.add_argument("--tolerance", type=float, default=HOLD_TOL)
    common.add_argument("--format", choices=["json", "csv", "text"], default="json",
                        dest="output_format")
    common.add_argument("--output", default=None, help="report path ('-' = stdout)")
    common.add_argument("--workers", type=int, default=1)

    verify = sub.add_parser("verify", parents=[common], help="random-state campaigns")
    verify.add_argument("--suite", choices=SUITES, default="all")
    verify.add_argument("--trials", type=int, default=100)
    verify.add_argument("--even", action="store_true", help="restrict to even states")
    for name in ("I", "J", "K"):
        verify.add_argument(f"--{name}", default=None, help="fixed region, e.g. 1,2")

    counter = sub.add_parser("counterexample", parents=[common],
                             help="joint-extension violation demo")
    counter.add_argument("--K", default="2")
    counter.add_argument("--I", default="1")
    counter.add_argument("--J", default="3")
    counter.add_argument("--J-sites", type=int, default=None, dest="j_sites",
                         help="replace J by this many fresh sites after max(I u K)")
    counter.add_argument("--rhoJ", choices=["tracial", "random"], default="tracial")

    table = sub.add_parser("table1", parents=[common], help="summary truth table")
    table.add_argument("--trials", type=int, default=200)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    seed = _env_seed(7) if args.seed is None else args.seed
    fmt = args.output_format
    if args.command in ("verify", "counterexample") and fmt == "text":
        parser.error(f"{args.command} supports json or csv output")

    try:
        if args.command == "verify":
            if args.sites < 2:
                parser.error("verify needs at least 2 sites")
            if args.suite == "mono-ssa" and args.sites < 3:
                parser.error("the mono-ssa suite needs three disjoint regions (>= 3 sites)")
            regions = {}
            for name in ("I", "J", "K"):
                raw = getattr(args, name)
                if raw is not None:
                    regions[name] = _parse_region(raw).sites
            if regions and not {"I", "J"} <= set(regions):
                parser.error("fixed regions require at least --I and --J")
            config = RunConfig(
                command="verify", sites=args.sites, trials=args.trials, seed=seed,
                tolerance=args.tolerance, output_format=fmt, output_path=args.output,
                suite=args.suite, even=args.even, workers=args.workers,
                regions=regions or None,
            )
            return cmd_verify(config)

        if args.command == "counterexample":
            K = _parse_region(args.K)
            I = _parse_region(args.I)
            if args.j_sites is not None:
                start = max(K.sites + I.sites) + 1
                J = Region(tuple(range(start, start + args.j_sites)))
            else:
                J = _parse_region(args.J)
            if not (K.isdisjoint(I) and K.isdisjoint(J) and I.isdisjoint(J)):
                parser.error("regions K, I, J must be mutually disjoint")
            sites = max(args.sites, max(K.sites + I.sites + J.sites))
            config = RunConfig(
                command="counterexample", sites=sites, trials=1, seed=seed,
                tolerance=args.tolerance, output_format=fmt, output_path=args.output,
                regions={"K": K.sites, "I": I.sites, "J": J.sites}, rhoJ=args.rhoJ,
            )
            return cmd_counterexample(config)

        config = RunConfig(
            command="table1", sites=args.sites, trials=args.trials, seed=seed,
            tolerance=args.tolerance, output_format=fmt, output_path=args.output,
            workers=args.workers,
        )
        return cmd_table1(config)
    except CarError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
