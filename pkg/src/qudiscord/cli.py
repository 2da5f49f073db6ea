"""Command-line interface: state generation, discord reports, random-state
campaigns and campaign analysis.

Campaign outputs are reproducible: sample i uses the seed derived from
(master seed, i), so the CSV bytes depend only on (seed, n, qubits),
never on thread count or scheduling.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import entropic, geometric, states
from .errors import ParseError

CSV_COLUMNS = [
    "index",
    "seed",
    "theta_opt",
    "phi_opt",
    "discord_full",
    "discord_candidate",
    "discord_geometric",
    "candidate_gap",
    "at_pole_or_equator",
]

DEFAULT_ANGLE_TOL = 1e-2
DEFAULT_VALUE_TOL = 1e-6

_OPT_MODES = {
    "candidate": entropic.CANDIDATE,
    "theta": entropic.THETA_ONLY,
    "full": entropic.FULL,
}


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def cmd_gen(count, qubits=None, d=None, seed=0, x_project=False, out_dir="states"):
    """Write `count` HS-random density-matrix JSON files; returns the paths."""
    if (qubits is None) == (d is None):
        raise ValueError("specify exactly one of qubits / d")
    dim_b = 2 ** (qubits - 1) if qubits is not None else int(d)
    dim = 2 * dim_b
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for i in range(count):
        dm = states.sample_hs_random(dim, states.derive_seed(seed, i))
        if x_project:
            dm = states.project_to_x(dm)
        path = out / f"state_{i:05d}.json"
        states.save_state(dm, path)
        paths.append(path)
    return paths


def cmd_discord(
    input_path=None,
    state=None,
    method: str = "both",
    opt_mode: str = entropic.FULL,
    escalate: bool = False,
    json_out=None,
):
    """Single-state report; returns the report dict."""
    if (input_path is None) == (state is None):
        raise ValueError("specify exactly one of input_path / state")
    if input_path is not None:
        dm = states.load_state(input_path)
        source = str(input_path)
    else:
        dm = states.named_state(state)
        source = state
    report = {
        "source": source,
        "dim_b": dm.dim_b,
        "structure": states.classify_structure(dm).tag,
        "timing_s": {},
    }
    if method in ("entropic", "both"):
        t0 = time.perf_counter()
        res = entropic.entropic_discord(dm, opt_mode, escalate=escalate)
        report["timing_s"]["entropic"] = time.perf_counter() - t0
        report["entropic"] = {
            "discord": res.discord,
            "classical_correlation": res.classical_correlation,
            "mutual_information": res.mutual_information,
            "theta_opt": res.optimal_angles.theta,
            "phi_opt": res.optimal_angles.phi,
            "mode": res.mode,
            "candidate_gap": res.candidate_gap,
        }
    if method in ("geometric", "both"):
        t0 = time.perf_counter()
        value, axis, chi = geometric.geometric_discord(dm)
        report["timing_s"]["geometric"] = time.perf_counter() - t0
        report["geometric"] = {
            "discord": value,
            "axis": [float(v) for v in axis],
            "nearest_classical_psd": chi.psd_flag,
        }
    if json_out is not None:
        with open(json_out, "w") as fh:
            json.dump(report, fh, indent=2)
            fh.write("\n")
    return report


def _campaign_sample(index, master_seed, dim, angle_tol, value_tol):
    seed = states.derive_seed(master_seed, index)
    dm = states.project_to_x(states.sample_hs_random(dim, seed))
    full = entropic.entropic_discord(dm, entropic.FULL)
    geo, _, _ = geometric.geometric_discord(dm)
    theta = full.optimal_angles.theta
    at_pole = (
        min(theta, abs(theta - 0.5 * math.pi)) <= angle_tol
        or full.candidate_gap <= value_tol
    )
    return {
        "index": index,
        "seed": seed,
        "theta_opt": theta,
        "phi_opt": full.optimal_angles.phi,
        "discord_full": full.discord,
        "discord_candidate": full.discord + full.candidate_gap,
        "discord_geometric": geo,
        "candidate_gap": full.candidate_gap,
        "at_pole_or_equator": at_pole,
    }


def cmd_campaign(
    n,
    qubits,
    seed=0,
    out_csv="campaign.csv",
    out_json=None,
    threads: int = 1,
    angle_tol: float = DEFAULT_ANGLE_TOL,
    value_tol: float = DEFAULT_VALUE_TOL,
):
    """HS-random X-state survey; writes per-sample CSV rows and a summary.

    Each row records the fully optimized discord, the candidate-angle
    discord, the geometric discord and whether the optimum sits at a pole
    or on the equator of the measurement sphere.
    """
    if qubits not in (2, 3):
        raise ValueError(f"qubits must be 2 or 3, got {qubits}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    dim = 2**qubits

    def work(i):
        return _campaign_sample(i, seed, dim, angle_tol, value_tol)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(work, range(n), chunksize=max(1, n // (8 * threads))))
    else:
        rows = [work(i) for i in range(n)]

    with open(out_csv, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow(
                [
                    row["index"],
                    row["seed"],
                    _fmt(row["theta_opt"]),
                    _fmt(row["phi_opt"]),
                    _fmt(row["discord_full"]),
                    _fmt(row["discord_candidate"]),
                    _fmt(row["discord_geometric"]),
                    _fmt(row["candidate_gap"]),
                    "true" if row["at_pole_or_equator"] else "false",
                ]
            )

    gaps = [row["candidate_gap"] for row in rows]
    summary = {
        "n": n,
        "qubits": qubits,
        "fraction_at_pole_or_equator": sum(
            1 for row in rows if row["at_pole_or_equator"]
        )
        / n,
        "angle_tol": angle_tol,
        "value_tol": value_tol,
        "mean_candidate_gap": sum(gaps) / n,
        "max_candidate_gap": max(gaps),
    }
    if out_json is not None:
        with open(out_json, "w") as fh:
            json.dump(summary, fh, indent=2)
            fh.write("\n")
    return summary


def cmd_analyze(csv_in, points_csv=None, stats_json=None, bins: int = 20):
    """Export optimal-measurement Bloch points and campaign statistics."""
    with open(csv_in, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ParseError(f"{csv_in}: no header row")
        missing = [c for c in CSV_COLUMNS if c not in reader.fieldnames]
        if missing:
            raise ParseError(f"{csv_in}: missing columns {missing}")
        rows = list(reader)
    if not rows:
        raise ParseError(f"{csv_in}: campaign CSV has no data rows")

    thetas = np.array([float(r["theta_opt"]) for r in rows])
    phis = np.array([float(r["phi_opt"]) for r in rows])
    gaps = np.array([float(r["candidate_gap"]) for r in rows])
    flags = [r["at_pole_or_equator"].strip().lower() == "true" for r in rows]

    if points_csv is not None:
        with open(points_csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["x", "y", "z"])
            for th, ph in zip(thetas, phis):
                writer.writerow(
                    [
                        _fmt(math.sin(th) * math.cos(ph)),
                        _fmt(math.sin(th) * math.sin(ph)),
                        _fmt(math.cos(th)),
                    ]
                )

    counts, edges = np.histogram(
        gaps, bins=bins, range=(0.0, max(float(gaps.max()), 1e-12))
    )
    stats = {
        "n": len(rows),
        "fraction_at_pole_or_equator": sum(flags) / len(rows),
        "mean_candidate_gap": float(gaps.mean()),
        "max_candidate_gap": float(gaps.max()),
        "candidate_gap_histogram": {
            "bin_edges": [float(e) for e in edges],
            "counts": [int(c) for c in counts],
        },
    }
    if stats_json is not None:
        with open(stats_json, "w") as fh:
            json.dump(stats, fh, indent=2)
            fh.write("\n")
    return stats


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qudiscord",
        description="Entropic and geometric quantum discord for qubit-qudit states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate HS-random density-matrix files")
    p_gen.add_argument("--count", type=int, required=True)
    group = p_gen.add_mutually_exclusive_group(required=True)
    group.add_argument("--qubits", type=int, help="total qubit count (dim = 2^n)")
    group.add_argument("--d", type=int, help="qudit dimension of party B (dim = 2d)")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--x-project", action="store_true")
    p_gen.add_argument("--out-dir", required=True)

    p_dis = sub.add_parser("discord", help="compute discord for one state")
    group = p_dis.add_mutually_exclusive_group(required=True)
    group.add_argument("--input", help="density-matrix JSON file")
    group.add_argument(
        "--state", help="named state: bell1..bell4, werner:<z>, ghz:<n>, w:<n>, mixed:<dim>"
    )
    p_dis.add_argument("--method", choices=["entropic", "geometric", "both"], default="both")
    p_dis.add_argument("--opt", choices=sorted(_OPT_MODES), default="full")
    p_dis.add_argument(
        "--escalate",
        action="store_true",
        help="promote candidate mode to theta-only when phi provably drops",
    )
    p_dis.add_argument("--json", help="write the report to this path")

    p_cam = sub.add_parser("campaign", help="random X-state measurement survey")
    p_cam.add_argument("--n", type=int, required=True)
    p_cam.add_argument("--qubits", type=int, choices=[2, 3], required=True)
    p_cam.add_argument("--seed", type=int, default=0)
    p_cam.add_argument("--csv", required=True, help="per-sample output CSV")
    p_cam.add_argument("--json", help="summary JSON path")
    p_cam.add_argument("--threads", type=int, default=1)
    p_cam.add_argument("--tol-angle", type=float, default=DEFAULT_ANGLE_TOL)
    p_cam.add_argument("--tol-value", type=float, default=DEFAULT_VALUE_TOL)

    p_ana = sub.add_parser("analyze", help="export Bloch points and stats from a campaign CSV")
    p_ana.add_argument("--input", required=True)
    p_ana.add_argument("--csv", help="Bloch-point CSV output path")
    p_ana.add_argument("--json", help="statistics JSON output path")

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "gen":
        paths = cmd_gen(
            count=args.count,
            qubits=args.qubits,
            d=args.d,
            seed=args.seed,
            x_project=args.x_project,
            out_dir=args.out_dir,
        )
        print(f"wrote {len(paths)} states to {args.out_dir}")
    elif args.command == "discord":
        report = cmd_discord(
            input_path=args.input,
            state=args.state,
            method=args.method,
            opt_mode=_OPT_MODES[args.opt],
            escalate=args.escalate,
            json_out=args.json,
        )
        json.dump(report, sys.stdout, indent=2)
        print()
    elif args.command == "campaign":
        summary = cmd_campaign(
            n=args.n,
            qubits=args.qubits,
            seed=args.seed,
            out_csv=args.csv,
            out_json=args.json,
            threads=args.threads,
            angle_tol=args.tol_angle,
            value_tol=args.tol_value,
        )
        json.dump(summary, sys.stdout, indent=2)
        print()
    elif args.command == "analyze":
        stats = cmd_analyze(args.input, points_csv=args.csv, stats_json=args.json)
        json.dump(stats, sys.stdout, indent=2)
        print()
    return 0


if __name__ == "__main__":
    sys.exit(main())
