"""Render result JSON into figures and delimited tables.

Scan results become a potential-energy-curve figure (with an error panel
when reference energies are present) and a CSV with one row per point;
trajectory results (QITE/QLanczos) become an energy-vs-imaginary-time
figure and CSV. Figures are written as PNG next to the CSV.
"""
from __future__ import annotations

import csv
import json
import re
from pathlib import Path


def _scan_axis(points: list[dict]) -> tuple[list[float], str]:
    """Pull a numeric scan coordinate out of fixture names when possible."""
    values = []
    for point in points:
        stem = Path(point["system"]).stem
        match = re.search(r"(\d+\.\d+)", stem)
        if match is None:
            return list(range(len(points))), "scan index"
        values.append(float(match.group(1)))
    return values, "bond distance (angstrom)"


def _write_scan_csv(points: list[dict], axis: list[float], path: Path) -> None:
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        header = ["system", "coordinate", "energy"]
        has_ref = any("reference_energy" in p for p in points)
        if has_ref:
            header += ["reference_energy", "error"]
        writer.writerow(header)
        for x, point in zip(axis, points):
            row = [point["system"], x, point["energy"]]
            if has_ref:
                row += [point.get("reference_energy", ""), point.get("error", "")]
            writer.writerow(row)


def _render_scan(result: dict, outdir: Path, stem: str) -> list[Path]:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    points = result["scan"]
    axis, axis_label = _scan_axis(points)
    energies = [p["energy"] for p in points]
    has_ref = any("reference_energy" in p for p in points)

    csv_path = outdir / f"{stem}.csv"
    _write_scan_csv(points, axis, csv_path)

    n_panels = 2 if has_ref else 1
    fig, axes = plt.subplots(
        n_panels, 1, figsize=(5.0, 3.2 * n_panels), sharex=True, squeeze=False
    )
    top = axes[0][0]
    top.plot(axis, energies, "o-", label=result.get("algorithm", "energy"))
    if has_ref:
        refs = [p.get("reference_energy") for p in points]
        top.plot(axis, refs, "k--", label="reference")
    top.set_ylabel("energy (hartree)")
    top.legend(frameon=False)
    if has_ref:
        bottom = axes[1][0]
        errors = [1000.0 * p.get("error", 0.0) for p in points]
        bottom.plot(axis, errors, "s-", color="tab:red")
        bottom.axhline(0.0, color="k", linewidth=0.6)
        bottom.set_ylabel("error (millihartree)")
        bottom.set_xlabel(axis_label)
        if "mse_milli_hartree" in result:
            bottom.set_title(
                f"mean signed error {result['mse_milli_hartree']:.3f} mEh", fontsize=9
            )
    else:
        top.set_xlabel(axis_label)
    fig.tight_layout()
    png_path = outdir / f"{stem}.png"
    fig.savefig(png_path, dpi=150)
    plt.close(fig)
    return [csv_path, png_path]


def _render_trajectory(result: dict, outdir: Path, stem: str) -> list[Path]:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    trajectory = result["trajectory"]
    dbeta = result.get("dbeta", 1.0)
    betas = [k * dbeta for k in range(len(trajectory))]

    csv_path = outdir / f"{stem}.csv"
    with csv_path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["beta", "energy"])
        writer.writerows(zip(betas, trajectory))

    fig, ax = plt.subplots(figsize=(5.0, 3.2))
    ax.plot(betas, trajectory, "-", color="tab:blue")
    ax.set_xlabel("imaginary time beta (1/hartree)")
    ax.set_ylabel("energy (hartree)")
    if "energy" in result:
        ax.axhline(result["energy"], color="tab:green", linewidth=0.8,
                   label=f"final {result['energy']:.8f}")
        ax.legend(frameon=False)
    fig.tight_layout()
    png_path = outdir / f"{stem}.png"
    fig.savefig(png_path, dpi=150)
    plt.close(fig)
    return [csv_path, png_path]


def render_report(results_path: str | Path, outdir: str | Path) -> list[Path]:
    """Write CSV + PNG for a result file; returns the created paths."""
    results_path = Path(results_path)
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    result = json.loads(results_path.read_text())
    stem = results_path.stem
    algorithm = result.get("algorithm", "run")

    if "scan" in result:
        return _render_scan(result, outdir, f"{stem}_{algorithm}_scan")
    if "trajectory" in result:
        return _render_trajectory(result, outdir, f"{stem}_{algorithm}_trajectory")
    raise ValueError(
        f"{results_path}: nothing to plot (no 'scan' or 'trajectory' field)"
    )
