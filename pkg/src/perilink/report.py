"""CSV and figure rendering for the batch report commands.

qscan and sweep write their JSON payloads next to a flat CSV summary and a
couple of matplotlib figures when an output directory is requested.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def _write_json(path: Path, payload: dict):
    path.write_text(json.dumps(payload, indent=1, sort_keys=True) + "\n")


def write_qscan_outputs(report: dict, out_dir: str) -> list[str]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    jpath = out / "qscan_report.json"
    _write_json(jpath, report)
    written.append(str(jpath))

    rows = report["results"]["groups"]
    cpath = out / "qscan_summary.csv"
    with open(cpath, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["group", "order", "n", "h2", "h3", "q", "q_trivial"])
        for r in rows:
            w.writerow([r["group"], r["order"], r["n"],
                        ";".join(map(str, r["h2"])),
                        ";".join(map(str, r["h3"])),
                        ";".join(map(str, r["q"])),
                        r["q_trivial"]])
    written.append(str(cpath))

    names = [r["group"] for r in rows]
    h3_orders = [_group_size(r["h3"]) for r in rows]
    h2_orders = [_group_size(r["h2"]) for r in rows]
    fig, ax = plt.subplots(figsize=(max(6, 0.7 * len(names)), 4))
    x = range(len(names))
    ax.bar([i - 0.2 for i in x], h2_orders, width=0.4, label="|H2|")
    ax.bar([i + 0.2 for i in x], h3_orders, width=0.4, label="|H3|")
    ax.set_xticks(list(x))
    ax.set_xticklabels(names, rotation=45, ha="right")
    ax.set_ylabel("order")
    ax.set_title("Homology orders across the scanned catalog")
    ax.legend()
    fig.tight_layout()
    fpath = out / "qscan_homology.png"
    fig.savefig(fpath, dpi=150)
    plt.close(fig)
    written.append(str(fpath))
    return written


def _group_size(factors) -> int:
    size = 1
    for f in factors:
        size *= f
    return size


def write_sweep_outputs(report: dict, out_dir: str) -> list[str]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    jpath = out / "sweep_report.json"
    _write_json(jpath, report)
    written.append(str(jpath))

    cells = report["results"]["cells"]
    cpath = out / "sweep_summary.csv"
    with open(cpath, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["diagram", "group", "homs", "surjections", "weak_checked",
                    "weak_pass", "full_checked", "full_pass", "cap_skipped",
                    "failures"])
        for c in cells:
            w.writerow([c["diagram"], c["group"], c["homs"], c["surjections"],
                        c["weak_checked"], c["weak_pass"], c["full_checked"],
                        c["full_pass"], c["cap_skipped"], len(c["failures"])])
    written.append(str(cpath))

    diagrams = sorted({c["diagram"] for c in cells})
    groups = sorted({c["group"] for c in cells})
    grid = [[0] * len(groups) for _ in diagrams]
    for c in cells:
        grid[diagrams.index(c["diagram"])][groups.index(c["group"])] = \
            c["surjections"]
    fig, ax = plt.subplots(figsize=(max(6, 0.6 * len(groups)),
                                    max(4, 0.5 * len(diagrams))))
    im = ax.imshow(grid, aspect="auto", cmap="viridis")
    ax.set_xticks(range(len(groups)))
    ax.set_xticklabels(groups, rotation=45, ha="right")
    ax.set_yticks(range(len(diagrams)))
    ax.set_yticklabels(diagrams)
    ax.set_title("Surjection counts per (diagram, group)")
    fig.colorbar(im, ax=ax, label="surjections")
    fig.tight_layout()
    fpath = out / "sweep_surjections.png"
    fig.savefig(fpath, dpi=150)
    plt.close(fig)
    written.append(str(fpath))

    totals = {
        "weak_pass": sum(c["weak_pass"] for c in cells),
        "weak_checked": sum(c["weak_checked"] for c in cells),
        "full_pass": sum(c["full_pass"] for c in cells),
        "full_checked": sum(c["full_checked"] for c in cells),
    }
    fig, ax = plt.subplots(figsize=(5, 4))
    labels = ["weak", "full"]
    checked = [totals["weak_checked"], totals["full_checked"]]
    passed = [totals["weak_pass"], totals["full_pass"]]
    ax.bar([i - 0.2 for i in range(2)], checked, width=0.4, label="checked")
    ax.bar([i + 0.2 for i in range(2)], passed, width=0.4, label="passed")
    ax.set_xticks(range(2))
    ax.set_xticklabels(labels)
    ax.set_title("Necessity verdicts across the sweep")
    ax.legend()
    fig.tight_layout()
    fpath = out / "sweep_verdicts.png"
    fig.savefig(fpath, dpi=150)
    plt.close(fig)
    written.append(str(fpath))
    return written
