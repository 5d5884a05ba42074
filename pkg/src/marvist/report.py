"""Report artifacts: delimited outputs and matplotlib figures for the CLI
report paths (channel rankings and benchmark timings)."""
from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def write_ranking_csv(attr: str, ranked, path: str | Path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["rank", "channel", "valid", "reasons"])
        for i, entry in enumerate(ranked, 1):
            writer.writerow([i, entry.channel.value, entry.valid, "; ".join(entry.reasons)])


def ranking_figure(attr: str, ranked, recommended, path: str | Path) -> None:
    names = [e.channel.value for e in ranked]
    scores = list(range(len(ranked), 0, -1))
    colors = ["#2a9d8f" if e.valid else "#e76f51" for e in ranked]
    edge = ["#1b4332" if e.channel is recommended else "none" for e in ranked]

    fig, ax = plt.subplots(figsize=(7, 0.45 * len(ranked) + 1.2))
    ax.barh(range(len(ranked)), scores, color=colors, edgecolor=edge, linewidth=2)
    ax.set_yticks(range(len(ranked)), names)
    ax.invert_yaxis()
    ax.set_xlabel("effectiveness rank (longer is better)")
    ax.set_title(f"channel ranking for {attr!r} (outlined = recommended)")
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)


def write_bench_csv(rows: list[dict], path: str | Path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["metric", "n", "template", "median_s", "runs"])
        for row in rows:
            writer.writerow([row["metric"], row["n"], row["template"],
                             f"{row['median_s']:.6f}", row["runs"]])


def bench_figure(rows: list[dict], path: str | Path) -> None:
    names = [f"{r['metric']}\n(n={r['n']})" for r in rows]
    medians = [r["median_s"] for r in rows]

    fig, ax = plt.subplots(figsize=(6, 4))
    bars = ax.bar(names, medians, color="#457b9d")
    for bar, m in zip(bars, medians):
        ax.annotate(f"{m * 1000:.1f} ms", (bar.get_x() + bar.get_width() / 2, m),
                    ha="center", va="bottom", fontsize=9)
    ax.set_ylabel("median seconds")
    ax.set_title("engine throughput (median of timed runs after warm-up)")
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)
