#!/usr/bin/env python3
"""Plot reward and regret curves from a trace.csv produced by `wptsim run`."""

import argparse
import csv
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def load(path):
    series = defaultdict(lambda: defaultdict(list))
    with open(path, newline="") as f:
        for row in csv.DictReader(f):
            alg = row["algorithm"]
            series[alg]["round"].append(int(row["round"]))
            series[alg]["reward"].append(float(row["reward"]))
            series[alg]["ub"].append(float(row["ub_reward"]))
            series[alg]["gua_true"].append(float(row["gua_true_reward"]))
            series[alg]["alpha_regret"].append(float(row["alpha_regret_cum"]))
            series[alg]["ub_regret"].append(float(row["ub_regret_cum"]))
    return series


def smooth(values, window):
    out, acc = [], 0.0
    for i, v in enumerate(values):
        acc += v
        if i >= window:
            acc -= values[i - window]
        out.append(acc / min(i + 1, window))
    return out


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("trace", help="trace.csv from a run")
    parser.add_argument("--out", default="traces.png")
    parser.add_argument("--smooth", type=int, default=50, help="moving-average window")
    args = parser.parse_args()

    series = load(args.trace)
    fig, (ax_reward, ax_regret) = plt.subplots(1, 2, figsize=(12, 4.5))

    ub_drawn = False
    for alg, data in sorted(series.items()):
        ax_reward.plot(data["round"], smooth(data["reward"], args.smooth), label=alg)
        ax_regret.plot(data["round"], data["ub_regret"], label=alg)
        if not ub_drawn:
            ax_reward.plot(data["round"], smooth(data["ub"], args.smooth), "k--",
                           label="continuous bound", linewidth=1)
            ub_drawn = True

    ax_reward.set_xlabel("round")
    ax_reward.set_ylabel(f"reward (moving avg over {args.smooth})")
    ax_reward.legend()
    ax_regret.set_xlabel("round")
    ax_regret.set_ylabel("cumulative regret vs continuous bound")
    ax_regret.legend()
    fig.tight_layout()
    fig.savefig(args.out, dpi=140)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
