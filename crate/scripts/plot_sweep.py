#!/usr/bin/env python3
"""Plot a sweep CSV produced by `calderon-lab sweep`.

Usage: python3 scripts/plot_sweep.py sweep.csv [out.png]
"""
import csv
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def main() -> None:
    if len(sys.argv) < 2:
        sys.exit(__doc__)
    path = sys.argv[1]
    out = sys.argv[2] if len(sys.argv) > 2 else "sweep.png"

    rows = list(csv.DictReader(open(path, newline="")))
    t = [float(r["t"]) for r in rows]
    norm = [float(r["norm"]) for r in rows]
    fd = [max(abs(float(r["fd_left"])), abs(float(r["fd_right"]))) for r in rows]
    omega = [float(r["omega_norm"]) for r in rows]
    residual = [float(r["logconv_residual"]) for r in rows]

    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(7, 7), sharex=True)
    ax1.plot(t, norm, "o-", label="‖x‖_t")
    ax1.plot(t, fd, "s--", label="max one-sided |FD|")
    ax1.plot(t, omega, "^:", label="‖Ω_t x‖_t")
    ax1.set_ylabel("norm / derivative")
    ax1.legend()
    ax2.axhline(0.0, color="gray", lw=0.5)
    ax2.plot(t, residual, "x-", label="log-convexity residual")
    ax2.set_xlabel("t")
    ax2.set_ylabel("residual")
    ax2.legend()
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
