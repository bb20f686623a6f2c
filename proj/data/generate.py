"""Regenerates the synthetic stand-in data sets in this directory."""

import numpy as np


def write(path, rows, header="x,y"):
    with open(path, "w") as f:
        f.write(header + "\n")
        for x, y in rows:
            f.write(f"{x:.10g},{y:.10g}\n")


def gene_like(rng):
    # Nine equispaced time points, triplicates, low plateau then S-shaped rise
    # to a high plateau.
    hours = np.array([0, 9, 18, 27, 36, 45, 54, 63, 72], dtype=float)
    level = np.array([0.0, 0.0, 0.0, 0.15, 0.5, 0.85, 1.0, 1.0, 1.0])
    unit, raw = [], []
    for h, mu in zip(hours, level):
        for _ in range(3):
            y = mu + rng.normal(0.0, 0.05)
            unit.append((h / 72.0, y))
            raw.append((h, y))
    write("gene_like.csv", unit)
    write("gene_like_hours.csv", raw)


def queue_like(rng):
    # 100 load levels, 10 replicates, flat response until 0.15 then a ramp;
    # noise grows with load.
    n, m = 100, 10
    rows = []
    for i in range(1, n + 1):
        x = i / (n + 1)
        mu = 1.0 + 3.0 * max(x - 0.15, 0.0)
        sd = 0.1 + 0.2 * x
        for _ in range(m):
            rows.append((x, mu + rng.normal(0.0, sd)))
    write("queue_like.csv", rows)


if __name__ == "__main__":
    rng = np.random.default_rng(20100)
    gene_like(rng)
    queue_like(rng)
