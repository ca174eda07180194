#!/usr/bin/env python3
"""Tabulate spacing diagnostics for every mesh family across an eps sweep.

Prints, per (family, eps), the cell count, extreme spacings, worst adjacent
ratio, and the first interior node -- the quantities that decide whether a
family resolves an exp(-x/eps) layer without wasting coarse-region cells.
Optionally dumps the node sets as CSV files for plotting.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from spbvp.meshes import (
    LayerSpec,
    bakhvalov_original,
    bakhvalov_shishkin,
    bakhvalov_type,
    diagnostics,
    duran_lombardi,
    equidistribute,
    gartland,
    lambert_mesh,
    shishkin,
    uniform_mesh,
)


def build(family, eps, n):
    spec = LayerSpec(eps=eps)
    if family == "uniform":
        return uniform_mesh(n)
    if family == "shishkin":
        return shishkin(spec, n)
    if family == "bakhvalov-shishkin":
        return bakhvalov_shishkin(spec, n)
    if family == "bakhvalov-type":
        return bakhvalov_type(spec, n)
    if family == "bakhvalov-original":
        return bakhvalov_original(spec, n)
    if family == "gartland":
        return gartland(spec, 1.0 / n)
    if family == "gartland-type":
        return gartland(spec, 1.0 / n, variant="gartland-type")
    if family == "duran-lombardi":
        return duran_lombardi(spec, 1.0 / n)
    if family == "lambert":
        return lambert_mesh(spec, n)
    if family == "equidistributed":
        gamma, mu, k = spec.gamma, spec.mu, 2.0
        mon = lambda s: np.maximum(
            1.0, (k * gamma / eps) * np.exp(-gamma * np.asarray(s) / (mu * eps))
        )
        return equidistribute(mon, n)
    raise ValueError(family)


FAMILIES = (
    "uniform",
    "shishkin",
    "bakhvalov-shishkin",
    "bakhvalov-type",
    "bakhvalov-original",
    "gartland",
    "gartland-type",
    "duran-lombardi",
    "lambert",
    "equidistributed",
)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=64)
    ap.add_argument("--eps", default="1e-2,1e-4,1e-8")
    ap.add_argument("--dump-dir", type=Path, default=None)
    args = ap.parse_args(argv)
    eps_values = [float(tok) for tok in args.eps.split(",")]

    print(f"{'family':20s} {'eps':>8s} {'cells':>6s} {'min_h':>10s} "
          f"{'max_h':>10s} {'ratio':>8s} {'x_1':>10s}")
    for family in FAMILIES:
        for eps in eps_values:
            mesh = build(family, eps, args.n)
            d = diagnostics(mesh)
            print(
                f"{family:20s} {eps:8.0e} {d.n_cells:6d} {d.min_h:10.3e} "
                f"{d.max_h:10.3e} {d.ratio:8.2f} {mesh.points[1]:10.3e}"
            )
            if args.dump_dir is not None:
                args.dump_dir.mkdir(parents=True, exist_ok=True)
                out = args.dump_dir / f"{family}_eps{eps:.0e}_n{args.n}.csv"
                lines = ["i,x_i"]
                lines += [f"{i},{x:.12e}" for i, x in enumerate(mesh.points)]
                out.write_text("\n".join(lines) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
