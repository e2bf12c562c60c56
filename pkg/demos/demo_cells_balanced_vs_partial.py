"""Balanced vs partial tessellations of one density, six atoms.

Walks through the two semi-discrete transport modes on a triangular density:
in balanced mode the cells partition the support into equal-mass quantile
blocks, while in partial mode (half the mass transported) each cell is the
intersection of a Laguerre cell with a ball around its atom, and gaps open
up between atoms that are far apart.

Writes cells_balanced.json / cells_partial.json next to this script's output
directory so the figure renderer can draw the tessellation diagrams:

    python demos/demo_cells_balanced_vs_partial.py
    riskcloud-render cells_1d --in demo_out/cells --out demo_out/figures
"""

import json
from pathlib import Path

import numpy as np

from riskcloud import Triangular, balanced_value_grad, partial_value_grad

OUT = Path(__file__).resolve().parent / "demo_out" / "cells"


def describe(tag, value, cells):
    print(f"\n{tag}: transport cost {value:.6f}")
    for rec in cells.to_records():
        bar = "-" * max(1, int(40 * (rec["r"] - rec["l"]) / 2.0))
        print(
            f"  atom {rec['index']} cell [{rec['l']:6.3f}, {rec['r']:6.3f}] "
            f"mass {rec['mass']:.4f} bary {rec['barycenter']:6.3f}  {bar}"
        )


def main():
    rho = Triangular(0.0, 1.0, 2.0)
    rng = np.random.default_rng(3)
    atoms = np.sort(rng.uniform(0.0, 2.0, 6))
    print("density: triangle on [0, 2], atoms:", np.round(atoms, 3))

    vb, _, cb = balanced_value_grad(rho, atoms)
    describe("balanced (full mass)", vb, cb)

    vp, _, cp = partial_value_grad(rho, atoms, 0.5)
    describe("partial (mass 1/2)", vp, cp)
    gaps = [
        (round(float(cp.right[k]), 3), round(float(cp.left[k + 1]), 3))
        for k in range(5)
        if cp.left[k + 1] - cp.right[k] > 1e-9
    ]
    print("\ngaps between partial cells:", gaps or "none")

    OUT.mkdir(parents=True, exist_ok=True)
    xs = np.linspace(rho.lo, rho.hi, 257)
    for tag, cells, mode, mass in (("balanced", cb, "full", 1.0), ("partial", cp, "partial", 0.5)):
        payload = {
            "mode": mode,
            "mass": mass,
            "marginals": [{"axis": 0, "name": "x1", "cells": cells.to_records()}],
        }
        (OUT / f"cells_{tag}.json").write_text(json.dumps(payload, indent=1))
    (OUT / "marginals.json").write_text(
        json.dumps(
            {
                "marginals": [
                    {
                        "axis": 0,
                        "name": "x1",
                        "support": [rho.lo, rho.hi],
                        "x": xs.tolist(),
                        "pdf": np.asarray(rho.pdf(xs)).tolist(),
                        "config": rho.config(),
                    }
                ]
            },
            indent=1,
        )
    )
    print(f"\nartifacts in {OUT}")


if __name__ == "__main__":
    main()
