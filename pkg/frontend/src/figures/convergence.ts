/** Convergence view of a continuation run: objective value per iteration,
 * one colored segment per penalty coefficient, gradient norm beneath. */

import { colormap } from "../color";
import { linearScale, extent, niceTicks } from "../scale";
import { Svg, fmt } from "../svg";
import { ArtifactError, Style, TraceRow } from "../types";

export function renderConvergence(rows: TraceRow[], style: Style): string {
  const iters = rows.filter((r) => !r.summary && typeof r.iteration === "number");
  if (iters.length < 2) {
    throw new ArtifactError("trace.jsonl has no per-iteration records");
  }
  const lambdas = [...new Set(iters.map((r) => r.lambda))].sort((a, b) => a - b);
  const cmap = colormap(style.colormap);

  const w = style.panel * 2;
  const h = style.panel;
  const svg = new Svg(w + 2 * style.margin, 2 * h + 3 * style.margin, style.background);
  const x0 = style.margin;
  const sx = linearScale([0, iters.length - 1], [x0, x0 + w]);

  const panels: Array<["value" | "grad_norm", string, number]> = [
    ["value", "objective value", style.margin],
    ["grad_norm", "gradient sup norm (log10)", h + 2 * style.margin],
  ];
  for (const [key, label, y0] of panels) {
    const raw = iters.map((r) =>
      key === "value" ? r.value : Math.log10(Math.max(r.grad_norm ?? 1e-300, 1e-300)),
    );
    const sy = linearScale(extent(raw, 0.06), [y0 + h, y0]);
    svg.rect(x0, y0, w, h, { fill: "none", stroke: "#cccccc" });
    for (const t of niceTicks(sy.domain[0], sy.domain[1], 4)) {
      svg.text(x0 - 6, sy(t) + 3, fmt(t), { "text-anchor": "end", "font-size": 8 });
    }
    let offset = 0;
    for (const lam of lambdas) {
      const seg = iters.filter((r) => r.lambda === lam);
      const pts = seg.map((r, i) => {
        const v = key === "value" ? r.value : Math.log10(Math.max(r.grad_norm ?? 1e-300, 1e-300));
        return [sx(offset + i), sy(v)] as [number, number];
      });
      if (pts.length > 1) {
        const t = lambdas.length > 1 ? lambdas.indexOf(lam) / (lambdas.length - 1) : 0.5;
        svg.polyline(pts, { stroke: cmap(t), "stroke-width": 1.3 });
      }
      offset += seg.length;
    }
    svg.text(x0 + 4, y0 - 5, label);
  }
  svg.text(x0 + w / 2, 2 * h + 3 * style.margin - 8, "iteration (stages concatenated; color = penalty coefficient)", {
    "text-anchor": "middle",
    "font-size": 9,
  });
  return svg.render();
}
