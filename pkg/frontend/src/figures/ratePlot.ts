/** Log-log recovery-error plot with the fitted slope annotated. */

import { linearScale, logTicks } from "../scale";
import { fitLine } from "../stats";
import { Svg, fmt } from "../svg";
import { ArtifactError, RateRow, Style } from "../types";

export function renderRatePlot(rows: RateRow[], style: Style): string {
  if (rows.length < 2) {
    throw new ArtifactError("rates.csv needs at least two rows");
  }
  const pts = rows.filter((r) => r.abs_error > 0);
  if (pts.length < 2) {
    throw new ArtifactError("rates.csv column abs_error has no positive entries");
  }
  const xs = pts.map((r) => Math.log10(r.N));
  const ys = pts.map((r) => Math.log10(r.abs_error));
  const fit = fitLine(xs, ys);

  const w = style.panel * 2;
  const h = style.panel * 1.4;
  const svg = new Svg(w + 2 * style.margin, h + 2 * style.margin, style.background);
  const x0 = style.margin;
  const y0 = style.margin;
  const sx = linearScale([Math.min(...xs) - 0.1, Math.max(...xs) + 0.1], [x0, x0 + w]);
  const sy = linearScale([Math.min(...ys) - 0.2, Math.max(...ys) + 0.2], [y0 + h, y0]);

  svg.rect(x0, y0, w, h, { fill: "none", stroke: "#cccccc" });
  for (const t of logTicks(Math.pow(10, sx.domain[0]), Math.pow(10, sx.domain[1]))) {
    const px = sx(Math.log10(t));
    svg.line(px, y0 + h, px, y0 + h + 4, { stroke: "#888888" });
    svg.text(px, y0 + h + 16, fmt(t), { "text-anchor": "middle", "font-size": 9 });
  }
  for (const t of logTicks(Math.pow(10, sy.domain[0]), Math.pow(10, sy.domain[1]))) {
    const py = sy(Math.log10(t));
    svg.line(x0 - 4, py, x0, py, { stroke: "#888888" });
    svg.text(x0 - 6, py + 3, t.toExponential(0), { "text-anchor": "end", "font-size": 9 });
  }

  const [fx0, fx1] = [Math.min(...xs), Math.max(...xs)];
  svg.line(
    sx(fx0),
    sy(fit.intercept + fit.slope * fx0),
    sx(fx1),
    sy(fit.intercept + fit.slope * fx1),
    { stroke: "#c23b22", "stroke-width": 1.2 },
  );
  pts.forEach((r, i) => {
    svg.circle(sx(xs[i]), sy(ys[i]), 3, { fill: "#20608f" });
  });
  svg.text(x0 + 8, y0 + 14, `slope ${fmt(fit.slope)} (r2 ${fmt(fit.r2)})`, { fill: "#c23b22" });
  svg.text(x0 + w / 2, y0 + h + 30, "number of particles", { "text-anchor": "middle" });
  svg.text(x0 + 8, y0 - 8, "absolute recovery error vs particle count (log-log)");
  return svg.render();
}
