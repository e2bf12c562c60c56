/** Per-axis histograms of the cloud overlaid on the analytic marginal
 * densities, plus a labeled kernel density estimate. */

import { kde, silvermanBandwidth } from "../kde";
import { linearScale } from "../scale";
import { histogram } from "../stats";
import { Svg, fmt } from "../svg";
import { ArtifactError, MarginalCurve, PointsTable, Style } from "../types";

export function renderHistograms(
  points: PointsTable,
  marginals: MarginalCurve[],
  style: Style,
): string {
  if (marginals.length !== points.axes.length) {
    throw new ArtifactError(
      `marginals.json has ${marginals.length} axes but points.csv has ${points.axes.length}`,
    );
  }
  const d = points.axes.length;
  const cols = Math.min(3, d);
  const rows = Math.ceil(d / cols);
  const cell = style.panel + style.margin;
  const svg = new Svg(cols * cell + style.margin, rows * cell + style.margin, style.background);

  for (let j = 0; j < d; j++) {
    const col = j % cols;
    const row = Math.floor(j / cols);
    const x0 = style.margin + col * cell;
    const y0 = style.margin + row * cell;
    const curve = marginals[j];
    const [lo, hi] = curve.support;
    const values = points.coords.map((c) => c[j]);
    const counts = histogram(values, lo, hi, style.bins);
    const binWidth = (hi - lo) / style.bins;
    const densities = counts.map((c) => c / (values.length * binWidth));

    const est = kde(values);
    const bw = silvermanBandwidth(values);
    const kdeVals = curve.x.map((x) => est(x));

    const peak = Math.max(...densities, ...curve.pdf, ...kdeVals) * 1.08;
    const sx = linearScale([lo, hi], [x0, x0 + style.panel]);
    const sy = linearScale([0, peak], [y0 + style.panel, y0]);

    densities.forEach((dens, k) => {
      const bx = sx(lo + k * binWidth);
      const bw2 = sx(lo + (k + 1) * binWidth) - bx;
      svg.rect(bx, sy(dens), bw2, sy(0) - sy(dens), { fill: "#9db8d2", stroke: "none" });
    });
    svg.polyline(
      curve.x.map((x, i) => [sx(x), sy(curve.pdf[i])] as [number, number]),
      { stroke: "#c23b22", "stroke-width": 1.4 },
    );
    svg.polyline(
      curve.x.map((x, i) => [sx(x), sy(kdeVals[i])] as [number, number]),
      { stroke: "#2b6e2b", "stroke-width": 1.1, "stroke-dasharray": "4 3" },
    );
    svg.rect(x0, y0, style.panel, style.panel, { fill: "none", stroke: "#cccccc" });
    svg.text(x0 + style.panel / 2, y0 - 6, curve.name, { "text-anchor": "middle" });
    svg.text(x0 + 4, y0 + 12, `KDE (Silverman h=${fmt(bw)})`, { "font-size": 8, fill: "#2b6e2b" });
  }
  return svg.render();
}
