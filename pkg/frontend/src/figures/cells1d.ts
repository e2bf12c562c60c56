/** One-dimensional transport tessellations: density, cells and atoms.
 *
 * Draws one panel per marginal: the density curve, the cells of the final
 * tessellation as shaded spans under the curve (alternating tones), and a
 * vertical line at each atom position.  Balanced tessellations partition the
 * support; partial ones leave gaps where mass is not transported.
 */

import { linearScale } from "../scale";
import { Svg } from "../svg";
import { ArtifactError, CellsFile, MarginalCurve, PointsTable, Style } from "../types";

export function renderCells1d(
  cells: CellsFile,
  marginals: MarginalCurve[],
  points: PointsTable,
  style: Style,
): string {
  if (cells.marginals.length !== marginals.length) {
    throw new ArtifactError(
      `cells.json has ${cells.marginals.length} axes but marginals.json has ${marginals.length}`,
    );
  }
  const d = marginals.length;
  const panelH = Math.round(style.panel * 0.6);
  const cellH = panelH + style.margin;
  const svg = new Svg(
    style.panel * 2 + 2 * style.margin,
    d * cellH + style.margin,
    style.background,
  );

  for (let j = 0; j < d; j++) {
    const curve = marginals[j];
    const recs = cells.marginals[j].cells;
    const x0 = style.margin;
    const y0 = style.margin + j * cellH;
    const [lo, hi] = curve.support;
    const peak = Math.max(...curve.pdf) * 1.1 || 1;
    const sx = linearScale([lo, hi], [x0, x0 + style.panel * 2]);
    const sy = linearScale([0, peak], [y0 + panelH, y0]);

    // deterministic thinning keeps the figure legible for large clouds
    const stride = Math.max(1, Math.ceil(recs.length / 200));
    const sorted = [...recs].sort((a, b) => a.l - b.l);
    sorted.forEach((rec, k) => {
      if (k % stride !== 0) return;
      const tone = (k / stride) % 2 === 0 ? "#aec9e8" : "#d9e6f5";
      svg.rect(sx(rec.l), y0, sx(rec.r) - sx(rec.l), panelH, { fill: tone, stroke: "none" });
    });
    svg.polyline(
      curve.x.map((x, i) => [sx(x), sy(curve.pdf[i])] as [number, number]),
      { stroke: "#20303f", "stroke-width": 1.4 },
    );
    points.coords.forEach((c, i) => {
      if (i % stride !== 0) return;
      svg.line(sx(c[j]), y0, sx(c[j]), y0 + panelH, { stroke: "#c23b22", "stroke-width": 0.9 });
    });
    svg.rect(x0, y0, style.panel * 2, panelH, { fill: "none", stroke: "#cccccc" });
    const label = cells.mode === "partial" ? `${curve.name} (partial, mass ${cells.mass})` : curve.name;
    svg.text(x0 + 4, y0 - 5, label);
  }
  return svg.render();
}
