/** Pairwise scatter panels of the particle cloud, colored by cost value. */

import { colormap, normalize } from "../color";
import { linearScale, extent, niceTicks } from "../scale";
import { Svg, fmt } from "../svg";
import { PointsTable, Style } from "../types";

export function renderScatterMatrix(points: PointsTable, style: Style): string {
  const d = points.axes.length;
  const pairs: Array<[number, number]> = [];
  for (let j = 0; j < d; j++) {
    for (let k = j + 1; k < d; k++) {
      pairs.push([j, k]);
    }
  }
  const cols = Math.min(pairs.length, Math.max(1, Math.ceil(Math.sqrt(pairs.length))));
  const rows = Math.ceil(pairs.length / cols);
  const cell = style.panel + style.margin;
  const svg = new Svg(cols * cell + style.margin, rows * cell + style.margin, style.background);
  const cmap = colormap(style.colormap);
  const shade = normalize(points.cost);

  pairs.forEach(([j, k], p) => {
    const col = p % cols;
    const row = Math.floor(p / cols);
    const x0 = style.margin + col * cell;
    const y0 = style.margin + row * cell;
    const sx = linearScale(extent(points.coords.map((c) => c[j]), 0.04), [x0, x0 + style.panel]);
    const sy = linearScale(extent(points.coords.map((c) => c[k]), 0.04), [y0 + style.panel, y0]);
    svg.rect(x0, y0, style.panel, style.panel, { fill: "none", stroke: "#cccccc" });
    for (const t of niceTicks(sx.domain[0], sx.domain[1], 4)) {
      svg.text(sx(t), y0 + style.panel + 12, fmt(t), { "text-anchor": "middle", "font-size": 8 });
    }
    for (const t of niceTicks(sy.domain[0], sy.domain[1], 4)) {
      svg.text(x0 - 4, sy(t) + 3, fmt(t), { "text-anchor": "end", "font-size": 8 });
    }
    points.coords.forEach((c, i) => {
      svg.circle(sx(c[j]), sy(c[k]), style.pointRadius, { fill: cmap(shade[i]) });
    });
    svg.text(x0 + style.panel / 2, y0 - 6, `${points.axes[j]} vs ${points.axes[k]}`, {
      "text-anchor": "middle",
    });
  });
  return svg.render();
}

/** Auxiliary panel: rank-weight channel against the cost value. */
export function renderOmegaPanel(points: PointsTable, style: Style): string {
  const cell = style.panel + style.margin;
  const svg = new Svg(cell + style.margin, cell + style.margin, style.background);
  const cmap = colormap(style.colormap);
  const shade = normalize(points.cost);
  const x0 = style.margin;
  const y0 = style.margin;
  const sx = linearScale(extent(points.cost, 0.04), [x0, x0 + style.panel]);
  const sy = linearScale(extent(points.omega, 0.04), [y0 + style.panel, y0]);
  svg.rect(x0, y0, style.panel, style.panel, { fill: "none", stroke: "#cccccc" });
  points.cost.forEach((c, i) => {
    svg.circle(sx(c), sy(points.omega[i]), style.pointRadius, { fill: cmap(shade[i]) });
  });
  svg.text(x0 + style.panel / 2, y0 - 6, "cost vs rank weight", { "text-anchor": "middle" });
  return svg.render();
}
