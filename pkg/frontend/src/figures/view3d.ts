/** Orthographic 3D projections of the first three axes, three named views. */

import { colormap, normalize } from "../color";
import { linearScale, extent } from "../scale";
import { Svg } from "../svg";
import { ArtifactError, PointsTable, Style } from "../types";

interface View {
  name: string;
  azimuth: number;   // radians around the vertical axis
  elevation: number; // radians above the horizontal plane
}

const VIEWS: View[] = [
  { name: "iso", azimuth: Math.PI / 5, elevation: Math.PI / 8 },
  { name: "front", azimuth: 0, elevation: 0 },
  { name: "top", azimuth: Math.PI / 4, elevation: Math.PI / 2 - 1e-3 },
];

function project(p: [number, number, number], v: View): [number, number] {
  const [x, y, z] = p;
  const ca = Math.cos(v.azimuth);
  const sa = Math.sin(v.azimuth);
  const ce = Math.cos(v.elevation);
  const se = Math.sin(v.elevation);
  const u = ca * x + sa * y;
  const w = -sa * x + ca * y;
  return [u, ce * z - se * w];
}

export function renderView3d(points: PointsTable, style: Style): string {
  if (points.axes.length < 3) {
    throw new ArtifactError(
      `view3d needs three coordinate columns, found ${points.axes.join(", ")}`,
    );
  }
  const cell = style.panel + style.margin;
  const svg = new Svg(VIEWS.length * cell + style.margin, cell + style.margin, style.background);
  const cmap = colormap(style.colormap);
  const shade = normalize(points.cost);

  // normalize coordinates to a unit box so the views are comparable
  const spans = [0, 1, 2].map((j) => extent(points.coords.map((c) => c[j])));
  const unit = points.coords.map(
    (c) =>
      [0, 1, 2].map((j) => (c[j] - spans[j][0]) / (spans[j][1] - spans[j][0]) - 0.5) as [
        number,
        number,
        number,
      ],
  );

  VIEWS.forEach((view, vi) => {
    const x0 = style.margin + vi * cell;
    const y0 = style.margin;
    const projected = unit.map((p) => project(p, view));
    const sx = linearScale(extent(projected.map((p) => p[0]), 0.06), [x0, x0 + style.panel]);
    const sy = linearScale(extent(projected.map((p) => p[1]), 0.06), [y0 + style.panel, y0]);
    // unit box wireframe
    const corners: Array<[number, number, number]> = [];
    for (const a of [-0.5, 0.5]) for (const b of [-0.5, 0.5]) for (const c of [-0.5, 0.5]) corners.push([a, b, c]);
    const edges: Array<[number, number]> = [];
    corners.forEach((p, i) =>
      corners.forEach((q, k) => {
        if (i < k && p.filter((v, t) => v !== q[t]).length === 1) edges.push([i, k]);
      }),
    );
    for (const [i, k] of edges) {
      const a = project(corners[i], view);
      const b = project(corners[k], view);
      svg.line(sx(a[0]), sy(a[1]), sx(b[0]), sy(b[1]), { stroke: "#dddddd" });
    }
    projected.forEach(([px, py], i) => {
      svg.circle(sx(px), sy(py), style.pointRadius, { fill: cmap(shade[i]) });
    });
    svg.text(x0 + style.panel / 2, y0 - 6, `${view.name} (${points.axes.slice(0, 3).join(", ")})`, {
      "text-anchor": "middle",
    });
  });
  return svg.render();
}
