/** Parsed experiment artifacts (schemas produced by the solver CLI). */

export interface PointsTable {
  /** Axis names in column order, e.g. ["x1", "x2"] or ["Q", "Ks", ...]. */
  axes: string[];
  /** coords[i][j] is coordinate j of particle i. */
  coords: number[][];
  cost: number[];
  /** Rank-weight channel: N times the per-particle weight. */
  omega: number[];
}

export interface MarginalCurve {
  axis: number;
  name: string;
  support: [number, number];
  x: number[];
  pdf: number[];
}

export interface CellRecord {
  index: number;
  l: number;
  r: number;
  psi: number;
  barycenter: number;
  mass: number;
}

export interface CellsFile {
  mode: string;
  mass: number;
  marginals: { axis: number; name: string; cells: CellRecord[] }[];
}

export interface RateRow {
  N: number;
  lambda_final: number;
  risk_value: number;
  reference: number;
  abs_error: number;
  marginal_w2_max: number;
}

export interface TraceRow {
  lambda: number;
  iteration?: number;
  value: number;
  grad_norm?: number;
  summary?: boolean;
}

export interface Style {
  /** Panel edge length in pixels. */
  panel: number;
  margin: number;
  pointRadius: number;
  bins: number;
  /** Two-stop colormap from low to high cost. */
  colormap: [string, string];
  background: string;
}

export const DEFAULT_STYLE: Style = {
  panel: 220,
  margin: 42,
  pointRadius: 1.6,
  bins: 50,
  colormap: ["#000000", "#ff8800"],
  background: "#ffffff",
};

export class ArtifactError extends Error {}
