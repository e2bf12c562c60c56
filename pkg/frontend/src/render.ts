/** Figure dispatcher: loads artifacts from a directory and renders SVG files. */

import * as fs from "node:fs";
import * as path from "node:path";

import { loadCells, loadMarginals, loadPoints, loadRates, loadTrace } from "./artifacts";
import { renderCells1d } from "./figures/cells1d";
import { renderConvergence } from "./figures/convergence";
import { renderHistograms } from "./figures/histograms";
import { renderRatePlot } from "./figures/ratePlot";
import { renderOmegaPanel, renderScatterMatrix } from "./figures/scatterMatrix";
import { renderView3d } from "./figures/view3d";
import { DEFAULT_STYLE, Style } from "./types";

export const FIGURE_KINDS = [
  "scatter_matrix",
  "histograms",
  "view3d",
  "rate_plot",
  "cells_1d",
] as const;

export type FigureKind = (typeof FIGURE_KINDS)[number];

export function loadStyle(stylePath?: string): Style {
  if (!stylePath) {
    return { ...DEFAULT_STYLE };
  }
  const raw = JSON.parse(fs.readFileSync(stylePath, "utf8"));
  return { ...DEFAULT_STYLE, ...raw };
}

/** Render one figure kind from artifacts in inDir; returns written files. */
export function renderFigure(
  kind: FigureKind,
  inDir: string,
  outDir: string,
  style: Style = DEFAULT_STYLE,
): string[] {
  fs.mkdirSync(outDir, { recursive: true });
  const outputs: Array<[string, string]> = [];
  switch (kind) {
    case "scatter_matrix": {
      const points = loadPoints(inDir);
      outputs.push(["scatter_matrix.svg", renderScatterMatrix(points, style)]);
      outputs.push(["omega_panel.svg", renderOmegaPanel(points, style)]);
      break;
    }
    case "histograms": {
      outputs.push([
        "histograms.svg",
        renderHistograms(loadPoints(inDir), loadMarginals(inDir), style),
      ]);
      break;
    }
    case "view3d": {
      outputs.push(["view3d.svg", renderView3d(loadPoints(inDir), style)]);
      break;
    }
    case "rate_plot": {
      // rate studies carry rates.csv; single continuation runs carry
      // trace.jsonl and get the convergence view instead
      if (fs.existsSync(path.join(inDir, "rates.csv"))) {
        outputs.push(["rate_plot.svg", renderRatePlot(loadRates(inDir), style)]);
      } else {
        outputs.push(["rate_plot.svg", renderConvergence(loadTrace(inDir), style)]);
      }
      break;
    }
    case "cells_1d": {
      outputs.push([
        "cells_1d.svg",
        renderCells1d(loadCells(inDir), loadMarginals(inDir), loadPoints(inDir), style),
      ]);
      break;
    }
    default: {
      const never: never = kind;
      throw new Error(`unknown figure kind ${never}`);
    }
  }
  const written: string[] = [];
  for (const [name, svg] of outputs) {
    const p = path.join(outDir, name);
    fs.writeFileSync(p, svg);
    written.push(p);
  }
  return written;
}
