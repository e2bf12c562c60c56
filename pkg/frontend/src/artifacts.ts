/** Loading and validating the solver CLI's artifact files. */

import * as fs from "node:fs";
import * as path from "node:path";

import { parseCsv, parseNumeric } from "./csv";
import {
  ArtifactError,
  CellsFile,
  MarginalCurve,
  PointsTable,
  RateRow,
  TraceRow,
} from "./types";

function readText(dir: string, name: string): string {
  const p = path.join(dir, name);
  if (!fs.existsSync(p)) {
    throw new ArtifactError(`missing artifact ${name} in ${dir}`);
  }
  return fs.readFileSync(p, "utf8");
}

export function loadPoints(dir: string): PointsTable {
  const rows = parseCsv(readText(dir, "points.csv"));
  if (rows.length < 2) {
    throw new ArtifactError("points.csv has no data rows");
  }
  const header = rows[0];
  for (const col of ["index", "cost", "omega"]) {
    if (!header.includes(col)) {
      throw new ArtifactError(`points.csv misses column ${col}`);
    }
  }
  const axes = header.filter((c) => !["index", "cost", "omega"].includes(c));
  if (axes.length === 0) {
    throw new ArtifactError("points.csv misses coordinate columns");
  }
  const perAxis = axes.map((a) => parseNumeric(rows, a));
  const n = perAxis[0].length;
  const coords: number[][] = [];
  for (let i = 0; i < n; i++) {
    coords.push(perAxis.map((col) => col[i]));
  }
  return {
    axes,
    coords,
    cost: parseNumeric(rows, "cost"),
    omega: parseNumeric(rows, "omega"),
  };
}

export function loadMarginals(dir: string): MarginalCurve[] {
  const payload = JSON.parse(readText(dir, "marginals.json"));
  if (!Array.isArray(payload?.marginals)) {
    throw new ArtifactError("marginals.json misses the marginals list");
  }
  return payload.marginals.map((m: MarginalCurve, j: number) => {
    if (!Array.isArray(m.x) || !Array.isArray(m.pdf) || m.x.length !== m.pdf.length) {
      throw new ArtifactError(`marginals.json axis ${j}: x/pdf length mismatch`);
    }
    return m;
  });
}

export function loadCells(dir: string): CellsFile {
  const payload = JSON.parse(readText(dir, "cells.json"));
  if (!Array.isArray(payload?.marginals)) {
    throw new ArtifactError("cells.json misses the marginals list");
  }
  for (const m of payload.marginals) {
    for (const c of m.cells) {
      for (const key of ["l", "r", "psi", "barycenter", "mass"]) {
        if (typeof c[key] !== "number") {
          throw new ArtifactError(`cells.json axis ${m.axis}: cell misses ${key}`);
        }
      }
    }
  }
  return payload;
}

export function loadRates(dir: string): RateRow[] {
  const rows = parseCsv(readText(dir, "rates.csv"));
  const out: RateRow[] = [];
  const ns = parseNumeric(rows, "N");
  const err = parseNumeric(rows, "abs_error");
  const lam = parseNumeric(rows, "lambda_final");
  const risk = parseNumeric(rows, "risk_value");
  const ref = parseNumeric(rows, "reference");
  const w2 = parseNumeric(rows, "marginal_w2_max");
  for (let i = 0; i < ns.length; i++) {
    out.push({
      N: ns[i],
      lambda_final: lam[i],
      risk_value: risk[i],
      reference: ref[i],
      abs_error: err[i],
      marginal_w2_max: w2[i],
    });
  }
  return out;
}

export function loadTrace(dir: string): TraceRow[] {
  const lines = readText(dir, "trace.jsonl").split("\n").filter((l) => l.trim().length > 0);
  return lines.map((l, i) => {
    try {
      return JSON.parse(l) as TraceRow;
    } catch {
      throw new ArtifactError(`trace.jsonl line ${i + 1} is not valid JSON`);
    }
  });
}
