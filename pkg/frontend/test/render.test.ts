import assert from "node:assert/strict";
import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";
import { test } from "node:test";

import { loadPoints, loadMarginals, loadCells, loadRates } from "../src/artifacts";
import { FIGURE_KINDS, FigureKind, renderFigure } from "../src/render";
import { ArtifactError, DEFAULT_STYLE } from "../src/types";

const FIXTURES = path.join(__dirname, "..", "..", "test", "fixtures");

function tmpdir(): string {
  return fs.mkdtempSync(path.join(os.tmpdir(), "render-"));
}

// which fixture directory supports which figure kind
const PLANS: Array<[FigureKind, string]> = [
  ["scatter_matrix", "squared_sum"],
  ["scatter_matrix", "river"],
  ["scatter_matrix", "pyramid"],
  ["histograms", "squared_sum"],
  ["histograms", "river"],
  ["histograms", "pyramid"],
  ["view3d", "squared_sum"],
  ["view3d", "river"],
  ["rate_plot", "rates"],
  ["rate_plot", "squared_sum"],
  ["rate_plot", "pyramid"],
  ["rate_plot", "river"],
  ["cells_1d", "pyramid"],
  ["cells_1d", "river"],
  ["cells_1d", "squared_sum"],
];

test("artifact loaders parse every fixture", () => {
  for (const name of ["squared_sum", "pyramid", "river"]) {
    const dir = path.join(FIXTURES, name);
    const points = loadPoints(dir);
    assert.ok(points.coords.length >= 1000);
    assert.equal(points.cost.length, points.coords.length);
    const marg = loadMarginals(dir);
    assert.equal(marg.length, points.axes.length);
    const cells = loadCells(dir);
    assert.equal(cells.marginals.length, points.axes.length);
    for (const m of cells.marginals) {
      assert.equal(m.cells.length, points.coords.length);
    }
  }
  const rates = loadRates(path.join(FIXTURES, "rates"));
  assert.ok(rates.length >= 4);
  assert.ok(rates.every((r) => r.abs_error > 0));
});

test("all five figure kinds render from the experiment artifacts", () => {
  const out = tmpdir();
  const seen = new Set<string>();
  for (const [kind, fixture] of PLANS) {
    const files = renderFigure(kind, path.join(FIXTURES, fixture), path.join(out, fixture));
    for (const f of files) {
      const body = fs.readFileSync(f, "utf8");
      assert.ok(body.startsWith("<svg"), `${f} is not svg`);
      assert.ok(body.endsWith("</svg>\n"), `${f} is not closed`);
      seen.add(kind);
    }
  }
  assert.deepEqual([...seen].sort(), [...FIGURE_KINDS].sort());
});

test("rendering is deterministic: identical bytes on repeat", () => {
  for (const [kind, fixture] of PLANS) {
    const outA = tmpdir();
    const outB = tmpdir();
    const a = renderFigure(kind, path.join(FIXTURES, fixture), outA);
    const b = renderFigure(kind, path.join(FIXTURES, fixture), outB);
    assert.equal(a.length, b.length);
    for (let i = 0; i < a.length; i++) {
      assert.ok(
        fs.readFileSync(a[i]).equals(fs.readFileSync(b[i])),
        `${kind}/${fixture}: bytes differ`,
      );
    }
  }
});

test("style options change the output but stay deterministic", () => {
  const style = { ...DEFAULT_STYLE, panel: 140, colormap: ["#102030", "#ffcc00"] as [string, string] };
  const outA = tmpdir();
  const outB = tmpdir();
  const a = renderFigure("scatter_matrix", path.join(FIXTURES, "pyramid"), outA, style);
  const b = renderFigure("scatter_matrix", path.join(FIXTURES, "pyramid"), outB, style);
  assert.ok(fs.readFileSync(a[0]).equals(fs.readFileSync(b[0])));
  const plain = renderFigure("scatter_matrix", path.join(FIXTURES, "pyramid"), tmpdir());
  assert.ok(!fs.readFileSync(a[0]).equals(fs.readFileSync(plain[0])));
});

test("schema violations name the offending part", () => {
  const dir = tmpdir();
  fs.writeFileSync(path.join(dir, "points.csv"), "index,x1,cost\r\n0,0.5,1.0\r\n");
  assert.throws(() => renderFigure("scatter_matrix", dir, tmpdir()), /omega/);

  // two coordinate columns cannot produce a 3d view
  assert.throws(
    () => renderFigure("view3d", path.join(FIXTURES, "pyramid"), tmpdir()),
    ArtifactError,
  );
  try {
    renderFigure("view3d", path.join(FIXTURES, "pyramid"), tmpdir());
  } catch (err) {
    assert.match((err as Error).message, /three coordinate columns/);
  }
});
