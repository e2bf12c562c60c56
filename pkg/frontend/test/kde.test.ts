import assert from "node:assert/strict";
import { test } from "node:test";

import { kde, silvermanBandwidth } from "../src/kde";
import { fitLine } from "../src/stats";
import { linearScale, niceTicks, logTicks } from "../src/scale";

test("silverman bandwidth matches the rule of thumb on a known sample", () => {
  // standard normal-ish sample: bandwidth ~ 0.9 * sigma * n^(-1/5)
  const n = 1000;
  const values: number[] = [];
  let s = 42;
  const rand = () => {
    // deterministic linear congruential uniform
    s = (s * 1664525 + 1013904223) % 4294967296;
    return s / 4294967296;
  };
  for (let i = 0; i < n; i++) {
    values.push((rand() + rand() + rand() + rand() - 2) / Math.sqrt(4 / 12));
  }
  const h = silvermanBandwidth(values);
  assert.ok(h > 0.1 && h < 0.4, `h=${h}`);
});

test("kde integrates to one", () => {
  const values = [0.1, 0.4, 0.5, 0.9, 1.3];
  const est = kde(values);
  let integral = 0;
  const grid = 2000;
  for (let i = 0; i < grid; i++) {
    const x = -3 + (6 * i) / grid;
    integral += est(x) * (6 / grid);
  }
  assert.ok(Math.abs(integral - 1) < 1e-3, `integral=${integral}`);
});

test("line fit recovers exact slopes", () => {
  const xs = [1, 2, 3, 4];
  const ys = xs.map((x) => 3 - 2 * x);
  const fit = fitLine(xs, ys);
  assert.ok(Math.abs(fit.slope + 2) < 1e-12);
  assert.ok(Math.abs(fit.intercept - 3) < 1e-12);
  assert.ok(Math.abs(fit.r2 - 1) < 1e-12);
});

test("scales map domains to ranges", () => {
  const s = linearScale([0, 10], [100, 200]);
  assert.equal(s(0), 100);
  assert.equal(s(10), 200);
  assert.equal(s(5), 150);
  assert.deepEqual(niceTicks(0, 1, 5), [0, 0.2, 0.4, 0.6, 0.8, 1.0]);
  assert.deepEqual(logTicks(0.01, 100), [0.01, 0.1, 1, 10, 100]);
});
