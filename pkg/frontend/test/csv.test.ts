import assert from "node:assert/strict";
import { test } from "node:test";

import { parseCsv, parseNumeric } from "../src/csv";

test("parses CRLF and LF line endings", () => {
  const rows = parseCsv("a,b\r\n1,2\r\n3,4\n");
  assert.deepEqual(rows, [
    ["a", "b"],
    ["1", "2"],
    ["3", "4"],
  ]);
});

test("handles quoted fields with commas and escaped quotes", () => {
  const rows = parseCsv('name,val\n"x, y",3\n"say ""hi""",4\n');
  assert.deepEqual(rows[1], ["x, y", "3"]);
  assert.deepEqual(rows[2], ['say "hi"', "4"]);
});

test("numeric extraction validates column and values", () => {
  const rows = parseCsv("n,v\n1,0.5\n2,1.5\n");
  assert.deepEqual(parseNumeric(rows, "v"), [0.5, 1.5]);
  assert.throws(() => parseNumeric(rows, "missing"), /missing column/);
  const bad = parseCsv("n,v\n1,apple\n");
  assert.throws(() => parseNumeric(bad, "v"), /non-numeric/);
});

test("roundtrips python repr floats", () => {
  const rows = parseCsv("x\n0.1000000000000000055511151231257827\n1e-300\n");
  const vals = parseNumeric(rows, "x");
  assert.equal(vals[0], 0.1);
  assert.equal(vals[1], 1e-300);
});
