/** Two-stop colormap (low -> high) with linear interpolation in sRGB. */

function parseHex(c: string): [number, number, number] {
  const m = /^#?([0-9a-fA-F]{6})$/.exec(c);
  if (!m) {
    throw new Error(`invalid color ${c}`);
  }
  const v = parseInt(m[1], 16);
  return [(v >> 16) & 255, (v >> 8) & 255, v & 255];
}

export function colormap(stops: [string, string]): (t: number) => string {
  const a = parseHex(stops[0]);
  const b = parseHex(stops[1]);
  return (t: number) => {
    const u = Math.min(1, Math.max(0, t));
    const rgb = a.map((av, i) => Math.round(av + u * (b[i] - av)));
    return `#${rgb.map((v) => v.toString(16).padStart(2, "0")).join("")}`;
  };
}

export function normalize(values: number[]): number[] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  const span = hi - lo;
  if (!(span > 0)) {
    return values.map(() => 0.5);
  }
  return values.map((v) => (v - lo) / span);
}
