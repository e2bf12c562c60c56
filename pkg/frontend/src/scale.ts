/** Linear and log scales with readable tick positions. */

export interface Scale {
  (v: number): number;
  domain: [number, number];
  range: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const f = ((v: number) => r0 + ((v - d0) / span) * (r1 - r0)) as Scale;
  f.domain = domain;
  f.range = range;
  return f;
}

export function niceTicks(lo: number, hi: number, count = 5): number[] {
  if (!(hi > lo)) {
    return [lo];
  }
  const span = hi - lo;
  const step0 = span / Math.max(count, 1);
  const mag = Math.pow(10, Math.floor(Math.log10(step0)));
  const norm = step0 / mag;
  const step = (norm >= 5 ? 5 : norm >= 2 ? 2 : 1) * mag;
  const first = Math.ceil(lo / step - 1e-12);
  const last = Math.floor(hi / step + 1e-12);
  const ticks: number[] = [];
  for (let k = first; k <= last; k++) {
    const v = Number((k * step).toPrecision(12));
    ticks.push(Math.abs(v) < 1e-12 * span ? 0 : v);
  }
  return ticks;
}

export function logTicks(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  const k0 = Math.ceil(Math.log10(lo) - 1e-12);
  const k1 = Math.floor(Math.log10(hi) + 1e-12);
  for (let k = k0; k <= k1; k++) {
    ticks.push(Math.pow(10, k));
  }
  return ticks.length ? ticks : [lo, hi];
}

export function extent(values: number[], pad = 0.0): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (!Number.isFinite(lo)) {
    return [0, 1];
  }
  if (lo === hi) {
    return [lo - 0.5, hi + 0.5];
  }
  const span = hi - lo;
  return [lo - pad * span, hi + pad * span];
}
