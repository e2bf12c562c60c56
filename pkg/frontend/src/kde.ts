/** Gaussian kernel density estimate with Silverman's rule-of-thumb bandwidth. */

const INV_SQRT_2PI = 1 / Math.sqrt(2 * Math.PI);

function quantileSorted(sorted: number[], q: number): number {
  const pos = q * (sorted.length - 1);
  const lo = Math.floor(pos);
  const hi = Math.ceil(pos);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo);
}

export function silvermanBandwidth(values: number[]): number {
  const n = values.length;
  if (n < 2) {
    return 1;
  }
  const mean = values.reduce((a, b) => a + b, 0) / n;
  const variance = values.reduce((a, b) => a + (b - mean) * (b - mean), 0) / (n - 1);
  const sd = Math.sqrt(variance);
  const sorted = [...values].sort((a, b) => a - b);
  const iqr = quantileSorted(sorted, 0.75) - quantileSorted(sorted, 0.25);
  const sigma = Math.min(sd, iqr / 1.34) || sd || 1;
  return 0.9 * sigma * Math.pow(n, -0.2);
}

export function kde(values: number[], bandwidth?: number): (x: number) => number {
  const h = bandwidth ?? silvermanBandwidth(values);
  const n = values.length;
  return (x: number) => {
    let sum = 0;
    for (const v of values) {
      const u = (x - v) / h;
      sum += Math.exp(-0.5 * u * u) * INV_SQRT_2PI;
    }
    return sum / (n * h);
  };
}
