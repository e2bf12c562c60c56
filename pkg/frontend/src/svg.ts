/** Tiny deterministic SVG builder: fixed number formatting, no timestamps. */

export function fmt(x: number): string {
  if (!Number.isFinite(x)) {
    return "0";
  }
  if (x === 0) {
    return "0";
  }
  const s = x.toPrecision(6);
  // strip trailing zeros without losing exponent notation
  if (s.includes("e")) {
    return s;
  }
  return s.includes(".") ? s.replace(/\.?0+$/, "") : s;
}

export type Attrs = Record<string, string | number>;

export class Svg {
  private parts: string[] = [];

  constructor(readonly width: number, readonly height: number, background = "#ffffff") {
    this.parts.push(
      `<svg xmlns="http://www.w3.org/2000/svg" width="${fmt(width)}" height="${fmt(height)}" ` +
        `viewBox="0 0 ${fmt(width)} ${fmt(height)}">`,
    );
    this.rect(0, 0, width, height, { fill: background });
  }

  private attrs(a: Attrs): string {
    return Object.keys(a)
      .sort()
      .map((k) => ` ${k}="${typeof a[k] === "number" ? fmt(a[k] as number) : a[k]}"`)
      .join("");
  }

  rect(x: number, y: number, w: number, h: number, a: Attrs = {}): void {
    this.parts.push(`<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}"${this.attrs(a)}/>`);
  }

  circle(cx: number, cy: number, r: number, a: Attrs = {}): void {
    this.parts.push(`<circle cx="${fmt(cx)}" cy="${fmt(cy)}" r="${fmt(r)}"${this.attrs(a)}/>`);
  }

  line(x1: number, y1: number, x2: number, y2: number, a: Attrs = {}): void {
    this.parts.push(
      `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}"${this.attrs(a)}/>`,
    );
  }

  polyline(pts: Array<[number, number]>, a: Attrs = {}): void {
    const d = pts.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    this.parts.push(`<polyline points="${d}" fill="none"${this.attrs(a)}/>`);
  }

  polygon(pts: Array<[number, number]>, a: Attrs = {}): void {
    const d = pts.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    this.parts.push(`<polygon points="${d}"${this.attrs(a)}/>`);
  }

  text(x: number, y: number, content: string, a: Attrs = {}): void {
    const esc = content.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
    const base: Attrs = { "font-family": "sans-serif", "font-size": 11, fill: "#333333", ...a };
    this.parts.push(`<text x="${fmt(x)}" y="${fmt(y)}"${this.attrs(base)}>${esc}</text>`);
  }

  group(transform: string): void {
    this.parts.push(`<g transform="${transform}">`);
  }

  endGroup(): void {
    this.parts.push("</g>");
  }

  render(): string {
    return this.parts.join("\n") + "\n</svg>\n";
  }
}
