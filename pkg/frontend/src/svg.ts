/** Minimal deterministic SVG assembly: scales, axes, shapes. */

export interface Scale {
  (value: number): number;
  domain: [number, number];
  range: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const fn = ((v: number) => r0 + ((v - d0) / span) * (r1 - r0)) as Scale;
  fn.domain = domain;
  fn.range = range;
  return fn;
}

export function ticks(lo: number, hi: number, count = 5): number[] {
  const span = hi - lo || 1;
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const err = (count * step) / span;
  const mult = err <= 0.15 ? 10 : err <= 0.35 ? 5 : err <= 0.75 ? 2 : 1;
  const s = step * mult;
  const start = Math.ceil(lo / s) * s;
  const out: number[] = [];
  for (let v = start; v <= hi + 1e-12; v += s) out.push(Number(v.toFixed(12)));
  return out;
}

const fmt = (x: number) => (Math.abs(x) < 1e-12 ? "0" : Number(x.toPrecision(6)).toString());

export class SvgDoc {
  private parts: string[] = [];

  constructor(public readonly width: number, public readonly height: number) {}

  add(element: string): void {
    this.parts.push(element);
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke = "#444", strokeWidth = 1): void {
    this.add(
      `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" ` +
        `stroke="${stroke}" stroke-width="${strokeWidth}"/>`
    );
  }

  rect(x: number, y: number, w: number, h: number, fill: string, extra = ""): void {
    this.add(
      `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" fill="${fill}"${extra}/>`
    );
  }

  circle(cx: number, cy: number, r: number, attrs: string): void {
    this.add(`<circle cx="${fmt(cx)}" cy="${fmt(cy)}" r="${fmt(r)}" ${attrs}/>`);
  }

  text(x: number, y: number, content: string, anchor = "middle", size = 11): void {
    this.add(
      `<text x="${fmt(x)}" y="${fmt(y)}" text-anchor="${anchor}" ` +
        `font-family="sans-serif" font-size="${size}">${escapeXml(content)}</text>`
    );
  }

  polyline(points: [number, number][], stroke: string, strokeWidth = 1.5): void {
    const pts = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    this.add(`<polyline points="${pts}" fill="none" stroke="${stroke}" stroke-width="${strokeWidth}"/>`);
  }

  xAxis(scale: Scale, y: number, label = ""): void {
    const [r0, r1] = scale.range;
    this.line(r0, y, r1, y);
    for (const t of ticks(scale.domain[0], scale.domain[1])) {
      const x = scale(t);
      this.line(x, y, x, y + 4);
      this.text(x, y + 16, fmt(t));
    }
    if (label) this.text((r0 + r1) / 2, y + 32, label);
  }

  yAxis(scale: Scale, x: number, label = ""): void {
    const [r0, r1] = scale.range;
    this.line(x, r0, x, r1);
    for (const t of ticks(scale.domain[0], scale.domain[1])) {
      const y = scale(t);
      this.line(x - 4, y, x, y);
      this.text(x - 7, y + 4, fmt(t), "end");
    }
    if (label) {
      const cy = (r0 + r1) / 2;
      this.add(
        `<text x="${fmt(x - 34)}" y="${fmt(cy)}" text-anchor="middle" font-family="sans-serif" ` +
          `font-size="11" transform="rotate(-90 ${fmt(x - 34)} ${fmt(cy)})">${escapeXml(label)}</text>`
      );
    }
  }

  render(): string {
    return (
      `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" height="${this.height}" ` +
      `viewBox="0 0 ${this.width} ${this.height}">\n<rect width="100%" height="100%" fill="white"/>\n` +
      this.parts.join("\n") +
      "\n</svg>\n"
    );
  }
}

export function escapeXml(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");
}

export const SERIES_COLORS = ["#c02020", "#2050c0", "#20a040", "#b07000", "#7030a0", "#008080"];

/** Symmetric diverging blue-white-red map for values in [-span, span]. */
export function divergingColor(value: number, span: number): string {
  const t = Math.max(-1, Math.min(1, value / span));
  const lerp = (a: number, b: number, u: number) => Math.round(a + (b - a) * u);
  let r: number, g: number, b: number;
  if (t < 0) {
    const u = -t; // toward blue
    r = lerp(255, 33, u);
    g = lerp(255, 68, u);
    b = lerp(255, 170, u);
  } else {
    const u = t; // toward red
    r = lerp(255, 178, u);
    g = lerp(255, 24, u);
    b = lerp(255, 43, u);
  }
  return `rgb(${r},${g},${b})`;
}
