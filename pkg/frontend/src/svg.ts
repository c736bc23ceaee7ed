/** Minimal deterministic SVG emitter: scales, ticks, axes, shapes.
 * Everything is plain string building with fixed-precision coordinates,
 * so identical inputs yield byte-identical documents.
 */

export interface Extent {
  lo: number;
  hi: number;
}

export type Scale = (x: number) => number;

/** Fixed-precision coordinate formatting (trailing zeros stripped). */
export function fmt(x: number): string {
  if (!Number.isFinite(x)) {
    throw new Error(`non-finite coordinate: ${x}`);
  }
  const s = x.toFixed(2);
  return s.replace(/\.?0+$/, "") || "0";
}

export function escapeXml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function extent(values: number[]): Extent {
  if (values.length === 0) {
    throw new Error("extent of empty list");
  }
  let lo = values[0] as number;
  let hi = values[0] as number;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  return { lo, hi };
}

/** Pad a degenerate extent so scales stay invertible. */
export function padded(e: Extent, frac = 0.05): Extent {
  const span = e.hi - e.lo;
  const pad = span > 0 ? span * frac : Math.max(Math.abs(e.lo), 1) * frac;
  return { lo: e.lo - pad, hi: e.hi + pad };
}

/** Multiplicative padding for log-scale domains (stays positive). */
export function logPadded(e: Extent, factor = 1.25): Extent {
  if (e.lo <= 0) {
    throw new Error(`log domain needs positive values, got ${e.lo}`);
  }
  const f = e.lo === e.hi ? 2 : factor;
  return { lo: e.lo / f, hi: e.hi * f };
}

export function linearScale(domain: Extent, range: Extent): Scale {
  const d = domain.hi - domain.lo;
  return (x) => range.lo + ((x - domain.lo) / d) * (range.hi - range.lo);
}

/** Log10 scale; the domain must be strictly positive. */
export function logScale(domain: Extent, range: Extent): Scale {
  if (domain.lo <= 0) {
    throw new Error(`log scale needs a positive domain, got ${domain.lo}`);
  }
  const lo = Math.log10(domain.lo);
  const d = Math.log10(domain.hi) - lo;
  return (x) => range.lo + ((Math.log10(x) - lo) / d) * (range.hi - range.lo);
}

/** Round-number ticks covering the domain (1/2/5 ladder). */
export function ticks(e: Extent, count = 6): number[] {
  const span = e.hi - e.lo;
  if (span <= 0) {
    return [e.lo];
  }
  const raw = span / count;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const norm = raw / mag;
  const step = (norm >= 5 ? 5 : norm >= 2 ? 2 : 1) * mag;
  const first = Math.ceil(e.lo / step) * step;
  const out: number[] = [];
  for (let v = first; v <= e.hi + step * 1e-9; v += step) {
    out.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return out;
}

/** Decade ticks for log axes. */
export function logTicks(e: Extent): number[] {
  const out: number[] = [];
  const lo = Math.ceil(Math.log10(e.lo) - 1e-9);
  const hi = Math.floor(Math.log10(e.hi) + 1e-9);
  for (let p = lo; p <= hi; p++) {
    out.push(Math.pow(10, p));
  }
  return out.length > 0 ? out : [e.lo];
}

export function tickLabel(v: number): string {
  if (v === 0) {
    return "0";
  }
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) {
    const p = Math.round(Math.log10(a));
    if (Math.abs(a / Math.pow(10, p) - 1) < 1e-9) {
      return `${v < 0 ? "-" : ""}1e${p}`;
    }
    return v.toExponential(1);
  }
  return String(Number(v.toPrecision(4)));
}

export interface Attrs {
  [key: string]: string;
}

function attrString(attrs: Attrs): string {
  return Object.keys(attrs)
    .map((k) => ` ${k}="${attrs[k]}"`)
    .join("");
}

export function tag(name: string, attrs: Attrs, body?: string): string {
  if (body === undefined) {
    return `<${name}${attrString(attrs)}/>`;
  }
  return `<${name}${attrString(attrs)}>${body}</${name}>`;
}

export function rect(
  x: number,
  y: number,
  w: number,
  h: number,
  attrs: Attrs,
): string {
  return tag("rect", {
    x: fmt(x),
    y: fmt(y),
    width: fmt(w),
    height: fmt(h),
    ...attrs,
  });
}

export function circle(cx: number, cy: number, r: number, attrs: Attrs): string {
  return tag("circle", { cx: fmt(cx), cy: fmt(cy), r: fmt(r), ...attrs });
}

export function line(
  x1: number,
  y1: number,
  x2: number,
  y2: number,
  attrs: Attrs,
): string {
  return tag("line", {
    x1: fmt(x1),
    y1: fmt(y1),
    x2: fmt(x2),
    y2: fmt(y2),
    ...attrs,
  });
}

export function polyline(
  points: Array<{ x: number; y: number }>,
  attrs: Attrs,
): string {
  const pts = points.map((p) => `${fmt(p.x)},${fmt(p.y)}`).join(" ");
  return tag("polyline", { points: pts, fill: "none", ...attrs });
}

export function text(
  x: number,
  y: number,
  content: string,
  attrs: Attrs = {},
): string {
  return tag(
    "text",
    { x: fmt(x), y: fmt(y), "font-size": "11", ...attrs },
    escapeXml(content),
  );
}

export interface Frame {
  x0: number;
  y0: number;
  x1: number;
  y1: number;
}

/** Axis frame with tick marks and labels; returns SVG fragments. */
export function axes(
  frame: Frame,
  xScale: Scale,
  yScale: Scale,
  xTicks: number[],
  yTicks: number[],
  xLabel: string,
  yLabel: string,
): string {
  const parts: string[] = [];
  parts.push(
    rect(frame.x0, frame.y0, frame.x1 - frame.x0, frame.y1 - frame.y0, {
      fill: "none",
      stroke: "#333",
      "stroke-width": "1",
    }),
  );
  for (const v of xTicks) {
    const px = xScale(v);
    if (px < frame.x0 - 0.5 || px > frame.x1 + 0.5) {
      continue;
    }
    parts.push(line(px, frame.y1, px, frame.y1 + 4, { stroke: "#333" }));
    parts.push(
      text(px, frame.y1 + 16, tickLabel(v), { "text-anchor": "middle" }),
    );
  }
  for (const v of yTicks) {
    const py = yScale(v);
    if (py < frame.y0 - 0.5 || py > frame.y1 + 0.5) {
      continue;
    }
    parts.push(line(frame.x0 - 4, py, frame.x0, py, { stroke: "#333" }));
    parts.push(
      text(frame.x0 - 7, py + 4, tickLabel(v), { "text-anchor": "end" }),
    );
  }
  parts.push(
    text((frame.x0 + frame.x1) / 2, frame.y1 + 32, xLabel, {
      "text-anchor": "middle",
      "font-size": "13",
    }),
  );
  parts.push(
    tag(
      "text",
      {
        x: fmt(frame.x0 - 40),
        y: fmt((frame.y0 + frame.y1) / 2),
        "font-size": "13",
        "text-anchor": "middle",
        transform: `rotate(-90 ${fmt(frame.x0 - 40)} ${fmt(
          (frame.y0 + frame.y1) / 2,
        )})`,
      },
      escapeXml(yLabel),
    ),
  );
  return parts.join("\n");
}

export function document(width: number, height: number, body: string): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" ` +
    `height="${height}" viewBox="0 0 ${width} ${height}" ` +
    `font-family="sans-serif">\n` +
    `<rect x="0" y="0" width="${width}" height="${height}" fill="white"/>\n` +
    body +
    "\n</svg>\n"
  );
}
