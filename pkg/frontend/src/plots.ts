import { mkdirSync, writeFileSync } from "node:fs";
import { dirname } from "node:path";

import {
  column,
  num,
  readTable,
  SchemaError,
  type SchemaName,
  type Table,
} from "./csv.js";
import { fitGrowthLaw, growthCurve, riseWindow, type GrowthFit } from "./fit.js";
import {
  ANALYTIC_LABELS,
  BOUNDARIES,
  DIMENSION_MARKERS,
  PALETTE,
  type AnalyticLabel,
} from "./regimes.js";
import * as svg from "./svg.js";

export type PlotKind =
  | "regime_map"
  | "timeseries"
  | "refine_scaling"
  | "toy_radii";

export const PLOT_KINDS: readonly PlotKind[] = [
  "regime_map",
  "timeseries",
  "refine_scaling",
  "toy_radii",
];

export interface PlotSpec {
  kind: PlotKind;
  inputCsv: string;
  output: string;
  /** Log-scaled value axis for the line plots (default true). */
  logY?: boolean;
  /** Draw the 2D/3D/4D markers on the regime map (default true). */
  dimensionMarkers?: boolean;
}

const WIDTH = 640;
const HEIGHT = 480;
const FRAME: svg.Frame = { x0: 70, y0: 30, x1: 480, y1: 430 };
const SERIES_COLORS = ["#1b9e77", "#d95f02", "#7570b3", "#e7298a"];

interface Series {
  name: string;
  color: string;
  dash?: string;
  markers?: boolean;
  points: Array<{ x: number; y: number }>;
}

function cell(row: string[], i: number): string {
  const v = row[i];
  if (v === undefined) {
    throw new SchemaError("short row");
  }
  return v;
}

function requireNum(row: string[], i: number, what: string): number {
  const v = num(cell(row, i));
  if (v === null) {
    throw new SchemaError(`empty ${what} cell`);
  }
  return v;
}

/** Smallest positive gap between sorted unique values (cell pitch). */
function gridPitch(values: number[], fallback: number): number {
  const uniq = Array.from(new Set(values)).sort((a, b) => a - b);
  let pitch = Infinity;
  for (let i = 1; i < uniq.length; i++) {
    const d = (uniq[i] as number) - (uniq[i - 1] as number);
    if (d > 0 && d < pitch) {
      pitch = d;
    }
  }
  return Number.isFinite(pitch) ? pitch : fallback;
}

function seriesLegend(series: Series[], x: number, y: number): string {
  const parts: string[] = [];
  series.forEach((s, i) => {
    const yy = y + 18 * i;
    parts.push(
      svg.line(x, yy - 4, x + 22, yy - 4, {
        stroke: s.color,
        "stroke-width": "2",
        ...(s.dash ? { "stroke-dasharray": s.dash } : {}),
      }),
    );
    parts.push(svg.text(x + 28, yy, s.name));
  });
  return parts.join("\n");
}

function drawSeries(series: Series[], xs: svg.Scale, ys: svg.Scale): string {
  const parts: string[] = [];
  for (const s of series) {
    if (s.points.length === 0) {
      continue;
    }
    parts.push(
      svg.polyline(
        s.points.map((p) => ({ x: xs(p.x), y: ys(p.y) })),
        {
          stroke: s.color,
          "stroke-width": "1.5",
          class: `series-${s.name}`,
          ...(s.dash ? { "stroke-dasharray": s.dash } : {}),
        },
      ),
    );
    if (s.markers) {
      for (const p of s.points) {
        parts.push(
          svg.circle(xs(p.x), ys(p.y), 3, {
            fill: s.color,
            class: `point-${s.name}`,
          }),
        );
      }
    }
  }
  return parts.join("\n");
}

/** Line panel shared by the time-series, refinement, and radius plots. */
function linePanel(
  series: Series[],
  frame: svg.Frame,
  xLabel: string,
  yLabel: string,
  logY: boolean,
  logX = false,
): string {
  const xsAll = series.flatMap((s) => s.points.map((p) => p.x));
  const ysAll = series.flatMap((s) => s.points.map((p) => p.y));
  const xRaw = xsAll.length > 0 ? svg.extent(xsAll) : { lo: logX ? 1 : 0, hi: logX ? 10 : 1 };
  const yRaw = ysAll.length > 0 ? svg.extent(ysAll) : { lo: 0.1, hi: 1 };
  if (logY && yRaw.lo <= 0) {
    throw new SchemaError("log axis needs positive values");
  }
  const xDomain = logX ? svg.logPadded(xRaw, 1.15) : svg.padded(xRaw, 0.02);
  const yDomain = logY ? svg.logPadded(yRaw) : svg.padded(yRaw, 0.05);
  const xScale = logX
    ? svg.logScale(xDomain, { lo: frame.x0, hi: frame.x1 })
    : svg.linearScale(xDomain, { lo: frame.x0, hi: frame.x1 });
  const yScale = logY
    ? svg.logScale(yDomain, { lo: frame.y1, hi: frame.y0 })
    : svg.linearScale(yDomain, { lo: frame.y1, hi: frame.y0 });
  const xTicks = logX ? svg.logTicks(xDomain) : svg.ticks(xDomain);
  const yTicks = logY ? svg.logTicks(yDomain) : svg.ticks(yDomain);
  return [
    drawSeries(series, xScale, yScale),
    svg.axes(frame, xScale, yScale, xTicks, yTicks, xLabel, yLabel),
  ].join("\n");
}

function positive(points: Array<{ x: number; y: number | null }>) {
  return points.filter((p): p is { x: number; y: number } =>
    p.y !== null && p.y > 0,
  );
}

// -- regime map -------------------------------------------------------

function renderRegimeMap(table: Table, spec: PlotSpec): string {
  const ia = column(table, "alpha");
  const ib = column(table, "beta");
  const il = column(table, "analytic_label");
  const ie = column(table, "empirical_label");
  const cells = table.rows.map((row) => {
    const label = cell(row, il) as AnalyticLabel;
    if (!ANALYTIC_LABELS.includes(label)) {
      throw new SchemaError(`invalid analytic_label: ${label}`);
    }
    return {
      alpha: requireNum(row, ia, "alpha"),
      beta: requireNum(row, ib, "beta"),
      alphaRaw: cell(row, ia),
      betaRaw: cell(row, ib),
      label,
      empirical: cell(row, ie),
    };
  });

  const alphas = cells.map((c) => c.alpha);
  const betas = cells.map((c) => c.beta);
  // header-only CSVs still get the boundary-line figure on a default window
  const da = gridPitch(alphas, 0.1);
  const db = gridPitch(betas, 0.1);
  const aDomain =
    alphas.length > 0
      ? { lo: svg.extent(alphas).lo - da / 2, hi: svg.extent(alphas).hi + da / 2 }
      : { lo: 0, hi: 2 };
  const bDomain =
    betas.length > 0
      ? { lo: svg.extent(betas).lo - db / 2, hi: svg.extent(betas).hi + db / 2 }
      : { lo: 1, hi: 3.5 };
  const xs = svg.linearScale(aDomain, { lo: FRAME.x0, hi: FRAME.x1 });
  const ys = svg.linearScale(bDomain, { lo: FRAME.y1, hi: FRAME.y0 });

  const parts: string[] = [];
  parts.push(
    svg.tag(
      "clipPath",
      { id: "plot-clip" },
      svg.rect(FRAME.x0, FRAME.y0, FRAME.x1 - FRAME.x0, FRAME.y1 - FRAME.y0, {}),
    ),
  );

  const cellRects: string[] = [];
  const eventDots: string[] = [];
  for (const c of cells) {
    cellRects.push(
      svg.rect(
        xs(c.alpha - da / 2),
        ys(c.beta + db / 2),
        xs(c.alpha + da / 2) - xs(c.alpha - da / 2),
        ys(c.beta - db / 2) - ys(c.beta + db / 2),
        {
          fill: PALETTE[c.label],
          class: "cell",
          "data-alpha": c.alphaRaw,
          "data-beta": c.betaRaw,
          "data-label": c.label,
        },
      ),
    );
    if (c.empirical === "quasi_blowup") {
      eventDots.push(
        svg.circle(xs(c.alpha), ys(c.beta), 2, {
          fill: "#333",
          class: "quasi-blowup-marker",
        }),
      );
    }
  }
  parts.push(svg.tag("g", { "clip-path": "url(#plot-clip)" },
    cellRects.join("\n") + "\n" + eventDots.join("\n")));

  const dashes = ["", "6,3", "2,2"];
  const boundaryLines: string[] = [];
  for (let k = 0; k < BOUNDARIES.length; k++) {
    const b = BOUNDARIES[k]!;
    const pts: Array<{ x: number; y: number }> = [];
    const nSample = 100;
    for (let i = 0; i <= nSample; i++) {
      const a = aDomain.lo + ((aDomain.hi - aDomain.lo) * i) / nSample;
      pts.push({ x: xs(a), y: ys(b.beta(a)) });
    }
    const dash = dashes[k];
    boundaryLines.push(
      svg.polyline(pts, {
        stroke: "#111",
        "stroke-width": "1.5",
        class: "boundary",
        id: `boundary-${b.id}`,
        ...(dash ? { "stroke-dasharray": dash } : {}),
      }),
    );
  }
  parts.push(
    svg.tag("g", { "clip-path": "url(#plot-clip)" }, boundaryLines.join("\n")),
  );

  if (spec.dimensionMarkers !== false) {
    for (const m of DIMENSION_MARKERS) {
      if (
        m.alpha < aDomain.lo || m.alpha > aDomain.hi ||
        m.beta < bDomain.lo || m.beta > bDomain.hi
      ) {
        continue;
      }
      parts.push(
        svg.circle(xs(m.alpha), ys(m.beta), 4, {
          fill: "white",
          stroke: "#111",
          "stroke-width": "1.5",
          class: "dimension-marker",
          "data-dimension": m.label,
        }),
      );
      parts.push(
        svg.text(xs(m.alpha) + 7, ys(m.beta) - 7, m.label, {
          "font-size": "12",
          "font-weight": "bold",
        }),
      );
    }
  }

  parts.push(
    svg.axes(
      FRAME, xs, ys,
      svg.ticks(aDomain), svg.ticks(bDomain),
      "alpha", "beta",
    ),
  );

  // legend: region colors, then boundary line styles
  const lx = FRAME.x1 + 16;
  let ly = FRAME.y0 + 10;
  for (const label of ANALYTIC_LABELS) {
    parts.push(svg.rect(lx, ly - 9, 12, 12, { fill: PALETTE[label] }));
    parts.push(svg.text(lx + 18, ly + 1, label));
    ly += 18;
  }
  ly += 8;
  for (let k = 0; k < BOUNDARIES.length; k++) {
    const b = BOUNDARIES[k]!;
    const dash = dashes[k];
    parts.push(
      svg.line(lx, ly - 3, lx + 22, ly - 3, {
        stroke: "#111",
        "stroke-width": "1.5",
        ...(dash ? { "stroke-dasharray": dash } : {}),
      }),
    );
    parts.push(svg.text(lx + 28, ly, b.label, { "font-size": "10" }));
    ly += 16;
  }

  return svg.document(WIDTH, HEIGHT, parts.join("\n"));
}

// -- time series ------------------------------------------------------

function renderTimeseries(table: Table, spec: PlotSpec): string {
  const it = column(table, "t");
  const times = table.rows.map((row) => requireNum(row, it, "t"));
  const logY = spec.logY !== false;

  const normNames = ["energy", "enstrophy", "gamma_norm", "blowup_norm"];
  const norms: Series[] = normNames.map((name, k) => {
    const i = column(table, name);
    const pts = table.rows.map((row, j) => ({
      x: times[j] as number,
      y: num(cell(row, i)),
    }));
    return {
      name,
      color: SERIES_COLORS[k] as string,
      points: logY ? positive(pts)
        : pts.filter((p): p is { x: number; y: number } => p.y !== null),
    };
  });

  const itheta = column(table, "theta");
  const thetaPts = positive(
    table.rows.map((row, j) => ({
      x: times[j] as number,
      y: num(cell(row, itheta)),
    })),
  );

  const top: svg.Frame = { x0: 70, y0: 30, x1: 480, y1: 210 };
  const bottom: svg.Frame = { x0: 70, y0: 260, x1: 480, y1: 430 };
  const parts: string[] = [];
  parts.push(linePanel(norms, top, "", "norms", logY));
  parts.push(seriesLegend(norms, top.x1 + 16, top.y0 + 10));

  const theta: Series[] = [
    {
      name: "theta",
      color: "#252525",
      points: thetaPts,
    },
  ];
  let fit: GrowthFit | null = null;
  if (thetaPts.length >= 7) {
    const ts = thetaPts.map((p) => p.x);
    const vs = thetaPts.map((p) => p.y);
    try {
      fit = fitGrowthLaw(ts, vs, riseWindow(ts, vs));
    } catch {
      fit = null;
    }
  }
  if (fit !== null) {
    const start = thetaPts.find((p) => p.x >= (fit as GrowthFit).windowStart);
    if (start !== undefined) {
      const overlayTimes = thetaPts
        .filter((p) => p.x >= start.x && p.x <= (fit as GrowthFit).windowEnd)
        .map((p) => p.x);
      theta.push({
        name: "growth-fit",
        color: "#e41a1c",
        dash: "5,3",
        points: growthCurve(fit.c, start.x, start.y, overlayTimes).map(
          (p) => ({ x: p.t, y: p.theta }),
        ),
      });
    }
  }
  parts.push(linePanel(theta, bottom, "t", "Theta", logY));
  parts.push(seriesLegend(theta, bottom.x1 + 16, bottom.y0 + 10));
  if (fit !== null) {
    parts.push(
      svg.text(
        bottom.x0 + 8,
        bottom.y0 + 16,
        `growth fit c = ${fit.c.toPrecision(3)}, ` +
          `residual ${(fit.residual * 100).toFixed(1)}%`,
        { class: "growth-fit-label" },
      ),
    );
  }
  return svg.document(WIDTH, HEIGHT, parts.join("\n"));
}

// -- refinement scaling -----------------------------------------------

function renderRefineScaling(table: Table, spec: PlotSpec): string {
  const inm = column(table, "n_modes");
  const ibn = column(table, "peak_blowup_norm");
  const ien = column(table, "peak_enstrophy");
  const ns = table.rows.map((row) => requireNum(row, inm, "n_modes"));
  const mk = (name: string, i: number, k: number, dash?: string): Series => ({
    name,
    color: SERIES_COLORS[k] as string,
    markers: true,
    ...(dash ? { dash } : {}),
    points: positive(
      table.rows.map((row, j) => ({
        x: ns[j] as number,
        y: num(cell(row, i)),
      })),
    ),
  });
  const series = [
    mk("peak_blowup_norm", ibn, 0),
    mk("peak_enstrophy", ien, 1, "6,3"),
  ];
  const frame: svg.Frame = { x0: 70, y0: 40, x1: 480, y1: 430 };
  const body = [
    linePanel(series, frame, "modes", "peak value",
      spec.logY !== false, true),
    seriesLegend(series, frame.x1 + 16, frame.y0 + 10),
  ].join("\n");
  return svg.document(WIDTH, HEIGHT, body);
}

// -- toy-system radii -------------------------------------------------

function renderToyRadii(table: Table, spec: PlotSpec): string {
  const it = column(table, "t");
  const is = column(table, "radius_strong");
  const iw = column(table, "radius_weak");
  const ts = table.rows.map((row) => requireNum(row, it, "t"));
  const mk = (name: string, i: number, k: number, dash?: string): Series => ({
    name,
    color: SERIES_COLORS[k] as string,
    ...(dash ? { dash } : {}),
    points: positive(
      table.rows.map((row, j) => ({
        x: ts[j] as number,
        y: num(cell(row, i)),
      })),
    ),
  });
  const series = [
    mk("radius_strong", is, 0),
    mk("radius_weak", iw, 2, "6,3"),
  ];
  const frame: svg.Frame = { x0: 70, y0: 40, x1: 480, y1: 430 };
  const body = [
    linePanel(series, frame, "t", "attraction radius", spec.logY !== false),
    seriesLegend(series, frame.x1 + 16, frame.y0 + 10),
  ].join("\n");
  return svg.document(WIDTH, HEIGHT, body);
}

// -- dispatch ---------------------------------------------------------

const KIND_SCHEMA: Record<PlotKind, SchemaName> = {
  regime_map: "sweep",
  timeseries: "trajectory",
  refine_scaling: "refine",
  toy_radii: "radius",
};

/** Render the figure for a spec and return the SVG text. */
export function render(spec: PlotSpec): string {
  const table = readTable(spec.inputCsv, KIND_SCHEMA[spec.kind]);
  switch (spec.kind) {
    case "regime_map":
      return renderRegimeMap(table, spec);
    case "timeseries":
      return renderTimeseries(table, spec);
    case "refine_scaling":
      return renderRefineScaling(table, spec);
    case "toy_radii":
      return renderToyRadii(table, spec);
  }
}

/** Render and write the figure file. */
export function renderToFile(spec: PlotSpec): void {
  const out = render(spec);
  mkdirSync(dirname(spec.output), { recursive: true });
  writeFileSync(spec.output, out, "utf8");
}
