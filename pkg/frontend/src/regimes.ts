/** Regime classification of the (alpha, beta) plane.
 *
 * Mirrors the simulation package's rule exactly: weak-enough transfer
 * (beta <= alpha + 1) is globally regular, 2 beta < 3 alpha + 2 is
 * locally regular, 2 beta > 3 alpha + 3 is finite-time runaway, and
 * the strip in between is an open gap.
 */

export type AnalyticLabel =
  | "global_regular"
  | "local_regular"
  | "blowup"
  | "gap";

export const ANALYTIC_LABELS: readonly AnalyticLabel[] = [
  "global_regular",
  "local_regular",
  "blowup",
  "gap",
];

export function analyticLabel(alpha: number, beta: number): AnalyticLabel {
  if (beta <= alpha + 1) {
    return "global_regular";
  }
  if (2 * beta < 3 * alpha + 2) {
    return "local_regular";
  }
  if (2 * beta > 3 * alpha + 3) {
    return "blowup";
  }
  return "gap";
}

/** Region fill colors: a pure function of the analytic label. */
export const PALETTE: Record<AnalyticLabel, string> = {
  global_regular: "#7fc97f",
  local_regular: "#80b1d3",
  blowup: "#fb8072",
  gap: "#d9d9d9",
};

export interface Boundary {
  id: string;
  label: string;
  beta: (alpha: number) => number;
}

/** The three region boundaries as beta(alpha) curves. */
export const BOUNDARIES: readonly Boundary[] = [
  { id: "global", label: "beta = alpha + 1", beta: (a) => a + 1 },
  { id: "local", label: "2 beta = 3 alpha + 2", beta: (a) => (3 * a + 2) / 2 },
  { id: "blowup", label: "2 beta = 3 alpha + 3", beta: (a) => (3 * a + 3) / 2 },
];

export interface DimensionMarker {
  label: string;
  alpha: number;
  beta: number;
}

/** Parameter pairs matching d-dimensional fluid scaling:
 * alpha = 2/d, beta = 3/2 + 1/d. */
export const DIMENSION_MARKERS: readonly DimensionMarker[] = [
  { label: "2D", alpha: 1, beta: 2 },
  { label: "3D", alpha: 2 / 3, beta: 11 / 6 },
  { label: "4D", alpha: 1 / 2, beta: 7 / 4 },
];
