/** Growth-law fit d(Theta)/dt = c Theta^(3/2), matching the simulation
 * package's convention: centered differences, least squares through the
 * origin in the transformed variable, relative l2 misfit as residual.
 */

export class FitError extends Error {}

export interface GrowthFit {
  c: number;
  residual: number;
  windowStart: number;
  windowEnd: number;
}

export function fitGrowthLaw(
  times: number[],
  values: number[],
  window?: [number, number],
): GrowthFit {
  if (times.length !== values.length) {
    throw new FitError("times and values length mismatch");
  }
  if (times.length < 3) {
    throw new FitError("need at least 3 samples");
  }
  const tm: number[] = [];
  const vm: number[] = [];
  const dv: number[] = [];
  for (let i = 1; i < times.length - 1; i++) {
    const t = times[i] as number;
    const v = values[i] as number;
    if (v <= 0) {
      continue;
    }
    if (window && (t < window[0] || t > window[1])) {
      continue;
    }
    tm.push(t);
    vm.push(v);
    dv.push(
      ((values[i + 1] as number) - (values[i - 1] as number)) /
        ((times[i + 1] as number) - (times[i - 1] as number)),
    );
  }
  if (tm.length < 5) {
    throw new FitError("fewer than 5 usable samples for the growth fit");
  }
  let xy = 0;
  let xx = 0;
  for (let i = 0; i < tm.length; i++) {
    const x = Math.pow(vm[i] as number, 1.5);
    xy += x * (dv[i] as number);
    xx += x * x;
  }
  const c = xy / xx;
  let signal = 0;
  let misfit = 0;
  for (let i = 0; i < tm.length; i++) {
    const x = Math.pow(vm[i] as number, 1.5);
    const y = dv[i] as number;
    signal += y * y;
    misfit += (y - c * x) * (y - c * x);
  }
  const residual = signal > 0 ? Math.sqrt(misfit / signal) : 0;
  return {
    c,
    residual,
    windowStart: tm[0] as number,
    windowEnd: tm[tm.length - 1] as number,
  };
}

/** Width-1.0 fit window ending at the series peak: the growth law holds
 * while the cascade ramps up, not on the post-peak plateau. */
export function riseWindow(
  times: number[],
  values: number[],
  width = 1.0,
): [number, number] {
  let peak = 0;
  for (let i = 1; i < values.length; i++) {
    if ((values[i] as number) > (values[peak] as number)) {
      peak = i;
    }
  }
  const tPeak = times[peak] as number;
  const start = Math.max(times[0] as number, tPeak - width);
  return [start, start + width];
}

/** Solution of the fitted law from (t0, theta0), for overlay curves:
 * theta(t) = (theta0^(-1/2) - c (t - t0) / 2)^(-2). */
export function growthCurve(
  c: number,
  t0: number,
  theta0: number,
  times: number[],
): Array<{ t: number; theta: number }> {
  const out: Array<{ t: number; theta: number }> = [];
  for (const t of times) {
    const base = Math.pow(theta0, -0.5) - (c * (t - t0)) / 2;
    if (base <= 0) {
      break;
    }
    out.push({ t, theta: Math.pow(base, -2) });
  }
  return out;
}
