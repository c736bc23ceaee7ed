import { describe, expect, it } from "vitest";

import { fitGrowthLaw, growthCurve, riseWindow } from "../src/fit";

/** Closed-form solution of dv/dt = c v^(3/2) from v(0) = 1. */
function exactSeries(c: number, tEnd: number, dt: number) {
  const times: number[] = [];
  const values: number[] = [];
  for (let t = 0; t <= tEnd + dt / 2; t += dt) {
    times.push(t);
    values.push(Math.pow(1 - (c * t) / 2, -2));
  }
  return { times, values };
}

describe("fitGrowthLaw", () => {
  it.each([[0.1], [0.5], [2.0]])("recovers c = %f within 1%%", (c) => {
    const { times, values } = exactSeries(c, 0.8, 0.005);
    const fit = fitGrowthLaw(times, values);
    expect(Math.abs(fit.c - c)).toBeLessThanOrEqual(0.01 * c);
    expect(fit.residual).toBeLessThanOrEqual(0.01);
  });

  it("respects the window bounds", () => {
    const { times, values } = exactSeries(1.0, 0.8, 0.005);
    const fit = fitGrowthLaw(times, values, [0.2, 0.6]);
    expect(fit.windowStart).toBeGreaterThanOrEqual(0.2);
    expect(fit.windowEnd).toBeLessThanOrEqual(0.6);
    expect(Math.abs(fit.c - 1.0)).toBeLessThanOrEqual(0.01);
  });

  it("rejects too-short series", () => {
    expect(() => fitGrowthLaw([0, 1], [1, 2])).toThrow();
    expect(() => fitGrowthLaw([0, 1, 2], [1, 2, 3], [10, 11])).toThrow();
  });

  it("ignores nonpositive samples", () => {
    const { times, values } = exactSeries(0.5, 0.8, 0.005);
    const spoiled = values.map((v, i) => (i % 40 === 7 ? 0 : v));
    const fit = fitGrowthLaw(times, spoiled);
    // zeroed samples drop out of the fit but corrupt their neighbors'
    // centered differences, so only c's sign and scale survive
    expect(fit.c).toBeGreaterThan(0);
  });
});

describe("riseWindow", () => {
  it("ends the window at the series peak", () => {
    const times = [0, 1, 2, 3, 4, 5, 6];
    const values = [0.1, 0.2, 0.9, 3.0, 2.5, 2.4, 2.4];
    const [start, end] = riseWindow(times, values);
    expect(start).toBe(2);
    expect(end).toBe(3);
  });

  it("clamps to the series start", () => {
    const [start, end] = riseWindow([0, 0.2, 0.4], [1, 3, 2]);
    expect(start).toBe(0);
    expect(end).toBe(1);
  });
});

describe("growthCurve", () => {
  it("reproduces the closed form and stops at the singularity", () => {
    // c = 2 from theta0 = 1 gives theta(t) = (1 - t)^(-2), singular at t = 1
    const pts = growthCurve(2.0, 0, 1, [0, 0.25, 0.5, 0.75, 0.9, 1.1]);
    expect(pts.length).toBe(5);
    expect(pts[1]!.theta).toBeCloseTo(Math.pow(1 - 0.25, -2), 12);
    expect(pts[4]!.theta).toBeCloseTo(100, 10);
  });
});
