import { describe, expect, it } from "vitest";

import {
  ANALYTIC_LABELS,
  analyticLabel,
  BOUNDARIES,
  DIMENSION_MARKERS,
  PALETTE,
} from "../src/regimes";

describe("analyticLabel", () => {
  it("classifies reference points", () => {
    expect(analyticLabel(0.5, 1.4)).toBe("global_regular");
    expect(analyticLabel(2 / 3, 11 / 6)).toBe("local_regular");
    expect(analyticLabel(2 / 3, 3)).toBe("blowup");
    expect(analyticLabel(0.5, 1.9)).toBe("gap");
  });

  it("keeps the weak-transfer boundary inside the regular region", () => {
    expect(analyticLabel(1, 2)).toBe("global_regular");
  });

  it("puts the on-boundary 4D point in the gap", () => {
    // 2 beta = 3.5 = 3 alpha + 2 exactly: the strict inequality fails
    expect(analyticLabel(0.5, 1.75)).toBe("gap");
  });

  it("matches the inequalities on a grid", () => {
    for (let i = 0; i <= 20; i++) {
      for (let j = 0; j <= 20; j++) {
        const a = 0.2 + (1.8 * i) / 20;
        const b = 1.05 + (2.45 * j) / 20;
        const label = analyticLabel(a, b);
        if (b <= a + 1) {
          expect(label).toBe("global_regular");
        } else if (2 * b < 3 * a + 2) {
          expect(label).toBe("local_regular");
        } else if (2 * b > 3 * a + 3) {
          expect(label).toBe("blowup");
        } else {
          expect(label).toBe("gap");
        }
      }
    }
  });
});

describe("boundaries", () => {
  it("evaluates the three beta(alpha) curves", () => {
    const at = (id: string, a: number) => {
      const b = BOUNDARIES.find((x) => x.id === id);
      if (!b) throw new Error(id);
      return b.beta(a);
    };
    expect(at("global", 1)).toBe(2);
    expect(at("local", 2 / 3)).toBe(2);
    expect(at("blowup", 1)).toBe(3);
  });

  it("orders the curves local < blowup above the global line", () => {
    for (let i = 0; i <= 10; i++) {
      const a = 0.2 + (1.8 * i) / 10;
      const global = BOUNDARIES[0]!.beta(a);
      const local = BOUNDARIES[1]!.beta(a);
      const blowup = BOUNDARIES[2]!.beta(a);
      expect(local).toBeGreaterThan(global);
      expect(blowup).toBeGreaterThan(local);
    }
  });
});

describe("dimension markers", () => {
  it("places markers at alpha = 2/d, beta = 3/2 + 1/d", () => {
    for (const m of DIMENSION_MARKERS) {
      const d = Number(m.label.replace("D", ""));
      expect(m.alpha).toBeCloseTo(2 / d, 15);
      expect(m.beta).toBeCloseTo(3 / 2 + 1 / d, 15);
    }
    expect(DIMENSION_MARKERS.map((m) => m.label)).toEqual(["2D", "3D", "4D"]);
  });
});

describe("palette", () => {
  it("assigns a distinct color to every label", () => {
    const colors = ANALYTIC_LABELS.map((l) => PALETTE[l]);
    expect(new Set(colors).size).toBe(ANALYTIC_LABELS.length);
  });
});
