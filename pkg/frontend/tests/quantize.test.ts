import { describe, expect, it } from "vitest";

import { sliderQuantize } from "../src/quantize.js";

describe("sliderQuantize (mirror of the engine rule)", () => {
  it("snaps to the nearest lattice point", () => {
    expect(sliderQuantize(3.4, 0, 9, 1)).toBe(3);
    expect(sliderQuantize(4.6, 0, 9, 1)).toBe(5);
  });

  it("clamps to the range", () => {
    expect(sliderQuantize(12, 0, 9, 1)).toBe(9);
    expect(sliderQuantize(-4, 0, 9, 1)).toBe(0);
  });

  it("rounds ties toward +infinity", () => {
    expect(sliderQuantize(3.5, 0, 9, 1)).toBe(4);
    expect(sliderQuantize(0.25, 0, 1, 0.5)).toBe(0.5);
  });

  it("stays on the lattice for fractional steps", () => {
    for (let raw = -1; raw <= 2; raw += 0.013) {
      const q = sliderQuantize(raw, 0, 1, 0.05);
      expect(q).toBeGreaterThanOrEqual(0);
      expect(q).toBeLessThanOrEqual(1);
      expect(Math.abs(Math.round(q / 0.05) * 0.05 - q)).toBeLessThan(1e-9);
    }
  });

  it("rejects degenerate configs", () => {
    expect(() => sliderQuantize(1, 5, 5, 1)).toThrow();
    expect(() => sliderQuantize(1, 0, 9, 0)).toThrow();
  });
});
