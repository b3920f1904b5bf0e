import { describe, expect, it } from "vitest";

import { rankBetween } from "../src/state/rank.js";

describe("rankBetween mirror of the server algorithm", () => {
  it("matches the server's anchor values", () => {
    expect(rankBetween(null, null)).toBe("n");
    expect(rankBetween("b", "d")).toBe("c");
    expect(rankBetween("b", "c")).toBe("bn");
    expect(rankBetween(null, "b")).toBe("an");
    expect(rankBetween("z", null)).toBe("zn");
  });

  it("stays strictly between arbitrary canonical bounds", () => {
    const ranks = ["b", "bn", "c", "cn", "d", "mzzb", "n", "x", "zy"];
    for (const lo of ranks) {
      for (const hi of ranks) {
        if (lo >= hi) continue;
        const mid = rankBetween(lo, hi);
        expect(mid > lo, `${mid} > ${lo}`).toBe(true);
        expect(mid < hi, `${mid} < ${hi}`).toBe(true);
        expect(mid.endsWith("a")).toBe(false);
      }
    }
  });

  it("survives repeated front insertion", () => {
    let hi = "b";
    for (let i = 0; i < 500; i += 1) {
      const next = rankBetween(null, hi);
      expect(next < hi).toBe(true);
      hi = next;
    }
  });

  it("rejects out-of-order bounds", () => {
    expect(() => rankBetween("c", "b")).toThrow();
  });
});
