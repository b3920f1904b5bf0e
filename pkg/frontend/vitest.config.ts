import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    testTimeout: 30_000,
    hookTimeout: 40_000,
    // Backend subprocesses bind real ports; one file at a time keeps that tidy.
    fileParallelism: false,
  },
});
