import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    environmentMatchGlobs: [
      ["tests/protocol.test.ts", "node"],
      ["tests/**", "jsdom"],
    ],
    testTimeout: 180_000,
    hookTimeout: 120_000,
  },
});
