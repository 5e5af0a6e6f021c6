import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    // the contract suite boots the analysis service in a child process
    testTimeout: 120_000,
    hookTimeout: 120_000,
  },
});
