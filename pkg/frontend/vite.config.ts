import { defineConfig } from "vitest/config";

export default defineConfig({
  build: {
    outDir: "dist",
    sourcemap: true,
  },
  server: {
    // During development the planner service runs separately; proxy API
    // calls so the page can use same-origin paths.
    proxy: {
      "/health": "http://127.0.0.1:8080",
      "/profiles": "http://127.0.0.1:8080",
      "/route": "http://127.0.0.1:8080",
      "/motorhome": "http://127.0.0.1:8080",
      "/overrides": "http://127.0.0.1:8080",
    },
  },
  test: {
    environment: "node",
    include: ["tests/**/*.test.ts"],
    testTimeout: 30_000,
    hookTimeout: 30_000,
  },
});
