import { defineConfig } from "vite";

export default defineConfig({
  build: {
    outDir: "../src/layoutlab/ui_dist",
    emptyOutDir: true,
  },
  test: {
    environment: "node",
    testTimeout: 30000,
  },
});
