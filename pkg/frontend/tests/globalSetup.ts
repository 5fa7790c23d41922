/**
 * Starts the backend for the integration tests: generates a synthetic
 * dataset into a temp directory and serves it on port 8791.
 */

import { spawn, spawnSync, ChildProcess } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

const PORT = 8791;
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess | null = null;
let dataDir: string | null = null;

async function waitForServer(timeoutMs: number): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    try {
      const resp = await fetch(`${BASE}/api/datasets`);
      if (resp.ok) return;
    } catch {
      /* not up yet */
    }
    await new Promise((r) => setTimeout(r, 250));
  }
  throw new Error("backend did not come up on " + BASE);
}

export default async function setup(): Promise<() => void> {
  dataDir = mkdtempSync(join(tmpdir(), "oodgrid-ui-"));
  const gen = spawnSync(
    "python3",
    ["-m", "oodgrid.cli", "gen-synthetic", "--kind", "color-bias",
     "--out", join(dataDir, "demo"), "--n-train", "120", "--n-test", "120"],
    { stdio: "inherit" },
  );
  if (gen.status !== 0) throw new Error("gen-synthetic failed");

  server = spawn(
    "python3",
    ["-m", "oodgrid.cli", "serve", "--data-dir", dataDir, "--port", String(PORT)],
    { stdio: ["ignore", "pipe", "pipe"] },
  );
  server.stderr?.on("data", () => {
    /* uvicorn logs; keep the test output clean */
  });
  await waitForServer(60_000);

  return () => {
    if (server) server.kill("SIGTERM");
    if (dataDir) rmSync(dataDir, { recursive: true, force: true });
  };
}
