#!/usr/bin/env node
/**
 * idiolens-exporter export --model <id> --terms <file> --out <store.jsonl> [--batch <n>] [--include-special]
 * idiolens-exporter serve  --model <id> --port <p> [--include-special]
 */

import { loadTransformersBackend } from "./backend.js";
import { exportEmbeddings } from "./export.js";
import { buildServer } from "./server.js";

function parseFlags(argv: string[]): Map<string, string | boolean> {
  const flags = new Map<string, string | boolean>();
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (!arg.startsWith("--")) {
      throw new Error(`unexpected argument ${arg}`);
    }
    const name = arg.slice(2);
    if (i + 1 < argv.length && !argv[i + 1].startsWith("--")) {
      flags.set(name, argv[++i]);
    } else {
      flags.set(name, true);
    }
  }
  return flags;
}

function requireString(flags: Map<string, string | boolean>, name: string): string {
  const value = flags.get(name);
  if (typeof value !== "string" || value.length === 0) {
    throw new Error(`missing required flag --${name}`);
  }
  return value;
}

async function main(): Promise<number> {
  const [command, ...rest] = process.argv.slice(2);
  if (command !== "export" && command !== "serve") {
    console.error("usage: idiolens-exporter export|serve [flags]");
    return 2;
  }
  let flags: Map<string, string | boolean>;
  try {
    flags = parseFlags(rest);
  } catch (err) {
    console.error(String(err));
    return 2;
  }

  const modelId = requireString(flags, "model");
  const includeSpecial = flags.get("include-special") === true;
  const backend = await loadTransformersBackend(modelId);

  if (command === "export") {
    const job = {
      modelId,
      termsPath: requireString(flags, "terms"),
      outPath: requireString(flags, "out"),
      batchSize: Number(flags.get("batch") ?? 16),
      includeSpecial,
    };
    const result = await exportEmbeddings(job, backend);
    console.log(`wrote ${result.texts} vectors (dim ${result.dim}) to ${job.outPath}`);
    return 0;
  }

  const port = Number(requireString(flags, "port"));
  const server = buildServer(backend, { includeSpecial });
  await new Promise<void>((resolve) => server.listen(port, resolve));
  console.log(`serving ${modelId} on :${port} (POST /embed)`);
  await new Promise(() => undefined); // run until killed
  return 0;
}

main().then(
  (code) => {
    if (code !== 0) process.exit(code);
  },
  (err) => {
    console.error(String(err));
    process.exit(1);
  },
);
