/**
 * HTTP server for the embedding wire contract:
 *
 *   POST /embed  {"texts": [...], "model_id": "..."}
 *   -> 200 {"dim": <int>, "vectors": [[...], ...]}
 *
 * 422 for malformed bodies (bad JSON, missing/empty/blank texts), 500 when
 * the model itself fails. Vectors served are identical to what an export of
 * the same texts writes (same pooling, before float32 storage rounding).
 */

import { createServer, type IncomingMessage, type Server, type ServerResponse } from "node:http";

import type { TokenEmbedder } from "./backend.js";
import { meanPool, type PoolOptions } from "./pooling.js";

const BODY_LIMIT = 32 * 1024 * 1024;

export function buildServer(backend: TokenEmbedder, pool: PoolOptions = {}): Server {
  return createServer((req, res) => {
    void handle(req, res, backend, pool);
  });
}

async function handle(
  req: IncomingMessage,
  res: ServerResponse,
  backend: TokenEmbedder,
  pool: PoolOptions,
): Promise<void> {
  if (req.method !== "POST" || req.url !== "/embed") {
    respond(res, 404, { error: "POST /embed only" });
    return;
  }
  let body: unknown;
  try {
    body = JSON.parse(await readBody(req));
  } catch (err) {
    respond(res, 422, { error: `malformed JSON body: ${err}` });
    return;
  }
  const texts = (body as { texts?: unknown }).texts;
  if (!isTextBatch(texts)) {
    respond(res, 422, { error: "body needs texts: a non-empty array of non-blank strings" });
    return;
  }
  try {
    const tokens = await backend.embedTokens(texts);
    const vectors = meanPool(tokens, pool);
    respond(res, 200, { dim: tokens.dim, vectors });
  } catch (err) {
    respond(res, 500, { error: String(err) });
  }
}

function isTextBatch(value: unknown): value is string[] {
  return (
    Array.isArray(value) &&
    value.length > 0 &&
    value.every((t) => typeof t === "string" && t.trim().length > 0)
  );
}

function readBody(req: IncomingMessage): Promise<string> {
  return new Promise((resolve, reject) => {
    const chunks: Buffer[] = [];
    let size = 0;
    req.on("data", (chunk: Buffer) => {
      size += chunk.length;
      if (size > BODY_LIMIT) {
        reject(new Error("body too large"));
        req.destroy();
        return;
      }
      chunks.push(chunk);
    });
    req.on("end", () => resolve(Buffer.concat(chunks).toString("utf-8")));
    req.on("error", reject);
  });
}

function respond(res: ServerResponse, status: number, payload: unknown): void {
  const body = JSON.stringify(payload);
  res.writeHead(status, {
    "Content-Type": "application/json",
    "Content-Length": Buffer.byteLength(body),
  });
  res.end(body);
}
