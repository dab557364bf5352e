#!/usr/bin/env node
/**
 * Render command:
 *   qaekit-plots render --kind <loss_curves|fidelity_box|dm_heatmap|image_tiles>
 *                       --out <file.svg> --in <artifact...>
 *
 * Exit codes: 0 success, 1 render failure, 2 bad arguments or input schema.
 */

import { readFileSync, writeFileSync } from "node:fs";

import { SchemaError, parseDensityMatrixJson, parseFidelityCsv, parseLossCsv } from "./csv.js";
import {
  renderDensityHeatmap,
  renderFidelityBox,
  renderImageTiles,
  renderLossCurves,
  seriesLabel,
} from "./render.js";

const KINDS = ["loss_curves", "fidelity_box", "dm_heatmap", "image_tiles"] as const;
type Kind = (typeof KINDS)[number];

interface Args {
  kind: Kind;
  out: string;
  inputs: string[];
}

export function parseArgs(argv: string[]): Args {
  if (argv[0] !== "render") {
    throw new UsageError(`unknown command ${argv[0] ?? "(none)"}; expected 'render'`);
  }
  let kind: string | undefined;
  let out: string | undefined;
  const inputs: string[] = [];
  let i = 1;
  while (i < argv.length) {
    const arg = argv[i];
    if (arg === "--kind") {
      kind = argv[++i];
    } else if (arg === "--out") {
      out = argv[++i];
    } else if (arg === "--in") {
      i++;
      while (i < argv.length && !argv[i].startsWith("--")) {
        inputs.push(argv[i]);
        i++;
      }
      continue;
    } else {
      throw new UsageError(`unknown argument ${arg}`);
    }
    i++;
  }
  if (!kind || !(KINDS as readonly string[]).includes(kind)) {
    throw new UsageError(`--kind must be one of ${KINDS.join("|")}, got ${kind ?? "(none)"}`);
  }
  if (!out) throw new UsageError("--out is required");
  if (inputs.length === 0) throw new UsageError("--in needs at least one artifact path");
  return { kind: kind as Kind, out, inputs };
}

export class UsageError extends Error {}

function read(path: string): string {
  try {
    return readFileSync(path, "utf-8");
  } catch (err) {
    throw new SchemaError(path, `cannot read: ${(err as Error).message}`);
  }
}

export function renderToString(kind: Kind, inputs: string[]): string {
  switch (kind) {
    case "loss_curves":
      return renderLossCurves(
        inputs.map((p) => ({ label: seriesLabel(p), rows: parseLossCsv(p, read(p)) }))
      );
    case "fidelity_box":
      return renderFidelityBox(
        inputs.map((p) => ({ label: seriesLabel(p), rows: parseFidelityCsv(p, read(p)) }))
      );
    case "dm_heatmap": {
      if (inputs.length !== 1) {
        throw new UsageError("dm_heatmap takes exactly one density_matrices.json input");
      }
      return renderDensityHeatmap(parseDensityMatrixJson(inputs[0], read(inputs[0])));
    }
    case "image_tiles":
      return renderImageTiles(inputs.map((p) => parseDensityMatrixJson(p, read(p))));
  }
}

export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    if (err instanceof UsageError) {
      console.error(`usage error: ${err.message}`);
      return 2;
    }
    throw err;
  }
  try {
    const svg = renderToString(args.kind, args.inputs);
    writeFileSync(args.out, svg);
    console.log(`wrote ${args.out}`);
    return 0;
  } catch (err) {
    if (err instanceof SchemaError || err instanceof UsageError) {
      console.error(String(err.message));
      return 2;
    }
    console.error(`render failed: ${(err as Error).stack ?? err}`);
    return 1;
  }
}

const isMain = process.argv[1] && import.meta.url.endsWith(process.argv[1].split("/").pop() ?? "");
if (isMain) {
  process.exit(main(process.argv.slice(2)));
}
