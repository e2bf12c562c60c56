#!/usr/bin/env node
/** riskcloud-render --kind <kind> --in DIR --out DIR [--style style.json] */

import { FIGURE_KINDS, FigureKind, loadStyle, renderFigure } from "./render";
import { ArtifactError } from "./types";

function usage(): string {
  return (
    "usage: riskcloud-render --kind <" +
    FIGURE_KINDS.join("|") +
    "> --in DIR --out DIR [--style style.json]"
  );
}

export function main(argv: string[]): number {
  const args = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    const key = argv[i];
    if (!key.startsWith("--") || i + 1 >= argv.length) {
      process.stderr.write(usage() + "\n");
      return 2;
    }
    args.set(key.slice(2), argv[i + 1]);
  }
  const kind = args.get("kind");
  const inDir = args.get("in");
  const outDir = args.get("out");
  if (!kind || !inDir || !outDir) {
    process.stderr.write(usage() + "\n");
    return 2;
  }
  if (!(FIGURE_KINDS as readonly string[]).includes(kind)) {
    process.stderr.write(`unknown figure kind ${kind}\n${usage()}\n`);
    return 2;
  }
  try {
    const style = loadStyle(args.get("style"));
    const written = renderFigure(kind as FigureKind, inDir, outDir, style);
    for (const p of written) {
      process.stdout.write(p + "\n");
    }
    return 0;
  } catch (err) {
    if (err instanceof ArtifactError) {
      process.stderr.write(`artifact error: ${err.message}\n`);
      return 1;
    }
    process.stderr.write(`error: ${(err as Error).message}\n`);
    return 3;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
