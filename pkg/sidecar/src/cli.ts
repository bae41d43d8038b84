#!/usr/bin/env node
/** szoom-detect: generate a detection stream for the szoom engine.
 *
 *   szoom-detect --input <dir|stream> --kinds human,face --scale 0.8 \
 *                --stride 1 --out detections.jsonl [--face-scale 1.0]
 */

import { runJobToFile } from "./job";
import { SidecarJob } from "./types";

interface CliArgs {
  input?: string;
  kinds: string;
  scale: number;
  faceScale: number;
  stride: number;
  out?: string;
}

function parseArgs(argv: string[]): CliArgs {
  const args: CliArgs = { kinds: "human,face", scale: 0.8, faceScale: 1.0, stride: 1 };
  for (let i = 0; i < argv.length; i++) {
    const flag = argv[i];
    const next = () => {
      if (i + 1 >= argv.length) throw new Error(`missing value for ${flag}`);
      return argv[++i];
    };
    switch (flag) {
      case "--input":
        args.input = next();
        break;
      case "--kinds":
        args.kinds = next();
        break;
      case "--scale":
        args.scale = Number(next());
        break;
      case "--face-scale":
        args.faceScale = Number(next());
        break;
      case "--stride":
        args.stride = Number(next());
        break;
      case "--out":
        args.out = next();
        break;
      case "--help":
      case "-h":
        printUsage();
        process.exit(0);
        break;
      default:
        throw new Error(`unknown flag ${flag}`);
    }
  }
  return args;
}

function printUsage(): void {
  process.stderr.write(
    "usage: szoom-detect --input <dir|szraw> --kinds human,face --scale 0.8 " +
      "--stride 1 --out detections.jsonl [--face-scale 1.0]\n"
  );
}

async function main(): Promise<number> {
  let args: CliArgs;
  try {
    args = parseArgs(process.argv.slice(2));
  } catch (e) {
    process.stderr.write(`error: ${(e as Error).message}\n`);
    printUsage();
    return 2;
  }
  if (!args.input || !args.out) {
    process.stderr.write("error: --input and --out are required\n");
    printUsage();
    return 2;
  }
  const kinds = args.kinds.split(",").map((k) => k.trim()).filter(Boolean);
  const scales: Record<string, number> = {};
  for (const kind of kinds) {
    scales[kind] = kind === "human" ? args.scale : kind === "face" ? args.faceScale : 1.0;
  }
  const job: SidecarJob = {
    input: args.input,
    kinds,
    scales,
    stride: args.stride,
    out: args.out,
  };
  try {
    const result = await runJobToFile(job);
    for (const warning of result.warnings) {
      process.stderr.write(`warning: ${warning}\n`);
    }
    process.stderr.write(
      `szoom-detect: ${result.records.length} records from ` +
        `${result.framesAnalyzed}/${result.framesSeen} frames -> ${args.out} ` +
        `(params in ${args.out}.meta.json)\n`
    );
    return 0;
  } catch (e) {
    process.stderr.write(`error: ${(e as Error).message}\n`);
    return 1;
  }
}

main().then((code) => {
  process.exitCode = code;
});
