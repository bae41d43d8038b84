/** Job runner: frames in, schema-valid frame-sorted detection stream out. */

import fs from "node:fs";

import { createDetector, FrameDetector } from "./detectors";
import { readFrames, resizeGray, toGray } from "./image";
import { toJsonLines } from "./schema";
import {
  clampRect,
  Detection,
  DetectionRecord,
  roundHalfUp,
  SidecarJob,
} from "./types";

export interface JobResult {
  records: DetectionRecord[];
  framesSeen: number;
  framesAnalyzed: number;
  warnings: string[];
  meta: Record<string, unknown>;
}

interface RawHit {
  frame: number;
  kind: string;
  x: number;
  y: number;
  w: number;
  h: number;
  score: number;
}

function rescaleHit(
  det: Detection,
  scale: number,
  frameW: number,
  frameH: number
): { x: number; y: number; w: number; h: number } {
  const inv = 1.0 / scale;
  return clampRect(
    roundHalfUp(det.x * inv),
    roundHalfUp(det.y * inv),
    Math.max(roundHalfUp(det.w * inv), 1),
    Math.max(roundHalfUp(det.h * inv), 1),
    frameW,
    frameH
  );
}

/** Native scores become confidences by per-run, per-kind max normalization. */
function normalizeConfidences(hits: RawHit[]): DetectionRecord[] {
  const maxScore = new Map<string, number>();
  for (const hit of hits) {
    maxScore.set(hit.kind, Math.max(maxScore.get(hit.kind) ?? 0, hit.score));
  }
  return hits.map((hit) => {
    const max = maxScore.get(hit.kind) ?? 0;
    const confidence = max > 0 ? Math.min(hit.score / max, 1) : 1;
    return {
      frame: hit.frame,
      kind: hit.kind,
      x: hit.x,
      y: hit.y,
      w: hit.w,
      h: hit.h,
      confidence,
    };
  });
}

export async function runJob(
  job: SidecarJob,
  detectors?: FrameDetector[]
): Promise<JobResult> {
  if (job.stride < 1 || !Number.isInteger(job.stride)) {
    throw new Error(`stride must be a positive integer, got ${job.stride}`);
  }
  const active = detectors ?? job.kinds.map(createDetector);
  for (const [kind, scale] of Object.entries(job.scales)) {
    if (!(scale > 0 && scale <= 1)) {
      throw new Error(`downscale for '${kind}' must be in (0, 1], got ${scale}`);
    }
  }

  const warnings: string[] = [];
  const hits: RawHit[] = [];
  let framesSeen = 0;
  let framesAnalyzed = 0;
  let frameW = 0;
  let frameH = 0;

  for (const frame of readFrames(job.input, (msg) => warnings.push(msg))) {
    framesSeen++;
    frameW = frame.width;
    frameH = frame.height;
    if (frame.index % job.stride !== 0) continue;
    framesAnalyzed++;
    const gray = toGray(frame);
    for (const detector of active) {
      const scale = job.scales[detector.kind] ?? detector.defaultScale;
      const scaled =
        scale < 1.0
          ? resizeGray(
              gray,
              Math.max(roundHalfUp(frame.width * scale), 1),
              Math.max(roundHalfUp(frame.height * scale), 1)
            )
          : gray;
      const found = await detector.detect(scaled);
      for (const det of found) {
        const rect = rescaleHit(det, scale, frame.width, frame.height);
        hits.push({ frame: frame.index, kind: detector.kind, ...rect, score: det.score });
      }
    }
  }

  const records = normalizeConfidences(hits).sort((a, b) => a.frame - b.frame);
  const meta = {
    tool: "szoom-detect",
    input: job.input,
    frame_size: [frameW, frameH],
    frames_seen: framesSeen,
    frames_analyzed: framesAnalyzed,
    stride: job.stride,
    records: records.length,
    confidence: "native score / per-run per-kind maximum",
    backends: Object.fromEntries(
      active.map((d) => [
        d.kind,
        { ...d.describe(), downscale: job.scales[d.kind] ?? d.defaultScale },
      ])
    ),
    warnings,
  };
  return { records, framesSeen, framesAnalyzed, warnings, meta };
}

export async function runJobToFile(job: SidecarJob, detectors?: FrameDetector[]): Promise<JobResult> {
  const result = await runJob(job, detectors);
  const body = toJsonLines(result.records);
  fs.writeFileSync(job.out, body.length > 0 ? body + "\n" : "");
  fs.writeFileSync(`${job.out}.meta.json`, JSON.stringify(result.meta, null, 2) + "\n");
  return result;
}
