/** Detection-stream schema shared with the engine's ingest validation. */

import { z } from "zod";

import { DetectionRecord } from "./types";

export const detectionRecordSchema = z.object({
  frame: z.number().int().min(0),
  kind: z.string().min(1),
  x: z.number().int(),
  y: z.number().int(),
  w: z.number().int().min(1),
  h: z.number().int().min(1),
  confidence: z.number().min(0).max(1),
});

/** Serialize records as frame-sorted JSON Lines (the engine ingest format). */
export function toJsonLines(records: DetectionRecord[]): string {
  const sorted = [...records].sort((a, b) => a.frame - b.frame);
  return sorted
    .map((r) =>
      JSON.stringify({
        frame: r.frame,
        kind: r.kind,
        x: r.x,
        y: r.y,
        w: r.w,
        h: r.h,
        confidence: r.confidence,
      })
    )
    .join("\n");
}

/** Validate a serialized stream line by line; throws naming the bad line. */
export function validateJsonLines(text: string): DetectionRecord[] {
  const records: DetectionRecord[] = [];
  let lastFrame = -1;
  const lines = text.split("\n");
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i].trim();
    if (!line) continue;
    let parsed: unknown;
    try {
      parsed = JSON.parse(line);
    } catch {
      throw new Error(`line ${i + 1}: invalid JSON`);
    }
    const result = detectionRecordSchema.safeParse(parsed);
    if (!result.success) {
      throw new Error(`line ${i + 1}: ${result.error.issues[0].message}`);
    }
    if (result.data.frame < lastFrame) {
      throw new Error(
        `line ${i + 1}: records out of order (frame ${result.data.frame} after ${lastFrame})`
      );
    }
    lastFrame = result.data.frame;
    records.push(result.data);
  }
  return records;
}
