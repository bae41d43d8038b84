/** Shared types for the detection-stream generator. */

export interface GrayImage {
  width: number;
  height: number;
  /** Row-major 8-bit luma, width*height bytes. */
  data: Uint8Array;
}

export interface RgbFrame {
  width: number;
  height: number;
  /** Row-major interleaved RGB, width*height*3 bytes. */
  data: Uint8Array;
  index: number;
}

/** One raw detector hit in the coordinates it was detected at. */
export interface Detection {
  x: number;
  y: number;
  w: number;
  h: number;
  /** Backend-native score (SVM margin, cascade votes, ...). */
  score: number;
}

/** One line of the engine's detection-stream format. */
export interface DetectionRecord {
  frame: number;
  kind: string;
  x: number;
  y: number;
  w: number;
  h: number;
  confidence: number;
}

export interface SidecarJob {
  input: string;
  kinds: string[];
  /** Per-kind downscale factor in (0, 1]; detection rects are scaled back. */
  scales: Record<string, number>;
  /** Analyze every k-th frame. */
  stride: number;
  out: string;
}

export function roundHalfUp(v: number): number {
  return Math.floor(v + 0.5);
}

export function clampRect(
  x: number,
  y: number,
  w: number,
  h: number,
  frameW: number,
  frameH: number
): { x: number; y: number; w: number; h: number } {
  w = Math.max(1, Math.min(w, frameW));
  h = Math.max(1, Math.min(h, frameH));
  x = Math.min(Math.max(x, 0), frameW - w);
  y = Math.min(Math.max(y, 0), frameH - h);
  return { x, y, w, h };
}
