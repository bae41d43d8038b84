/** Viola-Jones cascade detector over integral images.
 *
 * Interprets flat Haar cascades (window size followed by stages of decision
 * stumps over weighted rectangle sums, variance-normalized per window). The
 * bundled frontal-face model lives in assets/face-cascade.json.
 */

import { Detection, GrayImage } from "./types";

export interface CascadeModel {
  window: [number, number];
  data: number[];
}

interface ScanRect {
  x: number;
  y: number;
  w: number;
  h: number;
}

export interface ViolaJonesOptions {
  initialScale?: number;
  scaleFactor?: number;
  /** Window step as a fraction of the current scale. */
  stepSize?: number;
  /** Minimum mutual overlap for two windows to vote for the same object. */
  groupOverlap?: number;
  /** Minimum votes for a merged detection to survive. */
  minNeighbors?: number;
}

function computeIntegrals(image: GrayImage): {
  sat: Int32Array;
  sqsat: Float64Array;
  rsat: Int32Array;
} {
  const { width, height, data } = image;
  const sat = new Int32Array(width * height);
  const sqsat = new Float64Array(width * height);
  const rsat = new Int32Array(width * height);
  for (let y = 0; y < height; y++) {
    for (let x = 0; x < width; x++) {
      const i = y * width + x;
      const v = data[i];
      const up = y > 0 ? sat[i - width] : 0;
      const left = x > 0 ? sat[i - 1] : 0;
      const diag = y > 0 && x > 0 ? sat[i - width - 1] : 0;
      sat[i] = up + left + v - diag;
      const upSq = y > 0 ? sqsat[i - width] : 0;
      const leftSq = x > 0 ? sqsat[i - 1] : 0;
      const diagSq = y > 0 && x > 0 ? sqsat[i - width - 1] : 0;
      sqsat[i] = upSq + leftSq + v * v - diagSq;
      // rotated table: RSAT(x,y) = RSAT(x-1,y-1) + RSAT(x+1,y-1) - RSAT(x,y-2) + I(x,y) + I(x,y-1)
      const r1 = y > 0 && x > 0 ? rsat[i - width - 1] : 0;
      const r2 = y > 0 && x < width - 1 ? rsat[i - width + 1] : 0;
      const r3 = y > 1 ? rsat[i - 2 * width] : 0;
      const above = y > 0 ? data[i - width] : 0;
      rsat[i] = r1 + r2 - r3 + v + above;
    }
  }
  return { sat, sqsat, rsat };
}

function evalWindow(
  model: number[],
  sat: Int32Array,
  sqsat: Float64Array,
  rsat: Int32Array,
  imageW: number,
  top: number,
  left: number,
  blockW: number,
  blockH: number,
  scale: number
): boolean {
  const inverseArea = 1.0 / (blockW * blockH);
  const a = top * imageW + left;
  const b = a + blockW;
  const d = a + blockH * imageW;
  const c = d + blockW;
  const mean = (sat[a] - sat[b] - sat[d] + sat[c]) * inverseArea;
  const variance = (sqsat[a] - sqsat[b] - sqsat[d] + sqsat[c]) * inverseArea - mean * mean;
  const stdDev = variance > 0 ? Math.sqrt(variance) : 1;

  let w = 2;
  const length = model.length;
  while (w < length) {
    let stageSum = 0;
    const stageThreshold = model[w++];
    let nodes = model[w++];
    while (nodes-- > 0) {
      let rectsSum = 0;
      const tilted = model[w++];
      const rectCount = model[w++];
      for (let r = 0; r < rectCount; r++) {
        const rx = (left + model[w++] * scale + 0.5) | 0;
        const ry = (top + model[w++] * scale + 0.5) | 0;
        const rw = (model[w++] * scale + 0.5) | 0;
        const rh = (model[w++] * scale + 0.5) | 0;
        const weight = model[w++];
        if (tilted) {
          const t1 = rx - rh + rw + (ry + rw + rh - 1) * imageW;
          const t2 = rx + (ry - 1) * imageW;
          const t3 = rx - rh + (ry + rh - 1) * imageW;
          const t4 = rx + rw + (ry + rw - 1) * imageW;
          rectsSum += (rsat[t1] + rsat[t2] - rsat[t3] - rsat[t4]) * weight;
        } else {
          const s1 = ry * imageW + rx;
          const s2 = s1 + rw;
          const s3 = s1 + rh * imageW;
          const s4 = s3 + rw;
          rectsSum += (sat[s1] - sat[s2] - sat[s3] + sat[s4]) * weight;
        }
      }
      const nodeThreshold = model[w++];
      const leftValue = model[w++];
      const rightValue = model[w++];
      stageSum += rectsSum * inverseArea < nodeThreshold * stdDev ? leftValue : rightValue;
    }
    if (stageSum < stageThreshold) {
      return false;
    }
  }
  return true;
}

function groupWindows(windows: ScanRect[], overlap: number): Detection[] {
  const n = windows.length;
  const parent = Array.from({ length: n }, (_, i) => i);
  const find = (i: number): number => {
    while (parent[i] !== i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  };
  for (let i = 0; i < n; i++) {
    for (let j = i + 1; j < n; j++) {
      const a = windows[i];
      const b = windows[j];
      const x1 = Math.max(a.x, b.x);
      const y1 = Math.max(a.y, b.y);
      const x2 = Math.min(a.x + a.w, b.x + b.w);
      const y2 = Math.min(a.y + a.h, b.y + b.h);
      if (x2 <= x1 || y2 <= y1) continue;
      const inter = (x2 - x1) * (y2 - y1);
      if (inter >= overlap * a.w * a.h && inter >= overlap * b.w * b.h) {
        parent[find(i)] = find(j);
      }
    }
  }
  const groups = new Map<number, { x: number; y: number; w: number; h: number; votes: number }>();
  for (let i = 0; i < n; i++) {
    const rep = find(i);
    const g = groups.get(rep);
    const r = windows[i];
    if (!g) {
      groups.set(rep, { x: r.x, y: r.y, w: r.w, h: r.h, votes: 1 });
    } else {
      g.x += r.x;
      g.y += r.y;
      g.w += r.w;
      g.h += r.h;
      g.votes++;
    }
  }
  return [...groups.values()].map((g) => ({
    x: Math.floor(g.x / g.votes + 0.5),
    y: Math.floor(g.y / g.votes + 0.5),
    w: Math.floor(g.w / g.votes + 0.5),
    h: Math.floor(g.h / g.votes + 0.5),
    score: g.votes,
  }));
}

export function detectCascade(
  image: GrayImage,
  model: CascadeModel,
  options: ViolaJonesOptions = {}
): Detection[] {
  const {
    initialScale = 1.0,
    scaleFactor = 1.1,
    stepSize = 1.5,
    groupOverlap = 0.5,
    minNeighbors = 1,
  } = options;
  const { width, height } = image;
  const { sat, sqsat, rsat } = computeIntegrals(image);
  const [baseW, baseH] = model.window;

  const hits: ScanRect[] = [];
  let scale = initialScale * scaleFactor;
  let blockW = (scale * baseW) | 0;
  let blockH = (scale * baseH) | 0;
  while (blockW < width && blockH < height) {
    const step = (scale * stepSize + 0.5) | 0;
    for (let top = 0; top < height - blockH; top += step) {
      for (let left = 0; left < width - blockW; left += step) {
        if (evalWindow(model.data, sat, sqsat, rsat, width, top, left, blockW, blockH, scale)) {
          hits.push({ x: left, y: top, w: blockW, h: blockH });
        }
      }
    }
    scale *= scaleFactor;
    blockW = (scale * baseW) | 0;
    blockH = (scale * baseH) | 0;
  }
  return groupWindows(hits, groupOverlap).filter((d) => d.score >= minNeighbors);
}
