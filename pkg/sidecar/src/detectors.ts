/** Pluggable per-kind detector backends. */

import fs from "node:fs";
import path from "node:path";

import { detectPeople } from "./hog";
import { CascadeModel, detectCascade } from "./violaJones";
import { Detection, GrayImage } from "./types";

export interface FrameDetector {
  kind: string;
  /** Natural downscale factor for this backend (CLI may override). */
  defaultScale: number;
  detect(image: GrayImage): Promise<Detection[]>;
  describe(): Record<string, unknown>;
}

let faceModel: CascadeModel | null = null;

function loadFaceModel(): CascadeModel {
  if (!faceModel) {
    const file = path.join(__dirname, "..", "assets", "face-cascade.json");
    faceModel = JSON.parse(fs.readFileSync(file, "utf8"));
  }
  return faceModel as CascadeModel;
}

export function humanDetector(): FrameDetector {
  // final grouping of 1.0 keeps lone-but-clean window clusters; empty scenes
  // still produce nothing and surveillance favors recall
  const params = { hitThreshold: 0.0, winStride: 8, pyramidScale: 1.05, finalThreshold: 1.0 };
  return {
    kind: "human",
    defaultScale: 0.8,
    detect: (image) => detectPeople(image, params),
    describe: () => ({
      backend: "opencv.js HOGDescriptor, stock 64x128 people-detector SVM",
      window: [64, 128],
      cell: [8, 8],
      block: [16, 16],
      bins: 9,
      ...params,
    }),
  };
}

export function faceDetector(): FrameDetector {
  const params = { scaleFactor: 1.1, stepSize: 1.5, minNeighbors: 2, groupOverlap: 0.5 };
  return {
    kind: "face",
    defaultScale: 1.0, // face accuracy degrades with resolution; keep full size
    detect: async (image) => detectCascade(image, loadFaceModel(), params),
    describe: () => ({
      backend: "Viola-Jones stump cascade, frontal-face model, window 20x20",
      ...params,
    }),
  };
}

const BUILTIN: Record<string, () => FrameDetector> = {
  human: humanDetector,
  face: faceDetector,
};

export function createDetector(kind: string): FrameDetector {
  const factory = BUILTIN[kind];
  if (!factory) {
    throw new Error(
      `no detector backend for kind '${kind}' (built-in: ${Object.keys(BUILTIN).join(", ")})`
    );
  }
  return factory();
}
