/** Pedestrian detection: OpenCV.js HOG descriptor with the stock 64x128
 * people-detector SVM (coefficients in assets/hog-people-detector.json).
 */

import fs from "node:fs";
import path from "node:path";

import { Detection, GrayImage } from "./types";

export interface HogOptions {
  /** SVM margin required for a window to count as a hit. */
  hitThreshold?: number;
  winStride?: number;
  pyramidScale?: number;
  /** Grouping threshold passed to detectMultiScale. */
  finalThreshold?: number;
}

type CvModule = any;

// the emscripten module object is thenable, so it must never be used to
// resolve a promise directly (the promise would adopt it and never settle)
let cvPromise: Promise<{ cv: CvModule }> | null = null;

function loadOpenCv(): Promise<{ cv: CvModule }> {
  if (cvPromise) return cvPromise;
  cvPromise = new Promise((resolve, reject) => {
    let cv: CvModule;
    try {
      // eslint-disable-next-line @typescript-eslint/no-var-requires
      cv = require("@techstark/opencv-js");
    } catch (e) {
      reject(
        new Error(
          "the 'human' backend needs @techstark/opencv-js; install it with " +
            "`npm install @techstark/opencv-js` and re-run"
        )
      );
      return;
    }
    if (cv.Mat && cv.HOGDescriptor) {
      resolve({ cv });
      return;
    }
    const timer = setTimeout(
      () => reject(new Error("opencv.js runtime failed to initialize within 30s")),
      30000
    );
    cv.onRuntimeInitialized = () => {
      clearTimeout(timer);
      resolve({ cv });
    };
  });
  return cvPromise;
}

function loadCoefficients(): number[] {
  const file = path.join(__dirname, "..", "assets", "hog-people-detector.json");
  const parsed = JSON.parse(fs.readFileSync(file, "utf8"));
  return parsed.coefficients;
}

let coefficients: number[] | null = null;

export async function detectPeople(
  image: GrayImage,
  options: HogOptions = {}
): Promise<Detection[]> {
  const {
    hitThreshold = 0.0,
    winStride = 8,
    pyramidScale = 1.05,
    finalThreshold = 2.0,
  } = options;
  const { cv } = await loadOpenCv();
  if (!coefficients) {
    coefficients = loadCoefficients();
  }

  const mat = cv.matFromArray(image.height, image.width, cv.CV_8UC1, Array.from(image.data));
  const svm = cv.matFromArray(coefficients.length, 1, cv.CV_32FC1, coefficients);
  const hog = new cv.HOGDescriptor();
  const locations = new cv.RectVector();
  const weights = new cv.DoubleVector();
  try {
    hog.setSVMDetector(svm);
    hog.detectMultiScale(
      mat,
      locations,
      weights,
      hitThreshold,
      new cv.Size(winStride, winStride),
      new cv.Size(0, 0),
      pyramidScale,
      finalThreshold,
      false
    );
    const detections: Detection[] = [];
    for (let i = 0; i < locations.size(); i++) {
      const r = locations.get(i);
      detections.push({ x: r.x, y: r.y, w: r.width, h: r.height, score: weights.get(i) });
    }
    return detections;
  } finally {
    mat.delete();
    svm.delete();
    hog.delete();
    locations.delete();
    weights.delete();
  }
}
