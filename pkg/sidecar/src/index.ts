export { createDetector, faceDetector, humanDetector } from "./detectors";
export type { FrameDetector } from "./detectors";
export { detectPeople } from "./hog";
export { listFrameFiles, readFrames, readImage, resizeGray, toGray } from "./image";
export { runJob, runJobToFile } from "./job";
export type { JobResult } from "./job";
export { detectionRecordSchema, toJsonLines, validateJsonLines } from "./schema";
export { detectCascade } from "./violaJones";
export type { CascadeModel, ViolaJonesOptions } from "./violaJones";
export type {
  Detection,
  DetectionRecord,
  GrayImage,
  RgbFrame,
  SidecarJob,
} from "./types";
export { clampRect, roundHalfUp } from "./types";
