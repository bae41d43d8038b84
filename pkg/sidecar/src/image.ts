/** Frame loading (PNG/PPM/PGM directories, SZRAW1 streams) and resizing. */

import fs from "node:fs";
import path from "node:path";

import { PNG } from "pngjs";

import { GrayImage, RgbFrame } from "./types";

const IMAGE_EXTENSIONS = new Set([".png", ".ppm", ".pgm"]);

function numericKey(name: string): [number, string] {
  const matches = name.match(/\d+/g);
  return [matches ? parseInt(matches[matches.length - 1], 10) : -1, name];
}

export function listFrameFiles(dir: string): string[] {
  const files = fs
    .readdirSync(dir)
    .filter((f) => IMAGE_EXTENSIONS.has(path.extname(f).toLowerCase()))
    .sort((a, b) => {
      const [na, sa] = numericKey(a);
      const [nb, sb] = numericKey(b);
      return na !== nb ? na - nb : sa.localeCompare(sb);
    });
  return files.map((f) => path.join(dir, f));
}

function decodePng(buffer: Buffer): { width: number; height: number; rgb: Uint8Array } {
  const png = PNG.sync.read(buffer);
  const rgb = new Uint8Array(png.width * png.height * 3);
  for (let i = 0; i < png.width * png.height; i++) {
    rgb[3 * i] = png.data[4 * i];
    rgb[3 * i + 1] = png.data[4 * i + 1];
    rgb[3 * i + 2] = png.data[4 * i + 2];
  }
  return { width: png.width, height: png.height, rgb };
}

function decodePnm(buffer: Buffer, file: string): { width: number; height: number; rgb: Uint8Array } {
  const magic = buffer.subarray(0, 2).toString("ascii");
  if (magic !== "P5" && magic !== "P6") {
    throw new Error(`${file}: unsupported PNM magic ${magic}`);
  }
  // header: magic, width, height, maxval; separated by whitespace/comments
  let pos = 2;
  const fields: number[] = [];
  while (fields.length < 3 && pos < buffer.length) {
    while (pos < buffer.length && /\s/.test(String.fromCharCode(buffer[pos]))) pos++;
    if (buffer[pos] === 0x23) {
      while (pos < buffer.length && buffer[pos] !== 0x0a) pos++;
      continue;
    }
    let token = "";
    while (pos < buffer.length && !/\s/.test(String.fromCharCode(buffer[pos]))) {
      token += String.fromCharCode(buffer[pos++]);
    }
    fields.push(parseInt(token, 10));
  }
  pos++; // single whitespace after maxval
  const [width, height, maxval] = fields;
  if (!width || !height || maxval !== 255) {
    throw new Error(`${file}: malformed PNM header`);
  }
  const rgb = new Uint8Array(width * height * 3);
  if (magic === "P6") {
    rgb.set(buffer.subarray(pos, pos + width * height * 3));
  } else {
    for (let i = 0; i < width * height; i++) {
      const v = buffer[pos + i];
      rgb[3 * i] = rgb[3 * i + 1] = rgb[3 * i + 2] = v;
    }
  }
  return { width, height, rgb };
}

export function readImage(file: string): { width: number; height: number; rgb: Uint8Array } {
  const buffer = fs.readFileSync(file);
  const ext = path.extname(file).toLowerCase();
  if (ext === ".png") return decodePng(buffer);
  return decodePnm(buffer, file);
}

function* rawStreamFrames(file: string): Generator<RgbFrame> {
  const buffer = fs.readFileSync(file);
  const newline = buffer.indexOf(0x0a);
  const header = buffer.subarray(0, newline).toString("ascii").split(/\s+/);
  if (header[0] !== "SZRAW1" || header.length !== 4) {
    throw new Error(`${file}: not a SZRAW1 stream`);
  }
  const width = parseInt(header[1], 10);
  const height = parseInt(header[2], 10);
  const plane = width * height;
  let offset = newline + 1;
  let index = 0;
  while (offset + 3 * plane <= buffer.length) {
    const rgb = new Uint8Array(3 * plane);
    for (let i = 0; i < plane; i++) {
      rgb[3 * i] = buffer[offset + i];
      rgb[3 * i + 1] = buffer[offset + plane + i];
      rgb[3 * i + 2] = buffer[offset + 2 * plane + i];
    }
    yield { width, height, data: rgb, index };
    offset += 3 * plane;
    index++;
  }
}

/** Iterate input frames: a directory of images or one SZRAW1 stream file.
 * Unreadable files in a directory are skipped through the warning sink.
 */
export function* readFrames(
  input: string,
  warn: (message: string) => void = () => {}
): Generator<RgbFrame> {
  const stat = fs.statSync(input);
  if (stat.isDirectory()) {
    const files = listFrameFiles(input);
    if (files.length === 0) {
      throw new Error(`no frame images in ${input}`);
    }
    for (let index = 0; index < files.length; index++) {
      let decoded;
      try {
        decoded = readImage(files[index]);
      } catch (e) {
        warn(`skipping unreadable frame ${files[index]}: ${(e as Error).message}`);
        continue;
      }
      yield { width: decoded.width, height: decoded.height, data: decoded.rgb, index };
    }
    return;
  }
  yield* rawStreamFrames(input);
}

export function toGray(frame: RgbFrame): GrayImage {
  const n = frame.width * frame.height;
  const data = new Uint8Array(n);
  for (let i = 0; i < n; i++) {
    data[i] =
      (frame.data[3 * i] * 0.299 +
        frame.data[3 * i + 1] * 0.587 +
        frame.data[3 * i + 2] * 0.114) |
      0;
  }
  return { width: frame.width, height: frame.height, data };
}

/** Bilinear downscale with pixel-center alignment. */
export function resizeGray(src: GrayImage, width: number, height: number): GrayImage {
  if (width === src.width && height === src.height) {
    return { width, height, data: src.data.slice() };
  }
  const out = new Uint8Array(width * height);
  const sx = src.width / width;
  const sy = src.height / height;
  for (let y = 0; y < height; y++) {
    let fy = (y + 0.5) * sy - 0.5;
    fy = Math.min(Math.max(fy, 0), src.height - 1);
    const y0 = Math.floor(fy);
    const y1 = Math.min(y0 + 1, src.height - 1);
    const wy = fy - y0;
    for (let x = 0; x < width; x++) {
      let fx = (x + 0.5) * sx - 0.5;
      fx = Math.min(Math.max(fx, 0), src.width - 1);
      const x0 = Math.floor(fx);
      const x1 = Math.min(x0 + 1, src.width - 1);
      const wx = fx - x0;
      const top = src.data[y0 * src.width + x0] * (1 - wx) + src.data[y0 * src.width + x1] * wx;
      const bot = src.data[y1 * src.width + x0] * (1 - wx) + src.data[y1 * src.width + x1] * wx;
      out[y * width + x] = Math.floor(top * (1 - wy) + bot * wy + 0.5);
    }
  }
  return { width, height, data: out };
}
