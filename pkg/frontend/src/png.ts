// Minimal PNG encoder (8-bit gray or RGB, stored deflate blocks).  Used by
// the image widget's "save image" menu so saving works identically in every
// browser and in tests, without a canvas dependency.

const SIGNATURE = [0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a];

const CRC_TABLE = (() => {
  const table = new Uint32Array(256);
  for (let n = 0; n < 256; n++) {
    let c = n;
    for (let k = 0; k < 8; k++) {
      c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
    }
    table[n] = c >>> 0;
  }
  return table;
})();

function crc32(bytes: Uint8Array): number {
  let c = 0xffffffff;
  for (let i = 0; i < bytes.length; i++) {
    c = CRC_TABLE[(c ^ bytes[i]) & 0xff] ^ (c >>> 8);
  }
  return (c ^ 0xffffffff) >>> 0;
}

function adler32(bytes: Uint8Array): number {
  let a = 1;
  let b = 0;
  for (let i = 0; i < bytes.length; i++) {
    a = (a + bytes[i]) % 65521;
    b = (b + a) % 65521;
  }
  return ((b << 16) | a) >>> 0;
}

function chunk(type: string, data: Uint8Array): Uint8Array {
  const out = new Uint8Array(12 + data.length);
  const view = new DataView(out.buffer);
  view.setUint32(0, data.length);
  for (let i = 0; i < 4; i++) {
    out[4 + i] = type.charCodeAt(i);
  }
  out.set(data, 8);
  view.setUint32(8 + data.length, crc32(out.subarray(4, 8 + data.length)));
  return out;
}

function zlibStored(raw: Uint8Array): Uint8Array {
  const blocks: Uint8Array[] = [];
  for (let off = 0; off < raw.length || blocks.length === 0; off += 65535) {
    const len = Math.min(65535, raw.length - off);
    const final = off + len >= raw.length;
    const head = new Uint8Array(5);
    head[0] = final ? 1 : 0;
    head[1] = len & 0xff;
    head[2] = len >>> 8;
    head[3] = ~len & 0xff;
    head[4] = (~len >>> 8) & 0xff;
    blocks.push(head, raw.subarray(off, off + len));
    if (final) break;
  }
  const total = 2 + blocks.reduce((s, b) => s + b.length, 0) + 4;
  const out = new Uint8Array(total);
  out[0] = 0x78;
  out[1] = 0x01;
  let pos = 2;
  for (const b of blocks) {
    out.set(b, pos);
    pos += b.length;
  }
  new DataView(out.buffer).setUint32(pos, adler32(raw));
  return out;
}

export function encodePng(width: number, height: number, channels: 1 | 3,
                          pixels: Uint8Array): Uint8Array {
  if (pixels.length !== width * height * channels) {
    throw new Error(`pixel buffer size ${pixels.length} != ${width}x${height}x${channels}`);
  }
  const ihdr = new Uint8Array(13);
  const view = new DataView(ihdr.buffer);
  view.setUint32(0, width);
  view.setUint32(4, height);
  ihdr[8] = 8;                       // bit depth
  ihdr[9] = channels === 1 ? 0 : 2;  // gray / truecolor
  // raw scanlines, each prefixed with filter byte 0
  const stride = width * channels;
  const raw = new Uint8Array(height * (stride + 1));
  for (let y = 0; y < height; y++) {
    raw[y * (stride + 1)] = 0;
    raw.set(pixels.subarray(y * stride, (y + 1) * stride), y * (stride + 1) + 1);
  }
  const parts = [
    new Uint8Array(SIGNATURE),
    chunk("IHDR", ihdr),
    chunk("IDAT", zlibStored(raw)),
    chunk("IEND", new Uint8Array(0)),
  ];
  const out = new Uint8Array(parts.reduce((s, p) => s + p.length, 0));
  let pos = 0;
  for (const p of parts) {
    out.set(p, pos);
    pos += p.length;
  }
  return out;
}

/** Read width/height back out of a PNG's IHDR (for tests and sanity checks). */
export function pngDimensions(png: Uint8Array): { width: number; height: number } {
  const view = new DataView(png.buffer, png.byteOffset);
  if (view.getUint32(12) !== 0x49484452) {
    throw new Error("not a PNG IHDR");
  }
  return { width: view.getUint32(16), height: view.getUint32(20) };
}
