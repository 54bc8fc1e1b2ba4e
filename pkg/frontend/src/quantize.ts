// Client-side mirror of the engine's slider quantization, used for display
// while dragging; the server-side value stays authoritative.

export function sliderQuantize(raw: number, lo: number, hi: number, increment: number): number {
  if (hi <= lo || increment <= 0) {
    throw new Error(`bad slider range [${lo},${hi}] step ${increment}`);
  }
  const kMax = Math.floor((hi - lo) / increment + 1e-9);
  let k = Math.floor((raw - lo) / increment + 0.5);
  k = Math.min(Math.max(k, 0), kMax);
  return lo + k * increment;
}
