/** Color assignments shared by all views: a 12-hue categorical palette for
 * protein identity, sequential green/purple ramps for interaction
 * frequencies, and the state colors of the property scatterplot. */

export const PROTEIN_PALETTE = [
  "#a6cee3", "#1f78b4", "#b2df8a", "#33a02c", "#fb9a99", "#e31a1c",
  "#fdbf6f", "#ff7f00", "#cab2d6", "#6a3d9a", "#ffff99", "#b15928",
] as const;

export function proteinColor(colorIndex: number): string {
  return PROTEIN_PALETTE[colorIndex % PROTEIN_PALETTE.length];
}

/** 0..1 -> light-to-dark green (total interaction counts). */
export function greenRamp(t: number): string {
  return ramp(t, [237, 248, 233], [0, 90, 50]);
}

/** 0..1 -> light-to-dark purple (per-partner interaction counts). */
export function purpleRamp(t: number): string {
  return ramp(t, [242, 240, 247], [84, 39, 143]);
}

function ramp(t: number, from: number[], to: number[]): string {
  const clamped = Math.max(0, Math.min(1, t));
  const channel = (i: number) => Math.round(from[i] + (to[i] - from[i]) * clamped);
  return `rgb(${channel(0)}, ${channel(1)}, ${channel(2)})`;
}

export const STATE_COLORS = {
  visible: "#2ca02c", // unaffected configurations render green
  selected: "#d62728", // selection renders red
  affected: "#b0b0b0", // temporarily-disabled-filter reappearances render grey
  hidden: "#e8e8e8",
} as const;

export const CHARGE_COLORS: Record<string, string> = {
  positive: "#2166ac",
  negative: "#b2182b",
  neutral: "#cccccc",
};

/** Hydrophobicity (Kyte-Doolittle, [-4.5, 4.5]) -> blue-white-orange. */
export function hydrophobicityColor(value: number): string {
  const t = Math.max(-1, Math.min(1, value / 4.5));
  return t >= 0
    ? ramp(t, [247, 247, 247], [230, 97, 1])
    : ramp(-t, [247, 247, 247], [5, 113, 176]);
}

export const SVG_NS = "http://www.w3.org/2000/svg";

export function svgElement<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number> = {},
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, String(value));
  }
  return el;
}

/** White-cross / single-diagonal indicators for disabled-filter effects. */
export function appendMark(
  parent: SVGElement,
  mark: "partially_affected" | "fully_affected",
  x: number,
  y: number,
  size: number,
): void {
  const line = (x1: number, y1: number, x2: number, y2: number) => {
    const el = svgElement("line", {
      x1, y1, x2, y2,
      stroke: "#ffffff",
      "stroke-width": Math.max(1, size / 7),
      class: `mark mark-${mark}`,
    });
    parent.appendChild(el);
  };
  line(x, y, x + size, y + size);
  if (mark === "fully_affected") {
    line(x + size, y, x, y + size);
  }
}
