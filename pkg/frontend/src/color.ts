/**
 * Cell color encoding.
 *
 * Everything a cell looks like derives from exactly three inputs: the
 * class picks the hue, the OoD score picks one of three lightness steps
 * (lightest = normal, darkest = highest scores), and the split picks the
 * marker shape (circle = train, square = test).
 */

export type OodBin = 0 | 1 | 2;

/** Okabe-Ito qualitative palette: colorblind-safe class hues. */
export const CLASS_PALETTE = [
  "#0072b2",
  "#e69f00",
  "#009e73",
  "#d55e00",
  "#cc79a7",
  "#56b4e9",
  "#f0e442",
  "#999999",
];

export function classColor(classIndex: number): string {
  return CLASS_PALETTE[((classIndex % CLASS_PALETTE.length) + CLASS_PALETTE.length) % CLASS_PALETTE.length];
}

/** Bin a normalized score into [0, c1), [c1, c2), [c2, 1]. */
export function oodBin(oodNorm: number, cutoffs: [number, number]): OodBin {
  const [c1, c2] = cutoffs;
  if (oodNorm < c1) return 0;
  if (oodNorm < c2) return 1;
  return 2;
}

function mixWithWhite(hex: string, whiteness: number): string {
  const r = parseInt(hex.slice(1, 3), 16);
  const g = parseInt(hex.slice(3, 5), 16);
  const b = parseInt(hex.slice(5, 7), 16);
  const mix = (v: number) => Math.round(v * (1 - whiteness) + 255 * whiteness);
  const to2 = (v: number) => v.toString(16).padStart(2, "0");
  return `#${to2(mix(r))}${to2(mix(g))}${to2(mix(b))}`;
}

/** Three lightness steps per class hue; the darkest is the raw hue. */
const BIN_WHITENESS: [number, number, number] = [0.72, 0.38, 0.0];

export interface CellStyle {
  fill: string;
  border: string;
  marker: "circle" | "square";
}

export function cellStyle(
  classIndex: number,
  oodNorm: number,
  split: "train" | "test",
  cutoffs: [number, number],
): CellStyle {
  const bin = oodBin(oodNorm, cutoffs);
  const hue = classColor(classIndex);
  return {
    fill: mixWithWhite(hue, BIN_WHITENESS[bin]),
    border: hue,
    marker: split === "train" ? "circle" : "square",
  };
}

export function validateCutoffs(cutoffs: [number, number]): void {
  const [c1, c2] = cutoffs;
  if (!(0 < c1 && c1 < c2 && c2 < 1)) {
    throw new Error(`cutoffs must satisfy 0 < c1 < c2 < 1, got [${c1}, ${c2}]`);
  }
}
