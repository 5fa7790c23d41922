/**
 * Representative-image overlay placement.
 *
 * When cells are too small for thumbnails, a handful of images is shown
 * near the cells of the highest-scored samples.  Placement is greedy in
 * descending score order and an image is skipped whenever it would sit
 * within minDist (grid cells) of one already placed.
 */

export interface OverlayCandidate {
  sampleId: number;
  row: number;
  col: number;
  score: number;
}

export interface PlacedImage {
  sampleId: number;
  row: number;
  col: number;
}

export function placeRepresentatives(
  candidates: OverlayCandidate[],
  minDist: number,
): PlacedImage[] {
  if (minDist < 0) throw new Error(`minDist must be non-negative, got ${minDist}`);
  const order = candidates
    .slice()
    .sort((a, b) => (b.score - a.score) || (a.sampleId - b.sampleId));
  const placed: PlacedImage[] = [];
  for (const cand of order) {
    const blocked = placed.some(
      (p) => Math.hypot(p.row - cand.row, p.col - cand.col) < minDist,
    );
    if (!blocked) {
      placed.push({ sampleId: cand.sampleId, row: cand.row, col: cand.col });
    }
  }
  return placed;
}

/** True when every pair of placed images keeps the required spacing. */
export function respectsMinDistance(placed: PlacedImage[], minDist: number): boolean {
  for (let i = 0; i < placed.length; i++) {
    for (let j = i + 1; j < placed.length; j++) {
      if (Math.hypot(placed[i].row - placed[j].row, placed[i].col - placed[j].col) < minDist) {
        return false;
      }
    }
  }
  return true;
}
