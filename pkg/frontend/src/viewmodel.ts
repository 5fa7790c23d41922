/**
 * Pure view model of one grid: a function of the server payload, the
 * class list, the color-bin cutoffs and the comparison mode.  Rendering
 * consumes only this structure, so re-binning after a cutoff slider move
 * is a local recomputation with no server round trip, and the whole model
 * is snapshot-testable.
 */

import { cellStyle, CellStyle, validateCutoffs } from "./color.js";
import { GridPayload, Mode } from "./types.js";

export interface ViewCell {
  cell: number;
  row: number;
  col: number;
  sampleId: number | null;
  className: string | null;
  classIndex: number;
  oodNorm: number;
  split: "train" | "test";
  sampleType: string | null;
  style: CellStyle | null;
}

export interface GridViewModel {
  m: number;
  n: number;
  nodeId: number;
  split: string;
  mode: Mode;
  cutoffs: [number, number];
  cells: ViewCell[];
  representatives: number[];
  categoryCounts: Record<string, number>;
}

export function buildViewModel(
  grid: GridPayload,
  classes: string[],
  cutoffs: [number, number],
  mode: Mode,
): GridViewModel {
  validateCutoffs(cutoffs);
  const cells: ViewCell[] = grid.cells.map((c) => {
    const row = Math.floor(c.cell / grid.n);
    const col = c.cell % grid.n;
    if (c.sample_id === null || c.sample_id === undefined) {
      return {
        cell: c.cell,
        row,
        col,
        sampleId: null,
        className: null,
        classIndex: -1,
        oodNorm: 0,
        split: "test",
        sampleType: null,
        style: null,
      };
    }
    const classIndex = Math.max(0, classes.indexOf(c.class ?? ""));
    const split = c.split ?? "test";
    const oodNorm = c.ood_norm ?? 0;
    return {
      cell: c.cell,
      row,
      col,
      sampleId: c.sample_id,
      className: c.class ?? null,
      classIndex,
      oodNorm,
      split,
      sampleType: c.sample_type ?? null,
      style: cellStyle(classIndex, oodNorm, split, cutoffs),
    };
  });
  return {
    m: grid.m,
    n: grid.n,
    nodeId: grid.node_id,
    split: grid.split,
    mode,
    cutoffs,
    cells,
    representatives: grid.representatives.slice(),
    categoryCounts: { ...grid.category_counts },
  };
}

/** Recolor for new cutoffs; everything else is untouched. */
export function rebin(vm: GridViewModel, cutoffs: [number, number]): GridViewModel {
  validateCutoffs(cutoffs);
  return {
    ...vm,
    cutoffs,
    cells: vm.cells.map((c) =>
      c.sampleId === null
        ? c
        : { ...c, style: cellStyle(c.classIndex, c.oodNorm, c.split, cutoffs) },
    ),
  };
}

/**
 * Flat render list: one entry per occupied cell with its final style.
 * This is the exact input to the canvas painter and the unit snapshots.
 */
export interface CellRender {
  row: number;
  col: number;
  sampleId: number;
  fill: string;
  border: string;
  marker: "circle" | "square";
}

export function renderModel(vm: GridViewModel): CellRender[] {
  const out: CellRender[] = [];
  for (const c of vm.cells) {
    if (c.sampleId === null || c.style === null) continue;
    out.push({
      row: c.row,
      col: c.col,
      sampleId: c.sampleId,
      fill: c.style.fill,
      border: c.style.border,
      // markers only carry information when both splits share a grid
      marker: vm.mode === "superpose" ? c.style.marker : "square",
    });
  }
  return out;
}
