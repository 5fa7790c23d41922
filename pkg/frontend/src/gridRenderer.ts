/**
 * Canvas painter for one grid plus rectangular region selection.
 *
 * Cells are filled per the view model; when cells are at least 24 px wide
 * the sample thumbnails are drawn on top (falling back to the colored
 * cell when an image is missing), otherwise only the representative
 * samples get image overlays.  Dragging selects a cell rectangle and
 * fires the onSelect callback with inclusive (row0, col0, row1, col1).
 */

import { placeRepresentatives } from "./overlay.js";
import { GridViewModel, renderModel } from "./viewmodel.js";

export const THUMBNAIL_MIN_CELL_PX = 24;
export const REPRESENTATIVE_MIN_DIST = 3;

export type RegionCallback = (region: [number, number, number, number]) => void;
export type CellCallback = (sampleId: number) => void;

export class GridRenderer {
  private vm: GridViewModel | null = null;
  private images = new Map<number, HTMLImageElement>();
  private dragStart: [number, number] | null = null;
  private dragCurrent: [number, number] | null = null;
  onSelect: RegionCallback | null = null;
  onInspect: CellCallback | null = null;
  imageUrlFor: ((sampleId: number) => string) | null = null;

  constructor(private canvas: HTMLCanvasElement) {
    canvas.addEventListener("mousedown", (e) => {
      this.dragStart = this.cellAt(e);
      this.dragCurrent = this.dragStart;
    });
    canvas.addEventListener("mousemove", (e) => {
      if (!this.dragStart) return;
      this.dragCurrent = this.cellAt(e);
      this.draw();
    });
    canvas.addEventListener("mouseup", (e) => {
      const start = this.dragStart;
      const end = this.cellAt(e);
      this.dragStart = null;
      this.dragCurrent = null;
      if (!start || !end || !this.vm) return;
      if (start[0] === end[0] && start[1] === end[1]) {
        const hit = this.vm.cells.find(
          (c) => c.row === start[0] && c.col === start[1] && c.sampleId !== null,
        );
        if (hit && hit.sampleId !== null && this.onInspect) this.onInspect(hit.sampleId);
        this.draw();
        return;
      }
      const region: [number, number, number, number] = [
        Math.min(start[0], end[0]),
        Math.min(start[1], end[1]),
        Math.max(start[0], end[0]),
        Math.max(start[1], end[1]),
      ];
      this.draw();
      if (this.onSelect) this.onSelect(region);
    });
  }

  setModel(vm: GridViewModel): void {
    this.vm = vm;
    this.loadImages();
    this.draw();
  }

  private cellPx(): number {
    if (!this.vm) return 0;
    return Math.floor(Math.min(this.canvas.width / this.vm.n, this.canvas.height / this.vm.m));
  }

  private cellAt(e: MouseEvent): [number, number] | null {
    if (!this.vm) return null;
    const rect = this.canvas.getBoundingClientRect();
    const px = this.cellPx();
    const col = Math.floor((e.clientX - rect.left) / px);
    const row = Math.floor((e.clientY - rect.top) / px);
    if (row < 0 || row >= this.vm.m || col < 0 || col >= this.vm.n) return null;
    return [row, col];
  }

  private loadImages(): void {
    if (!this.vm || !this.imageUrlFor) return;
    for (const c of this.vm.cells) {
      if (c.sampleId === null || this.images.has(c.sampleId)) continue;
      const img = new Image();
      img.onload = () => this.draw();
      img.onerror = () => {
        /* keep the colored cell */
      };
      img.src = this.imageUrlFor(c.sampleId);
      this.images.set(c.sampleId, img);
    }
  }

  draw(): void {
    const ctx = this.canvas.getContext("2d");
    if (!ctx || !this.vm) return;
    const vm = this.vm;
    const px = this.cellPx();
    ctx.clearRect(0, 0, this.canvas.width, this.canvas.height);
    const showThumbnails = px >= THUMBNAIL_MIN_CELL_PX;

    for (const cell of renderModel(vm)) {
      const x = cell.col * px;
      const y = cell.row * px;
      ctx.fillStyle = cell.fill;
      ctx.strokeStyle = cell.border;
      ctx.lineWidth = Math.max(1, px * 0.08);
      if (cell.marker === "circle") {
        ctx.beginPath();
        ctx.arc(x + px / 2, y + px / 2, px * 0.42, 0, 2 * Math.PI);
        ctx.fill();
        ctx.stroke();
      } else {
        ctx.fillRect(x + 1, y + 1, px - 2, px - 2);
        ctx.strokeRect(x + 1, y + 1, px - 2, px - 2);
      }
      if (showThumbnails) {
        const img = this.images.get(cell.sampleId);
        if (img && img.complete && img.naturalWidth > 0) {
          ctx.drawImage(img, x + 2, y + 2, px - 4, px - 4);
          ctx.strokeRect(x + 1, y + 1, px - 2, px - 2);
        }
      }
    }

    if (!showThumbnails) this.drawRepresentatives(ctx, px);
    this.drawDragRect(ctx, px);
  }

  private drawRepresentatives(ctx: CanvasRenderingContext2D, px: number): void {
    const vm = this.vm;
    if (!vm) return;
    const byId = new Map(vm.cells.filter((c) => c.sampleId !== null).map((c) => [c.sampleId, c]));
    const candidates = vm.representatives
      .map((sid) => byId.get(sid))
      .filter((c): c is NonNullable<typeof c> => c !== undefined)
      .map((c) => ({ sampleId: c.sampleId as number, row: c.row, col: c.col, score: c.oodNorm }));
    const placed = placeRepresentatives(candidates, REPRESENTATIVE_MIN_DIST);
    const size = px * 2.4;
    for (const p of placed) {
      const img = this.images.get(p.sampleId);
      if (!img || !img.complete || img.naturalWidth === 0) continue;
      const cx = p.col * px + px / 2;
      const cy = p.row * px + px / 2;
      ctx.drawImage(img, cx - size / 2, cy - size / 2, size, size);
      ctx.strokeStyle = "#222222";
      ctx.lineWidth = 1;
      ctx.strokeRect(cx - size / 2, cy - size / 2, size, size);
    }
  }

  private drawDragRect(ctx: CanvasRenderingContext2D, px: number): void {
    if (!this.dragStart || !this.dragCurrent) return;
    const [r0, c0] = this.dragStart;
    const [r1, c1] = this.dragCurrent;
    const row0 = Math.min(r0, r1);
    const col0 = Math.min(c0, c1);
    const row1 = Math.max(r0, r1);
    const col1 = Math.max(c0, c1);
    ctx.strokeStyle = "#333333";
    ctx.setLineDash([4, 3]);
    ctx.lineWidth = 2;
    ctx.strokeRect(col0 * px, row0 * px, (col1 - col0 + 1) * px, (row1 - row0 + 1) * px);
    ctx.setLineDash([]);
  }
}
