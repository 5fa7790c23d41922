/**
 * Zoom hierarchy tree.  Each node is a glyph of stacked category bars
 * (bar color = category hue, bar length proportional to sample count);
 * clicking a node re-opens its cached grid.
 */

import { classColor } from "./color.js";
import { HierarchyNodeDoc } from "./types.js";

export class HierarchyView {
  onOpen: ((nodeId: number) => void) | null = null;

  constructor(private container: HTMLElement, private classes: string[]) {}

  render(nodes: HierarchyNodeDoc[], activeId: number): void {
    this.container.innerHTML = "";
    const children = new Map<number | null, HierarchyNodeDoc[]>();
    for (const node of nodes) {
      const list = children.get(node.parent) ?? [];
      list.push(node);
      children.set(node.parent, list);
    }
    const roots = children.get(null) ?? [];
    for (const root of roots) {
      this.container.appendChild(this.renderNode(root, children, activeId));
    }
  }

  private renderNode(
    node: HierarchyNodeDoc,
    children: Map<number | null, HierarchyNodeDoc[]>,
    activeId: number,
  ): HTMLElement {
    const wrap = document.createElement("div");
    wrap.className = "tree-node";
    const glyph = document.createElement("div");
    glyph.className = "tree-glyph" + (node.node_id === activeId ? " active" : "");
    glyph.title = `node ${node.node_id}: ${node.grid[0]}x${node.grid[1]} grid`;
    const total = Object.values(node.category_counts).reduce((a, b) => a + b, 0) || 1;
    for (const [name, count] of Object.entries(node.category_counts)) {
      const bar = document.createElement("div");
      bar.className = "tree-bar";
      bar.style.width = `${Math.max(2, Math.round((count / total) * 90))}px`;
      bar.style.background = classColor(Math.max(0, this.classes.indexOf(name)));
      bar.title = `${name}: ${count}`;
      glyph.appendChild(bar);
    }
    glyph.addEventListener("click", () => {
      if (this.onOpen) this.onOpen(node.node_id);
    });
    wrap.appendChild(glyph);
    const kids = children.get(node.node_id) ?? [];
    if (kids.length) {
      const sub = document.createElement("div");
      sub.className = "tree-children";
      for (const kid of kids) sub.appendChild(this.renderNode(kid, children, activeId));
      wrap.appendChild(sub);
    }
    return wrap;
  }
}
