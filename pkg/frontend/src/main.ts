/** Application wiring: controls, grids, hierarchy tree, detail panel. */

import { ApiClient, LayoutParams } from "./api.js";
import { DetailPanel } from "./detailPanel.js";
import { GridRenderer } from "./gridRenderer.js";
import { HierarchyView } from "./hierarchyView.js";
import { DatasetInfo, GridPayload, LayoutResponse, Mode, Split } from "./types.js";
import { buildViewModel, rebin } from "./viewmodel.js";

const api = new ApiClient("");

interface AppState {
  dataset: DatasetInfo | null;
  sessionId: string | null;
  layout: LayoutResponse | null;
  nodesByGrid: Map<number, GridPayload>[];
  activeNode: number[];
  cutoffs: [number, number];
  mode: Mode;
  split: Split;
  categories: string[];
  detected: boolean;
}

const state: AppState = {
  dataset: null,
  sessionId: null,
  layout: null,
  nodesByGrid: [],
  activeNode: [],
  cutoffs: [0.6, 0.8],
  mode: "single",
  split: "test",
  categories: [],
  detected: false,
};

const el = (id: string) => document.getElementById(id) as HTMLElement;
const input = (id: string) => document.getElementById(id) as HTMLInputElement;
const select = (id: string) => document.getElementById(id) as HTMLSelectElement;

function setStatus(text: string): void {
  el("status").textContent = text;
}

const renderers: GridRenderer[] = [];
let hierarchyViews: HierarchyView[] = [];
let detailPanel: DetailPanel | null = null;

function renderGrid(gridIndex: number, payload: GridPayload): void {
  const ds = state.dataset;
  if (!ds) return;
  state.nodesByGrid[gridIndex].set(payload.node_id, payload);
  state.activeNode[gridIndex] = payload.node_id;
  const vm = buildViewModel(payload, ds.classes, state.cutoffs, state.mode);
  renderers[gridIndex].setModel(vm);
}

function refreshCutoffs(): void {
  const c1 = parseFloat(input("cutoff1").value);
  const c2 = parseFloat(input("cutoff2").value);
  if (!(0 < c1 && c1 < c2 && c2 < 1)) return;
  state.cutoffs = [c1, c2];
  el("cutoff-label").textContent = `bins: [0, ${c1}) [${c1}, ${c2}) [${c2}, 1]`;
  // pure client-side recolor, no server involved
  renderers.forEach((renderer, idx) => {
    const node = state.nodesByGrid[idx]?.get(state.activeNode[idx]);
    const ds = state.dataset;
    if (!node || !ds) return;
    const vm = rebin(buildViewModel(node, ds.classes, state.cutoffs, state.mode), state.cutoffs);
    renderer.setModel(vm);
  });
}

async function runLayout(): Promise<void> {
  const ds = state.dataset;
  const sid = state.sessionId;
  if (!ds || !sid) return;
  state.mode = select("mode").value as Mode;
  state.split = select("split").value as Split;
  state.categories = Array.from(select("categories").selectedOptions).map((o) => o.value);
  const params: LayoutParams = {
    split: state.split,
    mode: state.mode,
    k: parseInt(input("knn").value, 10) || 100,
    seed: parseInt(input("seed").value, 10) || 0,
    max_side: 45,
  };
  if (state.categories.length) params.categories = state.categories;
  setStatus("computing layout...");
  const layout = await api.layout(sid, params);
  state.layout = layout;
  state.nodesByGrid = layout.grids.map(() => new Map());
  state.activeNode = layout.grids.map((g) => g.node_id);

  const area = el("grids");
  area.innerHTML = "";
  renderers.length = 0;
  hierarchyViews = [];
  layout.grids.forEach((grid, gridIndex) => {
    const box = document.createElement("div");
    box.className = "grid-box";
    const caption = document.createElement("div");
    caption.className = "grid-caption";
    caption.textContent = `${grid.split}: ${grid.n_displayed} of ${grid.n_samples} samples`;
    const canvas = document.createElement("canvas");
    canvas.width = 560;
    canvas.height = 560;
    const tree = document.createElement("div");
    tree.className = "tree";
    box.append(caption, canvas, tree);
    area.appendChild(box);

    const renderer = new GridRenderer(canvas);
    renderer.imageUrlFor = ds.has_images
      ? (sampleId) => api.imageUrl(ds.name, sampleId)
      : null;
    renderer.onSelect = async (region) => {
      if (!state.layout) return;
      setStatus("zooming...");
      try {
        const child = await api.zoom(
          sid, state.layout.layout_id, state.activeNode[gridIndex], gridIndex, region,
        );
        renderGrid(gridIndex, child);
        hierarchyViews[gridIndex].render(child.hierarchy.nodes, child.node_id);
        setStatus(`zoomed into node ${child.node_id}`);
      } catch (err) {
        setStatus(String(err));
      }
    };
    renderer.onInspect = async (sampleId) => {
      if (detailPanel) await detailPanel.show(sid, sampleId);
    };
    renderers.push(renderer);

    const hv = new HierarchyView(tree, ds.classes);
    hv.onOpen = (nodeId) => {
      const cached = state.nodesByGrid[gridIndex].get(nodeId);
      if (cached) renderGrid(gridIndex, cached);
    };
    hierarchyViews.push(hv);

    renderGrid(gridIndex, grid);
    hv.render(
      [{ node_id: grid.node_id, parent: null, category_counts: grid.category_counts, grid: [grid.m, grid.n] }],
      grid.node_id,
    );
  });
  setStatus(`layout ${layout.layout_id} (${layout.mode})`);
}

async function start(): Promise<void> {
  const datasets = await api.listDatasets();
  const picker = select("dataset");
  picker.innerHTML = "";
  for (const ds of datasets) {
    const opt = document.createElement("option");
    opt.value = ds.name;
    opt.textContent = `${ds.name} (${ds.n_samples})`;
    picker.appendChild(opt);
  }

  el("open").addEventListener("click", async () => {
    const ds = datasets.find((d) => d.name === picker.value);
    if (!ds) return;
    state.dataset = ds;
    const session = await api.createSession(ds.name);
    state.sessionId = session.session_id;
    detailPanel = new DetailPanel(el("detail"), api, ds.name, ds.has_images);
    const cats = select("categories");
    cats.innerHTML = "";
    for (const name of ds.classes) {
      const opt = document.createElement("option");
      opt.value = name;
      opt.textContent = name;
      cats.appendChild(opt);
    }
    setStatus(`session ${session.session_id} on ${ds.name}; run detection`);
  });

  el("detect").addEventListener("click", async () => {
    if (!state.sessionId) return;
    setStatus("training the ensemble...");
    const result = await api.detect(state.sessionId, parseInt(input("nmodels").value, 10) || 3);
    state.detected = true;
    setStatus(`detection done: ${result.n_classifiers} classifiers`);
  });

  el("layout").addEventListener("click", () => void runLayout());
  input("cutoff1").addEventListener("input", refreshCutoffs);
  input("cutoff2").addEventListener("input", refreshCutoffs);
  refreshCutoffs();
}

void start();
